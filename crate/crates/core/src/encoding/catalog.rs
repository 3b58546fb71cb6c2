//! Dense variable numbering for the encoding.
//!
//! Blocks are laid out in a fixed order: `s`, then `SSV` by subset bitmask,
//! then `r`, then `SC`, then the optional reversed `SSV` family. Tseitin
//! auxiliaries are numbered after all of these.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::matrix::Alternative;
use crate::methods::Mask;

/// DIMACS variable index, starting at 1.
pub type Var = u32;
/// DIMACS literal: `v` or `-v`.
pub type Lit = i32;

pub type Pair = (Alternative, Alternative);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarCatalog {
    n: usize,
    pairs: Vec<Pair>,
    pair_index: Vec<usize>,
    s: Vec<Var>,
    s_count: usize,
    ssv: Vec<Var>,
    r: Vec<Var>,
    sc: Vec<Var>,
    ssv_rev: Option<Vec<Var>>,
    next: Var,
}

impl VarCatalog {
    pub fn new(n: usize) -> Self {
        let pairs: Vec<Pair> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        let p = pairs.len();
        let mut pair_index = vec![usize::MAX; n * n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            pair_index[a * n + b] = i;
        }
        let mut next: Var = 1;

        // (a,b),(c,d) and (d,c),(b,a) share one variable
        let mut s = vec![0; p * p];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for (j, &(c, d)) in pairs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (mi, mj) = (pair_index[d * n + c], pair_index[b * n + a]);
                if (mi, mj) < (i, j) {
                    s[i * p + j] = s[mi * p + mj];
                } else {
                    s[i * p + j] = next;
                    next += 1;
                }
            }
        }
        let s_count = (next - 1) as usize;

        let ssv = Self::ssv_block(n, &mut next);

        let mut r = vec![0; p * n];
        for slot in r.iter_mut() {
            *slot = next;
            next += 1;
        }
        let sc = (0..n)
            .map(|_| {
                next += 1;
                next - 1
            })
            .collect();
        VarCatalog { n, pairs, pair_index, s, s_count, ssv, r, sc, ssv_rev: None, next }
    }

    fn ssv_block(n: usize, next: &mut Var) -> Vec<Var> {
        let mut ssv = vec![0; (1usize << n) * n];
        for mask in 1..1usize << n {
            for a in 0..n {
                if mask >> a & 1 == 1 {
                    ssv[mask * n + a] = *next;
                    *next += 1;
                }
            }
        }
        ssv
    }

    /// Allocates the second SSV family used for the reversed order.
    pub(crate) fn add_reversed_ssv(&mut self) {
        if self.ssv_rev.is_none() {
            let mut next = self.next;
            self.ssv_rev = Some(Self::ssv_block(self.n, &mut next));
            self.next = next;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ordered pairs `(a, b)`, `a != b`, in lexicographic order.
    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// Number of catalog (non-auxiliary) variables.
    pub fn num_vars(&self) -> usize {
        (self.next - 1) as usize
    }

    pub fn num_s_vars(&self) -> usize {
        self.s_count
    }

    fn pidx(&self, (a, b): Pair) -> usize {
        let i = self.pair_index[a * self.n + b];
        assert!(a != b && i != usize::MAX, "({a},{b}) is not an ordered pair of distinct alternatives");
        i
    }

    /// Literal for `(a,b) > (c,d)`.
    pub fn s(&self, p: Pair, q: Pair) -> Lit {
        let (i, j) = (self.pidx(p), self.pidx(q));
        assert!(i != j, "s-variables compare distinct pairs");
        self.s[i * self.pairs.len() + j] as Lit
    }

    /// Literal for "`a` is the SSV winner of the subset `mask`".
    pub fn ssv(&self, mask: Mask, a: Alternative) -> Lit {
        Self::ssv_in(&self.ssv, self.n, mask, a)
    }

    /// Same as [`ssv`](Self::ssv) for the reversed order; panics if that
    /// family was not allocated.
    pub fn ssv_rev(&self, mask: Mask, a: Alternative) -> Lit {
        Self::ssv_in(self.ssv_rev.as_ref().expect("reversed SSV family not allocated"), self.n, mask, a)
    }

    pub fn has_reversed_ssv(&self) -> bool {
        self.ssv_rev.is_some()
    }

    fn ssv_in(block: &[Var], n: usize, mask: Mask, a: Alternative) -> Lit {
        let v = block[mask as usize * n + a];
        assert!(v != 0, "alternative {a} is not in subset {mask:#b}");
        v as Lit
    }

    /// Literal for "`c` is reachable from `b` using edges stronger than `(a,b)`".
    pub fn r(&self, p: Pair, c: Alternative) -> Lit {
        self.r[self.pidx(p) * self.n + c] as Lit
    }

    pub fn sc(&self, b: Alternative) -> Lit {
        self.sc[b] as Lit
    }

    /// Every `(p, q, var)` with `p != q`; each shared variable appears twice.
    pub fn s_entries(&self) -> impl Iterator<Item = (Pair, Pair, Var)> + '_ {
        let p = self.pairs.len();
        (0..p).flat_map(move |i| {
            (0..p).filter(move |&j| j != i).map(move |j| (self.pairs[i], self.pairs[j], self.s[i * p + j]))
        })
    }

    /// The variable map as JSON-friendly string keys (alternatives 1-based).
    pub fn var_map(&self) -> VarMap {
        let pair = |(a, b): Pair| format!("{},{}", a + 1, b + 1);
        let subset = |mask: usize| {
            let members: Vec<_> = (0..self.n).filter(|&a| mask >> a & 1 == 1).map(|a| (a + 1).to_string()).collect();
            format!("{{{}}}", members.join(","))
        };
        let ssv_map = |block: &[Var]| {
            let mut m = BTreeMap::new();
            for mask in 1..1usize << self.n {
                for a in 0..self.n {
                    if mask >> a & 1 == 1 {
                        m.insert(format!("{}:{}", subset(mask), a + 1), block[mask * self.n + a]);
                    }
                }
            }
            m
        };
        VarMap {
            s: self.s_entries().map(|(p, q, v)| (format!("{}>{}", pair(p), pair(q)), v)).collect(),
            ssv: ssv_map(&self.ssv),
            r: self
                .pairs
                .iter()
                .flat_map(|&p| (0..self.n).map(move |c| (p, c)))
                .map(|(p, c)| (format!("{}:{}", pair(p), c + 1), self.r(p, c) as Var))
                .collect(),
            sc: (0..self.n).map(|b| ((b + 1).to_string(), self.sc[b])).collect(),
            ssv_rev: self.ssv_rev.as_deref().map(ssv_map),
        }
    }
}

/// Sidecar map from readable variable names to DIMACS indices.
#[derive(Debug, Clone, Serialize)]
pub struct VarMap {
    pub s: BTreeMap<String, Var>,
    pub ssv: BTreeMap<String, Var>,
    pub r: BTreeMap<String, Var>,
    pub sc: BTreeMap<String, Var>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ssv_rev: Option<BTreeMap<String, Var>>,
}
