//! Isomorphism invariants by exhaustive relabelling: canonical forms of
//! margin matrices and canonical codes of tournaments.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{Alternative, LinearOrdinalMarginMatrix, OrdinalMarginMatrix};
use crate::perm::{invert, next_permutation};

pub const MAX_CANONICAL_N: usize = 9;
const MAX_TOURNAMENT_N: usize = 11;

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

impl OrdinalMarginMatrix {
    /// Least relabelling (by the row-major upper-triangle weight sequence of
    /// the normalized matrix) together with the permutation producing it:
    /// `canonical == self.relabel(&perm)`.
    pub fn canonical_form(&self) -> Result<(Vec<Alternative>, OrdinalMarginMatrix)> {
        let n = self.n();
        if n > MAX_CANONICAL_N {
            return Err(Error::TooLarge { what: "canonical form", n, max: MAX_CANONICAL_N });
        }
        let m = self.normalized();
        let pairs = upper_pairs(n);
        // sigma maps new label -> old label
        let mut sigma: Vec<usize> = (0..n).collect();
        let mut best: Option<(Vec<i64>, Vec<usize>)> = None;
        let mut key = vec![0i64; pairs.len()];
        loop {
            for (k, &(i, j)) in pairs.iter().enumerate() {
                key[k] = m.weight(sigma[i], sigma[j]);
            }
            match &best {
                Some((b, _)) if key >= *b => {}
                _ => best = Some((key.clone(), sigma.clone())),
            }
            if !next_permutation(&mut sigma) {
                break;
            }
        }
        let (_, sigma) = best.expect("at least one permutation");
        let perm = invert(&sigma);
        let canonical = m.relabel(&perm);
        Ok((perm, canonical))
    }

    pub fn is_isomorphic(&self, other: &Self) -> Result<bool> {
        Ok(self.n() == other.n() && self.canonical_form()?.1 == other.canonical_form()?.1)
    }

    pub fn tournament_class(&self) -> Result<TournamentClass> {
        let n = self.n();
        let g = self.majority_graph();
        if !g.is_tournament() {
            return Err(Error::NotTournament);
        }
        TournamentClass::canonical(n, |a, b| g.has_edge(a, b))
    }
}

impl LinearOrdinalMarginMatrix {
    pub fn canonical_form(&self) -> Result<(Vec<Alternative>, LinearOrdinalMarginMatrix)> {
        let (perm, m) = self.as_matrix().canonical_form()?;
        Ok((perm, LinearOrdinalMarginMatrix::new(m)?))
    }
}

/// A tournament up to isomorphism, identified by its least adjacency code.
///
/// Bit order follows the row-major upper triangle `(0,1), (0,2), ..., (n-2,n-1)`
/// with the first pair in the most significant position; a set bit means
/// the edge points from the smaller to the larger label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TournamentClass {
    n: usize,
    code: u64,
}

impl TournamentClass {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    fn canonical(n: usize, edge: impl Fn(usize, usize) -> bool) -> Result<Self> {
        if n > MAX_TOURNAMENT_N {
            return Err(Error::TooLarge { what: "tournament class", n, max: MAX_TOURNAMENT_N });
        }
        let pairs = upper_pairs(n);
        let mut sigma: Vec<usize> = (0..n).collect();
        let mut best = u64::MAX;
        loop {
            let mut code = 0u64;
            for &(i, j) in &pairs {
                code = code << 1 | u64::from(edge(sigma[i], sigma[j]));
            }
            best = best.min(code);
            if !next_permutation(&mut sigma) {
                break;
            }
        }
        Ok(TournamentClass { n, code: best })
    }

    /// Whether the representative has the edge `a -> b`.
    pub fn has_edge(&self, a: Alternative, b: Alternative) -> bool {
        if a == b {
            return false;
        }
        let (i, j) = (a.min(b), a.max(b));
        let idx = pair_index(self.n, i, j);
        let bit = self.code >> (self.n * (self.n - 1) / 2 - 1 - idx) & 1 == 1;
        if a < b {
            bit
        } else {
            !bit
        }
    }

    /// Every isomorphism class of tournaments on `n` vertices, sorted by code.
    pub fn all(n: usize) -> Result<Vec<TournamentClass>> {
        const MAX_ENUMERATED: usize = 8;
        if n > MAX_ENUMERATED {
            return Err(Error::TooLarge { what: "tournament enumeration", n, max: MAX_ENUMERATED });
        }
        if n <= 1 {
            return Ok(vec![TournamentClass { n, code: 0 }]);
        }
        let pairs = upper_pairs(n);
        let bits = pairs.len();
        // For each permutation, where each bit lands and whether it flips.
        let mut moves: Vec<Vec<(u32, bool)>> = Vec::new();
        let mut pi: Vec<usize> = (0..n).collect();
        loop {
            let mv = pairs
                .iter()
                .map(|&(i, j)| {
                    let (x, y) = (pi[i], pi[j]);
                    let pos = pair_index(n, x.min(y), x.max(y));
                    ((bits - 1 - pos) as u32, x > y)
                })
                .collect();
            moves.push(mv);
            if !next_permutation(&mut pi) {
                break;
            }
        }
        let total = 1usize << bits;
        let mut seen = vec![false; total];
        let mut classes = Vec::new();
        for start in 0..total {
            if seen[start] {
                continue;
            }
            let mut best = u64::MAX;
            for mv in &moves {
                let mut code = 0u64;
                for (k, &(dst, flip)) in mv.iter().enumerate() {
                    let bit = (start >> (bits - 1 - k)) & 1 == 1;
                    if bit != flip {
                        code |= 1 << dst;
                    }
                }
                seen[code as usize] = true;
                best = best.min(code);
            }
            classes.push(TournamentClass { n, code: best });
        }
        classes.sort();
        Ok(classes)
    }

    /// Parses a manifest produced by [`manifest`](Self::manifest).
    pub fn parse_manifest(text: &str) -> Result<Vec<TournamentClass>> {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let bits = l.split_whitespace().last().unwrap_or_default();
                bits.parse()
            })
            .collect()
    }

    /// One line per class: `<index> <bitstring>`.
    pub fn manifest(classes: &[TournamentClass]) -> String {
        let mut out = String::new();
        for (i, c) in classes.iter().enumerate() {
            out.push_str(&format!("{i} {c}\n"));
        }
        out
    }
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // position of (i, j), i < j, in the row-major upper triangle
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl fmt::Display for TournamentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = self.n * (self.n.saturating_sub(1)) / 2;
        for k in (0..bits).rev() {
            f.write_str(if self.code >> k & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl serde::Serialize for TournamentClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for TournamentClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s.len();
        let n = (1..=MAX_TOURNAMENT_N + 1)
            .find(|&n| n * (n - 1) / 2 == bits)
            .ok_or_else(|| Error::InvalidProfile(format!("bitstring length {bits} is not a triangle number")))?;
        let mut code = 0u64;
        for c in s.chars() {
            code = code << 1
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::InvalidProfile(format!("bad tournament bit {c:?}"))),
                };
        }
        Ok(TournamentClass { n, code })
    }
}
