//! Propositional encoding of "the SSV winner of a linear ordinal margin
//! matrix is not a Split Cycle winner", plus related search targets.
//!
//! Variables (alternatives are 0-based here):
//! - `s[(a,b),(c,d)]`: `(a,b)` is stronger than `(c,d)`;
//! - `SSV[V,a]`: `a` is the SSV winner of the restriction to `V`;
//! - `r[(a,b),c]`: `c` is reachable from `b` over majority edges stronger
//!   than `(a,b)` (only the "if reachable then true" direction is enforced);
//! - `SC[b]`: forced true when nothing defeats `b` (again one direction).
//!
//! Because `r` and `SC` are only bounded from one side, decoding reads the
//! `s` block alone and every claim is re-checked by [`crate::methods`].

pub mod catalog;
pub mod dimacs;
pub mod formula;

use serde::Serialize;

pub use catalog::{Lit, Pair, Var, VarCatalog, VarMap};
pub use formula::{satisfies, tseitin, Cnf, Definition, Formula, Gate};

use crate::error::{Error, Result};
use crate::iso::TournamentClass;
use crate::matrix::{Alternative, LinearOrdinalMarginMatrix, OrdinalMarginMatrix};
use crate::methods::Mask;

/// Largest `n` accepted by [`build_base`]; transitivity alone is
/// `O(n^6)` clauses.
pub const MAX_ENCODING_N: usize = 8;

/// What the solver is asked to find, on top of the base constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Alternative 1 wins under SSV and is SC-defeated.
    Counterexample,
    /// As above, and 1 is defeated by `n`, which is itself undefeated.
    /// Requires symmetry breaking.
    MinimalCounterexample,
    /// A counterexample whose Split Cycle winner is unique.
    SingleScWinner { minimal: bool },
    /// A counterexample whose majority graph is the given tournament, with
    /// any alternative as the SSV winner. Excludes symmetry breaking.
    TournamentClass(TournamentClass),
    /// Alternative 1 wins under SSV in the matrix and in its reversal.
    ReversalSymmetry,
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::Counterexample => "counterexample",
            Target::MinimalCounterexample => "minimal-counterexample",
            Target::SingleScWinner { .. } => "single-sc-winner",
            Target::TournamentClass(_) => "tournament-class",
            Target::ReversalSymmetry => "reversal-symmetry",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ModeTag {
    pub symmetry_breaking: bool,
    pub target: Option<Target>,
}

/// Constraint list over catalog variables, before the CNF transformation.
#[derive(Debug, Clone)]
pub struct Encoding {
    catalog: VarCatalog,
    constraints: Vec<Formula>,
    mode: ModeTag,
}

fn lit(l: Lit) -> Formula {
    Formula::Lit(l)
}

fn members(mask: usize, n: usize) -> impl Iterator<Item = Alternative> + Clone {
    (0..n).filter(move |&a| mask >> a & 1 == 1)
}

/// Ordered pairs of distinct members of `mask`.
fn pairs_in(mask: usize, n: usize) -> impl Iterator<Item = Pair> + Clone {
    members(mask, n).flat_map(move |a| members(mask, n).filter(move |&b| b != a).map(move |b| (a, b)))
}

pub fn build_base(n: usize) -> Result<Encoding> {
    build_base_with_limit(n, MAX_ENCODING_N)
}

pub fn build_base_with_limit(n: usize, max_n: usize) -> Result<Encoding> {
    if n > max_n {
        return Err(Error::TooLarge { what: "SAT encoding", n, max: max_n });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("encoding needs at least 2 alternatives, got {n}")));
    }
    let cat = VarCatalog::new(n);
    let mut f = Vec::new();
    let pairs = cat.pairs().to_vec();

    // linear order on pairs; skew-symmetry is built into the numbering
    for &p in &pairs {
        for &q in &pairs {
            if p == q {
                continue;
            }
            f.push(Formula::clause([-cat.s(p, q), -cat.s(q, p)]));
            f.push(Formula::clause([cat.s(q, p), cat.s(p, q)]));
            for &r in &pairs {
                if r != p && r != q {
                    f.push(Formula::clause([-cat.s(p, q), -cat.s(q, r), cat.s(p, r)]));
                }
            }
        }
    }

    ssv_family(n, &mut f, |mask, a| cat.ssv(mask, a), |p, q| cat.s(p, q));

    // reachability over edges stronger than (a,b)
    for &(a, b) in &pairs {
        f.push(lit(cat.r((a, b), b)));
        for &(c, d) in &pairs {
            if (c, d) != (a, b) {
                f.push(Formula::clause([
                    -cat.r((a, b), c),
                    -cat.s((c, d), (d, c)),
                    -cat.s((c, d), (a, b)),
                    cat.r((a, b), d),
                ]));
            }
        }
    }
    for b in 0..n {
        let guarded = (0..n)
            .filter(|&a| a != b)
            .map(|a| Formula::implies(lit(cat.s((a, b), (b, a))), lit(cat.r((a, b), a))))
            .collect();
        f.push(Formula::implies(Formula::And(guarded), lit(cat.sc(b))));
    }

    Ok(Encoding { catalog: cat, constraints: f, mode: ModeTag::default() })
}

/// Exactly-one winner per subset plus the SSV recursion, for the order
/// given by `s`.
fn ssv_family(
    n: usize,
    f: &mut Vec<Formula>,
    ssv: impl Fn(Mask, Alternative) -> Lit,
    s: impl Fn(Pair, Pair) -> Lit,
) {
    for mask in 1..1usize << n {
        let m = mask as Mask;
        f.push(Formula::clause(members(mask, n).map(|a| ssv(m, a))));
        for (a, b) in pairs_in(mask, n) {
            if a < b {
                f.push(Formula::clause([-ssv(m, a), -ssv(m, b)]));
            }
        }
        for (a, b) in pairs_in(mask, n) {
            let mut premise = vec![lit(ssv(m & !(1 << b), a))];
            for (c, d) in pairs_in(mask, n) {
                if (c, d) != (a, b) {
                    premise.push(Formula::implies(lit(ssv(m & !(1 << d), c)), lit(s((a, b), (c, d)))));
                }
            }
            f.push(Formula::implies(Formula::And(premise), lit(ssv(m, a))));
        }
    }
}

impl Encoding {
    pub fn n(&self) -> usize {
        self.catalog.n()
    }

    pub fn catalog(&self) -> &VarCatalog {
        &self.catalog
    }

    pub fn constraints(&self) -> &[Formula] {
        &self.constraints
    }

    pub fn mode(&self) -> ModeTag {
        self.mode
    }

    /// Forces a canonical labelling: 1 wins every prefix `[i]`, witnessed by
    /// the pair `(1, i)`.
    pub fn add_symmetry_breaking(&mut self) -> Result<()> {
        if let Some(Target::TournamentClass(_)) = self.mode.target {
            return Err(Error::IncompatibleModes("tournament-class search fixes labels; no symmetry breaking".into()));
        }
        if self.mode.symmetry_breaking {
            return Ok(());
        }
        let cat = &self.catalog;
        let n = cat.n();
        for i in 1..n {
            let prefix = (1usize << (i + 1)) - 1;
            self.constraints.push(lit(cat.ssv(((1 << i) - 1) as Mask, 0)));
            for (c, d) in pairs_in(prefix, n) {
                if (c, d) != (0, i) {
                    self.constraints.push(Formula::clause([
                        -cat.ssv((prefix & !(1 << d)) as Mask, c),
                        cat.s((0, i), (c, d)),
                    ]));
                }
            }
        }
        self.mode.symmetry_breaking = true;
        Ok(())
    }

    pub fn add_target(&mut self, target: Target) -> Result<()> {
        if let Some(t) = self.mode.target {
            return Err(Error::IncompatibleModes(format!("target {} already set", t.name())));
        }
        let n = self.n();
        let full = ((1usize << n) - 1) as Mask;
        let needs_symmetry = matches!(target, Target::MinimalCounterexample | Target::SingleScWinner { minimal: true });
        if needs_symmetry && !self.mode.symmetry_breaking {
            return Err(Error::IncompatibleModes(format!(
                "{} relies on the canonical labelling; add symmetry breaking first",
                target.name()
            )));
        }
        let mut f = Vec::new();
        let cat = &mut self.catalog;
        let counterexample = |cat: &VarCatalog, f: &mut Vec<Formula>| {
            f.push(lit(cat.ssv(full, 0)));
            f.push(lit(-cat.sc(0)));
        };
        let minimal = |cat: &VarCatalog, f: &mut Vec<Formula>| {
            let last = n - 1;
            f.push(lit(cat.sc(last)));
            f.push(lit(cat.s((last, 0), (0, last))));
            f.push(lit(-cat.r((last, 0), last)));
        };
        match target {
            Target::Counterexample => counterexample(cat, &mut f),
            Target::MinimalCounterexample => {
                counterexample(cat, &mut f);
                minimal(cat, &mut f);
            }
            Target::SingleScWinner { minimal: with_minimal } => {
                if with_minimal && n >= 8 {
                    return Err(Error::IncompatibleModes(
                        "single-sc-winner from 8 alternatives admits smaller counterexamples; drop the minimal clauses"
                            .into(),
                    ));
                }
                counterexample(cat, &mut f);
                if with_minimal {
                    minimal(cat, &mut f);
                }
                for a in 0..n {
                    for b in a + 1..n {
                        f.push(Formula::clause([-cat.sc(a), -cat.sc(b)]));
                    }
                }
            }
            Target::TournamentClass(t) => {
                if self.mode.symmetry_breaking {
                    return Err(Error::IncompatibleModes(
                        "tournament-class search fixes labels; no symmetry breaking".into(),
                    ));
                }
                if t.n() != n {
                    return Err(Error::IncompatibleModes(format!("class on {} vertices for n = {n}", t.n())));
                }
                for a in 0..n {
                    for b in 0..n {
                        if a != b && t.has_edge(a, b) {
                            f.push(lit(cat.s((a, b), (b, a))));
                        }
                    }
                }
                f.push(Formula::Or(
                    (0..n).map(|a| Formula::And(vec![lit(cat.ssv(full, a)), lit(-cat.sc(a))])).collect(),
                ));
            }
            Target::ReversalSymmetry => {
                cat.add_reversed_ssv();
                let cat = &*cat;
                // (a,b) >' (c,d) iff (c,d) > (a,b)
                ssv_family(n, &mut f, |m, a| cat.ssv_rev(m, a), |p, q| cat.s(q, p));
                f.push(lit(cat.ssv(full, 0)));
                f.push(lit(cat.ssv_rev(full, 0)));
            }
        }
        self.constraints.extend(f);
        self.mode.target = Some(target);
        Ok(())
    }

    /// Direct evaluation of every constraint; `values[v - 1]` is variable `v`.
    pub fn holds(&self, values: &[bool]) -> bool {
        let value = |v: Var| values[v as usize - 1];
        self.constraints.iter().all(|f| f.eval(&value))
    }

    /// Catalog assignment describing `m`: `s` from its order, `SSV` from
    /// sub-election winners, `r` from exact reachability and `SC` from the
    /// winner set. It satisfies the base constraints.
    pub fn assignment_for(&self, m: &LinearOrdinalMarginMatrix) -> Vec<bool> {
        let cat = &self.catalog;
        let n = cat.n();
        assert_eq!(m.n(), n);
        let mut values = vec![false; cat.num_vars()];
        let mut set = |l: Lit, v: bool| values[l.unsigned_abs() as usize - 1] = v == (l > 0);
        for (p, q, _) in cat.s_entries() {
            set(cat.s(p, q), m.stronger(p, q));
        }
        let trace = crate::methods::ssv_winner(m).expect("linear matrices have an SSV winner");
        let rev = m.reverse();
        let rev_trace = cat.has_reversed_ssv().then(|| crate::methods::ssv_winner(&rev).expect("linear"));
        for mask in 1..1usize << n {
            let keep: Vec<_> = members(mask, n).collect();
            let w = trace.sub_election(&keep).expect("every subset has a winner").winner;
            for &a in &keep {
                set(cat.ssv(mask as Mask, a), a == w);
            }
            if let Some(t) = &rev_trace {
                let w = t.sub_election(&keep).expect("every subset has a winner").winner;
                for &a in &keep {
                    set(cat.ssv_rev(mask as Mask, a), a == w);
                }
            }
        }
        for &(a, b) in cat.pairs() {
            let mut seen = vec![false; n];
            seen[b] = true;
            let mut stack = vec![b];
            while let Some(x) = stack.pop() {
                for y in 0..n {
                    if !seen[y] && m.weight(x, y) > 0 && m.stronger((x, y), (a, b)) {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            for (c, &r) in seen.iter().enumerate() {
                set(cat.r((a, b), c), r);
            }
        }
        let winners = crate::methods::split_cycle_winners(m);
        for b in 0..n {
            set(cat.sc(b), winners.contains(&b));
        }
        values
    }
}

/// Clause set handed to a solver.
#[derive(Debug, Clone)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
    pub definitions: Vec<Definition>,
    pub catalog: VarCatalog,
    pub mode: ModeTag,
}

pub fn tseitin_cnf(e: &Encoding) -> CnfInstance {
    let cnf = tseitin(e.catalog.num_vars(), &e.constraints);
    CnfInstance {
        num_vars: cnf.num_vars,
        clauses: cnf.clauses,
        definitions: cnf.definitions,
        catalog: e.catalog.clone(),
        mode: e.mode,
    }
}

impl CnfInstance {
    pub fn emit_dimacs(&self) -> String {
        dimacs::write_cnf(self.num_vars, &self.clauses)
    }

    /// Appends a clause (for example a blocking clause).
    pub fn add_clause(&mut self, clause: Vec<Lit>) {
        assert!(!clause.is_empty(), "empty clause");
        assert!(clause.iter().all(|l| *l != 0 && l.unsigned_abs() as usize <= self.num_vars));
        self.clauses.push(clause);
    }

    /// Extends a catalog assignment with auxiliary values from their definitions.
    pub fn extend_assignment(&self, base: &[bool]) -> Vec<bool> {
        Cnf { num_vars: self.num_vars, clauses: Vec::new(), definitions: self.definitions.clone() }
            .extend_assignment(base)
    }

    pub fn satisfied_by(&self, values: &[bool]) -> bool {
        values.len() >= self.num_vars && satisfies(&self.clauses, values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Sat,
    Unsat,
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: Status,
    /// Values of the catalog variables (auxiliaries dropped).
    pub model: Option<Vec<bool>>,
    pub decoded: Option<LinearOrdinalMarginMatrix>,
}

impl SolveOutcome {
    pub fn unsat() -> Self {
        SolveOutcome { status: Status::Unsat, model: None, decoded: None }
    }

    pub fn budget() -> Self {
        SolveOutcome { status: Status::Budget, model: None, decoded: None }
    }
}

/// Parses standard solver output for `instance`, decoding any model.
pub fn parse_solver_output(text: &str, exit_code: Option<i32>, instance: &CnfInstance) -> Result<SolveOutcome> {
    let (status, values) = dimacs::parse_solution(text, exit_code, instance.num_vars)?;
    match values {
        None => Ok(SolveOutcome { status, model: None, decoded: None }),
        Some(mut v) => {
            let decoded = decode_model(&v, &instance.catalog)?;
            v.truncate(instance.catalog.num_vars());
            Ok(SolveOutcome { status, model: Some(v), decoded: Some(decoded) })
        }
    }
}

/// The matrix whose pair order is given by the `s` values; nothing else
/// in the assignment is read.
pub fn decode_model(values: &[bool], catalog: &VarCatalog) -> Result<LinearOrdinalMarginMatrix> {
    let pairs = catalog.pairs();
    let p = pairs.len();
    let n = catalog.n();
    if values.len() < catalog.num_s_vars() {
        return Err(Error::NotLinearDecoded("assignment does not cover the s-variables".into()));
    }
    let beats = |i: usize, j: usize| {
        let l = catalog.s(pairs[i], pairs[j]);
        values[l.unsigned_abs() as usize - 1] == (l > 0)
    };
    let mut score = vec![0usize; p];
    for i in 0..p {
        for j in 0..p {
            if i != j {
                if beats(i, j) == beats(j, i) {
                    return Err(Error::NotLinearDecoded(format!(
                        "pairs {:?} and {:?} are not strictly comparable",
                        pairs[i], pairs[j]
                    )));
                }
                score[i] += usize::from(beats(i, j));
            }
        }
    }
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by_key(|&i| score[i]);
    if order.iter().enumerate().any(|(k, &i)| score[i] != k) {
        return Err(Error::NotLinearDecoded("the pair order has a cycle".into()));
    }
    let mut w = vec![0i64; n * n];
    let mut rank = 0;
    for &i in &order {
        let (a, b) = pairs[i];
        if beats(i, catalog.pairs().iter().position(|&q| q == (b, a)).expect("reverse pair")) {
            rank += 1;
            w[a * n + b] = 2 * rank;
            w[b * n + a] = -2 * rank;
        }
    }
    let m = OrdinalMarginMatrix::from_flat(n, w)
        .map_err(|e| Error::NotLinearDecoded(format!("inconsistent weights: {e}")))?;
    for i in 0..p {
        for j in 0..p {
            if i != j && m.stronger(pairs[i], pairs[j]) != beats(i, j) {
                return Err(Error::NotLinearDecoded(format!(
                    "weights disagree with the assignment on {:?} vs {:?}",
                    pairs[i], pairs[j]
                )));
            }
        }
    }
    LinearOrdinalMarginMatrix::new(m).map_err(|e| Error::NotLinearDecoded(e.to_string()))
}

/// Clause excluding exactly this assignment of the `s` block.
pub fn blocking_clause(model: &[bool], catalog: &VarCatalog) -> Vec<Lit> {
    (1..=catalog.num_s_vars())
        .map(|v| if model[v - 1] { -(v as Lit) } else { v as Lit })
        .collect()
}
