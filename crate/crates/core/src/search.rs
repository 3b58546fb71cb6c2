//! End-to-end workflows: exhaustive checking, SAT searches with semantic
//! verification, the counterexample expansion, tournament-class sweeps and
//! Impartial Culture statistics.

use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::encoding::{build_base, tseitin_cnf, SolveOutcome, Status, Target};
use crate::error::{Error, Result};
use crate::iso::TournamentClass;
use crate::matrix::{Alternative, LinearOrdinalMarginMatrix, MatrixFile, OrdinalMarginMatrix};
use crate::methods::{sc_defeats, split_cycle_winners, ssv_winner, sv_winner};
use crate::profile::{margins, sample_impartial_culture};
use crate::solver::{self, Enumerator, SolveBudget};

pub const MAX_EXHAUSTIVE_N: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustiveReport {
    pub n: usize,
    pub matrices: u64,
    /// `(n(n-1)/2)! * 2^(n(n-1)/2)`.
    pub expected: u64,
    pub ssv_not_sc: u64,
    pub sv_differs: u64,
    pub elapsed_ms: u128,
}

/// Checks every linear ordinal margin matrix on `n` labelled alternatives.
pub fn exhaustive(n: usize) -> Result<ExhaustiveReport> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge { what: "exhaustive search", n, max: MAX_EXHAUSTIVE_N });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("no alternatives".into()));
    }
    let start = Instant::now();
    let zero = OrdinalMarginMatrix::zero(n);
    let expected = zero.linearization_count() as u64;
    let (mut matrices, mut ssv_not_sc, mut sv_differs) = (0, 0, 0);
    for m in zero.linearizations() {
        matrices += 1;
        let w = ssv_winner(&m)?.winner;
        if !split_cycle_winners(&m).contains(&w) {
            ssv_not_sc += 1;
        }
        if sv_winner(&m).map(|t| t.winner).ok() != Some(w) {
            sv_differs += 1;
        }
    }
    Ok(ExhaustiveReport { n, matrices, expected, ssv_not_sc, sv_differs, elapsed_ms: start.elapsed().as_millis() })
}

/// What a decoded model was checked to satisfy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verified {
    pub matrix: MatrixFile,
    pub ssv_winner: Alternative,
    pub sc_winners: Vec<Alternative>,
    /// Alternatives that SC-defeat the SSV winner.
    pub defeaters: Vec<Alternative>,
}

/// Re-checks a decoded model with the voting methods alone.
pub fn verify(target: Target, symmetry_breaking: bool, m: &LinearOrdinalMarginMatrix) -> Result<Verified> {
    let n = m.n();
    let fail = |msg: String| Error::VerificationFailed(msg);
    let trace = ssv_winner(m)?;
    let w = trace.winner;
    let sc = split_cycle_winners(m);
    let defeaters: Vec<_> = (0..n).filter(|&x| x != w && sc_defeats(m, x, w).defeats).collect();
    if symmetry_breaking {
        for i in 1..n {
            let prefix: Vec<_> = (0..=i).collect();
            let sub = trace.sub_election(&prefix).expect("every subset is solved");
            if sub.winner != 0 || sub.witness != Some((0, i)) {
                return Err(fail(format!("prefix {prefix:?} is not won by 1 via (1,{})", i + 1)));
            }
        }
    }
    let counterexample = |expect_winner: Option<Alternative>| -> Result<()> {
        if let Some(e) = expect_winner {
            if w != e {
                return Err(fail(format!("SSV winner is {w}, expected {e}")));
            }
        }
        if sc.contains(&w) {
            return Err(fail(format!("SSV winner {w} is a Split Cycle winner")));
        }
        Ok(())
    };
    match target {
        Target::Counterexample => counterexample(Some(0))?,
        Target::MinimalCounterexample => {
            counterexample(Some(0))?;
            if !defeaters.contains(&(n - 1)) {
                return Err(fail(format!("alternative {n} does not defeat 1")));
            }
        }
        Target::SingleScWinner { .. } => {
            counterexample(Some(0))?;
            if sc.len() != 1 {
                return Err(fail(format!("{} Split Cycle winners", sc.len())));
            }
        }
        Target::TournamentClass(t) => {
            counterexample(None)?;
            let g = m.majority_graph();
            if (0..n).any(|a| (0..n).any(|b| a != b && g.has_edge(a, b) != t.has_edge(a, b))) {
                return Err(fail("majority graph differs from the class representative".into()));
            }
        }
        Target::ReversalSymmetry => {
            let r = ssv_winner(&m.reverse())?.winner;
            if w != 0 || r != 0 {
                return Err(fail(format!("winners {w} and {r} under the order and its reversal")));
            }
        }
    }
    let matrix = MatrixFile::new(m.as_matrix());
    Ok(Verified { matrix, ssv_winner: w, sc_winners: sc, defeaters })
}

#[derive(Debug, Clone)]
pub struct ProveOptions {
    pub n: usize,
    pub target: Target,
    /// Ignored (forced off) for tournament-class targets.
    pub symmetry_breaking: bool,
    /// Keep solving with blocking clauses until this many models.
    pub enumerate: Option<usize>,
    pub budget: SolveBudget,
}

impl ProveOptions {
    pub fn new(n: usize, target: Target, budget: SolveBudget) -> Self {
        let symmetry_breaking = !matches!(target, Target::TournamentClass(_));
        ProveOptions { n, target, symmetry_breaking, enumerate: None, budget }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProveReport {
    pub n: usize,
    pub target: Target,
    pub symmetry_breaking: bool,
    pub num_vars: usize,
    pub num_clauses: usize,
    /// Outcome of the first solve.
    pub status: Status,
    /// Verified models, in the order found (at most the enumeration limit).
    pub models: Vec<Verified>,
    /// Every model was distinct as a matrix.
    pub distinct: usize,
    /// Enumeration ran until UNSAT.
    pub exhausted: bool,
    /// Enumeration stopped on the budget.
    pub budget_hit: bool,
    pub elapsed_ms: u128,
}

/// Builds the encoding, solves, decodes and verifies every model.
/// `on_model` sees each verified model as it arrives.
pub fn prove_with(opts: &ProveOptions, mut on_model: impl FnMut(&Verified)) -> Result<ProveReport> {
    let start = Instant::now();
    let mut e = build_base(opts.n)?;
    let symmetry = opts.symmetry_breaking && !matches!(opts.target, Target::TournamentClass(_));
    if symmetry {
        e.add_symmetry_breaking()?;
    }
    e.add_target(opts.target)?;
    let instance = tseitin_cnf(&e);
    let (num_vars, num_clauses) = (instance.num_vars, instance.clauses.len());
    let limit = opts.enumerate.unwrap_or(1).max(1);
    let mut en = Enumerator::new(instance, opts.budget.clone())?;
    let mut report = ProveReport {
        n: opts.n,
        target: opts.target,
        symmetry_breaking: symmetry,
        num_vars,
        num_clauses,
        status: Status::Budget,
        models: Vec::new(),
        distinct: 0,
        exhausted: false,
        budget_hit: false,
        elapsed_ms: 0,
    };
    let mut seen = HashSet::new();
    let mut first = true;
    while report.distinct < limit {
        let Some(out) = en.next_outcome() else { break };
        let SolveOutcome { status, decoded, .. } = out?;
        if first {
            report.status = status;
            first = false;
        }
        match status {
            Status::Sat => {
                let m = decoded.expect("SAT outcomes carry a matrix");
                let v = verify(opts.target, symmetry, &m)?;
                if !seen.insert(m) {
                    return Err(Error::VerificationFailed("enumeration repeated a matrix".into()));
                }
                report.distinct += 1;
                on_model(&v);
                if report.models.len() < 1_000 {
                    report.models.push(v);
                }
            }
            Status::Unsat => report.exhausted = true,
            Status::Budget => report.budget_hit = true,
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

pub fn prove(opts: &ProveOptions) -> Result<ProveReport> {
    prove_with(opts, |_| {})
}

/// Adds alternatives until there are `k`, keeping the SSV winner `a` of `m`
/// and its Split Cycle defeat.
///
/// New alternatives lose to every old alternative. From weakest to
/// strongest the new order is: edges among new alternatives, old-to-new
/// edges not from `a`, the old edges in their old order, then `(a, a_1)`,
/// ..., `(a, a_k)`.
pub fn expand(m: &LinearOrdinalMarginMatrix, k: usize) -> Result<LinearOrdinalMarginMatrix> {
    let n = m.n();
    if k < n {
        return Err(Error::InvalidArgument(format!("cannot expand {n} alternatives down to {k}")));
    }
    let a = ssv_winner(m)?.winner;
    let mut edges = Vec::with_capacity(k * (k - 1) / 2);
    for i in n..k {
        for j in i + 1..k {
            edges.push((i, j));
        }
    }
    for c in (0..n).filter(|&c| c != a) {
        for i in n..k {
            edges.push((c, i));
        }
    }
    edges.extend(m.edges_by_strength());
    edges.extend((n..k).map(|i| (a, i)));
    let out = LinearOrdinalMarginMatrix::from_ranked_edges(k, &edges)?;
    let w = ssv_winner(&out)?.winner;
    if w != a {
        return Err(Error::VerificationFailed(format!("expanded SSV winner is {w}, not {a}")));
    }
    if split_cycle_winners(&out).contains(&a) {
        return Err(Error::VerificationFailed(format!("{a} is not SC-defeated after expansion")));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassResult {
    pub index: usize,
    pub class: TournamentClass,
    pub status: Status,
    pub witness: Option<Verified>,
    pub elapsed_ms: u128,
}

pub fn class_search(index: usize, class: TournamentClass, budget: &SolveBudget) -> Result<ClassResult> {
    let opts = ProveOptions::new(class.n(), Target::TournamentClass(class), budget.clone());
    let r = prove(&opts)?;
    Ok(ClassResult { index, class, status: r.status, witness: r.models.into_iter().next(), elapsed_ms: r.elapsed_ms })
}

/// Searches each class on a pool of `threads` workers (0 = logical cores).
pub fn class_sweep(
    classes: &[(usize, TournamentClass)],
    budget: &SolveBudget,
    threads: usize,
    on_result: impl Fn(&Result<ClassResult>) + Sync,
) -> Result<Vec<Result<ClassResult>>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(pool.install(|| {
        classes
            .par_iter()
            .map(|&(i, c)| {
                let r = class_search(i, c, budget);
                on_result(&r);
                r
            })
            .collect()
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IcStats {
    pub n: usize,
    pub voters: usize,
    pub profiles: usize,
    pub seed: u64,
    pub mean_sc_winners: f64,
    /// `histogram[k]` profiles had `k` Split Cycle winners.
    pub histogram: Vec<usize>,
}

/// Split Cycle winner counts over Impartial Culture profiles; profile `i`
/// uses seed `seed + i`.
pub fn impartial_culture_stats(n: usize, voters: usize, profiles: usize, seed: u64) -> Result<IcStats> {
    if profiles == 0 {
        return Err(Error::InvalidArgument("no profiles requested".into()));
    }
    let counts: Vec<usize> = (0..profiles)
        .into_par_iter()
        .map(|i| {
            let p = sample_impartial_culture(n, voters, seed.wrapping_add(i as u64))?;
            Ok(split_cycle_winners(&margins(&p)?).len())
        })
        .collect::<Result<_>>()?;
    let mut histogram = vec![0; n + 1];
    for &c in &counts {
        histogram[c] += 1;
    }
    let mean_sc_winners = counts.iter().sum::<usize>() as f64 / profiles as f64;
    Ok(IcStats { n, voters, profiles, seed, mean_sc_winners, histogram })
}

/// Solves a single instance; re-exported for callers that build their own.
pub fn solve_once(opts: &ProveOptions) -> Result<SolveOutcome> {
    let mut e = build_base(opts.n)?;
    if opts.symmetry_breaking {
        e.add_symmetry_breaking()?;
    }
    e.add_target(opts.target)?;
    solver::solve(&tseitin_cnf(&e), &opts.budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn exhaustive_small() {
        for (n, count) in [(2, 2), (3, 48)] {
            let r = exhaustive(n).unwrap();
            assert_eq!((r.matrices, r.expected, r.ssv_not_sc, r.sv_differs), (count, count, 0, 0));
        }
        assert!(matches!(exhaustive(5), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn expand_figure_four() {
        let m = fixtures::fig4();
        assert_eq!(expand(&m, 7).unwrap(), m);
        for k in 8..=10 {
            let e = expand(&m, k).unwrap();
            assert_eq!(ssv_winner(&e).unwrap().winner, 0);
            assert!(!split_cycle_winners(&e).contains(&0));
            // old pairs keep their relative order
            let old: Vec<_> = e.edges_by_strength().into_iter().filter(|&(x, y)| x < 7 && y < 7).collect();
            assert_eq!(old, m.edges_by_strength());
        }
        assert!(matches!(expand(&fixtures::fig1(), 6), Err(Error::VerificationFailed(_))));
    }

    #[test]
    fn verification_rejects_non_counterexamples() {
        let m = fixtures::fig2();
        assert!(matches!(verify(Target::Counterexample, false, &m), Err(Error::VerificationFailed(_))));
        let v = verify(Target::Counterexample, false, &fixtures::fig4()).unwrap();
        assert_eq!(v.sc_winners, vec![1, 2, 3]);
        assert_eq!(v.defeaters, vec![3]);
    }

    #[test]
    fn prove_small_is_unsat() {
        let opts = ProveOptions::new(4, Target::MinimalCounterexample, SolveBudget::embedded());
        let r = prove(&opts).unwrap();
        assert_eq!(r.status, Status::Unsat);
        assert!(r.models.is_empty());
    }

    #[test]
    fn enumerate_three_alternative_orders() {
        // with symmetry breaking, every matrix whose SSV winner is 1 via (1,3)
        // and prefix [2] won by 1 appears exactly once
        let mut opts = ProveOptions::new(3, Target::ReversalSymmetry, SolveBudget::embedded());
        opts.enumerate = Some(100);
        let r = prove(&opts).unwrap();
        assert_eq!(r.status, Status::Unsat);
        assert!(r.exhausted);
    }

    #[test]
    fn ic_stats_are_deterministic() {
        let a = impartial_culture_stats(4, 100, 20, 5).unwrap();
        let b = impartial_culture_stats(4, 100, 20, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.histogram.iter().sum::<usize>(), 20);
        assert!(a.mean_sc_winners >= 1.0);
    }
}
