//! Running SAT instances: the built-in engine or an external DIMACS solver.

pub mod cdcl;
mod external;

use std::time::{Duration, Instant};

pub use external::{solve_external, solver_command_from_env, SOLVER_ENV};

use crate::encoding::{decode_model, CnfInstance, SolveOutcome, Status};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Engine {
    Embedded,
    /// Whitespace-separated command; the CNF path is appended.
    External(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveBudget {
    pub conflicts: Option<u64>,
    pub wall: Option<Duration>,
    pub engine: Engine,
}

impl SolveBudget {
    pub fn embedded() -> Self {
        SolveBudget { conflicts: None, wall: None, engine: Engine::Embedded }
    }

    pub fn external(command: impl Into<String>) -> Self {
        SolveBudget { conflicts: None, wall: None, engine: Engine::External(command.into()) }
    }

    pub fn with_wall(mut self, wall: Duration) -> Self {
        self.wall = Some(wall);
        self
    }

    pub fn with_conflicts(mut self, conflicts: u64) -> Self {
        self.conflicts = Some(conflicts);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.conflicts == Some(0) || self.wall == Some(Duration::ZERO) {
            return Err(Error::IncompatibleModes("solver budget must be positive".into()));
        }
        if let Engine::External(cmd) = &self.engine {
            if cmd.split_whitespace().next().is_none() {
                return Err(Error::IncompatibleModes("empty solver command".into()));
            }
        }
        Ok(())
    }
}

/// Independent clause check; does not share code with either engine.
pub fn check_model(instance: &CnfInstance, values: &[bool]) -> bool {
    instance.satisfied_by(values)
}

/// Wraps a full solver assignment: checks it against every clause, decodes
/// the `s` block and drops the auxiliaries.
pub(crate) fn sat_outcome(instance: &CnfInstance, mut values: Vec<bool>) -> Result<SolveOutcome> {
    values.resize(instance.num_vars, false);
    if !check_model(instance, &values) {
        return Err(Error::VerificationFailed("solver model violates a clause".into()));
    }
    let decoded = decode_model(&values, &instance.catalog)?;
    values.truncate(instance.catalog.num_vars());
    Ok(SolveOutcome { status: Status::Sat, model: Some(values), decoded: Some(decoded) })
}

pub fn solve_embedded(instance: &CnfInstance, budget: &SolveBudget) -> Result<SolveOutcome> {
    let mut s = cdcl::Solver::new(instance.num_vars);
    for c in &instance.clauses {
        s.add_clause(c);
    }
    run_embedded(&mut s, instance, budget)
}

fn run_embedded(s: &mut cdcl::Solver, instance: &CnfInstance, budget: &SolveBudget) -> Result<SolveOutcome> {
    let limits = cdcl::Limits { conflicts: budget.conflicts, deadline: budget.wall.map(|w| Instant::now() + w) };
    match s.solve(limits) {
        Some(true) => sat_outcome(instance, s.model().to_vec()),
        Some(false) => Ok(SolveOutcome::unsat()),
        None => Ok(SolveOutcome::budget()),
    }
}

pub fn solve(instance: &CnfInstance, budget: &SolveBudget) -> Result<SolveOutcome> {
    budget.validate()?;
    match &budget.engine {
        Engine::Embedded => solve_embedded(instance, budget),
        Engine::External(cmd) => solve_external(instance, cmd, budget.wall),
    }
}

/// Repeated solving with a blocking clause after each model.
pub struct Enumerator {
    instance: CnfInstance,
    budget: SolveBudget,
    embedded: Option<cdcl::Solver>,
    done: bool,
}

impl Enumerator {
    pub fn new(instance: CnfInstance, budget: SolveBudget) -> Result<Self> {
        budget.validate()?;
        let embedded = (budget.engine == Engine::Embedded).then(|| {
            let mut s = cdcl::Solver::new(instance.num_vars);
            for c in &instance.clauses {
                s.add_clause(c);
            }
            s
        });
        Ok(Enumerator { instance, budget, embedded, done: false })
    }

    /// The next model, or the final UNSAT/BUDGET outcome (after which
    /// enumeration stops and `None` is returned).
    pub fn next_outcome(&mut self) -> Option<Result<SolveOutcome>> {
        if self.done {
            return None;
        }
        let out = match &mut self.embedded {
            Some(s) => run_embedded(s, &self.instance, &self.budget),
            None => solve(&self.instance, &self.budget),
        };
        match &out {
            Ok(o) if o.status == Status::Sat => {
                let block = crate::encoding::blocking_clause(o.model.as_ref().unwrap(), &self.instance.catalog);
                if let Some(s) = &mut self.embedded {
                    s.add_clause(&block);
                }
                self.instance.add_clause(block);
            }
            _ => self.done = true,
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{build_base, tseitin_cnf, Target};
    use crate::matrix::OrdinalMarginMatrix;
    use crate::methods::three_alt_oracle;

    fn instance(n: usize, symmetry: bool, target: Option<Target>) -> CnfInstance {
        let mut e = build_base(n).unwrap();
        if symmetry {
            e.add_symmetry_breaking().unwrap();
        }
        if let Some(t) = target {
            e.add_target(t).unwrap();
        }
        tseitin_cnf(&e)
    }

    #[test]
    fn two_alternatives_have_a_winner() {
        let out = solve(&instance(2, false, None), &SolveBudget::embedded()).unwrap();
        assert_eq!(out.status, Status::Sat);
        let m = out.model.unwrap();
        let cat = build_base(2).unwrap().catalog().clone();
        let winners: Vec<_> = (0..2).filter(|&a| m[cat.ssv(3, a) as usize - 1]).collect();
        assert_eq!(winners.len(), 1);
    }

    #[test]
    fn small_counterexample_instances_are_unsat() {
        for n in 3..=4 {
            let out = solve(&instance(n, false, Some(Target::Counterexample)), &SolveBudget::embedded()).unwrap();
            assert_eq!(out.status, Status::Unsat, "n={n}");
            let out = solve(&instance(n, true, Some(Target::Counterexample)), &SolveBudget::embedded()).unwrap();
            assert_eq!(out.status, Status::Unsat, "n={n} with symmetry breaking");
        }
    }

    #[test]
    fn three_alternative_models_match_the_oracle() {
        let mut en = Enumerator::new(instance(3, false, None), SolveBudget::embedded()).unwrap();
        let mut count = 0;
        while let Some(out) = en.next_outcome() {
            let out = out.unwrap();
            if out.status != Status::Sat {
                assert_eq!(out.status, Status::Unsat);
                break;
            }
            count += 1;
            let m = out.decoded.unwrap();
            let model = out.model.unwrap();
            let cat = build_base(3).unwrap().catalog().clone();
            let w = (0..3).find(|&a| model[cat.ssv(7, a) as usize - 1]).unwrap();
            assert_eq!(w, three_alt_oracle(&m).unwrap());
        }
        assert_eq!(count as u128, OrdinalMarginMatrix::zero(3).linearization_count());
    }

    #[test]
    fn budget_is_reported() {
        let out = solve(&instance(4, false, Some(Target::Counterexample)), &SolveBudget::embedded().with_conflicts(1))
            .unwrap();
        assert!(matches!(out.status, Status::Budget | Status::Unsat));
        assert!(out.model.is_none());
        assert!(SolveBudget::embedded().with_conflicts(0).validate().is_err());
    }
}
