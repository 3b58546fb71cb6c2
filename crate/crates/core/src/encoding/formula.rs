//! Propositional formulas over catalog literals and their Tseitin CNF.

use std::collections::{HashMap, HashSet};

use super::catalog::{Lit, Var};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Lit(Lit),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn lit(l: Lit) -> Self {
        Formula::Lit(l)
    }

    pub fn negate(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn clause(lits: impl IntoIterator<Item = Lit>) -> Self {
        Formula::Or(lits.into_iter().map(Formula::Lit).collect())
    }

    /// Truth value under `value(var)`.
    pub fn eval(&self, value: &impl Fn(Var) -> bool) -> bool {
        match self {
            Formula::Lit(l) => value(l.unsigned_abs()) == (*l > 0),
            Formula::Not(f) => !f.eval(value),
            Formula::And(fs) => fs.iter().all(|f| f.eval(value)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval(value)),
            Formula::Implies(a, b) => !a.eval(value) || b.eval(value),
        }
    }

    fn max_var(&self) -> Var {
        match self {
            Formula::Lit(l) => l.unsigned_abs(),
            Formula::Not(f) => f.max_var(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::max_var).max().unwrap_or(0),
            Formula::Implies(a, b) => a.max_var().max(b.max_var()),
        }
    }
}

/// Negation normal form: only literals, `And`, `Or`.
#[derive(Debug, Clone)]
enum Nnf {
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn nnf(f: &Formula, positive: bool) -> Nnf {
    match (f, positive) {
        (Formula::Lit(l), true) => Nnf::Lit(*l),
        (Formula::Lit(l), false) => Nnf::Lit(-l),
        (Formula::Not(g), p) => nnf(g, !p),
        (Formula::And(fs), true) | (Formula::Or(fs), false) => Nnf::And(fs.iter().map(|g| nnf(g, positive)).collect()),
        (Formula::Or(fs), true) | (Formula::And(fs), false) => Nnf::Or(fs.iter().map(|g| nnf(g, positive)).collect()),
        (Formula::Implies(a, b), true) => Nnf::Or(vec![nnf(a, false), nnf(b, true)]),
        (Formula::Implies(a, b), false) => Nnf::And(vec![nnf(a, true), nnf(b, false)]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    And,
    Or,
}

/// `var <-> gate(inputs)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub var: Var,
    pub gate: Gate,
    pub inputs: Vec<Lit>,
}

/// Clause set produced from a list of top-level constraints.
#[derive(Debug, Clone, Default)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
    /// Auxiliary definitions, in creation order (inputs before outputs).
    pub definitions: Vec<Definition>,
}

impl Cnf {
    pub fn num_aux(&self) -> usize {
        self.definitions.len()
    }

    /// Extends an assignment of the first `base` variables to the
    /// auxiliaries by evaluating their definitions. `values[v - 1]` is `v`.
    pub fn extend_assignment(&self, base: &[bool]) -> Vec<bool> {
        let mut full = base.to_vec();
        full.resize(self.num_vars, false);
        for d in &self.definitions {
            let val = |l: &Lit| full[l.unsigned_abs() as usize - 1] == (*l > 0);
            full[d.var as usize - 1] = match d.gate {
                Gate::And => d.inputs.iter().all(val),
                Gate::Or => d.inputs.iter().any(val),
            };
        }
        full
    }
}

/// Whether every clause has a true literal.
pub fn satisfies(clauses: &[Vec<Lit>], values: &[bool]) -> bool {
    clauses.iter().all(|c| c.iter().any(|&l| values.get(l.unsigned_abs() as usize - 1) == Some(&(l > 0))))
}

struct Tseitin {
    next: Var,
    clauses: Vec<Vec<Lit>>,
    seen: HashSet<Vec<Lit>>,
    gates: HashMap<(Gate, Vec<Lit>), Lit>,
    definitions: Vec<Definition>,
}

impl Tseitin {
    fn emit(&mut self, mut clause: Vec<Lit>) {
        clause.sort_unstable_by_key(|l| (l.unsigned_abs(), *l < 0));
        clause.dedup();
        if clause.windows(2).any(|w| w[0] == -w[1]) {
            return;
        }
        assert!(!clause.is_empty(), "constraint reduced to the empty clause");
        if self.seen.insert(clause.clone()) {
            self.clauses.push(clause);
        }
    }

    fn top(&mut self, f: Nnf) {
        match f {
            Nnf::And(fs) => fs.into_iter().for_each(|g| self.top(g)),
            other => {
                let mut disjuncts = Vec::new();
                flatten_or(other, &mut disjuncts);
                let clause = disjuncts.into_iter().map(|g| self.define(g)).collect();
                self.emit(clause);
            }
        }
    }

    /// A literal equivalent to `f`.
    fn define(&mut self, f: Nnf) -> Lit {
        let (gate, children) = match f {
            Nnf::Lit(l) => return l,
            Nnf::And(fs) if fs.len() == 1 => return self.define(fs.into_iter().next().unwrap()),
            Nnf::Or(fs) if fs.len() == 1 => return self.define(fs.into_iter().next().unwrap()),
            Nnf::And(fs) => (Gate::And, fs),
            Nnf::Or(fs) => (Gate::Or, fs),
        };
        let mut inputs: Vec<Lit> = children.into_iter().map(|g| self.define(g)).collect();
        inputs.sort_unstable();
        inputs.dedup();
        if let Some(&t) = self.gates.get(&(gate, inputs.clone())) {
            return t;
        }
        let t = self.next as Lit;
        self.next += 1;
        match gate {
            Gate::And => {
                for &x in &inputs {
                    self.emit(vec![-t, x]);
                }
                self.emit(std::iter::once(t).chain(inputs.iter().map(|x| -x)).collect());
            }
            Gate::Or => {
                for &x in &inputs {
                    self.emit(vec![t, -x]);
                }
                self.emit(std::iter::once(-t).chain(inputs.iter().copied()).collect());
            }
        }
        self.gates.insert((gate, inputs.clone()), t);
        self.definitions.push(Definition { var: t as Var, gate, inputs });
        t
    }
}

fn flatten_or(f: Nnf, out: &mut Vec<Nnf>) {
    match f {
        Nnf::Or(fs) => fs.into_iter().for_each(|g| flatten_or(g, out)),
        other => out.push(other),
    }
}

/// Tseitin transformation of the conjunction of `constraints`.
///
/// Top-level conjunctions are split and top-level disjunctions become
/// clauses directly; every other compound subformula gets an auxiliary
/// variable (numbered from `base_vars + 1`) defined by full equivalence.
/// Structurally identical gates share one auxiliary.
pub fn tseitin(base_vars: usize, constraints: &[Formula]) -> Cnf {
    let max = constraints.iter().map(Formula::max_var).max().unwrap_or(0) as usize;
    assert!(max <= base_vars, "constraint mentions variable {max} beyond {base_vars}");
    let mut t = Tseitin {
        next: base_vars as Var + 1,
        clauses: Vec::new(),
        seen: HashSet::new(),
        gates: HashMap::new(),
        definitions: Vec::new(),
    };
    for f in constraints {
        t.top(nnf(f, true));
    }
    Cnf { num_vars: (t.next - 1) as usize, clauses: t.clauses, definitions: t.definitions }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assignments(vars: usize) -> impl Iterator<Item = Vec<bool>> {
        (0..1u32 << vars).map(move |m| (0..vars).map(|i| m >> i & 1 == 1).collect())
    }

    #[test]
    fn clause_passes_through() {
        let cnf = tseitin(2, &[Formula::clause([1, 2])]);
        assert_eq!(cnf.clauses, vec![vec![1, 2]]);
        assert_eq!(cnf.num_aux(), 0);
    }

    #[test]
    fn implication_truth_table() {
        // (x and y) -> z
        let f = Formula::implies(Formula::And(vec![Formula::lit(1), Formula::lit(2)]), Formula::lit(3));
        let cnf = tseitin(3, std::slice::from_ref(&f));
        assert_eq!(cnf.num_aux(), 0);
        assert_eq!(cnf.clauses, vec![vec![-1, -2, 3]]);
        for a in assignments(3) {
            assert_eq!(f.eval(&|v| a[v as usize - 1]), satisfies(&cnf.clauses, &a));
        }
    }

    #[test]
    fn tautologies_and_duplicates_dropped() {
        let cnf = tseitin(2, &[Formula::clause([1, -1]), Formula::clause([2, 1]), Formula::clause([1, 2, 2])]);
        assert_eq!(cnf.clauses, vec![vec![1, 2]]);
    }

    #[test]
    fn nested_formula_is_equisatisfiable_and_extension_works() {
        // (x1 and (x2 -> x3)) -> (x4 or not (x1 and x3))
        let f = Formula::implies(
            Formula::And(vec![Formula::lit(1), Formula::implies(Formula::lit(2), Formula::lit(3))]),
            Formula::Or(vec![Formula::lit(4), Formula::negate(Formula::And(vec![Formula::lit(1), Formula::lit(3)]))]),
        );
        let g = Formula::Or(vec![
            Formula::And(vec![Formula::lit(1), Formula::lit(-2)]),
            Formula::And(vec![Formula::lit(-1), Formula::lit(2)]),
        ]);
        let cnf = tseitin(4, &[f.clone(), g.clone()]);
        assert!(cnf.num_aux() > 0);
        for a in assignments(4) {
            let direct = f.eval(&|v| a[v as usize - 1]) && g.eval(&|v| a[v as usize - 1]);
            let full = cnf.extend_assignment(&a);
            assert_eq!(direct, satisfies(&cnf.clauses, &full));
            // no other auxiliary values rescue a false formula
            if !direct {
                let aux = cnf.num_aux();
                for extra in assignments(aux) {
                    let mut v = a.clone();
                    v.extend(extra);
                    assert!(!satisfies(&cnf.clauses, &v));
                }
            }
        }
    }

    #[test]
    fn identical_gates_share_an_auxiliary() {
        let conj = || Formula::And(vec![Formula::lit(1), Formula::lit(2)]);
        let cnf = tseitin(3, &[Formula::Or(vec![conj(), Formula::lit(3)]), Formula::Or(vec![conj(), Formula::lit(-3)])]);
        assert_eq!(cnf.num_aux(), 1);
    }
}
