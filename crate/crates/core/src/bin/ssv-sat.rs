//! Minimal DIMACS solver front end: `ssv-sat [--embedded] <file.cnf>`.
//! Prints `s`/`v` lines and exits 10 (SAT), 20 (UNSAT) or 0 (unknown).

use std::process::ExitCode;

use ssvsc::encoding::{dimacs, Status};
use ssvsc::solver::cdcl;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let embedded = args.iter().any(|a| a == "--embedded");
    let Some(path) = args.iter().find(|a| !a.starts_with("--")) else {
        eprintln!("usage: ssv-sat [--embedded] <file.cnf>");
        return ExitCode::from(1);
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("ssv-sat: {path}: {e}");
            return ExitCode::from(1);
        }
    };
    let (vars, clauses) = match dimacs::parse_cnf(&text) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("ssv-sat: {e}");
            return ExitCode::from(1);
        }
    };
    let result = if embedded { solve_embedded(vars, &clauses) } else { solve_default(vars, &clauses) };
    let (status, model) = match result {
        Some((true, model)) => (Status::Sat, Some(model)),
        Some((false, _)) => (Status::Unsat, None),
        None => (Status::Budget, None),
    };
    print!("{}", dimacs::write_solution(status, model.as_deref()));
    ExitCode::from(match status {
        Status::Sat => 10,
        Status::Unsat => 20,
        Status::Budget => 0,
    })
}

fn solve_embedded(vars: usize, clauses: &[Vec<i32>]) -> Option<(bool, Vec<bool>)> {
    let mut s = cdcl::Solver::new(vars);
    for c in clauses {
        s.add_clause(c);
    }
    let sat = s.solve(cdcl::Limits::default())?;
    Some((sat, s.model().to_vec()))
}

#[cfg(feature = "cadical")]
fn solve_default(vars: usize, clauses: &[Vec<i32>]) -> Option<(bool, Vec<bool>)> {
    let mut s: cadical::Solver = cadical::Solver::new();
    for c in clauses {
        s.add_clause(c.iter().copied());
    }
    if !s.solve()? {
        return Some((false, Vec::new()));
    }
    let model = (1..=vars as i32).map(|v| s.value(v).unwrap_or(false)).collect();
    Some((true, model))
}

#[cfg(not(feature = "cadical"))]
fn solve_default(vars: usize, clauses: &[Vec<i32>]) -> Option<(bool, Vec<bool>)> {
    solve_embedded(vars, clauses)
}
