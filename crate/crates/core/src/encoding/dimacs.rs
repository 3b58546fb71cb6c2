//! DIMACS CNF text and the standard solver output format.

use std::fmt::Write as _;

use super::catalog::Lit;
use super::Status;
use crate::error::{Error, Result};

pub fn write_cnf(num_vars: usize, clauses: &[Vec<Lit>]) -> String {
    let mut out = String::with_capacity(clauses.len() * 16);
    writeln!(out, "p cnf {num_vars} {}", clauses.len()).unwrap();
    for c in clauses {
        for l in c {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS CNF. Comment lines and clauses spanning lines are accepted.
pub fn parse_cnf(text: &str) -> Result<(usize, Vec<Vec<Lit>>)> {
    let bad = |msg: String| Error::MalformedSolverOutput(format!("DIMACS: {msg}"));
    let mut header = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let f: Vec<_> = line.split_whitespace().collect();
            if f.len() != 4 || f[1] != "cnf" {
                return Err(bad(format!("bad header {line:?}")));
            }
            let v = f[2].parse().map_err(|_| bad(format!("bad variable count {:?}", f[2])))?;
            let c: usize = f[3].parse().map_err(|_| bad(format!("bad clause count {:?}", f[3])))?;
            header = Some((v, c));
            continue;
        }
        let (vars, _) = header.ok_or_else(|| bad("clause before header".into()))?;
        for tok in line.split_whitespace() {
            let l: Lit = tok.parse().map_err(|_| bad(format!("bad literal {tok:?}")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > vars {
                return Err(bad(format!("literal {l} exceeds {vars} variables")));
            } else {
                current.push(l);
            }
        }
    }
    let (vars, count) = header.ok_or_else(|| bad("missing header".into()))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(bad(format!("header declares {count} clauses, found {}", clauses.len())));
    }
    Ok((vars, clauses))
}

/// Standard solver output: `s`/`v` lines.
pub fn write_solution(status: Status, values: Option<&[bool]>) -> String {
    let mut out = String::new();
    match status {
        Status::Sat => out.push_str("s SATISFIABLE\n"),
        Status::Unsat => out.push_str("s UNSATISFIABLE\n"),
        Status::Budget => out.push_str("s UNKNOWN\n"),
    }
    if let Some(values) = values {
        let mut line = String::from("v");
        for (i, &b) in values.iter().enumerate() {
            let lit = if b { (i + 1) as i64 } else { -((i + 1) as i64) };
            let tok = format!(" {lit}");
            if line.len() + tok.len() > 78 {
                out.push_str(&line);
                out.push('\n');
                line = String::from("v");
            }
            line.push_str(&tok);
        }
        out.push_str(&line);
        out.push_str(" 0\n");
    }
    out
}

/// Reads solver output. Without an `s` line, exit codes 10 and 20 decide;
/// anything else is [`Status::Budget`]. Variables absent from `v` lines
/// are reported false.
pub fn parse_solution(text: &str, exit_code: Option<i32>, num_vars: usize) -> Result<(Status, Option<Vec<bool>>)> {
    let mut status = None;
    let mut values: Option<Vec<bool>> = None;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(match rest.trim() {
                "SATISFIABLE" => Status::Sat,
                "UNSATISFIABLE" => Status::Unsat,
                _ => Status::Budget,
            });
        } else if let Some(rest) = line.strip_prefix('v') {
            let vals = values.get_or_insert_with(|| vec![false; num_vars]);
            for tok in rest.split_whitespace() {
                let l: i64 = tok
                    .parse()
                    .map_err(|_| Error::MalformedSolverOutput(format!("bad value literal {tok:?}")))?;
                let v = l.unsigned_abs() as usize;
                if v == 0 {
                    continue;
                }
                if v > num_vars {
                    return Err(Error::MalformedSolverOutput(format!("value for variable {v} beyond {num_vars}")));
                }
                vals[v - 1] = l > 0;
            }
        }
    }
    let status = status.unwrap_or(match exit_code {
        Some(10) => Status::Sat,
        Some(20) => Status::Unsat,
        _ => Status::Budget,
    });
    match status {
        Status::Sat if values.is_none() => Err(Error::MalformedSolverOutput("satisfiable but no model lines".into())),
        Status::Sat => Ok((status, values)),
        _ => Ok((status, None)),
    }
}
