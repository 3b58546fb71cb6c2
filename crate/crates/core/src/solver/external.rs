use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::thread;
use std::time::Duration;

use wait_timeout::ChildExt;

use super::sat_outcome;
use crate::encoding::{dimacs, CnfInstance, SolveOutcome, Status};
use crate::error::{Error, Result};

/// Environment variable naming the external solver command.
pub const SOLVER_ENV: &str = "SOLVER_CMD";

pub fn solver_command_from_env() -> Option<String> {
    std::env::var(SOLVER_ENV).ok().filter(|s| !s.trim().is_empty())
}

/// Writes the instance to a temporary file, runs `command <path>` and parses
/// its `s`/`v` output. A run exceeding `wall` is killed and reported as
/// [`Status::Budget`].
pub fn solve_external(instance: &CnfInstance, command: &str, wall: Option<Duration>) -> Result<SolveOutcome> {
    let mut file = tempfile::Builder::new().prefix("ssvsc-").suffix(".cnf").tempfile()?;
    file.write_all(instance.emit_dimacs().as_bytes())?;
    file.flush()?;

    let mut parts = command.split_whitespace();
    let program = parts.next().ok_or_else(|| Error::IncompatibleModes("empty solver command".into()))?;
    let mut child = Command::new(program)
        .args(parts)
        .arg(file.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| Error::SolverSpawnFailure { command: command.to_string(), source })?;

    let mut stdout = child.stdout.take().expect("stdout is piped");
    let reader = thread::spawn(move || {
        let mut text = String::new();
        stdout.read_to_string(&mut text).map(|_| text)
    });

    let status = match wall {
        Some(w) => match child.wait_timeout(w)? {
            Some(status) => status,
            None => {
                child.kill().ok();
                child.wait().ok();
                let _ = reader.join();
                return Ok(SolveOutcome::budget());
            }
        },
        None => child.wait()?,
    };
    let text = reader
        .join()
        .map_err(|_| Error::MalformedSolverOutput("output reader panicked".into()))??;
    let (st, values) = dimacs::parse_solution(&text, status.code(), instance.num_vars)?;
    match (st, values) {
        (Status::Sat, Some(v)) => sat_outcome(instance, v),
        (st, _) => Ok(SolveOutcome { status: st, model: None, decoded: None }),
    }
}
