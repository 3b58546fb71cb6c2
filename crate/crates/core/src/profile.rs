//! Preference profiles of linear ballots, their margin matrices, and the
//! converse construction of a profile realizing a given matrix.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Alternative, OrdinalMarginMatrix};

/// Ballots are complete rankings, most preferred first.
///
/// The empty profile is allowed and has the zero margin matrix; it is what
/// [`realize`] returns for a matrix with no positive margins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub n: usize,
    pub ballots: Vec<Vec<Alternative>>,
}

impl Profile {
    pub fn new(n: usize, ballots: Vec<Vec<Alternative>>) -> Result<Self> {
        let p = Profile { n, ballots };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidProfile("no alternatives".into()));
        }
        for (i, ballot) in self.ballots.iter().enumerate() {
            let mut seen = vec![false; self.n];
            if ballot.len() != self.n {
                return Err(Error::InvalidProfile(format!(
                    "ballot {i} ranks {} alternatives, expected {}",
                    ballot.len(),
                    self.n
                )));
            }
            for &x in ballot {
                if x >= self.n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidProfile(format!("ballot {i} is not a permutation")));
                }
            }
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let p: Profile = serde_json::from_str(&fs::read_to_string(path)?)?;
        p.validate()?;
        Ok(p)
    }
}

/// Margin of every alternative over every other.
pub fn margins(p: &Profile) -> Result<OrdinalMarginMatrix> {
    p.validate()?;
    if p.ballots.len() % 2 == 1 {
        return Err(Error::OddBallotCountProducingOddMargins(p.ballots.len()));
    }
    let n = p.n;
    let mut w = vec![0i64; n * n];
    let mut position = vec![0usize; n];
    for ballot in &p.ballots {
        for (i, &x) in ballot.iter().enumerate() {
            position[x] = i;
        }
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    w[a * n + b] += if position[a] < position[b] { 1 } else { -1 };
                }
            }
        }
    }
    OrdinalMarginMatrix::from_flat(n, w)
}

/// A profile whose margins equal `m` exactly.
///
/// Each positive margin `w[a][b] = 2k` contributes `k` copies of the ballot
/// pair `a > b > rest` and `reverse(rest) > a > b`; the pair adds 2 to
/// `(a, b)` and cancels on every other pair.
pub fn realize(m: &OrdinalMarginMatrix) -> Profile {
    let n = m.n();
    let mut ballots = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let w = m.weight(a, b);
            if a == b || w <= 0 {
                continue;
            }
            let rest: Vec<_> = (0..n).filter(|&x| x != a && x != b).collect();
            let mut first = vec![a, b];
            first.extend(&rest);
            let mut second: Vec<_> = rest.iter().rev().copied().collect();
            second.extend([a, b]);
            for _ in 0..w / 2 {
                ballots.push(first.clone());
                ballots.push(second.clone());
            }
        }
    }
    Profile { n, ballots }
}

pub const DEFAULT_VOTERS: usize = 10_000;

/// Impartial Culture: every ballot uniform over all `n!` rankings.
pub fn sample_impartial_culture(n: usize, voters: usize, seed: u64) -> Result<Profile> {
    if voters % 2 == 1 {
        return Err(Error::OddVoterCount(voters));
    }
    if n == 0 {
        return Err(Error::InvalidProfile("no alternatives".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ballot: Vec<Alternative> = (0..n).collect();
    let ballots = (0..voters)
        .map(|_| {
            ballot.shuffle(&mut rng);
            ballot.clone()
        })
        .collect();
    Ok(Profile { n, ballots })
}
