//! Winner computation: Split Cycle, Simple Stable Voting (SSV), Stable Voting
//! (SV), and the two tie-handling variants of SSV.
//!
//! Sub-elections are represented as bitmasks of surviving alternatives and
//! memoized per call.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Alternative, LinearOrdinalMarginMatrix, OrdinalMarginMatrix};

pub const MAX_SUBSET_N: usize = 20;

pub type Mask = u32;

#[inline]
fn members(mask: Mask) -> impl Iterator<Item = Alternative> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

pub fn full_mask(n: usize) -> Mask {
    if n >= 32 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

fn mask_to_vec(mask: Mask) -> Vec<Alternative> {
    members(mask).collect()
}

fn check_subset_size(n: usize) -> Result<()> {
    if n > MAX_SUBSET_N {
        Err(Error::TooLarge { what: "subset recursion", n, max: MAX_SUBSET_N })
    } else {
        Ok(())
    }
}

/// Path from `from` to `to` inside `mask` using majority edges of weight at
/// least `threshold`. Returned as the list of visited alternatives.
fn strong_path(
    m: &OrdinalMarginMatrix,
    mask: Mask,
    from: Alternative,
    to: Alternative,
    threshold: i64,
) -> Option<Vec<Alternative>> {
    let n = m.n();
    let mut parent = vec![usize::MAX; n];
    parent[from] = from;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for y in members(mask) {
            let w = m.weight(x, y);
            if parent[y] == usize::MAX && w > 0 && w >= threshold {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}

/// Split Cycle defeat check within the sub-election `mask`. `Err(cycle)`
/// carries a cycle in which `(a, b)` is a weakest (possibly tied) edge.
fn defeats_in(
    m: &OrdinalMarginMatrix,
    mask: Mask,
    a: Alternative,
    b: Alternative,
) -> std::result::Result<bool, Vec<Alternative>> {
    let w = m.weight(a, b);
    if w <= 0 {
        return Ok(false);
    }
    match strong_path(m, mask, b, a, w) {
        // cycle a -> b -> ... -> a
        Some(path) => {
            let mut cycle = vec![a];
            cycle.extend(&path[..path.len() - 1]);
            Err(cycle)
        }
        None => Ok(true),
    }
}

/// Result of a single defeat query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefeatCheck {
    pub defeats: bool,
    /// For a positive margin that is not a defeat: a cycle `[a, b, ..]`
    /// (closing back to `a`) in which `(a, b)` is weakest.
    pub cycle: Option<Vec<Alternative>>,
}

pub fn sc_defeats(m: &OrdinalMarginMatrix, a: Alternative, b: Alternative) -> DefeatCheck {
    assert_ne!(a, b, "an alternative cannot defeat itself");
    match defeats_in(m, full_mask(m.n()), a, b) {
        Ok(defeats) => DefeatCheck { defeats, cycle: None },
        Err(cycle) => DefeatCheck { defeats: false, cycle: Some(cycle) },
    }
}

fn sc_winners_mask(m: &OrdinalMarginMatrix, mask: Mask) -> Mask {
    let mut winners = 0;
    for b in members(mask) {
        let defeated = members(mask).any(|a| a != b && matches!(defeats_in(m, mask, a, b), Ok(true)));
        if !defeated {
            winners |= 1 << b;
        }
    }
    winners
}

/// The defeat relation together with witnessing cycles for every positive
/// margin that is not a defeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefeatRelation {
    pub n: usize,
    pub defeats: Vec<(Alternative, Alternative)>,
    pub witnesses: Vec<((Alternative, Alternative), Vec<Alternative>)>,
}

impl DefeatRelation {
    pub fn of(m: &OrdinalMarginMatrix) -> Self {
        let mask = full_mask(m.n());
        let mut defeats = Vec::new();
        let mut witnesses = Vec::new();
        for a in 0..m.n() {
            for b in 0..m.n() {
                if a == b {
                    continue;
                }
                match defeats_in(m, mask, a, b) {
                    Ok(true) => defeats.push((a, b)),
                    Ok(false) => {}
                    Err(cycle) => witnesses.push(((a, b), cycle)),
                }
            }
        }
        DefeatRelation { n: m.n(), defeats, witnesses }
    }

    pub fn undefeated(&self) -> Vec<Alternative> {
        (0..self.n).filter(|&x| !self.defeats.iter().any(|&(_, b)| b == x)).collect()
    }
}

pub fn split_cycle_winners(m: &OrdinalMarginMatrix) -> Vec<Alternative> {
    mask_to_vec(sc_winners_mask(m, full_mask(m.n())))
}

/// Winner of a sub-election and the pair that put them there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubWinner {
    pub winner: Alternative,
    pub witness: Option<(Alternative, Alternative)>,
}

/// SSV (or SV) outcome with the memo of every sub-election it visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsvTrace {
    pub winner: Alternative,
    pub witness: Option<(Alternative, Alternative)>,
    memo: Vec<Option<SubWinner>>,
}

impl SsvTrace {
    /// Winner of the sub-election on `alternatives`.
    pub fn sub_election(&self, alternatives: &[Alternative]) -> Option<SubWinner> {
        let mask = alternatives.iter().fold(0 as Mask, |acc, &x| acc | 1 << x);
        self.memo.get(mask as usize).copied().flatten()
    }
}

/// SSV winner: the first coordinate of the strongest pair `(a, b)` such that
/// `a` wins once `b` is deleted.
///
/// For each subset there is exactly one candidate pair per deleted `b`, so
/// each subset costs O(n).
pub fn ssv_winner(m: &LinearOrdinalMarginMatrix) -> Result<SsvTrace> {
    stable_recursion(m, None)
}

/// Stable Voting: like SSV, but the first coordinate must also be a Split
/// Cycle winner of the current sub-election.
pub fn sv_winner(m: &LinearOrdinalMarginMatrix) -> Result<SsvTrace> {
    stable_recursion(m, Some(()))
}

fn stable_recursion(m: &LinearOrdinalMarginMatrix, restrict_to_sc: Option<()>) -> Result<SsvTrace> {
    let n = m.n();
    check_subset_size(n)?;
    let full = full_mask(n);
    let mut memo: Vec<Option<SubWinner>> = vec![None; full as usize + 1];
    for mask in 1..=full {
        if mask.count_ones() == 1 {
            memo[mask as usize] = Some(SubWinner { winner: mask.trailing_zeros() as usize, witness: None });
            continue;
        }
        let sc = if restrict_to_sc.is_some() { sc_winners_mask(m, mask) } else { mask };
        let mut best: Option<(i64, Alternative, Alternative)> = None;
        for b in members(mask) {
            let Some(sub) = memo[(mask & !(1 << b)) as usize] else { continue };
            let a = sub.winner;
            if sc >> a & 1 == 0 {
                continue;
            }
            let w = m.weight(a, b);
            if best.is_none_or(|(bw, _, _)| w > bw) {
                best = Some((w, a, b));
            }
        }
        match best {
            Some((_, a, b)) => memo[mask as usize] = Some(SubWinner { winner: a, witness: Some((a, b)) }),
            None if restrict_to_sc.is_some() => {}
            None => unreachable!("every deletion yields a candidate pair"),
        }
    }
    // SV sub-elections without a qualifying pair stay unresolved; supersets
    // then skip them.
    let top = memo[full as usize].ok_or(Error::NoStableWinner)?;
    Ok(SsvTrace { winner: top.winner, witness: top.witness, memo })
}

/// The three-alternative shortcut: the alternative with no loss, otherwise
/// the one whose single loss is smallest.
pub fn three_alt_oracle(m: &LinearOrdinalMarginMatrix) -> Result<Alternative> {
    if m.n() != 3 {
        return Err(Error::NotThreeAlternatives(m.n()));
    }
    let worst_loss = |x: Alternative| -> i64 {
        (0..3).filter(|&y| y != x).map(|y| m.weight(y, x)).filter(|&w| w > 0).max().unwrap_or(0)
    };
    Ok((0..3).min_by_key(|&x| worst_loss(x)).expect("three alternatives"))
}

/// SSV with simultaneous elimination: at each sub-election keep every
/// first coordinate among the strongest qualifying pairs.
pub fn ssv_se_winners(m: &OrdinalMarginMatrix) -> Result<Vec<Alternative>> {
    let n = m.n();
    check_subset_size(n)?;
    let full = full_mask(n);
    let mut memo: Vec<Mask> = vec![0; full as usize + 1];
    for mask in 1..=full {
        if mask.count_ones() == 1 {
            memo[mask as usize] = mask;
            continue;
        }
        let mut best = i64::MIN;
        let mut winners: Mask = 0;
        for b in members(mask) {
            for a in members(memo[(mask & !(1 << b)) as usize]) {
                let w = m.weight(a, b);
                if w > best {
                    best = w;
                    winners = 1 << a;
                } else if w == best {
                    winners |= 1 << a;
                }
            }
        }
        memo[mask as usize] = winners;
    }
    Ok(mask_to_vec(memo[full as usize]))
}

pub const DEFAULT_PUT_BUDGET: u128 = 1_000_000;

/// SSV with parallel-universe tiebreaking: the union of SSV winners over all
/// linearizations.
pub fn ssv_put_winners(m: &OrdinalMarginMatrix, budget: u128) -> Result<Vec<Alternative>> {
    check_subset_size(m.n())?;
    let count = m.linearization_count();
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let mut winners: Mask = 0;
    for l in m.linearizations() {
        winners |= 1 << ssv_winner(&l)?.winner;
        if winners == full_mask(m.n()) {
            break;
        }
    }
    Ok(mask_to_vec(winners))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Sc,
    Ssv,
    Sv,
    SsvSe,
    SsvPut,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Sc => "sc",
            Method::Ssv => "ssv",
            Method::Sv => "sv",
            Method::SsvSe => "ssv-se",
            Method::SsvPut => "ssv-put",
        }
    }
}

/// Serialized winner report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinnerReport {
    pub method: String,
    pub winners: Vec<Alternative>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<(Alternative, Alternative)>,
    pub defeats: Vec<(Alternative, Alternative)>,
}

pub fn winner_report(m: &OrdinalMarginMatrix, method: Method) -> Result<WinnerReport> {
    let defeats = DefeatRelation::of(m).defeats;
    let (winners, witness) = match method {
        Method::Sc => (split_cycle_winners(m), None),
        Method::Ssv | Method::Sv => {
            let l = m.to_linear()?;
            let t = if method == Method::Ssv { ssv_winner(&l)? } else { sv_winner(&l)? };
            (vec![t.winner], t.witness)
        }
        Method::SsvSe => (ssv_se_winners(m)?, None),
        Method::SsvPut => (ssv_put_winners(m, DEFAULT_PUT_BUDGET)?, None),
    };
    Ok(WinnerReport { method: method.name().to_string(), winners, witness, defeats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn figure_one_single_winner_and_dashed_edges() {
        let m = fixtures::fig1();
        assert_eq!(split_cycle_winners(&m), vec![3]);
        // c -> b (8) is weakest in the cycle c -> b -> a -> c
        let cb = sc_defeats(&m, 2, 1);
        assert!(!cb.defeats);
        assert_eq!(cb.cycle.as_deref(), Some(&[2, 1, 0][..]));
        // dashed edges: c->b, a->d, c->d
        let rel = DefeatRelation::of(&m);
        let mut dashed: Vec<_> = rel.witnesses.iter().map(|(p, _)| *p).collect();
        dashed.sort();
        assert_eq!(dashed, vec![(0, 3), (2, 1), (2, 3)]);
        let mut defeats = rel.defeats.clone();
        defeats.sort();
        assert_eq!(defeats, vec![(0, 2), (1, 0), (3, 1)]);
    }

    #[test]
    fn nonpositive_margin_never_defeats() {
        let m = fixtures::fig2();
        assert!(!sc_defeats(&m, 0, 1).defeats);
        assert!(!sc_defeats(&OrdinalMarginMatrix::zero(2), 0, 1).defeats);
    }

    #[test]
    fn figure_two() {
        let m = fixtures::fig2();
        assert_eq!(split_cycle_winners(&m), vec![1, 3]);
        let t = ssv_winner(&m).unwrap();
        assert_eq!(t.winner, 3);
        assert_eq!(t.witness, Some((3, 1)));
        assert_eq!(m.weight(3, 1), 4);
        assert_eq!(sv_winner(&m).unwrap().winner, 3);
        // sub-elections after deleting a, b, c, d
        let expect = [1, 3, 3, 1];
        for (del, &w) in expect.iter().enumerate() {
            let keep: Vec<_> = (0..4).filter(|&x| x != del).collect();
            assert_eq!(t.sub_election(&keep).unwrap().winner, w, "deleting {del}");
        }
    }

    #[test]
    fn figure_four() {
        let m = fixtures::fig4();
        assert_eq!(ssv_winner(&m).unwrap().winner, 0);
        assert_eq!(split_cycle_winners(&m), vec![1, 2, 3]);
        // With the ranks as drawn, a -> e -> b outranks b -> a, so the only
        // defeat of a is by d.
        let rel = DefeatRelation::of(&m);
        assert_eq!(rel.defeats.iter().filter(|p| p.1 == 0).collect::<Vec<_>>(), vec![&(3, 0)]);
        assert_eq!(sc_defeats(&m, 1, 0).cycle, Some(vec![1, 0, 4]));
        let sv = sv_winner(&m).unwrap().winner;
        assert!([1, 2, 3].contains(&sv));
    }

    #[test]
    fn figure_five() {
        let m = fixtures::fig5();
        assert_eq!(ssv_winner(&m).unwrap().winner, 0);
        assert_eq!(split_cycle_winners(&m), vec![6]);
        assert!(sc_defeats(&m, 6, 0).defeats);
        assert_eq!(sv_winner(&m).unwrap().winner, 6);
    }

    #[test]
    fn figure_six_tied() {
        let m = fixtures::fig6();
        assert_eq!(ssv_se_winners(&m).unwrap(), vec![1]);
        assert_eq!(split_cycle_winners(&m), vec![0, 4]);
        let put = ssv_put_winners(&m, DEFAULT_PUT_BUDGET).unwrap();
        assert!(put.iter().all(|x| [0, 4].contains(x)));
    }

    #[test]
    fn single_alternative() {
        let m = LinearOrdinalMarginMatrix::new(OrdinalMarginMatrix::zero(1)).unwrap();
        assert_eq!(ssv_winner(&m).unwrap().winner, 0);
        assert_eq!(ssv_winner(&m).unwrap().witness, None);
        assert_eq!(split_cycle_winners(&m), vec![0]);
    }

    #[test]
    fn three_alt_oracle_on_figure_three() {
        let fig2 = fixtures::fig2();
        let (after_a, _) = fig2.restrict(0).unwrap();
        assert_eq!(three_alt_oracle(&after_a.to_linear().unwrap()).unwrap(), 0); // b
        let (after_b, map) = fig2.restrict(1).unwrap();
        assert_eq!(map[three_alt_oracle(&after_b.to_linear().unwrap()).unwrap()], 3); // d
        let condorcet = LinearOrdinalMarginMatrix::from_ranked_edges(3, &[(1, 2), (0, 2), (0, 1)]).unwrap();
        assert_eq!(three_alt_oracle(&condorcet).unwrap(), 0);
        assert!(matches!(three_alt_oracle(&fig2), Err(Error::NotThreeAlternatives(4))));
    }

    #[test]
    fn tied_three_cycle_everyone_wins() {
        let m = OrdinalMarginMatrix::from_weights(3, &[vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).unwrap();
        assert_eq!(ssv_se_winners(&m).unwrap(), vec![0, 1, 2]);
        assert_eq!(ssv_put_winners(&m, DEFAULT_PUT_BUDGET).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn put_budget_enforced() {
        let m = OrdinalMarginMatrix::zero(4);
        assert!(matches!(ssv_put_winners(&m, 10), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn ssv_requires_linear_through_report() {
        assert!(matches!(winner_report(&fixtures::fig6(), Method::Ssv), Err(Error::NotLinear)));
    }

    #[test]
    fn report_json_shape() {
        let r = winner_report(&fixtures::fig2(), Method::Ssv).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["method"], "ssv");
        assert_eq!(v["winners"], serde_json::json!([3]));
        assert_eq!(v["witness"], serde_json::json!([3, 1]));
        assert!(v["defeats"].is_array());
    }
}
