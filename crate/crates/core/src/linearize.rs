//! Linearizations: all ways of breaking the ties of an ordinal margin matrix
//! while keeping every strict comparison and ordinal skew-symmetry.
//!
//! Tie classes among positive pairs are ordered independently (the negative
//! classes mirror them). The zero class is split by choosing an orientation
//! for each zero-margin pair and then an order; it ends up just above zero,
//! below every originally positive pair.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::matrix::{Alternative, LinearOrdinalMarginMatrix, OrdinalMarginMatrix};
use crate::perm::{factorial, next_permutation};

/// Unordered pair stored with the orientation that has positive weight
/// (for zero pairs, `(min, max)`).
type Pair = (Alternative, Alternative);

fn tie_key(&(x, y): &Pair) -> (Alternative, Alternative, u8) {
    (x.min(y), x.max(y), u8::from(x > y))
}

struct TieClasses {
    zero: Vec<Pair>,
    positive: Vec<Vec<Pair>>,
}

fn tie_classes(m: &OrdinalMarginMatrix) -> TieClasses {
    let mut zero = Vec::new();
    let mut by_weight: BTreeMap<i64, Vec<Pair>> = BTreeMap::new();
    for a in 0..m.n() {
        for b in a + 1..m.n() {
            let w = m.weight(a, b);
            match w.signum() {
                0 => zero.push((a, b)),
                1 => by_weight.entry(w).or_default().push((a, b)),
                _ => by_weight.entry(-w).or_default().push((b, a)),
            }
        }
    }
    let mut positive: Vec<Vec<Pair>> = by_weight.into_values().collect();
    for class in &mut positive {
        class.sort_by_key(tie_key);
    }
    TieClasses { zero, positive }
}

/// Number of linearizations (saturating).
pub fn linearization_count(m: &OrdinalMarginMatrix) -> u128 {
    let classes = tie_classes(m);
    let z = classes.zero.len();
    let zero_ways = if z >= 128 { u128::MAX } else { (1u128 << z).saturating_mul(factorial(z)) };
    classes
        .positive
        .iter()
        .fold(zero_ways, |acc, c| acc.saturating_mul(factorial(c.len())))
}

fn assemble(n: usize, ascending: impl Iterator<Item = Pair>) -> LinearOrdinalMarginMatrix {
    let mut w = vec![0; n * n];
    for (rank, (x, y)) in ascending.enumerate() {
        let v = 2 * (rank as i64 + 1);
        w[x * n + y] = v;
        w[y * n + x] = -v;
    }
    LinearOrdinalMarginMatrix::new(OrdinalMarginMatrix::from_flat(n, w).expect("constructed weights are valid"))
        .expect("distinct ranks give a linear matrix")
}

/// Deterministic stream over every linearization of a matrix.
pub struct Linearizations {
    n: usize,
    zero: Vec<Pair>,
    positive: Vec<Vec<Pair>>,
    zero_orientation: u64,
    zero_order: Vec<usize>,
    orders: Vec<Vec<usize>>,
    done: bool,
}

impl Linearizations {
    pub fn new(m: &OrdinalMarginMatrix) -> Self {
        let TieClasses { zero, positive } = tie_classes(m);
        assert!(zero.len() < 64, "too many zero-margin pairs to enumerate");
        let zero_order = (0..zero.len()).collect();
        let orders = positive.iter().map(|c| (0..c.len()).collect()).collect();
        Linearizations {
            n: m.n(),
            zero,
            positive,
            zero_orientation: 0,
            zero_order,
            orders,
            done: false,
        }
    }

    fn current(&self) -> LinearOrdinalMarginMatrix {
        let zero = self.zero_order.iter().map(|&i| {
            let (x, y) = self.zero[i];
            if self.zero_orientation >> i & 1 == 1 {
                (y, x)
            } else {
                (x, y)
            }
        });
        let positive = self
            .positive
            .iter()
            .zip(&self.orders)
            .flat_map(|(class, order)| order.iter().map(move |&i| class[i]));
        assemble(self.n, zero.chain(positive))
    }

    fn advance(&mut self) {
        for order in self.orders.iter_mut().rev() {
            if next_permutation(order) {
                return;
            }
        }
        if next_permutation(&mut self.zero_order) {
            return;
        }
        let z = self.zero.len();
        if z > 0 && self.zero_orientation + 1 < (1u64 << z) {
            self.zero_orientation += 1;
            return;
        }
        self.done = true;
    }
}

impl Iterator for Linearizations {
    type Item = LinearOrdinalMarginMatrix;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.current();
        self.advance();
        Some(item)
    }
}

impl OrdinalMarginMatrix {
    pub fn linearizations(&self) -> Linearizations {
        Linearizations::new(self)
    }

    pub fn linearization_count(&self) -> u128 {
        linearization_count(self)
    }

    /// One linearization chosen uniformly at random.
    pub fn random_linearization<R: Rng + ?Sized>(&self, rng: &mut R) -> LinearOrdinalMarginMatrix {
        let TieClasses { mut zero, mut positive } = tie_classes(self);
        for p in &mut zero {
            if rng.gen::<bool>() {
                *p = (p.1, p.0);
            }
        }
        zero.shuffle(rng);
        for class in &mut positive {
            class.shuffle(rng);
        }
        assemble(self.n(), zero.into_iter().chain(positive.into_iter().flatten()))
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::fixtures;

    fn tied_cycle() -> OrdinalMarginMatrix {
        OrdinalMarginMatrix::from_weights(3, &[vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).unwrap()
    }

    fn extends(m: &OrdinalMarginMatrix, l: &OrdinalMarginMatrix) -> bool {
        let n = m.n();
        let pairs: Vec<_> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        pairs.iter().all(|&p| pairs.iter().all(|&q| !m.stronger(p, q) || l.stronger(p, q)))
    }

    #[test]
    fn linear_matrix_has_one_linearization() {
        let m = fixtures::fig2();
        let all: Vec<_> = m.linearizations().collect();
        assert_eq!(all.len(), 1);
        assert!(all[0].same_ordering(&m));
        assert_eq!(m.linearization_count(), 1);
    }

    #[test]
    fn tied_three_cycle_has_six() {
        let m = tied_cycle();
        let all: Vec<_> = m.linearizations().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(m.linearization_count(), 6);
        let distinct: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), 6);
    }

    #[test]
    fn figure_six_has_two() {
        let m = fixtures::fig6();
        let all: Vec<_> = m.linearizations().collect();
        assert_eq!(all.len(), 2);
        for l in &all {
            assert!(extends(&m, l));
        }
    }

    #[test]
    fn zero_pairs_get_oriented() {
        // one zero pair: both orientations
        let m = OrdinalMarginMatrix::zero(2);
        let all: Vec<_> = m.linearizations().collect();
        assert_eq!(all.len(), 2);
        assert_ne!(all[0], all[1]);
        // three zero pairs: 2^3 * 3!
        let z = OrdinalMarginMatrix::zero(3);
        let all: HashSet<_> = z.linearizations().collect();
        assert_eq!(all.len(), 48);
        assert_eq!(z.linearization_count(), 48);
    }

    #[test]
    fn mixed_classes_count_and_extend() {
        let m = OrdinalMarginMatrix::from_weights(
            4,
            &[vec![0, 2, 2, 0], vec![-2, 0, 4, 4], vec![-2, -4, 0, 0], vec![0, -4, 0, 0]],
        )
        .unwrap();
        // positive classes {2: 2 pairs}, {4: 2 pairs}; zero class 2 pairs
        assert_eq!(m.linearization_count(), 2 * 2 * 8);
        let all: HashSet<_> = m.linearizations().collect();
        assert_eq!(all.len(), 32);
        for l in &all {
            assert!(l.is_linear());
            assert!(extends(&m, l));
        }
    }

    #[test]
    fn random_linearization_extends() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let m = fixtures::fig6();
        let all: HashSet<_> = m.linearizations().collect();
        for _ in 0..20 {
            assert!(all.contains(&m.random_linearization(&mut rng)));
        }
    }
}
