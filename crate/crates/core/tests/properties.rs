use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ssvsc::encoding::dimacs::{parse_cnf, write_cnf};
use ssvsc::encoding::{build_base, tseitin, tseitin_cnf, Formula};
use ssvsc::{
    margins, realize, split_cycle_winners, ssv_winner, sv_winner, LinearOrdinalMarginMatrix, OrdinalMarginMatrix,
};

fn even_matrix(max_n: usize, max_half: i64) -> impl Strategy<Value = OrdinalMarginMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-max_half..=max_half, n * (n - 1) / 2).prop_map(move |upper| {
            let mut w = vec![0; n * n];
            let mut it = upper.into_iter();
            for a in 0..n {
                for b in a + 1..n {
                    let v = 2 * it.next().unwrap();
                    w[a * n + b] = v;
                    w[b * n + a] = -v;
                }
            }
            OrdinalMarginMatrix::from_flat(n, w).unwrap()
        })
    })
}

fn linear_matrix(min_n: usize, max_n: usize) -> impl Strategy<Value = LinearOrdinalMarginMatrix> {
    (min_n..=max_n, any::<u64>())
        .prop_map(|(n, seed)| OrdinalMarginMatrix::zero(n).random_linearization(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn formula(vars: i32) -> impl Strategy<Value = Formula> {
    let leaf = (1..=vars, any::<bool>()).prop_map(|(v, neg)| Formula::lit(if neg { -v } else { v }));
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::negate),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Formula::Or),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn loaded_matrices_are_skew_symmetric(m in even_matrix(7, 5)) {
        for a in 0..m.n() {
            prop_assert_eq!(m.weight(a, a), 0);
            for b in 0..m.n() {
                prop_assert_eq!(m.weight(a, b), -m.weight(b, a));
            }
        }
    }

    #[test]
    fn normalization_keeps_the_order_and_is_idempotent(m in even_matrix(7, 5)) {
        let z = m.normalized();
        prop_assert!(z.is_normalized());
        prop_assert!(z.same_ordering(&m));
        prop_assert_eq!(z.normalized(), z.clone());
        prop_assert_eq!(split_cycle_winners(&z), split_cycle_winners(&m));
    }

    #[test]
    fn reversal_is_an_involution(m in even_matrix(6, 5)) {
        prop_assert_eq!(m.reverse().reverse(), m);
    }

    #[test]
    fn realization_round_trips(m in even_matrix(8, 10)) {
        prop_assert_eq!(margins(&realize(&m)).unwrap(), m);
    }

    #[test]
    fn split_cycle_is_never_empty(m in even_matrix(7, 3)) {
        prop_assert!(!split_cycle_winners(&m).is_empty());
    }

    #[test]
    fn sc_winners_follow_relabelling((m, perm) in even_matrix(6, 3).prop_flat_map(|m| {
        let n = m.n();
        (Just(m), permutation(n))
    })) {
        let mut expected: Vec<_> = split_cycle_winners(&m).into_iter().map(|a| perm[a]).collect();
        expected.sort();
        prop_assert_eq!(split_cycle_winners(&m.relabel(&perm)), expected);
    }

    #[test]
    fn small_ssv_winners_are_sc_winners(m in linear_matrix(1, 6)) {
        let w = ssv_winner(&m).unwrap().winner;
        prop_assert!(split_cycle_winners(&m).contains(&w));
    }

    #[test]
    fn sv_winners_are_sc_winners(m in linear_matrix(1, 7)) {
        let w = sv_winner(&m).unwrap().winner;
        prop_assert!(split_cycle_winners(&m).contains(&w));
    }

    #[test]
    fn tournament_class_ignores_labels((m, perm) in linear_matrix(2, 6).prop_flat_map(|m| {
        let n = m.n();
        (Just(m), permutation(n))
    })) {
        prop_assert_eq!(m.tournament_class().unwrap(), m.relabel(&perm).tournament_class().unwrap());
    }

    #[test]
    fn tseitin_preserves_truth(fs in prop::collection::vec(formula(6), 1..4), bits in prop::collection::vec(any::<u8>(), 100)) {
        let cnf = tseitin(6, &fs);
        for b in bits {
            let x: Vec<bool> = (0..6).map(|i| b >> i & 1 == 1).collect();
            let truth = fs.iter().all(|f| f.eval(&|v| x[v as usize - 1]));
            prop_assert_eq!(ssvsc::encoding::satisfies(&cnf.clauses, &cnf.extend_assignment(&x)), truth);
        }
    }

    #[test]
    fn dimacs_round_trips(clauses in prop::collection::vec(prop::collection::vec((1..40i32, any::<bool>()).prop_map(|(v, n)| if n { -v } else { v }), 1..6), 0..30)) {
        let text = write_cnf(40, &clauses);
        prop_assert_eq!(parse_cnf(&text).unwrap(), (40, clauses));
    }

    #[test]
    fn encoding_accepts_every_real_matrix(m in linear_matrix(2, 4)) {
        let e = build_base(m.n()).unwrap();
        let x = e.assignment_for(&m);
        prop_assert!(e.holds(&x));
        let cnf = tseitin_cnf(&e);
        prop_assert!(cnf.satisfied_by(&cnf.extend_assignment(&x)));
    }
}
