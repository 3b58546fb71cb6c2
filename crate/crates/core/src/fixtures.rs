//! Worked example matrices used by the tests, the CLI, and the shipped
//! `fixtures/*.json` files. Rank-labelled figures use weight `2 * rank`.

use crate::matrix::{Alternative, LinearOrdinalMarginMatrix, OrdinalMarginMatrix};

/// Four alternatives a..d with a single Split Cycle winner (d).
pub const FIG1_EDGES: [(Alternative, Alternative); 6] = [(0, 3), (2, 3), (3, 1), (2, 1), (0, 2), (1, 0)];

/// Four alternatives a..d with two Split Cycle winners (b, d).
pub const FIG2_EDGES: [(Alternative, Alternative); 6] = [(1, 0), (3, 1), (2, 3), (1, 2), (0, 2), (3, 0)];

/// Seven alternatives a..g, weakest edge first.
pub const FIG4_EDGES: [(Alternative, Alternative); 21] = [
    (3, 6),
    (6, 0),
    (3, 4),
    (5, 3),
    (3, 2),
    (2, 4),
    (5, 0),
    (1, 3),
    (3, 0),
    (5, 1),
    (0, 2),
    (1, 0),
    (4, 1),
    (2, 1),
    (1, 6),
    (6, 2),
    (5, 6),
    (2, 5),
    (4, 5),
    (0, 4),
    (6, 4),
];

/// Eight alternatives a..h, weakest edge first.
pub const FIG5_EDGES: [(Alternative, Alternative); 28] = [
    (4, 0),
    (6, 5),
    (3, 6),
    (2, 6),
    (0, 1),
    (6, 7),
    (6, 1),
    (4, 6),
    (7, 3),
    (6, 0),
    (0, 5),
    (7, 1),
    (3, 2),
    (2, 5),
    (3, 0),
    (0, 7),
    (2, 1),
    (4, 2),
    (4, 1),
    (5, 3),
    (4, 5),
    (7, 5),
    (5, 1),
    (0, 2),
    (2, 7),
    (7, 4),
    (1, 3),
    (3, 4),
];

/// Five alternatives with two tied margins; original margins doubled to make them even.
pub const FIG6_MARGINS: [(Alternative, Alternative, i64); 10] = [
    (1, 0, 12),
    (0, 3, 16),
    (0, 4, 2),
    (2, 1, 10),
    (3, 2, 18),
    (3, 4, 6),
    (2, 0, 14),
    (3, 1, 12),
    (4, 1, 8),
    (2, 4, 4),
];

fn ranked(n: usize, edges: &[(Alternative, Alternative)]) -> LinearOrdinalMarginMatrix {
    LinearOrdinalMarginMatrix::from_ranked_edges(n, edges).expect("fixture is a valid linear matrix")
}

pub fn fig1() -> LinearOrdinalMarginMatrix {
    ranked(4, &FIG1_EDGES)
}

pub fn fig2() -> LinearOrdinalMarginMatrix {
    ranked(4, &FIG2_EDGES)
}

pub fn fig4() -> LinearOrdinalMarginMatrix {
    ranked(7, &FIG4_EDGES)
}

pub fn fig5() -> LinearOrdinalMarginMatrix {
    ranked(8, &FIG5_EDGES)
}

pub fn fig6_raw() -> OrdinalMarginMatrix {
    let n = 5;
    let mut w = vec![0; n * n];
    for &(a, b, m) in &FIG6_MARGINS {
        w[a * n + b] = m;
        w[b * n + a] = -m;
    }
    OrdinalMarginMatrix::from_flat(n, w).expect("fixture is valid")
}

pub fn fig6() -> OrdinalMarginMatrix {
    fig6_raw().normalized()
}

pub fn letters(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}
