//! Small permutation helpers shared by the isomorphism and enumeration code.

/// Advances `xs` to the next lexicographic permutation. Returns `false` (and
/// leaves `xs` sorted ascending) once the last permutation has been passed.
pub fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visits_every_permutation_once() {
        let mut xs = vec![0, 1, 2, 3];
        let mut seen = std::collections::HashSet::new();
        loop {
            assert!(seen.insert(xs.clone()));
            if !next_permutation(&mut xs) {
                break;
            }
        }
        assert_eq!(seen.len(), 24);
        assert_eq!(xs, vec![0, 1, 2, 3]);
    }

    #[test]
    fn invert_roundtrip() {
        let p = vec![2, 0, 3, 1];
        assert_eq!(invert(&invert(&p)), p);
    }
}
