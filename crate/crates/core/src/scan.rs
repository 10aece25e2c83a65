//! Lexicographic quantifier scans over `n^K` assignments.

use crate::report::Witness;

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// Scans all `[usize; K]` assignments over `0..n` in lexicographic order and
/// returns the first one where the two sides computed by `sides` differ.
pub(crate) fn first_violation<const K: usize>(
    n: usize,
    mut sides: impl FnMut([usize; K]) -> (usize, usize),
) -> Option<Witness> {
    let mut a = [0usize; K];
    loop {
        let (lhs, rhs) = sides(a);
        if lhs != rhs {
            return Some(Witness::new(NAMES.iter().copied().zip(a.iter().copied())).with_sides(lhs, rhs));
        }
        let mut i = K;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            a[i] += 1;
            if a[i] < n {
                break;
            }
            a[i] = 0;
        }
    }
}
