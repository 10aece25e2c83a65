//! Small named tables used throughout the tests, the CLI examples and the demo.
//!
//! Row `x`, column `y` holds `x * y`.

use crate::groupoid::Groupoid;

fn table(rows: &[&[usize]]) -> Groupoid {
    Groupoid::new(rows.iter().map(|r| r.to_vec()).collect()).expect("fixture table is valid")
}

/// The trivial group.
pub fn t_trivial() -> Groupoid {
    table(&[&[0]])
}

/// Z2 with identity 0.
pub fn t_z2() -> Groupoid {
    table(&[&[0, 1], &[1, 0]])
}

/// Z3 with identity 0.
pub fn t_z3() -> Groupoid {
    table(&[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]])
}

/// Right division of Z3: `x - y mod 3`.
pub fn t_z3rd() -> Groupoid {
    table(&[&[0, 2, 1], &[1, 0, 2], &[2, 1, 0]])
}

/// Double division of Z3: `-x - y mod 3`.
pub fn t_z3dd() -> Groupoid {
    table(&[&[0, 2, 1], &[2, 1, 0], &[1, 0, 2]])
}

/// Left projection on two elements.
pub fn t_lp2() -> Groupoid {
    table(&[&[0, 0], &[1, 1]])
}

/// The 2-chain semilattice with 0 at the bottom.
pub fn t_sl2() -> Groupoid {
    table(&[&[0, 0], &[0, 1]])
}

/// The 2-chain semilattice with 0 at the top.
pub fn t_chain2_top0() -> Groupoid {
    table(&[&[0, 1], &[1, 1]])
}

/// Z2 on {0, 1} over the trivial group {2}.
pub fn t_slg3() -> Groupoid {
    table(&[&[0, 1, 2], &[1, 0, 2], &[2, 2, 2]])
}

/// Z3 on {0, 1, 2} over the trivial group {3}.
pub fn t_slg4() -> Groupoid {
    table(&[&[0, 1, 2, 3], &[1, 2, 0, 3], &[2, 0, 1, 3], &[3, 3, 3, 3]])
}

/// Right division of [`t_slg4`].
pub fn t_rd4() -> Groupoid {
    table(&[&[0, 2, 1, 3], &[1, 0, 2, 3], &[2, 1, 0, 3], &[3, 3, 3, 3]])
}

/// Left division of [`t_slg4`].
pub fn t_ld4() -> Groupoid {
    table(&[&[0, 1, 2, 3], &[2, 0, 1, 3], &[1, 2, 0, 3], &[3, 3, 3, 3]])
}

/// Double division of [`t_slg4`].
pub fn t_dd4() -> Groupoid {
    table(&[&[0, 2, 1, 3], &[2, 1, 0, 3], &[1, 0, 2, 3], &[3, 3, 3, 3]])
}

/// Z2 on {0, 1} over Z2 on {2, 3}, linked by 0 -> 2, 1 -> 3.
pub fn t_slg4iso() -> Groupoid {
    table(&[&[0, 1, 2, 3], &[1, 0, 3, 2], &[2, 3, 2, 3], &[3, 2, 3, 2]])
}

/// The symmetric group S3 as permutations of {0, 1, 2}, listed in
/// lexicographic order, with composition `(p q)(i) = p(q(i))`.
pub fn t_s3() -> Groupoid {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    Groupoid::from_fn(6, |a, b| {
        let c = [perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]];
        perms.iter().position(|p| *p == c).expect("closed under composition")
    })
}

/// Z_n under addition.
pub fn cyclic(n: usize) -> Groupoid {
    Groupoid::from_fn(n, |x, y| (x + y) % n)
}
