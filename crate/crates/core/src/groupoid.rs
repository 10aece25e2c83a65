//! Finite groupoids stored as Cayley tables over the dense carrier `0..n`.

use std::fmt;

use crate::error::{Error, Result};

/// A finite binary system `(S, *)` with `S = {0, .., n-1}`.
///
/// Entries are stored row-major: `table[x * n + y] = x * y`. Labels are for
/// presentation only and do not take part in equality.
#[derive(Debug, Clone)]
pub struct Groupoid {
    n: usize,
    table: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl PartialEq for Groupoid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.table == other.table
    }
}

impl Eq for Groupoid {}

impl std::hash::Hash for Groupoid {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.table.hash(state);
    }
}

/// A bijection `first carrier -> second carrier` that respects the products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub bijection: Vec<usize>,
}

impl IsoWitness {
    pub fn inverse(&self) -> IsoWitness {
        let mut inv = vec![0; self.bijection.len()];
        for (x, &fx) in self.bijection.iter().enumerate() {
            inv[fx] = x;
        }
        IsoWitness { bijection: inv }
    }
}

/// The inverse-groupoid map `x -> x^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseMap {
    pub inv: Vec<usize>,
}

impl InverseMap {
    pub fn get(&self, x: usize) -> usize {
        self.inv[x]
    }
}

/// Why [`Groupoid::inverse_map`] found no inverse map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseMapFailure {
    /// Elements without any inverse.
    pub missing: Vec<usize>,
    /// Elements with two or more inverses, with the candidates found.
    pub ambiguous: Vec<(usize, Vec<usize>)>,
}

impl fmt::Display for InverseMapFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no inverse: {:?}; several inverses: {:?}",
            self.missing, self.ambiguous
        )
    }
}

impl Groupoid {
    /// Builds a groupoid from its rows, validating shape and entries.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        let mut table = Vec::with_capacity(n * n);
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquareTable {
                    row: x,
                    len: row.len(),
                    n,
                });
            }
            for (y, value) in row.into_iter().enumerate() {
                if value >= n {
                    return Err(Error::EntryOutOfRange { x, y, value, n });
                }
                table.push(value);
            }
        }
        Ok(Groupoid { n, table, labels: None })
    }

    /// Builds the table `x * y = op(x, y)`.
    ///
    /// Panics if `op` leaves the carrier; callers construct `op` from
    /// products that already lie in `0..n`.
    pub fn from_fn(n: usize, mut op: impl FnMut(usize, usize) -> usize) -> Self {
        assert!(n > 0, "empty carrier");
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let v = op(x, y);
                assert!(v < n, "product {x}*{y} = {v} outside carrier of size {n}");
                table.push(v);
            }
        }
        Groupoid { n, table, labels: None }
    }

    pub(crate) fn from_flat(n: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), n * n);
        debug_assert!(table.iter().all(|&v| v < n));
        Groupoid { n, table, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidLabels(format!(
                "expected {} labels, got {}",
                self.n,
                labels.len()
            )));
        }
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLabels("labels must be distinct".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn flat(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.table[x * self.n..(x + 1) * self.n]
    }

    /// `x * y` without bounds reporting; panics on out-of-range indices.
    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    /// `x * y`, reporting out-of-range indices as an error.
    pub fn apply(&self, x: usize, y: usize) -> Result<usize> {
        for index in [x, y] {
            if index >= self.n {
                return Err(Error::IndexOutOfRange { index, n: self.n });
            }
        }
        Ok(self.mul(x, y))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Lexicographically least `(x, y, z)` with `(x*y)*z != x*(y*z)`.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_violation().is_none()
    }

    pub fn commutativity_violation(&self) -> Option<(usize, usize)> {
        for x in 0..self.n {
            for y in x + 1..self.n {
                if self.mul(x, y) != self.mul(y, x) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        self.commutativity_violation().is_none()
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    /// `E(S, *)` in ascending order.
    pub fn idempotents(&self) -> Vec<usize> {
        self.elements().filter(|&x| self.is_idempotent(x)).collect()
    }

    /// True iff the table is a Latin square.
    pub fn is_quasigroup(&self) -> bool {
        let n = self.n;
        let mut seen = vec![false; n];
        for x in 0..n {
            seen.fill(false);
            for y in 0..n {
                let v = self.mul(x, y);
                if std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
        }
        for y in 0..n {
            seen.fill(false);
            for x in 0..n {
                let v = self.mul(x, y);
                if std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
        }
        true
    }

    /// Idempotent, commutative and associative.
    pub fn is_semilattice(&self) -> bool {
        self.elements().all(|x| self.is_idempotent(x)) && self.is_commutative() && self.is_associative()
    }

    /// The unique-inverse map of an inverse groupoid: for each `x`, the only
    /// `y` with `(x*y)*x = x` and `(y*x)*y = y`.
    pub fn inverse_map(&self) -> std::result::Result<InverseMap, InverseMapFailure> {
        let mut inv = Vec::with_capacity(self.n);
        let mut failure = InverseMapFailure {
            missing: Vec::new(),
            ambiguous: Vec::new(),
        };
        for x in self.elements() {
            let candidates: Vec<usize> = self
                .elements()
                .filter(|&y| self.mul(self.mul(x, y), x) == x && self.mul(self.mul(y, x), y) == y)
                .collect();
            match candidates.as_slice() {
                [] => failure.missing.push(x),
                [y] => inv.push(*y),
                _ => failure.ambiguous.push((x, candidates)),
            }
        }
        if failure.missing.is_empty() && failure.ambiguous.is_empty() {
            Ok(InverseMap { inv })
        } else {
            Err(failure)
        }
    }

    /// The transposed table `x o y = y * x`.
    pub fn dual(&self) -> Groupoid {
        let mut g = Groupoid::from_fn(self.n, |x, y| self.mul(y, x));
        g.labels = self.labels.clone();
        g
    }

    /// The sub-groupoid on `subset`, re-indexed in ascending element order,
    /// or `None` when `subset` is not closed under the product.
    pub fn restrict(&self, subset: &[usize]) -> Result<Option<Groupoid>> {
        if subset.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        let mut members: Vec<usize> = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        let mut index = vec![usize::MAX; self.n];
        for (i, &x) in members.iter().enumerate() {
            if x >= self.n {
                return Err(Error::IndexOutOfRange { index: x, n: self.n });
            }
            index[x] = i;
        }
        let m = members.len();
        let mut table = Vec::with_capacity(m * m);
        for &x in &members {
            for &y in &members {
                let v = index[self.mul(x, y)];
                if v == usize::MAX {
                    return Ok(None);
                }
                table.push(v);
            }
        }
        let mut g = Groupoid::from_flat(m, table);
        if let Some(labels) = &self.labels {
            g.labels = Some(members.iter().map(|&x| labels[x].clone()).collect());
        }
        Ok(Some(g))
    }

    /// Transports the table along `perm`: the result satisfies
    /// `perm(x) o perm(y) = perm(x * y)`.
    pub fn relabel(&self, perm: &[usize]) -> Groupoid {
        assert_eq!(perm.len(), self.n);
        let mut table = vec![0; self.n * self.n];
        for x in self.elements() {
            for y in self.elements() {
                table[perm[x] * self.n + perm[y]] = perm[self.mul(x, y)];
            }
        }
        Groupoid::from_flat(self.n, table)
    }

    /// Element profile used to prune isomorphism search. Every component is
    /// preserved by isomorphisms.
    fn profile(&self, x: usize) -> [usize; 8] {
        let n = self.n;
        let mut left_fixed = 0;
        let mut right_fixed = 0;
        let mut left_unit = 0;
        let mut right_unit = 0;
        let mut roots = 0;
        let mut row_seen = vec![false; n];
        let mut col_seen = vec![false; n];
        for y in 0..n {
            let xy = self.mul(x, y);
            let yx = self.mul(y, x);
            left_fixed += usize::from(xy == x);
            right_fixed += usize::from(yx == x);
            left_unit += usize::from(xy == y);
            right_unit += usize::from(yx == y);
            roots += usize::from(self.mul(y, y) == x);
            row_seen[xy] = true;
            col_seen[yx] = true;
        }
        // length of the right power sequence x, x*x, (x*x)*x, ... before it repeats
        let mut seen = vec![false; n];
        let mut p = x;
        let mut len = 0;
        while !seen[p] {
            seen[p] = true;
            len += 1;
            p = self.mul(p, x);
        }
        [
            left_fixed,
            right_fixed,
            left_unit,
            right_unit,
            roots,
            row_seen.iter().filter(|&&b| b).count(),
            col_seen.iter().filter(|&&b| b).count(),
            len,
        ]
    }

    pub(crate) fn profiles(&self) -> Vec<[usize; 8]> {
        self.elements().map(|x| self.profile(x)).collect()
    }

    /// A sorted multiset of element profiles; equal for isomorphic groupoids.
    pub fn invariant(&self) -> Vec<[usize; 8]> {
        let mut p = self.profiles();
        p.sort_unstable();
        p
    }

    /// The lexicographically least bijection `f` with
    /// `f(x * y) = f(x) o f(y)`, or `None` if the groupoids are not isomorphic.
    pub fn find_isomorphism(&self, other: &Groupoid) -> Option<IsoWitness> {
        if self.n != other.n {
            return None;
        }
        let p1 = self.profiles();
        let p2 = other.profiles();
        let mut s1 = p1.clone();
        let mut s2 = p2.clone();
        s1.sort_unstable();
        s2.sort_unstable();
        if s1 != s2 {
            return None;
        }
        let n = self.n;
        // pairs (a, b) of the first table grouped by their product
        let mut producers: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                producers[self.mul(a, b)].push((a, b));
            }
        }
        let mut search = IsoSearch {
            g1: self,
            g2: other,
            p1: &p1,
            p2: &p2,
            producers: &producers,
            fwd: vec![usize::MAX; n],
            back: vec![usize::MAX; n],
        };
        if search.run(0) {
            Some(IsoWitness { bijection: search.fwd })
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &Groupoid) -> bool {
        self.find_isomorphism(other).is_some()
    }
}

struct IsoSearch<'a> {
    g1: &'a Groupoid,
    g2: &'a Groupoid,
    p1: &'a [[usize; 8]],
    p2: &'a [[usize; 8]],
    producers: &'a [Vec<(usize, usize)>],
    fwd: Vec<usize>,
    back: Vec<usize>,
}

impl IsoSearch<'_> {
    fn run(&mut self, x: usize) -> bool {
        let n = self.g1.n;
        if x == n {
            return true;
        }
        for cand in 0..n {
            if self.back[cand] != usize::MAX || self.p1[x] != self.p2[cand] {
                continue;
            }
            self.fwd[x] = cand;
            self.back[cand] = x;
            if self.consistent(x) && self.run(x + 1) {
                return true;
            }
            self.fwd[x] = usize::MAX;
            self.back[cand] = usize::MAX;
        }
        false
    }

    /// Checks every product fully determined by the current partial map
    /// and involving the newly assigned element `x`.
    fn consistent(&self, x: usize) -> bool {
        let check = |a: usize, b: usize| -> bool {
            let (fa, fb) = (self.fwd[a], self.fwd[b]);
            if fa == usize::MAX || fb == usize::MAX {
                return true;
            }
            let c = self.g1.mul(a, b);
            let v = self.g2.mul(fa, fb);
            match self.fwd[c] {
                usize::MAX => self.back[v] == usize::MAX,
                fc => fc == v,
            }
        };
        for a in 0..=x {
            if self.fwd[a] == usize::MAX {
                continue;
            }
            if !check(a, x) || !check(x, a) {
                return false;
            }
        }
        self.producers[x].iter().all(|&(a, b)| check(a, b))
    }
}

impl fmt::Display for Groupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.n.saturating_sub(1).to_string().len();
        for x in self.elements() {
            for (i, v) in self.row(x).iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn apply_examples() {
        assert_eq!(t_z3().apply(1, 2).unwrap(), 0);
        assert_eq!(t_z3rd().apply(0, 2).unwrap(), 1);
        assert_eq!(t_lp2().apply(1, 0).unwrap(), 1);
        assert_eq!(t_z3().apply(3, 0), Err(Error::IndexOutOfRange { index: 3, n: 3 }));
    }

    #[test]
    fn construction_rejects_bad_tables() {
        assert_eq!(Groupoid::new(vec![]), Err(Error::EmptyCarrier));
        assert!(matches!(
            Groupoid::new(vec![vec![0, 1], vec![0]]),
            Err(Error::NonSquareTable { row: 1, len: 1, n: 2 })
        ));
        assert!(matches!(
            Groupoid::new(vec![vec![0, 2], vec![0, 1]]),
            Err(Error::EntryOutOfRange {
                x: 0,
                y: 1,
                value: 2,
                n: 2
            })
        ));
        let labelled = t_z2().with_labels(vec!["a".into(), "a".into()]);
        assert!(matches!(labelled, Err(Error::InvalidLabels(_))));
        assert!(t_z2().with_labels(vec!["a".into()]).is_err());
        assert!(t_z2().with_labels(vec!["e".into(), "g".into()]).is_ok());
    }

    #[test]
    fn associativity() {
        assert!(t_z3().is_associative());
        assert!(t_lp2().is_associative());
        // 0 - (1 - 2) = 1 but (0 - 1) - 2 = 0; (0,0,1) is already a violation
        let w = t_z3rd().associativity_violation().unwrap();
        assert_eq!(w, (0, 0, 1));
        let (x, y, z) = w;
        let g = t_z3rd();
        assert_ne!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
    }

    #[test]
    fn idempotent_sets() {
        assert_eq!(t_sl2().idempotents(), vec![0, 1]);
        assert_eq!(t_rd4().idempotents(), vec![0, 3]);
        assert_eq!(t_dd4().idempotents(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn quasigroups() {
        assert!(t_z3rd().is_quasigroup());
        assert!(!t_lp2().is_quasigroup());
        assert!(!t_slg3().is_quasigroup());
    }

    #[test]
    fn semilattices() {
        assert!(t_sl2().is_semilattice());
        assert!(!t_z2().is_semilattice());
        assert!(!t_lp2().is_semilattice());
    }

    #[test]
    fn inverse_maps() {
        assert_eq!(t_z3().inverse_map().unwrap().inv, vec![0, 2, 1]);
        assert_eq!(t_z3rd().inverse_map().unwrap().inv, vec![0, 2, 1]);
        let fail = t_lp2().inverse_map().unwrap_err();
        assert!(fail.missing.is_empty());
        assert_eq!(fail.ambiguous, vec![(0, vec![0, 1]), (1, vec![0, 1])]);
    }

    #[test]
    fn duals() {
        assert_eq!(t_z3().dual(), t_z3());
        assert_eq!(t_lp2().dual(), Groupoid::new(vec![vec![0, 1], vec![0, 1]]).unwrap());
        let d = t_z3rd().dual();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(d.mul(x, y), (y + 3 - x) % 3);
            }
        }
    }

    #[test]
    fn isomorphisms() {
        let relabelled = Groupoid::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(t_z2().find_isomorphism(&relabelled).unwrap().bijection, vec![1, 0]);
        assert_eq!(t_z3().find_isomorphism(&t_z3()).unwrap().bijection, vec![0, 1, 2]);
        assert!(t_z3().find_isomorphism(&t_z3rd()).is_none());
        assert!(t_z3().find_isomorphism(&t_z2()).is_none());
    }

    #[test]
    fn isomorphism_is_lex_least() {
        // Z3 has automorphisms id and x -> -x; the least is the identity,
        // and onto a relabelled copy the least witness is found first.
        let perm = [2, 0, 1];
        let copy = t_z3().relabel(&perm);
        let w = t_z3().find_isomorphism(&copy).unwrap();
        let all = brute_force_isos(&t_z3(), &copy);
        assert_eq!(Some(&w.bijection), all.first());
    }

    fn brute_force_isos(a: &Groupoid, b: &Groupoid) -> Vec<Vec<usize>> {
        let n = a.n();
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            if a.relabel(&perm) == *b {
                out.push(perm.clone());
            }
            // next permutation
            let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        out
    }

    #[test]
    fn restriction() {
        assert_eq!(t_slg3().restrict(&[0, 1]).unwrap(), Some(t_z2()));
        assert_eq!(
            t_slg3().restrict(&[2]).unwrap(),
            Some(Groupoid::new(vec![vec![0]]).unwrap())
        );
        assert_eq!(t_slg3().restrict(&[1, 2]).unwrap(), None);
        assert!(t_slg3().restrict(&[]).is_err());
    }

    #[test]
    fn display_renders_rows() {
        assert_eq!(t_z2().to_string(), "0 1\n1 0\n");
    }
}
