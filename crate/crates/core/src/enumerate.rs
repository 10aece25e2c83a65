//! Backtracking enumerators for small groups, semilattices, quasigroups and
//! semilattices of groups, with deduplication up to isomorphism.
//!
//! Tables are filled cell by cell in row-major order with values tried in
//! ascending order, so each enumerator yields tables in lexicographic order
//! and the representative kept for an isomorphism class is the least table
//! found for it.

use std::collections::{BTreeMap, HashMap};

use crate::clifford::{build_clifford, decompose_slg, DecoratedGroupoid, Decoration, StrongSemilatticeSpec};
use crate::error::{Error, Result};
use crate::groupoid::Groupoid;

pub const MAX_GROUP_ORDER: usize = 8;
pub const MAX_SEMILATTICE_ORDER: usize = 5;
pub const MAX_QUASIGROUP_ORDER: usize = 5;
pub const MAX_SLG_TOTAL: usize = 12;

const UNSET: usize = usize::MAX;

fn check_size(what: &'static str, got: usize, limit: usize) -> Result<()> {
    if got == 0 {
        Err(Error::ZeroSize)
    } else if got > limit {
        Err(Error::SizeLimit { what, limit, got })
    } else {
        Ok(())
    }
}

/// A partially filled table. `UNSET` marks empty cells.
struct Partial {
    n: usize,
    t: Vec<usize>,
}

impl Partial {
    fn new(n: usize) -> Self {
        Partial {
            n,
            t: vec![UNSET; n * n],
        }
    }

    #[inline]
    fn get(&self, x: usize, y: usize) -> Option<usize> {
        let v = self.t[x * self.n + y];
        (v != UNSET).then_some(v)
    }

    #[inline]
    fn set(&mut self, x: usize, y: usize, v: usize) {
        self.t[x * self.n + y] = v;
    }

    /// Checks every associativity instance that became fully defined when
    /// cell `(a, b)` was filled. Each such instance uses the new cell in one
    /// of four positions.
    fn associative_at(&self, a: usize, b: usize) -> bool {
        let n = self.n;
        let c = self.t[a * n + b];
        for z in 0..n {
            // (a*b)*z = a*(b*z)
            if let (Some(l), Some(bz)) = (self.get(c, z), self.get(b, z)) {
                if self.get(a, bz).is_some_and(|r| r != l) {
                    return false;
                }
            }
            // z*(a*b) = (z*a)*b
            if let (Some(l), Some(za)) = (self.get(z, c), self.get(z, a)) {
                if self.get(za, b).is_some_and(|r| r != l) {
                    return false;
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                // (x*y)*b = x*(y*b) where x*y = a
                if self.get(x, y) == Some(a) {
                    if let Some(yb) = self.get(y, b) {
                        if self.get(x, yb).is_some_and(|r| r != c) {
                            return false;
                        }
                    }
                }
                // a*(x*y) = (a*x)*y where x*y = b
                if self.get(x, y) == Some(b) {
                    if let Some(ax) = self.get(a, x) {
                        if self.get(ax, y).is_some_and(|r| r != c) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn finish(&self) -> Groupoid {
        Groupoid::from_flat(self.n, self.t.clone())
    }
}

/// Calls `visit` on every group table of order `n` with identity 0, in
/// lexicographic order.
pub fn for_each_group_table(n: usize, mut visit: impl FnMut(&Groupoid)) -> Result<()> {
    check_size("group order", n, MAX_GROUP_ORDER)?;
    let mut p = Partial::new(n);
    for x in 0..n {
        p.set(0, x, x);
        p.set(x, 0, x);
    }
    let cells: Vec<(usize, usize)> = (1..n).flat_map(|a| (1..n).map(move |b| (a, b))).collect();
    let mut row_used = vec![0u64; n];
    let mut col_used = vec![0u64; n];
    for x in 0..n {
        row_used[x] |= 1 << x;
        col_used[x] |= 1 << x;
    }
    fn go(
        p: &mut Partial,
        cells: &[(usize, usize)],
        i: usize,
        row_used: &mut [u64],
        col_used: &mut [u64],
        visit: &mut dyn FnMut(&Groupoid),
    ) {
        let Some(&(a, b)) = cells.get(i) else {
            visit(&p.finish());
            return;
        };
        for c in 0..p.n {
            let bit = 1u64 << c;
            if row_used[a] & bit != 0 || col_used[b] & bit != 0 {
                continue;
            }
            p.set(a, b, c);
            if p.associative_at(a, b) {
                row_used[a] |= bit;
                col_used[b] |= bit;
                go(p, cells, i + 1, row_used, col_used, visit);
                row_used[a] &= !bit;
                col_used[b] &= !bit;
            }
            p.set(a, b, UNSET);
        }
    }
    go(&mut p, &cells, 0, &mut row_used, &mut col_used, &mut visit);
    Ok(())
}

/// Iso-class deduplication with invariant buckets.
#[derive(Default)]
pub struct IsoFilter {
    buckets: HashMap<Vec<[usize; 8]>, Vec<Groupoid>>,
}

impl IsoFilter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `g` and returns true unless an isomorphic table was seen.
    pub fn insert(&mut self, g: &Groupoid) -> bool {
        let bucket = self.buckets.entry(g.invariant()).or_default();
        if bucket.iter().any(|h| h.n() == g.n() && h.is_isomorphic(g)) {
            return false;
        }
        bucket.push(g.clone());
        true
    }
}

/// All groups of order `n` up to isomorphism, identity at 0.
pub fn enumerate_groups(n: usize) -> Result<Vec<Groupoid>> {
    let mut seen = IsoFilter::new();
    let mut out = Vec::new();
    for_each_group_table(n, |g| {
        if seen.insert(g) {
            out.push(g.clone());
        }
    })?;
    Ok(out)
}

/// All semilattices (commutative idempotent semigroups) of order `k` up to
/// isomorphism.
pub fn enumerate_semilattices(k: usize) -> Result<Vec<Groupoid>> {
    check_size("semilattice order", k, MAX_SEMILATTICE_ORDER)?;
    let mut p = Partial::new(k);
    for x in 0..k {
        p.set(x, x, x);
    }
    let cells: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let mut seen = IsoFilter::new();
    let mut out = Vec::new();
    fn go(p: &mut Partial, cells: &[(usize, usize)], i: usize, visit: &mut dyn FnMut(Groupoid)) {
        let Some(&(a, b)) = cells.get(i) else {
            visit(p.finish());
            return;
        };
        for c in 0..p.n {
            p.set(a, b, c);
            p.set(b, a, c);
            if p.associative_at(a, b) && p.associative_at(b, a) {
                go(p, cells, i + 1, visit);
            }
        }
        p.set(a, b, UNSET);
        p.set(b, a, UNSET);
    }
    go(&mut p, &cells, 0, &mut |g| {
        if seen.insert(&g) {
            out.push(g);
        }
    });
    Ok(out)
}

/// Calls `visit` on every Latin square of order `n`, in lexicographic order.
pub fn for_each_quasigroup(n: usize, mut visit: impl FnMut(&Groupoid)) -> Result<()> {
    check_size("quasigroup order", n, MAX_QUASIGROUP_ORDER)?;
    let mut p = Partial::new(n);
    let mut row_used = vec![0u64; n];
    let mut col_used = vec![0u64; n];
    fn go(p: &mut Partial, i: usize, row_used: &mut [u64], col_used: &mut [u64], visit: &mut dyn FnMut(&Groupoid)) {
        let n = p.n;
        if i == n * n {
            visit(&p.finish());
            return;
        }
        let (a, b) = (i / n, i % n);
        for c in 0..n {
            let bit = 1u64 << c;
            if row_used[a] & bit != 0 || col_used[b] & bit != 0 {
                continue;
            }
            p.set(a, b, c);
            row_used[a] |= bit;
            col_used[b] |= bit;
            go(p, i + 1, row_used, col_used, visit);
            row_used[a] &= !bit;
            col_used[b] &= !bit;
        }
        p.set(a, b, UNSET);
    }
    go(&mut p, 0, &mut row_used, &mut col_used, &mut visit);
    Ok(())
}

/// Quasigroups of order `n` satisfying `(x*z)*(y*z) = x*y`, up to isomorphism.
pub fn enumerate_ward_quasigroups(n: usize) -> Result<Vec<Groupoid>> {
    let mut seen = IsoFilter::new();
    let mut out = Vec::new();
    for_each_quasigroup(n, |g| {
        let m = |a, b| g.mul(a, b);
        let ward = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| m(m(x, z), m(y, z)) == m(x, y))));
        if ward && seen.insert(g) {
            out.push(g.clone());
        }
    })?;
    Ok(out)
}

/// All homomorphisms from group `g` to group `h`, as image vectors in
/// lexicographic order.
pub fn group_homomorphisms(g: &Groupoid, h: &Groupoid) -> Vec<Vec<usize>> {
    let (n, m) = (g.n(), h.n());
    let mut out = Vec::new();
    let mut f = vec![UNSET; n];
    fn go(g: &Groupoid, h: &Groupoid, f: &mut Vec<usize>, i: usize, m: usize, out: &mut Vec<Vec<usize>>) {
        if i == f.len() {
            out.push(f.clone());
            return;
        }
        'value: for v in 0..m {
            f[i] = v;
            for x in 0..=i {
                for y in 0..=i {
                    let xy = g.mul(x, y);
                    if f[xy] != UNSET && h.mul(f[x], f[y]) != f[xy] {
                        continue 'value;
                    }
                }
            }
            go(g, h, f, i + 1, m, out);
        }
        f[i] = UNSET;
    }
    go(g, h, &mut f, 0, m, &mut out);
    out
}

/// One member of a corpus together with where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    pub id: String,
    pub groupoid: Groupoid,
    pub decoration: Option<Decoration>,
    /// The construction the table was built from, when it was built.
    pub source: Option<StrongSemilatticeSpec>,
    pub note: String,
}

impl CorpusItem {
    pub fn decorated(&self) -> Option<DecoratedGroupoid> {
        self.decoration
            .as_ref()
            .and_then(|d| DecoratedGroupoid::new(self.groupoid.clone(), d.clone()).ok())
    }
}

/// Items deduplicated up to isomorphism, in generation order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub items: Vec<CorpusItem>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CorpusItem> {
        self.items.iter()
    }

    /// Groups of each order in `orders`, each decorated as a one-class
    /// semilattice of groups.
    pub fn groups(orders: impl IntoIterator<Item = usize>) -> Result<Corpus> {
        let mut items = Vec::new();
        for n in orders {
            for (i, g) in enumerate_groups(n)?.into_iter().enumerate() {
                let dec = decompose_slg(&g)?.decorated.decoration().clone();
                items.push(CorpusItem {
                    id: format!("group-{n}-{i}"),
                    groupoid: g,
                    decoration: Some(dec),
                    source: None,
                    note: format!("group of order {n}, number {i} in enumeration order"),
                });
            }
        }
        Ok(Corpus { items })
    }

    /// Appends tables as undecorated items.
    pub fn with_tables(mut self, named: impl IntoIterator<Item = (String, Groupoid)>) -> Corpus {
        for (id, g) in named {
            self.items.push(CorpusItem {
                id,
                groupoid: g,
                decoration: None,
                source: None,
                note: "supplied table".into(),
            });
        }
        self
    }
}

/// Every decorated semilattice of groups with at most `max_classes` classes,
/// groups of order at most `max_group` and at most `max_total` elements,
/// deduplicated up to isomorphism.
pub fn enumerate_slgs(max_total: usize, max_group: usize, max_classes: usize) -> Result<Corpus> {
    check_size("total order", max_total, MAX_SLG_TOTAL)?;
    check_size("group order", max_group, MAX_GROUP_ORDER)?;
    check_size("class count", max_classes, MAX_SEMILATTICE_ORDER)?;
    let mut groups: Vec<Groupoid> = Vec::new();
    for m in 1..=max_group.min(max_total) {
        groups.extend(enumerate_groups(m)?);
    }
    let mut hom_cache: HashMap<(usize, usize), Vec<Vec<usize>>> = HashMap::new();
    let mut seen = IsoFilter::new();
    let mut items = Vec::new();

    for k in 1..=max_classes.min(max_total) {
        for (yi, y) in enumerate_semilattices(k)?.into_iter().enumerate() {
            // (alpha, beta) with beta strictly below alpha
            let pairs: Vec<(usize, usize)> = (0..k)
                .flat_map(|a| (0..k).map(move |b| (a, b)))
                .filter(|&(a, b)| a != b && y.mul(a, b) == b)
                .collect();
            for choice in group_choices(&groups, k, max_total) {
                for &(a, b) in &pairs {
                    let key = (choice[a], choice[b]);
                    hom_cache
                        .entry(key)
                        .or_insert_with(|| group_homomorphisms(&groups[key.0], &groups[key.1]));
                }
                let lists: Vec<&[Vec<usize>]> = pairs
                    .iter()
                    .map(|&(a, b)| hom_cache[&(choice[a], choice[b])].as_slice())
                    .collect();
                let chosen: Vec<Groupoid> = choice.iter().map(|&i| groups[i].clone()).collect();
                for_each_coherent_family(&y, &pairs, &lists, &mut |homs| {
                    let spec = StrongSemilatticeSpec {
                        semilattice: y.clone(),
                        groups: chosen.clone(),
                        homs,
                    };
                    let dg = build_clifford(&spec).expect("enumerated families are coherent homomorphisms");
                    if seen.insert(dg.groupoid()) {
                        let orders: Vec<String> = chosen.iter().map(|g| g.n().to_string()).collect();
                        items.push(CorpusItem {
                            id: format!("slg-{}", items.len()),
                            groupoid: dg.groupoid().clone(),
                            decoration: Some(dg.decoration().clone()),
                            source: Some(spec),
                            note: format!("semilattice {k}.{yi} with groups of orders [{}]", orders.join(", ")),
                        });
                    }
                });
            }
        }
    }
    Ok(Corpus { items })
}

/// Assignments of group indices to `k` classes with total order at most
/// `max_total`, in lexicographic order.
fn group_choices(groups: &[Groupoid], k: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(groups: &[Groupoid], k: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        // every remaining class needs at least one element
        let reserve = k - cur.len() - 1;
        for (i, g) in groups.iter().enumerate() {
            if g.n() + reserve <= budget {
                cur.push(i);
                go(groups, k, budget - g.n(), cur, out);
                cur.pop();
            }
        }
    }
    go(groups, k, max_total, &mut cur, &mut out);
    out
}

/// Chooses one homomorphism per comparable pair, pruning as soon as a
/// triangle `gamma < beta < alpha` is fully chosen and does not commute.
fn for_each_coherent_family(
    y: &Groupoid,
    pairs: &[(usize, usize)],
    lists: &[&[Vec<usize>]],
    visit: &mut dyn FnMut(BTreeMap<(usize, usize), Vec<usize>>),
) {
    struct Family<'a> {
        y: &'a Groupoid,
        pairs: &'a [(usize, usize)],
        lists: &'a [&'a [Vec<usize>]],
        index: HashMap<(usize, usize), usize>,
        pick: Vec<usize>,
    }

    impl Family<'_> {
        fn below(&self, q: usize, p: usize) -> bool {
            p != q && self.y.mul(p, q) == q
        }

        /// The chosen map for pair `(p, q)` if it is among the first `upto + 1`.
        fn map(&self, p: usize, q: usize, upto: usize) -> Option<&[usize]> {
            let &i = self.index.get(&(p, q))?;
            (i <= upto).then(|| self.lists[i][self.pick[i]].as_slice())
        }

        fn commutes(&self, a: usize, b: usize, c: usize, upto: usize) -> bool {
            match (self.map(a, b, upto), self.map(b, c, upto), self.map(a, c, upto)) {
                (Some(ab), Some(bc), Some(ac)) => ab.iter().zip(ac).all(|(&u, &v)| bc[u] == v),
                _ => true,
            }
        }

        fn coherent(&self, upto: usize) -> bool {
            let (a, b) = self.pairs[upto];
            (0..self.y.n()).all(|c| {
                (!self.below(c, b) || self.commutes(a, b, c, upto))
                    && (!self.below(a, c) || self.commutes(c, a, b, upto))
                    && (!(self.below(c, a) && self.below(b, c)) || self.commutes(a, c, b, upto))
            })
        }

        fn go(&mut self, i: usize, visit: &mut dyn FnMut(BTreeMap<(usize, usize), Vec<usize>>)) {
            if i == self.pairs.len() {
                let homs = (0..i)
                    .map(|j| (self.pairs[j], self.lists[j][self.pick[j]].clone()))
                    .collect();
                visit(homs);
                return;
            }
            for h in 0..self.lists[i].len() {
                self.pick[i] = h;
                if self.coherent(i) {
                    self.go(i + 1, visit);
                }
            }
        }
    }

    let mut fam = Family {
        y,
        pairs,
        lists,
        index: pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect(),
        pick: vec![0; pairs.len()],
    };
    fam.go(0, visit);
}
