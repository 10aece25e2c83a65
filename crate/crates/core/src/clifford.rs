//! Clifford semigroups: semigroups that are semilattices of groups.
//!
//! [`build_clifford`] assembles one from a semilattice, a group per class and
//! the linking homomorphisms; [`decompose_slg`] recovers that data from a bare
//! table. Elements of a built semigroup are numbered class by class, so
//! building and decomposing round-trip to identical tables.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, InverseMap};
use crate::quasigroup::group_view;
use crate::report::Witness;

/// Partition of a carrier into classes, one designated idempotent per class
/// and a semilattice structure on the classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decoration {
    class_of: Vec<usize>,
    e_of_class: Vec<usize>,
    class_table: Groupoid,
}

impl Decoration {
    /// Checks the decoration's internal shape; see [`Decoration::validate`]
    /// for the checks against a groupoid.
    pub fn new(class_of: Vec<usize>, e_of_class: Vec<usize>, class_table: Groupoid) -> Result<Self> {
        let k = class_table.n();
        if e_of_class.len() != k {
            return Err(Error::InvalidDecoration(format!(
                "{} designated idempotents for {k} classes",
                e_of_class.len()
            )));
        }
        if let Some(x) = class_of.iter().position(|&c| c >= k) {
            return Err(Error::InvalidDecoration(format!(
                "element {x} has class outside 0..{k}"
            )));
        }
        for (alpha, &e) in e_of_class.iter().enumerate() {
            if class_of.get(e) != Some(&alpha) {
                return Err(Error::InvalidDecoration(format!(
                    "designated element {e} does not lie in class {alpha}"
                )));
            }
        }
        if !class_table.is_semilattice() {
            return Err(Error::InvalidDecoration("class table is not a semilattice".into()));
        }
        Ok(Decoration {
            class_of,
            e_of_class,
            class_table,
        })
    }

    /// Number of classes.
    pub fn k(&self) -> usize {
        self.class_table.n()
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn e_of_class(&self) -> &[usize] {
        &self.e_of_class
    }

    pub fn class_table(&self) -> &Groupoid {
        &self.class_table
    }

    #[inline]
    pub fn class(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// The designated idempotent of class `alpha`.
    #[inline]
    pub fn e(&self, alpha: usize) -> usize {
        self.e_of_class[alpha]
    }

    /// `alpha ^ beta` in the class semilattice.
    #[inline]
    pub fn meet(&self, alpha: usize, beta: usize) -> usize {
        self.class_table.mul(alpha, beta)
    }

    /// `e_alpha` for the class of `x`.
    #[inline]
    pub fn local(&self, x: usize) -> usize {
        self.e(self.class(x))
    }

    /// `e_{alpha beta}` for the classes of `x` and `y`.
    #[inline]
    pub fn meet_e(&self, x: usize, y: usize) -> usize {
        self.e(self.meet(self.class(x), self.class(y)))
    }

    /// `beta <= alpha`, i.e. `alpha ^ beta = beta`.
    pub fn below(&self, beta: usize, alpha: usize) -> bool {
        self.meet(alpha, beta) == beta
    }

    /// Members of class `alpha` in ascending order.
    pub fn members(&self, alpha: usize) -> Vec<usize> {
        (0..self.class_of.len())
            .filter(|&x| self.class_of[x] == alpha)
            .collect()
    }

    /// Checks the decoration against `g`: sizes agree, every class is
    /// nonempty, each `e_alpha` is idempotent in `g`, and class `alpha` times
    /// class `beta` lands in class `alpha ^ beta`.
    pub fn validate(&self, g: &Groupoid) -> Result<()> {
        if self.class_of.len() != g.n() {
            return Err(Error::InvalidDecoration(format!(
                "decoration covers {} elements, table has {}",
                self.class_of.len(),
                g.n()
            )));
        }
        for alpha in 0..self.k() {
            let e = self.e(alpha);
            if !g.is_idempotent(e) {
                return Err(Error::InvalidDecoration(format!(
                    "designated element {e} of class {alpha} is not idempotent"
                )));
            }
        }
        for x in g.elements() {
            for y in g.elements() {
                let expected = self.meet(self.class(x), self.class(y));
                if self.class(g.mul(x, y)) != expected {
                    return Err(Error::InvalidDecoration(format!(
                        "{x} * {y} = {} leaves class {expected}",
                        g.mul(x, y)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The same decoration after relabelling elements by `perm`.
    pub fn relabel(&self, perm: &[usize]) -> Decoration {
        let mut class_of = vec![0; self.class_of.len()];
        for (x, &c) in self.class_of.iter().enumerate() {
            class_of[perm[x]] = c;
        }
        Decoration {
            class_of,
            e_of_class: self.e_of_class.iter().map(|&e| perm[e]).collect(),
            class_table: self.class_table.clone(),
        }
    }

    /// Renumbers classes in ascending order of their least element.
    pub fn canonical(&self) -> Decoration {
        let k = self.k();
        let mut order: Vec<usize> = (0..k).collect();
        let least = |alpha: usize| self.class_of.iter().position(|&c| c == alpha).unwrap_or(usize::MAX);
        order.sort_by_key(|&a| least(a));
        // order[new] = old
        let mut new_of_old = vec![0; k];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old] = new;
        }
        Decoration {
            class_of: self.class_of.iter().map(|&c| new_of_old[c]).collect(),
            e_of_class: order.iter().map(|&old| self.e_of_class[old]).collect(),
            class_table: self.class_table.relabel(&new_of_old),
        }
    }

    /// Same partition and designated idempotents, up to class renumbering.
    pub fn equivalent(&self, other: &Decoration) -> bool {
        self.canonical() == other.canonical()
    }
}

/// A groupoid carrying a validated [`Decoration`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecoratedGroupoid {
    groupoid: Groupoid,
    decoration: Decoration,
}

impl DecoratedGroupoid {
    pub fn new(groupoid: Groupoid, decoration: Decoration) -> Result<Self> {
        decoration.validate(&groupoid)?;
        Ok(DecoratedGroupoid { groupoid, decoration })
    }

    pub(crate) fn new_unchecked(groupoid: Groupoid, decoration: Decoration) -> Self {
        debug_assert!(decoration.validate(&groupoid).is_ok());
        DecoratedGroupoid { groupoid, decoration }
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn decoration(&self) -> &Decoration {
        &self.decoration
    }

    pub fn n(&self) -> usize {
        self.groupoid.n()
    }

    pub fn into_parts(self) -> (Groupoid, Decoration) {
        (self.groupoid, self.decoration)
    }

    /// Transposes the table; the class table is commutative so the
    /// decoration carries over unchanged.
    pub fn dual(&self) -> DecoratedGroupoid {
        DecoratedGroupoid {
            groupoid: self.groupoid.dual(),
            decoration: self.decoration.clone(),
        }
    }

    pub fn relabel(&self, perm: &[usize]) -> DecoratedGroupoid {
        DecoratedGroupoid {
            groupoid: self.groupoid.relabel(perm),
            decoration: self.decoration.relabel(perm),
        }
    }

    /// Restriction of the table to class `alpha`.
    pub fn class_groupoid(&self, alpha: usize) -> Groupoid {
        self.groupoid
            .restrict(&self.decoration.members(alpha))
            .expect("class is a nonempty subset")
            .expect("classes are closed under the product")
    }
}

/// Generative description of a Clifford semigroup.
///
/// `homs[(alpha, beta)]` maps the elements of group `alpha` into group `beta`
/// and is defined when `beta <= alpha`. Identity maps may be omitted, as may
/// maps into a trivial group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongSemilatticeSpec {
    pub semilattice: Groupoid,
    pub groups: Vec<Groupoid>,
    pub homs: BTreeMap<(usize, usize), Vec<usize>>,
}

impl StrongSemilatticeSpec {
    /// Validates the spec and returns the complete family of linking maps.
    pub fn resolved_homs(&self) -> Result<BTreeMap<(usize, usize), Vec<usize>>> {
        let y = &self.semilattice;
        if !y.is_semilattice() {
            return Err(Error::NotASemilattice(
                "structure semilattice fails idempotence, commutativity or associativity".into(),
            ));
        }
        let k = y.n();
        if self.groups.len() != k {
            return Err(Error::MalformedStructure(format!(
                "{} groups for a semilattice with {k} classes",
                self.groups.len()
            )));
        }
        for (alpha, g) in self.groups.iter().enumerate() {
            group_view(g).map_err(|e| Error::NotAGroup(format!("group {alpha}: {e}")))?;
        }
        let below = |beta: usize, alpha: usize| y.mul(alpha, beta) == beta;
        let mut homs = BTreeMap::new();
        for (&(from, to), map) in &self.homs {
            if from >= k || to >= k || !below(to, from) {
                return Err(Error::InvalidHom {
                    from,
                    to,
                    reason: "target class is not below the source class".into(),
                });
            }
            let (src, dst) = (&self.groups[from], &self.groups[to]);
            if map.len() != src.n() || map.iter().any(|&v| v >= dst.n()) {
                return Err(Error::InvalidHom {
                    from,
                    to,
                    reason: format!("map must send 0..{} into 0..{}", src.n(), dst.n()),
                });
            }
            if from == to && map.iter().enumerate().any(|(i, &v)| i != v) {
                return Err(Error::InvalidHom {
                    from,
                    to,
                    reason: "a class must map to itself by the identity".into(),
                });
            }
            for a in src.elements() {
                for b in src.elements() {
                    if map[src.mul(a, b)] != dst.mul(map[a], map[b]) {
                        return Err(Error::NonHomomorphism { from, to, x: a, y: b });
                    }
                }
            }
            homs.insert((from, to), map.clone());
        }
        for alpha in 0..k {
            for beta in 0..k {
                if !below(beta, alpha) || homs.contains_key(&(alpha, beta)) {
                    continue;
                }
                let map = if alpha == beta {
                    (0..self.groups[alpha].n()).collect()
                } else if self.groups[beta].n() == 1 {
                    vec![0; self.groups[alpha].n()]
                } else {
                    return Err(Error::InvalidHom {
                        from: alpha,
                        to: beta,
                        reason: "missing linking map".into(),
                    });
                };
                homs.insert((alpha, beta), map);
            }
        }
        for alpha in 0..k {
            for beta in 0..k {
                if !below(beta, alpha) {
                    continue;
                }
                for gamma in 0..k {
                    if !below(gamma, beta) {
                        continue;
                    }
                    let (ab, bg, ag) = (&homs[&(alpha, beta)], &homs[&(beta, gamma)], &homs[&(alpha, gamma)]);
                    if (0..ab.len()).any(|x| bg[ab[x]] != ag[x]) {
                        return Err(Error::IncoherentHoms(alpha, beta, gamma));
                    }
                }
            }
        }
        Ok(homs)
    }
}

/// Builds the strong semilattice of groups described by `spec`.
///
/// Elements are numbered class by class in ascending class index, and within
/// a class in the group's own order. The product of `x` in class `alpha` and
/// `y` in class `beta` is computed in the group over `alpha ^ beta` after
/// pushing both factors down the linking maps.
pub fn build_clifford(spec: &StrongSemilatticeSpec) -> Result<DecoratedGroupoid> {
    let homs = spec.resolved_homs()?;
    let y = &spec.semilattice;
    let k = y.n();
    let mut offset = Vec::with_capacity(k);
    let mut total = 0;
    for g in &spec.groups {
        offset.push(total);
        total += g.n();
    }
    let mut class_of = Vec::with_capacity(total);
    let mut local = Vec::with_capacity(total);
    for (alpha, g) in spec.groups.iter().enumerate() {
        for i in 0..g.n() {
            class_of.push(alpha);
            local.push(i);
        }
    }
    let table = Groupoid::from_fn(total, |a, b| {
        let (alpha, beta) = (class_of[a], class_of[b]);
        let gamma = y.mul(alpha, beta);
        let pa = homs[&(alpha, gamma)][local[a]];
        let pb = homs[&(beta, gamma)][local[b]];
        offset[gamma] + spec.groups[gamma].mul(pa, pb)
    });
    let e_of_class = spec
        .groups
        .iter()
        .enumerate()
        .map(|(alpha, g)| Ok(offset[alpha] + group_view(g)?.identity))
        .collect::<Result<Vec<_>>>()?;
    let decoration = Decoration::new(class_of, e_of_class, y.clone())?;
    DecoratedGroupoid::new(table, decoration)
}

/// The first condition that keeps a table from being a semilattice of groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlgFailure {
    NotAssociative(usize, usize, usize),
    /// No `y` with `x*y*x = x` and `x*y = y*x`.
    NotCompletelyRegular(usize),
    IdempotentsDoNotCommute(usize, usize),
}

impl fmt::Display for SlgFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlgFailure::NotAssociative(x, y, z) => write!(f, "not associative at ({x}, {y}, {z})"),
            SlgFailure::NotCompletelyRegular(x) => write!(f, "element {x} lies in no subgroup"),
            SlgFailure::IdempotentsDoNotCommute(e, g) => write!(f, "idempotents {e} and {g} do not commute"),
        }
    }
}

impl SlgFailure {
    /// The offending elements as a witness.
    pub fn witness(&self, g: &Groupoid) -> Witness {
        let m = |a, b| g.mul(a, b);
        match *self {
            SlgFailure::NotAssociative(x, y, z) => Witness::xyzw(&[x, y, z]).with_sides(m(m(x, y), z), m(x, m(y, z))),
            SlgFailure::NotCompletelyRegular(x) => Witness::new([("x", x)]),
            SlgFailure::IdempotentsDoNotCommute(e, f) => Witness::xyzw(&[e, f]).with_sides(m(e, f), m(f, e)),
        }
    }
}

/// Decides whether `g` is a semigroup union of groups with commuting
/// idempotents, which is the same as a semilattice of groups.
pub fn slg_failure(g: &Groupoid) -> Option<SlgFailure> {
    if let Some((x, y, z)) = g.associativity_violation() {
        return Some(SlgFailure::NotAssociative(x, y, z));
    }
    for x in g.elements() {
        let regular = g
            .elements()
            .any(|y| g.mul(g.mul(x, y), x) == x && g.mul(x, y) == g.mul(y, x));
        if !regular {
            return Some(SlgFailure::NotCompletelyRegular(x));
        }
    }
    let idem = g.idempotents();
    for (i, &e) in idem.iter().enumerate() {
        for &f in &idem[i + 1..] {
            if g.mul(e, f) != g.mul(f, e) {
                return Some(SlgFailure::IdempotentsDoNotCommute(e, f));
            }
        }
    }
    None
}

pub fn is_slg(g: &Groupoid) -> bool {
    slg_failure(g).is_none()
}

/// Output of [`decompose_slg`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// The input table with its recovered decoration.
    pub decorated: DecoratedGroupoid,
    /// Semilattice, groups and linking maps; building it yields the input
    /// table relabelled by `renumbering`.
    pub spec: StrongSemilatticeSpec,
    /// `renumbering[x]` is the index of input element `x` in the built table.
    pub renumbering: Vec<usize>,
}

/// Splits a semilattice of groups into its maximal subgroups, the
/// semilattice they form and the linking maps `x -> x * e_beta`.
///
/// Classes are ordered by their least element; members keep carrier order.
pub fn decompose_slg(g: &Groupoid) -> Result<Decomposition> {
    if let Some(f) = slg_failure(g) {
        return Err(Error::NotAnSlg(f.to_string()));
    }
    let idem = g.idempotents();
    let mut classes: Vec<(usize, Vec<usize>)> = idem
        .iter()
        .map(|&e| {
            let members = g
                .elements()
                .filter(|&x| {
                    g.mul(x, e) == x && g.mul(e, x) == x && g.elements().any(|y| g.mul(x, y) == e && g.mul(y, x) == e)
                })
                .collect();
            (e, members)
        })
        .collect();
    classes.sort_by_key(|(_, m): &(usize, Vec<usize>)| m[0]);
    let k = classes.len();
    let mut class_of = vec![usize::MAX; g.n()];
    let mut position = vec![0; g.n()];
    for (alpha, (_, members)) in classes.iter().enumerate() {
        for (i, &x) in members.iter().enumerate() {
            class_of[x] = alpha;
            position[x] = i;
        }
    }
    if let Some(x) = class_of.iter().position(|&c| c == usize::MAX) {
        return Err(Error::NotAnSlg(format!("element {x} lies in no maximal subgroup")));
    }
    let e_of_class: Vec<usize> = classes.iter().map(|(e, _)| *e).collect();
    let class_table = Groupoid::from_fn(k, |a, b| class_of[g.mul(e_of_class[a], e_of_class[b])]);
    let decoration = Decoration::new(class_of.clone(), e_of_class.clone(), class_table.clone())?;
    let decorated = DecoratedGroupoid::new(g.clone(), decoration)?;

    let groups: Vec<Groupoid> = classes
        .iter()
        .map(|(_, m)| g.restrict(m).expect("nonempty").expect("maximal subgroups are closed"))
        .collect();
    let mut homs = BTreeMap::new();
    for (alpha, (_, members)) in classes.iter().enumerate() {
        for (beta, &e_beta) in e_of_class.iter().enumerate() {
            if alpha == beta || class_table.mul(alpha, beta) != beta {
                continue;
            }
            let map = members.iter().map(|&x| position[g.mul(x, e_beta)]).collect();
            homs.insert((alpha, beta), map);
        }
    }
    let mut offset = vec![0; k];
    for alpha in 1..k {
        offset[alpha] = offset[alpha - 1] + classes[alpha - 1].1.len();
    }
    let renumbering = g.elements().map(|x| offset[class_of[x]] + position[x]).collect();
    Ok(Decomposition {
        decorated,
        spec: StrongSemilatticeSpec {
            semilattice: class_table,
            groups,
            homs,
        },
        renumbering,
    })
}

/// Checks that a decorated groupoid is a semilattice of groups whose classes
/// are groups with identities `e_alpha`.
pub fn validate_slg(dg: &DecoratedGroupoid) -> Result<()> {
    let g = dg.groupoid();
    if let Some((x, y, z)) = g.associativity_violation() {
        return Err(Error::NotAnSlg(format!("not associative at ({x}, {y}, {z})")));
    }
    let d = dg.decoration();
    for alpha in 0..d.k() {
        let members = d.members(alpha);
        let sub = dg.class_groupoid(alpha);
        let gv = group_view(&sub).map_err(|e| Error::NotAnSlg(format!("class {alpha}: {e}")))?;
        if members[gv.identity] != d.e(alpha) {
            return Err(Error::NotAnSlg(format!(
                "class {alpha} has identity {}, decoration says {}",
                members[gv.identity],
                d.e(alpha)
            )));
        }
    }
    Ok(())
}

/// `x^-1` is the inverse of `x` in its own class group.
pub fn slg_inverse_map(dg: &DecoratedGroupoid) -> Result<InverseMap> {
    validate_slg(dg)?;
    Ok(class_inverse(dg))
}

pub(crate) fn class_inverse(dg: &DecoratedGroupoid) -> InverseMap {
    let g = dg.groupoid();
    let d = dg.decoration();
    let inv = g
        .elements()
        .map(|x| {
            let e = d.local(x);
            g.elements()
                .find(|&y| d.class(y) == d.class(x) && g.mul(x, y) == e)
                .expect("every class is a group")
        })
        .collect();
    InverseMap { inv }
}
