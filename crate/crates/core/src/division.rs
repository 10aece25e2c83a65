//! Right, left and double division on decorated Clifford semigroups, the
//! three reconstruction maps back to a semigroup, and membership deciders for
//! the resulting collections.
//!
//! | kind   | division          | reconstruction                    |
//! |--------|-------------------|-----------------------------------|
//! | right  | `x . y^-1`        | `x * (e_ab * y)`                  |
//! | left   | `x^-1 . y`        | `(x * e_ab) * y`                  |
//! | double | `x^-1 . y^-1`     | `(e_ab * x) * (e_ab * y)`         |
//!
//! Decorations travel with the tables: `divide` and `reconstruct` keep
//! classes and designated idempotents unchanged. A bare double-division
//! table does not determine `e_alpha` (its idempotents can strictly contain
//! the designated ones), so [`decide_membership`] searches for a decoration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clifford::{class_inverse, validate_slg, DecoratedGroupoid, Decoration};
use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, InverseMap};
use crate::quasigroup::{double_ward_laws, quasigroup_violation, ward_dual_laws, ward_laws, WardKind};
use crate::report::{Check, Report, Witness};
use crate::scan::first_violation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivisionKind {
    Right,
    Left,
    Double,
}

impl DivisionKind {
    pub const ALL: [DivisionKind; 3] = [DivisionKind::Right, DivisionKind::Left, DivisionKind::Double];

    /// The quasigroup type of each class after division.
    pub fn class_kind(self) -> WardKind {
        match self {
            DivisionKind::Right => WardKind::Ward,
            DivisionKind::Left => WardKind::WardDual,
            DivisionKind::Double => WardKind::DoubleWard,
        }
    }

    /// Names of the lemma identities checked after dividing.
    pub fn lemma_names(self) -> &'static [&'static str] {
        match self {
            DivisionKind::Right => &["3.21", "3.22", "3.23", "3.24", "3.25", "3.26"],
            DivisionKind::Left => &["3.81", "3.82", "3.83", "3.84", "3.85", "3.86"],
            DivisionKind::Double => &["3.131", "3.132", "3.133", "3.134"],
        }
    }

    /// Name of the collection the divided tables belong to.
    pub fn collection(self) -> &'static str {
        match self {
            DivisionKind::Right => "SLWQ",
            DivisionKind::Left => "SLWDQ",
            DivisionKind::Double => "SLDWQ",
        }
    }
}

impl fmt::Display for DivisionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DivisionKind::Right => "right",
            DivisionKind::Left => "left",
            DivisionKind::Double => "double",
        })
    }
}

impl std::str::FromStr for DivisionKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "right" => Ok(DivisionKind::Right),
            "left" => Ok(DivisionKind::Left),
            "double" => Ok(DivisionKind::Double),
            other => Err(format!(
                "unknown division kind `{other}` (expected right, left or double)"
            )),
        }
    }
}

fn divide_table(dg: &DecoratedGroupoid, inv: &InverseMap, kind: DivisionKind) -> Groupoid {
    let g = dg.groupoid();
    Groupoid::from_fn(g.n(), |x, y| match kind {
        DivisionKind::Right => g.mul(x, inv.get(y)),
        DivisionKind::Left => g.mul(inv.get(x), y),
        DivisionKind::Double => g.mul(inv.get(x), inv.get(y)),
    })
}

/// Divides a decorated semilattice of groups. The decoration carries over.
///
/// The result is checked against the full lemma battery for `kind` before
/// it is returned.
pub fn divide(dg: &DecoratedGroupoid, kind: DivisionKind) -> Result<DecoratedGroupoid> {
    validate_slg(dg)?;
    let inv = class_inverse(dg);
    let out = DecoratedGroupoid::new(divide_table(dg, &inv, kind), dg.decoration().clone()).map_err(|e| {
        Error::PostConditionFailed {
            check: format!("class products: {e}"),
            witness: None,
        }
    })?;
    let recovered = division_inverse(&out, kind);
    if let Some(x) = out.groupoid().elements().find(|&x| recovered.get(x) != inv.get(x)) {
        return Err(Error::PostConditionFailed {
            check: "inverse recovered from the quotient".into(),
            witness: Some(Witness::new([("x", x)]).with_sides(recovered.get(x), inv.get(x))),
        });
    }
    let rep = lemma_battery(&out, kind);
    if let Some(c) = rep.failures().next() {
        return Err(Error::PostConditionFailed {
            check: c.name.clone(),
            witness: c.witness.clone(),
        });
    }
    Ok(out)
}

/// The group inverse of each element as seen from a divided table:
/// `e_alpha * x` for right and double division, `x * e_alpha` for left.
pub fn division_inverse(dg: &DecoratedGroupoid, kind: DivisionKind) -> InverseMap {
    let (g, d) = (dg.groupoid(), dg.decoration());
    let inv = g
        .elements()
        .map(|x| match kind {
            DivisionKind::Right | DivisionKind::Double => g.mul(d.local(x), x),
            DivisionKind::Left => g.mul(x, d.local(x)),
        })
        .collect();
    InverseMap { inv }
}

fn lift(w: Witness, members: &[usize]) -> Witness {
    Witness {
        assignment: w.assignment.into_iter().map(|(k, v)| (k, members[v])).collect(),
        lhs: w.lhs.map(|v| members[v]),
        rhs: w.rhs.map(|v| members[v]),
    }
}

/// First class that is not a quasigroup of type `kind` with designated
/// element `e_alpha`, with the failing law and a witness in global elements.
fn class_failure(dg: &DecoratedGroupoid, kind: WardKind) -> Option<Check> {
    let d = dg.decoration();
    for alpha in 0..d.k() {
        let members = d.members(alpha);
        let sub = dg.class_groupoid(alpha);
        if let Some(w) = quasigroup_violation(&sub) {
            return Some(
                Check::fail("class", Some(lift(w, &members))).with_detail(format!("class {alpha} is not a quasigroup")),
            );
        }
        let r = members
            .iter()
            .position(|&m| m == d.e(alpha))
            .expect("e lies in its class");
        let laws = match kind {
            WardKind::Ward => ward_laws(&sub, r),
            WardKind::WardDual => ward_dual_laws(&sub, r),
            WardKind::DoubleWard => double_ward_laws(&sub, r),
        };
        let failed = laws.failures().next().cloned();
        if let Some(c) = failed {
            return Some(
                Check::fail("class", c.witness.map(|w| lift(w, &members))).with_detail(format!(
                    "class {alpha} fails identity ({}) as a {kind} quasigroup",
                    c.name
                )),
            );
        }
    }
    None
}

fn class_check(name: &str, dg: &DecoratedGroupoid, kind: WardKind) -> Check {
    match class_failure(dg, kind) {
        None => Check::pass(name),
        Some(mut c) => {
            c.name = name.to_owned();
            c
        }
    }
}

/// Least pair of classes whose designated idempotents multiply to something
/// other than the designated idempotent of the meet.
fn designated_product_failure(dg: &DecoratedGroupoid) -> Option<Witness> {
    let (g, d) = (dg.groupoid(), dg.decoration());
    first_violation(d.k(), |[a, b]| (g.mul(d.e(a), d.e(b)), d.e(d.meet(a, b)))).map(|w| {
        Witness::new([("x", d.e(w.assignment[0].1)), ("y", d.e(w.assignment[1].1))])
            .with_sides(w.lhs.unwrap(), w.rhs.unwrap())
    })
}

/// First idempotent that is not a designated one.
fn stray_idempotent(dg: &DecoratedGroupoid) -> Option<Witness> {
    let (g, d) = (dg.groupoid(), dg.decoration());
    g.elements()
        .find(|&x| g.is_idempotent(x) && d.local(x) != x)
        .map(|x| Witness::new([("x", x)]).with_sides(g.mul(x, x), d.local(x)))
}

fn idempotent_check(name: &str, dg: &DecoratedGroupoid) -> Check {
    if let Some(w) = stray_idempotent(dg) {
        return Check::fail(name, Some(w)).with_detail("an idempotent outside the designated set");
    }
    Check::from_witness(name, designated_product_failure(dg))
}

fn scan2(g: &Groupoid, f: impl Fn(usize, usize) -> (usize, usize)) -> Option<Witness> {
    first_violation(g.n(), |[x, y]| f(x, y))
}

fn scan3(g: &Groupoid, f: impl Fn(usize, usize, usize) -> (usize, usize)) -> Option<Witness> {
    first_violation(g.n(), |[x, y, z]| f(x, y, z))
}

fn scan4(g: &Groupoid, f: impl Fn(usize, usize, usize, usize) -> (usize, usize)) -> Option<Witness> {
    first_violation(g.n(), |[x, y, z, w]| f(x, y, z, w))
}

/// `(x*y)*(z*w) = [x*(w^-1 * y^-1)]*z`.
fn identity_3_24(g: &Groupoid, inv: &InverseMap) -> Option<Witness> {
    let m = |a, b| g.mul(a, b);
    scan4(g, |x, y, z, w| {
        (m(m(x, y), m(z, w)), m(m(x, m(inv.get(w), inv.get(y))), z))
    })
}

/// `(x*y)*(z*w) = y*[(z^-1 * x^-1)*w]`.
fn identity_3_84(g: &Groupoid, inv: &InverseMap) -> Option<Witness> {
    let m = |a, b| g.mul(a, b);
    scan4(g, |x, y, z, w| {
        (m(m(x, y), m(z, w)), m(y, m(m(inv.get(z), inv.get(x)), w)))
    })
}

pub(crate) fn identity_3_133(dg: &DecoratedGroupoid) -> Option<Witness> {
    let (g, d) = (dg.groupoid(), dg.decoration());
    let m = |a, b| g.mul(a, b);
    scan3(g, |x, y, z| {
        let exy = d.meet_e(x, y);
        let eyz = d.meet_e(y, z);
        let exyz = d.meet_e(exy, z);
        (
            m(m(exyz, m(m(exy, x), m(exy, y))), m(exyz, z)),
            m(m(exyz, x), m(exyz, m(m(eyz, y), m(eyz, z)))),
        )
    })
}

pub(crate) fn identity_3_134(dg: &DecoratedGroupoid) -> Option<Witness> {
    let (g, d) = (dg.groupoid(), dg.decoration());
    let m = |a, b| g.mul(a, b);
    scan2(g, |x, y| {
        let e = d.meet_e(x, y);
        (m(m(e, m(d.local(x), x)), m(e, m(d.local(y), y))), m(x, y))
    })
}

/// The hand-coded lemma battery for a divided table. Check names match the
/// bundled identity corpus so engine and hand-coded verdicts can be compared.
pub fn lemma_battery(dg: &DecoratedGroupoid, kind: DivisionKind) -> Report {
    let (g, d) = (dg.groupoid(), dg.decoration());
    let inv = division_inverse(dg, kind);
    let m = |a, b| g.mul(a, b);
    let mut rep = Report::new(format!("{kind} division lemmas"));
    match kind {
        DivisionKind::Right => {
            // an inverse groupoid whose unique inverse is e_alpha * x
            rep.push(match g.inverse_map() {
                Ok(found) => Check::from_witness(
                    "3.21",
                    g.elements()
                        .find(|&x| found.get(x) != inv.get(x))
                        .map(|x| Witness::new([("x", x)]).with_sides(found.get(x), inv.get(x))),
                ),
                Err(f) => Check::fail("3.21", None).with_detail(format!("not an inverse groupoid: {f}")),
            });
            rep.push(idempotent_check("3.22", dg));
            rep.push(class_check("3.23", dg, WardKind::Ward));
            rep.push(Check::from_witness("3.24", identity_3_24(g, &inv)));
            rep.push(Check::from_witness(
                "3.25",
                scan2(g, |x, y| (m(x, m(d.meet_e(x, y), y)), m(x, inv.get(y)))),
            ));
            rep.push(Check::from_witness(
                "3.26",
                scan2(g, |x, y| (inv.get(m(x, y)), m(y, x))),
            ));
        }
        DivisionKind::Left => {
            // the groupoid is an inverse groupoid, and x * e_alpha is an
            // involution on each class giving the group inverse
            rep.push(match g.inverse_map() {
                Ok(_) => Check::from_witness("3.81", scan2(g, |x, _| (inv.get(inv.get(x)), x))),
                Err(f) => Check::fail("3.81", None).with_detail(format!("not an inverse groupoid: {f}")),
            });
            rep.push(idempotent_check("3.82", dg));
            rep.push(class_check("3.83", dg, WardKind::WardDual));
            rep.push(Check::from_witness("3.84", identity_3_84(g, &inv)));
            rep.push(Check::from_witness(
                "3.85",
                scan2(g, |x, y| (m(m(x, d.meet_e(x, y)), y), m(inv.get(x), y))),
            ));
            rep.push(Check::from_witness(
                "3.86",
                scan2(g, |x, y| (inv.get(m(x, y)), m(y, x))),
            ));
        }
        DivisionKind::Double => {
            rep.push(Check::from_witness("3.131", designated_product_failure(dg)));
            rep.push(class_check("3.132", dg, WardKind::DoubleWard));
            rep.push(Check::from_witness("3.133", identity_3_133(dg)));
            rep.push(Check::from_witness("3.134", identity_3_134(dg)));
        }
    }
    rep
}

/// Conditions a decorated table must meet before it can be reconstructed:
/// classes of the right quasigroup type with designated element `e_alpha`,
/// plus 3.24 (right), 3.84 (left) or 3.131, 3.133 and 3.134 (double).
pub fn membership_conditions(dg: &DecoratedGroupoid, kind: DivisionKind) -> Report {
    let g = dg.groupoid();
    let inv = division_inverse(dg, kind);
    let mut rep = Report::new(format!("{} membership", kind.collection()));
    match kind {
        DivisionKind::Right => {
            rep.push(class_check("3.23", dg, WardKind::Ward));
            rep.push(Check::from_witness("3.24", identity_3_24(g, &inv)));
        }
        DivisionKind::Left => {
            rep.push(class_check("3.83", dg, WardKind::WardDual));
            rep.push(Check::from_witness("3.84", identity_3_84(g, &inv)));
        }
        DivisionKind::Double => {
            rep.push(class_check("3.132", dg, WardKind::DoubleWard));
            rep.push(Check::from_witness("3.131", designated_product_failure(dg)));
            rep.push(Check::from_witness("3.133", identity_3_133(dg)));
            rep.push(Check::from_witness("3.134", identity_3_134(dg)));
        }
    }
    rep
}

fn violation(kind: DivisionKind, c: &Check) -> Error {
    let check = match &c.detail {
        Some(d) => format!("{} ({d})", c.name),
        None => c.name.clone(),
    };
    Error::MembershipViolation {
        kind: kind.to_string(),
        check,
        witness: c.witness.clone(),
    }
}

fn reconstruct_table(dg: &DecoratedGroupoid, kind: DivisionKind) -> Groupoid {
    let (g, d) = (dg.groupoid(), dg.decoration());
    let m = |a, b| g.mul(a, b);
    Groupoid::from_fn(g.n(), |x, y| {
        let e = d.meet_e(x, y);
        match kind {
            DivisionKind::Right => m(x, m(e, y)),
            DivisionKind::Left => m(m(x, e), y),
            DivisionKind::Double => m(m(e, x), m(e, y)),
        }
    })
}

/// Rebuilds the semilattice of groups from a divided table.
pub fn reconstruct(dg: &DecoratedGroupoid, kind: DivisionKind) -> Result<DecoratedGroupoid> {
    let rep = membership_conditions(dg, kind);
    if let Some(c) = rep.failures().next() {
        return Err(violation(kind, c));
    }
    let out = DecoratedGroupoid::new(reconstruct_table(dg, kind), dg.decoration().clone()).map_err(|e| {
        Error::PostConditionFailed {
            check: format!("class products: {e}"),
            witness: None,
        }
    })?;
    validate_slg(&out).map_err(|e| Error::PostConditionFailed {
        check: format!("reconstruction is a semilattice of groups: {e}"),
        witness: None,
    })?;
    Ok(out)
}

fn first_difference(a: &Groupoid, b: &Groupoid) -> Option<Witness> {
    first_violation(a.n(), |[x, y]| (a.mul(x, y), b.mul(x, y)))
}

/// Builds a decoration from a class assignment given as the designated
/// idempotent of each element. Classes are numbered by least member.
fn decoration_from_representatives(g: &Groupoid, rep_of: &[usize]) -> Result<Decoration> {
    let mut reps: Vec<usize> = Vec::new();
    for &r in rep_of {
        if !reps.contains(&r) {
            reps.push(r);
        }
    }
    // first-appearance order over ascending x is ascending least member
    let class_of: Vec<usize> = rep_of
        .iter()
        .map(|r| reps.iter().position(|q| q == r).unwrap())
        .collect();
    let k = reps.len();
    let class_table = Groupoid::from_fn(k, |a, b| class_of[g.mul(reps[a], reps[b])]);
    Decoration::new(class_of, reps, class_table)
}

fn decorate_by_squares(g: &Groupoid, kind: DivisionKind) -> Result<DecoratedGroupoid> {
    let law = if kind == DivisionKind::Right { "2" } else { "8" };
    let fail = |check: String, witness| Error::MembershipViolation {
        kind: kind.to_string(),
        check,
        witness,
    };
    let squares: Vec<usize> = g.elements().map(|x| g.mul(x, x)).collect();
    if let Some(x) = g.elements().find(|&x| !g.is_idempotent(squares[x])) {
        let s = squares[x];
        return Err(fail(
            format!("{law} (the square of x is not idempotent)"),
            Some(Witness::new([("x", x)]).with_sides(g.mul(s, s), s)),
        ));
    }
    let d = decoration_from_representatives(g, &squares)
        .map_err(|e| fail(format!("class semilattice ({e})"), square_class_witness(g, &squares)))?;
    DecoratedGroupoid::new(g.clone(), d)
        .map_err(|e| fail(format!("class products ({e})"), square_class_witness(g, &squares)))
}

/// Why the classes `{x : x*x = s}` do not form a semilattice of classes:
/// a product whose square is not the product of the squares, or squares
/// that fail to commute or associate.
fn square_class_witness(g: &Groupoid, squares: &[usize]) -> Option<Witness> {
    let m = |a, b| g.mul(a, b);
    scan2(g, |x, y| (squares[m(x, y)], squares[m(squares[x], squares[y])]))
        .or_else(|| scan2(g, |x, y| (m(squares[x], squares[y]), m(squares[y], squares[x]))))
        .or_else(|| {
            scan3(g, |x, y, z| {
                let (a, b, c) = (squares[x], squares[y], squares[z]);
                (m(m(a, b), c), m(a, m(b, c)))
            })
        })
}

fn confirm_round_trip(dg: DecoratedGroupoid, kind: DivisionKind) -> Result<DecoratedGroupoid> {
    let s = reconstruct(&dg, kind)?;
    let back = divide(&s, kind)?;
    if let Some(w) = first_difference(back.groupoid(), dg.groupoid()) {
        return Err(Error::MembershipViolation {
            kind: kind.to_string(),
            check: "divide(reconstruct(g)) = g".into(),
            witness: Some(w),
        });
    }
    Ok(dg)
}

/// Largest idempotent set the double-division decoration search accepts.
pub const MAX_IDEMPOTENTS: usize = 20;

/// Decides membership of a bare table in SLWQ, SLWDQ or SLDWQ and returns a
/// decoration witnessing it, or the reason it fails.
pub fn decide_membership(g: &Groupoid, kind: DivisionKind) -> Result<DecoratedGroupoid> {
    match kind {
        DivisionKind::Right | DivisionKind::Left => confirm_round_trip(decorate_by_squares(g, kind)?, kind),
        DivisionKind::Double => search_double_decoration(g),
    }
}

/// [`decide_membership`] without the explanation.
pub fn check_membership(g: &Groupoid, kind: DivisionKind) -> Option<DecoratedGroupoid> {
    decide_membership(g, kind).ok()
}

/// Bit sets over the carrier.
type Bits = Vec<u64>;

fn bits(n: usize, members: impl Iterator<Item = usize>) -> Bits {
    let mut b = vec![0u64; n.div_ceil(64)];
    for x in members {
        b[x / 64] |= 1 << (x % 64);
    }
    b
}

fn has(b: &Bits, x: usize) -> bool {
    b[x / 64] >> (x % 64) & 1 == 1
}

fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Searches idempotent families `D` in lexicographic order. Each `e` in `D`
/// claims `Fix(e) = {x : e*(e*x) = x}`, and `x` goes to the `e` whose fixed
/// set is the least one containing it. A candidate is accepted only when
/// reconstructing and dividing again gives back the table.
fn search_double_decoration(g: &Groupoid) -> Result<DecoratedGroupoid> {
    let n = g.n();
    let idem = g.idempotents();
    if idem.len() > MAX_IDEMPOTENTS {
        return Err(Error::SizeLimit {
            what: "idempotent set for the decoration search",
            limit: MAX_IDEMPOTENTS,
            got: idem.len(),
        });
    }
    let fix: Vec<Bits> = idem
        .iter()
        .map(|&e| bits(n, g.elements().filter(|&x| g.mul(e, g.mul(e, x)) == x)))
        .collect();
    // an idempotent whose fixed set is not the least one around it can never
    // be designated, in any family containing the smaller set
    let mut search = DoubleSearch {
        g,
        idem: &idem,
        fix: &fix,
        chosen: Vec::new(),
        tried: 0,
        found: None,
        witness: None,
    };
    search.extend(0);
    match search.found {
        Some(dg) => Ok(dg),
        None => Err(Error::MembershipViolation {
            kind: DivisionKind::Double.to_string(),
            check: format!(
                "decoration search ({} candidate idempotent families, none reproduces the table)",
                search.tried
            ),
            witness: search.witness.or_else(|| {
                // with no idempotent at all, 0 is a witness
                idem.is_empty()
                    .then(|| Witness::new([("x", 0)]).with_sides(g.mul(0, 0), 0))
            }),
        }),
    }
}

struct DoubleSearch<'a> {
    g: &'a Groupoid,
    idem: &'a [usize],
    fix: &'a [Bits],
    chosen: Vec<usize>,
    tried: usize,
    found: Option<DecoratedGroupoid>,
    /// Why the first rejected candidate failed.
    witness: Option<Witness>,
}

impl DoubleSearch<'_> {
    fn extend(&mut self, from: usize) {
        for i in from..self.idem.len() {
            if self.found.is_some() {
                return;
            }
            if !self.compatible(i) {
                continue;
            }
            self.chosen.push(i);
            self.try_candidate();
            self.extend(i + 1);
            self.chosen.pop();
        }
    }

    /// Pruning that stays valid for every superset: fixed sets must be
    /// distinct, and no chosen idempotent may sit inside a strictly smaller
    /// fixed set of another.
    fn compatible(&self, i: usize) -> bool {
        let (e, fi) = (self.idem[i], &self.fix[i]);
        self.chosen.iter().all(|&j| {
            let (f, fj) = (self.idem[j], &self.fix[j]);
            let same = fi == fj;
            let e_below = has(fj, e) && subset(fj, fi);
            let f_below = has(fi, f) && subset(fi, fj);
            !same && !e_below && !f_below
        })
    }

    fn try_candidate(&mut self) {
        let g = self.g;
        let d: Vec<usize> = self.chosen.iter().map(|&i| self.idem[i]).collect();
        if d.iter().any(|&a| d.iter().any(|&b| !d.contains(&g.mul(a, b)))) {
            return;
        }
        self.tried += 1;
        let mut rep_of = Vec::with_capacity(g.n());
        for x in g.elements() {
            let holders: Vec<usize> = self.chosen.iter().copied().filter(|&i| has(&self.fix[i], x)).collect();
            let least: Vec<usize> = holders
                .iter()
                .copied()
                .filter(|&i| !holders.iter().any(|&j| j != i && subset(&self.fix[j], &self.fix[i])))
                .collect();
            match least.as_slice() {
                [i] => rep_of.push(self.idem[*i]),
                _ => {
                    // x is fixed by none of the chosen e, or by two incomparable ones
                    let e = d[0];
                    self.note(Witness::new([("x", x), ("e", e)]).with_sides(g.mul(e, g.mul(e, x)), x));
                    return;
                }
            }
        }
        let dg = decoration_from_representatives(g, &rep_of).and_then(|dec| DecoratedGroupoid::new(g.clone(), dec));
        let dg = match dg {
            Ok(dg) => dg,
            Err(_) => {
                if let Some(w) = square_class_witness(g, &rep_of) {
                    self.note(w);
                }
                return;
            }
        };
        match confirm_round_trip(dg, DivisionKind::Double) {
            Ok(dg) => self.found = Some(dg),
            Err(Error::MembershipViolation { witness: Some(w), .. }) => self.note(w),
            Err(_) => {}
        }
    }

    fn note(&mut self, w: Witness) {
        self.witness.get_or_insert(w);
    }
}

fn require_classes(dg: &DecoratedGroupoid, kind: WardKind) -> Result<()> {
    match class_failure(dg, kind) {
        None => Ok(()),
        Some(c) => Err(Error::PreconditionViolation(format!(
            "not a semilattice of {kind} quasigroups: {}{}",
            c.detail.unwrap_or_default(),
            c.witness.map(|w| format!(" at {w}")).unwrap_or_default()
        ))),
    }
}

fn designated_closed(dg: &DecoratedGroupoid) -> bool {
    let (g, d) = (dg.groupoid(), dg.decoration());
    let es = d.e_of_class();
    es.iter().all(|&a| es.iter().all(|&b| es.contains(&g.mul(a, b))))
}

fn idempotent_report(title: &str, dg: &DecoratedGroupoid) -> Report {
    let mut rep = Report::new(title);
    rep.push(Check::from_witness("idempotents", stray_idempotent(dg)).with_detail("E(S,*) = {e_alpha}"));
    let products = designated_product_failure(dg);
    rep.push(Check::from_witness("products", products.clone()).with_detail("e_alpha * e_beta = e_alphabeta"));
    rep.push(
        Check::from_bool("isomorphism", designated_closed(dg) && products.is_none())
            .with_detail("e_alpha -> alpha is an isomorphism onto the class semilattice"),
    );
    rep
}

/// For a semilattice of Ward quasigroups satisfying 3.24: the idempotents
/// are exactly the `e_alpha`, they multiply like their classes, and
/// `e_alpha -> alpha` is an isomorphism.
pub fn verify_result_12(dg: &DecoratedGroupoid) -> Result<Report> {
    require_classes(dg, WardKind::Ward)?;
    let inv = division_inverse(dg, DivisionKind::Right);
    if let Some(w) = identity_3_24(dg.groupoid(), &inv) {
        return Err(Error::PreconditionViolation(format!("identity (I) fails at {w}")));
    }
    Ok(idempotent_report("Result 12", dg))
}

/// Mirror of [`verify_result_12`] for Ward dual classes and 3.84.
pub fn verify_result_13(dg: &DecoratedGroupoid) -> Result<Report> {
    require_classes(dg, WardKind::WardDual)?;
    let inv = division_inverse(dg, DivisionKind::Left);
    if let Some(w) = identity_3_84(dg.groupoid(), &inv) {
        return Err(Error::PreconditionViolation(format!(
            "identity (x*y)*(z*w) = y*[(z^-1*x^-1)*w] fails at {w}"
        )));
    }
    Ok(idempotent_report("Result 13", dg))
}

/// For a semilattice of double Ward quasigroups, reports which of
///
/// 1. `({e_alpha}, *)` is isomorphic to the class semilattice,
/// 2. `(e_a*e_b)*(e_s*e_g) = e_b*[(e_g*e_s)*e_a]` for all classes,
/// 3. `e_alpha -> alpha` is an isomorphism
///
/// hold. The three are equivalent, so the `equivalence` check fails only if
/// some but not all of them hold.
pub fn verify_result_14(dg: &DecoratedGroupoid) -> Result<Report> {
    require_classes(dg, WardKind::DoubleWard)?;
    let (g, d) = (dg.groupoid(), dg.decoration());
    let es = d.e_of_class();
    let one = designated_closed(dg) && {
        let sub = g.restrict(es).expect("designated elements are in range");
        sub.is_some_and(|s| s.is_isomorphic(d.class_table()))
    };
    let e = |a: usize| d.e(a);
    let m = |a, b| g.mul(a, b);
    let two = first_violation(d.k(), |[a, b, s, c]| {
        (m(m(e(a), e(b)), m(e(s), e(c))), m(e(b), m(m(e(c), e(s)), e(a))))
    })
    .map(|w| {
        Witness::new(
            ["alpha", "beta", "sigma", "gamma"]
                .into_iter()
                .zip(w.assignment.iter().map(|p| p.1)),
        )
        .with_sides(w.lhs.unwrap(), w.rhs.unwrap())
    });
    let three = designated_closed(dg) && designated_product_failure(dg).is_none();

    let mut rep = Report::new("Result 14");
    rep.push(Check::from_bool("(1)", one).with_detail("({e_alpha}, *) is isomorphic to Y"));
    rep.push(Check::from_witness("(2)", two.clone()).with_detail("idempotent identity"));
    rep.push(Check::from_bool("(3)", three).with_detail("e_alpha -> alpha is an isomorphism"));
    let holds = [one, two.is_none(), three];
    rep.push(
        Check::from_bool("equivalence", holds.iter().all(|&h| h) || holds.iter().all(|&h| !h))
            .with_detail(format!("(1)={} (2)={} (3)={}", holds[0], holds[1], holds[2])),
    );
    Ok(rep)
}

/// Which side of a division correspondence a table sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Semigroup,
    Quotient,
}

/// Round trip in both directions with exact table equality. A semilattice
/// of groups is treated as the semigroup side; anything else must meet the
/// membership conditions for `kind`.
pub fn roundtrip_theorem(dg: &DecoratedGroupoid, kind: DivisionKind) -> Result<Report> {
    let mut rep = Report::new(format!("{kind} division round trip"));
    let (s, q) = if validate_slg(dg).is_ok() {
        rep.push(Check::pass("side").with_detail("input is a semilattice of groups"));
        let q = divide(dg, kind)?;
        (dg.clone(), q)
    } else {
        rep.push(Check::pass("side").with_detail(format!("input is a member of {}", kind.collection())));
        let s = reconstruct(dg, kind)?;
        (s, dg.clone())
    };
    let s2 = reconstruct(&q, kind)?;
    rep.push(Check::from_witness(
        "reconstruct(divide(s)) = s",
        first_difference(s2.groupoid(), s.groupoid()),
    ));
    let q2 = divide(&s, kind)?;
    rep.push(Check::from_witness(
        "divide(reconstruct(q)) = q",
        first_difference(q2.groupoid(), q.groupoid()),
    ));
    Ok(rep)
}

/// The duality statements: the dual of a semilattice of groups is one, the
/// dual of SLWQ is SLWDQ and back, SLDWQ is closed under duals, and SLWDQ
/// members satisfy `(x*y)*(z*w) = y*[(z^-1*x^-1)*w]`. Statements whose
/// hypothesis the input does not meet are skipped.
pub fn duality_theorems(g: &Groupoid) -> Report {
    let dual = g.dual();
    let mut rep = Report::new("duality");
    let skip = |name: &str, why: &str| Check::skipped(name, why);

    rep.push(if crate::clifford::is_slg(g) {
        Check::from_bool("3.17", crate::clifford::is_slg(&dual)).with_detail("dual of a semilattice of groups")
    } else {
        skip("3.17", "input is not a semilattice of groups")
    });
    rep.push(match check_membership(g, DivisionKind::Right) {
        Some(_) => Check::from_bool("3.18", check_membership(&dual, DivisionKind::Left).is_some())
            .with_detail("dual of an SLWQ member is in SLWDQ"),
        None => skip("3.18", "input is not in SLWQ"),
    });
    let slwdq = check_membership(g, DivisionKind::Left);
    rep.push(match &slwdq {
        Some(_) => Check::from_bool("3.18 converse", check_membership(&dual, DivisionKind::Right).is_some())
            .with_detail("dual of an SLWDQ member is in SLWQ"),
        None => skip("3.18 converse", "input is not in SLWDQ"),
    });
    rep.push(match &slwdq {
        Some(dg) => Check::from_witness(
            "3.19",
            identity_3_84(dg.groupoid(), &division_inverse(dg, DivisionKind::Left)),
        ),
        None => skip("3.19", "input is not in SLWDQ"),
    });
    rep.push(match check_membership(g, DivisionKind::Double) {
        Some(_) => Check::from_bool("3.20", check_membership(&dual, DivisionKind::Double).is_some())
            .with_detail("dual of an SLDWQ member is in SLDWQ"),
        None => skip("3.20", "input is not in SLDWQ"),
    });
    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BijectionDirection {
    ToSlwq,
    ToSldwq,
}

/// `x o y = (e_ab * x) * y`, mapping SLDWQ to SLWQ and SLWQ to SLDWQ.
pub fn slwq_sldwq_bijection(dg: &DecoratedGroupoid, direction: BijectionDirection) -> Result<DecoratedGroupoid> {
    let (from, to) = match direction {
        BijectionDirection::ToSlwq => (DivisionKind::Double, DivisionKind::Right),
        BijectionDirection::ToSldwq => (DivisionKind::Right, DivisionKind::Double),
    };
    if let Some(c) = membership_conditions(dg, from).failures().next() {
        return Err(violation(from, c));
    }
    let (g, d) = (dg.groupoid(), dg.decoration());
    let table = Groupoid::from_fn(g.n(), |x, y| g.mul(g.mul(d.meet_e(x, y), x), y));
    let out = DecoratedGroupoid::new(table, d.clone()).map_err(|e| Error::PostConditionFailed {
        check: format!("class products: {e}"),
        witness: None,
    })?;
    if let Some(c) = membership_conditions(&out, to).failures().next() {
        return Err(Error::PostConditionFailed {
            check: format!("image is in {}: {}", to.collection(), c.name),
            witness: c.witness.clone(),
        });
    }
    Ok(out)
}

/// Applies the bijection and its inverse and compares tables exactly.
pub fn bijection_report(dg: &DecoratedGroupoid) -> Result<Report> {
    let mut rep = Report::new("SLWQ / SLDWQ bijection");
    let mut applicable = false;
    for (dir, back, name) in [
        (
            BijectionDirection::ToSlwq,
            BijectionDirection::ToSldwq,
            "to_sldwq(to_slwq(q)) = q",
        ),
        (
            BijectionDirection::ToSldwq,
            BijectionDirection::ToSlwq,
            "to_slwq(to_sldwq(q)) = q",
        ),
    ] {
        let source = if dir == BijectionDirection::ToSlwq {
            DivisionKind::Double
        } else {
            DivisionKind::Right
        };
        if !membership_conditions(dg, source).passed() {
            rep.push(Check::skipped(name, format!("input is not in {}", source.collection())));
            continue;
        }
        applicable = true;
        let there = slwq_sldwq_bijection(dg, dir)?;
        let again = slwq_sldwq_bijection(&there, back)?;
        rep.push(Check::from_witness(
            name,
            first_difference(again.groupoid(), dg.groupoid()),
        ));
    }
    if !applicable {
        return Err(Error::MembershipViolation {
            kind: "double or right".into(),
            check: "input is in neither SLDWQ nor SLWQ".into(),
            witness: None,
        });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{decompose_slg, is_slg};
    use crate::fixtures::*;

    fn decorated(g: &Groupoid) -> DecoratedGroupoid {
        decompose_slg(g).unwrap().decorated
    }

    /// Division by formula, straight from the group inverses of each class.
    fn oracle_divide(g: &Groupoid, kind: DivisionKind) -> Groupoid {
        let inv: Vec<usize> = g
            .elements()
            .map(|x| {
                g.elements()
                    .find(|&y| g.mul(g.mul(x, y), x) == x && g.mul(g.mul(y, x), y) == y && g.mul(x, y) == g.mul(y, x))
                    .unwrap()
            })
            .collect();
        Groupoid::from_fn(g.n(), |x, y| match kind {
            DivisionKind::Right => g.mul(x, inv[y]),
            DivisionKind::Left => g.mul(inv[x], y),
            DivisionKind::Double => g.mul(inv[x], inv[y]),
        })
    }

    #[test]
    fn divide_examples() {
        let s = decorated(&t_slg4());
        assert_eq!(divide(&s, DivisionKind::Right).unwrap().groupoid(), &t_rd4());
        assert_eq!(divide(&s, DivisionKind::Left).unwrap().groupoid(), &t_ld4());
        assert_eq!(divide(&s, DivisionKind::Double).unwrap().groupoid(), &t_dd4());
        let s3 = decorated(&t_slg3());
        for kind in DivisionKind::ALL {
            assert_eq!(divide(&s3, kind).unwrap().groupoid(), &t_slg3());
        }
        for g in [t_slg4(), t_slg3(), t_slg4iso(), t_s3(), t_z3()] {
            for kind in DivisionKind::ALL {
                assert_eq!(
                    divide(&decorated(&g), kind).unwrap().groupoid(),
                    &oracle_divide(&g, kind)
                );
            }
        }
    }

    #[test]
    fn divide_rejects_non_slg() {
        let d = check_membership(&t_rd4(), DivisionKind::Right).unwrap();
        assert!(matches!(divide(&d, DivisionKind::Right), Err(Error::NotAnSlg(_))));
    }

    #[test]
    fn reconstruct_examples() {
        let s = decorated(&t_slg4());
        for (table, kind) in [
            (t_rd4(), DivisionKind::Right),
            (t_ld4(), DivisionKind::Left),
            (t_dd4(), DivisionKind::Double),
        ] {
            let q = DecoratedGroupoid::new(table, s.decoration().clone()).unwrap();
            assert_eq!(reconstruct(&q, kind).unwrap().groupoid(), &t_slg4());
        }
    }

    #[test]
    fn reconstruct_rejects_wrong_kind() {
        let s = decorated(&t_slg4());
        let q = DecoratedGroupoid::new(t_ld4(), s.decoration().clone()).unwrap();
        let err = reconstruct(&q, DivisionKind::Right).unwrap_err();
        match err {
            Error::MembershipViolation { kind, check, .. } => {
                assert_eq!(kind, "right");
                assert!(check.starts_with("3.23"), "{check}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn membership_examples() {
        let d = check_membership(&t_rd4(), DivisionKind::Right).unwrap();
        assert_eq!(d.decoration().class_of(), &[0, 0, 0, 1]);
        assert_eq!(d.decoration().e_of_class(), &[0, 3]);
        assert!(check_membership(&t_z3(), DivisionKind::Right).is_none());
        let d = check_membership(&t_dd4(), DivisionKind::Double).unwrap();
        assert_eq!(d.decoration().class_of(), &[0, 0, 0, 1]);
        assert_eq!(d.decoration().e_of_class(), &[0, 3]);
        assert_eq!(t_dd4().idempotents(), vec![0, 1, 2, 3]);
        let d = check_membership(&t_ld4(), DivisionKind::Left).unwrap();
        assert_eq!(d.decoration().e_of_class(), &[0, 3]);
        assert!(check_membership(&t_ld4(), DivisionKind::Right).is_none());
        assert!(check_membership(&t_lp2(), DivisionKind::Double).is_none());
    }

    #[test]
    fn membership_explains_failure() {
        match decide_membership(&t_z3(), DivisionKind::Right).unwrap_err() {
            Error::MembershipViolation { check, witness, .. } => {
                assert!(check.starts_with('2'));
                assert_eq!(witness.unwrap().assignment, vec![("x".into(), 1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_class_membership_matches_recognizers() {
        use crate::quasigroup::{is_double_ward, is_ward, is_ward_dual};
        for g in [t_z3rd(), t_z3dd(), t_z3(), t_z2(), t_trivial(), t_s3(), t_lp2()] {
            assert_eq!(
                check_membership(&g, DivisionKind::Right).is_some(),
                is_ward(&g).is_some()
            );
            assert_eq!(
                check_membership(&g, DivisionKind::Left).is_some(),
                is_ward_dual(&g).is_some()
            );
            assert_eq!(
                check_membership(&g, DivisionKind::Double).is_some(),
                is_double_ward(&g).is_some()
            );
        }
    }

    #[test]
    fn result_12_13_14_examples() {
        let s = decorated(&t_slg4());
        let rd = divide(&s, DivisionKind::Right).unwrap();
        assert!(verify_result_12(&rd).unwrap().passed());
        let slg3 = decorated(&t_slg3());
        assert!(verify_result_12(&slg3).unwrap().passed());
        let z3rd = check_membership(&t_z3rd(), DivisionKind::Right).unwrap();
        assert!(verify_result_12(&z3rd).unwrap().passed());
        let ld = divide(&s, DivisionKind::Left).unwrap();
        assert!(verify_result_13(&ld).unwrap().passed());
        assert!(matches!(verify_result_12(&ld), Err(Error::PreconditionViolation(_))));
        let dd = divide(&s, DivisionKind::Double).unwrap();
        let r14 = verify_result_14(&dd).unwrap();
        assert!(r14.passed());
        assert!(r14.checks.iter().all(|c| c.passed()));
        let z3dd = check_membership(&t_z3dd(), DivisionKind::Double).unwrap();
        assert!(verify_result_14(&z3dd).unwrap().passed());
        assert!(matches!(verify_result_14(&rd), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn roundtrip_examples() {
        let s = decorated(&t_slg4());
        assert!(roundtrip_theorem(&s, DivisionKind::Right).unwrap().passed());
        let iso = decorated(&t_slg4iso());
        assert!(roundtrip_theorem(&iso, DivisionKind::Double).unwrap().passed());
        let z3 = decorated(&t_z3());
        assert!(roundtrip_theorem(&z3, DivisionKind::Left).unwrap().passed());
        let q = check_membership(&t_dd4(), DivisionKind::Double).unwrap();
        let rep = roundtrip_theorem(&q, DivisionKind::Double).unwrap();
        assert!(rep.passed());
        assert!(rep.checks[0].detail.as_deref().unwrap().contains("SLDWQ"));
    }

    #[test]
    fn duality_examples() {
        let rep = duality_theorems(&t_slg4());
        assert_eq!(rep.check("3.17").unwrap().status, crate::report::Status::Pass);
        let rep = duality_theorems(&t_rd4());
        assert_eq!(rep.check("3.18").unwrap().status, crate::report::Status::Pass);
        assert_eq!(rep.check("3.17").unwrap().status, crate::report::Status::Skipped);
        // the transpose of right division is left division of the dual semigroup
        let dual_s = decorated(&t_slg4().dual());
        assert_eq!(&t_rd4().dual(), divide(&dual_s, DivisionKind::Left).unwrap().groupoid());
        let rep = duality_theorems(&t_dd4());
        assert_eq!(rep.check("3.20").unwrap().status, crate::report::Status::Pass);
        assert!(rep.passed());
        assert!(is_slg(&t_slg4().dual()));
    }

    #[test]
    fn bijection_examples() {
        let dd = check_membership(&t_dd4(), DivisionKind::Double).unwrap();
        let rd = slwq_sldwq_bijection(&dd, BijectionDirection::ToSlwq).unwrap();
        assert_eq!(rd.groupoid(), &t_rd4());
        let back = slwq_sldwq_bijection(&rd, BijectionDirection::ToSldwq).unwrap();
        assert_eq!(back.groupoid(), &t_dd4());
        let z = check_membership(&t_z3dd(), DivisionKind::Double).unwrap();
        assert_eq!(
            slwq_sldwq_bijection(&z, BijectionDirection::ToSlwq).unwrap().groupoid(),
            &t_z3rd()
        );
        assert!(bijection_report(&dd).unwrap().passed());
        let s = decorated(&t_slg4());
        assert!(slwq_sldwq_bijection(&s, BijectionDirection::ToSlwq).is_err());
    }

    #[test]
    fn left_division_inverse_groupoid_is_trivial() {
        // under left division every element is its own unique groupoid inverse
        let inv = t_ld4().inverse_map().unwrap();
        assert_eq!(inv.inv, vec![0, 1, 2, 3]);
        let dg = check_membership(&t_ld4(), DivisionKind::Left).unwrap();
        assert_eq!(division_inverse(&dg, DivisionKind::Left).inv, vec![0, 2, 1, 3]);
    }

    #[test]
    fn every_membership_failure_has_a_witness() {
        for n in 1..=3usize {
            let cells = n * n;
            for code in 0..n.pow(cells as u32) {
                let mut c = code;
                let flat: Vec<usize> = (0..cells)
                    .map(|_| {
                        let v = c % n;
                        c /= n;
                        v
                    })
                    .collect();
                let g = Groupoid::from_fn(n, |x, y| flat[x * n + y]);
                for kind in DivisionKind::ALL {
                    match decide_membership(&g, kind) {
                        Ok(_) => {}
                        Err(Error::MembershipViolation { witness, check, .. }) => {
                            assert!(witness.is_some(), "{kind} on {g:?}: {check}")
                        }
                        Err(e) => panic!("{kind} on {g:?}: unexpected {e}"),
                    }
                }
            }
        }
    }
}
