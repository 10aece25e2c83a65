//! Ward, Ward-dual and double-Ward quasigroups and their conversions to and
//! from groups.
//!
//! A Ward quasigroup is the right-division table `x * y = x o y^-1` of a
//! group, a Ward-dual quasigroup is `y o x^-1`, and a double-Ward quasigroup
//! is `x^-1 o y^-1`. Each recognizer checks the defining law over the whole
//! table, and then re-checks the consequences that the defining law implies.
//! Those consequences failing would be a bug, so they panic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::Groupoid;
use crate::report::{Check, Report, Witness};
use crate::scan::first_violation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WardKind {
    Ward,
    WardDual,
    DoubleWard,
}

impl fmt::Display for WardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WardKind::Ward => "ward",
            WardKind::WardDual => "ward_dual",
            WardKind::DoubleWard => "double_ward",
        })
    }
}

/// A recognized quasigroup together with its distinguished element.
///
/// For Ward and Ward-dual quasigroups `r` is the unique square. For
/// double-Ward quasigroups `r` is the chosen `e` and `admissible` lists every
/// `e` satisfying the defining law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WardStructure {
    groupoid: Groupoid,
    r: usize,
    kind: WardKind,
    admissible: Vec<usize>,
}

impl WardStructure {
    /// Validates `g` as a quasigroup of `kind` with distinguished element `r`.
    pub fn new(g: Groupoid, r: usize, kind: WardKind) -> Result<Self> {
        if r >= g.n() {
            return Err(Error::IndexOutOfRange { index: r, n: g.n() });
        }
        let found = match kind {
            WardKind::Ward => is_ward(&g),
            WardKind::WardDual => is_ward_dual(&g),
            WardKind::DoubleWard => is_double_ward(&g),
        };
        match found {
            Some(mut s) if kind == WardKind::DoubleWard && s.admissible.contains(&r) => {
                s.r = r;
                Ok(s)
            }
            Some(s) if s.r == r => Ok(s),
            Some(s) => Err(Error::MalformedStructure(format!(
                "{kind} quasigroup has distinguished element {}, not {r}",
                s.r
            ))),
            None => Err(Error::MalformedStructure(format!("table is not a {kind} quasigroup"))),
        }
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn kind(&self) -> WardKind {
        self.kind
    }

    /// All admissible `e` for a double-Ward quasigroup; `[r]` otherwise.
    pub fn admissible(&self) -> &[usize] {
        &self.admissible
    }

    fn expect_kind(&self, kind: WardKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::MalformedStructure(format!(
                "expected a {kind} quasigroup, got {}",
                self.kind
            )))
        }
    }
}

/// Identity and inverses of a group table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupView {
    pub identity: usize,
    pub inverse: Vec<usize>,
}

/// Decides whether `g` is a group (an associative quasigroup) and returns
/// its identity and inverse map.
pub fn group_view(g: &Groupoid) -> Result<GroupView> {
    if !g.is_quasigroup() {
        return Err(Error::NotAGroup("table is not a Latin square".into()));
    }
    if let Some((x, y, z)) = g.associativity_violation() {
        return Err(Error::NotAGroup(format!("not associative at ({x}, {y}, {z})")));
    }
    // an associative quasigroup has exactly one idempotent, its identity
    let identity = g
        .elements()
        .find(|&x| g.is_idempotent(x))
        .ok_or_else(|| Error::NotAGroup("no idempotent".into()))?;
    let inverse = g
        .elements()
        .map(|x| {
            g.elements()
                .find(|&y| g.mul(x, y) == identity)
                .expect("quasigroup rows are permutations")
        })
        .collect();
    Ok(GroupView { identity, inverse })
}

pub fn is_group(g: &Groupoid) -> bool {
    group_view(g).is_ok()
}

fn law(report: &mut Report, name: &str, witness: Option<Witness>) {
    report.push(Check::from_witness(name, witness));
}

/// Least `(x, y, z)` with `y < z` and either `x*y = x*z` (a repeated row
/// entry) or `y*x = z*x` (a repeated column entry).
pub fn quasigroup_violation(g: &Groupoid) -> Option<Witness> {
    let n = g.n();
    for x in 0..n {
        for y in 0..n {
            for z in y + 1..n {
                if g.mul(x, y) == g.mul(x, z) {
                    return Some(Witness::xyzw(&[x, y, z]).with_sides(g.mul(x, y), g.mul(x, z)));
                }
                if g.mul(y, x) == g.mul(z, x) {
                    return Some(Witness::xyzw(&[x, y, z]).with_sides(g.mul(y, x), g.mul(z, x)));
                }
            }
        }
    }
    None
}

/// Identities (1) through (6) with right identity `r`.
pub fn ward_laws(g: &Groupoid, r: usize) -> Report {
    let n = g.n();
    let m = |a, b| g.mul(a, b);
    let mut rep = Report::new("ward identities");
    law(
        &mut rep,
        "1",
        first_violation(n, |[x, y, z]| (m(m(x, z), m(y, z)), m(x, y))),
    );
    law(&mut rep, "2", first_violation(n, |[x]| (m(x, x), r)));
    law(&mut rep, "3", first_violation(n, |[x]| (m(x, r), x)));
    law(&mut rep, "4", first_violation(n, |[x, y]| (m(r, m(x, y)), m(y, x))));
    law(&mut rep, "5", first_violation(n, |[x]| (m(r, m(r, x)), x)));
    law(
        &mut rep,
        "6",
        first_violation(n, |[x, y, z]| (m(m(x, y), z), m(x, m(z, m(r, y))))),
    );
    rep
}

/// Identities (7) through (12) with left identity `r`.
pub fn ward_dual_laws(g: &Groupoid, r: usize) -> Report {
    let n = g.n();
    let m = |a, b| g.mul(a, b);
    let mut rep = Report::new("ward dual identities");
    law(
        &mut rep,
        "7",
        first_violation(n, |[x, y, z]| (m(m(z, x), m(z, y)), m(x, y))),
    );
    law(&mut rep, "8", first_violation(n, |[x]| (m(x, x), r)));
    law(&mut rep, "9", first_violation(n, |[x]| (m(r, x), x)));
    law(&mut rep, "10", first_violation(n, |[x, y]| (m(x, y), m(m(y, x), r))));
    law(&mut rep, "11", first_violation(n, |[x]| (m(m(x, r), r), x)));
    law(
        &mut rep,
        "12",
        first_violation(n, |[x, y, z]| (m(x, m(y, z)), m(m(m(y, r), x), z))),
    );
    rep
}

fn law_13(g: &Groupoid, e: usize) -> Option<Witness> {
    let m = |a, b| g.mul(a, b);
    first_violation(g.n(), |[x, y, z]| (m(m(m(e, e), m(x, z)), m(m(e, y), z)), m(x, y)))
}

/// Identities (13) through (19) for the element `e`.
pub fn double_ward_laws(g: &Groupoid, e: usize) -> Report {
    let n = g.n();
    let m = |a, b| g.mul(a, b);
    let mut rep = Report::new("double ward identities");
    law(&mut rep, "13", law_13(g, e));
    law(&mut rep, "14", first_violation::<1>(n, |_| (m(e, e), e)));
    law(
        &mut rep,
        "15",
        first_violation(n, |[x, y, z]| (m(m(e, m(x, z)), m(m(e, y), z)), m(x, y))),
    );
    law(
        &mut rep,
        "16",
        first_violation(n, |[x, y]| (m(m(y, x), y), x)).or_else(|| first_violation(n, |[x, y]| (x, m(y, m(x, y))))),
    );
    law(&mut rep, "17", first_violation(n, |[x]| (m(e, x), m(x, e))));
    law(
        &mut rep,
        "18",
        first_violation(n, |[x]| (m(x, m(x, e)), e)).or_else(|| first_violation(n, |[x]| (e, m(m(e, x), x)))),
    );
    law(
        &mut rep,
        "19",
        first_violation(n, |[x, y]| (m(x, y), m(e, m(m(e, y), m(e, x))))),
    );
    rep
}

fn assert_consequences(rep: Report) {
    if let Some(c) = rep.failures().next() {
        panic!(
            "{}: identity ({}) fails{}; the defining law should imply it",
            rep.title,
            c.name,
            c.witness.as_ref().map(|w| format!(" at {w}")).unwrap_or_default()
        );
    }
}

/// Recognizes a Ward quasigroup: a quasigroup with `(x*z)*(y*z) = x*y`.
pub fn is_ward(g: &Groupoid) -> Option<WardStructure> {
    if !g.is_quasigroup() {
        return None;
    }
    let m = |a, b| g.mul(a, b);
    if first_violation(g.n(), |[x, y, z]| (m(m(x, z), m(y, z)), m(x, y))).is_some() {
        return None;
    }
    let r = g.mul(0, 0);
    assert_consequences(ward_laws(g, r));
    Some(WardStructure {
        groupoid: g.clone(),
        r,
        kind: WardKind::Ward,
        admissible: vec![r],
    })
}

/// Recognizes a Ward-dual quasigroup: a quasigroup with `(z*x)*(z*y) = x*y`.
pub fn is_ward_dual(g: &Groupoid) -> Option<WardStructure> {
    if !g.is_quasigroup() {
        return None;
    }
    let m = |a, b| g.mul(a, b);
    if first_violation(g.n(), |[x, y, z]| (m(m(z, x), m(z, y)), m(x, y))).is_some() {
        return None;
    }
    let r = g.mul(0, 0);
    assert_consequences(ward_dual_laws(g, r));
    Some(WardStructure {
        groupoid: g.clone(),
        r,
        kind: WardKind::WardDual,
        admissible: vec![r],
    })
}

/// Every `e` for which identity (13) holds, ascending.
pub fn double_ward_elements(g: &Groupoid) -> Vec<usize> {
    g.elements().filter(|&e| law_13(g, e).is_none()).collect()
}

/// Recognizes a double-Ward quasigroup, reporting the least admissible `e`
/// as `r` and all admissible values in `admissible`.
pub fn is_double_ward(g: &Groupoid) -> Option<WardStructure> {
    if !g.is_quasigroup() {
        return None;
    }
    let admissible = double_ward_elements(g);
    let &r = admissible.first()?;
    for &e in &admissible {
        assert_consequences(double_ward_laws(g, e));
    }
    Some(WardStructure {
        groupoid: g.clone(),
        r,
        kind: WardKind::DoubleWard,
        admissible,
    })
}

/// `x * y = x o y^-1`.
pub fn ward_from_group(g: &Groupoid) -> Result<Groupoid> {
    let gv = group_view(g)?;
    Ok(Groupoid::from_fn(g.n(), |x, y| g.mul(x, gv.inverse[y])))
}

/// `x * y = y o x^-1`.
pub fn ward_dual_from_group(g: &Groupoid) -> Result<Groupoid> {
    let gv = group_view(g)?;
    Ok(Groupoid::from_fn(g.n(), |x, y| g.mul(y, gv.inverse[x])))
}

/// `x * y = x^-1 o y^-1`.
pub fn double_ward_from_group(g: &Groupoid) -> Result<Groupoid> {
    let gv = group_view(g)?;
    Ok(Groupoid::from_fn(g.n(), |x, y| g.mul(gv.inverse[x], gv.inverse[y])))
}

/// `x o y = x * (r * y)`; the group has identity `r` and `x^-1 = r * x`.
pub fn group_from_ward(w: &WardStructure) -> Result<Groupoid> {
    w.expect_kind(WardKind::Ward)?;
    let (g, r) = (&w.groupoid, w.r);
    Ok(Groupoid::from_fn(g.n(), |x, y| g.mul(x, g.mul(r, y))))
}

/// `x o y = (x * r) * y`; the group has identity `r` and `x^-1 = x * r`.
pub fn group_from_ward_dual(w: &WardStructure) -> Result<Groupoid> {
    w.expect_kind(WardKind::WardDual)?;
    let (g, r) = (&w.groupoid, w.r);
    Ok(Groupoid::from_fn(g.n(), |x, y| g.mul(g.mul(x, r), y)))
}

/// `x o y = (e * x) * (e * y)`; the group has identity `e` and `x^-1 = e * x`.
pub fn group_from_double_ward(w: &WardStructure) -> Result<Groupoid> {
    w.expect_kind(WardKind::DoubleWard)?;
    let (g, e) = (&w.groupoid, w.r);
    Ok(Groupoid::from_fn(g.n(), |x, y| g.mul(g.mul(e, x), g.mul(e, y))))
}

/// `x . y = (r * x) * y`, a double-Ward quasigroup with `e = r`.
pub fn ward_to_double_ward(w: &WardStructure) -> Result<Groupoid> {
    w.expect_kind(WardKind::Ward)?;
    let (g, r) = (&w.groupoid, w.r);
    Ok(Groupoid::from_fn(g.n(), |x, y| g.mul(g.mul(r, x), y)))
}

/// `x . y = (e * x) * y`, a Ward quasigroup with `r = e`.
pub fn double_ward_to_ward(w: &WardStructure) -> Result<Groupoid> {
    w.expect_kind(WardKind::DoubleWard)?;
    let (g, e) = (&w.groupoid, w.r);
    Ok(Groupoid::from_fn(g.n(), |x, y| g.mul(g.mul(e, x), y)))
}

/// Least `(x, y, z, w)` with `(x*y)*(z*w) != (x*z)*(y*w)`.
pub fn medial_violation(g: &Groupoid) -> Option<Witness> {
    let m = |a, b| g.mul(a, b);
    first_violation(g.n(), |[x, y, z, w]| (m(m(x, y), m(z, w)), m(m(x, z), m(y, w))))
}

pub fn is_medial(g: &Groupoid) -> bool {
    medial_violation(g).is_none()
}
