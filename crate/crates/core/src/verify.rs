//! Corpus-wide theorem checks.
//!
//! [`verify_corpus`] runs a named [`Suite`] over every item and merges the
//! per-item reports in corpus order, so the output does not depend on how
//! many workers ran.

use std::fmt;
use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{decompose_slg, validate_slg, DecoratedGroupoid};
use crate::division::{
    bijection_report, check_membership, divide, division_inverse, duality_theorems, lemma_battery,
    membership_conditions, roundtrip_theorem, verify_result_12, verify_result_13, verify_result_14, DivisionKind,
};
use crate::enumerate::{Corpus, CorpusItem};
use crate::error::Error;
use crate::groupoid::Groupoid;
use crate::identity::{battery, bundled, EvalContext};
use crate::quasigroup::{
    double_ward_from_group, double_ward_laws, double_ward_to_ward, group_from_double_ward, group_from_ward,
    group_from_ward_dual, group_view, is_double_ward, is_medial, is_ward, is_ward_dual, ward_dual_from_group,
    ward_dual_laws, ward_from_group, ward_laws, ward_to_double_ward, WardKind, WardStructure,
};
use crate::report::{Check, Report, Status, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Roundtrips,
    #[serde(rename = "results-1-to-11")]
    Results1To11,
    LemmaIdentities,
    #[serde(rename = "results-12-to-14")]
    Results12To14,
    Duality,
    Bijection,
    Medial,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `All` runs them.
    pub const EACH: [Suite; 7] = [
        Suite::Roundtrips,
        Suite::Results1To11,
        Suite::LemmaIdentities,
        Suite::Results12To14,
        Suite::Duality,
        Suite::Bijection,
        Suite::Medial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Roundtrips => "roundtrips",
            Suite::Results1To11 => "results-1-to-11",
            Suite::LemmaIdentities => "lemma-identities",
            Suite::Results12To14 => "results-12-to-14",
            Suite::Duality => "duality",
            Suite::Bijection => "bijection",
            Suite::Medial => "medial",
            Suite::All => "all",
        }
    }

    /// Check names the suite can produce. A run over a rich enough corpus
    /// exercises each of them at least once.
    pub fn check_names(self) -> Vec<String> {
        let per_kind = |f: &dyn Fn(DivisionKind) -> Vec<String>| DivisionKind::ALL.into_iter().flat_map(f).collect();
        match self {
            Suite::Roundtrips => per_kind(&|k| {
                vec![
                    format!("{k}: reconstruct(divide(s)) = s"),
                    format!("{k}: divide(reconstruct(q)) = q"),
                ]
            }),
            Suite::Results1To11 => [
                "Result 1",
                "Result 2",
                "Result 3",
                "Result 4",
                "Result 5",
                "Result 6",
                "Result 10",
                "Result 11",
            ]
            .map(String::from)
            .to_vec(),
            Suite::LemmaIdentities => per_kind(&|k| {
                k.lemma_names()
                    .iter()
                    .map(|n| format!("{k} {n}"))
                    .chain([format!("{k} engine agrees")])
                    .collect()
            }),
            Suite::Results12To14 => {
                let mut v: Vec<String> = ["Result 12", "Result 13"]
                    .iter()
                    .flat_map(|r| ["idempotents", "products", "isomorphism"].map(|c| format!("{r}: {c}")))
                    .collect();
                v.extend(["(1)", "(2)", "(3)", "equivalence"].map(|c| format!("Result 14: {c}")));
                v
            }
            Suite::Duality => ["3.17", "3.18", "3.18 converse", "3.19", "3.20"]
                .map(String::from)
                .to_vec(),
            Suite::Bijection => ["to_sldwq(to_slwq(q)) = q", "to_slwq(to_sldwq(q)) = q"]
                .map(String::from)
                .to_vec(),
            Suite::Medial => ["right classes medial iff abelian", "left classes medial iff abelian"]
                .map(String::from)
                .to_vec(),
            Suite::All => Suite::EACH.into_iter().flat_map(Suite::check_names).collect(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Runs `suite` on every applicable item and merges the results in corpus
/// order. Each check carries the item id as its subject.
pub fn verify_corpus(corpus: &Corpus, suite: Suite) -> Report {
    #[cfg(feature = "parallel")]
    let parts: Vec<Report> = corpus.items.par_iter().map(|item| verify_item(item, suite)).collect();
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Report> = corpus.items.iter().map(|item| verify_item(item, suite)).collect();

    let mut rep = Report::new(format!("verify {suite}"));
    for (item, part) in corpus.items.iter().zip(parts) {
        rep.absorb(part, Some(&item.id));
    }
    rep
}

/// Every name in `expected` that no check in `report` exercised. Skipped
/// checks do not count.
pub fn uncovered(report: &Report, expected: &[String]) -> Vec<String> {
    expected
        .iter()
        .filter(|name| {
            !report
                .checks
                .iter()
                .any(|c| &c.name == *name && c.status != Status::Skipped)
        })
        .cloned()
        .collect()
}

/// Runs `suite` on a single item.
pub fn verify_item(item: &CorpusItem, suite: Suite) -> Report {
    let view = View::of(item);
    let mut rep = Report::new(item.id.clone());
    let suites: &[Suite] = if suite == Suite::All {
        &Suite::EACH
    } else {
        std::slice::from_ref(&suite)
    };
    for s in suites {
        let part = match s {
            Suite::Roundtrips => roundtrips(&view),
            Suite::Results1To11 => results_1_to_11(&view.table),
            Suite::LemmaIdentities => lemma_identities(&view),
            Suite::Results12To14 => results_12_to_14(&view),
            Suite::Duality => duality(&view),
            Suite::Bijection => bijection(&view),
            Suite::Medial => medial(&view),
            Suite::All => unreachable!("All expands to the concrete suites"),
        };
        rep.absorb(part, None);
    }
    rep
}

/// An item seen as a semilattice of groups (when it is one) and as members
/// of the three division collections.
struct View {
    table: Groupoid,
    slg: Option<DecoratedGroupoid>,
    quotients: Vec<(DivisionKind, Result<DecoratedGroupoid, Error>)>,
}

impl View {
    fn of(item: &CorpusItem) -> View {
        let table = item.groupoid.clone();
        let slg = match item.decorated() {
            Some(dg) if validate_slg(&dg).is_ok() => Some(dg),
            Some(_) => None,
            None => decompose_slg(&table).ok().map(|d| d.decorated),
        };
        let quotients = match &slg {
            Some(s) => DivisionKind::ALL.into_iter().map(|k| (k, divide(s, k))).collect(),
            None => DivisionKind::ALL
                .into_iter()
                .filter_map(|k| {
                    let given = item.decorated().filter(|dg| membership_conditions(dg, k).passed());
                    given.or_else(|| check_membership(&table, k)).map(|dg| (k, Ok(dg)))
                })
                .collect(),
        };
        View { table, slg, quotients }
    }

    fn quotient(&self, kind: DivisionKind) -> Option<&Result<DecoratedGroupoid, Error>> {
        self.quotients.iter().find(|(k, _)| *k == kind).map(|(_, q)| q)
    }
}

fn error_check(name: impl Into<String>, e: &Error) -> Check {
    let witness = match e {
        Error::MembershipViolation { witness, .. } | Error::PostConditionFailed { witness, .. } => witness.clone(),
        _ => None,
    };
    Check::fail(name, witness).with_detail(e.to_string())
}

fn first_difference(a: &Groupoid, b: &Groupoid) -> Option<Witness> {
    a.elements()
        .flat_map(|x| b.elements().map(move |y| (x, y)))
        .find(|&(x, y)| a.mul(x, y) != b.mul(x, y))
        .map(|(x, y)| Witness::new([("x", x), ("y", y)]).with_sides(a.mul(x, y), b.mul(x, y)))
}

fn roundtrips(v: &View) -> Report {
    let mut rep = Report::new("roundtrips");
    for (kind, q) in &v.quotients {
        let start = match (&v.slg, q) {
            (Some(s), _) => s,
            (None, Ok(q)) => q,
            (None, Err(e)) => {
                rep.push(error_check(format!("{kind}: divide"), e));
                continue;
            }
        };
        match roundtrip_theorem(start, *kind) {
            Ok(r) => {
                for mut c in r.checks.into_iter().filter(|c| c.name != "side") {
                    c.name = format!("{kind}: {}", c.name);
                    rep.push(c);
                }
            }
            Err(e) => rep.push(error_check(format!("{kind}: round trip"), &e)),
        }
    }
    rep
}

/// The group to quasigroup conversions and back, on a group table.
fn results_1_to_11(g: &Groupoid) -> Report {
    let mut rep = Report::new("results 1 to 11");
    let Ok(gv) = group_view(g) else {
        for name in Suite::Results1To11.check_names() {
            rep.push(Check::skipped(name, "input is not a group"));
        }
        return rep;
    };
    let id = gv.identity;
    type Laws = fn(&Groupoid, usize) -> Report;
    type Recognize = fn(&Groupoid) -> Option<WardStructure>;
    type Back = fn(&WardStructure) -> crate::Result<Groupoid>;
    type To = fn(&Groupoid) -> crate::Result<Groupoid>;
    let rows: [(&str, &str, WardKind, To, Laws, Recognize, Back); 3] = [
        (
            "Result 1",
            "Result 4",
            WardKind::Ward,
            ward_from_group,
            ward_laws,
            is_ward,
            group_from_ward,
        ),
        (
            "Result 2",
            "Result 5",
            WardKind::WardDual,
            ward_dual_from_group,
            ward_dual_laws,
            is_ward_dual,
            group_from_ward_dual,
        ),
        (
            "Result 3",
            "Result 6",
            WardKind::DoubleWard,
            double_ward_from_group,
            double_ward_laws,
            is_double_ward,
            group_from_double_ward,
        ),
    ];
    let mut structures = Vec::new();
    for (to_name, back_name, kind, to, laws, recognize, back) in rows {
        let q = to(g).expect("input is a group");
        let l = laws(&q, id);
        let recognized = recognize(&q).is_some_and(|w| w.admissible().contains(&id));
        rep.push(match l.failures().next() {
            Some(c) => Check::fail(to_name, c.witness.clone()).with_detail(format!("identity ({}) fails", c.name)),
            None => Check::from_bool(to_name, recognized).with_detail(format!("{kind} quasigroup with element {id}")),
        });
        let back_check = match WardStructure::new(q, id, kind).and_then(|w| back(&w).map(|b| (w, b))) {
            Ok((w, b)) => {
                structures.push(w);
                // (x*r)*y = y o x, so the Ward dual leg returns the opposite group
                let (expected, what) = match kind {
                    WardKind::WardDual => (g.dual(), "recovered group equals the opposite of the input"),
                    _ => (g.clone(), "recovered group equals the input"),
                };
                Check::from_witness(back_name, first_difference(&b, &expected)).with_detail(what)
            }
            Err(e) => error_check(back_name, &e),
        };
        rep.push(back_check);
    }
    if let [ward, _, double] = &structures[..] {
        let to_double = ward_to_double_ward(ward).expect("ward structure");
        rep.push(match WardStructure::new(to_double.clone(), id, WardKind::DoubleWard) {
            Ok(_) => Check::from_witness("Result 10", first_difference(&to_double, double.groupoid()))
                .with_detail("(r*x)*y is the double Ward quasigroup of the same group"),
            Err(e) => error_check("Result 10", &e),
        });
        let to_ward = double_ward_to_ward(double).expect("double ward structure");
        rep.push(match WardStructure::new(to_ward.clone(), id, WardKind::Ward) {
            Ok(_) => Check::from_witness("Result 11", first_difference(&to_ward, ward.groupoid()))
                .with_detail("(e*x)*y is the Ward quasigroup of the same group"),
            Err(e) => error_check("Result 11", &e),
        });
    }
    rep
}

/// Runs the bundled identities through the engine on each quotient and
/// compares every verdict with the hand-coded battery.
fn lemma_identities(v: &View) -> Report {
    let mut rep = Report::new("lemma identities");
    for (kind, q) in &v.quotients {
        let q = match q {
            Ok(q) => q,
            Err(e) => {
                rep.push(error_check(format!("{kind} divide"), e));
                continue;
            }
        };
        let hand = lemma_battery(q, *kind);
        let inv = division_inverse(q, *kind);
        let ctx = EvalContext::default()
            .with_inverse(&inv)
            .with_decoration(q.decoration());
        let engine = match battery(bundled(), kind.lemma_names(), q.groupoid(), &ctx) {
            Ok(r) => r,
            Err(e) => {
                rep.push(error_check(format!("{kind} engine agrees"), &e));
                continue;
            }
        };
        let mut disagree = Vec::new();
        for c in &engine.checks {
            let hand_ok = hand.check(&c.name).is_some_and(Check::passed);
            if hand_ok != c.passed() {
                disagree.push(c.name.clone());
            }
            let mut c = c.clone();
            c.name = format!("{kind} {}", c.name);
            rep.push(c);
        }
        rep.push(if disagree.is_empty() {
            Check::pass(format!("{kind} engine agrees"))
        } else {
            Check::fail(format!("{kind} engine agrees"), None)
                .with_detail(format!("verdicts differ on {}", disagree.join(", ")))
        });
    }
    rep
}

fn results_12_to_14(v: &View) -> Report {
    let mut rep = Report::new("results 12 to 14");
    type Verify = fn(&DecoratedGroupoid) -> crate::Result<Report>;
    let rows: [(DivisionKind, &str, Verify); 3] = [
        (DivisionKind::Right, "Result 12", verify_result_12),
        (DivisionKind::Left, "Result 13", verify_result_13),
        (DivisionKind::Double, "Result 14", verify_result_14),
    ];
    for (kind, name, verify) in rows {
        let mut targets = Vec::new();
        match v.quotient(kind) {
            Some(Ok(q)) => {
                targets.push(q.clone());
                // the search may pick other designated elements on the bare table
                if kind == DivisionKind::Double {
                    if let Some(found) = check_membership(q.groupoid(), kind) {
                        if !found.decoration().equivalent(q.decoration()) {
                            targets.push(found);
                        }
                    }
                }
            }
            Some(Err(e)) => rep.push(error_check(format!("{name}: divide"), e)),
            None => {}
        }
        for t in targets {
            match verify(&t) {
                Ok(r) => {
                    for mut c in r.checks {
                        c.name = format!("{name}: {}", c.name);
                        rep.push(c);
                    }
                }
                Err(e) => rep.push(error_check(name, &e)),
            }
        }
    }
    rep
}

fn duality(v: &View) -> Report {
    let mut rep = duality_theorems(&v.table);
    for (kind, q) in &v.quotients {
        if let Ok(q) = q {
            if q.groupoid() != &v.table {
                for mut c in duality_theorems(q.groupoid()).checks {
                    c.detail = Some(match c.detail {
                        Some(d) => format!("{kind} quotient: {d}"),
                        None => format!("{kind} quotient"),
                    });
                    rep.push(c);
                }
            }
        }
    }
    rep
}

fn bijection(v: &View) -> Report {
    let mut rep = Report::new("bijection");
    for kind in [DivisionKind::Right, DivisionKind::Double] {
        if let Some(Ok(q)) = v.quotient(kind) {
            match bijection_report(q) {
                Ok(r) => rep.absorb(r, None),
                Err(e) => rep.push(error_check("bijection", &e)),
            }
        }
    }
    rep
}

/// Classes of the right and left quotients are medial exactly when every
/// group of the semilattice is abelian.
fn medial(v: &View) -> Report {
    let mut rep = Report::new("medial");
    let Some(s) = &v.slg else {
        for name in Suite::Medial.check_names() {
            rep.push(Check::skipped(name, "input is not a semilattice of groups"));
        }
        return rep;
    };
    let k = s.decoration().k();
    let abelian = (0..k).all(|a| s.class_groupoid(a).is_commutative());
    for (kind, name) in [
        (DivisionKind::Right, "right classes medial iff abelian"),
        (DivisionKind::Left, "left classes medial iff abelian"),
    ] {
        rep.push(match v.quotient(kind) {
            Some(Ok(q)) => {
                let medial = (0..k).all(|a| is_medial(&q.class_groupoid(a)));
                Check::from_bool(name, medial == abelian).with_detail(format!("abelian={abelian} medial={medial}"))
            }
            Some(Err(e)) => error_check(name, e),
            None => Check::skipped(name, "no quotient"),
        });
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_slgs;
    use crate::fixtures::*;

    fn named(tables: &[(&str, Groupoid)]) -> Corpus {
        Corpus::default().with_tables(tables.iter().map(|(n, g)| (n.to_string(), g.clone())))
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn empty_corpus_passes() {
        for s in Suite::EACH {
            let r = verify_corpus(&Corpus::default(), s);
            assert!(r.passed() && r.checks.is_empty());
        }
    }

    #[test]
    fn groups_pass_results_1_to_11() {
        let c = Corpus::groups(1..=6).unwrap();
        let r = verify_corpus(&c, Suite::Results1To11);
        assert!(r.passed(), "{r}");
        assert!(uncovered(&r, &Suite::Results1To11.check_names()).is_empty());
        assert_eq!(r.count(Status::Pass), 8 * c.len());
    }

    #[test]
    fn non_group_skips_results_1_to_11() {
        let r = verify_corpus(&named(&[("lp2", t_lp2())]), Suite::Results1To11);
        assert!(r.passed());
        assert_eq!(r.count(Status::Skipped), 8);
    }

    #[test]
    fn fixtures_pass_every_suite() {
        let c = named(&[
            ("slg3", t_slg3()),
            ("slg4", t_slg4()),
            ("slg4iso", t_slg4iso()),
            ("rd4", t_rd4()),
            ("ld4", t_ld4()),
            ("dd4", t_dd4()),
            ("s3", t_s3()),
        ]);
        let r = verify_corpus(&c, Suite::All);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn small_slg_corpus_covers_every_check() {
        let c = enumerate_slgs(6, 3, 3).unwrap();
        let r = verify_corpus(&c, Suite::All);
        assert!(r.passed(), "{r}");
        let missing = uncovered(&r, &Suite::All.check_names());
        assert!(missing.is_empty(), "never exercised: {missing:?}");
    }

    #[test]
    fn lemma_suite_reports_engine_verdicts() {
        let r = verify_corpus(&named(&[("slg4", t_slg4())]), Suite::LemmaIdentities);
        for k in DivisionKind::ALL {
            for n in k.lemma_names() {
                let c = r.check(&format!("{k} {n}")).unwrap();
                assert_eq!(c.status, Status::Pass);
                assert_eq!(c.subject.as_deref(), Some("slg4"));
            }
        }
    }

    #[test]
    fn medial_suite_separates_abelian() {
        let r = verify_corpus(&named(&[("s3", t_s3()), ("z3", t_z3())]), Suite::Medial);
        assert!(r.passed());
        let s3 = r.checks.iter().find(|c| c.subject.as_deref() == Some("s3")).unwrap();
        assert!(s3.detail.as_deref().unwrap().contains("abelian=false medial=false"));
    }

    #[test]
    fn reports_are_deterministic() {
        let c = enumerate_slgs(5, 3, 2).unwrap();
        let a = serde_json::to_string(&verify_corpus(&c, Suite::All)).unwrap();
        let b = serde_json::to_string(&verify_corpus(&c, Suite::All)).unwrap();
        assert_eq!(a, b);
    }
}
