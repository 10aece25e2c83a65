//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Each criterion recomputes what it can with a small local oracle (plain
//! loops over the tables) rather than trusting the library's own reports.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use cliffdiv::clifford::{decompose_slg, is_slg, DecoratedGroupoid};
use cliffdiv::division::{
    check_membership, divide, division_inverse, lemma_battery, reconstruct, slwq_sldwq_bijection, BijectionDirection,
    DivisionKind,
};
use cliffdiv::enumerate::{enumerate_groups, enumerate_slgs, for_each_quasigroup, Corpus};
use cliffdiv::fixtures::{t_dd4, t_lp2, t_z3, t_z3rd};
use cliffdiv::identity::{battery, bundled, EvalContext};
use cliffdiv::quasigroup::{
    double_ward_from_group, double_ward_laws, group_from_double_ward, group_from_ward, group_from_ward_dual,
    is_double_ward, is_ward, is_ward_dual, ward_dual_from_group, ward_dual_laws, ward_from_group, ward_laws, WardKind,
    WardStructure,
};
use cliffdiv::search::{search_question_1, SearchBounds};
use cliffdiv::verify::{verify_corpus, Suite};
use cliffdiv::Groupoid;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn slg_corpus() -> Corpus {
    enumerate_slgs(10, 4, 3).expect("corpus bounds are valid")
}

fn decorated(c: &Corpus) -> Vec<(String, DecoratedGroupoid)> {
    c.iter()
        .map(|it| (it.id.clone(), it.decorated().expect("enumerated items are decorated")))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Lexicographically least relabelling, over all `n!` relabellings.
fn canonical(g: &Groupoid, perms: &[Vec<usize>]) -> Vec<usize> {
    perms
        .iter()
        .map(|p| g.relabel(p).flat().to_vec())
        .min()
        .expect("at least one permutation")
}

fn law_1(g: &Groupoid) -> bool {
    let n = g.n();
    let m = |a, b| g.mul(a, b);
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| m(m(x, z), m(y, z)) == m(x, y))))
}

fn group_roundtrips() -> Outcome {
    let expected = [1, 1, 1, 2, 1, 2, 1, 5];
    let mut total = 0;
    for (i, &want) in expected.iter().enumerate() {
        let n = i + 1;
        let groups = enumerate_groups(n).map_err(|e| e.to_string())?;
        ensure(groups.len() == want, || {
            format!("order {n}: {} groups, expected {want}", groups.len())
        })?;
        for g in &groups {
            total += 1;
            let w = ward_from_group(g).map_err(|e| e.to_string())?;
            ensure(
                is_ward(&w).is_some_and(|s| s.r() == 0) && ward_laws(&w, 0).passed(),
                || format!("Ward suite fails on order {n}"),
            )?;
            let back = group_from_ward(&WardStructure::new(w, 0, WardKind::Ward).unwrap()).unwrap();
            ensure(&back == g, || format!("Ward round trip differs on order {n}"))?;

            let wd = ward_dual_from_group(g).map_err(|e| e.to_string())?;
            ensure(
                is_ward_dual(&wd).is_some_and(|s| s.r() == 0) && ward_dual_laws(&wd, 0).passed(),
                || format!("Ward dual suite fails on order {n}"),
            )?;
            // (x*r)*y evaluates to y o x, so the exact table is the opposite group
            let back = group_from_ward_dual(&WardStructure::new(wd, 0, WardKind::WardDual).unwrap()).unwrap();
            ensure(back == g.dual(), || {
                format!("Ward dual round trip differs on order {n}")
            })?;

            let dw = double_ward_from_group(g).map_err(|e| e.to_string())?;
            ensure(
                is_double_ward(&dw).is_some_and(|s| s.admissible().contains(&0)) && double_ward_laws(&dw, 0).passed(),
                || format!("double Ward suite fails on order {n}"),
            )?;
            let back = group_from_double_ward(&WardStructure::new(dw, 0, WardKind::DoubleWard).unwrap()).unwrap();
            ensure(&back == g, || format!("double Ward round trip differs on order {n}"))?;
        }
    }
    Ok(format!(
        "{total} groups of order <= 8; Ward dual leg compared with the opposite group"
    ))
}

fn correspondence_counts() -> Outcome {
    let mut found = Vec::new();
    for n in 1..=5 {
        let perms = permutations(n);
        let mut classes = BTreeSet::new();
        for_each_quasigroup(n, |g| {
            if law_1(g) {
                classes.insert(canonical(g, &perms));
            }
        })
        .map_err(|e| e.to_string())?;
        let groups = enumerate_groups(n).map_err(|e| e.to_string())?.len();
        ensure(classes.len() == groups, || {
            format!("order {n}: {} Ward classes, {groups} groups", classes.len())
        })?;
        found.push(classes.len());
    }
    Ok(format!("Ward classes per order 1..5: {found:?}"))
}

fn slg_roundtrips(items: &[(String, DecoratedGroupoid)]) -> Outcome {
    for (id, s) in items {
        for kind in DivisionKind::ALL {
            let q = divide(s, kind).map_err(|e| format!("{id} {kind}: {e}"))?;
            let s2 = reconstruct(&q, kind).map_err(|e| format!("{id} {kind}: {e}"))?;
            ensure(s2.groupoid() == s.groupoid(), || {
                format!("{id} {kind}: reconstruct(divide(s)) != s")
            })?;
            let q2 = divide(&s2, kind).map_err(|e| format!("{id} {kind}: {e}"))?;
            ensure(q2.groupoid() == q.groupoid(), || {
                format!("{id} {kind}: divide(reconstruct(q)) != q")
            })?;
        }
    }
    Ok(format!("{} semilattices of groups x 3 kinds", items.len()))
}

fn lemma_suites(items: &[(String, DecoratedGroupoid)]) -> Outcome {
    let mut compared = 0;
    for (id, s) in items {
        for kind in DivisionKind::ALL {
            let q = divide(s, kind).map_err(|e| e.to_string())?;
            let inv = division_inverse(&q, kind);
            let ctx = EvalContext::default()
                .with_inverse(&inv)
                .with_decoration(q.decoration());
            let engine = battery(bundled(), kind.lemma_names(), q.groupoid(), &ctx).map_err(|e| e.to_string())?;
            let hand = lemma_battery(&q, kind);
            ensure(engine.passed(), || {
                format!("{id} {kind}: engine reports {:?}", engine.failures().next())
            })?;
            for name in kind.lemma_names() {
                let e = engine.check(name).map(|c| c.passed());
                let h = hand.check(name).map(|c| c.passed());
                ensure(e.is_some() && e == h, || {
                    format!("{id} {kind} {name}: engine {e:?}, hand-coded {h:?}")
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} engine verdicts match the hand-coded checks"))
}

fn results_12_to_14(corpus: &Corpus) -> Outcome {
    let rep = verify_corpus(corpus, Suite::Results12To14);
    ensure(rep.passed(), || format!("{:?}", rep.failures().next()))?;
    let applied = rep.count(cliffdiv::Status::Pass);
    ensure(rep.check("Result 14: equivalence").is_some(), || {
        "equivalence never checked".into()
    })?;
    Ok(format!("{applied} checks pass"))
}

fn duality(items: &[(String, DecoratedGroupoid)]) -> Outcome {
    let mut members = 0;
    for (id, s) in items {
        ensure(is_slg(&s.groupoid().dual()), || {
            format!("{id}: dual is not a semilattice of groups")
        })?;
        for (kind, dual_kind) in [
            (DivisionKind::Right, DivisionKind::Left),
            (DivisionKind::Left, DivisionKind::Right),
            (DivisionKind::Double, DivisionKind::Double),
        ] {
            let q = divide(s, kind).map_err(|e| e.to_string())?;
            ensure(check_membership(&q.groupoid().dual(), dual_kind).is_some(), || {
                format!("{id}: dual of the {kind} quotient is not in {}", dual_kind.collection())
            })?;
            members += 1;
        }
    }
    Ok(format!(
        "{} duals of semilattices of groups, {members} duals of quotients",
        items.len()
    ))
}

fn bijection(items: &[(String, DecoratedGroupoid)]) -> Outcome {
    for (id, s) in items {
        let r = divide(s, DivisionKind::Right).map_err(|e| e.to_string())?;
        let there = slwq_sldwq_bijection(&r, BijectionDirection::ToSldwq).map_err(|e| format!("{id}: {e}"))?;
        let back = slwq_sldwq_bijection(&there, BijectionDirection::ToSlwq).map_err(|e| format!("{id}: {e}"))?;
        ensure(back.groupoid() == r.groupoid(), || {
            format!("{id}: to_slwq(to_sldwq(q)) != q")
        })?;

        let d = divide(s, DivisionKind::Double).map_err(|e| e.to_string())?;
        let there = slwq_sldwq_bijection(&d, BijectionDirection::ToSlwq).map_err(|e| format!("{id}: {e}"))?;
        let back = slwq_sldwq_bijection(&there, BijectionDirection::ToSldwq).map_err(|e| format!("{id}: {e}"))?;
        ensure(back.groupoid() == d.groupoid(), || {
            format!("{id}: to_sldwq(to_slwq(q)) != q")
        })?;
    }
    Ok(format!("{} SLWQ and {} SLDWQ members", items.len(), items.len()))
}

fn medial(g: &Groupoid) -> bool {
    let n = g.n();
    let m = |a, b| g.mul(a, b);
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| (0..n).all(|w| m(m(x, y), m(z, w)) == m(m(x, z), m(y, w))))))
}

fn abelian_medial(items: &[(String, DecoratedGroupoid)]) -> Outcome {
    let wide = enumerate_slgs(7, 6, 2).map_err(|e| e.to_string())?;
    let mut nonabelian_witnesses = Vec::new();
    for (id, s) in items.iter().cloned().chain(decorated(&wide)) {
        let k = s.decoration().k();
        let abelian = (0..k).all(|a| s.class_groupoid(a).is_commutative());
        for kind in [DivisionKind::Right, DivisionKind::Left] {
            let q = divide(&s, kind).map_err(|e| e.to_string())?;
            let all_medial = (0..k).all(|a| medial(&q.class_groupoid(a)));
            ensure(abelian == all_medial, || {
                format!("{id} {kind}: abelian {abelian}, medial {all_medial}")
            })?;
        }
        if !abelian && s.n() == 7 {
            nonabelian_witnesses.push(id);
        }
    }
    ensure(!nonabelian_witnesses.is_empty(), || {
        "no order 7 nonabelian witness found".into()
    })?;
    Ok(format!(
        "nonabelian order 7 witness {} fails mediality",
        nonabelian_witnesses[0]
    ))
}

fn negative_controls() -> Outcome {
    ensure(!t_lp2().is_quasigroup(), || "T_LP2 is a quasigroup".into())?;
    ensure(check_membership(&t_z3(), DivisionKind::Right).is_none(), || {
        "T_Z3 is in SLWQ".into()
    })?;
    let z3rd = t_z3rd();
    let left_identity = z3rd.elements().any(|e| z3rd.elements().all(|x| z3rd.mul(e, x) == x));
    ensure(!left_identity && is_ward_dual(&z3rd).is_none(), || {
        "T_Z3RD is Ward dual".into()
    })?;
    let dd4 = t_dd4();
    ensure(dd4.idempotents().len() > 2, || "T_DD4 has no extra idempotents".into())?;
    let found = check_membership(&dd4, DivisionKind::Double).ok_or("T_DD4 is not found in SLDWQ")?;
    ensure(found.decoration().k() == 2, || {
        "T_DD4 decoration has the wrong classes".into()
    })?;
    let s = decompose_slg(
        &reconstruct(&found, DivisionKind::Double)
            .map_err(|e| e.to_string())?
            .groupoid()
            .clone(),
    )
    .map_err(|e| e.to_string())?;
    ensure(s.decorated.decoration().k() == 2, || {
        "T_DD4 reconstructs to the wrong semigroup".into()
    })?;
    Ok(format!(
        "T_DD4 has idempotents {:?}, designated {:?}",
        dd4.idempotents(),
        found.decoration().e_of_class()
    ))
}

fn question_1() -> Outcome {
    let r = search_question_1(SearchBounds::default()).map_err(|e| e.to_string())?;
    let text = serde_json::to_string(&r).map_err(|e| e.to_string())?;
    let back: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(back["bounds"]["max_total"] == 6, || "bounds missing".into())?;
    ensure(!r.conclusion.is_empty() && !r.tallies.is_empty(), || {
        "report is empty".into()
    })?;
    ensure(r.to_report().check("control").is_some_and(|c| c.passed()), || {
        "control fails".into()
    })?;
    Ok(r.conclusion)
}

fn main() -> ExitCode {
    let corpus = slg_corpus();
    let items = decorated(&corpus);
    let criteria: Vec<Criterion> = vec![
        ("group and quasigroup round trips", Box::new(group_roundtrips)),
        (
            "Ward quasigroups match groups in number",
            Box::new(correspondence_counts),
        ),
        ("semilattice of groups round trips", Box::new(|| slg_roundtrips(&items))),
        ("lemma identity suites", Box::new(|| lemma_suites(&items))),
        ("Results 12 to 14", Box::new(|| results_12_to_14(&corpus))),
        ("duality", Box::new(|| duality(&items))),
        ("SLWQ and SLDWQ bijection", Box::new(|| bijection(&items))),
        ("abelian iff medial", Box::new(|| abelian_medial(&items))),
        ("negative controls", Box::new(negative_controls)),
        ("question 1 search", Box::new(question_1)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
