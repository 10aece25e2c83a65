//! One function per subcommand. Each validates its input files first, then
//! calls into the library and shapes the result as JSON.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use cliffdiv::clifford::{
    build_clifford, decompose_slg, slg_failure, slg_inverse_map, validate_slg, DecoratedGroupoid, Decoration,
};
use cliffdiv::division::{
    decide_membership, divide, division_inverse, membership_conditions, reconstruct, roundtrip_theorem, DivisionKind,
};
use cliffdiv::enumerate::{enumerate_semilattices, enumerate_slgs, enumerate_ward_quasigroups, Corpus, CorpusItem};
use cliffdiv::format::{export_corpus, parse_spec, parse_table, to_json, DecorationFile, SpecFile, TableFile};
use cliffdiv::groupoid::InverseMap;
use cliffdiv::identity::{bundled, check_identity, exists_binding, lookup, parse_identities, EvalContext, Identity};
use cliffdiv::quasigroup::{
    double_ward_laws, group_view, is_double_ward, is_ward, is_ward_dual, medial_violation, quasigroup_violation,
    ward_dual_laws, ward_laws,
};
use cliffdiv::search::{search_question_1, SearchBounds};
use cliffdiv::verify::{uncovered, verify_corpus};
use cliffdiv::{Check, Error, Groupoid, Report, Status, Witness};

use crate::envelope::{CliError, Finding, Input, Inputs};
use crate::{CheckKind, Command, DivisionArgs, EnumerateArgs, IdentityArgs, InverseSource, VerifyArgs, What};

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Divide(_) => "divide",
        Command::Reconstruct(_) => "reconstruct",
        Command::Roundtrip { .. } => "roundtrip",
        Command::Membership(_) => "membership",
        Command::Build { .. } => "build",
        Command::Decompose { .. } => "decompose",
        Command::Identity(_) => "identity",
        Command::Enumerate(_) => "enumerate",
        Command::VerifyTheorems(_) => "verify-theorems",
        Command::SearchQuestion1 { .. } => "search-question1",
    }
}

pub fn execute(c: &Command, inputs: &mut Inputs) -> Result<Finding, CliError> {
    match c {
        Command::Check { kind, file } => {
            let t = load_table(file, inputs)?;
            Ok(check(*kind, &t.groupoid))
        }
        Command::Divide(a) => run_divide(a, inputs),
        Command::Reconstruct(a) => run_reconstruct(a, inputs),
        Command::Roundtrip { kind, file } => run_roundtrip((*kind).into(), file, inputs),
        Command::Membership(a) => run_membership(a, inputs),
        Command::Build { spec, out } => run_build(spec, out.as_deref(), inputs),
        Command::Decompose { file, out } => run_decompose(file, out.as_deref(), inputs),
        Command::Identity(a) => run_identity(a, inputs),
        Command::Enumerate(a) => run_enumerate(a),
        Command::VerifyTheorems(a) => run_verify(a),
        Command::SearchQuestion1 {
            max_total,
            max_classes,
            max_examples,
        } => run_search(SearchBounds {
            max_total: *max_total,
            max_classes: *max_classes,
            max_examples: *max_examples,
        }),
    }
}

struct Loaded {
    groupoid: Groupoid,
    decorated: Option<DecoratedGroupoid>,
}

fn shown(path: &Path) -> String {
    path.display().to_string()
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: shown(path),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: shown(path),
        source,
    })
}

fn bad_input(path: &Path) -> impl Fn(Error) -> CliError + '_ {
    move |source| CliError::Input {
        path: shown(path),
        source: Box::new(source),
    }
}

fn load_table(path: &Path, inputs: &mut Inputs) -> Result<Loaded, CliError> {
    let text = read(path)?;
    let file = parse_table(&text).map_err(bad_input(path))?;
    let groupoid = file.groupoid().map_err(bad_input(path))?;
    let decorated = file.decorated().map_err(bad_input(path))?;
    inputs.0.push(Input::new(&shown(path), &file.normalized()));
    Ok(Loaded { groupoid, decorated })
}

/// Library errors that carry a witness are mathematical failures; the rest
/// are input errors.
fn math(e: Error) -> CliError {
    match e {
        Error::MembershipViolation {
            witness: Some(ref w), ..
        }
        | Error::PostConditionFailed {
            witness: Some(ref w), ..
        } => {
            let w = w.clone();
            CliError::Failed(Box::new(Finding::fail(json!({ "reason": e.to_string() }), vec![w])))
        }
        e => e.into(),
    }
}

fn first_witness(rep: &Report, name: &str) -> Option<Witness> {
    rep.check(name).and_then(|c| c.witness.clone())
}

fn with_binding(w: Option<Witness>, name: &str, value: usize) -> Option<Witness> {
    w.map(|mut w| {
        w.assignment.insert(0, (name.to_owned(), value));
        w
    })
}

fn assoc_witness(g: &Groupoid) -> Option<Witness> {
    g.associativity_violation()
        .map(|(x, y, z)| Witness::xyzw(&[x, y, z]).with_sides(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z))))
}

fn verdict(result: Value, witness: Option<Witness>) -> Finding {
    match witness {
        None => Finding::pass(result),
        Some(w) => Finding::fail(result, vec![w]),
    }
}

fn check(kind: CheckKind, g: &Groupoid) -> Finding {
    let qv = || quasigroup_violation(g);
    match kind {
        CheckKind::Ward => match is_ward(g) {
            Some(s) => Finding::pass(json!({ "ward": true, "r": s.r() })),
            None => verdict(
                json!({ "ward": false }),
                qv().or_else(|| first_witness(&ward_laws(g, 0), "1")),
            ),
        },
        CheckKind::WardDual => match is_ward_dual(g) {
            Some(s) => Finding::pass(json!({ "ward_dual": true, "r": s.r() })),
            None => verdict(
                json!({ "ward_dual": false }),
                qv().or_else(|| first_witness(&ward_dual_laws(g, 0), "7")),
            ),
        },
        CheckKind::DoubleWard => match is_double_ward(g) {
            Some(s) => Finding::pass(json!({ "double_ward": true, "e": s.r(), "admissible": s.admissible() })),
            None => verdict(
                json!({ "double_ward": false, "detail": "identity (13) fails for every e; the witness is for e = 0" }),
                qv().or_else(|| with_binding(first_witness(&double_ward_laws(g, 0), "13"), "e", 0)),
            ),
        },
        CheckKind::Group => match group_view(g) {
            Ok(v) => Finding::pass(json!({ "group": true, "identity": v.identity, "inverse": v.inverse })),
            Err(e) => verdict(
                json!({ "group": false, "reason": e.to_string() }),
                qv().or_else(|| assoc_witness(g)),
            ),
        },
        CheckKind::Quasigroup => {
            let w = qv();
            verdict(json!({ "quasigroup": w.is_none() }), w)
        }
        CheckKind::Semilattice => {
            let w = g
                .elements()
                .find(|&x| !g.is_idempotent(x))
                .map(|x| Witness::new([("x", x)]).with_sides(g.mul(x, x), x))
                .or_else(|| {
                    g.commutativity_violation()
                        .map(|(x, y)| Witness::xyzw(&[x, y]).with_sides(g.mul(x, y), g.mul(y, x)))
                })
                .or_else(|| assoc_witness(g));
            verdict(json!({ "semilattice": w.is_none() }), w)
        }
        CheckKind::Associative => {
            let w = assoc_witness(g);
            verdict(json!({ "associative": w.is_none() }), w)
        }
        CheckKind::Slg => match slg_failure(g) {
            None => {
                let d = decompose_slg(g).expect("a semilattice of groups decomposes");
                let dec = d.decorated.decoration();
                Finding::pass(json!({
                    "slg": true,
                    "classes": dec.k(),
                    "idempotents": dec.e_of_class(),
                }))
            }
            Some(f) => Finding::fail(json!({ "slg": false, "reason": f.to_string() }), vec![f.witness(g)]),
        },
        CheckKind::Medial => {
            let w = medial_violation(g);
            verdict(json!({ "medial": w.is_none() }), w)
        }
    }
}

/// The input as a decorated semilattice of groups. An undecorated table is
/// decomposed; a decorated one must carry its own Clifford decoration.
fn slg_of(t: &Loaded, path: &Path) -> Result<DecoratedGroupoid, CliError> {
    if let Some(f) = slg_failure(&t.groupoid) {
        return Err(CliError::Failed(Box::new(Finding::fail(
            json!({ "slg": false, "reason": f.to_string() }),
            vec![f.witness(&t.groupoid)],
        ))));
    }
    match &t.decorated {
        Some(dg) => {
            validate_slg(dg).map_err(bad_input(path))?;
            Ok(dg.clone())
        }
        None => Ok(decompose_slg(&t.groupoid).map_err(CliError::from)?.decorated),
    }
}

/// The input as a member of the quotient collection for `kind`. A given
/// decoration must meet the membership conditions; otherwise one is found.
fn member_of(t: &Loaded, kind: DivisionKind) -> Result<DecoratedGroupoid, CliError> {
    match &t.decorated {
        Some(dg) => {
            let rep = membership_conditions(dg, kind);
            if rep.passed() {
                Ok(dg.clone())
            } else {
                let f = Finding::from_checks(
                    json!({ "member": false, "collection": kind.collection(), "conditions": rep }),
                    &rep.checks,
                );
                Err(CliError::Failed(Box::new(f)))
            }
        }
        None => decide_membership(&t.groupoid, kind).map_err(math),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write(p, text),
        None => Ok(()),
    }
}

fn run_divide(a: &DivisionArgs, inputs: &mut Inputs) -> Result<Finding, CliError> {
    let kind: DivisionKind = a.kind.into();
    let t = load_table(&a.file, inputs)?;
    let dg = slg_of(&t, &a.file)?;
    let q = divide(&dg, kind).map_err(math)?;
    let tf = TableFile::from_decorated(&q);
    emit(a.out.as_deref(), &tf.to_json())?;
    Ok(Finding::pass(
        json!({ "kind": kind, "collection": kind.collection(), "table": tf }),
    ))
}

fn run_reconstruct(a: &DivisionArgs, inputs: &mut Inputs) -> Result<Finding, CliError> {
    let kind: DivisionKind = a.kind.into();
    let t = load_table(&a.file, inputs)?;
    let q = member_of(&t, kind)?;
    let s = reconstruct(&q, kind).map_err(math)?;
    let tf = TableFile::from_decorated(&s);
    emit(a.out.as_deref(), &tf.to_json())?;
    Ok(Finding::pass(json!({
        "kind": kind,
        "decoration_given": t.decorated.is_some(),
        "table": tf,
    })))
}

fn run_membership(a: &DivisionArgs, inputs: &mut Inputs) -> Result<Finding, CliError> {
    let kind: DivisionKind = a.kind.into();
    let t = load_table(&a.file, inputs)?;
    let q = member_of(&t, kind)?;
    let tf = TableFile::from_decorated(&q);
    emit(a.out.as_deref(), &tf.to_json())?;
    let rep = membership_conditions(&q, kind);
    Ok(Finding::from_checks(
        json!({
            "member": true,
            "collection": kind.collection(),
            "decoration": DecorationFile::from_decoration(q.decoration()),
            "conditions": rep,
        }),
        &rep.checks,
    ))
}

fn run_roundtrip(kind: DivisionKind, file: &Path, inputs: &mut Inputs) -> Result<Finding, CliError> {
    let t = load_table(file, inputs)?;
    let dg = match &t.decorated {
        Some(dg) => dg.clone(),
        None if slg_failure(&t.groupoid).is_none() => decompose_slg(&t.groupoid)?.decorated,
        None => decide_membership(&t.groupoid, kind).map_err(math)?,
    };
    let rep = roundtrip_theorem(&dg, kind).map_err(math)?;
    let side = rep.check("side").and_then(|c| c.detail.clone());
    Ok(Finding::from_checks(
        json!({ "kind": kind, "side": side, "identical": rep.passed(), "report": rep }),
        &rep.checks,
    ))
}

fn run_build(path: &Path, out: Option<&Path>, inputs: &mut Inputs) -> Result<Finding, CliError> {
    let text = read(path)?;
    let file = parse_spec(&text).map_err(bad_input(path))?;
    let spec = file.to_spec().map_err(bad_input(path))?;
    inputs.0.push(Input::new(
        &shown(path),
        &serde_json::to_string(&file).expect("spec files serialize"),
    ));
    let dg = build_clifford(&spec).map_err(bad_input(path))?;
    let tf = TableFile::from_decorated(&dg);
    emit(out, &tf.to_json())?;
    Ok(Finding::pass(json!({ "classes": dg.decoration().k(), "table": tf })))
}

fn run_decompose(path: &Path, out: Option<&Path>, inputs: &mut Inputs) -> Result<Finding, CliError> {
    let t = load_table(path, inputs)?;
    let dg = slg_of(&t, path)?;
    let d = decompose_slg(dg.groupoid())?;
    let spec = SpecFile::from_spec(&d.spec);
    emit(out, &to_json(&spec))?;
    Ok(Finding::pass(json!({
        "classes": d.decorated.decoration().k(),
        "spec": spec,
        "renumbering": d.renumbering,
        "decorated": TableFile::from_decorated(&d.decorated),
    })))
}

struct InverseChoice {
    source: Option<String>,
    inverse: Option<InverseMap>,
    decoration: Option<Decoration>,
}

fn division_source(dg: &DecoratedGroupoid) -> Option<DivisionKind> {
    DivisionKind::ALL
        .into_iter()
        .find(|&k| membership_conditions(dg, k).passed())
}

fn choose_inverse(t: &Loaded, source: InverseSource, needed: bool) -> Result<InverseChoice, CliError> {
    let given = t.decorated.as_ref().map(|dg| dg.decoration().clone());
    let choice = |source: &str, inv: InverseMap, dg: &DecoratedGroupoid| InverseChoice {
        source: Some(source.to_owned()),
        inverse: Some(inv),
        decoration: Some(dg.decoration().clone()),
    };
    match source {
        InverseSource::Auto if !needed => Ok(InverseChoice {
            source: None,
            inverse: None,
            decoration: given,
        }),
        InverseSource::Auto => {
            let dg = t.decorated.as_ref().ok_or_else(|| {
                CliError::MissingDecoration(
                    "the identity uses inverses, which come from the decoration, and the table has none; \
                     pass --inverse to choose another source"
                        .into(),
                )
            })?;
            if validate_slg(dg).is_ok() {
                return Ok(choice("slg", slg_inverse_map(dg)?, dg));
            }
            let kind = division_source(dg).ok_or_else(|| {
                CliError::MissingInverse(
                    "the decoration fits neither a semilattice of groups nor a division quotient".into(),
                )
            })?;
            Ok(choice(&kind.to_string(), division_inverse(dg, kind), dg))
        }
        InverseSource::Slg => {
            let dg = match &t.decorated {
                Some(dg) => dg.clone(),
                None => {
                    decompose_slg(&t.groupoid)
                        .map_err(|e| CliError::MissingInverse(e.to_string()))?
                        .decorated
                }
            };
            let inv = slg_inverse_map(&dg).map_err(|e| CliError::MissingInverse(e.to_string()))?;
            Ok(choice("slg", inv, &dg))
        }
        InverseSource::Right | InverseSource::Left | InverseSource::Double => {
            let kind = match source {
                InverseSource::Right => DivisionKind::Right,
                InverseSource::Left => DivisionKind::Left,
                _ => DivisionKind::Double,
            };
            let dg = match &t.decorated {
                Some(dg) if membership_conditions(dg, kind).passed() => dg.clone(),
                Some(_) => {
                    return Err(CliError::MissingInverse(format!(
                        "the decoration does not meet the {} membership conditions",
                        kind.collection()
                    )))
                }
                None => decide_membership(&t.groupoid, kind).map_err(|e| CliError::MissingInverse(e.to_string()))?,
            };
            Ok(choice(&kind.to_string(), division_inverse(&dg, kind), &dg))
        }
        InverseSource::Groupoid => {
            let inv = t
                .groupoid
                .inverse_map()
                .map_err(|f| CliError::MissingInverse(format!("the table has no inverse map ({f})")))?;
            Ok(InverseChoice {
                source: Some("groupoid".into()),
                inverse: Some(inv),
                decoration: given,
            })
        }
    }
}

fn parse_bind(s: &str) -> Result<(String, usize), CliError> {
    let bad = || CliError::Usage(format!("--bind expects NAME=VALUE, got `{s}`"));
    let (name, value) = s.split_once('=').ok_or_else(bad)?;
    let name = name.trim().trim_start_matches('@');
    let value = value.trim().parse().map_err(|_| bad())?;
    if name.is_empty() {
        return Err(bad());
    }
    Ok((name.to_owned(), value))
}

fn run_identity(a: &IdentityArgs, inputs: &mut Inputs) -> Result<Finding, CliError> {
    let t = load_table(&a.file, inputs)?;
    let owned;
    let ids: &[Identity] = match &a.identities {
        Some(p) => {
            let text = read(p)?;
            inputs.0.push(Input::new(&shown(p), &text));
            owned = parse_identities(&text).map_err(|e| bad_input(p)(e.into()))?;
            &owned
        }
        None => bundled(),
    };
    let mut selected: Vec<&Identity> = Vec::new();
    for name in &a.names {
        let found = lookup(ids, name);
        if found.is_empty() {
            return Err(Error::UnknownIdentity(name.clone()).into());
        }
        selected.extend(found);
    }
    let binds: BTreeMap<String, usize> = a.binds.iter().map(|s| parse_bind(s)).collect::<Result<_, _>>()?;
    let needed = selected.iter().any(|id| id.uses_inverse());
    let chosen = choose_inverse(&t, a.inverse, needed)?;

    let mut ctx = EvalContext::default();
    if let Some(inv) = &chosen.inverse {
        ctx = ctx.with_inverse(inv);
    }
    if let Some(d) = &chosen.decoration {
        ctx = ctx.with_decoration(d);
    }
    for (k, &v) in &binds {
        ctx = ctx.bind(k, v);
    }

    let g = &t.groupoid;
    let mut rows = Vec::new();
    let mut witnesses = Vec::new();
    let mut passed = true;
    for id in selected {
        match &a.exists {
            None => {
                let c = check_identity(id, g, &ctx)?.to_check();
                if !c.passed() {
                    passed = false;
                    witnesses.extend(c.witness.clone());
                }
                rows.push(serde_json::to_value(&c).expect("checks serialize"));
            }
            Some(name) => {
                let name = name.trim_start_matches('@');
                let value = exists_binding(id, g, name, &ctx)?;
                if value.is_none() {
                    passed = false;
                    let at_zero = check_identity(id, g, &ctx.clone().bind(name, 0))?;
                    witnesses.extend(with_binding(at_zero.witness, &format!("@{name}"), 0));
                }
                rows.push(json!({ "name": id.name, "constant": name, "value": value }));
            }
        }
    }
    let result = json!({
        "inverse": chosen.source,
        "bindings": binds,
        "identities": rows,
    });
    Ok(Finding {
        passed,
        result,
        witnesses,
    })
}

fn enumerate_corpus(a: &EnumerateArgs) -> Result<Corpus, CliError> {
    let n = || {
        a.n.ok_or_else(|| CliError::Usage("--n is required for this enumeration".into()))
    };
    let named = |prefix: &str, n: usize, tables: Vec<Groupoid>, note: &str| Corpus {
        items: tables
            .into_iter()
            .enumerate()
            .map(|(i, g)| CorpusItem {
                id: format!("{prefix}-{n}-{i}"),
                groupoid: g,
                decoration: None,
                source: None,
                note: format!("{note} of order {n}, number {i} in enumeration order"),
            })
            .collect(),
    };
    Ok(match a.what {
        What::Groups => Corpus::groups([n()?])?,
        What::Semilattices => {
            let n = n()?;
            named("semilattice", n, enumerate_semilattices(n)?, "semilattice")
        }
        What::Ward => {
            let n = n()?;
            named("ward", n, enumerate_ward_quasigroups(n)?, "Ward quasigroup")
        }
        What::Slgs => enumerate_slgs(a.max_total, a.max_group, a.max_classes)?,
    })
}

fn export(corpus: &Corpus, dir: &Path, report: Option<&Report>) -> Result<Value, CliError> {
    let manifest = export_corpus(corpus, dir, report).map_err(|source| CliError::Write {
        path: shown(dir),
        source,
    })?;
    Ok(json!({ "dir": shown(dir), "files": manifest.count + 1 }))
}

fn run_enumerate(a: &EnumerateArgs) -> Result<Finding, CliError> {
    let corpus = enumerate_corpus(a)?;
    let items: Vec<Value> = corpus
        .iter()
        .map(|it| json!({ "id": it.id, "n": it.groupoid.n(), "note": it.note, "table": it.groupoid.rows() }))
        .collect();
    let mut result = json!({ "count": corpus.len(), "items": items });
    if let Some(dir) = &a.export {
        result["export"] = export(&corpus, dir, None)?;
    }
    Ok(Finding::pass(result))
}

fn run_verify(a: &VerifyArgs) -> Result<Finding, CliError> {
    let mut corpus = enumerate_slgs(a.max_total, a.max_group, a.max_classes)?;
    let slgs = corpus.len();
    corpus.items.extend(Corpus::groups(1..=a.group_order)?.items);
    let groups = corpus.len() - slgs;

    let report = verify_corpus(&corpus, a.suite);
    let expected = a.suite.check_names();
    let missing = uncovered(&report, &expected);
    let index: BTreeMap<&str, usize> = corpus.iter().enumerate().map(|(i, it)| (it.id.as_str(), i)).collect();

    let failures: Vec<&Check> = report.failures().collect();
    // checks decided by a plain comparison carry no assignment; point at the item
    let witnesses = failures
        .iter()
        .map(|c| {
            c.witness.clone().unwrap_or_else(|| {
                let item = c.subject.as_deref().and_then(|s| index.get(s)).copied().unwrap_or(0);
                Witness::new([("item", item)])
            })
        })
        .collect();
    let mut result = json!({
        "suite": a.suite,
        "corpus": { "items": corpus.len(), "semilattices_of_groups": slgs, "groups": groups },
        "checks": {
            "pass": report.count(Status::Pass),
            "fail": report.count(Status::Fail),
            "skipped": report.count(Status::Skipped),
        },
        "coverage": {
            "expected": expected.len(),
            "covered": expected.len() - missing.len(),
            "complete": missing.is_empty(),
            "uncovered": missing,
        },
        "failures": failures,
    });
    if let Some(dir) = &a.export {
        result["export"] = export(&corpus, dir, Some(&report))?;
        write(&dir.join("report.json"), &to_json(&report))?;
    }
    Ok(Finding {
        passed: report.passed(),
        result,
        witnesses,
    })
}

fn run_search(bounds: SearchBounds) -> Result<Finding, CliError> {
    let found = search_question_1(bounds)?;
    let rep = found.to_report();
    Ok(Finding::from_checks(
        json!({ "search": found, "report": rep }),
        &rep.checks,
    ))
}
