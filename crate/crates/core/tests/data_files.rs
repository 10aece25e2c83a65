//! The JSON tables under `data/` are the fixtures, byte for byte in content.

use std::path::Path;

use cliffdiv::clifford::decompose_slg;
use cliffdiv::division::{divide, DivisionKind};
use cliffdiv::fixtures::*;
use cliffdiv::format::{parse_spec, parse_table, TableFile};
use cliffdiv::Groupoid;

fn load(name: &str) -> TableFile {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_table(&text).unwrap()
}

#[test]
fn plain_tables_match_fixtures() {
    let cases: [(&str, Groupoid); 11] = [
        ("t_trivial.json", t_trivial()),
        ("t_z2.json", t_z2()),
        ("t_z3.json", t_z3()),
        ("t_z3rd.json", t_z3rd()),
        ("t_z3dd.json", t_z3dd()),
        ("t_lp2.json", t_lp2()),
        ("t_sl2.json", t_sl2()),
        ("t_s3.json", t_s3()),
        ("t_slg3.json", t_slg3()),
        ("t_slg4.json", t_slg4()),
        ("t_slg4iso.json", t_slg4iso()),
    ];
    for (file, want) in cases {
        let tf = load(file);
        assert!(tf.decoration.is_none(), "{file}");
        assert_eq!(tf.groupoid().unwrap(), want, "{file}");
        assert_eq!(tf, TableFile::from_groupoid(&want), "{file}");
    }
}

#[test]
fn decorated_tables_are_divisions_of_slg4() {
    let s = decompose_slg(&t_slg4()).unwrap().decorated;
    for (file, kind, fixture) in [
        ("t_rd4.json", DivisionKind::Right, t_rd4()),
        ("t_ld4.json", DivisionKind::Left, t_ld4()),
        ("t_dd4.json", DivisionKind::Double, t_dd4()),
    ] {
        let dg = load(file).decorated().unwrap().expect("decorated");
        assert_eq!(dg.groupoid(), &fixture, "{file}");
        assert_eq!(dg, divide(&s, kind).unwrap(), "{file}");
    }
}

#[test]
fn spec_file_builds_slg4() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/slg4_spec.json");
    let spec = parse_spec(&std::fs::read_to_string(path).unwrap())
        .unwrap()
        .to_spec()
        .unwrap();
    let built = cliffdiv::clifford::build_clifford(&spec).unwrap();
    assert_eq!(built.groupoid(), &t_slg4());
}
