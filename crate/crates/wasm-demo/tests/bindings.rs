use cliffdiv_wasm::{divide_json, identity_json, membership_json, sample_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn divided_sample_is_a_member_and_satisfies_its_lemma() {
    let slg = sample_json("slg4").unwrap();
    let q = divide_json(&slg, "right").unwrap();
    assert_eq!(parse(&q)["decoration"]["e"], serde_json::json!([0, 3]));

    let m = parse(&membership_json(&q, "right").unwrap());
    assert_eq!(m["member"], true);
    let id = parse(&identity_json(&q, "3.24").unwrap());
    assert_eq!(id["holds"], true);
    assert_eq!(id["inverse"], "right");
}

#[test]
fn undecorated_tables_get_a_decoration_found() {
    let q = divide_json(&sample_json("slg4").unwrap(), "double").unwrap();
    let bare = {
        let mut v = parse(&q);
        v.as_object_mut().unwrap().remove("decoration");
        v.to_string()
    };
    let m = parse(&membership_json(&bare, "double").unwrap());
    assert_eq!(m["member"], true, "{m}");
}

#[test]
fn failures_come_with_witnesses() {
    let m = parse(&membership_json(&sample_json("z3").unwrap(), "right").unwrap());
    assert_eq!(m["member"], false);
    assert!(m["failure"]["witness"].is_object(), "{m}");

    let id = parse(&identity_json(&sample_json("s3").unwrap(), "1").unwrap());
    assert_eq!(id["holds"], false);
    assert!(id["parts"][0]["witness"].is_object());
}

#[test]
fn bad_input_is_an_error() {
    assert!(divide_json(&sample_json("lp2").unwrap(), "right").is_err());
    assert!(divide_json("{\"n\": 2, \"table\": [[0]]}", "right").is_err());
    assert!(divide_json(&sample_json("slg4").unwrap(), "sideways").is_err());
    assert!(identity_json(&sample_json("z3").unwrap(), "3.24").is_err());
    assert!(sample_json("nothing").is_err());
}
