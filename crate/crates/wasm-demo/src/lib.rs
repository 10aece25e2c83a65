//! Browser bindings: divide a semilattice of groups, decide membership of a
//! table in a division collection, and check a named identity.
//!
//! Every entry point takes and returns JSON text in the workbench's table
//! format, so the page needs no glue beyond `JSON.parse`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use cliffdiv::clifford::{decompose_slg, slg_failure, slg_inverse_map, validate_slg, DecoratedGroupoid};
use cliffdiv::division::{decide_membership, divide, division_inverse, membership_conditions, DivisionKind};
use cliffdiv::fixtures;
use cliffdiv::format::{parse_table, to_json, DecorationFile, TableFile};
use cliffdiv::identity::{bundled, check_named, EvalContext};
use cliffdiv::{Error, Groupoid};

fn kind_of(name: &str) -> Result<DivisionKind, String> {
    match name {
        "right" => Ok(DivisionKind::Right),
        "left" => Ok(DivisionKind::Left),
        "double" => Ok(DivisionKind::Double),
        other => Err(format!("unknown division kind `{other}`")),
    }
}

fn load(text: &str) -> Result<(Groupoid, Option<DecoratedGroupoid>), String> {
    let tf = parse_table(text).map_err(|e| e.to_string())?;
    let g = tf.groupoid().map_err(|e| e.to_string())?;
    let dg = tf.decorated().map_err(|e| e.to_string())?;
    Ok((g, dg))
}

/// Divides a semilattice of groups; the result is the decorated quotient.
pub fn divide_json(table: &str, kind: &str) -> Result<String, String> {
    let kind = kind_of(kind)?;
    let (g, dg) = load(table)?;
    if let Some(f) = slg_failure(&g) {
        return Err(format!("not a semilattice of groups: {f}"));
    }
    let s = match dg {
        Some(dg) => {
            validate_slg(&dg).map_err(|e| e.to_string())?;
            dg
        }
        None => decompose_slg(&g).map_err(|e| e.to_string())?.decorated,
    };
    let q = divide(&s, kind).map_err(|e| e.to_string())?;
    Ok(TableFile::from_decorated(&q).to_json())
}

/// Decides membership and reports either the decoration or a witness.
pub fn membership_json(table: &str, kind: &str) -> Result<String, String> {
    let kind = kind_of(kind)?;
    let (g, dg) = load(table)?;
    let found = match dg {
        Some(dg) => {
            let rep = membership_conditions(&dg, kind);
            let failure = rep
                .failures()
                .next()
                .map(|c| json!({ "check": c.name, "witness": c.witness }));
            match failure {
                None => Ok(dg),
                Some(why) => Err(why),
            }
        }
        None => decide_membership(&g, kind).map_err(|e| match e {
            Error::MembershipViolation { check, witness, .. } => json!({ "check": check, "witness": witness }),
            other => json!({ "check": other.to_string() }),
        }),
    };
    let out = match found {
        Ok(q) => json!({
            "member": true,
            "collection": kind.collection(),
            "decoration": DecorationFile::from_decoration(q.decoration()),
        }),
        Err(why) => json!({ "member": false, "collection": kind.collection(), "failure": why }),
    };
    Ok(to_json(&out))
}

/// Checks a bundled identity. Inverses come from the decoration: the
/// Clifford inverse for a semilattice of groups, otherwise the inverse of
/// whichever division the classes fit.
pub fn identity_json(table: &str, name: &str) -> Result<String, String> {
    let (g, dg) = load(table)?;
    let mut inverse = None;
    let mut source = Value::Null;
    if let Some(dg) = &dg {
        if validate_slg(dg).is_ok() {
            inverse = slg_inverse_map(dg).ok();
            source = json!("slg");
        } else if let Some(k) = DivisionKind::ALL
            .into_iter()
            .find(|&k| membership_conditions(dg, k).passed())
        {
            inverse = Some(division_inverse(dg, k));
            source = json!(k);
        }
    }
    let mut ctx = EvalContext::default();
    if let Some(inv) = &inverse {
        ctx = ctx.with_inverse(inv);
    }
    if let Some(dg) = &dg {
        ctx = ctx.with_decoration(dg.decoration());
    }
    let parts = check_named(bundled(), name, &g, &ctx).map_err(|e| e.to_string())?;
    let checks: Vec<Value> = parts
        .iter()
        .map(|c| json!({ "name": c.name, "holds": c.passed(), "witness": c.witness }))
        .collect();
    let holds = parts.iter().all(|c| c.passed());
    Ok(to_json(
        &json!({ "identity": name, "holds": holds, "inverse": source, "parts": checks }),
    ))
}

/// A named sample table for the page's preset menu.
pub fn sample_json(name: &str) -> Result<String, String> {
    let g = match name {
        "slg4" => fixtures::t_slg4(),
        "slg3" => fixtures::t_slg3(),
        "s3" => fixtures::t_s3(),
        "z3" => fixtures::t_z3(),
        "z3rd" => fixtures::t_z3rd(),
        "lp2" => fixtures::t_lp2(),
        "dd4" => fixtures::t_dd4(),
        other => return Err(format!("unknown sample `{other}`")),
    };
    Ok(TableFile::from_groupoid(&g).to_json())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = divide)]
pub fn divide_js(table: &str, kind: &str) -> Result<String, JsError> {
    js(divide_json(table, kind))
}

#[wasm_bindgen(js_name = membership)]
pub fn membership_js(table: &str, kind: &str) -> Result<String, JsError> {
    js(membership_json(table, kind))
}

#[wasm_bindgen(js_name = identity)]
pub fn identity_js(table: &str, name: &str) -> Result<String, JsError> {
    js(identity_json(table, name))
}

#[wasm_bindgen(js_name = sample)]
pub fn sample_js(name: &str) -> Result<String, JsError> {
    js(sample_json(name))
}
