//! Identities as data, checked by exhaustive quantifier scans.
//!
//! Terms are built from variables, the table product, the inverse map, named
//! constants and two decoration-aware formers: `local t` is the designated
//! idempotent of the class of `t`, and `meet s t` is the designated
//! idempotent of the meet of the two classes.

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::clifford::Decoration;
use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, InverseMap};
use crate::report::{Check, Report, Witness};

pub use parse::{parse_identities, parse_term, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Op(Box<Term>, Box<Term>),
    Inv(Box<Term>),
    LocalId(Box<Term>),
    MeetId(Box<Term>, Box<Term>),
    Const(String),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_owned())
    }

    pub fn op(a: Term, b: Term) -> Term {
        Term::Op(Box::new(a), Box::new(b))
    }

    pub fn inv(a: Term) -> Term {
        Term::Inv(Box::new(a))
    }

    pub fn local(a: Term) -> Term {
        Term::LocalId(Box::new(a))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::MeetId(Box::new(a), Box::new(b))
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut out, &mut |t| matches!(t, Term::Var(_)));
        out
    }

    pub fn constants(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut out, &mut |t| matches!(t, Term::Const(_)));
        out
    }

    fn collect(&self, out: &mut Vec<String>, want: &mut impl FnMut(&Term) -> bool) {
        match self {
            Term::Var(s) | Term::Const(s) => {
                if want(self) && !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Term::Op(a, b) | Term::MeetId(a, b) => {
                a.collect(out, want);
                b.collect(out, want);
            }
            Term::Inv(a) | Term::LocalId(a) => a.collect(out, want),
        }
    }

    fn any(&self, pred: &impl Fn(&Term) -> bool) -> bool {
        pred(self)
            || match self {
                Term::Op(a, b) | Term::MeetId(a, b) => a.any(pred) || b.any(pred),
                Term::Inv(a) | Term::LocalId(a) => a.any(pred),
                Term::Var(_) | Term::Const(_) => false,
            }
    }

    pub fn uses_inverse(&self) -> bool {
        self.any(&|t| matches!(t, Term::Inv(_)))
    }

    pub fn uses_decoration(&self) -> bool {
        self.any(&|t| matches!(t, Term::LocalId(_) | Term::MeetId(..)))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(s) => f.write_str(s),
            Term::Const(s) => write!(f, "@{s}"),
            Term::Op(a, b) => write!(f, "(* {a} {b})"),
            Term::Inv(a) => write!(f, "(inv {a})"),
            Term::LocalId(a) => write!(f, "(local {a})"),
            Term::MeetId(a, b) => write!(f, "(meet {a} {b})"),
        }
    }
}

/// A named equation `lhs = rhs`, universally quantified over `variables`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
    pub variables: Vec<String>,
}

impl Identity {
    /// Variables ordered by first occurrence, left side first.
    pub fn new(name: impl Into<String>, lhs: Term, rhs: Term) -> Identity {
        let mut variables = lhs.variables();
        for v in rhs.variables() {
            if !variables.contains(&v) {
                variables.push(v);
            }
        }
        Identity {
            name: name.into(),
            lhs,
            rhs,
            variables,
        }
    }

    /// Uses an explicit variable order; every variable of either side must
    /// be declared.
    pub fn with_variables(
        name: impl Into<String>,
        lhs: Term,
        rhs: Term,
        variables: Vec<String>,
    ) -> std::result::Result<Identity, String> {
        let name = name.into();
        let declared: BTreeSet<&String> = variables.iter().collect();
        if declared.len() != variables.len() {
            return Err(format!("identity {name}: repeated variable"));
        }
        for v in lhs.variables().into_iter().chain(rhs.variables()) {
            if !declared.contains(&v) {
                return Err(format!("identity {name}: variable {v} is not declared"));
            }
        }
        Ok(Identity {
            name,
            lhs,
            rhs,
            variables,
        })
    }

    pub fn uses_inverse(&self) -> bool {
        self.lhs.uses_inverse() || self.rhs.uses_inverse()
    }

    pub fn uses_decoration(&self) -> bool {
        self.lhs.uses_decoration() || self.rhs.uses_decoration()
    }

    pub fn constants(&self) -> Vec<String> {
        let mut c = self.lhs.constants();
        for v in self.rhs.constants() {
            if !c.contains(&v) {
                c.push(v);
            }
        }
        c
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {} = {}",
            self.name,
            self.variables.join(" "),
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("term uses inverses but no inverse map is available")]
    MissingInverseMap,
    #[error("term uses class idempotents but no decoration is available")]
    MissingDecoration,
    #[error("constant @{0} is not bound")]
    UnboundConst(String),
    #[error("variable {0} is not assigned")]
    UnassignedVar(String),
}

/// Everything a term may refer to besides the table itself.
#[derive(Debug, Clone, Default)]
pub struct EvalContext<'a> {
    pub inverse: Option<&'a InverseMap>,
    pub decoration: Option<&'a Decoration>,
    pub consts: BTreeMap<String, usize>,
}

impl<'a> EvalContext<'a> {
    pub fn with_inverse(mut self, inv: &'a InverseMap) -> Self {
        self.inverse = Some(inv);
        self
    }

    pub fn with_decoration(mut self, d: &'a Decoration) -> Self {
        self.decoration = Some(d);
        self
    }

    pub fn bind(mut self, name: &str, value: usize) -> Self {
        self.consts.insert(name.to_owned(), value);
        self
    }
}

/// A term compiled against a variable order, so scans avoid name lookups.
#[derive(Debug)]
enum Compiled {
    Var(usize),
    Lit(usize),
    Op(Box<Compiled>, Box<Compiled>),
    Inv(Box<Compiled>),
    Local(Box<Compiled>),
    Meet(Box<Compiled>, Box<Compiled>),
}

struct Env<'a> {
    g: &'a Groupoid,
    inverse: Option<&'a InverseMap>,
    decoration: Option<&'a Decoration>,
}

impl Compiled {
    fn new(t: &Term, vars: &[String], ctx: &EvalContext<'_>) -> std::result::Result<Compiled, EvalError> {
        Ok(match t {
            Term::Var(v) => Compiled::Var(
                vars.iter()
                    .position(|x| x == v)
                    .ok_or_else(|| EvalError::UnassignedVar(v.clone()))?,
            ),
            Term::Const(c) => Compiled::Lit(*ctx.consts.get(c).ok_or_else(|| EvalError::UnboundConst(c.clone()))?),
            Term::Op(a, b) => Compiled::Op(Box::new(Self::new(a, vars, ctx)?), Box::new(Self::new(b, vars, ctx)?)),
            Term::Inv(a) => {
                if ctx.inverse.is_none() {
                    return Err(EvalError::MissingInverseMap);
                }
                Compiled::Inv(Box::new(Self::new(a, vars, ctx)?))
            }
            Term::LocalId(a) => {
                if ctx.decoration.is_none() {
                    return Err(EvalError::MissingDecoration);
                }
                Compiled::Local(Box::new(Self::new(a, vars, ctx)?))
            }
            Term::MeetId(a, b) => {
                if ctx.decoration.is_none() {
                    return Err(EvalError::MissingDecoration);
                }
                Compiled::Meet(Box::new(Self::new(a, vars, ctx)?), Box::new(Self::new(b, vars, ctx)?))
            }
        })
    }

    fn eval(&self, env: &Env<'_>, a: &[usize]) -> usize {
        match self {
            Compiled::Var(i) => a[*i],
            Compiled::Lit(v) => *v,
            Compiled::Op(l, r) => env.g.mul(l.eval(env, a), r.eval(env, a)),
            Compiled::Inv(t) => env.inverse.expect("checked at compile time").get(t.eval(env, a)),
            Compiled::Local(t) => env.decoration.expect("checked at compile time").local(t.eval(env, a)),
            Compiled::Meet(l, r) => {
                let d = env.decoration.expect("checked at compile time");
                d.meet_e(l.eval(env, a), r.eval(env, a))
            }
        }
    }
}

fn check_context(g: &Groupoid, ctx: &EvalContext<'_>) -> Result<()> {
    if let Some(inv) = ctx.inverse {
        if inv.inv.len() != g.n() || inv.inv.iter().any(|&v| v >= g.n()) {
            return Err(Error::MalformedStructure("inverse map does not fit the table".into()));
        }
    }
    if let Some(d) = ctx.decoration {
        if d.class_of().len() != g.n() {
            return Err(Error::InvalidDecoration("decoration does not fit the table".into()));
        }
    }
    for (name, &v) in &ctx.consts {
        if v >= g.n() {
            return Err(Error::MalformedStructure(format!(
                "constant @{name} = {v} is outside the carrier"
            )));
        }
    }
    Ok(())
}

/// Evaluates `t` under `assignment`.
pub fn eval_term(t: &Term, g: &Groupoid, assignment: &BTreeMap<String, usize>, ctx: &EvalContext<'_>) -> Result<usize> {
    check_context(g, ctx)?;
    let vars: Vec<String> = assignment.keys().cloned().collect();
    let values: Vec<usize> = assignment.values().copied().collect();
    if let Some(&v) = values.iter().find(|&&v| v >= g.n()) {
        return Err(Error::IndexOutOfRange { index: v, n: g.n() });
    }
    let c = Compiled::new(t, &vars, ctx)?;
    let env = Env {
        g,
        inverse: ctx.inverse,
        decoration: ctx.decoration,
    };
    Ok(c.eval(&env, &values))
}

/// Outcome of scanning one identity over a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    /// Least failing assignment in lexicographic order of the identity's
    /// variable list, with both sides evaluated.
    pub witness: Option<Witness>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    pub fn to_check(&self) -> Check {
        Check::from_witness(self.name.clone(), self.witness.clone())
    }
}

fn scan(id: &Identity, g: &Groupoid, ctx: &EvalContext<'_>) -> Result<Option<Witness>> {
    check_context(g, ctx)?;
    let lhs = Compiled::new(&id.lhs, &id.variables, ctx)?;
    let rhs = Compiled::new(&id.rhs, &id.variables, ctx)?;
    let env = Env {
        g,
        inverse: ctx.inverse,
        decoration: ctx.decoration,
    };
    let n = g.n();
    let k = id.variables.len();
    let mut a = vec![0usize; k];
    loop {
        let (l, r) = (lhs.eval(&env, &a), rhs.eval(&env, &a));
        if l != r {
            let w = Witness::new(id.variables.iter().cloned().zip(a.iter().copied())).with_sides(l, r);
            return Ok(Some(w));
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            a[i] += 1;
            if a[i] < n {
                break;
            }
            a[i] = 0;
        }
    }
}

/// Scans all `n^k` assignments and reports the first failure, if any.
pub fn check_identity(id: &Identity, g: &Groupoid, ctx: &EvalContext<'_>) -> Result<IdentityCheck> {
    Ok(IdentityCheck {
        name: id.name.clone(),
        witness: scan(id, g, ctx)?,
    })
}

/// The least value of constant `name` for which `id` holds on `g`.
pub fn exists_binding(id: &Identity, g: &Groupoid, name: &str, ctx: &EvalContext<'_>) -> Result<Option<usize>> {
    if !id.constants().iter().any(|c| c == name) {
        return Err(Error::PreconditionViolation(format!(
            "identity {} does not mention @{name}",
            id.name
        )));
    }
    for v in g.elements() {
        let bound = ctx.clone().bind(name, v);
        if scan(id, g, &bound)?.is_none() {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

const BUNDLED: &str = include_str!("identities.txt");

/// The identities shipped with the crate.
pub fn bundled() -> &'static [Identity] {
    static CORPUS: OnceLock<Vec<Identity>> = OnceLock::new();
    CORPUS.get_or_init(|| parse_identities(BUNDLED).expect("bundled identity file parses"))
}

/// The bundled identity file text.
pub fn bundled_source() -> &'static str {
    BUNDLED
}

/// All identities called `name`, or `name[i]` for the parts of a chain.
pub fn lookup<'a>(ids: &'a [Identity], name: &str) -> Vec<&'a Identity> {
    ids.iter()
        .filter(|id| {
            id.name == name
                || id
                    .name
                    .strip_prefix(name)
                    .is_some_and(|rest| rest.starts_with('[') && rest.ends_with(']'))
        })
        .collect()
}

/// Checks every identity under `name` and returns one report check per part.
pub fn check_named(ids: &[Identity], name: &str, g: &Groupoid, ctx: &EvalContext<'_>) -> Result<Vec<IdentityCheck>> {
    let found = lookup(ids, name);
    if found.is_empty() {
        return Err(Error::UnknownIdentity(name.to_owned()));
    }
    found.into_iter().map(|id| check_identity(id, g, ctx)).collect()
}

/// Checks a named group of identities and folds the parts into one check.
pub fn check_group(ids: &[Identity], name: &str, g: &Groupoid, ctx: &EvalContext<'_>) -> Result<Check> {
    let parts = check_named(ids, name, g, ctx)?;
    Ok(match parts.iter().find(|c| !c.passed()) {
        None => Check::pass(name),
        Some(c) => Check::fail(name, c.witness.clone()).with_detail(format!("part {} fails", c.name)),
    })
}

/// Runs a list of named identity groups and collects the results.
pub fn battery(ids: &[Identity], names: &[&str], g: &Groupoid, ctx: &EvalContext<'_>) -> Result<Report> {
    let mut rep = Report::new("identity battery");
    for name in names {
        rep.push(check_group(ids, name, g, ctx)?);
    }
    Ok(rep)
}
