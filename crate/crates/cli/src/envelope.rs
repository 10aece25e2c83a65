//! The report every command prints, and its text rendering.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use cliffdiv::identity::EvalError;
use cliffdiv::{Check, Error, Status, Witness};

use crate::commands;
use crate::{Command, WORKERS_VAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

impl Input {
    pub fn new(path: &str, canonical: &str) -> Self {
        let digest = Sha256::digest(canonical.as_bytes());
        Input {
            path: path.to_owned(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub command: String,
    pub args: Vec<String>,
    pub inputs: Vec<Input>,
    pub status: Outcome,
    pub exit_code: u8,
    pub result: Value,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

/// What a command produced when it ran to completion.
#[derive(Debug)]
pub struct Finding {
    pub passed: bool,
    pub result: Value,
    pub witnesses: Vec<Witness>,
}

impl Finding {
    pub fn pass(result: Value) -> Self {
        Finding {
            passed: true,
            result,
            witnesses: Vec::new(),
        }
    }

    pub fn fail(result: Value, witnesses: Vec<Witness>) -> Self {
        Finding {
            passed: false,
            result,
            witnesses,
        }
    }

    /// Passes when no check fails; collects the failing witnesses.
    pub fn from_checks<'a>(result: Value, checks: impl IntoIterator<Item = &'a Check>) -> Self {
        let mut passed = true;
        let mut witnesses = Vec::new();
        for c in checks {
            if c.status == Status::Fail {
                passed = false;
                witnesses.extend(c.witness.clone());
            }
        }
        Finding {
            passed,
            result,
            witnesses,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: String, source: io::Error },

    #[error("{path}: {source}")]
    Input { path: String, source: Box<Error> },

    #[error(transparent)]
    Core(Box<Error>),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    MissingDecoration(String),

    #[error("{0}")]
    MissingInverse(String),

    /// A mathematical failure found before the command could finish.
    #[error("mathematical failure")]
    Failed(Box<Finding>),

    #[error("{WORKERS_VAR} must be a positive integer, got `{0}`")]
    Workers(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(Box::new(e))
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Read { .. } => "unreadable-file",
            CliError::Write { .. } => "unwritable-file",
            CliError::Input { source, .. } | CliError::Core(source) => core_kind(source),
            CliError::Usage(_) => "usage",
            CliError::MissingDecoration(_) => "missing-decoration",
            CliError::MissingInverse(_) => "missing-inverse",
            CliError::Failed(_) => "failure",
            CliError::Workers(_) => "workers",
        }
    }
}

fn core_kind(e: &Error) -> &'static str {
    match e {
        Error::Json(_) => "malformed-json",
        Error::EmptyCarrier
        | Error::NonSquareTable { .. }
        | Error::EntryOutOfRange { .. }
        | Error::SizeMismatch { .. }
        | Error::IndexOutOfRange { .. }
        | Error::InvalidLabels(_) => "malformed-table",
        Error::InvalidDecoration(_) => "invalid-decoration",
        Error::UnknownIdentity(_) => "unknown-identity",
        Error::Parse(_) => "identity-syntax",
        Error::Eval(EvalError::MissingDecoration) => "missing-decoration",
        Error::Eval(EvalError::MissingInverseMap) => "missing-inverse",
        Error::Eval(_) => "unbound-constant",
        Error::SizeLimit { .. } | Error::ZeroSize => "size-limit",
        Error::PreconditionViolation(_) => "precondition",
        _ => "invalid-input",
    }
}

/// Input files a command read, in reading order.
#[derive(Debug, Default)]
pub struct Inputs(pub Vec<Input>);

fn init_workers() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(WORKERS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Workers(raw.clone()))?;
    // a second initialization in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run(command: &Command, args: Vec<String>) -> Envelope {
    let mut inputs = Inputs::default();
    let outcome = match init_workers().and_then(|()| commands::execute(command, &mut inputs)) {
        Err(CliError::Failed(f)) => Ok(*f),
        other => other,
    };
    let mut env = Envelope {
        command: commands::name(command).to_owned(),
        args,
        inputs: inputs.0,
        status: Outcome::Pass,
        exit_code: 0,
        result: Value::Null,
        witnesses: Vec::new(),
        error: None,
    };
    match outcome {
        Ok(f) => {
            env.result = f.result;
            env.witnesses = f.witnesses;
            if !f.passed {
                env.status = Outcome::Fail;
                env.exit_code = 1;
            }
        }
        Err(e) => {
            env.status = Outcome::Error;
            env.exit_code = 2;
            env.error = Some(ErrorInfo {
                kind: e.kind(),
                message: e.to_string(),
            });
        }
    }
    env
}

pub fn render_text(env: &Envelope) -> String {
    let mut out = String::new();
    let status = match env.status {
        Outcome::Pass => "pass",
        Outcome::Fail => "FAIL",
        Outcome::Error => "ERROR",
    };
    let _ = writeln!(out, "{}: {status} (exit {})", env.command, env.exit_code);
    for i in &env.inputs {
        let _ = writeln!(out, "input {} sha256:{}", i.path, &i.sha256[..16]);
    }
    if let Some(e) = &env.error {
        let _ = writeln!(out, "error [{}]: {}", e.kind, e.message);
    }
    for w in &env.witnesses {
        let _ = writeln!(out, "witness {w}");
    }
    if let Value::Object(map) = &env.result {
        for (k, v) in map {
            match v {
                Value::Array(items) if items.len() > 8 || items.iter().any(Value::is_object) => {
                    let _ = writeln!(out, "{k}: {} entries", items.len());
                    for item in items.iter().take(20) {
                        let _ = writeln!(out, "  {}", one_line(item));
                    }
                    if items.len() > 20 {
                        let _ = writeln!(out, "  ...");
                    }
                }
                _ => {
                    let _ = writeln!(out, "{k}: {}", one_line(v));
                }
            }
        }
    }
    out
}

fn one_line(v: &Value) -> String {
    match v {
        Value::Object(map) if map.contains_key("name") && map.contains_key("status") => {
            let get = |k: &str| map.get(k).and_then(Value::as_str).unwrap_or("");
            let mut s = format!("{:<7} {}", get("status"), get("name"));
            if let Some(subj) = map.get("subject").and_then(Value::as_str) {
                let _ = write!(s, " [{subj}]");
            }
            if let Some(w) = map.get("witness") {
                let _ = write!(s, " {w}");
            }
            s
        }
        other => other.to_string(),
    }
}
