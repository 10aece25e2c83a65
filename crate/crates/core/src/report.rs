//! Structured pass/fail records shared by every verification batch.
//!
//! A [`Report`] is an ordered list of [`Check`]s. Field order is fixed by the
//! struct definitions so that serialized reports are byte-stable.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// A counterexample: the variable assignment plus both evaluated sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub assignment: Vec<(String, usize)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lhs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rhs: Option<usize>,
}

impl Witness {
    pub fn new<I, S>(assignment: I) -> Self
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        Witness {
            assignment: assignment.into_iter().map(|(k, v)| (k.into(), v)).collect(),
            lhs: None,
            rhs: None,
        }
    }

    pub fn with_sides(mut self, lhs: usize, rhs: usize) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }

    /// Witness over the conventional variable names x, y, z, w.
    pub fn xyzw(values: &[usize]) -> Self {
        const NAMES: [&str; 4] = ["x", "y", "z", "w"];
        Witness::new(NAMES.iter().copied().zip(values.iter().copied()))
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.assignment.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, "}}")?;
        if let (Some(l), Some(r)) = (self.lhs, self.rhs) {
            write!(f, " lhs={l} rhs={r}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub subject: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            subject: None,
            status: Status::Pass,
            detail: None,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Option<Witness>) -> Self {
        Check {
            name: name.into(),
            subject: None,
            status: Status::Fail,
            detail: None,
            witness,
        }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            subject: None,
            status: Status::Skipped,
            detail: Some(why.into()),
            witness: None,
        }
    }

    /// Pass when `witness` is `None`, fail with it otherwise.
    pub fn from_witness(name: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, Some(w)),
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool) -> Self {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, None)
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_subject(mut self, subject: impl Into<String>) -> Self {
        self.subject = Some(subject.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Appends every check of `other`, tagging each with `subject` when it has none.
    pub fn absorb(&mut self, other: Report, subject: Option<&str>) {
        for mut c in other.checks {
            if c.subject.is_none() {
                c.subject = subject.map(str::to_owned);
            }
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            write!(f, "  [{tag}] {}", c.name)?;
            if let Some(s) = &c.subject {
                write!(f, " ({s})")?;
            }
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            if let Some(w) = &c.witness {
                write!(f, " witness {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
