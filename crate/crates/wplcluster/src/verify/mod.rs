//! Identity suites, the finite-field Kronecker oracle and the exponent
//! auditor.
//!
//! Every suite evaluates its cases exactly: polynomial identities in ν, and
//! series identities on all monomials up to a declared precision.

pub mod audit;
pub mod kronecker;
mod suites;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Discrepancy, Series};

pub use audit::{audit, AuditFamily, AuditReport};
pub use kronecker::{brute_force_kronecker_grassmannian, KroneckerRep};

/// Registered suite names.
pub const SUITES: [&str; 10] = [
    "prop34",
    "p1_relations",
    "lemma54_prop511",
    "torsion_lemmas",
    "example33",
    "chebyshev",
    "bases",
    "bar_invariance",
    "mutation_closure",
    "kronecker_oracle",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn new(suite: &str, cases: Vec<CaseResult>) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            passed: cases.iter().all(CaseResult::passed),
            cases,
        }
    }

    /// Joins several reports under one name.
    pub fn merge(suite: &str, parts: Vec<SuiteReport>) -> Self {
        let cases = parts
            .into_iter()
            .flat_map(|r| {
                let prefix = r.suite;
                r.cases.into_iter().map(move |mut c| {
                    c.name = format!("{prefix}/{}", c.name);
                    c
                })
            })
            .collect();
        SuiteReport::new(suite, cases)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed())
    }
}

/// Suite parameters. `precision` is a ψ-bound (the internal precision is
/// `d·precision`); `None` selects each suite's default.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub precision: Option<i64>,
    pub lmax: Option<i64>,
    /// Field sizes for the brute-force oracle.
    pub q: Option<Vec<u64>>,
}

impl SuiteParams {
    fn precision_or(&self, default: i64) -> i64 {
        self.precision.unwrap_or(default)
    }

    fn lmax_or(&self, default: i64) -> i64 {
        self.lmax.unwrap_or(default)
    }
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteReport> {
    match name {
        "prop34" => suites::prop34(params),
        "p1_relations" => suites::p1_relations(params),
        "lemma54_prop511" => suites::lemma54_prop511(params),
        "torsion_lemmas" => suites::torsion_lemmas(params),
        "example33" => suites::example33(params),
        "chebyshev" => suites::chebyshev_suite(params),
        "bases" => suites::bases(params),
        "bar_invariance" => suites::bar_invariance(params),
        "mutation_closure" => suites::mutation_closure(params),
        "kronecker_oracle" => suites::kronecker_oracle(params),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

/// Outcome of [`compare_series`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    /// Precision (units of 1/d) up to which the comparison was made.
    pub precision: Option<i64>,
    /// Number of monomials compared.
    pub terms: usize,
    pub certificate: Option<Discrepancy>,
}

/// Exact termwise comparison on all monomials with grade ≤ `precision`
/// (units of 1/d; `None` compares everything). Fails with
/// `InsufficientPrecision` when either side is known only below the bound.
pub fn compare_series(f: &Series, g: &Series, precision: Option<i64>) -> Result<Comparison> {
    let known = match (f.precision(), g.precision()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    };
    let bound = match (known, precision) {
        (Some(k), Some(p)) if k < p => {
            return Err(Error::InsufficientPrecision {
                needed: p,
                available: k,
                den: f.torus().d,
            })
        }
        (_, Some(p)) => Some(p),
        (k, None) => k,
    };
    let certificate = f.compare(g, bound)?;
    let t = f.torus();
    let terms = f
        .terms()
        .keys()
        .chain(g.terms().keys())
        .filter(|e| bound.is_none_or(|p| t.grade(e) <= p))
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    Ok(Comparison {
        equal: certificate.is_none(),
        precision: bound,
        terms,
        certificate,
    })
}

/// Accumulates cases for one suite.
#[derive(Default)]
pub(crate) struct Cases(pub Vec<CaseResult>);

impl Cases {
    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.0.push(CaseResult {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        });
    }

    /// Records an error as a failing case.
    pub fn attempt(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
        let name = name.into();
        match f() {
            Ok((ok, detail)) => self.check(name, ok, detail),
            Err(e) => self.check(name, false, format!("error: {e}")),
        }
    }

    /// Compares two sides of a series identity.
    pub fn series(
        &mut self,
        name: impl Into<String>,
        lhs: Result<Series>,
        rhs: Result<Series>,
        precision: Option<i64>,
    ) {
        self.attempt(name, || {
            let c = compare_series(&lhs?, &rhs?, precision)?;
            Ok((c.equal, describe(&c)))
        });
    }

    pub fn finish(self, suite: &str) -> SuiteReport {
        SuiteReport::new(suite, self.0)
    }
}

pub(crate) fn describe(c: &Comparison) -> String {
    let bound = c
        .precision
        .map_or("exactly".to_string(), |p| format!("up to grade {p}"));
    match &c.certificate {
        None => format!("{} monomials agree {bound}", c.terms),
        Some(d) => format!("differs {d} ({bound})"),
    }
}
