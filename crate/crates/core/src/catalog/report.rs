use std::fmt::{self, Display, Formatter};

use num_rational::BigRational;

use super::Report;
use crate::expr::format_env;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// First exponent at which the sides differ, and `lhs - rhs` there.
    Fail { exponent: i64, delta: BigRational },
    Error(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail { .. } => "fail",
            Status::Error(_) => "error",
        }
    }
}

impl Display for Report {
    /// One tab-separated `key=value` record.
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "name={}\tparams={}\torder={}\tstatus={}", self.name, format_env(&self.params), self.order, self.status.label())?;
        match &self.status {
            Status::Pass => Ok(()),
            Status::Fail { exponent, delta } => write!(
                f,
                "\tdiscrepancy_exponent={exponent}\tdelta_numerator={}\tdelta_denominator={}",
                delta.numer(),
                delta.denom()
            ),
            Status::Error(msg) => write!(f, "\tmessage={}", msg.replace(['\t', '\n'], " ")),
        }
    }
}

/// All records of a run, failures and errors first, then passes, each group in instance order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteSummary {
    pub records: Vec<Report>,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

impl SuiteSummary {
    pub fn new(records: Vec<Report>) -> Self {
        let (mut bad, good): (Vec<Report>, Vec<Report>) = records.into_iter().partition(|r| !r.passed());
        let failed = bad.iter().filter(|r| matches!(r.status, Status::Fail { .. })).count();
        let errors = bad.len() - failed;
        let passed = good.len();
        bad.extend(good);
        SuiteSummary { records: bad, passed, failed, errors }
    }

    pub fn total(&self) -> usize {
        self.records.len()
    }

    pub fn ok(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }
}

impl Display for SuiteSummary {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        writeln!(f, "total={}\tpass={}\tfail={}\terror={}", self.total(), self.passed, self.failed, self.errors)
    }
}
