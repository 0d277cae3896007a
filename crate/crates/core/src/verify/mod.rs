//! Seeded verification suites; each returns a deterministic report.

mod affinoid;
mod category;
mod cech;
pub mod fixtures;
mod novikov;
mod operator;

use crate::novikov::Precision;
use crate::random::{self, SeededRng};
use crate::report::VerificationReport;

pub use affinoid::affinoid_suite;
pub use category::category_suite;
pub use cech::cech_suite;
pub use novikov::novikov_suite;
pub use operator::operator_suite;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub prec: Precision,
    pub samples: usize,
    pub window: i64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            prec: Precision::integer(6),
            samples: 100,
            window: 4,
        }
    }
}

impl VerifyConfig {
    /// Independent stream per named check, so adding a check leaves the others unchanged.
    pub fn rng(&self, check: &str) -> SeededRng {
        let salt = check.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        random::rng(self.seed ^ salt)
    }
}

/// Runs `cases` instances of a check, recording one summary line and the first failure.
pub fn check(
    report: &mut VerificationReport,
    name: &str,
    cases: usize,
    mut case: impl FnMut(usize) -> Result<(), String>,
) {
    for i in 0..cases {
        if let Err(why) = case(i) {
            report.line(format!("{name}: FAIL at case {i}"));
            report.fail(format!("{name}, case {i}: {why}"));
            return;
        }
    }
    report.line(format!("{name}: PASS ({cases} cases)"));
}

/// `Err` with a message unless `cond`.
pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub const SUITES: [&str; 5] = ["novikov", "affinoid", "operator", "cech", "category"];

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Option<VerificationReport> {
    Some(match name {
        "novikov" => novikov_suite(cfg),
        "affinoid" => affinoid_suite(cfg),
        "operator" => operator_suite(cfg),
        "cech" => cech_suite(cfg),
        "category" => category_suite(cfg),
        _ => return None,
    })
}
