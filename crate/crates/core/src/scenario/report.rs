use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ExpectedFail,
    Absent,
}

/// What a check's defect is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    /// Passes when `defect < tolerance`.
    Below,
    /// Passes when `defect > tolerance`.
    Above,
    /// The identity is predicted not to hold here: `defect > tolerance`
    /// gives expected-fail, anything else is a failure.
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The statement the check verifies.
    pub anchor: String,
    pub defect: Option<f64>,
    pub tolerance: f64,
    pub expect: Expect,
    pub status: Status,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        anchor: impl Into<String>,
        defect: f64,
        tolerance: f64,
        expect: Expect,
    ) -> Self {
        let status = match expect {
            _ if !defect.is_finite() => Status::Fail,
            Expect::Below if defect < tolerance => Status::Pass,
            Expect::Above if defect > tolerance => Status::Pass,
            Expect::Violated if defect > tolerance => Status::ExpectedFail,
            _ => Status::Fail,
        };
        Self {
            name: name.into(),
            anchor: anchor.into(),
            defect: Some(defect),
            tolerance,
            expect,
            status,
        }
    }

    /// A check that does not apply to the given parameters.
    pub fn absent(
        name: impl Into<String>,
        anchor: impl Into<String>,
        tolerance: f64,
        expect: Expect,
    ) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            defect: None,
            tolerance,
            expect,
            status: Status::Absent,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub m: usize,
    pub k: Option<usize>,
    pub c: f64,
    pub mu: f64,
    pub seed: u64,
    pub h: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            m: 3,
            k: None,
            c: 1.0,
            mu: 1.0,
            seed: 7,
            h: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema_version: u32,
    pub id: String,
    pub params: Params,
    pub checks: Vec<Check>,
    pub status: Status,
    /// Only filled in on request, so reports stay reproducible by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl ScenarioReport {
    pub fn new(id: &str, params: Params, checks: Vec<Check>) -> Self {
        let status = if checks.iter().all(Check::passed) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            schema_version: SCHEMA_VERSION,
            id: id.to_string(),
            params,
            checks,
            status,
            wall_time_s: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Several reports from one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub reports: Vec<ScenarioReport>,
    pub status: Status,
}

impl SuiteReport {
    pub fn new(reports: Vec<ScenarioReport>) -> Self {
        let status = if reports.iter().all(ScenarioReport::passed) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            schema_version: SCHEMA_VERSION,
            reports,
            status,
        }
    }
}

/// Compact JSON with floats written as `d.dddddddddddddddde±x`.
struct Canonical;

impl Formatter for Canonical {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Canonical JSON: object keys sorted, 17 significant digits per float,
/// trailing newline. Equal values give equal bytes.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // Going through `Value` sorts keys (its map is a BTreeMap).
    let tree = serde_json::to_value(value)?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Canonical);
    tree.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}
