use std::collections::BTreeMap;

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A real rendered with 17 significant digits, so that re-parsing gives the
/// same bits; non-finite values render as `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Real {
    pub fn render(self) -> String {
        if self.0.is_finite() {
            format!("{:.16e}", self.0)
        } else {
            "null".to_string()
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawValue::from_string(self.render())
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Input {
    Real(Real),
    Int(i64),
    Text(String),
}

impl From<f64> for Input {
    fn from(x: f64) -> Self {
        Input::Real(Real(x))
    }
}

impl From<i64> for Input {
    fn from(x: i64) -> Self {
        Input::Int(x)
    }
}

impl From<u32> for Input {
    fn from(x: u32) -> Self {
        Input::Int(x as i64)
    }
}

impl From<&str> for Input {
    fn from(x: &str) -> Self {
        Input::Text(x.to_string())
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Series,
    Product,
    MonteCarlo,
}

/// The JSON document every subcommand prints.
#[derive(Debug, Serialize)]
pub struct Record {
    pub command: String,
    pub inputs: BTreeMap<&'static str, Input>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Real>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Box<RawValue>>,
    pub tol: Real,
    pub provenance: Provenance,
}

impl Record {
    pub fn new(command: impl Into<String>, tol: f64, provenance: Provenance) -> Self {
        Record {
            command: command.into(),
            inputs: BTreeMap::new(),
            value: None,
            values: None,
            rows: None,
            tol: Real(tol),
            provenance,
        }
    }

    pub fn input(mut self, key: &'static str, v: impl Into<Input>) -> Self {
        self.inputs.insert(key, v.into());
        self
    }

    pub fn value(mut self, v: f64) -> Self {
        self.value = Some(Real(v));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records always serialise")
    }
}
