//! JSON interchange formats.
//!
//! All integers travel as decimal strings so values beyond 64 bits survive
//! a round trip losslessly. Serialization is deterministic: struct fields
//! appear in declaration order and no timestamps enter the payload.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// On-disk problem instance: a row-major matrix plus optional SVP exponent
/// and ILP vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub rows: usize,
    pub cols: usize,
    /// Row-major decimal integer strings, length rows * cols.
    pub data: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<String>>,
}

/// On-disk solver result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultFile {
    pub problem: String,
    pub method: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<String>>,
    pub delta: String,
    pub stats: Stats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub states_explored: usize,
    pub elapsed_ms: u64,
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

pub fn parse_bigint_vec(v: &[String]) -> Result<Vec<BigInt>> {
    v.iter().map(|s| parse_bigint(s)).collect()
}

pub fn format_bigint_vec(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

impl InstanceFile {
    pub fn from_matrix(m: &IntMatrix) -> Self {
        InstanceFile {
            rows: m.rows(),
            cols: m.cols(),
            data: format_bigint_vec(m.entries()),
            p: None,
            c: None,
            b: None,
        }
    }

    pub fn matrix(&self) -> Result<IntMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "data has {} entries, expected {} ({} x {})",
                self.data.len(),
                self.rows * self.cols,
                self.rows,
                self.cols
            )));
        }
        IntMatrix::new(self.rows, self.cols, parse_bigint_vec(&self.data)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad instance JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }
}

impl ResultFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad result JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = IntMatrix::from_i64(2, 3, &[1, -2, 3, 0, 5, -6]).unwrap();
        let f = InstanceFile::from_matrix(&m);
        let back = InstanceFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.matrix().unwrap(), m);
    }

    #[test]
    fn optional_fields_survive() {
        let mut f = InstanceFile::from_matrix(&IntMatrix::identity(2));
        f.p = Some(2);
        f.b = Some(vec!["3".into(), "0".into()]);
        f.c = Some(vec!["1".into(), "-1".into()]);
        let back = InstanceFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_bad_data() {
        assert!(InstanceFile::from_json("{not json").is_err());
        let f = InstanceFile {
            rows: 2,
            cols: 2,
            data: vec!["1".into(); 3],
            p: None,
            c: None,
            b: None,
        };
        assert!(f.matrix().is_err());
        let f = InstanceFile {
            rows: 1,
            cols: 1,
            data: vec!["1x".into()],
            p: None,
            c: None,
            b: None,
        };
        assert!(f.matrix().is_err());
    }

    #[test]
    fn result_round_trip_and_invariant() {
        let r = ResultFile {
            problem: "svp".into(),
            method: "dp".into(),
            status: "optimal".into(),
            objective: Some("4".into()),
            solution: Some(vec!["1".into(), "0".into()]),
            delta: "3".into(),
            stats: Stats {
                states_explored: 17,
                elapsed_ms: 0,
            },
        };
        let back = ResultFile::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn serialization_is_deterministic() {
        let m = IntMatrix::from_i64(2, 2, &[1, 2, 3, 4]).unwrap();
        let a = InstanceFile::from_matrix(&m).to_json();
        let b = InstanceFile::from_matrix(&m).to_json();
        assert_eq!(a, b);
    }
}
