//! Certificates and their canonical JSON form.
//!
//! Canonical form: object keys sorted, no insignificant whitespace, floats
//! printed with the shortest representation that parses back to the same
//! value. Non-finite residuals are written as `null`.

use qfunctor_core::Tolerances;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: Option<f64>,
}

impl Check {
    /// Passes when `residual` is finite and at most `bound`.
    pub fn at_most(name: &str, residual: f64, bound: f64) -> Self {
        Self {
            name: name.to_string(),
            pass: residual.is_finite() && residual <= bound,
            residual: residual.is_finite().then_some(residual),
        }
    }

    pub fn failed(name: &str) -> Self {
        Self {
            name: name.to_string(),
            pass: false,
            residual: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub command: String,
    pub inputs_digest: String,
    pub checks: Vec<Check>,
    pub overall: bool,
    pub tolerances: Tolerances,
}

impl Certificate {
    pub fn new(command: &str, inputs_digest: String, checks: Vec<Check>, tolerances: Tolerances) -> Self {
        let overall = checks.iter().all(|c| c.pass);
        Self {
            command: command.to_string(),
            inputs_digest,
            checks,
            overall,
            tolerances,
        }
    }
}

/// Canonical JSON text of any serializable value.
pub fn canonical_json<T: Serialize>(value: &T, pretty: bool) -> String {
    // serde_json's Value map is ordered by key, which sorts every object
    let v = serde_json::to_value(value).expect("certificate data serializes");
    if pretty {
        serde_json::to_string_pretty(&v).expect("value serializes")
    } else {
        serde_json::to_string(&v).expect("value serializes")
    }
}

/// `sha256:<hex>` of the canonical form of `inputs`.
pub fn digest(inputs: &Value) -> String {
    let text = canonical_json(inputs, false);
    format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_at_every_level() {
        let v = json!({"b": 1, "a": {"z": 0.1, "y": [2, {"d": 1, "c": 2}]}});
        assert_eq!(canonical_json(&v, false), r#"{"a":{"y":[2,{"c":2,"d":1}],"z":0.1},"b":1}"#);
    }

    #[test]
    fn digest_ignores_key_order_and_whitespace() {
        let a: Value = serde_json::from_str(r#"{"x": 1, "y": [1.5, 2]}"#).unwrap();
        let b: Value = serde_json::from_str("{\"y\":[1.5,2],\n \"x\":1}").unwrap();
        assert_eq!(digest(&a), digest(&b));
        assert!(digest(&a).starts_with("sha256:"));
        assert_eq!(digest(&a).len(), "sha256:".len() + 64);
    }

    #[test]
    fn overall_is_the_conjunction() {
        let t = Tolerances::default();
        let ok = Certificate::new("x", String::new(), vec![Check::at_most("a", 0.0, 1.0)], t);
        assert!(ok.overall);
        let bad = Certificate::new("x", String::new(), vec![Check::at_most("a", 0.0, 1.0), Check::failed("b")], t);
        assert!(!bad.overall);
        assert!(Certificate::new("x", String::new(), vec![], t).overall);
    }

    #[test]
    fn infinite_residual_fails_and_serializes_as_null() {
        let c = Check::at_most("dims", f64::INFINITY, 1.0);
        assert!(!c.pass);
        assert_eq!(canonical_json(&c, false), r#"{"name":"dims","pass":false,"residual":null}"#);
    }

    #[test]
    fn certificates_reparse_identically() {
        let cert = Certificate::new(
            "roundtrip",
            "sha256:00".into(),
            vec![Check::at_most("r", 1.234_567_890_123e-13, 1e-8)],
            Tolerances::default(),
        );
        let text = canonical_json(&cert, false);
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(canonical_json(&back, false), text);
    }
}
