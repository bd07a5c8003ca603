use kxcore::{Matrix, Poly, Subspace};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = concat!("kxcert ", env!("CARGO_PKG_VERSION"));

/// A JSON certificate. Keys come out sorted because `serde_json::Map` is a
/// `BTreeMap` without the `preserve_order` feature.
#[derive(Clone, Debug)]
pub struct Certificate {
    analysis: &'static str,
    digest: String,
    results: Value,
    verification: Vec<(String, bool)>,
}

impl Certificate {
    /// `inputs` are the canonical serializations of the parsed input files.
    pub fn new(analysis: &'static str, inputs: &[&str], results: Value) -> Certificate {
        let mut hasher = Sha256::new();
        for (i, text) in inputs.iter().enumerate() {
            if i > 0 {
                hasher.update(b"\x00");
            }
            hasher.update(text.as_bytes());
        }
        Certificate {
            analysis,
            digest: format!("sha256:{:x}", hasher.finalize()),
            results,
            verification: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.verification.push((name.into(), passed));
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.verification
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let verification: Vec<Value> = self
            .verification
            .iter()
            .map(|(name, passed)| json!({ "name": name, "passed": passed }))
            .collect();
        json!({
            "analysis": self.analysis,
            "input_digest": self.digest,
            "results": self.results,
            "verification": verification,
            "tool_version": TOOL_VERSION,
        })
    }

    pub fn render(&self) -> String {
        let mut out =
            serde_json::to_string_pretty(&self.to_json()).expect("certificate is valid JSON");
        out.push('\n');
        out
    }
}

pub fn matrix_json(m: &Matrix) -> Value {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|s| Value::String(s.to_string()))
                .collect::<Value>()
        })
        .collect()
}

/// Basis vectors of the canonical (reduced column echelon) form.
pub fn subspace_json(s: &Subspace) -> Value {
    (0..s.dim())
        .map(|j| {
            s.basis()
                .column(j)
                .iter()
                .map(|x| Value::String(x.to_string()))
                .collect::<Value>()
        })
        .collect()
}

pub fn poly_json(p: &Poly) -> Value {
    Value::String(p.to_string())
}

pub fn polys_json(ps: &[Poly]) -> Value {
    ps.iter().map(poly_json).collect()
}

/// One-line error record.
pub fn error_line(kind: &str, reason: &str) -> String {
    json!({ "kind": kind, "reason": reason }).to_string()
}
