//! Verdict documents: UTF-8 JSON with a fixed field order.
//!
//! Struct fields serialize in declaration order and every free-form object
//! is a `serde_json::Map`, which keeps its keys sorted, so equal documents
//! are equal byte for byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "idealforge";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    NonMember,
    Pass,
    Fail,
    UndecidedResource,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Member | Verdict::Pass => 0,
            Verdict::NonMember | Verdict::Fail => 1,
            Verdict::UndecidedResource => 3,
        }
    }
}

/// What was asked: the operation, its parameters and the canonical text of
/// every input set, with a SHA-256 digest over all three.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub operation: String,
    pub params: BTreeMap<String, String>,
    pub inputs: Vec<String>,
    pub digest: String,
}

impl Claim {
    pub fn new(operation: &str, params: BTreeMap<String, String>, inputs: Vec<String>) -> Claim {
        let digest = claim_digest(operation, &params, &inputs);
        Claim {
            operation: operation.to_string(),
            params,
            inputs,
            digest,
        }
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn digest_matches(&self) -> bool {
        claim_digest(&self.operation, &self.params, &self.inputs) == self.digest
    }
}

pub fn claim_digest(operation: &str, params: &BTreeMap<String, String>, inputs: &[String]) -> String {
    let bytes = serde_json::to_vec(&(operation, params, inputs)).expect("strings serialize");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub tool: String,
    pub version: String,
    pub claim: Claim,
    pub verdict: Verdict,
    pub certificate: Value,
    pub summary: Value,
    pub seed: u64,
}

impl VerdictDocument {
    pub fn new(claim: Claim, verdict: Verdict, certificate: Value, summary: Value, seed: u64) -> VerdictDocument {
        VerdictDocument {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            claim,
            verdict,
            certificate,
            summary,
            seed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<VerdictDocument> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn field_order_and_digest() {
        let claim = Claim::new(
            "member",
            BTreeMap::from([("ideal".into(), "fin^2".into())]),
            vec!["level 2: all\n".into()],
        );
        let doc = VerdictDocument::new(claim, Verdict::NonMember, json!({"b": 1, "a": 2}), json!({}), 0);
        let text = doc.to_json();
        let order: Vec<usize> = [
            "\"tool\"",
            "\"version\"",
            "\"claim\"",
            "\"verdict\"",
            "\"certificate\"",
            "\"summary\"",
            "\"seed\"",
        ]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
        assert!(text.contains("\"non-member\""));
        let back = VerdictDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert!(back.claim.digest_matches());
        let mut tampered = back.clone();
        tampered.claim.inputs[0] = "level 2: none\n".into();
        assert!(!tampered.claim.digest_matches());
    }
}
