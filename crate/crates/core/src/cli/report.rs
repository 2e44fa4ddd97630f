use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Envelope shared by every command's JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub results: Value,
    pub version: String,
}

impl Report {
    pub fn new(command: Vec<String>, inputs: &[&[u8]], results: Value) -> Self {
        Report {
            inputs_digest: inputs_digest(&command, inputs),
            command,
            results,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Pretty JSON with keys in sorted order at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports contain only JSON-representable data");
        let mut text = serde_json::to_string_pretty(&value).expect("Value always serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// SHA-256 over the length-prefixed command words followed by the
/// length-prefixed contents of every input file.
pub fn inputs_digest(command: &[String], inputs: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    let words = command.iter().map(|w| w.as_bytes());
    for chunk in words.chain(inputs.iter().copied()) {
        hasher.update((chunk.len() as u64).to_le_bytes());
        hasher.update(chunk);
    }
    hex::encode(hasher.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        Report::new(
            vec!["scan".into(), "--min-n".into(), "3".into()],
            &[b"R 0 0\n"],
            json!({"zeta": 1, "alpha": {"b": [1, 2], "a": "x"}}),
        )
    }

    #[test]
    fn keys_sorted_and_round_trip() {
        let text = sample().to_json();
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(text.find("\"command\"").unwrap() < text.find("\"version\"").unwrap());
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, sample());
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn digest_depends_on_framing() {
        let a = inputs_digest(&["ab".into(), "c".into()], &[]);
        let b = inputs_digest(&["a".into(), "bc".into()], &[]);
        assert_ne!(a, b);
        assert_eq!(a.len(), 64);
        assert_ne!(inputs_digest(&[], &[b"x"]), inputs_digest(&[], &[b"y"]));
    }
}
