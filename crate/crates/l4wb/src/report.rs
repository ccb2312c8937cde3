//! Report envelope shared by every CLI subcommand: a schema-versioned
//! JSON document with the echoed inputs, the operation payload and run
//! diagnostics, plus a CSV rendering of the same payload.
//!
//! Numbers are serialized as shortest round-trip decimal strings (the
//! serde_json default), so the JSON and CSV renderings of a payload
//! carry bit-identical numeric tokens.

use crate::Result;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "l4wb/1";

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct Report {
    pub schema_version: String,
    pub subcommand: String,
    /// echo of the run configuration and subcommand parameters
    pub inputs: Value,
    /// operation-specific payload; tabular payloads carry "header" and
    /// "rows" fields and render as real CSV tables
    pub results: Value,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct Diagnostics {
    pub runtime_ms: u128,
    pub tol: f64,
    pub threads: usize,
}

impl Report {
    pub fn new(subcommand: &str, inputs: Value, results: Value, diagnostics: Diagnostics) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            subcommand: subcommand.to_string(),
            inputs,
            results,
            diagnostics,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV rendering: tabular payloads (with "header" and "rows")
    /// become a table; everything else flattens to (path, value) rows.
    pub fn to_csv(&self) -> String {
        if let (Some(header), Some(rows)) = (
            self.results.get("header").and_then(Value::as_array),
            self.results.get("rows").and_then(Value::as_array),
        ) {
            let mut out = String::new();
            out.push_str(&join_csv(header));
            out.push('\n');
            for row in rows {
                if let Some(cells) = row.as_array() {
                    out.push_str(&join_csv(cells));
                    out.push('\n');
                }
            }
            return out;
        }
        let mut out = String::from("key,value\n");
        flatten("results", &self.results, &mut out);
        out
    }

    pub fn write(&self, output: Option<&std::path::Path>, csv: bool) -> Result<()> {
        let body = if csv { self.to_csv() } else { self.to_json() };
        match output {
            Some(path) => std::fs::write(path, body.as_bytes())?,
            None => println!("{body}"),
        }
        Ok(())
    }
}

fn scalar_token(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn join_csv(cells: &[Value]) -> String {
    cells
        .iter()
        .map(scalar_token)
        .collect::<Vec<_>>()
        .join(",")
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (key, val) in map {
                flatten(&format!("{prefix}.{key}"), val, out);
            }
        }
        Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), val, out);
            }
        }
        scalar => {
            out.push_str(prefix);
            out.push(',');
            out.push_str(&scalar_token(scalar));
            out.push('\n');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        Report::new(
            "kloosterman",
            json!({"n": 1, "m": 1, "c": 3}),
            json!({"value": -1.0, "nested": {"pi": std::f64::consts::PI}}),
            Diagnostics {
                runtime_ms: 7,
                tol: 1e-8,
                threads: 1,
            },
        )
    }

    #[test]
    fn json_roundtrip_is_lossless() {
        let r = sample();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(r, back);
        assert_eq!(back.schema_version, SCHEMA_VERSION);
    }

    #[test]
    fn csv_and_json_numeric_tokens_agree() {
        let r = sample();
        let csv = r.to_csv();
        // shortest round-trip decimal of pi appears identically in both
        let tok = serde_json::to_string(&std::f64::consts::PI).unwrap();
        assert!(r.to_json().contains(&tok));
        assert!(csv.contains(&format!("results.nested.pi,{tok}")));
        assert!(csv.contains("results.value,-1.0"));
    }

    #[test]
    fn tabular_payload_renders_as_table() {
        let r = Report::new(
            "expsum-scan",
            json!({}),
            json!({
                "header": ["c2p", "re"],
                "rows": [[4, 0.5], [5, 0.0]],
            }),
            Diagnostics {
                runtime_ms: 0,
                tol: 1e-8,
                threads: 1,
            },
        );
        assert_eq!(r.to_csv(), "c2p,re\n4,0.5\n5,0.0\n");
    }
}
