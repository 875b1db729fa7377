//! Tabular reports as CSV or JSON.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Meta {
    pub spec_hash: String,
    pub version: String,
    pub mode: String,
    pub command: String,
}

/// Rows of pre-rendered cells plus an optional summary object.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub meta: Meta,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Map<String, Value>,
}

impl Report {
    pub fn new(meta: Meta, columns: &[&str]) -> Self {
        Self { meta, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), summary: Map::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }
}

/// CSV: one header row, then data rows; summary entries follow as
/// `# key=value` comment lines. JSON: `{meta, rows, summary}` with each row an
/// object keyed by column name.
pub fn emit_report<W: Write>(report: &Report, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{}", report.columns.join(","))?;
            for row in &report.rows {
                writeln!(out, "{}", row.join(","))?;
            }
            for (k, v) in &report.summary {
                let text = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                writeln!(out, "# {k}={text}")?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Value> =
                        report.columns.iter().cloned().zip(r.iter().map(|c| Value::String(c.clone()))).collect();
                    Value::Object(obj)
                })
                .collect();
            let doc = serde_json::json!({
                "meta": report.meta,
                "rows": rows,
                "summary": report.summary,
            });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let meta = Meta { spec_hash: "ab".into(), version: "0.1.0".into(), mode: "exact".into(), command: "t".into() };
        let mut r = Report::new(meta, &["x", "value"]);
        r.push(vec!["1".into(), "300/7".into()]);
        r.push(vec!["2".into(), "-1/2".into()]);
        r.note("sup", "1.5e0");
        r
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        emit_report(&sample(), Format::Csv, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "x,value\n1,300/7\n2,-1/2\n# sup=1.5e0\n");
    }

    #[test]
    fn json_layout_round_trips_rationals() {
        let mut out = Vec::new();
        emit_report(&sample(), Format::Json, &mut out).unwrap();
        let v: Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["meta"]["spec_hash"], "ab");
        assert_eq!(v["rows"][0]["value"], "300/7");
        let back: num_rational::BigRational = v["rows"][0]["value"].as_str().unwrap().parse().unwrap();
        assert_eq!(back, num_rational::BigRational::new(300.into(), 7.into()));
        assert_eq!(v["summary"]["sup"], "1.5e0");
    }
}
