//! Machine-readable reports.
//!
//! Every command emits one [`Report`]: the command echo, its arguments,
//! per-item payloads, a holds/fails/flagged summary, and the exit status.
//! Identical invocations produce byte-identical output: items are sorted
//! by label, JSON objects are key-sorted, and every floating value is
//! rounded to 12 significant digits before serialization.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use covol_core::bounds::ChainReport;
use covol_core::interval::BoundedValue;

/// Round to 12 significant digits; display-only.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("round-trip of formatted float")
}

/// JSON encoding of a float: finite values as numbers (12 significant
/// digits), non-finite ones as strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(sig12(x))
    } else if x.is_nan() {
        json!("NaN")
    } else if x > 0.0 {
        json!("Infinity")
    } else {
        json!("-Infinity")
    }
}

/// Interval as a [lo, hi] pair.
pub fn interval(v: &BoundedValue) -> Value {
    json!([num(v.lo), num(v.hi)])
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Summary {
    pub holds: usize,
    pub fails: usize,
    pub flagged: usize,
    pub errors: usize,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub args: BTreeMap<String, String>,
    pub items: Vec<Value>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    pub summary: Summary,
    pub status: i32,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            args: BTreeMap::new(),
            items: Vec::new(),
            details: Value::Null,
            summary: Summary::default(),
            status: 0,
        }
    }

    pub fn arg(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.args.insert(key.to_string(), value.to_string());
        self
    }

    pub fn tally_check(&mut self, holds: bool) {
        if holds {
            self.summary.holds += 1;
        } else {
            self.summary.fails += 1;
        }
    }

    /// Fold one chain into the summary: flagged links count as flagged,
    /// the rest as holds/fails.
    pub fn tally_chain(&mut self, chain: &ChainReport) {
        for link in &chain.links {
            if link.flag.is_some() {
                self.summary.flagged += 1;
            } else if link.holds {
                self.summary.holds += 1;
            } else {
                self.summary.fails += 1;
            }
        }
    }

    /// True when some emitted chain link failed to hold (used by --strict).
    pub fn has_link_failures(&self) -> bool {
        fn scan(v: &Value) -> bool {
            match v {
                Value::Object(map) => {
                    if map.get("holds") == Some(&Value::Bool(false)) {
                        return true;
                    }
                    map.values().any(scan)
                }
                Value::Array(items) => items.iter().any(scan),
                _ => false,
            }
        }
        self.items.iter().any(scan)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut text =
                    serde_json::to_string_pretty(&self).expect("report serialization");
                text.push('\n');
                text
            }
            OutputFormat::Text => self.render_text(),
            OutputFormat::Csv => self.render_csv(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.command));
        for (k, v) in &self.args {
            out.push_str(&format!("#   {k} = {v}\n"));
        }
        for item in &self.items {
            render_text_value(item, 0, &mut out);
            out.push('\n');
        }
        if !self.details.is_null() {
            out.push_str("details:\n");
            render_text_value(&self.details, 1, &mut out);
        }
        out.push_str(&format!(
            "summary: holds={} fails={} flagged={} errors={}\nstatus: {}\n",
            self.summary.holds,
            self.summary.fails,
            self.summary.flagged,
            self.summary.errors,
            self.status
        ));
        out
    }

    fn render_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["path", "value"])
            .expect("csv header");
        writer
            .write_record(["command", &self.command])
            .expect("csv row");
        for (k, v) in &self.args {
            writer
                .write_record([format!("args.{k}"), v.clone()])
                .expect("csv row");
        }
        for (i, item) in self.items.iter().enumerate() {
            flatten_csv(item, &format!("items[{i}]"), &mut writer);
        }
        if !self.details.is_null() {
            flatten_csv(&self.details, "details", &mut writer);
        }
        for (k, v) in [
            ("holds", self.summary.holds),
            ("fails", self.summary.fails),
            ("flagged", self.summary.flagged),
            ("errors", self.summary.errors),
        ] {
            writer
                .write_record([format!("summary.{k}"), v.to_string()])
                .expect("csv row");
        }
        writer
            .write_record(["status", &self.status.to_string()])
            .expect("csv row");
        String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf8")
    }
}

fn render_text_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text_value(val, depth + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(val))),
                }
            }
        }
        Value::Array(items) => {
            for val in items {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text_value(val, depth + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar_text(val))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar_text(v))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten_csv(v: &Value, path: &str, writer: &mut csv::Writer<Vec<u8>>) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                flatten_csv(val, &format!("{path}.{k}"), writer);
            }
        }
        Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                flatten_csv(val, &format!("{path}[{i}]"), writer);
            }
        }
        other => {
            writer
                .write_record([path.to_string(), scalar_text(other)])
                .expect("csv row");
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Serialize a chain report with its floats rounded for display.
pub fn chain_to_value(chain: &ChainReport) -> Value {
    let links: Vec<Value> = chain
        .links
        .iter()
        .map(|l| {
            let mut obj = serde_json::Map::new();
            obj.insert("name".into(), json!(l.name));
            obj.insert("lhs".into(), num(l.lhs));
            obj.insert("rhs".into(), num(l.rhs));
            obj.insert("relation".into(), json!(l.relation.symbol()));
            obj.insert("slack".into(), num(l.slack));
            obj.insert("holds".into(), json!(l.holds));
            if let Some(flag) = &l.flag {
                obj.insert("flag".into(), json!(flag));
            }
            if let Some(note) = &l.note {
                obj.insert("note".into(), json!(note));
            }
            Value::Object(obj)
        })
        .collect();
    json!({
        "links": links,
        "verdict": chain.verdict,
        "notes": chain.notes,
        "inputs": {
            "field": chain.inputs.field,
            "algebra": chain.inputs.algebra,
            "volume": num(chain.inputs.volume),
            "epsilon": num(chain.inputs.epsilon),
            "c": num(chain.inputs.c),
            "c1": num(chain.inputs.c1),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(2.442574917805917_4), 2.44257491781);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(1.0), 1.0);
        let x = std::f64::consts::PI;
        assert_eq!(sig12(x).to_string(), "3.14159265359");
        assert!((sig12(x) - x).abs() < 1e-11);
    }

    #[test]
    fn non_finite_numbers_become_strings() {
        assert_eq!(num(f64::INFINITY), json!("Infinity"));
        assert_eq!(num(f64::NEG_INFINITY), json!("-Infinity"));
        assert_eq!(num(f64::NAN), json!("NaN"));
    }

    #[test]
    fn render_is_deterministic() {
        let mut report = Report::new("demo");
        report.arg("corpus", "x.json");
        report.items.push(json!({"label": "A", "value": num(1.5)}));
        report.tally_check(true);
        let a = report.render(OutputFormat::Json);
        let b = report.render(OutputFormat::Json);
        assert_eq!(a, b);
        let c = report.render(OutputFormat::Csv);
        assert!(c.contains("items[0].label,A"));
        let t = report.render(OutputFormat::Text);
        assert!(t.contains("label: A"));
    }
}
