//! The report written to standard output, as JSON or as flattened CSV.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

/// One verified property.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    /// The identity or inequality being verified.
    pub paper_ref: String,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub subcommand: &'static str,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
    pub wall_ms: u64,
}

impl Report {
    pub fn new(subcommand: &'static str) -> Self {
        Self {
            subcommand,
            inputs: Map::new(),
            results: Map::new(),
            checks: Vec::new(),
            wall_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.into(), v.into());
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.into(), v.into());
    }

    pub fn check(&mut self, name: &str, paper_ref: &str, ok: bool) {
        self.checks.push(Check {
            name: name.into(),
            paper_ref: paper_ref.into(),
            ok,
        });
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "results": self.results,
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "paper_ref": c.paper_ref, "ok": c.ok})).collect::<Vec<_>>(),
            "wall_ms": self.wall_ms,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report serializes")
    }

    /// One `key,value` row per leaf, keys as dotted paths.
    pub fn to_csv(&self) -> String {
        let mut rows = Vec::new();
        flatten("", &self.to_value(), &mut rows);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["key", "value"]).expect("in-memory write");
        for (k, v) in rows {
            w.write_record([k, v]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.into(), s.clone())),
        other => out.push((prefix.into(), other.to_string())),
    }
}

/// A float as a JSON number; non-finite values become strings so that no
/// NaN or infinity is ever written as a number.
pub fn real(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(format!("{x}")), Value::Number)
}

/// An integer as a JSON number when it fits in 64 bits, else as a decimal string.
pub fn integer(x: &BigInt) -> Value {
    x.to_i64()
        .map(Value::from)
        .or_else(|| x.to_u64().map(Value::from))
        .unwrap_or_else(|| Value::String(x.to_string()))
}
