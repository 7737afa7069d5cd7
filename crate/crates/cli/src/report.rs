use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use roundelim::numerics::round_sig12;
use roundelim::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// Result of one subcommand before rendering.
pub struct Outcome {
    pub results: Value,
    /// Rows for `--csv`; every row is an object with the same keys.
    pub table: Vec<Value>,
    /// Names of the invariants that failed.
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn new(results: impl Serialize) -> Self {
        Self { results: to_value(results), table: Vec::new(), failures: Vec::new() }
    }

    pub fn table(mut self, rows: Vec<Value>) -> Self {
        self.table = rows;
        self
    }

    /// Records `name` as failed unless `ok`.
    pub fn check(&mut self, name: impl Into<String>, ok: bool) {
        if !ok {
            self.failures.push(name.into());
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Floats are rounded to 12 significant digits; integers are left alone.
pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig12(n.as_f64().unwrap());
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

pub fn envelope(command: &str, params: Value, out: &Outcome) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": normalize(params),
        "results": normalize(out.results.clone()),
        "pass": out.pass(),
        "failures": out.failures,
    })
}

pub fn error_envelope(command: &str, params: Value, err: &Error) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": normalize(params),
        "error": { "kind": error_kind(err), "message": err.to_string() },
        "pass": false,
    })
}

pub fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Domain(_) => "domain",
        Error::SizeCap { .. } => "size_cap",
        Error::Dimension(_) => "dimension",
        Error::Promise(_) => "promise",
        Error::Assertion(_) => "assertion",
    }
}

/// Exit status: `1` for a failed invariant, `2` for bad input.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Assertion(_) => 1,
        _ => 2,
    }
}

fn csv_field(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

/// Columns follow the key order of the first row.
pub fn write_csv(w: &mut impl Write, rows: &[Value]) -> std::io::Result<()> {
    let Some(Value::Object(first)) = rows.first() else {
        return Ok(());
    };
    let cols: Vec<&String> = first.keys().collect();
    writeln!(w, "{}", cols.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(","))?;
    let empty = Map::new();
    for row in rows {
        let m = row.as_object().unwrap_or(&empty);
        let line: Vec<String> = cols.iter().map(|c| csv_field(&normalize(m.get(*c).cloned().unwrap_or(Value::Null)))).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_are_rounded() {
        let v = normalize(json!({"a": 0.1 + 0.2, "b": [1, 2.0000000000001], "c": "1/3"}));
        assert_eq!(v, json!({"a": 0.3, "b": [1, 2.0], "c": "1/3"}));
    }

    #[test]
    fn csv_quotes_and_orders() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[json!({"x": 1, "y": "a,b"}), json!({"x": 2})]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,y\n1,\"a,b\"\n2,\n");
    }
}
