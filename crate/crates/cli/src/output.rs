//! Deterministic CSV and JSON rendering. Every float is written with 17
//! significant digits so it parses back to the same `f64`.

use std::io::Write;

use serde_json::{Map, Number, Value};

/// `x` with 17 significant digits; non-finite values as `NaN`/`inf`.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// A JSON number carrying the 17-digit text, or `null` when not finite.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(float(x).parse::<Number>().expect("formatted float is valid JSON"))
    } else {
        Value::Null
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// Builds a JSON object preserving insertion order.
#[derive(Default)]
pub struct Object(Map<String, Value>);

impl Object {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.to_owned(), value.into());
        self
    }

    pub fn float(self, key: &str, x: f64) -> Self {
        self.field(key, num(x))
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.0)
    }

    pub fn render(self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(&self.into_value()).expect("serialisable");
        out.push(b'\n');
        out
    }
}

/// `#`-prefixed metadata lines, a header row, then records.
pub struct Table {
    meta: Vec<(String, String)>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            meta: Vec::new(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn row(&mut self, fields: Vec<String>) {
        debug_assert_eq!(fields.len(), self.header.len());
        self.rows.push(fields);
    }

    pub fn render(self) -> Vec<u8> {
        let mut out = Vec::new();
        for (k, v) in &self.meta {
            writeln!(out, "# {k}={v}").expect("write to memory");
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header).expect("write to memory");
        for r in &self.rows {
            w.write_record(r).expect("write to memory");
        }
        w.into_inner().expect("flush to memory")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for &x in &[2.404_825_557_695_773, 0.1, 1.0 / 3.0, -7.5e-300, 1e300, 0.0] {
            let s = float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn json_numbers_keep_their_digits() {
        let out = Object::new().float("x", 0.1).field("n", 3).render();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("\"x\": 1.0000000000000001e-1"));
        assert!(text.contains("\"n\": 3"));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn csv_uses_lf_and_comment_metadata() {
        let mut t = Table::new(&["a", "b"]).meta("nu", float(0.5));
        t.row(vec!["1".into(), float(2.0)]);
        let text = String::from_utf8(t.render()).unwrap();
        assert_eq!(text, "# nu=5.0000000000000000e-1\na,b\n1,2.0000000000000000e0\n");
    }
}
