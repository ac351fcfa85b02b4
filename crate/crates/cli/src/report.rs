//! Report assembly and serialization.
//!
//! Floats are written with 17 significant digits so they round-trip exactly;
//! non-finite values become the strings `"inf"` / `"-inf"`.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

pub type Object = Map<String, Value>;

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x == f64::INFINITY {
        Value::from("inf")
    } else if x == f64::NEG_INFINITY {
        Value::from("-inf")
    } else {
        Value::from("nan")
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Builds a JSON object from `(key, value)` pairs.
#[macro_export]
macro_rules! obj {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = $crate::report::Object::new();
        $( m.insert(String::from($k), serde_json::Value::from($v)); )*
        m
    }};
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Object,
    pub results: Object,
}

struct SigDigits<'a>(PrettyFormatter<'a>);

impl Formatter for SigDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn write_json<W: Write>(report: &Report, mut out: W) -> io::Result<()> {
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, SigDigits(PrettyFormatter::new()));
    report.serialize(&mut ser)?;
    writeln!(out)
}

/// Flattens `results` into `quantity,value` rows with dotted paths.
pub fn write_csv<W: Write>(report: &Report, mut out: W) -> io::Result<()> {
    writeln!(out, "quantity,value")?;
    let mut rows = Vec::new();
    for (k, v) in &report.results {
        flatten(k.clone(), v, &mut rows);
    }
    for (k, v) in rows {
        writeln!(out, "{k},{v}")?;
    }
    Ok(())
}

fn flatten(prefix: String, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(format!("{prefix}.{k}"), v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(format!("{prefix}.{i}"), v, rows);
            }
        }
        Value::Null => rows.push((prefix, String::new())),
        Value::Number(n) => rows.push((
            prefix,
            match n.as_f64() {
                Some(x) if n.is_f64() => format!("{x:.16e}"),
                _ => n.to_string(),
            },
        )),
        Value::String(s) if s.contains([',', '"', '\n']) => {
            rows.push((prefix, format!("\"{}\"", s.replace('"', "\"\""))))
        }
        Value::String(s) => rows.push((prefix, s.clone())),
        Value::Bool(b) => rows.push((prefix, b.to_string())),
    }
}
