use std::fmt::Write as _;

use serde_json::{Number, Value};

/// Significant digits kept in every emitted float.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Magnitudes below this print as zero.
const ZERO_SNAP: f64 = 1e-14;

pub const SCHEMA_VERSION: u64 = 1;

/// Rounds to [`SIGNIFICANT_DIGITS`] and folds `-0` and rounding dust into `0`.
pub fn round(x: f64) -> f64 {
    if x.abs() < ZERO_SNAP {
        return 0.0;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Applies [`round`] to every float in a JSON tree.
pub fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            *n = Number::from_f64(round(x)).expect("finite");
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn render_json(mut value: Value) -> String {
    round_floats(&mut value);
    let mut s = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    s.push('\n');
    s
}

pub enum Cell {
    Text(String),
    Float(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Single header row, comma separated, LF line endings.
pub fn render_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<Cell>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (k, cell) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            match cell {
                Cell::Text(t) => out.push_str(t),
                Cell::Float(x) => write!(out, "{}", round(*x)).expect("write to String"),
            }
        }
        out.push('\n');
    }
    out
}
