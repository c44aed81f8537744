//! Output formatting shared by every command.

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

/// `x` rounded to `digits` significant digits, in the shortest of plain or
/// scientific notation and without trailing zeros.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits_only: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits_only = digits_only.trim_end_matches('0');
    let digits_only = if digits_only.is_empty() { "0" } else { digits_only };

    let body = if (-5..15).contains(&exp) {
        if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits_only)
        } else {
            let int_len = exp as usize + 1;
            if digits_only.len() <= int_len {
                format!("{digits_only}{}", "0".repeat(int_len - digits_only.len()))
            } else {
                format!("{}.{}", &digits_only[..int_len], &digits_only[int_len..])
            }
        }
    } else {
        let (lead, rest) = digits_only.split_at(1);
        if rest.is_empty() {
            format!("{lead}e{exp}")
        } else {
            format!("{lead}.{rest}e{exp}")
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// A JSON number, or null where JSON has no representation.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// A table of numbers with a header, rendered in any [`Format`].
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn render(&self, format: Format, digits: usize) -> String {
        match format {
            Format::Plain => self
                .rows
                .iter()
                .map(|r| r.iter().map(|&x| sig(x, digits)).collect::<Vec<_>>().join(" ") + "\n")
                .collect(),
            Format::Csv => {
                let mut out = self.header.join(",") + "\n";
                for r in &self.rows {
                    out += &r.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(",");
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.header.iter().cloned().zip(r.iter().map(|&x| num(x))).collect()))
                    .collect();
                Value::Array(rows).to_string() + "\n"
            }
        }
    }
}
