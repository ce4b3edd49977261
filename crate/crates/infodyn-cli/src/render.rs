//! Output assembly: key/value and matrix tables as TSV/CSV, reports as
//! JSON. All numbers pass through the shared rounding helpers so the
//! three formats agree on every rendered digit and negative zero never
//! appears.

use clap::ValueEnum;
use infodyn::numfmt;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct Style {
    pub format: Format,
    pub precision: usize,
    /// Report entropy-like quantities in nats instead of bits.
    pub nats: bool,
}

impl Style {
    /// Converts a quantity measured in bits into display units.
    pub fn units(&self, bits: f64) -> f64 {
        if self.nats {
            bits * std::f64::consts::LN_2
        } else {
            bits
        }
    }

    pub fn number(&self, value: f64) -> String {
        numfmt::fixed(value, self.precision)
    }

    pub fn json_number(&self, value: f64) -> Value {
        json!(numfmt::round_to(value, self.precision))
    }
}

fn separator(format: Format) -> char {
    match format {
        Format::Tsv => '\t',
        Format::Csv => ',',
        Format::Json => unreachable!("JSON output never joins fields"),
    }
}

/// Escapes one field. CSV fields containing the delimiter, quotes, or
/// line breaks are quoted with doubled inner quotes; TSV is emitted
/// verbatim.
fn field(text: &str, format: Format) -> String {
    if format == Format::Csv
        && text.contains(['"', ',', '\n', '\r'])
    {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Renders rows under a header line, one record per line.
pub fn table(header: &[&str], rows: &[Vec<String>], format: Format) -> String {
    let sep = separator(format);
    let mut out = String::new();
    push_row(&mut out, header.iter().copied(), sep, format);
    for row in rows {
        push_row(&mut out, row.iter().map(String::as_str), sep, format);
    }
    out
}

fn push_row<'a>(
    out: &mut String,
    fields: impl Iterator<Item = &'a str>,
    sep: char,
    format: Format,
) {
    let mut first = true;
    for f in fields {
        if !first {
            out.push(sep);
        }
        out.push_str(&field(f, format));
        first = false;
    }
    out.push('\n');
}

/// Renders a named square matrix with row and column labels; `render`
/// turns each cell into text.
pub fn matrix<T>(
    title: &str,
    labels: &[String],
    cells: &[Vec<T>],
    format: Format,
    render: impl Fn(&T) -> String,
) -> String {
    let sep = separator(format);
    let mut out = format!("# {title}\n");
    push_row(
        &mut out,
        std::iter::once("").chain(labels.iter().map(String::as_str)),
        sep,
        format,
    );
    for (label, row) in labels.iter().zip(cells) {
        let rendered: Vec<String> = row.iter().map(&render).collect();
        push_row(
            &mut out,
            std::iter::once(label.as_str()).chain(rendered.iter().map(String::as_str)),
            sep,
            format,
        );
    }
    out
}

pub fn json_document(value: Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("reports serialize");
    text.push('\n');
    text
}

/// An insertion-ordered JSON object builder.
pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (key, value) in entries {
        map.insert(key.to_string(), value);
    }
    Value::Object(map)
}
