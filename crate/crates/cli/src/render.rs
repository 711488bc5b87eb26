//! Text, CSV and key-value rendering of command reports.

use crate::args::Format;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}
impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}
impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}
impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}
impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

impl Cell {
    fn render(&self, precision: usize) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => fmt_num(*x, precision),
        }
    }
}

/// Fixed-point with `precision` decimals; small nonzero magnitudes switch to
/// scientific notation so they are not printed as zero.
pub fn fmt_num(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let threshold = 0.5 * 10f64.powi(-(precision as i32));
    if x != 0.0 && x.abs() < threshold {
        return format!("{x:.*e}", precision.clamp(1, 6));
    }
    let s = format!("{x:.precision$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: Option<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { title: None, header, rows: Vec::new() }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn text(&self, precision: usize, out: &mut String) {
        if let Some(t) = &self.title {
            out.push_str(t);
            out.push('\n');
        }
        let cells: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(|c| c.render(precision)).collect()).collect();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &cells {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |fields: Vec<&str>, out: &mut String| {
            let parts: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:<w$}")).collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(self.header.clone(), out);
        for r in &cells {
            line(r.iter().map(String::as_str).collect(), out);
        }
    }

    fn csv(&self, precision: usize) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Usage(format!("csv output: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|c| c.render(precision))).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv output: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// One command's output in all three forms.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Leading `key: value` lines of the text form.
    pub summary: Vec<(String, Cell)>,
    /// The first table is the CSV form; text shows all of them.
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
    /// TOML document.
    pub kv: String,
}

impl Report {
    pub fn render(&self, format: Format, precision: usize) -> Result<String> {
        match format {
            Format::Kv => Ok(self.kv.clone()),
            Format::Csv => match self.tables.first() {
                Some(t) => t.csv(precision),
                None => {
                    let mut t = Table::new(vec!["key", "value"]);
                    for (k, v) in &self.summary {
                        t.push(vec![k.clone().into(), v.clone()]);
                    }
                    t.csv(precision)
                }
            },
            Format::Text => {
                let mut out = String::new();
                let w = self.summary.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
                for (k, v) in &self.summary {
                    out.push_str(&format!("{k:<w$}  {}\n", v.render(precision)));
                }
                for t in &self.tables {
                    if !out.is_empty() {
                        out.push('\n');
                    }
                    t.text(precision, &mut out);
                }
                if !self.notes.is_empty() {
                    out.push('\n');
                    for n in &self.notes {
                        out.push_str(n);
                        out.push('\n');
                    }
                }
                Ok(out)
            }
        }
    }
}

pub fn to_kv<T: serde::Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| CliError::Usage(format!("kv output: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(0.71903, 4), "0.7190");
        assert_eq!(fmt_num(-0.00001, 4), "-1.0000e-5");
        assert_eq!(fmt_num(0.0, 4), "0.0000");
        assert_eq!(fmt_num(-0.0, 2), "0.00");
        assert_eq!(fmt_num(f64::NAN, 4), "nan");
    }

    #[test]
    fn text_and_csv_agree_on_cells() {
        let mut t = Table::new(vec!["name", "x"]);
        t.push(vec!["a".into(), 1.5.into()]);
        t.push(vec!["b,c".into(), 2usize.into()]);
        let r = Report { summary: vec![], tables: vec![t], notes: vec!["done".into()], kv: String::new() };
        assert_eq!(r.render(Format::Csv, 2).unwrap(), "name,x\na,1.50\n\"b,c\",2\n");
        assert_eq!(r.render(Format::Text, 2).unwrap(), "name  x\na     1.50\nb,c   2\n\ndone\n");
    }
}
