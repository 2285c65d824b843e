//! CSV tables with a `#`-prefixed metadata block.
//!
//! Floats are written in scientific notation with 9 significant digits, so
//! parsing a file and writing it again reproduces it byte for byte.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};

/// `v` with 9 significant digits, e.g. `-6.21320344e-1`.
pub fn fmt_sci(v: f64) -> String {
    format!("{v:.8e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Metadata lines without the leading `# `.
    pub metadata: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        for line in &self.metadata {
            if line.is_empty() {
                writeln!(out, "#")?;
            } else {
                writeln!(out, "# {line}")?;
            }
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            if row.len() != self.columns.len() {
                bail!("row has {} values for {} columns", row.len(), self.columns.len());
            }
            w.write_record(row.iter().map(|v| fmt_sci(*v)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn render(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        Ok(String::from_utf8(buf)?)
    }

    pub fn read<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut metadata = Vec::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else { break };
            let rest = rest.trim_end_matches('\n');
            metadata.push(rest.strip_prefix(' ').unwrap_or(rest).to_string());
            body_start += line.len();
        }
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(&text.as_bytes()[body_start..]);
        let columns: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let row = record
                .iter()
                .map(|s| s.parse::<f64>().with_context(|| format!("row {}: `{s}` is not a number", i + 1)))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Self { metadata, columns, rows })
    }

    /// The metadata block as a configuration document.
    pub fn metadata_text(&self) -> String {
        self.metadata.iter().map(|l| format!("{l}\n")).collect()
    }
}
