use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use serde_json::Value;
use starlike::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// Where data goes. Diagnostics never pass through here.
pub struct Sink {
    requested: Option<Format>,
    out: Box<dyn Write>,
}

impl Sink {
    pub fn new(requested: Option<Format>, path: Option<PathBuf>) -> io::Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink { requested, out })
    }

    /// The requested format, or the subcommand's default.
    pub fn format(&self, default: Format) -> Format {
        self.requested.unwrap_or(default)
    }

    /// Pretty JSON with keys sorted (serde_json's default map is ordered),
    /// so parsing and re-serializing reproduces the same bytes.
    pub fn json<E: From<io::Error>>(&mut self, v: &Value) -> Result<(), E> {
        Ok(writeln!(self.out, "{}", canonical(v))?)
    }

    pub fn text<E: From<io::Error>>(&mut self, s: &str) -> Result<(), E> {
        Ok(self.out.write_all(s.as_bytes())?)
    }

    pub fn csv<E: From<io::Error>, const N: usize>(
        &mut self,
        header: &[&str; N],
        rows: impl Iterator<Item = [String; N]>,
    ) -> Result<(), E> {
        let mut w = csv::Writer::from_writer(&mut self.out);
        w.write_record(header).map_err(io::Error::from)?;
        for row in rows {
            w.write_record(&row).map_err(io::Error::from)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

pub fn canonical(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

/// `[c0, c1, ...]`, low degree first.
pub fn coeff_list(p: &IntPoly) -> String {
    format!("[{}]", p.to_coeff_strings().join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn canonical_is_a_fixed_point() {
        let v = json!({"z": [1, "2"], "a": {"y": null, "b": true}});
        let once = canonical(&v);
        let reparsed: Value = serde_json::from_str(&once).unwrap();
        assert_eq!(canonical(&reparsed), once);
        assert!(once.find("\"a\"").unwrap() < once.find("\"z\"").unwrap());
    }

    #[test]
    fn coefficient_list() {
        assert_eq!(coeff_list(&IntPoly::from_i64s(&[1, 0, -2])), "[1, 0, -2]");
    }
}
