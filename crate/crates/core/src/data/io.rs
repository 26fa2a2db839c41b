//! Headerless CSV: `d` coordinates followed by a `+1`/`-1` label per row.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{Dataset, Label};
use crate::error::{Error, Result};

pub fn read_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    CsvReader::new(path).parse(&text)
}

pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_csv(ds)).map_err(|e| Error::io(path, e))
}

/// Reals are written with 17 significant digits, enough to round-trip any
/// `f64` bit pattern.
pub(crate) fn format_csv(ds: &Dataset) -> String {
    let mut out = String::with_capacity(ds.len() * (ds.dim() + 1) * 24);
    for (p, l) in ds.iter() {
        for c in p {
            write!(out, "{},", fmt_real(*c)).unwrap();
        }
        writeln!(out, "{l}").unwrap();
    }
    out
}

pub(crate) fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parser that reports errors against a source name.
pub struct CsvReader {
    source: PathBuf,
}

impl CsvReader {
    pub fn new(source: impl Into<PathBuf>) -> Self {
        CsvReader {
            source: source.into(),
        }
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.source.clone(),
            line,
            msg: msg.into(),
        }
    }

    pub fn parse(&self, text: &str) -> Result<Dataset> {
        let mut ds: Option<Dataset> = None;
        let mut coords = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let row = raw.trim();
            if row.is_empty() {
                continue;
            }
            let fields: Vec<&str> = row.split(',').map(str::trim).collect();
            if fields.len() < 2 {
                return Err(self.err(line, "expected at least one coordinate and a label"));
            }
            let (label_tok, coord_toks) = fields.split_last().unwrap();
            let label: Label = label_tok.parse().map_err(|e: String| self.err(line, e))?;
            coords.clear();
            for tok in coord_toks {
                let v: f64 = tok
                    .parse()
                    .map_err(|_| self.err(line, format!("cannot parse `{tok}` as a number")))?;
                if !v.is_finite() {
                    return Err(self.err(line, format!("non-finite coordinate `{tok}`")));
                }
                coords.push(v);
            }
            let ds = match &mut ds {
                Some(ds) => ds,
                None => ds.insert(Dataset::new(coords.len())?),
            };
            if coords.len() != ds.dim() {
                return Err(self.err(
                    line,
                    format!("row has {} coordinates, expected {}", coords.len(), ds.dim()),
                ));
            }
            ds.push(&coords, label)?;
        }
        ds.ok_or_else(|| self.err(0, "file contains no rows"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate, RandomStream, ScenarioSpec};

    fn parse(s: &str) -> Result<Dataset> {
        CsvReader::new("mem").parse(s)
    }

    #[test]
    fn single_row() {
        let ds = parse("0.5,0.25,+1\n").unwrap();
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.point(0), &[0.5, 0.25]);
        assert_eq!(ds.label(0), Label::Pos);
    }

    #[test]
    fn errors_name_the_line() {
        match parse("0.5,oops,+1\n") {
            Err(Error::Parse { line: 1, msg, .. }) => assert!(msg.contains("oops")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("0.1,+1\n0.2,0.3,-1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("0.1,+1\n0.2,1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("+1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse("").is_err());
    }

    #[test]
    fn file_round_trip_is_bitwise() {
        let ds = generate(&ScenarioSpec::half_moons(100, 0.08), RandomStream::new(1, 1));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        write_csv(&ds, &path).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(back.len(), 100);
        for i in 0..ds.len() {
            assert_eq!(ds.label(i), back.label(i));
            for (a, b) in ds.point(i).iter().zip(back.point(i)) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn any_finite_real_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let back: f64 = fmt_real(x).parse().unwrap();
            proptest::prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
