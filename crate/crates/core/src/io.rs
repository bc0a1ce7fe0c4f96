//! File formats: dense Matrix Market (`array real general`) for matrices and
//! vectors, and a `key = value` text format for manifests and reports.
//!
//! Numbers are written in Rust's shortest round-trip exponent form, so a
//! write followed by a read reproduces every value bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::vector::Vector;

const MM_HEADER: &str = "%%MatrixMarket matrix array real general";

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn write_matrix(path: &Path, m: &DMatrix<f64>, comment: Option<&str>) -> Result<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "{MM_HEADER}")?;
        if let Some(c) = comment {
            for line in c.lines() {
                writeln!(w, "% {line}")?;
            }
        }
        writeln!(w, "{} {}", m.nrows(), m.ncols())?;
        // column-major, as the format requires
        for v in m.iter() {
            writeln!(w, "{v:e}")?;
        }
        w.flush()
    };
    body().map_err(|e| io_err(path, e))
}

pub fn write_vector(path: &Path, v: &Vector, comment: Option<&str>) -> Result<()> {
    let m = DMatrix::from_column_slice(v.len(), 1, v.as_slice());
    write_matrix(path, &m, comment)
}

pub fn read_matrix(path: &Path) -> Result<DMatrix<f64>> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let header = header.map_err(|e| io_err(path, e))?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(path, 1, "missing %%MatrixMarket matrix header"));
    }
    if fields[2] != "array" || fields[3] != "real" || fields[4] != "general" {
        return Err(parse_err(
            path,
            1,
            format!("unsupported layout '{} {} {}'", fields[2], fields[3], fields[4]),
        ));
    }

    let mut dims: Option<(usize, usize)> = None;
    let mut values = Vec::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| io_err(path, e))?;
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        match dims {
            None => {
                let mut it = t.split_whitespace();
                let parse = |s: Option<&str>| -> Result<usize> {
                    s.and_then(|v| v.parse().ok())
                        .ok_or_else(|| parse_err(path, lineno, "bad size line"))
                };
                let r = parse(it.next())?;
                let c = parse(it.next())?;
                if it.next().is_some() {
                    return Err(parse_err(path, lineno, "size line must have two entries"));
                }
                values.reserve(r * c);
                dims = Some((r, c));
            }
            Some(_) => {
                for tok in t.split_whitespace() {
                    let v: f64 = tok
                        .parse()
                        .map_err(|_| parse_err(path, lineno, format!("bad number '{tok}'")))?;
                    values.push(v);
                }
            }
        }
    }
    let (r, c) = dims.ok_or_else(|| parse_err(path, 0, "missing size line"))?;
    if values.len() != r * c {
        return Err(parse_err(
            path,
            0,
            format!("expected {} values, found {}", r * c, values.len()),
        ));
    }
    Ok(DMatrix::from_vec(r, c, values))
}

pub fn read_vector(path: &Path) -> Result<Vector> {
    let m = read_matrix(path)?;
    if m.ncols() != 1 {
        return Err(parse_err(
            path,
            0,
            format!("expected a column vector, found {} columns", m.ncols()),
        ));
    }
    Ok(Vector::from_column_slice(m.as_slice()))
}

/// Ordered `key = value` records.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValue {
    entries: Vec<(String, String)>,
}

impl KeyValue {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `key`, replacing an existing entry in place.
    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Looks up and parses `key`; `path` is only used for error messages.
    pub fn parse<T: FromStr>(&self, key: &str, path: &Path) -> Result<T> {
        let raw = self
            .get(key)
            .ok_or_else(|| parse_err(path, 0, format!("missing key '{key}'")))?;
        raw.parse()
            .map_err(|_| parse_err(path, 0, format!("bad value '{raw}' for '{key}'")))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| io_err(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let mut kv = Self::new();
        for (idx, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| parse_err(path, idx + 1, "expected 'key = value'"))?;
            kv.set(k.trim(), v.trim());
        }
        Ok(kv)
    }
}
