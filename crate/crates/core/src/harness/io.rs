//! Text formats for complexes and functions.
//!
//! Complex file: a header line `d k_0 … k_{d-1}`, then one line per top face
//! `v_0 … v_{d-1} w` with 0-based vertex ids and a positive decimal weight.
//! Function file: one line per support face `v_0 … v_{d-1} value`, covering
//! the whole support. In both, `#` starts a comment, blank lines are skipped
//! and line order is irrelevant. Numbers are written with 17 significant
//! digits so that values survive a save/load round trip bit for bit.

use crate::complex::PartiteComplex;
use crate::error::{HdxError, Result};
use crate::function::FaceFunction;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

fn parse_err(line: usize, msg: impl Into<String>) -> HdxError {
    HdxError::Parse { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((k + 1, tokens))
    })
}

fn parse_face(line: usize, tokens: &[&str]) -> Result<Vec<u32>> {
    tokens
        .iter()
        .map(|t| t.parse::<u32>().map_err(|_| parse_err(line, format!("bad vertex id {t:?}"))))
        .collect()
}

fn parse_float(line: usize, token: &str, what: &str) -> Result<f64> {
    let v: f64 = token.parse().map_err(|_| parse_err(line, format!("bad {what} {token:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("{what} must be finite, got {token}")));
    }
    Ok(v)
}

pub fn parse_complex(text: &str) -> Result<PartiteComplex> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(HdxError::EmptyComplex)?;
    let nums: Vec<usize> = header
        .iter()
        .map(|t| t.parse::<usize>().map_err(|_| parse_err(hline, format!("bad header field {t:?}"))))
        .collect::<Result<_>>()?;
    let (&d, sizes) = nums.split_first().ok_or_else(|| parse_err(hline, "empty header"))?;
    if sizes.len() != d {
        return Err(parse_err(hline, format!("header declares d = {d} but lists {} sizes", sizes.len())));
    }
    let mut entries = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (line, tokens) in lines {
        if tokens.len() != d + 1 {
            return Err(parse_err(line, format!("expected {} fields, found {}", d + 1, tokens.len())));
        }
        let face = parse_face(line, &tokens[..d])?;
        for (c, &v) in face.iter().enumerate() {
            if v as usize >= sizes[c] {
                return Err(parse_err(line, format!("vertex {v} out of range for color {c} of size {}", sizes[c])));
            }
        }
        let w = parse_float(line, tokens[d], "weight")?;
        if w <= 0.0 {
            return Err(parse_err(line, format!("weight must be positive, got {w}")));
        }
        if let Some(prev) = seen.insert(face.clone(), line) {
            return Err(parse_err(line, format!("face {face:?} already given on line {prev}")));
        }
        entries.push((face, w));
    }
    PartiteComplex::new(sizes.to_vec(), entries)
}

pub fn load_complex(path: &Path) -> Result<PartiteComplex> {
    parse_complex(&std::fs::read_to_string(path)?)
}

pub fn format_complex(x: &PartiteComplex) -> String {
    let mut out = String::new();
    out.push_str(&x.d().to_string());
    for k in x.color_sizes() {
        out.push_str(&format!(" {k}"));
    }
    out.push('\n');
    for (k, face) in x.faces().enumerate() {
        for v in face {
            out.push_str(&format!("{v} "));
        }
        out.push_str(&format!("{:.16e}\n", x.weight(k)));
    }
    out
}

pub fn parse_function(text: &str, x: &Arc<PartiteComplex>) -> Result<FaceFunction> {
    let d = x.d();
    let mut values = vec![None; x.len()];
    for (line, tokens) in content_lines(text) {
        if tokens.len() != d + 1 {
            return Err(parse_err(line, format!("expected {} fields, found {}", d + 1, tokens.len())));
        }
        let face = parse_face(line, &tokens[..d])?;
        let k = x
            .face_index(&face)
            .ok_or_else(|| parse_err(line, format!("face {face:?} is not in the complex")))?;
        if values[k].is_some() {
            return Err(parse_err(line, format!("face {face:?} given twice")));
        }
        values[k] = Some(parse_float(line, tokens[d], "value")?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| HdxError::MissingFace { face: x.face(k).to_vec() }))
        .collect::<Result<Vec<f64>>>()?;
    FaceFunction::on_faces(Arc::clone(x), values)
}

pub fn load_function(path: &Path, x: &Arc<PartiteComplex>) -> Result<FaceFunction> {
    parse_function(&std::fs::read_to_string(path)?, x)
}

/// Requires a function on top faces.
pub fn format_function(f: &FaceFunction) -> Result<String> {
    if f.colors() != f.complex().colors() {
        return Err(HdxError::DomainMismatch("only top-face functions can be saved".into()));
    }
    let mut out = String::new();
    for (k, face) in f.complex().faces().enumerate() {
        for v in face {
            out.push_str(&format!("{v} "));
        }
        out.push_str(&format!("{:.16e}\n", f.at_face(k)));
    }
    Ok(out)
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| HdxError::Io(e.to_string()))?;
    Ok(())
}

pub fn save_complex(x: &PartiteComplex, path: &Path) -> Result<()> {
    write_atomic(path, format_complex(x).as_bytes())
}

pub fn save_function(f: &FaceFunction, path: &Path) -> Result<()> {
    write_atomic(path, format_function(f)?.as_bytes())
}
