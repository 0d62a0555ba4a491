//! Field files (FSF), PGM rasters and CSV export.
//!
//! FSF layout: `FSF1\n`, then `key=value\n` header lines, an empty line, and
//! the samples as little-endian `f64`, row-major with the last axis fastest.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::SampledField;

const MAGIC: &[u8] = b"FSF1\n";

/// Header of a field file. Keys keep their order; unknown keys survive a
/// read/write cycle.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FieldMeta {
    entries: Vec<(String, String)>,
}

impl FieldMeta {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Sets `key`, replacing an existing value in place.
    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
        self
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.set(key, value);
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::invalid(format!("header value {key}={v} does not parse"))),
        }
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Serialises a field; `d`, `shape` and `spacing` are taken from the field.
pub fn encode_field(field: &SampledField, meta: &FieldMeta) -> Vec<u8> {
    let mut head = String::new();
    let shape: Vec<String> = field.shape().iter().map(|s| s.to_string()).collect();
    let _ = writeln!(head, "d={}", field.d());
    let _ = writeln!(head, "shape={}", shape.join(","));
    let _ = writeln!(head, "spacing={}", field.spacing());
    for (k, v) in &meta.entries {
        if !matches!(k.as_str(), "d" | "shape" | "spacing") {
            let _ = writeln!(head, "{k}={v}");
        }
    }
    head.push('\n');
    let mut out = Vec::with_capacity(MAGIC.len() + head.len() + 8 * field.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(head.as_bytes());
    for v in field.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_field(bytes: &[u8]) -> Result<(SampledField, FieldMeta)> {
    if !bytes.starts_with(MAGIC) {
        return Err(Error::BadMagic);
    }
    let mut pos = MAGIC.len();
    let mut meta = FieldMeta::new();
    let mut line_no = 1;
    loop {
        line_no += 1;
        let end = bytes[pos..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::BadHeader { line: line_no, reason: "header not terminated by an empty line".into() })?;
        let line = std::str::from_utf8(&bytes[pos..pos + end])
            .map_err(|_| Error::BadHeader { line: line_no, reason: "not valid UTF-8".into() })?;
        pos += end + 1;
        if line.is_empty() {
            break;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::BadHeader { line: line_no, reason: format!("expected key=value, got {line:?}") })?;
        meta.entries.push((k.to_string(), v.to_string()));
    }
    let d: usize = meta.parse("d")?.ok_or_else(|| Error::MissingKey("d".into()))?;
    let shape_text = meta.get("shape").ok_or_else(|| Error::MissingKey("shape".into()))?;
    let shape: Vec<usize> = shape_text
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::invalid(format!("shape={shape_text} does not parse")))?;
    if shape.len() != d {
        return Err(Error::Shape(format!("d={d} but shape has {} axes", shape.len())));
    }
    let spacing: f64 = meta.parse("spacing")?.ok_or_else(|| Error::MissingKey("spacing".into()))?;
    let expected = 8 * shape.iter().product::<usize>();
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(Error::ShortPayload { expected, actual: payload.len() });
    }
    if payload.len() > expected {
        return Err(Error::invalid(format!("{} trailing bytes after payload", payload.len() - expected)));
    }
    let data = payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok((SampledField::new(shape, spacing, data)?, meta))
}

pub fn write_field(field: &SampledField, meta: &FieldMeta, path: &Path) -> Result<()> {
    write_atomic(path, &encode_field(field, meta))
}

pub fn read_field(path: &Path) -> Result<(SampledField, FieldMeta)> {
    decode_field(&fs::read(path)?)
}

/// 16-bit grey levels, min-max normalised; a constant field is mid-grey.
pub fn encode_pgm(field: &SampledField) -> Result<Vec<u8>> {
    if field.d() != 2 {
        return Err(Error::Shape(format!("PGM export needs d = 2, got d = {}", field.d())));
    }
    let (rows, cols) = (field.shape()[0], field.shape()[1]);
    let (lo, hi) = field
        .data()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let mut out = format!("P5\n{cols} {rows}\n65535\n").into_bytes();
    for &v in field.data() {
        let level: u16 = if hi > lo { ((v - lo) / (hi - lo) * 65535.0).round() as u16 } else { 32768 };
        out.extend_from_slice(&level.to_be_bytes());
    }
    Ok(out)
}

pub fn export_pgm(field: &SampledField, path: &Path) -> Result<()> {
    write_atomic(path, &encode_pgm(field)?)
}

/// One value per line for `d = 1`; `x,y,value` at centred coordinates for `d = 2`.
pub fn encode_csv(field: &SampledField) -> Result<String> {
    let mut out = String::new();
    match field.d() {
        1 => field.data().iter().for_each(|v| {
            let _ = writeln!(out, "{v}");
        }),
        2 => {
            let mut x = [0.0; 2];
            for (i, v) in field.data().iter().enumerate() {
                field.centered_coords_into(i, &mut x);
                let _ = writeln!(out, "{},{},{v}", x[1], x[0]);
            }
        }
        d => return Err(Error::Shape(format!("CSV export needs d = 1 or 2, got d = {d}"))),
    }
    Ok(out)
}

pub fn export_csv(field: &SampledField, path: &Path) -> Result<()> {
    write_atomic(path, encode_csv(field)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SampledField {
        SampledField::new(vec![2, 2], 0.5, vec![1.0, -0.0, f64::MIN_POSITIVE, 1.0 / 3.0]).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let meta = FieldMeta::new().with("seed", 7).with("colour", "blue");
        let bytes = encode_field(&small(), &meta);
        let (f, m) = decode_field(&bytes).unwrap();
        let bits = |f: &SampledField| f.data().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&f), bits(&small()));
        assert_eq!(m.get("colour"), Some("blue"));
        assert_eq!(encode_field(&f, &m), bytes);
    }

    #[test]
    fn decode_errors() {
        let bytes = encode_field(&small(), &FieldMeta::new());
        match decode_field(&bytes[..bytes.len() - 3]) {
            Err(Error::ShortPayload { expected: 32, actual: 29 }) => {}
            other => panic!("{other:?}"),
        }
        let text = String::from_utf8_lossy(&bytes).replace("d=2\n", "");
        let no_d: Vec<u8> = [text.as_bytes()].concat();
        assert!(matches!(decode_field(&no_d), Err(Error::MissingKey(k)) if k == "d"));
        assert!(matches!(decode_field(b"FSF2\n"), Err(Error::BadMagic)));
        assert!(matches!(decode_field(b"FSF1\nnonsense\n\n"), Err(Error::BadHeader { line: 2, .. })));
    }

    #[test]
    fn pgm_levels() {
        let c = SampledField::new(vec![2, 3], 1.0, vec![4.0; 6]).unwrap();
        let p = encode_pgm(&c).unwrap();
        assert!(p.starts_with(b"P5\n3 2\n65535\n"));
        assert!(p[13..].chunks(2).all(|b| u16::from_be_bytes([b[0], b[1]]) == 32768));
        let p = encode_pgm(&small()).unwrap();
        let levels: Vec<u16> = p[13..].chunks(2).map(|b| u16::from_be_bytes([b[0], b[1]])).collect();
        assert_eq!(*levels.iter().min().unwrap(), 0);
        assert_eq!(*levels.iter().max().unwrap(), 65535);
        assert!(encode_pgm(&SampledField::new(vec![4], 1.0, vec![0.0; 4]).unwrap()).is_err());
    }

    #[test]
    fn csv_layout() {
        let f = SampledField::new(vec![3], 1.0, vec![1.0, 2.5, -1.0]).unwrap();
        assert_eq!(encode_csv(&f).unwrap(), "1\n2.5\n-1\n");
        let lines = encode_csv(&small()).unwrap();
        assert_eq!(lines.lines().nth(1), Some("-0.5,0,-0"));
    }
}
