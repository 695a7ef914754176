//! Binary field files with a `key = value` sidecar.
//!
//! Layout: the 8-byte magic `VPFIELD\0`, then little-endian u32 words for
//! version, dimension, side length, value kind (0 real, 1 complex) and axis
//! order (0: row-major, axis 0 slowest), then the samples as little-endian
//! f64 (real, or interleaved real/imaginary). Metadata lives next to the file
//! in `<path>.meta`.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{Field, GridSpec};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"VPFIELD\0";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 5 * 4;

pub type Metadata = BTreeMap<String, String>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueKind {
    Real,
    Complex,
}

/// A cube of samples as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct RawArray {
    pub dim: usize,
    pub side: usize,
    pub values: Vec<Complex64>,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

pub fn write_array(
    path: &Path,
    array: &RawArray,
    kind: ValueKind,
    meta: &Metadata,
) -> Result<()> {
    let expected = array.side.pow(array.dim as u32);
    if array.values.len() != expected {
        return Err(Error::ShapeMismatch(format!(
            "array of side {} in {}D needs {expected} samples, got {}",
            array.side,
            array.dim,
            array.values.len()
        )));
    }
    if kind == ValueKind::Real && array.values.iter().any(|v| v.im != 0.0) {
        return Err(Error::InvalidArgument("real output requested for complex samples".into()));
    }
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(MAGIC)?;
    let words = [
        VERSION,
        array.dim as u32,
        array.side as u32,
        match kind {
            ValueKind::Real => 0,
            ValueKind::Complex => 1,
        },
        0,
    ];
    for word in words {
        w.write_all(&word.to_le_bytes())?;
    }
    for v in &array.values {
        w.write_all(&v.re.to_le_bytes())?;
        if kind == ValueKind::Complex {
            w.write_all(&v.im.to_le_bytes())?;
        }
    }
    w.flush()?;
    let mut text = String::new();
    for (k, v) in meta {
        text.push_str(&format!("{k} = {v}\n"));
    }
    fs::write(sidecar_path(path), text)?;
    Ok(())
}

pub fn read_array(path: &Path) -> Result<(RawArray, Metadata)> {
    let bytes = fs::read(path)?;
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err(Error::Format(format!("{} is not a field file", path.display())));
    }
    let word = |i: usize| {
        let o = 8 + 4 * i;
        u32::from_le_bytes(bytes[o..o + 4].try_into().expect("four bytes"))
    };
    let (version, dim, side, kind, order) =
        (word(0), word(1) as usize, word(2) as usize, word(3), word(4));
    if version != VERSION {
        return Err(Error::Format(format!("unsupported field file version {version}")));
    }
    if order != 0 || kind > 1 || !(1..=3).contains(&dim) {
        return Err(Error::Format("unsupported header fields".into()));
    }
    let count = side
        .checked_pow(dim as u32)
        .ok_or_else(|| Error::Format("header size overflows".into()))?;
    let per = if kind == 1 { 2 } else { 1 };
    let body = &bytes[HEADER_LEN..];
    if body.len() != count * per * 8 {
        return Err(Error::Format(format!(
            "expected {} payload bytes, found {}",
            count * per * 8,
            body.len()
        )));
    }
    let f = |i: usize| f64::from_le_bytes(body[8 * i..8 * i + 8].try_into().expect("eight bytes"));
    let values = (0..count)
        .map(|i| if per == 2 { Complex64::new(f(2 * i), f(2 * i + 1)) } else { Complex64::new(f(i), 0.0) })
        .collect();
    let meta = read_metadata(&sidecar_path(path))?;
    Ok((RawArray { dim, side, values }, meta))
}

fn read_metadata(path: &Path) -> Result<Metadata> {
    let mut meta = Metadata::new();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(meta),
        Err(e) => return Err(e.into()),
    };
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("bad metadata line: {line}")))?;
        meta.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(meta)
}

pub fn write_field(path: &Path, field: &Field, kind: ValueKind, meta: &Metadata) -> Result<()> {
    let g = field.grid();
    let mut meta = meta.clone();
    meta.insert("kind".into(), meta.get("kind").cloned().unwrap_or_else(|| "field".into()));
    meta.insert("dim".into(), g.dim().to_string());
    meta.insert("n".into(), g.n().to_string());
    meta.insert("h".into(), format!("{:e}", g.h()));
    let array = RawArray { dim: g.dim(), side: g.n(), values: field.values().to_vec() };
    write_array(path, &array, kind, &meta)
}

pub fn read_field(path: &Path) -> Result<(Field, Metadata)> {
    let (array, meta) = read_array(path)?;
    let grid = GridSpec::new(array.dim, array.side)?;
    Ok((Field::new(grid, array.values)?, meta))
}
