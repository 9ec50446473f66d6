//! `JAUD` dense matrix container: magic `JAUD`, `u16` version, `u32` rows
//! and `u32` columns, then `rows * cols` `f64` values in column-major
//! order. All integers and floats are little-endian.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::model::{Dictionary, SignalSet};
use crate::scalar::Scalar;

pub const MAGIC: &[u8; 4] = b"JAUD";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 4 + 4;

pub fn encode_matrix<T: Scalar>(m: &DenseMatrix<T>) -> Result<Vec<u8>> {
    let rows = u32::try_from(m.nrows())
        .map_err(|_| Error::config(format!("{} rows do not fit the container", m.nrows())))?;
    let cols = u32::try_from(m.ncols())
        .map_err(|_| Error::config(format!("{} columns do not fit the container", m.ncols())))?;
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * m.as_slice().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&rows.to_le_bytes());
    out.extend_from_slice(&cols.to_le_bytes());
    for &v in m.as_slice() {
        out.extend_from_slice(&v.as_f64().to_le_bytes());
    }
    Ok(out)
}

pub fn decode_matrix<T: Scalar>(bytes: &[u8]) -> Result<DenseMatrix<T>> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::parse(bytes.len(), "truncated header"));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::parse(0, "missing JAUD magic bytes"));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::UnsupportedVersion {
            found: version,
            supported: VERSION,
        });
    }
    let rows = u32::from_le_bytes(bytes[6..10].try_into().expect("4 bytes")) as usize;
    let cols = u32::from_le_bytes(bytes[10..14].try_into().expect("4 bytes")) as usize;
    let expected = rows
        .checked_mul(cols)
        .and_then(|c| c.checked_mul(8))
        .ok_or_else(|| Error::parse(6, "matrix dimensions overflow"))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() < expected {
        return Err(Error::parse(
            bytes.len(),
            format!("truncated payload: {} of {expected} bytes", payload.len()),
        ));
    }
    if payload.len() > expected {
        return Err(Error::parse(HEADER_LEN + expected, "trailing bytes after payload"));
    }
    let data = payload
        .chunks_exact(8)
        .map(|b| T::of(f64::from_le_bytes(b.try_into().expect("8 bytes"))))
        .collect();
    DenseMatrix::from_column_major(rows, cols, data)
}

pub fn write_matrix<T: Scalar>(m: &DenseMatrix<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_matrix(m)?)?;
    Ok(())
}

pub fn read_matrix<T: Scalar>(path: impl AsRef<Path>) -> Result<DenseMatrix<T>> {
    decode_matrix(&fs::read(path)?)
}

pub fn save_dictionary<T: Scalar>(d: &Dictionary<T>, path: impl AsRef<Path>) -> Result<()> {
    write_matrix(d.matrix(), path)
}

pub fn load_dictionary<T: Scalar>(path: impl AsRef<Path>) -> Result<Dictionary<T>> {
    Dictionary::new(read_matrix(path)?)
}

/// Signal sets use the same container, one signal per column.
pub fn save_signals<T: Scalar>(y: &SignalSet<T>, path: impl AsRef<Path>) -> Result<()> {
    write_matrix(y.matrix(), path)
}

pub fn load_signals<T: Scalar>(path: impl AsRef<Path>) -> Result<SignalSet<T>> {
    SignalSet::new(read_matrix(path)?)
}
