//! Matrix files and content digests.
//!
//! Matrices are stored as `{"rows": R, "cols": C, "data": [[re, im], ...]}`
//! (row-major, 17 significant digits per real). The digest hashes the shape
//! and the exact bit patterns of the entries, so a write/read round trip
//! reproduces it.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::choi::ChoiMatrix;
use crate::error::{Error, Result};
use crate::matkernel::ComplexMatrix;

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Parse(e.to_string()))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_json(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    read_json(path)
}

/// Reads a Choi matrix; the size must be even and the matrix Hermitian.
pub fn read_choi(path: &Path) -> Result<ChoiMatrix> {
    ChoiMatrix::new(read_matrix(path)?)
}

/// Hex SHA-256 over the shape and the IEEE-754 bits of every entry.
pub fn input_digest(m: &ComplexMatrix) -> String {
    let mut hasher = Sha256::new();
    hasher.update((m.rows() as u64).to_le_bytes());
    hasher.update((m.cols() as u64).to_le_bytes());
    for z in m.data() {
        hasher.update(z.re.to_bits().to_le_bytes());
        hasher.update(z.im.to_bits().to_le_bytes());
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
