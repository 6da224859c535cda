//! On-disk cache of classification reports.
//!
//! Layout: 8-byte magic, then little-endian `u32` format version, size `n`
//! and move-set id, a `u64` payload length, and the report as JSON. A file
//! whose header does not match is ignored and rewritten.

use std::fs;
use std::io::Write;
use std::path::Path;

use realbott::equivalence::MOVE_SET_ID;
use realbott::ClassificationReport;

use crate::CliError;

const MAGIC: &[u8; 8] = b"RBOTCACH";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 * 3 + 8;

fn header(n: usize, payload_len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&MOVE_SET_ID.to_le_bytes());
    out.extend_from_slice(&(payload_len as u64).to_le_bytes());
    out
}

/// The cached report for size `n`, or `None` if the file is missing,
/// stale or unreadable.
pub fn load(path: &Path, n: usize) -> Option<ClassificationReport> {
    let bytes = fs::read(path).ok()?;
    if bytes.len() < HEADER_LEN {
        return None;
    }
    let payload = &bytes[HEADER_LEN..];
    if bytes[..HEADER_LEN] != header(n, payload.len())[..] {
        return None;
    }
    let report: ClassificationReport = serde_json::from_slice(payload).ok()?;
    (report.n == n).then_some(report)
}

pub fn store(path: &Path, report: &ClassificationReport) -> Result<(), CliError> {
    let payload = serde_json::to_vec(report).expect("report serializes");
    let io = |e: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut file = fs::File::create(path).map_err(io)?;
    file.write_all(&header(report.n, payload.len()))
        .map_err(io)?;
    file.write_all(&payload).map_err(io)?;
    Ok(())
}
