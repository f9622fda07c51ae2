//! Binary and CSV dataset files.
//!
//! Binary layout, little-endian:
//!
//! ```text
//! "RPEV" | u32 version=1 | u64 n | u32 d | u32 K
//! | n*d f32 features, row-major | n u32 labels
//! | u8 has_oracle | f64 oracle_loss (0 when absent) | u32 name_len | name (UTF-8)
//! ```
//!
//! CSV: an optional header row, then `d` feature columns followed by one
//! integer label column. The class count is inferred as `max(label) + 1`
//! (at least 2).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DataError, Dataset};

pub const BINARY_MAGIC: &[u8; 4] = b"RPEV";
pub const BINARY_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetFormat {
    Binary,
    Csv,
}

impl DatasetFormat {
    /// `.csv` means CSV; anything else is the binary format.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => DatasetFormat::Csv,
            _ => DatasetFormat::Binary,
        }
    }
}

pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<Dataset, DataError> {
    let bytes = fs::read(path)?;
    match format {
        DatasetFormat::Binary => decode_binary(&bytes),
        DatasetFormat::Csv => {
            let text = String::from_utf8(bytes).map_err(|e| DataError::Csv {
                line: 0,
                message: format!("not UTF-8: {e}"),
            })?;
            let name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("dataset");
            parse_csv(&text, name)
        }
    }
}

pub fn save_dataset(ds: &Dataset, path: &Path, format: DatasetFormat) -> Result<(), DataError> {
    // Constructed datasets are never empty, but deserialized ones bypass `new`.
    if ds.is_empty() {
        return Err(DataError::Empty { n: 0, d: ds.dim() });
    }
    let bytes = match format {
        DatasetFormat::Binary => encode_binary(ds),
        DatasetFormat::Csv => write_csv(ds).into_bytes(),
    };
    fs::write(path, bytes)?;
    Ok(())
}

pub(crate) fn encode_binary(ds: &Dataset) -> Vec<u8> {
    let name = ds.name().as_bytes();
    let mut out = Vec::with_capacity(45 + 4 * (ds.features().len() + ds.len()) + name.len());
    out.extend_from_slice(BINARY_MAGIC);
    out.extend_from_slice(&BINARY_VERSION.to_le_bytes());
    out.extend_from_slice(&(ds.len() as u64).to_le_bytes());
    out.extend_from_slice(&(ds.dim() as u32).to_le_bytes());
    out.extend_from_slice(&ds.num_classes().to_le_bytes());
    for v in ds.features() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for l in ds.labels() {
        out.extend_from_slice(&l.to_le_bytes());
    }
    out.push(ds.oracle_loss().is_some() as u8);
    out.extend_from_slice(&ds.oracle_loss().unwrap_or(0.0).to_le_bytes());
    out.extend_from_slice(&(name.len() as u32).to_le_bytes());
    out.extend_from_slice(name);
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8], DataError> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len());
        match end {
            Some(end) => {
                let s = &self.bytes[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(DataError::Format {
                offset: self.pos,
                message: format!("truncated while reading {what}"),
            }),
        }
    }

    fn u32(&mut self, what: &str) -> Result<u32, DataError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64, DataError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}

fn format_err(offset: usize, message: impl Into<String>) -> DataError {
    DataError::Format {
        offset,
        message: message.into(),
    }
}

pub(crate) fn decode_binary(bytes: &[u8]) -> Result<Dataset, DataError> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4, "magic")? != BINARY_MAGIC {
        return Err(format_err(0, "bad magic, expected \"RPEV\""));
    }
    let version = r.u32("version")?;
    if version != BINARY_VERSION {
        return Err(format_err(4, format!("unsupported version {version}")));
    }
    let n = r.u64("n")?;
    let d = r.u32("d")? as usize;
    let k = r.u32("K")?;
    if n == 0 || d == 0 {
        return Err(format_err(8, format!("empty dataset (n={n}, d={d})")));
    }
    let n = usize::try_from(n).map_err(|_| format_err(8, "n too large"))?;
    let cells = n
        .checked_mul(d)
        .filter(|c| c.saturating_mul(4) <= bytes.len())
        .ok_or_else(|| format_err(8, format!("header claims {n}x{d} features, file too short")))?;

    let feature_start = r.pos;
    let raw = r.take(cells * 4, "features")?;
    let mut features = Vec::with_capacity(cells);
    for (i, chunk) in raw.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(format_err(
                feature_start + 4 * i,
                format!("non-finite feature in record {}", i / d),
            ));
        }
        features.push(v);
    }
    let label_start = r.pos;
    let raw = r.take(n * 4, "labels")?;
    let mut labels = Vec::with_capacity(n);
    for (i, chunk) in raw.chunks_exact(4).enumerate() {
        let l = u32::from_le_bytes(chunk.try_into().unwrap());
        if l >= k {
            return Err(format_err(
                label_start + 4 * i,
                format!("record {i}: label {l} out of range for {k} classes"),
            ));
        }
        labels.push(l);
    }
    let flag_pos = r.pos;
    let has_oracle = r.take(1, "oracle flag")?[0];
    let oracle = f64::from_le_bytes(r.take(8, "oracle loss")?.try_into().unwrap());
    let name_len = r.u32("name length")? as usize;
    let name_pos = r.pos;
    let name = std::str::from_utf8(r.take(name_len, "name")?)
        .map_err(|_| format_err(name_pos, "name is not UTF-8"))?
        .to_string();
    if r.pos != bytes.len() {
        return Err(format_err(r.pos, "trailing bytes after dataset"));
    }

    let ds = Dataset::new(name, features, labels, d, k)?;
    match has_oracle {
        0 => Ok(ds),
        1 => ds.with_oracle_loss(oracle),
        other => Err(format_err(flag_pos, format!("bad oracle flag {other}"))),
    }
}

pub(crate) fn parse_csv(text: &str, name: &str) -> Result<Dataset, DataError> {
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut width: Option<usize> = None;
    let mut seen_data = false;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if !seen_data && lineno == 1 => continue, // header
            Err(e) => {
                return Err(DataError::Csv {
                    line: lineno,
                    message: format!("unparseable number: {e}"),
                })
            }
        };
        seen_data = true;
        if values.len() < 2 {
            return Err(DataError::Csv {
                line: lineno,
                message: "need at least one feature column and a label column".into(),
            });
        }
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(DataError::Csv {
                    line: lineno,
                    message: format!("expected {w} columns, found {}", values.len()),
                })
            }
            _ => {}
        }
        let (label, feats) = values.split_last().unwrap();
        if label.fract() != 0.0 || *label < 0.0 || *label > u32::MAX as f64 {
            return Err(DataError::Csv {
                line: lineno,
                message: format!("label {label} is not a non-negative integer"),
            });
        }
        for (j, &v) in feats.iter().enumerate() {
            let v32 = v as f32;
            if !v32.is_finite() {
                return Err(DataError::Csv {
                    line: lineno,
                    message: format!("non-finite feature in column {j}"),
                });
            }
            features.push(v32);
        }
        labels.push(*label as u32);
    }

    let Some(width) = width else {
        return Err(DataError::Empty { n: 0, d: 0 });
    };
    let k = labels.iter().max().map_or(2, |&m| (m + 1).max(2));
    Dataset::new(name, features, labels, width - 1, k)
}

fn write_csv(ds: &Dataset) -> String {
    let mut out = String::new();
    for j in 0..ds.dim() {
        out.push_str(&format!("f{j},"));
    }
    out.push_str("label\n");
    for (x, y) in ds.rows() {
        for v in x {
            out.push_str(&format!("{v},"));
        }
        out.push_str(&format!("{y}\n"));
    }
    out
}
