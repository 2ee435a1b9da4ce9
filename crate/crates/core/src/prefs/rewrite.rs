use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CandidatePair, PrefsError, RewriteRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

impl LineError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Splits `pairs` into those whose best score is strictly below `tau`
/// (returned as rewrite records) and the rest.
pub fn flag_for_rewrite(
    pairs: Vec<CandidatePair>,
    tau: f64,
) -> Result<(Vec<RewriteRecord>, Vec<CandidatePair>), PrefsError> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(PrefsError::InvalidTau(tau));
    }
    let mut flagged = Vec::new();
    let mut passed = Vec::new();
    for (index, mut p) in pairs.into_iter().enumerate() {
        let (Some(s1), Some(s2)) = (p.s1, p.s2) else {
            return Err(PrefsError::Unscored { index });
        };
        if s1.max(s2) < tau {
            flagged.push(RewriteRecord {
                x: p.x,
                y1: p.y1,
                y2: p.y2,
                s1: Some(s1),
                s2: Some(s2),
                y_t: None,
                annotator_id: None,
            });
        } else {
            p.flagged = false;
            passed.push(p);
        }
    }
    Ok((flagged, passed))
}

/// Writes `flagged` as JSONL without `y_t`, one record per line.
pub fn export_rewrite_batch(flagged: &[RewriteRecord], path: &Path) -> Result<usize, PrefsError> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in flagged {
        let blank = RewriteRecord {
            y_t: None,
            ..r.clone()
        };
        serde_json::to_writer(&mut w, &blank).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(flagged.len())
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestOutcome {
    pub records: Vec<RewriteRecord>,
    pub warnings: Vec<LineError>,
}

pub fn ingest_rewrites(path: &Path) -> Result<IngestOutcome, PrefsError> {
    let file = File::open(path)?;
    ingest_rewrites_from(BufReader::new(file), &path.display().to_string())
}

/// Validates a completed rewrite batch. Every bad line is reported, not
/// just the first.
pub fn ingest_rewrites_from<R: BufRead>(reader: R, name: &str) -> Result<IngestOutcome, PrefsError> {
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    let mut errors = Vec::new();
    let mut seen: HashSet<(String, String, String)> = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let n = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RewriteRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                errors.push(LineError::new(n, format!("malformed record: {e}")));
                continue;
            }
        };
        match rec.y_t.as_deref() {
            None => {
                errors.push(LineError::new(n, "missing y_t"));
                continue;
            }
            Some(t) if t.trim().is_empty() => {
                errors.push(LineError::new(n, "missing y_t (empty)"));
                continue;
            }
            Some(t) => {
                if t == rec.y1 || t == rec.y2 {
                    warnings.push(LineError::new(n, "y_t equals one of the candidates"));
                }
            }
        }
        if !seen.insert(rec.key()) {
            errors.push(LineError::new(n, "duplicate x+y1+y2 key"));
            continue;
        }
        records.push(rec);
    }
    for w in &warnings {
        tracing::warn!(file = name, line = w.line, "{}", w.message);
    }
    if errors.is_empty() {
        Ok(IngestOutcome { records, warnings })
    } else {
        Err(PrefsError::Ingest {
            path: name.to_string(),
            errors,
        })
    }
}
