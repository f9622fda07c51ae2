use std::cmp::Ordering;

use super::ReportError;
use crate::measures::{MeasureKind, MeasureResult};

/// Row identity: a measure at a size (VA, MDL) or at a tolerance (SDL, εSC).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RowKey {
    AtSize { n: usize, kind: MeasureKind },
    AtTolerance { epsilon: f64, kind: MeasureKind },
}

impl RowKey {
    pub fn of(r: &MeasureResult) -> Self {
        match (r.at_n, r.epsilon) {
            (Some(n), _) => RowKey::AtSize { n, kind: r.kind },
            (None, Some(epsilon)) => RowKey::AtTolerance {
                epsilon,
                kind: r.kind,
            },
            (None, None) => RowKey::AtSize { n: 0, kind: r.kind },
        }
    }

    fn order(&self, other: &Self) -> Ordering {
        use RowKey::*;
        match (self, other) {
            (AtSize { n: a, kind: ka }, AtSize { n: b, kind: kb }) => a.cmp(b).then(ka.cmp(kb)),
            (
                AtTolerance {
                    epsilon: a,
                    kind: ka,
                },
                AtTolerance {
                    epsilon: b,
                    kind: kb,
                },
            ) => ka.cmp(kb).then(a.total_cmp(b)),
            (AtSize { .. }, AtTolerance { .. }) => Ordering::Less,
            (AtTolerance { .. }, AtSize { .. }) => Ordering::Greater,
        }
    }

    pub fn label(&self) -> String {
        match self {
            RowKey::AtSize { n, kind } => format!("{kind}, n={n}"),
            RowKey::AtTolerance { epsilon, kind } => format!("{kind}, ε={epsilon}"),
        }
    }
}

/// Measures for several representations, one column each.
#[derive(Debug, Clone, Default)]
pub struct ComparisonTable {
    columns: Vec<String>,
    rows: Vec<(RowKey, Vec<Option<MeasureResult>>)>,
}

impl ComparisonTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        ComparisonTable {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> impl Iterator<Item = (&RowKey, &[Option<MeasureResult>])> {
        self.rows.iter().map(|(k, c)| (k, c.as_slice()))
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Place a result in `column`. Rows stay sorted: size-indexed measures
    /// by `n` then kind, followed by tolerance-indexed ones by kind then ε.
    pub fn insert(&mut self, column: &str, result: MeasureResult) -> Result<(), ReportError> {
        let col = self
            .columns
            .iter()
            .position(|c| c == column)
            .ok_or_else(|| ReportError::UnknownColumn(column.to_string()))?;
        for (_, cells) in &self.rows {
            if let Some(other) = &cells[col] {
                let a = fingerprints(other);
                let b = fingerprints(&result);
                if a != b {
                    return Err(ReportError::InconsistentColumn {
                        column: column.to_string(),
                        first: a,
                        second: b,
                    });
                }
            }
        }
        let key = RowKey::of(&result);
        let pos = self
            .rows
            .iter()
            .position(|(k, _)| k.order(&key) != Ordering::Less);
        let width = self.columns.len();
        let idx = match pos {
            Some(i) if self.rows[i].0.order(&key) == Ordering::Equal => i,
            Some(i) => {
                self.rows.insert(i, (key, vec![None; width]));
                i
            }
            None => {
                self.rows.push((key, vec![None; width]));
                self.rows.len() - 1
            }
        };
        self.rows[idx].1[col] = Some(result);
        Ok(())
    }

    /// GitHub-flavored Markdown. Lower bounds print as `> x`; the strict
    /// minimum of each row among the other cells is bold.
    pub fn to_markdown(&self) -> Result<String, ReportError> {
        if self.rows.is_empty() || self.columns.is_empty() {
            return Err(ReportError::Empty("comparison table has no cells"));
        }
        let mut out = String::from("| Measure |");
        for c in &self.columns {
            out.push_str(&format!(" {} |", escape(c)));
        }
        out.push_str("\n|---|");
        for _ in &self.columns {
            out.push_str("---:|");
        }
        out.push('\n');
        for (key, cells) in &self.rows {
            let best = best_cell(cells);
            out.push_str(&format!("| {} |", key.label()));
            for (i, cell) in cells.iter().enumerate() {
                let text = match cell {
                    None => "–".to_string(),
                    Some(r) if best == Some(i) => format!("**{}**", r.display_value()),
                    Some(r) => r.display_value(),
                };
                out.push_str(&format!(" {text} |"));
            }
            out.push('\n');
        }
        Ok(out)
    }
}

/// Markdown rendering of `table`.
pub fn table_markdown(table: &ComparisonTable) -> Result<String, ReportError> {
    table.to_markdown()
}

fn fingerprints(r: &MeasureResult) -> String {
    format!(
        "data {} / algorithm {}",
        r.provenance.dataset_fingerprint, r.provenance.algorithm_fingerprint
    )
}

fn best_cell(cells: &[Option<MeasureResult>]) -> Option<usize> {
    let candidates: Vec<(usize, f64)> = cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            c.as_ref()
                .filter(|r| !r.is_lower_bound)
                .map(|r| (i, r.value))
        })
        .collect();
    let min = candidates
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::INFINITY, f64::min);
    let mut at_min = candidates.iter().filter(|&&(_, v)| v == min);
    match (at_min.next(), at_min.next()) {
        (Some(&(i, _)), None) => Some(i),
        _ => None,
    }
}

fn escape(s: &str) -> String {
    s.replace('|', "\\|")
}
