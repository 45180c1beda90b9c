//! Privacy-budget ledger.
//!
//! The ledger records declared privacy expenditures and answers composition
//! queries over them: sequential composition sums (ε, δ) across entries,
//! parallel composition over disjoint partitions takes component-wise maxima.
//! Raw data never reaches this module, so partition disjointness is asserted
//! by the caller.
//!
//! Post-processing is free: prediction and serialization never record entries.
//!
//! On disk a ledger is line-delimited JSON, one entry per line with the keys
//! `op`, `eps`, `delta`, `tag` and `seq`. Files are only ever appended to.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{DpError, Result};

/// Slack for floating-point sums when comparing against a cap.
const CAP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    #[serde(rename = "op")]
    pub operation: String,
    #[serde(rename = "eps")]
    pub epsilon: f64,
    pub delta: f64,
    pub tag: Option<String>,
    pub seq: u64,
}

impl LedgerEntry {
    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(DpError::InvalidBudget(format!(
                "ledger entry '{}' has non-positive epsilon {}",
                self.operation, self.epsilon
            )));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(DpError::InvalidBudget(format!(
                "ledger entry '{}' has negative delta {}",
                self.operation, self.delta
            )));
        }
        Ok(())
    }
}

/// A composed (ε, δ) pair.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Totals {
    pub epsilon: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BudgetLedger {
    entries: Vec<LedgerEntry>,
    cap: Option<Totals>,
}

impl BudgetLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cap(epsilon_max: f64, delta_max: f64) -> Self {
        Self {
            entries: Vec::new(),
            cap: Some(Totals {
                epsilon: epsilon_max,
                delta: delta_max,
            }),
        }
    }

    pub fn set_cap(&mut self, cap: Option<Totals>) {
        self.cap = cap;
    }

    pub fn cap(&self) -> Option<Totals> {
        self.cap
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn next_seq(&self) -> u64 {
        self.entries.last().map_or(0, |e| e.seq + 1)
    }

    /// Appends an expenditure. Rejected without side effects when a cap is set
    /// and the new sequential total would exceed it.
    pub fn record(
        &mut self,
        operation: impl Into<String>,
        epsilon: f64,
        delta: f64,
        tag: Option<String>,
    ) -> Result<&LedgerEntry> {
        let entry = LedgerEntry {
            operation: operation.into(),
            epsilon,
            delta,
            tag,
            seq: self.next_seq(),
        };
        entry.validate()?;
        if let Some(cap) = self.cap {
            let total = self.sequential_total();
            let eps_after = total.epsilon + epsilon;
            let delta_after = total.delta + delta;
            if eps_after > cap.epsilon + CAP_TOLERANCE || delta_after > cap.delta + CAP_TOLERANCE {
                return Err(DpError::BudgetExhausted {
                    requested_eps: epsilon,
                    requested_delta: delta,
                    remaining_eps: (cap.epsilon - total.epsilon).max(0.0),
                    remaining_delta: (cap.delta - total.delta).max(0.0),
                });
            }
        }
        self.entries.push(entry);
        Ok(self.entries.last().expect("just pushed"))
    }

    /// Remaining budget under the cap, if any.
    pub fn remaining(&self) -> Option<Totals> {
        self.cap.map(|cap| {
            let t = self.sequential_total();
            Totals {
                epsilon: (cap.epsilon - t.epsilon).max(0.0),
                delta: (cap.delta - t.delta).max(0.0),
            }
        })
    }

    /// Basic sequential composition over every entry.
    pub fn sequential_total(&self) -> Totals {
        sequential_total(&self.entries)
    }

    /// Parallel composition over every entry; each must carry a distinct tag.
    pub fn parallel_total(&self) -> Result<Totals> {
        parallel_total(&self.entries)
    }

    /// Reads a ledger file. A missing file is an empty ledger.
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Ok(Self::new());
        }
        let file = File::open(path)
            .map_err(|e| DpError::input(format!("cannot open ledger {}: {e}", path.display())))?;
        let mut entries = Vec::new();
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| DpError::input(format!("ledger read error: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: LedgerEntry = serde_json::from_str(&line).map_err(|e| {
                DpError::input(format!("ledger line {}: {e}", lineno + 1))
            })?;
            entry.validate()?;
            entries.push(entry);
        }
        Ok(Self { entries, cap: None })
    }

    /// One JSON line per entry, in order.
    pub fn to_jsonl(&self) -> String {
        self.entries
            .iter()
            .map(|e| entry_line(e) + "\n")
            .collect()
    }

    /// Appends the entries at positions `from..` to `path`.
    pub fn append_to(&self, path: &Path, from: usize) -> Result<()> {
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| DpError::input(format!("cannot open ledger {}: {e}", path.display())))?;
        for e in &self.entries[from..] {
            writeln!(file, "{}", entry_line(e))
                .map_err(|e| DpError::input(format!("ledger write error: {e}")))?;
        }
        Ok(())
    }
}

fn entry_line(e: &LedgerEntry) -> String {
    serde_json::to_string(e).expect("ledger entries always serialize")
}

pub fn sequential_total(entries: &[LedgerEntry]) -> Totals {
    entries.iter().fold(Totals::default(), |acc, e| Totals {
        epsilon: acc.epsilon + e.epsilon,
        delta: acc.delta + e.delta,
    })
}

/// Component-wise maxima over entries on caller-declared disjoint partitions.
pub fn parallel_total(entries: &[LedgerEntry]) -> Result<Totals> {
    let mut seen = HashSet::new();
    for e in entries {
        let tag = e.tag.as_deref().ok_or_else(|| {
            DpError::input(format!(
                "entry {} ('{}') has no partition tag",
                e.seq, e.operation
            ))
        })?;
        if !seen.insert(tag) {
            return Err(DpError::input(format!("partition tag '{tag}' appears more than once")));
        }
    }
    Ok(entries.iter().fold(Totals::default(), |acc, e| Totals {
        epsilon: acc.epsilon.max(e.epsilon),
        delta: acc.delta.max(e.delta),
    }))
}
