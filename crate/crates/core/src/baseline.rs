//! Greedy graph-coloring groupers over a packed conflict matrix.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Default cap on the packed conflict matrix (2 GiB).
pub const DEFAULT_MAX_ADJ_BYTES: u64 = 2 << 30;

/// Environment variable that overrides [`DEFAULT_MAX_ADJ_BYTES`].
pub const MAX_ADJ_BYTES_ENV: &str = "PSFAM_MAX_ADJ_BYTES";

/// Largest register the graph groupers accept in sweeps and benchmarks.
pub const GRAPH_MAX_QUBITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// Qubit-wise commutation.
    Qwc,
    /// General commutation.
    Gc,
}

impl Relation {
    pub fn name(&self) -> &'static str {
        match self {
            Relation::Qwc => "qwc",
            Relation::Gc => "gc",
        }
    }

    fn compatible(&self, a: &PauliString, b: &PauliString) -> bool {
        match self {
            Relation::Qwc => a.qwc_commutes_unchecked(b),
            Relation::Gc => a.commutes_unchecked(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupingResult {
    pub method: String,
    pub families: Vec<Vec<PauliString>>,
    pub walltime: f64,
    /// Bits in the conflict matrix, for the graph methods.
    pub peak_adjacency_bits: Option<u64>,
}

impl GroupingResult {
    pub fn num_families(&self) -> usize {
        self.families.len()
    }

    pub fn num_strings(&self) -> usize {
        self.families.iter().map(Vec::len).sum()
    }
}

/// Bytes of a packed `n × n` bit matrix with 64-bit rows.
pub fn adjacency_bytes(n: usize) -> u64 {
    n as u64 * n.div_ceil(64) as u64 * 8
}

/// The adjacency cap from the environment, falling back to the default.
pub fn adjacency_cap_from_env() -> u64 {
    std::env::var(MAX_ADJ_BYTES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ADJ_BYTES)
}

/// Largest First coloring of the conflict graph of `relation` with the
/// default memory cap.
pub fn greedy_color(strings: &[PauliString], relation: Relation) -> Result<GroupingResult> {
    greedy_color_capped(strings, relation, DEFAULT_MAX_ADJ_BYTES)
}

/// Largest First coloring. Vertices are taken by descending conflict degree,
/// ties by ascending string label, and each gets the smallest color with no
/// conflicting member.
pub fn greedy_color_capped(strings: &[PauliString], relation: Relation, cap_bytes: u64) -> Result<GroupingResult> {
    let start = Instant::now();
    let n = strings.len();
    if n == 0 {
        return Ok(GroupingResult {
            method: relation.name().into(),
            families: Vec::new(),
            walltime: 0.0,
            peak_adjacency_bits: Some(0),
        });
    }
    let m = strings[0].num_qubits();
    if let Some(p) = strings.iter().find(|p| p.num_qubits() != m) {
        return Err(Error::DimensionMismatch {
            left: m,
            right: p.num_qubits(),
        });
    }
    let required = adjacency_bytes(n);
    if required > cap_bytes {
        return Err(Error::MemoryGuard {
            required,
            cap: cap_bytes,
        });
    }

    let words = n.div_ceil(64);
    let mut adjacency = vec![0u64; n * words];
    adjacency.par_chunks_mut(words).enumerate().for_each(|(i, row)| {
        let a = &strings[i];
        for (j, b) in strings.iter().enumerate() {
            if i != j && !relation.compatible(a, b) {
                row[j / 64] |= 1 << (j % 64);
            }
        }
    });

    let degree: Vec<u32> = adjacency
        .chunks(words)
        .map(|row| row.iter().map(|w| w.count_ones()).sum())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        degree[b]
            .cmp(&degree[a])
            .then_with(|| strings[a].label().cmp(&strings[b].label()))
    });

    let mut color_sets: Vec<Vec<u64>> = Vec::new();
    let mut families: Vec<Vec<PauliString>> = Vec::new();
    for v in order {
        let row = &adjacency[v * words..(v + 1) * words];
        let free = color_sets
            .iter()
            .position(|set| set.iter().zip(row).all(|(s, r)| s & r == 0));
        let c = free.unwrap_or_else(|| {
            color_sets.push(vec![0u64; words]);
            families.push(Vec::new());
            color_sets.len() - 1
        });
        color_sets[c][v / 64] |= 1 << (v % 64);
        families[c].push(strings[v]);
    }

    Ok(GroupingResult {
        method: relation.name().into(),
        families,
        walltime: start.elapsed().as_secs_f64(),
        peak_adjacency_bits: Some(n as u64 * words as u64 * 64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::all_strings;

    #[test]
    fn dense_qwc_counts() {
        for m in 1..=4 {
            let strings: Vec<_> = all_strings(m).collect();
            let result = greedy_color(&strings, Relation::Qwc).unwrap();
            assert_eq!(result.num_families(), 3usize.pow(m as u32), "m={m}");
            assert_eq!(result.num_strings(), strings.len());
        }
    }

    #[test]
    fn families_are_valid() {
        let strings: Vec<_> = all_strings(3).collect();
        for relation in [Relation::Qwc, Relation::Gc] {
            let result = greedy_color(&strings, relation).unwrap();
            for fam in &result.families {
                for (i, a) in fam.iter().enumerate() {
                    for b in &fam[i + 1..] {
                        assert!(relation.compatible(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_inputs() {
        let one = vec!["XY".parse().unwrap()];
        assert_eq!(greedy_color(&one, Relation::Gc).unwrap().num_families(), 1);
        assert_eq!(greedy_color(&[], Relation::Gc).unwrap().num_families(), 0);
    }

    #[test]
    fn memory_guard_trips() {
        let strings: Vec<_> = all_strings(3).collect();
        let err = greedy_color_capped(&strings, Relation::Gc, 100).unwrap_err();
        assert_eq!(
            err,
            Error::MemoryGuard {
                required: 504,
                cap: 100
            }
        );
    }

    #[test]
    fn adjacency_sizes() {
        assert_eq!(adjacency_bytes(63), 504);
        assert_eq!(adjacency_bytes(4095), 4095 * 64 * 8);
    }
}
