//! Density sweeps and scaling benchmarks over the registered groupers.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::measure::operator::{pauli_decompose, DenseMatrix, WeightedPauliSum};
use crate::pauli::{all_strings, PauliString};
use crate::strategy::{GroupingStrategy, StrategyRegistry};

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub method: String,
    pub m: usize,
    pub density_pct: f64,
    pub n_strings: usize,
    pub n_families: usize,
    pub walltime_s: f64,
    pub memory_proxy_bytes: u64,
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Percentage of the `4^m - 1` non-identity strings present.
pub fn density_pct(m: usize, n_strings: usize) -> f64 {
    100.0 * n_strings as f64 / ((1u64 << (2 * m)) - 1) as f64
}

/// Cuts that keep (up to ties) the requested percentages of `h`'s strings.
pub fn cuts_for_densities(h: &WeightedPauliSum, densities_pct: &[f64]) -> Vec<f64> {
    let mut mags: Vec<f64> = h.terms().iter().map(|(a, _)| a.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let total = ((1u64 << (2 * h.num_qubits())) - 1) as f64;
    densities_pct
        .iter()
        .map(|d| {
            let keep = (d / 100.0 * total).round() as usize;
            match keep {
                0 => f64::INFINITY,
                k if k >= mags.len() => 0.0,
                k => mags[k - 1],
            }
        })
        .collect()
}

fn group_row(strategy: &dyn GroupingStrategy, m: usize, strings: &[PauliString]) -> Result<BenchRow> {
    let result = strategy.group(strings)?;
    Ok(BenchRow {
        method: strategy.name().into(),
        m,
        density_pct: density_pct(m, strings.len()),
        n_strings: strings.len(),
        n_families: result.num_families(),
        walltime_s: result.walltime,
        memory_proxy_bytes: strategy.memory_proxy(m, strings.len()),
    })
}

/// Decompose one seeded random Hermitian matrix, apply every cut and group
/// the survivors with every method. Rows are ordered by cut, then method.
pub fn density_sweep(
    registry: &StrategyRegistry,
    m: usize,
    seed: u64,
    cuts: &[f64],
    methods: &[&str],
) -> Result<Vec<BenchRow>> {
    let mut strategies = methods
        .iter()
        .map(|name| registry.get(name))
        .collect::<Result<Vec<_>>>()?;
    strategies.sort_by_key(|s| s.name());
    for s in &strategies {
        s.check_qubits(m)?;
    }
    let h = pauli_decompose(&DenseMatrix::random_hermitian(m, seed))?;
    let mut cuts = cuts.to_vec();
    cuts.sort_by(f64::total_cmp);
    let per_cut = cuts
        .par_iter()
        .map(|&cut| {
            let strings = h.apply_cut(cut).strings();
            strategies
                .iter()
                .map(|s| group_row(*s, m, &strings))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_cut.into_iter().flatten().collect())
}

/// Group every non-identity string for each `m`, keeping the fastest of
/// `repeats` runs.
pub fn scaling_bench(strategy: &dyn GroupingStrategy, ms: &[usize], repeats: usize) -> Result<Vec<BenchRow>> {
    for &m in ms {
        strategy.check_qubits(m)?;
    }
    ms.iter()
        .map(|&m| {
            let strings: Vec<PauliString> = all_strings(m).collect();
            let mut best: Option<BenchRow> = None;
            for _ in 0..repeats.max(1) {
                let start = Instant::now();
                let mut row = group_row(strategy, m, &strings)?;
                row.walltime_s = start.elapsed().as_secs_f64();
                if best.as_ref().is_none_or(|b| row.walltime_s < b.walltime_s) {
                    best = Some(row);
                }
            }
            Ok(best.expect("at least one run"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn sweep_rows_are_ordered() {
        let reg = StrategyRegistry::default();
        let rows = density_sweep(&reg, 3, 1, &[f64::INFINITY, 0.0], &["qwc", "dense", "gc"]).unwrap();
        let keys: Vec<(&str, usize)> = rows.iter().map(|r| (r.method.as_str(), r.n_families)).collect();
        assert_eq!(keys[..3], [("dense", 9), ("gc", keys[1].1), ("qwc", 27)]);
        assert!(keys[1].1 >= 9);
        assert!(rows[3..].iter().all(|r| r.n_families == 0 && r.n_strings == 0));
    }

    #[test]
    fn cuts_hit_requested_density() {
        let h = pauli_decompose(&DenseMatrix::random_hermitian(3, 2)).unwrap();
        let cuts = cuts_for_densities(&h, &[100.0, 50.0, 0.0]);
        assert_eq!(cuts[0], 0.0);
        assert_eq!(h.apply_cut(cuts[1]).terms().len(), 32);
        assert!(h.apply_cut(cuts[2]).terms().is_empty());
    }

    #[test]
    fn gc_beyond_cap() {
        let reg = StrategyRegistry::default();
        let err = scaling_bench(reg.get("gc").unwrap(), &[7], 1).unwrap_err();
        assert!(matches!(err, Error::MethodCap { m: 7, max: 6, .. }));
    }

    #[test]
    fn csv_header() {
        let reg = StrategyRegistry::default();
        let rows = scaling_bench(reg.get("dense").unwrap(), &[2], 1).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("method,m,density_pct,n_strings,n_families,walltime_s,memory_proxy_bytes")
        );
        assert!(lines.next().unwrap().starts_with("dense,2,100.0,15,5,"));
    }
}
