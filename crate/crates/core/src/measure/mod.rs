//! Expectation values from grouped measurements, evaluated on a simulated
//! state either exactly or with sampled shots.

pub mod operator;
pub mod statevector;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::Solution;
use crate::strategy::{Dense, GroupingStrategy, MeasurementSet};
use operator::WeightedPauliSum;
use statevector::{exact_probabilities, sample_counts, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Outcome probabilities taken from the state vector.
    Exact,
    /// `shots` samples per measured group.
    Shots { shots: u64, seed: u64 },
}

/// `offset + Σ_j Σ_k c_{j,k} M_{j,k}` over every plan.
pub fn evaluate_set(set: &MeasurementSet, psi: &StateVector, mode: Mode) -> Result<f64> {
    let seeds: Vec<u64> = match mode {
        Mode::Exact => vec![0; set.plans.len()],
        Mode::Shots { shots, seed } => {
            if shots == 0 {
                return Err(Error::Precondition("shot count must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..set.plans.len()).map(|_| rng.gen()).collect()
        }
    };
    let parts = set
        .plans
        .par_iter()
        .zip(seeds)
        .map(|(plan, plan_seed)| {
            let probs = exact_probabilities(&plan.circuit, psi)?;
            let freqs = match mode {
                Mode::Exact => probs,
                Mode::Shots { shots, .. } => sample_counts(&probs, shots, plan_seed)
                    .into_iter()
                    .map(|c| c as f64 / shots as f64)
                    .collect(),
            };
            Ok(plan.evaluate(&freqs))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(set.offset + parts.iter().sum::<f64>())
}

/// `⟨ψ|H|ψ⟩` measured through the groups of `strategy`.
pub fn expectation_with(
    strategy: &dyn GroupingStrategy,
    h: &WeightedPauliSum,
    psi: &StateVector,
    mode: Mode,
) -> Result<f64> {
    if h.num_qubits() != psi.num_qubits() {
        return Err(Error::DimensionMismatch {
            left: h.num_qubits(),
            right: psi.num_qubits(),
        });
    }
    evaluate_set(&strategy.measurement_plans(h)?, psi, mode)
}

/// `⟨ψ|H|ψ⟩` from one rotation per non-empty family of `sol`.
pub fn grouped_expectation(sol: &Solution, h: &WeightedPauliSum, psi: &StateVector, mode: Mode) -> Result<f64> {
    if sol.num_qubits() != h.num_qubits() {
        return Err(Error::DimensionMismatch {
            left: sol.num_qubits(),
            right: h.num_qubits(),
        });
    }
    expectation_with(&Dense, h, psi, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::StrategyRegistry;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn single(m: usize, text: &str, coeff: f64) -> WeightedPauliSum {
        WeightedPauliSum::new(m, vec![(coeff, text.parse().unwrap())], 0.0).unwrap()
    }

    #[test]
    fn stabilizer_examples() {
        let sol = Solution::build(2).unwrap();
        let zero = StateVector::zero(2).unwrap();
        let ev = grouped_expectation(&sol, &single(2, "ZZ", 1.0), &zero, Mode::Exact).unwrap();
        assert!((ev - 1.0).abs() < 1e-12);

        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let zero_c = Complex64::new(0.0, 0.0);
        let bell = StateVector::from_amplitudes(vec![s, zero_c, zero_c, s]).unwrap();
        for (text, want) in [("XX", 1.0), ("ZZ", 1.0), ("YY", -1.0), ("XY", 0.0)] {
            let ev = grouped_expectation(&sol, &single(2, text, 1.0), &bell, Mode::Exact).unwrap();
            assert!((ev - want).abs() < 1e-12, "{text}: {ev}");
        }
    }

    #[test]
    fn methods_agree_with_dense_matrix() {
        let reg = StrategyRegistry::default();
        for m in 1..=4 {
            for seed in 0..5 {
                let h = WeightedPauliSum::random_dense(m, seed).unwrap();
                let psi = StateVector::random(m, seed + 1000).unwrap();
                let want = h.to_dense().expectation(&psi).unwrap();
                for name in ["dense", "qwc", "naive"] {
                    let got = expectation_with(reg.get(name).unwrap(), &h, &psi, Mode::Exact).unwrap();
                    assert!((got - want).abs() < 1e-9, "m={m} {name}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn shots_are_reproducible() {
        let h = WeightedPauliSum::random_dense(2, 3).unwrap();
        let psi = StateVector::random(2, 4).unwrap();
        let sol = Solution::build(2).unwrap();
        let mode = Mode::Shots { shots: 1000, seed: 9 };
        let a = grouped_expectation(&sol, &h, &psi, mode).unwrap();
        let b = grouped_expectation(&sol, &h, &psi, mode).unwrap();
        assert_eq!(a, b);
        let exact = grouped_expectation(&sol, &h, &psi, Mode::Exact).unwrap();
        assert!((a - exact).abs() < 1.0);
        assert!(grouped_expectation(&sol, &h, &psi, Mode::Shots { shots: 0, seed: 1 }).is_err());
    }

    #[test]
    fn identity_only_operator() {
        let h = WeightedPauliSum::new(2, vec![], 2.5).unwrap();
        let psi = StateVector::random(2, 1).unwrap();
        let sol = Solution::build(2).unwrap();
        assert_eq!(grouped_expectation(&sol, &h, &psi, Mode::Exact).unwrap(), 2.5);
    }
}
