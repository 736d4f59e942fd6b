//! Dense state-vector simulation for small registers.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::circuit::{float_literal, Circuit, Gate};
use crate::error::{Error, Result};

/// Default simulation cap.
pub const MAX_SIM_QUBITS: usize = 12;

const NORM_TOLERANCE: f64 = 1e-10;

type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gate_matrix(gate: &Gate) -> Option<(usize, Mat2)> {
    let s = FRAC_1_SQRT_2;
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    Some(match *gate {
        Gate::S(q) => (q, [[one, zero], [zero, c(0.0, 1.0)]]),
        Gate::Sdg(q) => (q, [[one, zero], [zero, c(0.0, -1.0)]]),
        Gate::H(q) => (q, [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]),
        Gate::Uy(q) => (q, [[c(s, 0.0), c(s, 0.0)], [c(-s, 0.0), c(s, 0.0)]]),
        Gate::Uydg(q) => (q, [[c(s, 0.0), c(-s, 0.0)], [c(s, 0.0), c(s, 0.0)]]),
        Gate::Ry(q, theta) => {
            let (sn, cs) = (theta / 2.0).sin_cos();
            (q, [[c(cs, 0.0), c(-sn, 0.0)], [c(sn, 0.0), c(cs, 0.0)]])
        }
        Gate::Rz(q, theta) => {
            let half = theta / 2.0;
            (
                q,
                [
                    [Complex64::from_polar(1.0, -half), zero],
                    [zero, Complex64::from_polar(1.0, half)],
                ],
            )
        }
        Gate::Cx { .. } | Gate::Cz(..) => return None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    m: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(m: usize) -> Result<Self> {
        Self::basis(m, 0)
    }

    pub fn basis(m: usize, k: usize) -> Result<Self> {
        if m == 0 || m > MAX_SIM_QUBITS {
            return Err(Error::TooManyQubits { m, max: MAX_SIM_QUBITS });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << m];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { m, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Format(format!(
                "state vector length {len} is not a power of two >= 2"
            )));
        }
        let m = len.trailing_zeros() as usize;
        if m > MAX_SIM_QUBITS {
            return Err(Error::TooManyQubits { m, max: MAX_SIM_QUBITS });
        }
        let state = Self { m, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Normalized state with independent complex Gaussian amplitudes.
    pub fn random(m: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(m, &mut rng)
    }

    pub fn random_with<R: Rng>(m: usize, rng: &mut R) -> Result<Self> {
        if m == 0 || m > MAX_SIM_QUBITS {
            return Err(Error::TooManyQubits { m, max: MAX_SIM_QUBITS });
        }
        let mut amps: Vec<Complex64> = (0..1usize << m)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { m, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    fn apply_single(&mut self, q: usize, u: &Mat2) {
        let mask = 1usize << (self.m - 1 - q);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | mask]);
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | mask] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        let qubits = gate.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.m) {
            return Err(Error::Precondition(format!(
                "gate {} on qubit {q} of a {}-qubit state",
                gate.name(),
                self.m
            )));
        }
        if let Some((q, u)) = gate_matrix(gate) {
            self.apply_single(q, &u);
            return Ok(());
        }
        match *gate {
            Gate::Cx { control, target } => {
                let cm = 1usize << (self.m - 1 - control);
                let tm = 1usize << (self.m - 1 - target);
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let both = (1usize << (self.m - 1 - a)) | (1usize << (self.m - 1 - b));
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & both == both {
                        *amp = -*amp;
                    }
                }
            }
            _ => unreachable!("single-qubit gates handled above"),
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let cells: Vec<String> = self.amps.iter().map(|a| complex_literal(*a)).collect();
        format!("[{}]", cells.join(","))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
        Self::from_amplitudes(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

pub(crate) fn complex_literal(z: Complex64) -> String {
    format!("[{},{}]", float_literal(z.re), float_literal(z.im))
}

/// Apply `circuit` to a copy of `input`.
pub fn simulate(circuit: &Circuit, input: &StateVector) -> Result<StateVector> {
    if circuit.num_qubits() > MAX_SIM_QUBITS {
        return Err(Error::TooManyQubits {
            m: circuit.num_qubits(),
            max: MAX_SIM_QUBITS,
        });
    }
    if circuit.num_qubits() != input.num_qubits() {
        return Err(Error::DimensionMismatch {
            left: circuit.num_qubits(),
            right: input.num_qubits(),
        });
    }
    let mut state = input.clone();
    for gate in circuit.gates() {
        state.apply(gate)?;
    }
    Ok(state)
}

/// `p_k = |⟨k|U|ψ⟩|²`.
pub fn exact_probabilities(circuit: &Circuit, psi: &StateVector) -> Result<Vec<f64>> {
    Ok(simulate(circuit, psi)?.probabilities())
}

/// Multinomial draw of `shots` outcomes, by sequential conditional binomials.
pub fn sample_counts(probabilities: &[f64], shots: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probabilities.len()];
    let mut remaining = shots;
    let mut mass: f64 = probabilities.iter().map(|p| p.max(0.0)).sum();
    for (k, &p) in probabilities.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let p = p.max(0.0);
        if k + 1 == probabilities.len() || mass <= p {
            counts[k] = remaining;
            break;
        }
        let conditional = (p / mass).clamp(0.0, 1.0);
        let draw = Binomial::new(remaining, conditional)
            .expect("probability in [0, 1]")
            .sample(&mut rng);
        counts[k] = draw;
        remaining -= draw;
        mass -= p;
    }
    counts
}

/// Layered ansatz: `reps` blocks of an `RY` layer followed by a `CZ` chain,
/// then a final `RY` layer. Angles are consumed qubit by qubit, layer by layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub reps: usize,
    pub angles: Vec<f64>,
}

impl AnsatzSpec {
    pub fn expected_angles(&self, m: usize) -> usize {
        m * (self.reps + 1)
    }

    pub fn random(m: usize, reps: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let angles = (0..m * (reps + 1))
            .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        Self { reps, angles }
    }

    pub fn circuit(&self, m: usize) -> Result<Circuit> {
        let expected = self.expected_angles(m);
        if self.angles.len() != expected {
            return Err(Error::AngleCountMismatch {
                expected,
                found: self.angles.len(),
            });
        }
        let mut circuit = Circuit::new(m);
        let mut angles = self.angles.iter().copied();
        for layer in 0..=self.reps {
            for q in 0..m {
                circuit.push(Gate::Ry(q, angles.next().expect("counted")))?;
            }
            if layer < self.reps {
                for q in 0..m.saturating_sub(1) {
                    circuit.push(Gate::Cz(q, q + 1))?;
                }
            }
        }
        Ok(circuit)
    }
}

pub fn build_ansatz_state(spec: &AnsatzSpec, m: usize) -> Result<StateVector> {
    let circuit = spec.circuit(m)?;
    simulate(&circuit, &StateVector::zero(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn empty_circuit_is_identity() {
        let psi = StateVector::random(3, 7).unwrap();
        assert_eq!(simulate(&Circuit::new(3), &psi).unwrap(), psi);
    }

    #[test]
    fn uy_on_zero() {
        let mut c = Circuit::new(1);
        c.push(Gate::Uy(0)).unwrap();
        let out = simulate(&c, &StateVector::zero(1).unwrap()).unwrap();
        // (1 + iσ_y)/√2 |0⟩ = (|0⟩ - |1⟩)/√2
        assert!(close(out.amplitudes()[0], c_(FRAC_1_SQRT_2)));
        assert!(close(out.amplitudes()[1], c_(-FRAC_1_SQRT_2)));
    }

    fn c_(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn parity_ladder_on_ones() {
        // CX ladder onto qubit 0 computes the parity of qubits 0..3 there.
        let mut c = Circuit::new(3);
        c.push(Gate::Cx { control: 1, target: 0 }).unwrap();
        c.push(Gate::Cx { control: 2, target: 0 }).unwrap();
        let out = simulate(&c, &StateVector::basis(3, 0b111).unwrap()).unwrap();
        assert!(close(out.amplitudes()[0b111], c_(1.0)));
        let out = simulate(&c, &StateVector::basis(3, 0b011).unwrap()).unwrap();
        assert!(close(out.amplitudes()[0b011], c_(1.0)));
        let out = simulate(&c, &StateVector::basis(3, 0b010).unwrap()).unwrap();
        assert!(close(out.amplitudes()[0b110], c_(1.0)));
    }

    #[test]
    fn norm_is_preserved() {
        let mut c = Circuit::new(4);
        for (i, g) in [
            Gate::H(0),
            Gate::Uy(1),
            Gate::Cx { control: 0, target: 3 },
            Gate::S(2),
            Gate::Rz(1, 0.3),
            Gate::Ry(3, -1.1),
            Gate::Cz(1, 2),
            Gate::Uydg(0),
            Gate::Sdg(3),
        ]
        .into_iter()
        .enumerate()
        {
            c.push(g).unwrap();
            let out = simulate(&c, &StateVector::random(4, i as u64).unwrap()).unwrap();
            assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
            let p: f64 = exact_probabilities(&c, &out).unwrap().iter().sum();
            assert!((p - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_probabilities() {
        let p = exact_probabilities(&Circuit::new(2), &StateVector::zero(2).unwrap()).unwrap();
        assert_eq!(p, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn caps_and_validation() {
        assert_eq!(
            StateVector::zero(13).unwrap_err(),
            Error::TooManyQubits {
                m: 13,
                max: MAX_SIM_QUBITS
            }
        );
        assert!(matches!(
            StateVector::from_amplitudes(vec![c_(1.0), c_(1.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(StateVector::from_json(r#"[[1,0],[0,0],[0,0]]"#).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let psi = StateVector::random(3, 11).unwrap();
        assert_eq!(StateVector::from_json(&psi.to_json()).unwrap(), psi);
    }

    #[test]
    fn sampling_contracts() {
        assert_eq!(sample_counts(&[1.0, 0.0, 0.0, 0.0], 500, 3), vec![500, 0, 0, 0]);
        let p = [0.1, 0.2, 0.3, 0.4];
        let a = sample_counts(&p, 10_000, 42);
        assert_eq!(a, sample_counts(&p, 10_000, 42));
        assert_eq!(a.iter().sum::<u64>(), 10_000);

        // Binomial(1e6, 1/2): σ = 500, allow 5σ.
        let counts = sample_counts(&[0.5, 0.5], 1_000_000, 9);
        assert!((counts[0] as f64 - 500_000.0).abs() < 2_500.0);
    }

    #[test]
    fn ansatz_examples() {
        let spec = AnsatzSpec {
            reps: 3,
            angles: vec![0.0; 8],
        };
        let psi = build_ansatz_state(&spec, 2).unwrap();
        assert!(close(psi.amplitudes()[0], c_(1.0)));

        let flip = AnsatzSpec {
            reps: 1,
            angles: vec![PI, 0.0],
        };
        let psi = build_ansatz_state(&flip, 1).unwrap();
        assert!((psi.amplitudes()[1].norm() - 1.0).abs() < 1e-12);

        assert_eq!(
            build_ansatz_state(
                &AnsatzSpec {
                    reps: 2,
                    angles: vec![0.1; 5]
                },
                2
            )
            .unwrap_err(),
            Error::AngleCountMismatch { expected: 6, found: 5 }
        );

        let spec = AnsatzSpec::random(3, 2, 5);
        assert_eq!(spec, AnsatzSpec::random(3, 2, 5));
        let a = build_ansatz_state(&spec, 3).unwrap();
        let b = build_ansatz_state(&spec, 3).unwrap();
        assert_eq!(a, b);
    }
}
