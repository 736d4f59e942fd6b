//! Post-state rotations that map a family onto the `z` family, and the
//! per-outcome coefficients that turn measured frequencies into an
//! expectation value.
//!
//! For family `f` with `1 <= f < N` the rotation is built from the rows
//! `k_1..k_m` of `G = (A^f)^{N/2}`, which satisfies `G² = A^f`. The emitted
//! circuit is
//!
//! ```text
//! UY on every qubit
//! for each row k: CX ladder onto pivot, S(pivot), CX ladder undone
//! UYdg on every qubit
//! ```
//!
//! `UY† Z UY = X` and `S ∝ exp(-iπ/4 Z)`, so the circuit equals
//! `W = ∏_k exp(-iπ/4 x_k)` up to global phase. Conjugating a member
//! `(-i)^y z_a x_b` by `W` right-multiplies it by `+i x_k` for every `k`
//! whose `x_k` anticommutes with it, leaving `(-i)^{y - N_H} z_a`.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::partition::{FamilyId, Solution};
use crate::pauli::{PauliString, PhasedPauli};

/// The `x`-string labels that generate a family's rotation.
#[derive(Clone, Debug, PartialEq)]
pub enum Generators {
    /// `z` family: already diagonal.
    Diagonal,
    /// `x` family: a single layer of `UY` gates.
    UyLayer,
    Rows(Vec<BitVector>),
}

/// Exponent `e` with `A^e = (A^f)^{N/2}`.
pub fn half_power_exponent(n: usize, f: usize) -> usize {
    if f.is_multiple_of(2) {
        f / 2
    } else {
        (n + f - 1) / 2
    }
}

pub fn diag_generators(sol: &Solution, f: FamilyId) -> Result<Generators> {
    sol.check_family(f)?;
    let n = sol.n();
    Ok(match f.0 {
        0 => Generators::Diagonal,
        id if id == n => Generators::UyLayer,
        id => {
            let half = sol.power(half_power_exponent(n, id));
            Generators::Rows(half.rows().collect())
        }
    })
}

/// `exp(-iπ/4 z_k)` up to global phase: star CX ladder onto the lowest
/// qubit in the support of `k`, an `S` on that qubit, then the ladder again.
pub fn z_rotation_block(k: &BitVector) -> Vec<Gate> {
    let support: Vec<usize> = k.support().collect();
    assert!(!support.is_empty(), "zero generator row");
    let pivot = support[0];
    let ladder: Vec<Gate> = support[1..]
        .iter()
        .map(|&c| Gate::Cx {
            control: c,
            target: pivot,
        })
        .collect();
    let mut gates = ladder.clone();
    gates.push(Gate::S(pivot));
    gates.extend(ladder.into_iter().rev());
    gates
}

pub fn build_circuit(sol: &Solution, f: FamilyId) -> Result<Circuit> {
    let m = sol.num_qubits();
    let mut circuit = Circuit::new(m);
    match diag_generators(sol, f)? {
        Generators::Diagonal => {}
        Generators::UyLayer => {
            for q in 0..m {
                circuit.push(Gate::Uy(q))?;
            }
        }
        Generators::Rows(rows) => {
            for q in 0..m {
                circuit.push(Gate::Uy(q))?;
            }
            for k in &rows {
                for g in z_rotation_block(k) {
                    circuit.push(g)?;
                }
            }
            for q in 0..m {
                circuit.push(Gate::Uydg(q))?;
            }
        }
    }
    Ok(circuit)
}

/// Gates inside the `z`-rotation blocks (CX and S), excluding the
/// single-qubit basis layers.
pub fn nominal_gate_count(sol: &Solution, f: FamilyId) -> Result<usize> {
    Ok(match diag_generators(sol, f)? {
        Generators::Rows(rows) => rows.iter().map(|k| 2 * k.weight() as usize - 1).sum(),
        _ => 0,
    })
}

/// Image of one family member under the family's rotation: `±z_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagonalImage {
    /// `+1` or `-1`.
    pub sign: i8,
    /// Label of the resulting `z` string.
    pub z_label: u64,
    /// Number of generator rows whose `x_k` anticommutes with the member.
    pub anticommuting: u32,
}

fn check_member(sol: &Solution, f: FamilyId, p: &PauliString) -> Result<()> {
    if p.num_qubits() != sol.num_qubits() {
        return Err(Error::DimensionMismatch {
            left: sol.num_qubits(),
            right: p.num_qubits(),
        });
    }
    if p.is_identity() && f.0 == 0 {
        return Ok(());
    }
    if p.is_identity() || sol.lookup_family(p) != f {
        return Err(Error::TermNotInFamily {
            pauli: p.to_string(),
            family: f.0,
        });
    }
    Ok(())
}

/// Conjugate a family member by its family's rotation circuit.
pub fn member_phase(sol: &Solution, f: FamilyId, member: &PhasedPauli) -> Result<DiagonalImage> {
    sol.check_family(f)?;
    let p = member.pauli;
    check_member(sol, f, &p)?;
    let (z, x, _) = p.xz_decompose();
    let (z_label, anticommuting) = match diag_generators(sol, f)? {
        Generators::Diagonal => (z, 0),
        // UY X UY† = Z on each qubit.
        Generators::UyLayer => (x, 0),
        Generators::Rows(rows) => {
            let hits = rows.iter().filter(|k| (k.index() & z).count_ones() % 2 == 1).count();
            (z, hits as u32)
        }
    };
    let exponent = (u32::from(member.phase_exp) + 3 * anticommuting) % 4;
    if exponent % 2 == 1 {
        return Err(Error::PhaseNotReal {
            pauli: p.to_string(),
            exponent: exponent as u8,
        });
    }
    Ok(DiagonalImage {
        sign: if exponent == 0 { 1 } else { -1 },
        z_label,
        anticommuting,
    })
}

/// Eigenvalue of `sign · z_a` on computational basis state `k`.
#[inline]
pub fn eigenvalue(a: u64, k: u64, sign: i8) -> i8 {
    if (a & k).count_ones().is_multiple_of(2) {
        sign
    } else {
        -sign
    }
}

/// In-place Walsh–Hadamard transform: `out[k] = Σ_a w[a] (-1)^{|a & k|}`.
pub(crate) fn walsh_hadamard(values: &mut [f64]) {
    let n = values.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (values[i], values[i + h]);
                values[i] = a + b;
                values[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Coefficients `c_k` over the `N` outcomes from `(coefficient, sign, z label)`
/// triples; `offset` is added to every outcome.
pub fn coefficients_from_images(m: usize, images: &[(f64, i8, u64)], offset: f64) -> Vec<f64> {
    let n = 1usize << m;
    let mut weights = vec![0.0; n];
    for &(alpha, sign, label) in images {
        weights[label as usize] += alpha * f64::from(sign);
    }
    walsh_hadamard(&mut weights);
    if offset != 0.0 {
        weights.iter_mut().for_each(|c| *c += offset);
    }
    weights
}

/// `c_k = Σ α λ_k` for terms of family `f`; `identity_coeff` is only
/// accepted for the `z` family, where it shifts every coefficient.
pub fn measurement_coeffs(
    sol: &Solution,
    f: FamilyId,
    terms: &[(f64, PauliString)],
    identity_coeff: f64,
) -> Result<Vec<f64>> {
    sol.check_family(f)?;
    if identity_coeff != 0.0 && f.0 != 0 {
        return Err(Error::TermNotInFamily {
            pauli: PauliString::identity(sol.num_qubits()).to_string(),
            family: f.0,
        });
    }
    let images = terms
        .iter()
        .map(|&(alpha, p)| {
            let image = member_phase(sol, f, &PhasedPauli::hermitian(p))?;
            Ok((alpha, image.sign, image.z_label))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(coefficients_from_images(sol.num_qubits(), &images, identity_coeff))
}

/// A rotation circuit with the outcome weights that recover the grouped
/// part of an operator from computational-basis frequencies.
#[derive(Clone, Debug)]
pub struct MeasurementPlan {
    pub label: String,
    pub circuit: Circuit,
    pub coeffs: Vec<f64>,
    pub num_terms: usize,
}

impl MeasurementPlan {
    /// `Σ_k c_k p_k`.
    pub fn evaluate(&self, frequencies: &[f64]) -> f64 {
        self.coeffs.iter().zip(frequencies).map(|(c, p)| c * p).sum()
    }
}

pub fn plan_family(
    sol: &Solution,
    f: FamilyId,
    terms: &[(f64, PauliString)],
    identity_coeff: f64,
) -> Result<MeasurementPlan> {
    Ok(MeasurementPlan {
        label: format!("family {f}"),
        circuit: build_circuit(sol, f)?,
        coeffs: measurement_coeffs(sol, f, terms, identity_coeff)?,
        num_terms: terms.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn two_qubit_generators() {
        let sol = Solution::build(2).unwrap();
        let Generators::Rows(rows) = diag_generators(&sol, FamilyId(1)).unwrap() else {
            panic!("expected rows")
        };
        let labels: Vec<u64> = rows.iter().map(|r| r.index()).collect();
        assert_eq!(labels, vec![1, 3]);
        let Generators::Rows(rows) = diag_generators(&sol, FamilyId(2)).unwrap() else {
            panic!("expected rows")
        };
        assert_eq!(rows, sol.power(1).rows().collect::<Vec<_>>());
        assert_eq!(diag_generators(&sol, FamilyId(0)).unwrap(), Generators::Diagonal);
        assert_eq!(diag_generators(&sol, FamilyId(4)).unwrap(), Generators::UyLayer);
        assert!(diag_generators(&sol, FamilyId(5)).is_err());
    }

    #[test]
    fn half_power_squares_to_family_matrix() {
        for m in 1..=6 {
            let sol = Solution::build(m).unwrap();
            for f in 1..sol.n() {
                let g = sol.power(half_power_exponent(sol.n(), f));
                assert!(g.is_symmetric());
                assert_eq!(g.mul(&g).unwrap(), sol.power(f), "m={m} f={f}");
            }
        }
    }

    #[test]
    fn diagonalization_condition_holds_symbolically() {
        // P(i) ⊕ Σ_k k·[x_k anticommutes with z_i] = 0 for every i and family.
        for m in 1..=10 {
            let sol = Solution::build(m).unwrap();
            for f in 1..sol.n() {
                let Generators::Rows(rows) = diag_generators(&sol, FamilyId(f)).unwrap() else {
                    unreachable!()
                };
                for i in 1..sol.n() as u64 {
                    let shift = rows
                        .iter()
                        .filter(|k| (k.index() & i).count_ones() % 2 == 1)
                        .fold(0u64, |acc, k| acc ^ k.index());
                    assert_eq!(sol.permute(f, i) ^ shift, 0, "m={m} f={f} i={i}");
                }
            }
        }
    }

    #[test]
    fn circuit_shapes() {
        let sol = Solution::build(2).unwrap();
        assert!(build_circuit(&sol, FamilyId(0)).unwrap().is_empty());
        assert_eq!(
            build_circuit(&sol, FamilyId(4)).unwrap().gates(),
            &[Gate::Uy(0), Gate::Uy(1)]
        );
        let c = build_circuit(&sol, FamilyId(1)).unwrap();
        // K = {IX, XX}: S(1); CX(1→0) S(0) CX(1→0)
        assert_eq!(
            c.gates(),
            &[
                Gate::Uy(0),
                Gate::Uy(1),
                Gate::S(1),
                Gate::Cx { control: 1, target: 0 },
                Gate::S(0),
                Gate::Cx { control: 1, target: 0 },
                Gate::Uydg(0),
                Gate::Uydg(1),
            ]
        );
    }

    #[test]
    fn five_qubit_block_shape() {
        let k = BitVector::from_bits(&[0, 1, 0, 1, 1]);
        let block = z_rotation_block(&k);
        assert_eq!(block.len(), 2 * (3 - 1) + 1);
        assert_eq!(block.iter().filter(|g| g.name() == "cx").count(), 4);
        assert_eq!(block[2], Gate::S(1));
    }

    #[test]
    fn each_rotation_has_m_blocks() {
        for m in 1..=6 {
            let sol = Solution::build(m).unwrap();
            for f in 1..sol.n() {
                let c = build_circuit(&sol, FamilyId(f)).unwrap();
                assert_eq!(c.count("s"), m);
                assert_eq!(c.count("uy"), m);
                assert_eq!(c.count("uydg"), m);
            }
        }
    }

    #[test]
    fn member_phase_parity_is_even() {
        for m in 1..=6 {
            let sol = Solution::build(m).unwrap();
            for f in sol.families() {
                for member in sol.family_members(f).unwrap() {
                    let image = member_phase(&sol, f, &member).unwrap();
                    assert_eq!(
                        image.z_label,
                        if f.0 == sol.n() {
                            member.pauli.x_mask()
                        } else {
                            member.pauli.z_mask()
                        }
                    );
                }
            }
        }
    }

    #[test]
    fn member_phase_rejects_strangers() {
        let sol = Solution::build(2).unwrap();
        let err = member_phase(&sol, FamilyId(2), &PhasedPauli::hermitian(p("YX"))).unwrap_err();
        assert_eq!(
            err,
            Error::TermNotInFamily {
                pauli: "YX".into(),
                family: 2
            }
        );
        let z = member_phase(&sol, FamilyId(0), &PhasedPauli::hermitian(p("ZI"))).unwrap();
        assert_eq!((z.sign, z.z_label), (1, 2));
    }

    #[test]
    fn eigenvalue_examples() {
        for k in 0..4 {
            assert_eq!(eigenvalue(0, k, -1), -1);
        }
        assert_eq!(eigenvalue(3, 3, 1), 1);
        assert_eq!(eigenvalue(3, 1, 1), -1);
    }

    #[test]
    fn coefficient_examples() {
        let sol = Solution::build(2).unwrap();
        let c = measurement_coeffs(&sol, FamilyId(0), &[(1.0, p("ZZ"))], 0.0).unwrap();
        assert_eq!(c, vec![1.0, -1.0, -1.0, 1.0]);
        let c = measurement_coeffs(&sol, FamilyId(0), &[], 0.75).unwrap();
        assert_eq!(c, vec![0.75; 4]);
        assert!(measurement_coeffs(&sol, FamilyId(1), &[(1.0, p("ZZ"))], 0.0).is_err());
        assert!(measurement_coeffs(&sol, FamilyId(1), &[], 1.0).is_err());
    }

    #[test]
    fn walsh_hadamard_matches_definition() {
        let w = [0.5, -1.0, 2.0, 0.25, 0.0, 3.0, -0.5, 1.5];
        let mut fast = w.to_vec();
        walsh_hadamard(&mut fast);
        for (k, value) in fast.iter().enumerate() {
            let slow: f64 = w
                .iter()
                .enumerate()
                .map(|(a, x)| if (a & k).count_ones() % 2 == 0 { *x } else { -x })
                .sum();
            assert!((value - slow).abs() < 1e-12);
        }
    }
}
