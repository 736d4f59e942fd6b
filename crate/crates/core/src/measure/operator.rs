//! Hermitian operators as real-weighted sums of Pauli strings, and their
//! conversion to and from dense matrices.

use std::collections::HashSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Deserialize;

use super::statevector::{complex_literal, StateVector};
use crate::circuit::float_literal;
use crate::diagonalize::walsh_hadamard;
use crate::error::{Error, Result};
use crate::gf2::MAX_DIM;
use crate::pauli::PauliString;

/// Largest register accepted by [`pauli_decompose`].
pub const MAX_DECOMPOSE_QUBITS: usize = 8;

const HERMITIAN_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPauliSum {
    m: usize,
    terms: Vec<(f64, PauliString)>,
    identity: f64,
}

impl WeightedPauliSum {
    /// Zero coefficients are dropped and identity-string terms are folded
    /// into the identity coefficient.
    pub fn new(m: usize, terms: Vec<(f64, PauliString)>, identity: f64) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&m) {
            return Err(Error::BadQubitCount { m, max: MAX_DIM });
        }
        if !identity.is_finite() {
            return Err(Error::Format("identity coefficient is not finite".into()));
        }
        let mut seen = HashSet::with_capacity(terms.len());
        let mut identity = identity;
        let mut kept = Vec::with_capacity(terms.len());
        for (coeff, p) in terms {
            if p.num_qubits() != m {
                return Err(Error::DimensionMismatch {
                    left: m,
                    right: p.num_qubits(),
                });
            }
            if !coeff.is_finite() {
                return Err(Error::Format(format!("coefficient of {p} is not finite")));
            }
            if !seen.insert(p) {
                return Err(Error::DuplicateTerm(p.to_string()));
            }
            if p.is_identity() {
                identity += coeff;
            } else if coeff != 0.0 {
                kept.push((coeff, p));
            }
        }
        Ok(Self {
            m,
            terms: kept,
            identity,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    /// Non-identity terms.
    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn identity(&self) -> f64 {
        self.identity
    }

    pub fn strings(&self) -> Vec<PauliString> {
        self.terms.iter().map(|&(_, p)| p).collect()
    }

    /// Number of strings including the identity when its coefficient is nonzero.
    pub fn num_strings(&self) -> usize {
        self.terms.len() + usize::from(self.identity != 0.0)
    }

    /// Drop terms with `|α| < tol`; the identity coefficient is kept.
    pub fn apply_cut(&self, tol: f64) -> WeightedPauliSum {
        WeightedPauliSum {
            m: self.m,
            terms: self.terms.iter().copied().filter(|(a, _)| a.abs() >= tol).collect(),
            identity: self.identity,
        }
    }

    /// Every non-identity string with an independent standard normal weight.
    pub fn random_dense(m: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = crate::pauli::all_strings(m)
            .map(|p| (rng.sample::<f64, _>(StandardNormal), p))
            .collect();
        Self::new(m, terms, rng.sample(StandardNormal))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let dim = 1usize << self.m;
        let mut out = DenseMatrix::zeros(dim);
        for r in 0..dim {
            out.data[r * dim + r] += Complex64::new(self.identity, 0.0);
        }
        for &(alpha, p) in &self.terms {
            let (a, b, y) = p.xz_decompose();
            let phase = minus_i_pow(y) * alpha;
            for r in 0..dim {
                let col = r ^ b as usize;
                let sign = if (a as usize & r).count_ones().is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                out.data[r * dim + col] += phase * sign;
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|(c, p)| format!("{{\"pauli\":\"{p}\",\"coeff\":{}}}", float_literal(*c)))
            .collect();
        format!(
            "{{\"m\":{},\"terms\":[{}],\"identity\":{}}}",
            self.m,
            terms.join(","),
            float_literal(self.identity)
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Term {
            pauli: String,
            coeff: f64,
        }
        #[derive(Deserialize)]
        struct File {
            m: usize,
            terms: Vec<Term>,
            #[serde(default)]
            identity: f64,
        }
        let file: File = serde_json::from_str(text)?;
        let terms = file
            .terms
            .into_iter()
            .map(|t| Ok((t.coeff, PauliString::parse(&t.pauli, file.m)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.m, terms, file.identity)
    }
}

fn minus_i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Format("matrix is not square".into()));
        }
        Ok(Self {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|M_rc - conj(M_cr)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// `(G + G†)/2` for `G` with independent standard complex normal entries.
    pub fn random_hermitian(m: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 1usize << m;
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let g: Vec<Complex64> = (0..dim * dim)
            .map(|_| {
                Complex64::new(
                    rng.sample::<f64, _>(StandardNormal) * scale,
                    rng.sample::<f64, _>(StandardNormal) * scale,
                )
            })
            .collect();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = (g[r * dim + c] + g[c * dim + r].conj()) * 0.5;
            }
        }
        Self { dim, data }
    }

    /// `⟨ψ|M|ψ⟩`, real part.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        let amps = psi.amplitudes();
        if amps.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: amps.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..self.dim {
            let row: Complex64 = (0..self.dim).map(|c| self.get(r, c) * amps[c]).sum();
            acc += amps[r].conj() * row;
        }
        Ok(acc.re)
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<String> = (0..self.dim)
            .map(|r| {
                let cells: Vec<String> = (0..self.dim).map(|c| complex_literal(self.get(r, c))).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(text)?;
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
                .collect(),
        )
    }
}

/// Coefficients `α_P = tr(P·M) / 2^m` of a Hermitian matrix.
///
/// For each `x` label `b` the diagonal `u_r = M[r ⊕ b][r]` is transformed
/// with a Walsh–Hadamard pass, giving all `z` labels at once.
pub fn pauli_decompose(matrix: &DenseMatrix) -> Result<WeightedPauliSum> {
    let dim = matrix.dim();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Format(format!(
            "matrix dimension {dim} is not a power of two >= 2"
        )));
    }
    let m = dim.trailing_zeros() as usize;
    if m > MAX_DECOMPOSE_QUBITS {
        return Err(Error::TooLarge {
            dim,
            max: MAX_DECOMPOSE_QUBITS,
        });
    }
    let deviation = matrix.hermitian_deviation();
    if deviation > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(deviation));
    }
    let scale = 1.0 / dim as f64;
    let mut terms = Vec::with_capacity(dim * dim);
    let mut identity = 0.0;
    let mut re = vec![0.0; dim];
    let mut im = vec![0.0; dim];
    for b in 0..dim {
        for r in 0..dim {
            let v = matrix.get(r ^ b, r);
            re[r] = v.re;
            im[r] = v.im;
        }
        walsh_hadamard(&mut re);
        walsh_hadamard(&mut im);
        for a in 0..dim {
            let y = (a & b).count_ones();
            let trace = minus_i_pow(y) * Complex64::new(re[a], im[a]);
            let alpha = trace.re * scale;
            if a == 0 && b == 0 {
                identity = alpha;
            } else if alpha != 0.0 {
                terms.push((alpha, PauliString::from_masks(m, b as u64, a as u64)));
            }
        }
    }
    WeightedPauliSum::new(m, terms, identity)
}
