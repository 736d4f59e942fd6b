//! Reference dense linear algebra for cross-checking `psfam`.
//!
//! Everything here is built from Kronecker products of 2×2 matrices, with
//! the leftmost tensor factor acting on qubit 0. Nothing is shared with the
//! bit-twiddling code paths under test.

use num_complex::Complex64;

pub type Mat = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Mat {
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|col| if r == col { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn single(ch: char) -> Mat {
    match ch {
        'I' => identity(2),
        'X' => vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]],
        'Y' => vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]],
        'Z' => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]],
        other => panic!("not a Pauli character: {other}"),
    }
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (na, nb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); na * nb]; na * nb];
    for i in 0..na {
        for j in 0..na {
            for k in 0..nb {
                for l in 0..nb {
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn kron_all(factors: &[Mat]) -> Mat {
    factors.iter().fold(vec![vec![c(1.0, 0.0)]], |acc, f| kron(&acc, f))
}

/// Dense matrix of a Pauli string such as `"XIZ"`.
pub fn pauli(text: &str) -> Mat {
    let factors: Vec<Mat> = text.chars().map(single).collect();
    kron_all(&factors)
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn adjoint(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn scale(a: &Mat, s: Complex64) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

/// Largest entrywise difference.
pub fn max_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

/// Largest entry magnitude of `AB - BA`.
pub fn commutator_norm(a: &Mat, b: &Mat) -> f64 {
    max_diff(&matmul(a, b), &matmul(b, a))
}

/// Largest off-diagonal entry magnitude.
pub fn off_diagonal_norm(a: &Mat) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                worst = worst.max(x.norm());
            }
        }
    }
    worst
}

/// `Σ α_P P + identity · I`.
pub fn operator(m: usize, terms: &[(f64, String)], identity_coeff: f64) -> Mat {
    let dim = 1 << m;
    let mut out = scale(&identity(dim), c(identity_coeff, 0.0));
    for (alpha, text) in terms {
        out = add(&out, &scale(&pauli(text), c(*alpha, 0.0)));
    }
    out
}

fn one_qubit(name: &str, theta: Option<f64>) -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rot = |axis: char, t: f64| {
        let (sn, cs) = (t / 2.0).sin_cos();
        add(&scale(&identity(2), c(cs, 0.0)), &scale(&single(axis), c(0.0, -sn)))
    };
    match name {
        "h" => scale(&add(&single('X'), &single('Z')), c(s, 0.0)),
        "s" => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 1.0)]],
        "sdg" => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, -1.0)]],
        "uy" => scale(&add(&identity(2), &scale(&single('Y'), c(0.0, 1.0))), c(s, 0.0)),
        "uydg" => scale(&add(&identity(2), &scale(&single('Y'), c(0.0, -1.0))), c(s, 0.0)),
        "ry" => rot('Y', theta.expect("ry needs an angle")),
        "rz" => rot('Z', theta.expect("rz needs an angle")),
        other => panic!("unsupported gate {other}"),
    }
}

fn projector(bit: usize) -> Mat {
    let mut p = vec![vec![c(0.0, 0.0); 2]; 2];
    p[bit][bit] = c(1.0, 0.0);
    p
}

/// Full `2^m × 2^m` unitary of a named gate.
pub fn gate(m: usize, name: &str, qubits: &[usize], theta: Option<f64>) -> Mat {
    match name {
        "cx" | "cz" => {
            let (a, b) = (qubits[0], qubits[1]);
            let target = if name == "cx" { single('X') } else { single('Z') };
            let term = |active: bool| {
                let factors: Vec<Mat> = (0..m)
                    .map(|q| {
                        if q == a {
                            projector(usize::from(active))
                        } else if q == b && active {
                            target.clone()
                        } else {
                            identity(2)
                        }
                    })
                    .collect();
                kron_all(&factors)
            };
            add(&term(false), &term(true))
        }
        _ => {
            let u = one_qubit(name, theta);
            let factors: Vec<Mat> = (0..m)
                .map(|q| if q == qubits[0] { u.clone() } else { identity(2) })
                .collect();
            kron_all(&factors)
        }
    }
}

/// Product of gate unitaries, first gate applied first.
pub fn circuit_unitary(m: usize, gates: &[(String, Vec<usize>, Option<f64>)]) -> Mat {
    gates.iter().fold(identity(1 << m), |acc, (name, qs, theta)| {
        matmul(&gate(m, name, qs, *theta), &acc)
    })
}

pub fn apply(a: &Mat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// `Re ⟨ψ|A|ψ⟩`.
pub fn expectation(a: &Mat, psi: &[Complex64]) -> f64 {
    let av = apply(a, psi);
    psi.iter().zip(&av).map(|(x, y)| x.conj() * y).sum::<Complex64>().re
}
