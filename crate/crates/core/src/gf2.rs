//! Bit-packed linear algebra over GF(2) and the construction of a symmetric
//! matrix whose powers generate a perfect partition of the Pauli strings.
//!
//! Vectors and matrix rows are stored as machine words. Component `j` of an
//! `m`-dimensional vector lives at bit `m - 1 - j`, so the word value of the
//! vector `v_i` is the integer `i` itself and component 0 is the most
//! significant binary digit. The same convention is used for Pauli string
//! labels: the leftmost character of a string is component 0.
//!
//! Over GF(2) subtraction and addition coincide, so `A - B` is computed as
//! [`BitMatrix::add`].

use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

/// Largest supported vector dimension.
pub const MAX_DIM: usize = 63;

#[inline]
fn low_mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

#[inline]
fn parity(word: u64) -> bool {
    word.count_ones() & 1 == 1
}

/// An element of GF(2)^m.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVector {
    bits: u64,
    dim: usize,
}

impl BitVector {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Self { bits: 0, dim }
    }

    /// The vector `v_i` whose components are the binary digits of `i`.
    pub fn from_index(index: u64, dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Self {
            bits: index & low_mask(dim),
            dim,
        }
    }

    pub fn from_bits(components: &[u8]) -> Self {
        let mut v = Self::zero(components.len());
        for (j, &c) in components.iter().enumerate() {
            v.set(j, c & 1 == 1);
        }
        v
    }

    #[inline]
    pub fn index(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        debug_assert!(j < self.dim);
        (self.bits >> (self.dim - 1 - j)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, j: usize, value: bool) {
        debug_assert!(j < self.dim);
        let bit = 1u64 << (self.dim - 1 - j);
        if value {
            self.bits |= bit;
        } else {
            self.bits &= !bit;
        }
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.dim, other.dim);
        parity(self.bits & other.bits)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self {
            bits: self.bits ^ other.bits,
            dim: self.dim,
        }
    }

    /// Positions of the unit components, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(move |&j| self.get(j))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.dim).map(|j| u8::from(self.get(j))).collect()
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for j in 0..self.dim {
            write!(f, "{}", u8::from(self.get(j)))?;
        }
        write!(f, ")")
    }
}

/// Square matrix over GF(2) with word-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    dim: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Self {
            dim,
            rows: vec![0; dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Precondition(format!(
                "matrix dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        let mut m = Self::zeros(dim);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            m.rows[r] = BitVector::from_bits(row).index();
        }
        Ok(m)
    }

    pub(crate) fn from_row_words(dim: usize, rows: Vec<u64>) -> Self {
        debug_assert_eq!(rows.len(), dim);
        Self { dim, rows }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.rows[r] >> (self.dim - 1 - c)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let bit = 1u64 << (self.dim - 1 - c);
        if value {
            self.rows[r] |= bit;
        } else {
            self.rows[r] &= !bit;
        }
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            bits: self.rows[r],
            dim: self.dim,
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0..self.dim).map(|r| self.row(r))
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zero(self.dim);
        for r in 0..self.dim {
            v.set(r, self.get(r, c));
        }
        v
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows().map(|r| r.to_bits()).collect()
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim != other {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other,
            });
        }
        Ok(())
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        self.check_dim(v.dim)?;
        Ok(self.apply(v.bits))
    }

    /// `self · v` on a raw word, no dimension check.
    #[inline]
    pub(crate) fn apply(&self, word: u64) -> BitVector {
        let mut out = 0u64;
        for &row in &self.rows {
            out = (out << 1) | u64::from(parity(row & word));
        }
        BitVector {
            bits: out,
            dim: self.dim,
        }
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        self.check_dim(other.dim)?;
        let dim = self.dim;
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                let mut acc = 0u64;
                for c in 0..dim {
                    if (row >> (dim - 1 - c)) & 1 == 1 {
                        acc ^= other.rows[c];
                    }
                }
                acc
            })
            .collect();
        Ok(BitMatrix { dim, rows })
    }

    /// Entry-wise sum, which over GF(2) is also the difference.
    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        self.check_dim(other.dim)?;
        Ok(BitMatrix {
            dim: self.dim,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_identity(&self) -> bool {
        *self == BitMatrix::identity(self.dim)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for bit in (0..self.dim).rev() {
            let mask = 1u64 << bit;
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) {
                rows.swap(rank, p);
                let pivot = rows[rank];
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && *row & mask != 0 {
                        *row ^= pivot;
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim
    }

    /// Gauss–Jordan inverse mod 2.
    pub fn inverse(&self) -> Result<BitMatrix> {
        let dim = self.dim;
        let mut left = self.rows.clone();
        let mut right = BitMatrix::identity(dim).rows;
        for col in 0..dim {
            let mask = 1u64 << (dim - 1 - col);
            let pivot = (col..dim).find(|&r| left[r] & mask != 0).ok_or(Error::SingularMatrix)?;
            left.swap(col, pivot);
            right.swap(col, pivot);
            let (pl, pr) = (left[col], right[col]);
            for r in 0..dim {
                if r != col && left[r] & mask != 0 {
                    left[r] ^= pl;
                    right[r] ^= pr;
                }
            }
        }
        Ok(BitMatrix { dim, rows: right })
    }

    pub fn pow(&self, mut exp: u64) -> BitMatrix {
        let mut base = self.clone();
        let mut acc = BitMatrix::identity(self.dim);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            base = base.mul(&base).expect("same dimension");
            exp >>= 1;
        }
        acc
    }

    /// Principal minor with row and column `skip` removed.
    pub fn principal_minor(&self, skip: usize) -> BitMatrix {
        assert!(self.dim >= 2 && skip < self.dim);
        let dim = self.dim;
        let rows = (0..dim)
            .filter(|&r| r != skip)
            .map(|r| {
                let row = self.rows[r];
                let bit = dim - 1 - skip;
                let high = (row >> (bit + 1)) << bit;
                let low = row & low_mask(bit);
                high | low
            })
            .collect();
        BitMatrix { dim: dim - 1, rows }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows().map(|r| r.to_bits())).finish()
    }
}

impl fmt::Display for BitMatrix {
    /// One `[a, b, ...]` line per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.rows().enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.to_bits().iter().map(u8::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.dim))?;
        for row in self.rows() {
            seq.serialize_element(&row.to_bits())?;
        }
        seq.end()
    }
}

/// Monic polynomial of degree `m` over GF(2); bit `i` of `coeffs` is `a_i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolyGF2 {
    coeffs: u64,
}

impl PolyGF2 {
    /// From coefficients `a_0, ..., a_m`.
    pub fn from_coeffs(coeffs: &[u8]) -> Result<Self> {
        if coeffs.len() < 2 || coeffs.len() > MAX_DIM + 1 {
            return Err(Error::Precondition(format!(
                "polynomial needs between 2 and {} coefficients",
                MAX_DIM + 1
            )));
        }
        if coeffs.last() != Some(&1) {
            return Err(Error::Precondition("polynomial is not monic".into()));
        }
        let word = coeffs
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &a)| acc | (u64::from(a & 1) << i));
        Ok(Self { coeffs: word })
    }

    pub(crate) fn from_word(word: u64) -> Self {
        debug_assert!(word > 1);
        Self { coeffs: word }
    }

    pub fn degree(&self) -> usize {
        63 - self.coeffs.leading_zeros() as usize
    }

    /// Coefficient `a_i`.
    pub fn coeff(&self, i: usize) -> u8 {
        ((self.coeffs >> i) & 1) as u8
    }

    /// `a_0, ..., a_m`.
    pub fn coeffs(&self) -> Vec<u8> {
        (0..=self.degree()).map(|i| self.coeff(i)).collect()
    }

    pub fn word(&self) -> u64 {
        self.coeffs
    }
}

impl fmt::Debug for PolyGF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (0..=self.degree())
            .rev()
            .filter(|&i| self.coeff(i) == 1)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `b` (both as coefficient words).
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// `a * b mod modulus` for `deg a, deg b < deg modulus <= 63`.
fn poly_mulmod(a: u64, b: u64, modulus: u64) -> u64 {
    let deg = poly_degree(modulus);
    let mut result = 0u64;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            result ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> deg) & 1 == 1 {
            a ^= modulus;
        }
    }
    result
}

fn poly_powmod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = poly_rem(base, modulus);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(acc, base, modulus);
        }
        base = poly_mulmod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Trial division by every polynomial of degree 1..=deg/2.
pub fn is_irreducible(p: &PolyGF2) -> bool {
    let word = p.word();
    let deg = p.degree();
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for divisor in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(word, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True when `x` has multiplicative order `2^m - 1` modulo `p`, i.e. the
/// companion matrix of `p` cycles through every nonzero vector.
pub fn is_primitive(p: &PolyGF2) -> bool {
    let deg = p.degree();
    if !is_irreducible(p) {
        return false;
    }
    if deg == 1 {
        return p.coeff(0) == 1;
    }
    let order = (1u64 << deg) - 1;
    let x = 0b10u64;
    if poly_powmod(x, order, p.word()) != 1 {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|q| poly_powmod(x, order / q, p.word()) != 1)
}

/// The smallest primitive polynomial of degree `m`, ordering candidates by
/// their coefficient word (`a_{m-1}` most significant, `a_0` least).
///
/// Irreducibility alone is not sufficient for the companion matrix to have
/// order `2^m - 1` (the first counterexample is `m = 8`), so candidates must
/// also pass [`is_primitive`]. For `m <= 3` this coincides with the smallest
/// irreducible polynomial with nonzero constant term.
pub fn irreducible_poly(m: usize) -> Result<PolyGF2> {
    if !(1..=MAX_DIM).contains(&m) {
        return Err(Error::BadQubitCount { m, max: MAX_DIM });
    }
    let lead = 1u64 << m;
    (0..lead)
        .map(|low| PolyGF2::from_word(lead | low))
        .find(|p| p.coeff(0) == 1 && is_primitive(p))
        .ok_or_else(|| Error::Precondition(format!("no primitive polynomial of degree {m}")))
}

/// Companion matrix: ones on the superdiagonal, bottom row `(a_0, ..., a_{m-1})`.
pub fn companion_matrix(p: &PolyGF2) -> BitMatrix {
    let m = p.degree();
    let mut c = BitMatrix::zeros(m);
    for i in 0..m - 1 {
        c.set(i, i + 1, true);
    }
    for j in 0..m {
        c.set(m - 1, j, p.coeff(j) == 1);
    }
    c
}

/// Symmetric anti-triangular `D` with `C·D = D·Cᵀ`, built from the sequence
/// `b_0 = 1`, `b_i = Σ_{k<i} a_{m-i+k} b_k`.
pub fn build_d(p: &PolyGF2) -> BitMatrix {
    let m = p.degree();
    let mut b = vec![0u8; m];
    b[0] = 1;
    for i in 1..m {
        b[i] = (0..i).fold(0, |acc, k| acc ^ (p.coeff(m - i + k) & b[k]));
    }
    let mut d = BitMatrix::zeros(m);
    for r in 0..m {
        for c in 0..m {
            if r + c + 1 >= m {
                d.set(r, c, b[r + c + 1 - m] == 1);
            }
        }
    }
    d
}

/// `Λ = I + e_a vᵀ` with `v_j = 1 + D_jj` and `a` the first unit diagonal
/// index, so that `Λᵀ D Λ` has an all-ones diagonal.
pub fn build_lambda(d: &BitMatrix) -> Result<BitMatrix> {
    let dim = d.dim();
    let pivot = (0..dim).find(|&i| d.get(i, i)).ok_or(Error::NoUnitDiagonal)?;
    let mut lambda = BitMatrix::identity(dim);
    for j in 0..dim {
        if !d.get(j, j) {
            lambda.set(pivot, j, true);
        }
    }
    Ok(lambda)
}

/// Factor a symmetric invertible unit-diagonal `M` as `L·Lᵀ` over GF(2).
///
/// One index is peeled per level: the last index first, otherwise the
/// smallest index whose principal minor is invertible. `L` is returned with
/// its rows in the original index order.
pub fn cholesky_gf2(m: &BitMatrix) -> Result<BitMatrix> {
    if !m.is_symmetric() {
        return Err(Error::Precondition("matrix is not symmetric".into()));
    }
    if (0..m.dim()).any(|i| !m.get(i, i)) {
        return Err(Error::Precondition("matrix diagonal is not all ones".into()));
    }
    if !m.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    cholesky_rec(m)
}

fn cholesky_rec(m: &BitMatrix) -> Result<BitMatrix> {
    let dim = m.dim();
    if dim == 1 {
        return Ok(BitMatrix::identity(1));
    }
    let candidates = std::iter::once(dim - 1).chain(0..dim - 1);
    let (skip, minor) = candidates
        .map(|i| (i, m.principal_minor(i)))
        .find(|(_, minor)| minor.is_invertible())
        .ok_or_else(|| Error::DecompositionFailure(format!("no invertible principal minor at dimension {dim}")))?;
    let inner = cholesky_rec(&minor)?;

    // Border column of M restricted to the remaining indices.
    let remaining: Vec<usize> = (0..dim).filter(|&i| i != skip).collect();
    let mut eta = BitVector::zero(dim - 1);
    for (p, &r) in remaining.iter().enumerate() {
        eta.set(p, m.get(r, skip));
    }
    let w = inner.inverse()?.mul_vec(&eta)?;
    if w.weight() % 2 == 1 {
        return Err(Error::DecompositionFailure("border vector has odd weight".into()));
    }

    let mut rows = vec![0u64; dim];
    for (p, &r) in remaining.iter().enumerate() {
        rows[r] = inner.rows[p] << 1;
    }
    rows[skip] = (w.index() << 1) | 1;
    Ok(BitMatrix::from_row_words(dim, rows))
}

/// Every intermediate of the generator construction, kept for inspection.
#[derive(Clone, Debug)]
pub struct GeneratorChain {
    pub poly: PolyGF2,
    pub companion: BitMatrix,
    pub d: BitMatrix,
    pub lambda: BitMatrix,
    pub m: BitMatrix,
    pub l: BitMatrix,
    pub b: BitMatrix,
    pub a: BitMatrix,
}

pub fn generator_chain(m: usize) -> Result<GeneratorChain> {
    let poly = irreducible_poly(m)?;
    let companion = companion_matrix(&poly);
    let d = build_d(&poly);
    let lambda = build_lambda(&d)?;
    let lambda_t = lambda.transpose();
    let unit_diag = lambda_t.mul(&d)?.mul(&lambda)?;
    let l = cholesky_gf2(&unit_diag)?;
    let b = lambda_t.inverse()?.mul(&l)?;
    let a = b.inverse()?.mul(&companion)?.mul(&b)?;
    Ok(GeneratorChain {
        poly,
        companion,
        d,
        lambda,
        m: unit_diag,
        l,
        b,
        a,
    })
}

/// Symmetric `A = B⁻¹ C B` whose powers `A, A², ..., A^{N-1}` pairwise
/// differ by invertible matrices.
pub fn build_symmetric_generator(m: usize) -> Result<BitMatrix> {
    Ok(generator_chain(m)?.a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn vector_index_round_trip() {
        let v = BitVector::from_index(0b101, 3);
        assert_eq!(v.to_bits(), vec![1, 0, 1]);
        let w = BitVector::from_index(0b110, 3);
        assert_eq!(v.add(&w).index(), 0b101 ^ 0b110);
        assert!(v.dot(&w));
    }

    #[test]
    fn multiplication_examples() {
        let i2 = BitMatrix::identity(2);
        assert_eq!(i2.mul(&i2).unwrap(), i2);
        let a = mat(&[&[1, 1], &[1, 0]]);
        assert_eq!(a.mul(&a).unwrap(), mat(&[&[0, 1], &[1, 1]]));
        assert!(matches!(
            a.mul(&BitMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(BitMatrix::identity(4).inverse().unwrap(), BitMatrix::identity(4));
        let lower = mat(&[&[1, 0], &[1, 1]]);
        assert_eq!(lower.inverse().unwrap(), lower);
        assert_eq!(mat(&[&[1, 1], &[1, 1]]).inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn polynomial_selection() {
        assert_eq!(irreducible_poly(1).unwrap().coeffs(), vec![1, 1]);
        assert_eq!(irreducible_poly(2).unwrap().coeffs(), vec![1, 1, 1]);
        assert_eq!(irreducible_poly(3).unwrap().coeffs(), vec![1, 1, 0, 1]);
        // x^8 + x^4 + x^3 + x + 1 is irreducible with order 51.
        let aes = PolyGF2::from_word(0x11B);
        assert!(is_irreducible(&aes));
        assert!(!is_primitive(&aes));
        assert_ne!(irreducible_poly(8).unwrap(), aes);
    }

    #[test]
    fn companion_examples() {
        let c2 = companion_matrix(&irreducible_poly(2).unwrap());
        assert_eq!(c2, mat(&[&[0, 1], &[1, 1]]));
        assert!(c2.pow(3).is_identity());
        assert!(!c2.is_identity() && !c2.pow(2).is_identity());
        let c3 = companion_matrix(&PolyGF2::from_coeffs(&[1, 1, 0, 1]).unwrap());
        assert_eq!(c3, mat(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]));
    }

    #[test]
    fn d_examples() {
        let p = irreducible_poly(2).unwrap();
        let d = build_d(&p);
        assert_eq!(d, mat(&[&[0, 1], &[1, 1]]));
        let c = companion_matrix(&p);
        let cd = c.mul(&d).unwrap();
        assert_eq!(cd, mat(&[&[1, 1], &[1, 0]]));
        assert_eq!(cd, d.mul(&c.transpose()).unwrap());
    }

    #[test]
    fn lambda_examples() {
        let d = mat(&[&[0, 1], &[1, 1]]);
        let lambda = build_lambda(&d).unwrap();
        assert_eq!(lambda, mat(&[&[1, 0], &[1, 1]]));
        let m = lambda.transpose().mul(&d).unwrap().mul(&lambda).unwrap();
        assert!(m.is_identity());

        let ones = mat(&[&[1, 1], &[1, 1]]);
        assert!(build_lambda(&ones).unwrap().is_identity());
        assert_eq!(build_lambda(&mat(&[&[0, 1], &[1, 0]])), Err(Error::NoUnitDiagonal));
    }

    #[test]
    fn cholesky_contract() {
        assert!(cholesky_gf2(&BitMatrix::identity(3)).unwrap().is_identity());
        assert!(matches!(
            cholesky_gf2(&mat(&[&[1, 1], &[1, 0]])),
            Err(Error::Precondition(_))
        ));
        assert_eq!(cholesky_gf2(&mat(&[&[1, 1], &[1, 1]])), Err(Error::SingularMatrix));
    }

    #[test]
    fn generator_chain_m2() {
        let chain = generator_chain(2).unwrap();
        assert_eq!(chain.lambda, mat(&[&[1, 0], &[1, 1]]));
        assert!(chain.m.is_identity());
        assert!(chain.l.is_identity());
        assert_eq!(chain.b, mat(&[&[1, 1], &[0, 1]]));
        assert_eq!(chain.a, mat(&[&[1, 1], &[1, 0]]));
    }

    #[test]
    fn generator_m1() {
        assert_eq!(build_symmetric_generator(1).unwrap(), mat(&[&[1]]));
    }

    #[test]
    fn companion_is_single_cycle_and_d_intertwines() {
        for m in 1..=12 {
            let p = irreducible_poly(m).unwrap();
            let c = companion_matrix(&p);
            let order = (1u64 << m) - 1;
            // Walk v_1 around the cycle: it must return only after 2^m - 1 steps.
            let mut v = BitVector::from_index(1, m);
            for k in 1..=order {
                v = c.mul_vec(&v).unwrap();
                assert_eq!(v.index() == 1, k == order, "m={m} k={k}");
            }
            assert!(c.pow(order).is_identity());
            let d = build_d(&p);
            assert!(d.is_symmetric());
            assert!((0..m).any(|i| d.get(i, i)), "m={m}: D has no unit diagonal");
            assert_eq!(c.mul(&d).unwrap(), d.mul(&c.transpose()).unwrap(), "m={m}");
        }
    }

    #[test]
    fn generator_is_symmetric_with_full_order() {
        for m in 1..=10 {
            let a = build_symmetric_generator(m).unwrap();
            assert!(a.is_symmetric(), "m={m}");
            let order = (1u64 << m) - 1;
            assert!(a.pow(order).is_identity());
            let mut v = BitVector::from_index(1, m);
            for k in 1..=order {
                v = a.mul_vec(&v).unwrap();
                assert_eq!(v.index() == 1, k == order, "m={m} k={k}");
            }
        }
    }

    fn random_invertible(dim: usize, seed: u64) -> BitMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        loop {
            let rows: Vec<u64> = (0..dim).map(|_| rng.gen::<u64>() & low_mask(dim)).collect();
            let m = BitMatrix::from_row_words(dim, rows);
            if m.is_invertible() {
                return m;
            }
        }
    }

    proptest! {
        #[test]
        fn inverse_round_trip(dim in 1usize..=16, seed in any::<u64>()) {
            let m = random_invertible(dim, seed);
            let inv = m.inverse().unwrap();
            prop_assert!(m.mul(&inv).unwrap().is_identity());
            prop_assert!(inv.mul(&m).unwrap().is_identity());
        }

        #[test]
        fn cholesky_round_trip(dim in 1usize..=10, seed in any::<u64>()) {
            // Symmetric, invertible, unit diagonal: G Gᵀ for invertible G,
            // retried until the diagonal is all ones.
            let mut s = seed;
            let m = loop {
                let g = random_invertible(dim, s);
                let m = g.mul(&g.transpose()).unwrap();
                if (0..dim).all(|i| m.get(i, i)) {
                    break m;
                }
                s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
            };
            let l = cholesky_gf2(&m).unwrap();
            prop_assert!(l.is_invertible());
            prop_assert_eq!(l.mul(&l.transpose()).unwrap(), m);
        }
    }
}
