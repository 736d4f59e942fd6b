//! Symplectic representation of Pauli strings.
//!
//! A string on `m` qubits is stored as an `x` mask and a `z` mask. Character
//! position `p` (leftmost is 0) maps to bit `m - 1 - p`, so the masks read as
//! integers give the labels of the `x_j` and `z_i` strings: `IIZZ` is `z_3`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::MAX_DIM;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    m: u8,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn new(m: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&m) {
            return Err(Error::BadQubitCount { m, max: MAX_DIM });
        }
        let full = (1u64 << m) - 1;
        if x_mask & !full != 0 || z_mask & !full != 0 {
            return Err(Error::Precondition(format!(
                "masks {x_mask:#b}/{z_mask:#b} exceed {m} qubits"
            )));
        }
        Ok(Self {
            m: m as u8,
            x: x_mask,
            z: z_mask,
        })
    }

    /// Constructor for masks already known to fit in `m` bits.
    #[inline]
    pub(crate) fn from_masks(m: usize, x: u64, z: u64) -> Self {
        debug_assert!(x >> m == 0 && z >> m == 0);
        Self { m: m as u8, x, z }
    }

    pub fn identity(m: usize) -> Self {
        Self::from_masks(m, 0, 0)
    }

    /// `z_i`: Z on every position where `v_i` has a one.
    pub fn z_string(m: usize, i: u64) -> Self {
        Self::from_masks(m, 0, i)
    }

    /// `x_j`: X on every position where `v_j` has a one.
    pub fn x_string(m: usize, j: u64) -> Self {
        Self::from_masks(m, j, 0)
    }

    /// Parse `[IXYZ]{m}` with the leftmost character as position 0.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let len = text.chars().count();
        if len != m {
            return Err(Error::BadLength {
                found: len,
                expected: m,
            });
        }
        let p: PauliString = text.parse()?;
        Ok(p)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.m as usize
    }

    #[inline]
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of `Y` characters.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Number of non-identity characters.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Mask of non-identity positions.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// Integer label `x_mask · 2^m + z_mask`, a total order on strings.
    pub fn label(&self) -> u128 {
        (u128::from(self.x) << self.m) | u128::from(self.z)
    }

    /// Character at position `p`.
    pub fn char_at(&self, p: usize) -> char {
        let bit = self.m as usize - 1 - p;
        match ((self.x >> bit) & 1, (self.z >> bit) & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (0, 1) => 'Z',
            _ => 'Y',
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                left: self.m as usize,
                right: other.m as usize,
            });
        }
        Ok(())
    }

    /// Symplectic commutation test.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Qubit-wise commutation: at every position the characters agree or one is `I`.
    pub fn qwc_commutes(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.qwc_commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn qwc_commutes_unchecked(&self, other: &Self) -> bool {
        let both = self.support() & other.support();
        (self.x ^ other.x) & both == 0 && (self.z ^ other.z) & both == 0
    }

    /// `(i, j, y)` with `P = (-i)^y z_i x_j`.
    pub fn xz_decompose(&self) -> (u64, u64, u32) {
        (self.z, self.x, self.y_count())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let m = text.chars().count();
        if !(1..=MAX_DIM).contains(&m) {
            return Err(Error::BadLength {
                found: m,
                expected: m.clamp(1, MAX_DIM),
            });
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (p, c) in text.chars().enumerate() {
            let bit = 1u64 << (m - 1 - p);
            match c {
                'I' => {}
                'X' => x |= bit,
                'Z' => z |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                }
                other => {
                    return Err(Error::BadCharacter {
                        found: other,
                        position: p,
                    })
                }
            }
        }
        Ok(Self::from_masks(m, x, z))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.m as usize {
            write!(f, "{}", self.char_at(p))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

/// The operator `(-i)^phase_exp · z_{z_mask} · x_{x_mask}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhasedPauli {
    pub pauli: PauliString,
    /// Exponent of `-i`, mod 4, in the `z·x` ordering.
    pub phase_exp: u8,
}

impl PhasedPauli {
    pub fn new(pauli: PauliString, phase_exp: u8) -> Self {
        Self {
            pauli,
            phase_exp: phase_exp % 4,
        }
    }

    /// The Hermitian operator written by the string's characters.
    pub fn hermitian(pauli: PauliString) -> Self {
        Self::new(pauli, (pauli.y_count() % 4) as u8)
    }

    /// Exponent `k` such that this operator is `(-i)^k` times the Hermitian
    /// character string.
    pub fn string_phase(&self) -> u8 {
        (self.phase_exp + 4 - (self.pauli.y_count() % 4) as u8) % 4
    }

    pub fn is_hermitian(&self) -> bool {
        self.string_phase().is_multiple_of(2)
    }

    /// Product `self · other`, normalized back to `z·x` order.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.pauli.check_same(&other.pauli)?;
        // x_b z_c = (-1)^{|b & c|} z_c x_b
        let swaps = (self.pauli.x & other.pauli.z).count_ones() % 2;
        let phase = self.phase_exp as u32 + other.phase_exp as u32 + 2 * swaps;
        Ok(Self {
            pauli: PauliString::from_masks(
                self.pauli.num_qubits(),
                self.pauli.x ^ other.pauli.x,
                self.pauli.z ^ other.pauli.z,
            ),
            phase_exp: (phase % 4) as u8,
        })
    }
}

impl fmt::Debug for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "-i", "-", "+i"][self.string_phase() as usize];
        write!(f, "{prefix}{}", self.pauli)
    }
}

/// Every non-identity string on `m` qubits, ordered by label.
pub fn all_strings(m: usize) -> impl Iterator<Item = PauliString> {
    let n = 1u64 << m;
    (0..n)
        .flat_map(move |x| (0..n).map(move |z| PauliString::from_masks(m, x, z)))
        .filter(|p| !p.is_identity())
}
