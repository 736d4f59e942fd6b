//! The perfect partition of all `4^m - 1` non-identity Pauli strings into
//! `2^m + 1` commuting families, with constant-time family lookup.
//!
//! Family `0` holds the `z` strings, family `N = 2^m` the `x` strings, and
//! family `f` for `1 <= f < N` holds `z_i x_{P^f(i)}` where `v_{P^f(i)} = A^f v_i`.
//! The identity string is reported with the `z` family but is not a member.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{build_symmetric_generator, BitMatrix};
use crate::pauli::{PauliString, PhasedPauli};

/// Largest qubit count for which a [`Solution`] may be built.
pub const MAX_QUBITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyId(pub usize);

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
pub struct Solution {
    m: usize,
    generator: BitMatrix,
    /// Rows of `A^k` for `k = 1..N-1`, flattened: `powers[(k-1)*m .. k*m]`.
    powers: Vec<u64>,
    /// `q[k mod (N-1)] = Q(k) = P^k(1)`.
    q: Vec<u64>,
    /// `q_inv[Q(k)] = k` with `k` in `1..=N-1`; index 0 unused.
    q_inv: Vec<u32>,
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Solution")
            .field("m", &self.m)
            .field("generator", &self.generator)
            .finish_non_exhaustive()
    }
}

impl Solution {
    pub fn build(m: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&m) {
            return Err(Error::BadQubitCount { m, max: MAX_QUBITS });
        }
        let generator = build_symmetric_generator(m)?;
        let cycle = (1usize << m) - 1;

        let mut powers = Vec::with_capacity(cycle * m);
        let mut current = generator.clone();
        for k in 1..=cycle {
            powers.extend(current.rows().map(|r| r.index()));
            if k < cycle {
                current = current.mul(&generator)?;
            }
        }
        if !current.is_identity() {
            return Err(Error::Precondition(format!(
                "generator for m={m} does not have order 2^m - 1"
            )));
        }

        let mut q = vec![0u64; cycle];
        let mut q_inv = vec![0u32; cycle + 1];
        let mut v = 1u64;
        for k in 1..=cycle {
            v = generator.apply(v).index();
            q[k % cycle] = v;
            if q_inv[v as usize] != 0 {
                return Err(Error::Precondition(format!(
                    "generator for m={m} revisits v_{v} after {k} steps"
                )));
            }
            q_inv[v as usize] = k as u32;
        }

        Ok(Self {
            m,
            generator,
            powers,
            q,
            q_inv,
        })
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.m
    }

    /// `N = 2^m`.
    #[inline]
    pub fn n(&self) -> usize {
        1 << self.m
    }

    pub fn num_families(&self) -> usize {
        self.n() + 1
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn z_family(&self) -> FamilyId {
        FamilyId(0)
    }

    pub fn x_family(&self) -> FamilyId {
        FamilyId(self.n())
    }

    /// All family ids in `0..=N`.
    pub fn families(&self) -> impl Iterator<Item = FamilyId> {
        (0..=self.n()).map(FamilyId)
    }

    pub fn check_family(&self, f: FamilyId) -> Result<()> {
        if f.0 > self.n() {
            return Err(Error::BadFamilyId { id: f.0, max: self.n() });
        }
        Ok(())
    }

    /// `A^k` for `1 <= k <= N-1`, read from the cache.
    pub fn power(&self, k: usize) -> BitMatrix {
        assert!((1..self.n()).contains(&k), "power {k} out of range");
        let rows = self.powers[(k - 1) * self.m..k * self.m].to_vec();
        BitMatrix::from_row_words(self.m, rows)
    }

    /// The permutation table `Q(k)` for `k = 1..=N-1`.
    pub fn q_table(&self) -> Vec<u64> {
        let cycle = self.n() - 1;
        (1..=cycle).map(|k| self.q[k % cycle]).collect()
    }

    /// `Q^{-1}(i)` for `i = 1..=N-1`.
    pub fn q_inv_table(&self) -> Vec<u32> {
        self.q_inv[1..].to_vec()
    }

    /// `P^f(i)`: the `x` label paired with `z_i` in family `f`.
    #[inline]
    pub fn permute(&self, f: usize, i: u64) -> u64 {
        let cycle = self.n() - 1;
        let k = (self.q_inv[i as usize] as usize + f) % cycle;
        self.q[k]
    }

    /// Members of family `f` as Hermitian operators, ordered by `z` label.
    pub fn family_members(&self, f: FamilyId) -> Result<Vec<PhasedPauli>> {
        self.check_family(f)?;
        let n = self.n() as u64;
        let m = self.m;
        let members = (1..n).map(|i| {
            let pauli = match f.0 {
                0 => PauliString::z_string(m, i),
                id if id == self.n() => PauliString::x_string(m, i),
                id => PauliString::from_masks(m, self.permute(id, i), i),
            };
            PhasedPauli::hermitian(pauli)
        });
        Ok(members.collect())
    }

    /// Family containing `p`. The identity string is assigned to the `z` family.
    #[inline]
    pub fn lookup_family(&self, p: &PauliString) -> FamilyId {
        let (i, j, _) = p.xz_decompose();
        if j == 0 {
            return FamilyId(0);
        }
        if i == 0 {
            return FamilyId(self.n());
        }
        let cycle = self.n() - 1;
        let k = (self.q_inv[j as usize] as usize + cycle - self.q_inv[i as usize] as usize) % cycle;
        FamilyId(if k == 0 { cycle } else { k })
    }

    pub fn lookup(&self, p: &PauliString) -> Result<FamilyId> {
        if p.num_qubits() != self.m {
            return Err(Error::DimensionMismatch {
                left: self.m,
                right: p.num_qubits(),
            });
        }
        Ok(self.lookup_family(p))
    }

    /// Assign every string to its family; empty families are omitted and the
    /// result is ordered by family id. Identity strings are dropped.
    pub fn group_strings(&self, strings: &[PauliString]) -> Result<Vec<(FamilyId, Vec<PauliString>)>> {
        let mut buckets: Vec<Vec<PauliString>> = vec![Vec::new(); self.num_families()];
        for p in strings {
            if p.is_identity() {
                continue;
            }
            buckets[self.lookup(p)?.0].push(*p);
        }
        Ok(buckets
            .into_iter()
            .enumerate()
            .filter(|(_, b)| !b.is_empty())
            .map(|(id, b)| (FamilyId(id), b))
            .collect())
    }

    /// Group weighted terms by family, omitting empty families.
    pub fn group_operator(&self, terms: &[(f64, PauliString)]) -> Result<BTreeMap<FamilyId, Vec<(f64, PauliString)>>> {
        let mut groups: BTreeMap<FamilyId, Vec<(f64, PauliString)>> = BTreeMap::new();
        for &(coeff, p) in terms {
            if p.is_identity() {
                continue;
            }
            groups.entry(self.lookup(&p)?).or_default().push((coeff, p));
        }
        Ok(groups)
    }

    /// Approximate heap footprint of the lookup tables and cached powers.
    pub fn table_bytes(&self) -> u64 {
        (self.powers.len() * 8 + self.q.len() * 8 + self.q_inv.len() * 4) as u64
    }

    /// Header with the qubit count and the generating matrix.
    pub fn properties(&self) -> String {
        format!("Qubits: {}\nGenerating Matrix:\n{}", self.m, self.generator)
    }

    /// One comma-separated line per family: families `1..N-1`, then the `x`
    /// family, then the `z` family led by the identity.
    pub fn family_lines(&self) -> Vec<String> {
        let join = |members: Vec<PhasedPauli>| {
            members
                .iter()
                .map(|p| p.pauli.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut lines: Vec<String> = (1..self.n())
            .chain(std::iter::once(self.n()))
            .map(|f| join(self.family_members(FamilyId(f)).expect("valid id")))
            .collect();
        let z = join(self.family_members(FamilyId(0)).expect("valid id"));
        lines.push(format!("{},{z}", PauliString::identity(self.m)));
        lines
    }

    /// Properties, a blank line, then every family on its own line.
    pub fn report(&self) -> String {
        let mut out = self.properties();
        out.push_str("\n\n");
        for line in self.family_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// The family set `{ΔAΔᵀ, ΔA²Δᵀ, ...}` obtained by congruence with an
/// invertible `Δ`. It is no longer a cyclic group of powers, so lookups are
/// tabulated directly.
#[derive(Clone, Debug)]
pub struct ConjugatedSolution {
    m: usize,
    matrices: Vec<BitMatrix>,
    /// `table[(i, j)]` flattened as `i * N + j` → family index (1-based).
    table: Vec<u32>,
}

impl ConjugatedSolution {
    pub fn matrices(&self) -> &[BitMatrix] {
        &self.matrices
    }

    /// Family index `1..=N-1` of `z_i x_j` for nonzero `i`, `j`.
    pub fn lookup(&self, i: u64, j: u64) -> Option<usize> {
        let n = 1u64 << self.m;
        if i == 0 || j == 0 || i >= n || j >= n {
            return None;
        }
        match self.table[(i * n + j) as usize] {
            0 => None,
            k => Some(k as usize),
        }
    }
}

pub fn conjugate_solution(sol: &Solution, delta: &BitMatrix) -> Result<ConjugatedSolution> {
    if delta.dim() != sol.num_qubits() {
        return Err(Error::DimensionMismatch {
            left: sol.num_qubits(),
            right: delta.dim(),
        });
    }
    if !delta.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let delta_t = delta.transpose();
    let n = sol.n();
    let matrices = (1..n)
        .map(|k| delta.mul(&sol.power(k))?.mul(&delta_t))
        .collect::<Result<Vec<_>>>()?;
    let mut table = vec![0u32; n * n];
    for (idx, mat) in matrices.iter().enumerate() {
        for i in 1..n as u64 {
            let j = mat.apply(i).index();
            table[i as usize * n + j as usize] = idx as u32 + 1;
        }
    }
    Ok(ConjugatedSolution {
        m: sol.num_qubits(),
        matrices,
        table,
    })
}

/// Members `z_i x_{Mv_i}` for an arbitrary family matrix.
pub fn members_of_matrix(mat: &BitMatrix) -> Vec<PauliString> {
    let m = mat.dim();
    (1..1u64 << m)
        .map(|i| PauliString::from_masks(m, mat.apply(i).index(), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names(members: &[PhasedPauli]) -> Vec<String> {
        members.iter().map(|p| p.pauli.to_string()).collect()
    }

    #[test]
    fn two_qubit_report() {
        let sol = Solution::build(2).unwrap();
        let expected = "Qubits: 2\nGenerating Matrix:\n[1, 1]\n[1, 0]\n\n\
XZ,YX,ZY\nXY,ZX,YZ\nIY,YI,YY\nIX,XI,XX\nII,IZ,ZI,ZZ\n";
        assert_eq!(sol.report(), expected);
    }

    #[test]
    fn two_qubit_tables() {
        let sol = Solution::build(2).unwrap();
        assert_eq!(sol.q_table(), vec![2, 3, 1]);
        assert_eq!(sol.q_inv_table(), vec![3, 1, 2]);
    }

    #[test]
    fn one_qubit_has_three_families() {
        let sol = Solution::build(1).unwrap();
        assert_eq!(sol.num_families(), 3);
        let lines = sol.family_lines();
        assert_eq!(lines, vec!["Y", "X", "I,Z"]);
    }

    #[test]
    fn family_member_examples() {
        let sol = Solution::build(2).unwrap();
        assert_eq!(names(&sol.family_members(FamilyId(1)).unwrap()), ["XZ", "YX", "ZY"]);
        assert_eq!(names(&sol.family_members(FamilyId(0)).unwrap()), ["IZ", "ZI", "ZZ"]);
        assert_eq!(
            sol.family_members(FamilyId(5)),
            Err(Error::BadFamilyId { id: 5, max: 4 })
        );
        let sol3 = Solution::build(3).unwrap();
        for f in 1..8 {
            let members = sol3.family_members(FamilyId(f)).unwrap();
            assert_eq!(members.len(), 7);
            for a in &members {
                for b in &members {
                    assert!(a.pauli.commutes(&b.pauli).unwrap());
                }
            }
        }
    }

    #[test]
    fn lookup_examples() {
        let sol = Solution::build(2).unwrap();
        assert_eq!(sol.lookup(&"YX".parse().unwrap()).unwrap(), FamilyId(1));
        assert_eq!(sol.lookup(&"ZZ".parse().unwrap()).unwrap(), FamilyId(0));
        assert_eq!(sol.lookup(&"XI".parse().unwrap()).unwrap(), FamilyId(4));
        assert_eq!(sol.lookup(&"II".parse().unwrap()).unwrap(), FamilyId(0));
        assert!(sol.lookup(&"ZZZ".parse().unwrap()).is_err());
    }

    #[test]
    fn lookup_inverts_membership() {
        for m in 1..=6 {
            let sol = Solution::build(m).unwrap();
            for f in sol.families() {
                for member in sol.family_members(f).unwrap() {
                    assert_eq!(sol.lookup_family(&member.pauli), f, "m={m}");
                }
            }
        }
    }

    #[test]
    fn permutation_table_matches_matrix_powers() {
        for m in 1..=7 {
            let sol = Solution::build(m).unwrap();
            for f in 1..sol.n() {
                let power = sol.power(f);
                assert!(power.is_symmetric());
                for i in 1..sol.n() as u64 {
                    assert_eq!(sol.permute(f, i), power.apply(i).index());
                }
            }
        }
    }

    #[test]
    fn group_operator_examples() {
        let sol = Solution::build(3).unwrap();
        let dense: Vec<(f64, PauliString)> = crate::pauli::all_strings(3).map(|p| (1.0, p)).collect();
        let groups = sol.group_operator(&dense).unwrap();
        assert_eq!(groups.len(), 9);
        assert!(groups.values().all(|g| g.len() == 7));

        let single = sol.group_operator(&[(1.0, "ZZI".parse().unwrap())]).unwrap();
        assert_eq!(single.keys().copied().collect::<Vec<_>>(), vec![FamilyId(0)]);

        let xs: Vec<_> = (1..8u64).map(|j| (0.5, PauliString::x_string(3, j))).collect();
        let only_x = sol.group_operator(&xs).unwrap();
        assert_eq!(only_x.keys().copied().collect::<Vec<_>>(), vec![FamilyId(8)]);
    }

    #[test]
    fn identity_conjugation_is_noop() {
        let sol = Solution::build(3).unwrap();
        let conj = conjugate_solution(&sol, &BitMatrix::identity(3)).unwrap();
        for (k, mat) in conj.matrices().iter().enumerate() {
            assert_eq!(*mat, sol.power(k + 1));
        }
        assert_eq!(
            conjugate_solution(&sol, &BitMatrix::zeros(3)).unwrap_err(),
            Error::SingularMatrix
        );
    }

    proptest! {
        #[test]
        fn conjugated_solutions_stay_perfect(m in 1usize..=5, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let delta = loop {
                let rows: Vec<Vec<u8>> = (0..m)
                    .map(|_| (0..m).map(|_| rng.gen_range(0..2)).collect())
                    .collect();
                let d = BitMatrix::from_rows(&rows).unwrap();
                if d.is_invertible() {
                    break d;
                }
            };
            let sol = Solution::build(m).unwrap();
            let conj = conjugate_solution(&sol, &delta).unwrap();
            let mats = conj.matrices();
            for a in mats {
                prop_assert!(a.is_symmetric());
            }
            for (x, a) in mats.iter().enumerate() {
                for b in &mats[x + 1..] {
                    prop_assert!(a.add(b).unwrap().is_invertible());
                }
            }
            // Each z_i x_j with nonzero labels falls in exactly one family.
            let n = 1u64 << m;
            for i in 1..n {
                for j in 1..n {
                    prop_assert!(conj.lookup(i, j).is_some());
                }
            }
        }
    }
}
