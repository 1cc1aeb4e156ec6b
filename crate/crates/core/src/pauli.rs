//! Phase-tracked Pauli operators `i^s X^x Z^z`.
//!
//! All product signs come from the single reordering rule
//! `Z^z X^x = (-1)^{z·x} X^x Z^z`; phases are integers mod 4 throughout.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dense::DenseOperator;
use crate::error::{capability, invalid, Result};
use crate::phase_space::{PhasePoint, PhaseSpace, Striation};
use crate::tuple::NTuple;

/// Largest qubit count for which dense matrices are built.
pub const DENSE_MAX_QUBITS: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliElement {
    n: u32,
    phase: u8,
    x: NTuple,
    z: NTuple,
}

impl PauliElement {
    pub fn new(n: u32, phase: u8, x: NTuple, z: NTuple) -> PauliElement {
        debug_assert!(x.0 >> n == 0 && z.0 >> n == 0);
        PauliElement { n, phase: phase & 3, x, z }
    }

    pub fn identity(n: u32) -> PauliElement {
        PauliElement::new(n, 0, NTuple::ZERO, NTuple::ZERO)
    }

    /// Single-qubit `X`, `Y` or `Z` on qubit `j` (1-based).
    pub fn single(n: u32, kind: PauliKind, j: usize) -> PauliElement {
        let e = NTuple::unit(j, n);
        match kind {
            PauliKind::X => PauliElement::new(n, 0, e, NTuple::ZERO),
            PauliKind::Y => PauliElement::new(n, 1, e, e),
            PauliKind::Z => PauliElement::new(n, 0, NTuple::ZERO, e),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Exponent `s` of the prefactor `i^s`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x(&self) -> NTuple {
        self.x
    }

    pub fn z(&self) -> NTuple {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.x.is_zero() && self.z.is_zero()
    }

    /// Multiply by `i^k`.
    pub fn times_i_pow(self, k: u8) -> PauliElement {
        PauliElement { phase: (self.phase + k) & 3, ..self }
    }

    /// Operator product `self · rhs`.
    pub fn mul(&self, rhs: &PauliElement) -> PauliElement {
        debug_assert_eq!(self.n, rhs.n);
        let swap = 2 * (self.z.dot(rhs.x) & 1) as u8;
        PauliElement {
            n: self.n,
            phase: (self.phase + rhs.phase + swap) & 3,
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
        }
    }

    pub fn commutes_with(&self, other: &PauliElement) -> bool {
        symplectic_product(self.x, self.z, other.x, other.z) == 0
    }

    /// Hermitian elements are exactly those squaring to `+I`.
    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + self.x.dot(self.z)) & 1 == 0
    }

    /// Exponent `r` with `self = i^r T(x, z)` where `T` is the canonical
    /// translation operator.
    pub fn phase_relative_to_canonical(&self) -> u8 {
        (self.phase + 4 - canonical_phase(self.x, self.z)) & 3
    }

    /// Dense matrix, qubit 1 being the most significant index bit.
    pub fn dense_matrix(&self) -> Result<DenseOperator> {
        if self.n > DENSE_MAX_QUBITS {
            return Err(capability(format!(
                "dense matrices are limited to n <= {DENSE_MAX_QUBITS}, got n = {}",
                self.n
            )));
        }
        let d = 1usize << self.n;
        let mut m = DenseOperator::zeros(d);
        for k in 0..d {
            let row = k ^ self.x.0 as usize;
            m.set(row, k, self.column_entry(k));
        }
        Ok(m)
    }

    /// The nonzero entry of column `k`, located at row `k ⊕ x`.
    pub fn column_entry(&self, k: usize) -> Complex64 {
        let sign = 2 * ((self.z.0 as usize & k).count_ones() & 1) as u8;
        i_pow(self.phase + sign)
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, psi: &[Complex64]) -> Complex64 {
        let x = self.x.0 as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, amp) in psi.iter().enumerate() {
            acc += psi[k ^ x].conj() * self.column_entry(k) * amp;
        }
        acc
    }

    /// `P|ψ⟩`.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let x = self.x.0 as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (k, amp) in psi.iter().enumerate() {
            out[k ^ x] = self.column_entry(k) * amp;
        }
        out
    }

    /// `P · op · P†`.
    pub fn conjugate(&self, op: &DenseOperator) -> DenseOperator {
        let d = op.dim();
        let x = self.x.0 as usize;
        let mut out = DenseOperator::zeros(d);
        for r in 0..d {
            let left = self.column_entry(r ^ x);
            for c in 0..d {
                let right = self.column_entry(c ^ x).conj();
                out.set(r, c, left * op.get(r ^ x, c ^ x) * right);
            }
        }
        out
    }

    /// `Tr(ρ P)` for a dense density operator.
    pub fn trace_with(&self, rho: &DenseOperator) -> Complex64 {
        let x = self.x.0 as usize;
        (0..rho.dim())
            .map(|k| self.column_entry(k) * rho.get(k, k ^ x))
            .sum()
    }
}

impl fmt::Display for PauliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for j in 1..=self.n as usize {
            let c = match (self.x.component(j, self.n), self.z.component(j, self.n)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'W', // X·Z, i.e. -iY
                (false, true) => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliKind {
    X,
    Y,
    Z,
}

pub fn i_pow(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn canonical_phase(q: NTuple, p: NTuple) -> u8 {
    (q.dot(p) & 3) as u8
}

/// Canonical translation operator `T(q̄, p̄) = i^{q̄·p̄} X^q̄ Z^p̄`.
pub fn translation_op(n: u32, q: NTuple, p: NTuple) -> PauliElement {
    PauliElement::new(n, canonical_phase(q, p), q, p)
}

/// `α ∧ β = q̄_α·p̄_β + q̄_β·p̄_α (mod 2)`. The commutator sign of `T(α)`,
/// `T(β)` is `(-1)^(α∧β)`.
pub fn symplectic_product(qa: NTuple, pa: NTuple, qb: NTuple, pb: NTuple) -> u32 {
    (qa.dot(pb) + qb.dot(pa)) & 1
}

/// A set of `2n` Paulis `X'_j`, `Z'_j` with the commutation pattern of the
/// single-qubit `X_(j)`, `Z_(j)`, used to realize phase-space translations
/// `T'(q̄,p̄) = i^{q̄·p̄} X'^q̄ Z'^p̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationBasis {
    n: u32,
    x_gens: Vec<PauliElement>,
    z_gens: Vec<PauliElement>,
    standard: bool,
}

impl TranslationBasis {
    pub fn standard(n: u32) -> TranslationBasis {
        TranslationBasis {
            n,
            x_gens: (1..=n as usize).map(|j| PauliElement::single(n, PauliKind::X, j)).collect(),
            z_gens: (1..=n as usize).map(|j| PauliElement::single(n, PauliKind::Z, j)).collect(),
            standard: true,
        }
    }

    pub fn new(x_gens: Vec<PauliElement>, z_gens: Vec<PauliElement>) -> Result<TranslationBasis> {
        let n = x_gens.len();
        if n == 0 || z_gens.len() != n {
            return Err(invalid("a translation basis needs n X-type and n Z-type generators"));
        }
        if x_gens.iter().chain(&z_gens).any(|g| g.n() as usize != n) {
            return Err(invalid("generators must act on exactly n qubits"));
        }
        if let Some(g) = x_gens.iter().chain(&z_gens).find(|g| !g.is_hermitian()) {
            return Err(invalid(format!("generator {g} is not Hermitian")));
        }
        for j in 0..n {
            for k in 0..n {
                let anticommute = !x_gens[j].commutes_with(&z_gens[k]);
                if anticommute != (j == k)
                    || !x_gens[j].commutes_with(&x_gens[k])
                    || !z_gens[j].commutes_with(&z_gens[k])
                {
                    return Err(invalid(format!(
                        "generators {j},{k} break the canonical commutation pattern"
                    )));
                }
            }
        }
        let standard = TranslationBasis::standard(n as u32);
        let is_standard = x_gens == standard.x_gens && z_gens == standard.z_gens;
        Ok(TranslationBasis { n: n as u32, x_gens, z_gens, standard: is_standard })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn x_gens(&self) -> &[PauliElement] {
        &self.x_gens
    }

    pub fn z_gens(&self) -> &[PauliElement] {
        &self.z_gens
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    /// Physical Pauli realizing `T'(q̄, p̄)`.
    pub fn translation(&self, q: NTuple, p: NTuple) -> PauliElement {
        if self.standard {
            return translation_op(self.n, q, p);
        }
        let n = self.n;
        let mut acc = PauliElement::identity(n);
        for j in 1..=n as usize {
            if q.component(j, n) {
                acc = acc.mul(&self.x_gens[j - 1]);
            }
        }
        for j in 1..=n as usize {
            if p.component(j, n) {
                acc = acc.mul(&self.z_gens[j - 1]);
            }
        }
        acc.times_i_pow(canonical_phase(q, p))
    }

    /// Decompose a physical Pauli as `i^r T'(q̄, p̄)`, returning `(q̄, p̄, r)`.
    pub fn coordinates_of(&self, pauli: &PauliElement) -> (NTuple, NTuple, u8) {
        let n = self.n;
        let mut q = NTuple::ZERO;
        let mut p = NTuple::ZERO;
        for j in 1..=n as usize {
            if !pauli.commutes_with(&self.z_gens[j - 1]) {
                q ^= NTuple::unit(j, n);
            }
            if !pauli.commutes_with(&self.x_gens[j - 1]) {
                p ^= NTuple::unit(j, n);
            }
        }
        let t = self.translation(q, p);
        debug_assert_eq!((t.x(), t.z()), (pauli.x(), pauli.z()));
        (q, p, (pauli.phase() + 4 - t.phase()) & 3)
    }
}

/// The abelian group of translations along one ray.
#[derive(Clone, Debug)]
pub struct RaySubgroup {
    pub striation: Striation,
    /// The `n` designated generators.
    pub generators: Vec<(PhasePoint, PauliElement)>,
    /// All `d` elements (identity first), in ray-parameter power order.
    pub elements: Vec<(PhasePoint, PauliElement)>,
}

pub fn ray_subgroup(space: &PhaseSpace, s: Striation) -> RaySubgroup {
    let n = space.n();
    let op = |a: PhasePoint| {
        let (q, p) = space.tuples_of(a);
        (a, translation_op(n, q, p))
    };
    let generators = space.ray_generators(s).into_iter().map(op).collect();
    let elements = space
        .field()
        .elements()
        .map(|t| op(space.ray_point(s, t)))
        .collect();
    RaySubgroup { striation: s, generators, elements }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u32, q: &str, p: &str) -> PauliElement {
        translation_op(n, NTuple::parse(q, n).unwrap(), NTuple::parse(p, n).unwrap())
    }

    fn kron(a: &DenseOperator, b: &DenseOperator) -> DenseOperator {
        let (da, db) = (a.dim(), b.dim());
        let mut out = DenseOperator::zeros(da * db);
        for i in 0..da {
            for j in 0..da {
                for k in 0..db {
                    for l in 0..db {
                        out.set(i * db + k, j * db + l, a.get(i, j) * b.get(k, l));
                    }
                }
            }
        }
        out
    }

    fn pauli_y() -> DenseOperator {
        let c = Complex64::new;
        DenseOperator::from_vec(2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
    }

    #[test]
    fn translation_examples() {
        assert!(t(2, "00", "00").is_identity());
        let y = t(1, "1", "1");
        assert_eq!(y.phase(), 1);
        assert_eq!(y.dense_matrix().unwrap(), pauli_y());
        let yy = t(2, "11", "11");
        assert_eq!(yy.phase(), 2);
        assert_eq!(yy.dense_matrix().unwrap(), kron(&pauli_y(), &pauli_y()));
        let x = t(1, "1", "0").dense_matrix().unwrap();
        assert_eq!(x.get(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(x.get(1, 0), Complex64::new(1.0, 0.0));
        assert_eq!(PauliElement::identity(3).dense_matrix().unwrap(), DenseOperator::identity(8));
    }

    #[test]
    fn product_examples() {
        // T(10,01)·T(01,11) = -T(11,10)
        let prod = t(2, "10", "01").mul(&t(2, "01", "11"));
        assert_eq!(prod, t(2, "11", "10").times_i_pow(2));
        // T(10,10)·T(01,01) = T(11,11)
        assert_eq!(t(2, "10", "10").mul(&t(2, "01", "01")), t(2, "11", "11"));
        // T(10,11)·T(01,10) = -T(11,01)
        assert_eq!(t(2, "10", "11").mul(&t(2, "01", "10")), t(2, "11", "01").times_i_pow(2));
        for q in 0..4 {
            for p in 0..4 {
                let a = translation_op(2, NTuple(q), NTuple(p));
                assert!(a.mul(&a).is_identity());
                assert!(a.is_hermitian());
            }
        }
    }

    #[test]
    fn symplectic_examples() {
        let a = (NTuple(0b10), NTuple(0b01));
        assert_eq!(symplectic_product(a.0, a.1, a.0, a.1), 0);
        assert_eq!(symplectic_product(NTuple(1), NTuple(0), NTuple(0), NTuple(1)), 1);
        let b = (NTuple(0b01), NTuple(0b10));
        assert_eq!(symplectic_product(a.0, a.1, b.0, b.1), 0);
        // dense commutator oracle
        let ma = t(2, "10", "01").dense_matrix().unwrap();
        let mb = t(2, "01", "10").dense_matrix().unwrap();
        assert!((&ma * &mb).max_abs_diff(&(&mb * &ma)) < 1e-15);
    }

    #[test]
    fn group_law_and_hermiticity_dense() {
        for n in 1..=3u32 {
            let d = 1u32 << n;
            let all: Vec<PauliElement> = (0..d * d)
                .map(|i| translation_op(n, NTuple(i / d), NTuple(i % d)))
                .collect();
            let dense: Vec<DenseOperator> = all.iter().map(|a| a.dense_matrix().unwrap()).collect();
            for (a, ma) in all.iter().zip(&dense) {
                assert_eq!(ma, &ma.adjoint());
                for (b, mb) in all.iter().zip(&dense) {
                    let prod = a.mul(b);
                    assert_eq!(prod.dense_matrix().unwrap(), ma * mb);
                    // projective representation: product is a phase times T(α+β)
                    let target = translation_op(n, a.x() ^ b.x(), a.z() ^ b.z());
                    assert_eq!((prod.x(), prod.z()), (target.x(), target.z()));
                    assert_eq!(a.commutes_with(b), (ma * mb).max_abs_diff(&(mb * ma)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn dense_capability_limit() {
        let big = PauliElement::identity(7);
        assert!(matches!(big.dense_matrix(), Err(crate::Error::Capability(_))));
    }

    #[test]
    fn ray_subgroup_examples() {
        let space = PhaseSpace::standard(2).unwrap();
        let v = ray_subgroup(&space, Striation::Vertical);
        let mut zs: Vec<u32> = v.elements.iter().map(|(_, e)| e.z().0).collect();
        zs.sort();
        assert_eq!(zs, vec![0, 1, 2, 3]);
        assert!(v.elements.iter().all(|(_, e)| e.x().is_zero() && e.phase() == 0));
        let h = ray_subgroup(&space, Striation::Horizontal);
        assert!(h.elements.iter().all(|(_, e)| e.z().is_zero()));
        let o = ray_subgroup(&space, Striation::Oblique(0));
        assert_eq!(o.elements.len(), 4);
        assert_eq!(o.generators.len(), 2);
        for (_, a) in &o.elements {
            for (_, b) in &o.elements {
                assert_eq!(symplectic_product(a.x(), a.z(), b.x(), b.z()), 0);
            }
        }
    }

    #[test]
    fn rays_partition_the_pauli_group() {
        for n in 1..=5 {
            let space = PhaseSpace::standard(n).unwrap();
            let d = space.d();
            let mut seen = vec![0u8; d * d];
            for s in space.striations() {
                let g = ray_subgroup(&space, s);
                assert_eq!(g.elements.len(), d);
                assert!(g.elements[0].1.is_identity());
                for (_, a) in &g.elements {
                    seen[((a.x().0 as usize) << n) | a.z().0 as usize] += 1;
                    for (_, b) in &g.elements {
                        assert!(a.commutes_with(b), "n={n} {s}: {a} vs {b}");
                        let c = a.mul(b);
                        // closed up to sign
                        assert!(g.elements.iter().any(|(_, e)| e.x() == c.x() && e.z() == c.z()));
                        assert_eq!(c.phase_relative_to_canonical() & 1, 0);
                    }
                }
            }
            assert_eq!(seen[0] as usize, d + 1);
            assert!(seen[1..].iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn standard_basis_decomposition() {
        let basis = TranslationBasis::standard(3);
        let y2 = PauliElement::single(3, PauliKind::Y, 2);
        let (q, p, r) = basis.coordinates_of(&y2);
        assert_eq!((q, p, r), (NTuple(0b010), NTuple(0b010), 0));
        let minus = y2.times_i_pow(2);
        assert_eq!(basis.coordinates_of(&minus).2, 2);
    }

    #[test]
    fn basis_rejects_bad_pattern() {
        let n = 2;
        let x = vec![PauliElement::single(n, PauliKind::X, 1), PauliElement::single(n, PauliKind::X, 2)];
        let z = vec![PauliElement::single(n, PauliKind::Z, 2), PauliElement::single(n, PauliKind::Z, 1)];
        assert!(TranslationBasis::new(x.clone(), z).is_err());
        let z_ok = vec![PauliElement::single(n, PauliKind::Z, 1), PauliElement::single(n, PauliKind::Z, 2)];
        let b = TranslationBasis::new(x, z_ok).unwrap();
        assert!(b.is_standard());
    }
}
