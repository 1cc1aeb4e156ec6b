//! Arithmetic in GF(2^n) and the matrix representation used to attach binary
//! n-tuples to phase-space coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::tuple::NTuple;

pub const MAX_QUBITS: u32 = 12;

/// Default primitive polynomials as bit masks, indexed by `n` (bit `i` is the
/// coefficient of `x^i`).
const DEFAULT_POLYS: [u32; 13] = [
    0,
    0b11,                 // x + 1
    0b111,                // x^2 + x + 1
    0b1011,               // x^3 + x + 1
    0b1_0011,             // x^4 + x + 1
    0b10_0101,            // x^5 + x^2 + 1
    0b100_0011,           // x^6 + x + 1
    0b1000_0011,          // x^7 + x + 1
    0b1_0001_1101,        // x^8 + x^4 + x^3 + x^2 + 1
    0b10_0001_0001,       // x^9 + x^4 + 1
    0b100_0000_1001,      // x^10 + x^3 + 1
    0b1000_0000_0101,     // x^11 + x^2 + 1
    0b1_0000_0101_0011,   // x^12 + x^6 + x^4 + x + 1
];

/// An element of GF(2^n) in the polynomial basis: bit `i` is the coefficient
/// of `x^i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// GF(2^n) described by its primitive polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    n: u32,
    poly: u32,
}

impl FieldSpec {
    /// Build a field from `poly`, checking that it has degree `n` and that
    /// `x` generates the multiplicative group.
    pub fn new(n: u32, poly: u32) -> Result<FieldSpec> {
        if n == 0 || n > MAX_QUBITS {
            return Err(invalid(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
        }
        if poly >> n != 1 {
            return Err(invalid(format!("polynomial {poly:#b} does not have degree {n}")));
        }
        let spec = FieldSpec { n, poly };
        if !spec.is_primitive() {
            return Err(invalid(format!("polynomial {poly:#b} is not primitive over F_2")));
        }
        Ok(spec)
    }

    pub fn default_for(n: u32) -> Result<FieldSpec> {
        if n == 0 || n > MAX_QUBITS {
            return Err(invalid(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
        }
        FieldSpec::new(n, DEFAULT_POLYS[n as usize])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> usize {
        1 << self.n
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// The element `x mod poly`. For `n = 1` this is `1`.
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.reduce_once(0b10))
    }

    fn reduce_once(&self, v: u32) -> u32 {
        if v >> self.n & 1 == 1 {
            v ^ self.poly
        } else {
            v
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    /// Shift-and-reduce multiplication.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let mut acc = 0u32;
        let mut a = a.0;
        let mut b = b.0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a = self.reduce_once(a << 1);
        }
        FieldElement(acc)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(d-2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::Domain("zero has no multiplicative inverse".into()));
        }
        Ok(self.pow(a, self.d() as u64 - 2))
    }

    fn is_primitive(&self) -> bool {
        let order = self.d() as u64 - 1;
        let g = self.generator();
        if self.pow(g, order) != FieldElement::ONE {
            return false;
        }
        let mut prime_factors = Vec::new();
        let mut rest = order;
        let mut r = 2;
        while r * r <= rest {
            if rest.is_multiple_of(r) {
                prime_factors.push(r);
                while rest.is_multiple_of(r) {
                    rest /= r;
                }
            }
            r += 1;
        }
        if rest > 1 {
            prime_factors.push(rest);
        }
        prime_factors
            .iter()
            .all(|&r| self.pow(g, order / r) != FieldElement::ONE)
    }
}

/// A field with precomputed exponent/logarithm tables.
///
/// Elements are enumerated in "power order": index 0 is the zero element and
/// index `j + 1` is `ω^j` for `j = 0..d-2`.
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    exp: Vec<FieldElement>,
    log: Vec<u32>,
}

impl Field {
    pub fn new(spec: FieldSpec) -> Field {
        let d = spec.d();
        let mut exp = Vec::with_capacity(d - 1);
        let mut log = vec![u32::MAX; d];
        let g = spec.generator();
        let mut x = FieldElement::ONE;
        for j in 0..d - 1 {
            exp.push(x);
            log[x.0 as usize] = j as u32;
            x = spec.mul(x, g);
        }
        Field { spec, exp, log }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    pub fn d(&self) -> usize {
        self.spec.d()
    }

    /// `ω^j`, exponent taken modulo `d - 1`.
    pub fn omega_pow(&self, j: i64) -> FieldElement {
        let order = (self.d() - 1) as i64;
        self.exp[j.rem_euclid(order) as usize]
    }

    /// Discrete logarithm base `ω`; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(self.log[a.0 as usize])
        }
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        self.exp[s % (self.d() - 1)]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        match self.log(a) {
            None => Err(Error::Domain("zero has no multiplicative inverse".into())),
            Some(l) => Ok(self.omega_pow(-(l as i64))),
        }
    }

    /// Element at position `idx` of the power order.
    pub fn element_at(&self, idx: usize) -> FieldElement {
        if idx == 0 {
            FieldElement::ZERO
        } else {
            self.exp[idx - 1]
        }
    }

    /// Position of `a` in the power order.
    pub fn index_of(&self, a: FieldElement) -> usize {
        match self.log(a) {
            None => 0,
            Some(l) => l as usize + 1,
        }
    }

    /// All elements in power order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.d()).map(move |i| self.element_at(i))
    }
}

/// Square bit matrix acting on row vectors; `rows[i]` bit `j` is entry `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    n: u32,
    rows: Vec<u32>,
}

impl BinaryMatrix {
    pub fn identity(n: u32) -> BinaryMatrix {
        BinaryMatrix { n, rows: (0..n).map(|i| 1 << i).collect() }
    }

    pub fn from_rows(n: u32, rows: Vec<u32>) -> BinaryMatrix {
        assert_eq!(rows.len(), n as usize);
        BinaryMatrix { n, rows }
    }

    /// Matrix of multiplication by `ω` in the polynomial basis: row `i` holds
    /// the coefficients of `ω · x^i`.
    pub fn companion(spec: &FieldSpec) -> BinaryMatrix {
        let g = spec.generator();
        let rows = (0..spec.n())
            .map(|i| spec.mul(FieldElement(1 << i), g).0)
            .collect();
        BinaryMatrix { n: spec.n(), rows }
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// Row vector times matrix; `v` bit `i` is component `i`.
    pub fn apply_row(&self, v: u32) -> u32 {
        let mut out = 0;
        let mut v = v;
        let mut i = 0;
        while v != 0 {
            if v & 1 == 1 {
                out ^= self.rows[i];
            }
            v >>= 1;
            i += 1;
        }
        out
    }

    pub fn mul(&self, other: &BinaryMatrix) -> BinaryMatrix {
        BinaryMatrix {
            n: self.n,
            rows: self.rows.iter().map(|&r| other.apply_row(r)).collect(),
        }
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let n = self.n as usize;
        let rows = (0..n)
            .map(|j| {
                (0..n).fold(0, |acc, i| acc | ((self.rows[i] >> j & 1) << i))
            })
            .collect();
        BinaryMatrix { n: self.n, rows }
    }

    pub fn pow(&self, mut e: u64) -> BinaryMatrix {
        let mut acc = BinaryMatrix::identity(self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// Rank over F_2 of a set of row vectors.
pub fn rank_f2(vectors: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Assignment of n-tuples to field elements: `ω^j ↦ q0·M^j` on the position
/// side and `ω^j ↦ p0·Mᵀ^j` on the momentum side, with zero fixed to zero.
#[derive(Clone, Debug)]
pub struct CoordinateMap {
    n: u32,
    q0: NTuple,
    p0: NTuple,
    q_of: Vec<NTuple>,
    p_of: Vec<NTuple>,
    q_inv: Vec<FieldElement>,
    p_inv: Vec<FieldElement>,
}

impl CoordinateMap {
    pub fn new(field: &Field, q0: NTuple, p0: NTuple) -> Result<CoordinateMap> {
        let n = field.n();
        let d = field.d();
        if q0.is_zero() || p0.is_zero() {
            return Err(invalid("base tuples q0 and p0 must be nonzero"));
        }
        if q0.0 >> n != 0 || p0.0 >> n != 0 {
            return Err(invalid(format!("base tuples must have {n} components")));
        }
        let m = BinaryMatrix::companion(field.spec());
        let mt = m.transpose();
        let mut q_of = vec![NTuple::ZERO; d];
        let mut p_of = vec![NTuple::ZERO; d];
        let mut qv = q0.to_component_mask(n);
        let mut pv = p0.to_component_mask(n);
        for j in 0..d - 1 {
            let x = field.omega_pow(j as i64);
            q_of[x.0 as usize] = NTuple::from_component_mask(qv, n);
            p_of[x.0 as usize] = NTuple::from_component_mask(pv, n);
            qv = m.apply_row(qv);
            pv = mt.apply_row(pv);
        }
        let mut q_inv = vec![FieldElement(u32::MAX); d];
        let mut p_inv = vec![FieldElement(u32::MAX); d];
        for x in 0..d {
            q_inv[q_of[x].0 as usize] = FieldElement(x as u32);
            p_inv[p_of[x].0 as usize] = FieldElement(x as u32);
        }
        debug_assert!(q_inv.iter().chain(&p_inv).all(|e| e.0 != u32::MAX));
        Ok(CoordinateMap { n, q0, p0, q_of, p_of, q_inv, p_inv })
    }

    /// Map with `q0 = p0 = (1,0,…,0)`.
    pub fn standard(field: &Field) -> CoordinateMap {
        let e1 = NTuple::unit(1, field.n());
        CoordinateMap::new(field, e1, e1).expect("unit base tuple is valid")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q0(&self) -> NTuple {
        self.q0
    }

    pub fn p0(&self) -> NTuple {
        self.p0
    }

    pub fn q_tuple(&self, q: FieldElement) -> NTuple {
        self.q_of[q.0 as usize]
    }

    pub fn p_tuple(&self, p: FieldElement) -> NTuple {
        self.p_of[p.0 as usize]
    }

    pub fn q_element(&self, t: NTuple) -> FieldElement {
        self.q_inv[t.0 as usize]
    }

    pub fn p_element(&self, t: NTuple) -> FieldElement {
        self.p_inv[t.0 as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(n: u32) -> FieldSpec {
        FieldSpec::default_for(n).unwrap()
    }

    /// Carry-less product followed by long division; independent of `mul`.
    fn clmul_reduce(a: u32, b: u32, poly: u32, n: u32) -> u32 {
        let mut prod: u64 = 0;
        for i in 0..32 {
            if b >> i & 1 == 1 {
                prod ^= (a as u64) << i;
            }
        }
        for bit in (n as u64..64).rev() {
            if prod >> bit & 1 == 1 {
                prod ^= (poly as u64) << (bit - n as u64);
            }
        }
        prod as u32
    }

    #[test]
    fn addition_examples() {
        let f = gf(2);
        let w = f.generator();
        assert_eq!(f.add(FieldElement::ZERO, w), w);
        assert_eq!(f.add(w, w), FieldElement::ZERO);
        assert_eq!(f.add(w, FieldElement::ONE), FieldElement(0b11));
        assert_eq!(f.add(w, FieldElement::ONE), f.mul(w, w));
    }

    #[test]
    fn multiplication_examples() {
        let f4 = gf(2);
        let w = f4.generator();
        assert_eq!(f4.mul(FieldElement::ONE, w), w);
        assert_eq!(f4.mul(w, w), FieldElement(0b11));

        let f8 = gf(3);
        let w = f8.generator();
        let w2 = f8.mul(w, w);
        let w4 = f8.mul(w2, w2);
        // ω^4 = ω^2 + ω under x^3 + x + 1
        assert_eq!(w4, FieldElement(0b110));
        assert_eq!(w4.0, clmul_reduce(w2.0, w2.0, 0b1011, 3));
    }

    #[test]
    fn inverse_examples() {
        let f4 = gf(2);
        let w = f4.generator();
        assert_eq!(f4.inv(FieldElement::ONE).unwrap(), FieldElement::ONE);
        assert_eq!(f4.inv(w).unwrap(), f4.mul(w, w));
        assert!(matches!(f4.inv(FieldElement::ZERO), Err(Error::Domain(_))));

        let f8 = gf(3);
        let w = f8.generator();
        let w3 = f8.pow(w, 3);
        // exhaustive oracle
        let found: Vec<u32> = (1..8).filter(|&b| clmul_reduce(w3.0, b, 0b1011, 3) == 1).collect();
        assert_eq!(found, vec![f8.pow(w, 4).0]);
        assert_eq!(f8.inv(w3).unwrap(), f8.pow(w, 4));
    }

    #[test]
    fn mul_matches_clmul_oracle() {
        for n in 1..=8 {
            let f = gf(n);
            let d = f.d() as u32;
            for a in 0..d {
                for b in (0..d).step_by(1 + (d as usize / 16)) {
                    assert_eq!(f.mul(FieldElement(a), FieldElement(b)).0, clmul_reduce(a, b, f.poly(), n));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for n in 1..=5 {
            let f = gf(n);
            let d = f.d() as u32;
            for a in 0..d {
                let a = FieldElement(a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for b in 0..d {
                    let b = FieldElement(b);
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..d {
                        let c = FieldElement(c);
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn default_polynomials_are_primitive() {
        for n in 1..=MAX_QUBITS {
            let f = gf(n);
            let g = f.generator();
            let order = f.d() as u64 - 1;
            assert_eq!(f.pow(g, order), FieldElement::ONE);
            let mut x = FieldElement::ONE;
            for k in 1..order {
                x = f.mul(x, g);
                assert_ne!(x, FieldElement::ONE, "n={n}: ω^{k} = 1");
            }
        }
    }

    #[test]
    fn rejects_bad_polynomials() {
        // x^2 + 1 = (x+1)^2 is reducible
        assert!(FieldSpec::new(2, 0b101).is_err());
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5
        assert!(FieldSpec::new(4, 0b11111).is_err());
        assert!(FieldSpec::new(3, 0b111).is_err());
        assert!(FieldSpec::default_for(13).is_err());
        assert!(FieldSpec::new(0, 1).is_err());
    }

    #[test]
    fn companion_matrix_cycles() {
        for n in 1..=MAX_QUBITS {
            let spec = gf(n);
            let m = BinaryMatrix::companion(&spec);
            let order = spec.d() as u64 - 1;
            assert_eq!(m.pow(order), BinaryMatrix::identity(n));
            let mut seen = std::collections::HashSet::new();
            let v0 = 1u32;
            let mut v = v0;
            for _ in 0..order {
                assert!(seen.insert(v));
                v = m.apply_row(v);
            }
            assert_eq!(v, v0);
        }
    }

    #[test]
    fn two_qubit_coordinates() {
        let field = Field::new(gf(2));
        let m = BinaryMatrix::companion(field.spec());
        // multiplication by ω in the basis {1, ω}: 1 ↦ ω, ω ↦ ω + 1
        assert_eq!(m, BinaryMatrix::from_rows(2, vec![0b10, 0b11]));
        assert_eq!(m, m.transpose());
        let cmap = CoordinateMap::standard(&field);
        let w = field.omega_pow(1);
        let w2 = field.omega_pow(2);
        assert_eq!(cmap.q_tuple(FieldElement::ONE).display(2).to_string(), "10");
        assert_eq!(cmap.q_tuple(w).display(2).to_string(), "01");
        assert_eq!(cmap.q_tuple(w2).display(2).to_string(), "11");
        assert_eq!(cmap.q_tuple(FieldElement::ZERO), NTuple::ZERO);
        for x in field.elements() {
            assert_eq!(cmap.q_tuple(x), cmap.p_tuple(x));
        }
    }

    #[test]
    fn three_qubit_generator_tuples_independent() {
        let field = Field::new(gf(3));
        let cmap = CoordinateMap::standard(&field);
        let tuples: Vec<u32> = (0..3).map(|j| cmap.q_tuple(field.omega_pow(j)).0).collect();
        assert_eq!(rank_f2(&tuples), 3);
    }

    #[test]
    fn coordinate_maps_are_bijections() {
        for n in 1..=MAX_QUBITS {
            let field = Field::new(gf(n));
            let cmap = CoordinateMap::standard(&field);
            let d = field.d();
            let mut qs = vec![false; d];
            let mut ps = vec![false; d];
            for x in field.elements() {
                let q = cmap.q_tuple(x);
                let p = cmap.p_tuple(x);
                assert!(!std::mem::replace(&mut qs[q.0 as usize], true));
                assert!(!std::mem::replace(&mut ps[p.0 as usize], true));
                assert_eq!(cmap.q_element(q), x);
                assert_eq!(cmap.p_element(p), x);
            }
            // n consecutive generator tuples are independent
            let gens: Vec<u32> = (0..n as i64).map(|j| cmap.q_tuple(field.omega_pow(j + 3)).0).collect();
            assert_eq!(rank_f2(&gens), n as usize);
            let gens: Vec<u32> = (0..n as i64).map(|j| cmap.p_tuple(field.omega_pow(j + 1)).0).collect();
            assert_eq!(rank_f2(&gens), n as usize);
        }
    }

    #[test]
    fn zero_base_tuple_rejected() {
        let field = Field::new(gf(3));
        assert!(CoordinateMap::new(&field, NTuple::ZERO, NTuple(1)).is_err());
        assert!(CoordinateMap::new(&field, NTuple(1), NTuple::ZERO).is_err());
    }

    #[test]
    fn power_order_roundtrip() {
        let field = Field::new(gf(4));
        for idx in 0..field.d() {
            assert_eq!(field.index_of(field.element_at(idx)), idx);
        }
        assert_eq!(field.element_at(1), FieldElement::ONE);
        assert_eq!(field.element_at(2), field.spec().generator());
    }
}
