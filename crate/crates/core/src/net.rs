//! Quantum nets: the assignment of stabilizer states to phase-space lines.
//!
//! A net is parameterized by `n` independent signs per ray, attached to the
//! ray's designated generators. Every other eigenvalue `f_β` follows from the
//! Pauli product rule, so an inconsistent sign system cannot be represented.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::{DenseOperator, StateVector};
use crate::error::{capability, invalid, Result};
use crate::field::{CoordinateMap, Field, FieldSpec};
use crate::pauli::{translation_op, PauliElement, TranslationBasis, DENSE_MAX_QUBITS};
use crate::phase_space::{Line, PhasePoint, PhaseSpace, Striation};
use crate::tuple::NTuple;

/// Upper bound on the number of signs an enumeration may range over.
pub const MAX_ENUMERATED_SIGNS: u32 = 24;

#[derive(Clone, Debug)]
pub struct QuantumNet {
    space: Arc<PhaseSpace>,
    /// Per striation (canonical order), bit `j - 1` set means generator `j`
    /// has eigenvalue `-1`.
    neg_masks: Vec<u32>,
}

impl PartialEq for QuantumNet {
    fn eq(&self, other: &Self) -> bool {
        self.space.field().spec() == other.space.field().spec()
            && self.space.cmap().q0() == other.space.cmap().q0()
            && self.space.cmap().p0() == other.space.cmap().p0()
            && self.neg_masks == other.neg_masks
    }
}

impl QuantumNet {
    /// The net with every generator sign `+1`.
    pub fn all_plus(space: Arc<PhaseSpace>) -> QuantumNet {
        let rays = space.d() + 1;
        QuantumNet { space, neg_masks: vec![0; rays] }
    }

    /// Build from explicit signs, one row of `n` entries `±1` per striation.
    pub fn from_signs(space: Arc<PhaseSpace>, signs: &[Vec<i8>]) -> Result<QuantumNet> {
        let n = space.n() as usize;
        if signs.len() != space.d() + 1 {
            return Err(invalid(format!("expected {} sign rows, got {}", space.d() + 1, signs.len())));
        }
        let mut neg_masks = Vec::with_capacity(signs.len());
        for row in signs {
            if row.len() != n {
                return Err(invalid(format!("each sign row needs {n} entries")));
            }
            let mut mask = 0;
            for (j, &s) in row.iter().enumerate() {
                match s {
                    1 => {}
                    -1 => mask |= 1 << j,
                    _ => return Err(invalid(format!("sign {s} is not ±1"))),
                }
            }
            neg_masks.push(mask);
        }
        Ok(QuantumNet { space, neg_masks })
    }

    pub fn space(&self) -> &Arc<PhaseSpace> {
        &self.space
    }

    pub fn n(&self) -> u32 {
        self.space.n()
    }

    pub fn d(&self) -> usize {
        self.space.d()
    }

    pub fn gen_signs(&self) -> Vec<Vec<i8>> {
        let n = self.n();
        self.neg_masks
            .iter()
            .map(|m| (0..n).map(|j| if m >> j & 1 == 1 { -1 } else { 1 }).collect())
            .collect()
    }

    pub fn generator_sign(&self, s: Striation, j: usize) -> i8 {
        if self.neg_masks[s.index()] >> (j - 1) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn set_generator_sign(&mut self, s: Striation, j: usize, sign: i8) {
        let bit = 1 << (j - 1);
        if sign < 0 {
            self.neg_masks[s.index()] |= bit;
        } else {
            self.neg_masks[s.index()] &= !bit;
        }
    }

    /// Bit `j - 1` set when generator `j` of `s` has sign `-1`.
    pub fn neg_mask(&self, s: Striation) -> u32 {
        self.neg_masks[s.index()]
    }

    pub fn set_neg_mask(&mut self, s: Striation, mask: u32) {
        self.neg_masks[s.index()] = mask & ((1u32 << self.n()) - 1);
    }

    /// Eigenvalue `f_β` of `T(β)` on the ray state through `β`.
    pub fn f_of(&self, beta: PhasePoint) -> i8 {
        let Some(s) = self.space.striation_of_ray_through(beta) else {
            return 1;
        };
        let coeffs = self.space.ray_coefficients(self.space.ray_parameter(s, beta));
        let (_, rel) = self.generator_product(s, coeffs);
        let parity = (coeffs & self.neg_masks[s.index()]).count_ones() + (rel as u32 >> 1);
        if parity & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Product of the generators selected by `coeffs`, and the exponent `r`
    /// with `product = i^r T(β)`.
    fn generator_product(&self, s: Striation, coeffs: u32) -> (PauliElement, u8) {
        let n = self.n();
        let mut acc = PauliElement::identity(n);
        for (j, g) in self.space.ray_generators(s).into_iter().enumerate() {
            if coeffs >> j & 1 == 1 {
                let (q, p) = self.space.tuples_of(g);
                acc = acc.mul(&translation_op(n, q, p));
            }
        }
        let rel = acc.phase_relative_to_canonical();
        debug_assert!(rel == 0 || rel == 2);
        (acc, rel)
    }

    /// Force `f_β = target` by flipping, if needed, the sign of the lowest
    /// generator appearing in the decomposition of `β`.
    pub fn impose(&mut self, beta: PhasePoint, target: i8) -> Result<()> {
        let Some(s) = self.space.striation_of_ray_through(beta) else {
            return if target == 1 { Ok(()) } else { Err(invalid("f at the origin is always +1")) };
        };
        if self.f_of(beta) != target {
            let coeffs = self.space.ray_coefficients(self.space.ray_parameter(s, beta));
            let low = coeffs & coeffs.wrapping_neg();
            self.neg_masks[s.index()] ^= low;
        }
        Ok(())
    }

    /// All `f_β`, indexed by tuples as `(q̄ << n) | p̄`.
    pub fn sign_table(&self) -> SignTable {
        let n = self.n();
        let d = self.d();
        let mut signs = vec![0i8; d * d];
        signs[0] = 1;
        let mut products = vec![PauliElement::identity(n); d];
        for s in self.space.striations() {
            let gens: Vec<PauliElement> = self
                .space
                .ray_generators(s)
                .into_iter()
                .map(|g| {
                    let (q, p) = self.space.tuples_of(g);
                    translation_op(n, q, p)
                })
                .collect();
            let neg = self.neg_masks[s.index()];
            for c in 1..d as u32 {
                let low = c.trailing_zeros() as usize;
                let prod = products[(c & (c - 1)) as usize].mul(&gens[low]);
                products[c as usize] = prod;
                let rel = prod.phase_relative_to_canonical() as u32;
                let parity = (c & neg).count_ones() + (rel >> 1);
                let idx = ((prod.x().0 as usize) << n) | prod.z().0 as usize;
                signs[idx] = if parity & 1 == 1 { -1 } else { 1 };
            }
        }
        SignTable { n, signs }
    }

    /// Deterministic random net: every generator sign independent and uniform.
    pub fn random(space: Arc<PhaseSpace>, seed: u64) -> QuantumNet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = ((1u64 << space.n()) - 1) as u32;
        let neg_masks = (0..space.d() + 1).map(|_| rng.gen::<u32>() & mask).collect();
        QuantumNet { space, neg_masks }
    }

    /// Rank-one projector of a line. Rays use `(1/d) Σ f_β T'(β)`; other
    /// lines translate their ray by the line's smallest point.
    pub fn line_projector(&self, basis: &TranslationBasis, l: &Line) -> Result<DenseOperator> {
        check_dense(self.n())?;
        let ray = self.ray_projector(basis, l.striation);
        if l.is_ray() {
            return Ok(ray);
        }
        let anchor = self.space.anchor_point(l);
        Ok(self.translate_projector(basis, &ray, anchor))
    }

    pub fn ray_projector(&self, basis: &TranslationBasis, s: Striation) -> DenseOperator {
        let d = self.d();
        let mut p = DenseOperator::zeros(d);
        for t in self.space.field().elements() {
            let beta = self.space.ray_point(s, t);
            let (q, pt) = self.space.tuples_of(beta);
            let op = basis.translation(q, pt);
            let f = self.f_of(beta) as f64 / d as f64;
            for k in 0..d {
                let r = k ^ op.x().0 as usize;
                let v = p.get(r, k) + op.column_entry(k) * f;
                p.set(r, k, v);
            }
        }
        p
    }

    /// `T'(δ) · P · T'(δ)†`.
    pub fn translate_projector(&self, basis: &TranslationBasis, p: &DenseOperator, delta: PhasePoint) -> DenseOperator {
        let (q, pt) = self.space.tuples_of(delta);
        basis.translation(q, pt).conjugate(p)
    }

    /// The `d + 1` bases, in striation order, each as `d` line projectors in
    /// intercept power order.
    pub fn mub_bases(&self, basis: &TranslationBasis) -> Result<Vec<Vec<DenseOperator>>> {
        check_dense(self.n())?;
        let field = self.space.field();
        Ok(self
            .space
            .striations()
            .map(|s| {
                let ray = self.ray_projector(basis, s);
                field
                    .elements()
                    .map(|c| {
                        let l = Line { striation: s, intercept: c };
                        if l.is_ray() {
                            ray.clone()
                        } else {
                            self.translate_projector(basis, &ray, self.space.anchor_point(&l))
                        }
                    })
                    .collect()
            })
            .collect())
    }

    pub fn to_file(&self) -> NetFile {
        NetFile {
            n: self.n(),
            poly: self.space.field().spec().poly(),
            gen_signs: self.gen_signs(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("net serialization cannot fail")
    }

    /// Parse a serialized net; the phase space uses `q0 = p0 = (1,0,…,0)`.
    pub fn from_json(s: &str) -> Result<QuantumNet> {
        let file: NetFile = serde_json::from_str(s)?;
        file.into_net()
    }
}

fn check_dense(n: u32) -> Result<()> {
    if n > DENSE_MAX_QUBITS {
        Err(capability(format!("dense path limited to n <= {DENSE_MAX_QUBITS}, got {n}")))
    } else {
        Ok(())
    }
}

/// Serialized form `{n, poly, gen_signs}`; sign rows ordered V, H, oblique k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetFile {
    pub n: u32,
    pub poly: u32,
    pub gen_signs: Vec<Vec<i8>>,
}

impl NetFile {
    pub fn into_net(self) -> Result<QuantumNet> {
        let field = Field::new(FieldSpec::new(self.n, self.poly)?);
        let cmap = CoordinateMap::standard(&field);
        let space = Arc::new(PhaseSpace::new(field, cmap)?);
        QuantumNet::from_signs(space, &self.gen_signs)
    }
}

/// Table of all `f_β`, indexed by tuple masks `(q̄ << n) | p̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignTable {
    n: u32,
    signs: Vec<i8>,
}

impl SignTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, q: NTuple, p: NTuple) -> i8 {
        self.signs[((q.0 as usize) << self.n) | p.0 as usize]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.signs
    }
}

/// Which signs an enumeration ranges over; signs of the other rays stay `+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NetEnumeration {
    All,
    /// Only the listed rays are free.
    Rays(Vec<Striation>),
}

impl NetEnumeration {
    /// Every oblique ray free; vertical and horizontal fixed to `+1`.
    pub fn oblique_only(space: &PhaseSpace) -> NetEnumeration {
        NetEnumeration::Rays((0..space.d() as u32 - 1).map(Striation::Oblique).collect())
    }
}

/// Iterator over every sign assignment of the free rays, in lexicographic
/// order with `+1 < -1` and the first free sign most significant.
pub struct NetIter {
    space: Arc<PhaseSpace>,
    free: Vec<(usize, u32)>,
    next: u64,
    total: u64,
}

impl NetIter {
    pub fn len_total(&self) -> u64 {
        self.total
    }
}

impl Iterator for NetIter {
    type Item = QuantumNet;

    fn next(&mut self) -> Option<QuantumNet> {
        if self.next >= self.total {
            return None;
        }
        let k = self.free.len();
        let mut neg_masks = vec![0u32; self.space.d() + 1];
        for (pos, &(ray, bit)) in self.free.iter().enumerate() {
            if self.next >> (k - 1 - pos) & 1 == 1 {
                neg_masks[ray] |= 1 << bit;
            }
        }
        self.next += 1;
        Some(QuantumNet { space: Arc::clone(&self.space), neg_masks })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

pub fn enumerate_nets(space: Arc<PhaseSpace>, which: &NetEnumeration) -> Result<NetIter> {
    let n = space.n();
    let rays: Vec<usize> = match which {
        NetEnumeration::All => (0..space.d() + 1).collect(),
        NetEnumeration::Rays(list) => {
            let mut idx: Vec<usize> = list.iter().map(|s| s.index()).collect();
            if idx.iter().any(|&i| i > space.d()) {
                return Err(invalid("striation out of range for this phase space"));
            }
            idx.sort_unstable();
            idx.dedup();
            idx
        }
    };
    let count = rays.len() as u64 * n as u64;
    if count > MAX_ENUMERATED_SIGNS as u64 {
        return Err(capability(format!(
            "enumerating {count} signs exceeds the budget of {MAX_ENUMERATED_SIGNS}"
        )));
    }
    let free = rays.iter().flat_map(|&r| (0..n).map(move |j| (r, j))).collect();
    Ok(NetIter { space, free, next: 0, total: 1u64 << count })
}

/// Unit vector spanning a rank-one projector, with the first nonzero
/// amplitude made real and positive.
pub fn projector_vector(p: &DenseOperator) -> StateVector {
    let d = p.dim();
    let col = (0..d)
        .max_by(|&a, &b| p.get(a, a).re.total_cmp(&p.get(b, b).re))
        .expect("nonempty");
    let norm = p.get(col, col).re.sqrt();
    let mut v: StateVector = (0..d).map(|r| p.get(r, col) / norm).collect();
    if let Some(first) = v.iter().find(|a| a.norm() > 1e-12).copied() {
        let phase = first.conj() / first.norm();
        for a in v.iter_mut() {
            *a *= phase;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::inner;
    use num_complex::Complex64;

    fn space(n: u32) -> Arc<PhaseSpace> {
        PhaseSpace::standard(n).unwrap()
    }

    fn point(space: &PhaseSpace, q: &str, p: &str) -> PhasePoint {
        let n = space.n();
        space.point_from_tuples(NTuple::parse(q, n).unwrap(), NTuple::parse(p, n).unwrap())
    }

    #[test]
    fn origin_has_unit_eigenvalue() {
        let net = QuantumNet::random(space(3), 7);
        assert_eq!(net.f_of(PhasePoint::ORIGIN), 1);
    }

    #[test]
    fn two_qubit_product_relations() {
        let sp = space(2);
        let nets = enumerate_nets(Arc::clone(&sp), &NetEnumeration::All).unwrap();
        let mut matched = 0;
        for net in nets {
            let f = |q: &str, p: &str| net.f_of(point(&sp, q, p));
            if f("10", "01") == 1 && f("01", "11") == 1 {
                assert_eq!(f("11", "10"), -1);
                matched += 1;
            }
            if f("10", "10") == 1 && f("01", "01") == 1 {
                assert_eq!(f("11", "11"), 1);
                matched += 1;
            }
        }
        assert_eq!(matched, 512);
    }

    #[test]
    fn two_qubit_relations_hold_for_every_net() {
        let sp = space(2);
        let f = |net: &QuantumNet, q: &str, p: &str| net.f_of(point(&sp, q, p));
        let nets = enumerate_nets(Arc::clone(&sp), &NetEnumeration::All).unwrap();
        let mut count = 0;
        for net in nets {
            count += 1;
            assert_eq!(f(&net, "11", "10"), -f(&net, "10", "01") * f(&net, "01", "11"));
            assert_eq!(f(&net, "11", "01"), -f(&net, "10", "11") * f(&net, "01", "10"));
            assert_eq!(f(&net, "11", "11"), f(&net, "10", "10") * f(&net, "01", "01"));
            let table = net.sign_table();
            for b in sp.points() {
                let (q, p) = sp.tuples_of(b);
                assert_eq!(table.get(q, p), net.f_of(b));
            }
        }
        assert_eq!(count, 1024);
    }

    #[test]
    fn random_nets_are_deterministic() {
        let sp = space(2);
        let a = QuantumNet::random(Arc::clone(&sp), 42);
        let b = QuantumNet::random(Arc::clone(&sp), 42);
        assert_eq!(a, b);
        let signs = a.gen_signs();
        assert_eq!(signs.iter().map(Vec::len).sum::<usize>(), 10);
        let draws: std::collections::HashSet<Vec<Vec<i8>>> =
            (0..100).map(|s| QuantumNet::random(Arc::clone(&sp), s).gen_signs()).collect();
        // 1024 possible nets; 100 draws leave very few collisions
        assert!(draws.len() > 85, "only {} distinct nets", draws.len());
    }

    #[test]
    fn enumeration_counts() {
        let sp = space(2);
        assert_eq!(enumerate_nets(Arc::clone(&sp), &NetEnumeration::All).unwrap().count(), 1024);
        let obl = NetEnumeration::oblique_only(&sp);
        let nets: Vec<_> = enumerate_nets(Arc::clone(&sp), &obl).unwrap().collect();
        assert_eq!(nets.len(), 64);
        assert!(nets.iter().all(|n| n.generator_sign(Striation::Horizontal, 1) == 1));
        let sp3 = space(3);
        let it = enumerate_nets(Arc::clone(&sp3), &NetEnumeration::oblique_only(&sp3)).unwrap();
        assert_eq!(it.len_total(), 2_097_152);
        assert!(matches!(
            enumerate_nets(sp3, &NetEnumeration::All),
            Err(crate::Error::Capability(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let net = QuantumNet::random(space(3), 9);
        let s = net.to_json();
        assert!(s.starts_with("{\"n\":3,\"poly\":11,\"gen_signs\":[["));
        let back = QuantumNet::from_json(&s).unwrap();
        assert_eq!(back, net);
        assert_eq!(back.to_json(), s);
        assert!(QuantumNet::from_json("{\"n\":2,\"poly\":7,\"gen_signs\":[[1,1]]}").is_err());
        assert!(QuantumNet::from_json("{\"n\":2,\"poly\":5,\"gen_signs\":[]}").is_err());
    }

    #[test]
    fn single_qubit_projectors() {
        let sp = space(1);
        let basis = TranslationBasis::standard(1);
        let net = QuantumNet::all_plus(sp);
        let h = net.line_projector(&basis, &Line::ray(Striation::Horizontal)).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!((h.get(r, c) - Complex64::new(0.5, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn vertical_ray_is_all_zero_state() {
        for n in 1..=4 {
            let net = QuantumNet::all_plus(space(n));
            let basis = TranslationBasis::standard(n);
            let v = net.line_projector(&basis, &Line::ray(Striation::Vertical)).unwrap();
            let d = 1 << n;
            let mut expect = DenseOperator::zeros(d);
            expect.set(0, 0, Complex64::new(1.0, 0.0));
            assert!(v.max_abs_diff(&expect) < 1e-12);
        }
    }

    #[test]
    fn vertical_striation_is_computational_basis() {
        let sp = space(3);
        let basis = TranslationBasis::standard(3);
        let net = QuantumNet::random(Arc::clone(&sp), 3);
        let bases = net.mub_bases(&basis).unwrap();
        for (i, p) in bases[0].iter().enumerate() {
            let v = projector_vector(p);
            let nonzero: Vec<usize> = (0..8).filter(|&k| v[k].norm() > 1e-9).collect();
            assert_eq!(nonzero.len(), 1);
            let _ = i;
        }
    }

    #[test]
    fn mub_overlaps_two_qubits() {
        let sp = space(2);
        let basis = TranslationBasis::standard(2);
        let net = QuantumNet::random(sp, 11);
        let bases = net.mub_bases(&basis).unwrap();
        assert_eq!(bases.len(), 5);
        for (a, ba) in bases.iter().enumerate() {
            for (b, bb) in bases.iter().enumerate() {
                for (i, pa) in ba.iter().enumerate() {
                    for (j, pb) in bb.iter().enumerate() {
                        let ov = pa.trace_product(pb).re;
                        let expect = if a != b { 0.25 } else if i == j { 1.0 } else { 0.0 };
                        assert!((ov - expect).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn oblique_ray_projector_is_common_eigenstate() {
        let sp = space(2);
        let basis = TranslationBasis::standard(2);
        let net = QuantumNet::random(Arc::clone(&sp), 5);
        let s = Striation::Oblique(0);
        let p = net.line_projector(&basis, &Line::ray(s)).unwrap();
        assert!((p.trace().re - 1.0).abs() < 1e-12);
        assert!((&p * &p).max_abs_diff(&p) < 1e-12);
        let v = projector_vector(&p);
        for g in sp.ray_generators(s) {
            let (q, pt) = sp.tuples_of(g);
            let tv = translation_op(2, q, pt).apply(&v);
            let ev = inner(&v, &tv);
            assert!((ev.re - net.f_of(g) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn impose_sets_requested_value() {
        let sp = space(3);
        let mut net = QuantumNet::random(Arc::clone(&sp), 1);
        for b in sp.points().skip(1) {
            for target in [1, -1] {
                net.impose(b, target).unwrap();
                assert_eq!(net.f_of(b), target);
            }
        }
        assert!(net.impose(PhasePoint::ORIGIN, -1).is_err());
    }
}
