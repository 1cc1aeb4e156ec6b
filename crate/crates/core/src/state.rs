//! Quantum states: dense vectors and density operators, and stabilizer
//! states described exactly by their generators.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng;

use crate::dense::{norm_sqr, normalize, DenseOperator, StateVector};
use crate::error::{invalid, Result};
use crate::field::rank_f2;
use crate::net::QuantumNet;
use crate::pauli::{symplectic_product, PauliElement, TranslationBasis};
use crate::phase_space::Line;
use crate::tuple::NTuple;

const NORM_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub enum QuantumState {
    Vector(StateVector),
    Density(DenseOperator),
}

impl QuantumState {
    pub fn pure(v: StateVector) -> Result<QuantumState> {
        check_dim(v.len())?;
        let norm = norm_sqr(&v);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("state vector has squared norm {norm}, expected 1")));
        }
        Ok(QuantumState::Vector(v))
    }

    pub fn mixed(rho: DenseOperator) -> Result<QuantumState> {
        check_dim(rho.dim())?;
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(invalid(format!("density operator has trace {tr}, expected 1")));
        }
        if !rho.is_hermitian(NORM_TOL) {
            return Err(invalid("density operator is not Hermitian"));
        }
        Ok(QuantumState::Density(rho))
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(n: u32, k: NTuple) -> QuantumState {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
        v[k.0 as usize] = Complex64::new(1.0, 0.0);
        QuantumState::Vector(v)
    }

    /// `a|0̄⟩ + b|m̄⟩`.
    pub fn superposition(n: u32, m: NTuple, a: Complex64, b: Complex64) -> Result<QuantumState> {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
        v[0] += a;
        v[m.0 as usize] += b;
        QuantumState::pure(v)
    }

    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Vector(v) => v.len(),
            QuantumState::Density(r) => r.dim(),
        }
    }

    pub fn n(&self) -> u32 {
        self.dim().trailing_zeros()
    }

    pub fn expectation(&self, p: &PauliElement) -> Complex64 {
        match self {
            QuantumState::Vector(v) => p.expectation(v),
            QuantumState::Density(r) => p.trace_with(r),
        }
    }

    pub fn density(&self) -> DenseOperator {
        match self {
            QuantumState::Vector(v) => DenseOperator::outer(v),
            QuantumState::Density(r) => r.clone(),
        }
    }

    /// `P ρ P†`.
    pub fn conjugated_by(&self, p: &PauliElement) -> QuantumState {
        match self {
            QuantumState::Vector(v) => QuantumState::Vector(p.apply(v)),
            QuantumState::Density(r) => QuantumState::Density(p.conjugate(r)),
        }
    }

    /// `Tr(ρ1 ρ2)`.
    pub fn overlap(&self, other: &QuantumState) -> f64 {
        match (self, other) {
            (QuantumState::Vector(a), QuantumState::Vector(b)) => crate::dense::inner(a, b).norm_sqr(),
            _ => self.density().trace_product(&other.density()).re,
        }
    }

    /// Random pure state with independent uniform real and imaginary parts
    /// before normalization.
    pub fn random_pure<R: Rng>(n: u32, rng: &mut R) -> QuantumState {
        QuantumState::Vector(random_vector(n, rng))
    }

    /// Random mixture of `rank` random pure states with random weights.
    pub fn random_mixed<R: Rng>(n: u32, rank: usize, rng: &mut R) -> QuantumState {
        let d = 1usize << n;
        let weights: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let mut rho = DenseOperator::zeros(d);
        for w in weights {
            let v = random_vector(n, rng);
            rho.add_scaled(&DenseOperator::outer(&v), Complex64::new(w / total, 0.0));
        }
        QuantumState::Density(rho)
    }
}

fn random_vector<R: Rng>(n: u32, rng: &mut R) -> StateVector {
    let mut v: StateVector = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    normalize(&mut v);
    v
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(invalid(format!("dimension {dim} is not 2^n with n >= 1")));
    }
    Ok(())
}

/// A stabilizer state given by `n` independent commuting Hermitian generators.
#[derive(Clone, Debug)]
pub struct StabilizerState {
    n: u32,
    generators: Vec<PauliElement>,
    /// Group elements keyed by `(x, z)`, valued by their phase exponent.
    group: HashMap<(u32, u32), u8>,
}

impl StabilizerState {
    pub fn new(generators: Vec<PauliElement>) -> Result<StabilizerState> {
        let n = generators.len() as u32;
        if n == 0 || generators.iter().any(|g| g.n() != n) {
            return Err(invalid("a stabilizer state needs exactly n generators on n qubits"));
        }
        for g in &generators {
            if !g.is_hermitian() {
                return Err(invalid(format!("generator {g} is not Hermitian")));
            }
            for h in &generators {
                if !g.commutes_with(h) {
                    return Err(invalid(format!("generators {g} and {h} do not commute")));
                }
            }
        }
        let vecs: Vec<u32> = generators.iter().map(|g| (g.x().0 << n) | g.z().0).collect();
        if rank_f2(&vecs) != n as usize {
            return Err(invalid("stabilizer generators are not independent"));
        }
        let mut group = HashMap::with_capacity(1 << n);
        for mask in 0..1u32 << n {
            let mut acc = PauliElement::identity(n);
            for (j, g) in generators.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    acc = acc.mul(g);
                }
            }
            group.insert((acc.x().0, acc.z().0), acc.phase());
        }
        Ok(StabilizerState { n, generators, group })
    }

    /// The state assigned by `net` to the line `l`, in the frame `basis`.
    pub fn line_state(net: &QuantumNet, basis: &TranslationBasis, l: &Line) -> StabilizerState {
        let space = net.space();
        let anchor = space.anchor_point(l);
        let (dq, dp) = space.tuples_of(anchor);
        let gens = space
            .ray_generators(l.striation)
            .into_iter()
            .map(|g| {
                let (q, p) = space.tuples_of(g);
                let flip = net.f_of(g) < 0;
                let shifted = symplectic_product(dq, dp, q, p) == 1;
                basis.translation(q, p).times_i_pow(if flip ^ shifted { 2 } else { 0 })
            })
            .collect();
        StabilizerState::new(gens).expect("ray generators form a stabilizer group")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn generators(&self) -> &[PauliElement] {
        &self.generators
    }

    /// `⟨P⟩` for a Hermitian Pauli: `±1` if `±P` stabilizes the state, else `0`.
    pub fn expectation(&self, p: &PauliElement) -> i8 {
        match self.group.get(&(p.x().0, p.z().0)) {
            None => 0,
            Some(&s) => match (p.phase() + 4 - s) & 3 {
                0 => 1,
                2 => -1,
                _ => panic!("expectation of non-Hermitian Pauli {p}"),
            },
        }
    }

    /// Dense state vector, first nonzero amplitude real and positive.
    pub fn state_vector(&self) -> StateVector {
        let d = 1usize << self.n;
        let mut proj = DenseOperator::identity(d);
        for g in &self.generators {
            let mut term = DenseOperator::identity(d);
            term.add_scaled(&g.dense_matrix().expect("stabilizer states are dense-sized"), Complex64::new(1.0, 0.0));
            proj = &proj * &term.scale(Complex64::new(0.5, 0.0));
        }
        crate::net::projector_vector(&proj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{translation_op, PauliKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bell_state_stabilizer() {
        let n = 2;
        let xx = translation_op(n, NTuple(0b11), NTuple(0));
        let zz = translation_op(n, NTuple(0), NTuple(0b11));
        let bell = StabilizerState::new(vec![xx, zz]).unwrap();
        let yy = translation_op(n, NTuple(0b11), NTuple(0b11));
        assert_eq!(bell.expectation(&yy), -1);
        assert_eq!(bell.expectation(&xx), 1);
        assert_eq!(bell.expectation(&PauliElement::single(n, PauliKind::Z, 1)), 0);
        let v = bell.state_vector();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0].re - h).abs() < 1e-12 && (v[3].re - h).abs() < 1e-12);
        let dense = QuantumState::Vector(v);
        assert!((dense.expectation(&yy).re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_generators() {
        let n = 1;
        let x = PauliElement::single(n, PauliKind::X, 1);
        let z = PauliElement::single(n, PauliKind::Z, 1);
        assert!(StabilizerState::new(vec![x, z]).is_err());
        assert!(StabilizerState::new(vec![x.times_i_pow(1)]).is_err());
        let n = 2;
        let zz = translation_op(n, NTuple(0), NTuple(0b11));
        assert!(StabilizerState::new(vec![zz, zz]).is_err());
    }

    #[test]
    fn state_validation() {
        assert!(QuantumState::pure(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).is_err());
        assert!(QuantumState::pure(vec![Complex64::new(1.0, 0.0); 3]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = QuantumState::random_mixed(2, 3, &mut rng);
        assert!(QuantumState::mixed(s.density()).is_ok());
        assert!(QuantumState::mixed(DenseOperator::identity(4)).is_err());
    }
}
