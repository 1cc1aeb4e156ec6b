//! Point operators and Wigner tables.
//!
//! Tables are computed from the Pauli expansion
//! `W(α) = d⁻² Σ_β (-1)^{α∧β} f_β ⟨T'(β)⟩`, which is a Walsh–Hadamard
//! transform over the `2n` bits of `β`. Stabilizer states have
//! `⟨T'(β)⟩ ∈ {0, ±1}` and give exact integer numerators over `d²`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dense::DenseOperator;
use crate::error::{capability, invalid, Result};
use crate::net::QuantumNet;
use crate::pauli::{symplectic_product, TranslationBasis, DENSE_MAX_QUBITS};
use crate::phase_space::{Line, PhasePoint, PhaseSpace};
use crate::state::{QuantumState, StabilizerState};
use crate::transform::fwht;
use crate::tuple::NTuple;

const TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum WignerValues {
    /// Numerators over `d²`.
    Exact(Vec<i64>),
    Float(Vec<f64>),
}

/// Values indexed by `(q_index, p_index)` in field power order,
/// stored row-major as `q_index * d + p_index`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerTable {
    n: u32,
    values: WignerValues,
}

impl WignerTable {
    pub(crate) fn from_parts(n: u32, values: WignerValues) -> WignerTable {
        WignerTable { n, values }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> usize {
        1 << self.n
    }

    pub fn values(&self) -> &WignerValues {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, WignerValues::Exact(_))
    }

    pub fn denominator(&self) -> i64 {
        (self.d() * self.d()) as i64
    }

    pub fn get(&self, q_index: usize, p_index: usize) -> f64 {
        let k = q_index * self.d() + p_index;
        match &self.values {
            WignerValues::Exact(v) => v[k] as f64 / self.denominator() as f64,
            WignerValues::Float(v) => v[k],
        }
    }

    pub fn numerator(&self, q_index: usize, p_index: usize) -> Option<i64> {
        match &self.values {
            WignerValues::Exact(v) => Some(v[q_index * self.d() + p_index]),
            WignerValues::Float(_) => None,
        }
    }

    pub fn at(&self, space: &PhaseSpace, a: PhasePoint) -> f64 {
        let (qi, pi) = space.indices_of(a);
        self.get(qi, pi)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        let d = self.d();
        (0..d * d).map(|k| self.get(k / d, k % d)).collect()
    }

    pub fn to_float(&self) -> WignerTable {
        WignerTable { n: self.n, values: WignerValues::Float(self.to_f64()) }
    }

    pub fn sum(&self) -> f64 {
        match &self.values {
            WignerValues::Exact(v) => v.iter().sum::<i64>() as f64 / self.denominator() as f64,
            WignerValues::Float(v) => v.iter().sum(),
        }
    }

    pub fn max_abs_diff(&self, other: &WignerTable) -> f64 {
        self.to_f64()
            .iter()
            .zip(other.to_f64())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let d = self.d();
        let mut out = String::from("q_index,p_index,value\n");
        for qi in 0..d {
            for pi in 0..d {
                match self.numerator(qi, pi) {
                    Some(num) => out.push_str(&format!("{qi},{pi},{}\n", num as f64 / self.denominator() as f64)),
                    None => out.push_str(&format!("{qi},{pi},{:.15e}\n", self.get(qi, pi))),
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Exact<'a> {
            n: u32,
            mode: &'static str,
            denominator: i64,
            numerators: Vec<&'a [i64]>,
        }
        #[derive(Serialize)]
        struct Float<'a> {
            n: u32,
            mode: &'static str,
            values: Vec<&'a [f64]>,
        }
        let d = self.d();
        match &self.values {
            WignerValues::Exact(v) => serde_json::to_string_pretty(&Exact {
                n: self.n,
                mode: "exact",
                denominator: self.denominator(),
                numerators: v.chunks(d).collect(),
            }),
            WignerValues::Float(v) => serde_json::to_string_pretty(&Float {
                n: self.n,
                mode: "float",
                values: v.chunks(d).collect(),
            }),
        }
        .expect("tables serialize")
    }
}

fn check_dense(n: u32) -> Result<()> {
    if n > DENSE_MAX_QUBITS {
        return Err(capability(format!("dense path supports n <= {DENSE_MAX_QUBITS}, got {n}")));
    }
    Ok(())
}

/// Reorder a transform indexed by `(q̄ << n) | p̄` into a table indexed by
/// power order, reading `α` at `(p̄_α << n) | q̄_α`.
fn gather<T: Copy>(space: &PhaseSpace, transformed: &[T]) -> Vec<T> {
    let n = space.n();
    space
        .points()
        .map(|a| {
            let (q, p) = space.tuples_of(a);
            transformed[((p.0 as usize) << n) | q.0 as usize]
        })
        .collect()
}

/// `A(α) = d⁻² Σ_β (-1)^{α∧β} f_β T'(β)`.
pub fn point_operator(net: &QuantumNet, basis: &TranslationBasis, alpha: PhasePoint) -> Result<DenseOperator> {
    let n = net.n();
    check_dense(n)?;
    let d = net.d();
    let signs = net.sign_table();
    let (qa, pa) = net.space().tuples_of(alpha);
    let mut a = DenseOperator::zeros(d);
    let scale = 1.0 / (d * d) as f64;
    for qb in 0..d as u32 {
        for pb in 0..d as u32 {
            let (q, p) = (NTuple(qb), NTuple(pb));
            let mut c = signs.get(q, p) as f64 * scale;
            if symplectic_product(qa, pa, q, p) == 1 {
                c = -c;
            }
            let op = basis.translation(q, p);
            for k in 0..d {
                let r = k ^ op.x().0 as usize;
                let v = a.get(r, k) + op.column_entry(k) * c;
                a.set(r, k, v);
            }
        }
    }
    Ok(a)
}

/// `A(α) = d⁻¹ (Σ_κ P(λ_α^κ) − I)` over the `d + 1` lines through `α`.
pub fn point_operator_from_lines(net: &QuantumNet, basis: &TranslationBasis, alpha: PhasePoint) -> Result<DenseOperator> {
    check_dense(net.n())?;
    let space = net.space();
    let d = net.d();
    let mut a = DenseOperator::identity(d).scale(Complex64::new(-1.0, 0.0));
    for s in space.striations() {
        let l = space.line_in_striation_through(s, alpha);
        a.add_scaled(&net.line_projector(basis, &l)?, Complex64::new(1.0, 0.0));
    }
    Ok(a.scale(Complex64::new(1.0 / d as f64, 0.0)))
}

/// All `d²` point operators in power order.
pub fn point_operators(net: &QuantumNet, basis: &TranslationBasis) -> Result<Vec<DenseOperator>> {
    check_dense(net.n())?;
    let points: Vec<PhasePoint> = net.space().points().collect();
    points.par_iter().map(|&a| point_operator(net, basis, a)).collect()
}

/// Wigner table of an arbitrary state, in double precision.
pub fn wigner_of_state(net: &QuantumNet, basis: &TranslationBasis, state: &QuantumState) -> Result<WignerTable> {
    let n = net.n();
    check_dense(n)?;
    if state.n() != n || state.dim() != net.d() {
        return Err(invalid(format!("state dimension {} does not match d = {}", state.dim(), net.d())));
    }
    validate(state)?;
    let d = net.d();
    let signs = net.sign_table();
    let mut g: Vec<f64> = (0..d * d)
        .into_par_iter()
        .map(|idx| {
            let (q, p) = (NTuple((idx >> n) as u32), NTuple((idx & (d - 1)) as u32));
            signs.as_slice()[idx] as f64 * state.expectation(&basis.translation(q, p)).re
        })
        .collect();
    fwht(&mut g);
    let scale = 1.0 / (d * d) as f64;
    let values = gather(net.space(), &g).into_iter().map(|v| v * scale).collect();
    Ok(WignerTable { n, values: WignerValues::Float(values) })
}

fn validate(state: &QuantumState) -> Result<()> {
    match state {
        QuantumState::Vector(v) => QuantumState::pure(v.clone()).map(|_| ()),
        QuantumState::Density(r) => QuantumState::mixed(r.clone()).map(|_| ()),
    }
}

/// Exact Wigner table of a stabilizer state.
pub fn wigner_exact(net: &QuantumNet, basis: &TranslationBasis, state: &StabilizerState) -> Result<WignerTable> {
    let n = net.n();
    if state.n() != n {
        return Err(invalid(format!("stabilizer state has n = {}, net has n = {n}", state.n())));
    }
    let d = net.d();
    let signs = net.sign_table();
    let mut g: Vec<i64> = (0..d * d)
        .map(|idx| {
            let (q, p) = (NTuple((idx >> n) as u32), NTuple((idx & (d - 1)) as u32));
            signs.as_slice()[idx] as i64 * state.expectation(&basis.translation(q, p)) as i64
        })
        .collect();
    fwht(&mut g);
    Ok(WignerTable { n, values: WignerValues::Exact(gather(net.space(), &g)) })
}

/// `W(α) = Tr(ρ A(α))` evaluated with explicit point operators.
pub fn wigner_dense(net: &QuantumNet, basis: &TranslationBasis, state: &QuantumState) -> Result<WignerTable> {
    let rho = state.density();
    let ops = point_operators(net, basis)?;
    let values = ops.iter().map(|a| rho.trace_product(a).re).collect();
    Ok(WignerTable { n: net.n(), values: WignerValues::Float(values) })
}

pub fn line_sum(table: &WignerTable, space: &PhaseSpace, l: &Line) -> f64 {
    space.points_of_line(l).into_iter().map(|a| table.at(space, a)).sum()
}

/// `d Σ_α w1(α) w2(α)`, which equals `Tr(ρ1 ρ2)`.
pub fn table_inner_product(w1: &WignerTable, w2: &WignerTable) -> Result<f64> {
    if w1.n != w2.n {
        return Err(invalid("tables have different n"));
    }
    if let (WignerValues::Exact(a), WignerValues::Exact(b)) = (&w1.values, &w2.values) {
        let dot: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        let den = w1.denominator();
        return Ok(dot as f64 * w1.d() as f64 / (den * den) as f64);
    }
    let dot: f64 = w1.to_f64().iter().zip(w2.to_f64()).map(|(x, y)| x * y).sum();
    Ok(dot * w1.d() as f64)
}

/// `max_α |W_{TρT†}(α + δ) − W_ρ(α)|` with `T = T'(δ)`.
pub fn covariance_check(net: &QuantumNet, basis: &TranslationBasis, state: &QuantumState, delta: PhasePoint) -> Result<f64> {
    let space = net.space();
    let (q, p) = space.tuples_of(delta);
    let moved = state.conjugated_by(&basis.translation(q, p));
    let w = wigner_of_state(net, basis, state)?;
    let wm = wigner_of_state(net, basis, &moved)?;
    Ok(space
        .points()
        .map(|a| (wm.at(space, a + delta) - w.at(space, a)).abs())
        .fold(0.0, f64::max))
}

/// Hilbert–Schmidt Gram matrix diagnostics of the point operators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    /// Mean of `Tr(A(α)²)`.
    pub diagonal: f64,
    /// Spread of the diagonal around its mean.
    pub diagonal_spread: f64,
    pub max_off_diagonal: f64,
}

impl GramReport {
    pub fn is_proportional_to_identity(&self) -> bool {
        self.diagonal_spread <= TOL && self.max_off_diagonal <= TOL
    }
}

pub fn point_operator_gram(net: &QuantumNet, basis: &TranslationBasis) -> Result<GramReport> {
    let ops = point_operators(net, basis)?;
    let m = ops.len();
    let diag: Vec<f64> = ops.iter().map(|a| a.trace_product(a).re).collect();
    let mean = diag.iter().sum::<f64>() / m as f64;
    let spread = diag.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
    let off = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .filter(|&j| j != i)
                .map(|j| ops[i].trace_product(&ops[j]).norm())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(GramReport { diagonal: mean, diagonal_spread: spread, max_off_diagonal: off })
}
