//! The five-qubit perfect code in a code-adapted phase space.
//!
//! Translations are rebuilt from `X'_j = S_j = Z_(j-1) X_(j) Z_(j+1)` and
//! `Z'_j = Z_(j)`, so that `|0⟩_L` is the horizontal ray and single-qubit
//! Pauli errors act as translations with distinct momentum offsets.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dense::{inner, normalize, DenseOperator, StateVector};
use crate::error::Result;
use crate::net::QuantumNet;
use crate::pauli::{PauliElement, PauliKind, TranslationBasis};
use crate::phase_space::PhaseSpace;
use crate::state::{QuantumState, StabilizerState};
use crate::tuple::NTuple;
use crate::wigner::{table_inner_product, wigner_exact, wigner_of_state, WignerTable, WignerValues};

pub const CODE_QUBITS: u32 = 5;
const TOL: f64 = 1e-10;

/// Site `j` shifted cyclically by `delta` within `1..=5`.
fn site(j: usize, delta: isize) -> usize {
    (j as isize - 1 + delta).rem_euclid(CODE_QUBITS as isize) as usize + 1
}

fn single(kind: PauliKind, j: usize) -> PauliElement {
    PauliElement::single(CODE_QUBITS, kind, j)
}

/// `m̄ = (1,1,1,1,1)`.
pub fn logical_m() -> NTuple {
    NTuple::ones(CODE_QUBITS)
}

/// Default interference line `p̄_I = (1,0,0,0,0)`.
pub fn default_p_i() -> NTuple {
    NTuple::unit(1, CODE_QUBITS)
}

#[derive(Clone, Debug)]
pub struct CodeFrame {
    pub stabilizers: Vec<PauliElement>,
    pub basis: TranslationBasis,
    /// `S̃ = S₁…S₅`, the encoded `Z`.
    pub logical_z: PauliElement,
    /// `Z⊗5`, the encoded `X`.
    pub logical_x: PauliElement,
    pub zero_l: StateVector,
    pub one_l: StateVector,
    pub space: Arc<PhaseSpace>,
}

pub fn build_code_frame() -> Result<CodeFrame> {
    let n = CODE_QUBITS;
    let stabilizers: Vec<PauliElement> = (1..=n as usize)
        .map(|j| {
            single(PauliKind::Z, site(j, -1))
                .mul(&single(PauliKind::X, j))
                .mul(&single(PauliKind::Z, site(j, 1)))
        })
        .collect();
    let z_gens = (1..=n as usize).map(|j| single(PauliKind::Z, j)).collect();
    let basis = TranslationBasis::new(stabilizers.clone(), z_gens)?;
    let logical_z = stabilizers.iter().fold(PauliElement::identity(n), |acc, s| acc.mul(s));
    let logical_x = PauliElement::new(n, 0, NTuple::ZERO, NTuple::ones(n));

    let d = 1usize << n;
    let mut proj = DenseOperator::identity(d);
    for s in &stabilizers {
        let mut term = DenseOperator::identity(d);
        term.add_scaled(&s.dense_matrix()?, Complex64::new(1.0, 0.0));
        proj = &proj * &term.scale(Complex64::new(0.5, 0.0));
    }
    let mut zero_l: StateVector = (0..d).map(|r| proj.get(r, 0)).collect();
    normalize(&mut zero_l);
    let one_l = logical_x.apply(&zero_l);
    Ok(CodeFrame {
        stabilizers,
        basis,
        logical_z,
        logical_x,
        zero_l,
        one_l,
        space: PhaseSpace::standard(n)?,
    })
}

impl CodeFrame {
    pub fn n(&self) -> u32 {
        CODE_QUBITS
    }

    pub fn d(&self) -> usize {
        1 << CODE_QUBITS
    }

    /// `T'(q̄, p̄) = i^{q̄·p̄} X'^q̄ Z'^p̄`.
    pub fn translation(&self, q: NTuple, p: NTuple) -> PauliElement {
        self.basis.translation(q, p)
    }

    /// `a|0⟩_L + b|1⟩_L`.
    pub fn encoded(&self, a: Complex64, b: Complex64) -> StateVector {
        self.zero_l.iter().zip(&self.one_l).map(|(x, y)| a * x + b * y).collect()
    }

    pub fn zero_l_stabilizer(&self) -> StabilizerState {
        StabilizerState::new(self.stabilizers.clone()).expect("ring graph stabilizers are valid")
    }

    pub fn one_l_stabilizer(&self) -> StabilizerState {
        let mut gens = self.stabilizers.clone();
        for g in &mut gens {
            *g = g.times_i_pow(2);
        }
        StabilizerState::new(gens).expect("ring graph stabilizers are valid")
    }
}

/// Signs making `f'_(x̄, m̄) i^{-x̄·m̄}` equal `(-1)^{x̄·p̄_I}` for even `x̄·m̄`
/// and `-i (-1)^{x̄·p̄_I}` for odd `x̄·m̄`, the interference then sitting on
/// the horizontal lines `p̄_I` and `p̄_I + m̄`.
pub fn code_net_for(frame: &CodeFrame, p_i: NTuple) -> Result<QuantumNet> {
    let space = &frame.space;
    let m = logical_m();
    let mut net = QuantumNet::all_plus(Arc::clone(space));
    for x in 0..frame.d() as u32 {
        let x = NTuple(x);
        let mut target = if x.dot2(p_i) == 1 { -1 } else { 1 };
        if x.dot(m) % 4 >= 2 {
            target = -target;
        }
        net.impose(space.point_from_tuples(x, m), target)?;
    }
    Ok(net)
}

/// True when `p̄_I` makes the interference overlap the logical lines.
pub fn p_i_overlaps_logical(p_i: NTuple) -> bool {
    p_i.is_zero() || p_i == logical_m()
}

/// Closed form of `W'` for `a|0⟩_L + b|1⟩_L` under [`code_net_for`].
pub fn encoded_wigner_formula(frame: &CodeFrame, p_i: NTuple, a: Complex64, b: Complex64) -> WignerTable {
    let d = frame.d() as f64;
    let m = logical_m();
    let ab = a * b.conj();
    let space = &frame.space;
    let values = space
        .points()
        .map(|pt| {
            let (q, p) = space.tuples_of(pt);
            let osc = if q.dot2(m) == 1 { -1.0 } else { 1.0 } / d;
            let mut w = 0.0;
            if p.is_zero() {
                w += a.norm_sqr() / d;
            }
            if p == m {
                w += b.norm_sqr() / d;
            }
            if p == p_i {
                w += osc * (ab.re + ab.im);
            }
            if p == p_i ^ m {
                w += osc * (ab.re - ab.im);
            }
            w
        })
        .collect();
    WignerTable::from_parts(CODE_QUBITS, WignerValues::Float(values))
}

/// Momentum offset of a single-qubit error in the code frame.
pub fn error_p_offset(kind: PauliKind, j: usize) -> NTuple {
    let n = CODE_QUBITS;
    let e = |k: usize| NTuple::unit(k, n);
    match kind {
        PauliKind::Z => e(j),
        PauliKind::X => e(site(j, -1)) ^ e(site(j, 1)),
        PauliKind::Y => e(site(j, -1)) ^ e(j) ^ e(site(j, 1)),
    }
}

fn kind_label(kind: PauliKind) -> &'static str {
    match kind {
        PauliKind::X => "X",
        PauliKind::Y => "Y",
        PauliKind::Z => "Z",
    }
}

pub fn single_qubit_errors() -> Vec<(String, PauliKind, usize)> {
    let mut out = Vec::new();
    for j in 1..=CODE_QUBITS as usize {
        for kind in [PauliKind::X, PauliKind::Y, PauliKind::Z] {
            out.push((format!("{}{j}", kind_label(kind)), kind, j));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorOffset {
    pub error: String,
    pub q_offset: String,
    pub p_offset: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneracyPair {
    pub two_qubit_error: String,
    pub single_qubit_error: String,
    pub p_offset: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameChecks {
    pub stabilize_zero_l: bool,
    pub logical_z_sign: i8,
    pub logical_z_on_one_l: i8,
    pub commutation_pattern: bool,
    pub zero_one_overlap: f64,
}

impl FrameChecks {
    pub fn passed(&self) -> bool {
        self.stabilize_zero_l
            && self.logical_z_sign == -1
            && self.logical_z_on_one_l == -1
            && self.commutation_pattern
            && self.zero_one_overlap <= TOL
    }
}

pub fn frame_checks(frame: &CodeFrame) -> FrameChecks {
    let n = CODE_QUBITS;
    let zero = QuantumState::Vector(frame.zero_l.clone());
    let one = QuantumState::Vector(frame.one_l.clone());
    let stabilize_zero_l = frame
        .stabilizers
        .iter()
        .all(|s| (zero.expectation(s) - Complex64::new(1.0, 0.0)).norm() <= TOL);
    // S̃ = ±X⊗5
    let all_x = PauliElement::new(n, 0, NTuple::ones(n), NTuple::ZERO);
    let logical_z_sign = if frame.logical_z == all_x {
        1
    } else if frame.logical_z == all_x.times_i_pow(2) {
        -1
    } else {
        0
    };
    let z1 = one.expectation(&frame.logical_z).re;
    let z0 = zero.expectation(&frame.logical_z).re;
    let logical_z_on_one_l = if (z0 - 1.0).abs() <= TOL && (z1 + 1.0).abs() <= TOL { -1 } else { 0 };
    let xs = frame.basis.x_gens();
    let zs = frame.basis.z_gens();
    let mut commutation_pattern = true;
    for j in 0..n as usize {
        for k in 0..n as usize {
            commutation_pattern &= xs[j].commutes_with(&xs[k]) && zs[j].commutes_with(&zs[k]);
            commutation_pattern &= xs[j].commutes_with(&zs[k]) == (j != k);
        }
    }
    FrameChecks {
        stabilize_zero_l,
        logical_z_sign,
        logical_z_on_one_l,
        commutation_pattern,
        zero_one_overlap: inner(&frame.zero_l, &frame.one_l).norm(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SyndromeReport {
    pub offsets: Vec<ErrorOffset>,
    pub offsets_distinct: bool,
    pub offsets_avoid_logical_lines: bool,
    pub differences_avoid_logical_lines: bool,
    pub offsets_match_frame_coordinates: bool,
    /// Largest `|⟨u|v⟩|` over distinct states in `{ψ} ∪ {E ψ}` and over
    /// error images against the code space, for several encoded `ψ`.
    pub max_overlap: f64,
    /// Largest `|d Σ W'_a W'_b|` between an encoded state and an error image.
    pub max_table_overlap: f64,
    pub degeneracy_pairs: Vec<DegeneracyPair>,
    pub degeneracy_classes: usize,
}

impl SyndromeReport {
    pub fn passed(&self) -> bool {
        self.offsets_distinct
            && self.offsets_avoid_logical_lines
            && self.differences_avoid_logical_lines
            && self.offsets_match_frame_coordinates
            && self.max_overlap <= TOL
            && self.max_table_overlap <= TOL
            && self.degeneracy_pairs.len() == CODE_QUBITS as usize
    }
}

/// Encoded states used by the dense checks: `|+⟩_L` and seeded random ones.
fn sample_encoded(frame: &CodeFrame, count: usize, seed: u64) -> Vec<StateVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = vec![frame.encoded(Complex64::new(h, 0.0), Complex64::new(h, 0.0))];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        out.push(frame.encoded(a / norm, b / norm));
    }
    out
}

pub fn syndrome_analysis(frame: &CodeFrame, net: &QuantumNet) -> Result<SyndromeReport> {
    let n = CODE_QUBITS;
    let m = logical_m();
    let errors = single_qubit_errors();
    let paulis: Vec<PauliElement> = errors.iter().map(|(_, k, j)| single(*k, *j)).collect();
    let offsets: Vec<NTuple> = errors.iter().map(|(_, k, j)| error_p_offset(*k, *j)).collect();
    let coords: Vec<(NTuple, NTuple, u8)> = paulis.iter().map(|e| frame.basis.coordinates_of(e)).collect();

    let offsets_match_frame_coordinates = coords.iter().zip(&offsets).all(|(c, o)| c.1 == *o);
    let mut sorted: Vec<u32> = offsets.iter().map(|o| o.0).collect();
    sorted.sort_unstable();
    sorted.dedup();
    let offsets_distinct = sorted.len() == offsets.len();
    let offsets_avoid_logical_lines = offsets.iter().all(|&o| !o.is_zero() && o != m);
    let differences_avoid_logical_lines = offsets.iter().enumerate().all(|(i, &a)| {
        offsets[i + 1..].iter().all(|&b| {
            let diff = a ^ b;
            !diff.is_zero() && diff != m
        })
    });

    let samples = sample_encoded(frame, 4, 0x5eed);
    let max_overlap = samples
        .par_iter()
        .map(|psi| {
            let mut states = vec![psi.clone()];
            states.extend(paulis.iter().map(|e| e.apply(psi)));
            let mut worst: f64 = 0.0;
            for i in 0..states.len() {
                for j in i + 1..states.len() {
                    worst = worst.max(inner(&states[i], &states[j]).norm());
                }
            }
            for img in &states[1..] {
                worst = worst.max(inner(&frame.zero_l, img).norm());
                worst = worst.max(inner(&frame.one_l, img).norm());
            }
            worst
        })
        .reduce(|| 0.0, f64::max);

    let psi = &samples[1];
    let w_psi = wigner_of_state(net, &frame.basis, &QuantumState::Vector(psi.clone()))?;
    let max_table_overlap = paulis
        .par_iter()
        .map(|e| {
            let w_err = wigner_of_state(net, &frame.basis, &QuantumState::Vector(e.apply(psi)))?;
            Ok(table_inner_product(&w_psi, &w_err)?.abs())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let degeneracy_pairs = (1..=n as usize)
        .filter_map(|j| {
            let zz = error_p_offset(PauliKind::Z, site(j, -1)) ^ error_p_offset(PauliKind::Z, site(j, 1));
            let x = error_p_offset(PauliKind::X, j);
            (zz == x).then(|| DegeneracyPair {
                two_qubit_error: format!("Z{}Z{}", site(j, -1), site(j, 1)),
                single_qubit_error: format!("X{j}"),
                p_offset: x.display(n).to_string(),
            })
        })
        .collect::<Vec<_>>();
    let degeneracy_classes = usize::from(!degeneracy_pairs.is_empty());

    Ok(SyndromeReport {
        offsets: errors
            .iter()
            .zip(&coords)
            .map(|((label, _, _), c)| ErrorOffset {
                error: label.clone(),
                q_offset: c.0.display(n).to_string(),
                p_offset: c.1.display(n).to_string(),
            })
            .collect(),
        offsets_distinct,
        offsets_avoid_logical_lines,
        differences_avoid_logical_lines,
        offsets_match_frame_coordinates,
        max_overlap,
        max_table_overlap,
        degeneracy_pairs,
        degeneracy_classes,
    })
}

/// Nonzero horizontal lines of a table, as `p̄` tuples in increasing order.
pub fn horizontal_support(table: &WignerTable, space: &PhaseSpace, tol: f64) -> Vec<NTuple> {
    let mut lines: Vec<NTuple> = space
        .points()
        .filter(|&a| table.at(space, a).abs() > tol)
        .map(|a| space.tuples_of(a).1)
        .collect();
    lines.sort_unstable_by_key(|p| p.0);
    lines.dedup();
    lines
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogicalTable {
    pub state: String,
    pub support_lines: Vec<String>,
    /// Values indexed `[q_index][p_index]` in field power order.
    pub values: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Code5Report {
    pub p_i: String,
    pub interference_overlaps_logical_lines: bool,
    pub frame: FrameChecks,
    pub zero_l_exact: bool,
    pub encoded_formula_max_deviation: f64,
    pub encoded_support_ok: bool,
    pub syndrome: SyndromeReport,
    pub logical_tables: Vec<LogicalTable>,
}

impl Code5Report {
    pub fn passed(&self) -> bool {
        self.frame.passed()
            && self.zero_l_exact
            && self.encoded_formula_max_deviation <= TOL
            && self.encoded_support_ok
            && self.syndrome.passed()
    }
}

fn logical_table(name: &str, table: &WignerTable, space: &PhaseSpace) -> LogicalTable {
    let d = table.d();
    LogicalTable {
        state: name.to_string(),
        support_lines: horizontal_support(table, space, TOL)
            .into_iter()
            .map(|p| p.display(CODE_QUBITS).to_string())
            .collect(),
        values: (0..d).map(|qi| (0..d).map(|pi| table.get(qi, pi)).collect()).collect(),
    }
}

/// Full analysis for one choice of `p̄_I`.
pub fn code5_report(p_i: NTuple) -> Result<Code5Report> {
    let frame = build_code_frame()?;
    let net = code_net_for(&frame, p_i)?;
    let space = Arc::clone(&frame.space);
    let d = frame.d() as i64;
    let m = logical_m();

    let w0 = wigner_exact(&net, &frame.basis, &frame.zero_l_stabilizer())?;
    let zero_l_exact = space.points().all(|a| {
        let (qi, pi) = space.indices_of(a);
        let want = if space.tuples_of(a).1.is_zero() { d } else { 0 };
        w0.numerator(qi, pi) == Some(want)
    });
    let w1 = wigner_exact(&net, &frame.basis, &frame.one_l_stabilizer())?;

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
    let mut amps = vec![(Complex64::new(h, 0.0), Complex64::new(h, 0.0))];
    for _ in 0..3 {
        let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        amps.push((a / norm, b / norm));
    }
    let mut expected_lines: Vec<NTuple> = vec![NTuple::ZERO, m, p_i, p_i ^ m];
    expected_lines.sort_unstable_by_key(|p| p.0);
    expected_lines.dedup();
    let mut deviation: f64 = 0.0;
    let mut support_ok = true;
    let mut plus_table = None;
    for (a, b) in &amps {
        let psi = QuantumState::Vector(frame.encoded(*a, *b));
        let w = wigner_of_state(&net, &frame.basis, &psi)?;
        deviation = deviation.max(w.max_abs_diff(&encoded_wigner_formula(&frame, p_i, *a, *b)));
        support_ok &= horizontal_support(&w, &space, TOL).iter().all(|p| expected_lines.contains(p));
        plus_table.get_or_insert(w);
    }
    let plus_table = plus_table.expect("at least one encoded state");
    if !p_i_overlaps_logical(p_i) {
        support_ok &= horizontal_support(&plus_table, &space, TOL) == expected_lines;
    }

    Ok(Code5Report {
        p_i: p_i.display(CODE_QUBITS).to_string(),
        interference_overlaps_logical_lines: p_i_overlaps_logical(p_i),
        frame: frame_checks(&frame),
        zero_l_exact,
        encoded_formula_max_deviation: deviation,
        encoded_support_ok: support_ok,
        syndrome: syndrome_analysis(&frame, &net)?,
        logical_tables: vec![
            logical_table("0_L", &w0, &space),
            logical_table("1_L", &w1, &space),
            logical_table("+_L", &plus_table, &space),
        ],
    })
}
