//! Verification routines shared by the command line tool and the tests.

use std::collections::HashSet;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dense::DenseOperator;
use crate::error::{capability, Result};
use crate::field::MAX_QUBITS;
use crate::net::QuantumNet;
use crate::pauli::TranslationBasis;
use crate::phase_space::{Line, PhasePoint, PhaseSpace, Striation};
use crate::state::{QuantumState, StabilizerState};
use crate::wigner::{
    covariance_check, line_sum, point_operator, point_operator_from_lines, table_inner_product, wigner_of_state,
};

/// Largest `n` whose incidence structure is verified exhaustively.
pub const EXHAUSTIVE_GEOMETRY_MAX: u32 = 6;
const SAMPLES: usize = 2000;
const TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometryReport {
    pub n: u32,
    pub striations: usize,
    pub lines: usize,
    pub exhaustive: bool,
    pub counterexample: Option<String>,
}

impl GeometryReport {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn summary(&self) -> String {
        format!(
            "striations={} lines={} incidence={}",
            self.striations,
            self.lines,
            if self.ok() { "OK" } else { "FAIL" }
        )
    }
}

/// Incidence checks: `d + 1` striations of `d` disjoint lines covering the
/// grid, and every pair of distinct points on exactly one common line (so
/// two distinct lines meet at most once). Exhaustive up to
/// [`EXHAUSTIVE_GEOMETRY_MAX`], seeded sampling above.
pub fn geometry_check(n: u32, seed: u64) -> Result<GeometryReport> {
    if n > MAX_QUBITS {
        return Err(capability(format!("geometry supports n <= {MAX_QUBITS}, got {n}")));
    }
    let space = PhaseSpace::standard(n)?;
    let d = space.d();
    let striations = space.striations().count();
    let lines = space.lines().count();
    let exhaustive = n <= EXHAUSTIVE_GEOMETRY_MAX;
    let counterexample = if striations != d + 1 || lines != d * (d + 1) {
        Some(format!("expected {} striations and {} lines", d + 1, d * (d + 1)))
    } else if exhaustive {
        exhaustive_incidence(&space)
    } else {
        sampled_incidence(&space, seed)
    };
    Ok(GeometryReport { n, striations, lines, exhaustive, counterexample })
}

fn point_key(d: usize, a: PhasePoint) -> usize {
    a.q.0 as usize * d + a.p.0 as usize
}

fn exhaustive_incidence(space: &PhaseSpace) -> Option<String> {
    let d = space.d();
    for s in space.striations() {
        let mut seen = vec![false; d * d];
        for c in space.field().elements() {
            let l = Line { striation: s, intercept: c };
            for a in space.points_of_line(&l) {
                if !space.contains(&l, a) {
                    return Some(format!("point {a:?} listed on {l:?} but not contained"));
                }
                let k = point_key(d, a);
                if seen[k] {
                    return Some(format!("striation {s} covers {a:?} twice"));
                }
                seen[k] = true;
            }
        }
    }
    let mut pairs = vec![0u8; d * d * d * d];
    for l in space.lines() {
        let keys: Vec<usize> = space.points_of_line(&l).into_iter().map(|a| point_key(d, a)).collect();
        for (i, &a) in keys.iter().enumerate() {
            for &b in &keys[i + 1..] {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let slot = &mut pairs[lo * d * d + hi];
                *slot = slot.saturating_add(1);
            }
        }
    }
    for a in 0..d * d {
        for b in a + 1..d * d {
            let c = pairs[a * d * d + b];
            if c != 1 {
                return Some(format!("points with keys {a} and {b} share {c} lines"));
            }
        }
    }
    None
}

fn sampled_incidence(space: &PhaseSpace, seed: u64) -> Option<String> {
    let d = space.d();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = space.field();
    let mut line_pairs = Vec::with_capacity(SAMPLES / 4);
    let mut point_checks = Vec::with_capacity(SAMPLES);
    for _ in 0..SAMPLES / 4 {
        let a = Line { striation: Striation::from_index(rng.gen_range(0..=d)), intercept: field.element_at(rng.gen_range(0..d)) };
        let b = Line { striation: Striation::from_index(rng.gen_range(0..=d)), intercept: field.element_at(rng.gen_range(0..d)) };
        line_pairs.push((a, b));
    }
    for _ in 0..SAMPLES {
        let a = space.point_at(rng.gen_range(0..d), rng.gen_range(0..d));
        let b = space.point_at(rng.gen_range(0..d), rng.gen_range(0..d));
        point_checks.push((a, b, Striation::from_index(rng.gen_range(0..=d))));
    }
    let bad_pair = line_pairs.par_iter().find_map_first(|(a, b)| {
        if a == b {
            return None;
        }
        let pa: HashSet<PhasePoint> = space.points_of_line(a).into_iter().collect();
        let common = space.points_of_line(b).into_iter().filter(|x| pa.contains(x)).count();
        let want = usize::from(a.striation != b.striation);
        (common != want || pa.len() != d).then(|| format!("{a:?} and {b:?} share {common} points"))
    });
    if bad_pair.is_some() {
        return bad_pair;
    }
    point_checks.par_iter().find_map_first(|&(a, b, s)| {
        let l = space.line_in_striation_through(s, a);
        if !space.contains(&l, a) {
            return Some(format!("{a:?} not on its line in striation {s}"));
        }
        if a == b {
            return None;
        }
        let through = lines_through_both(space, a, b);
        (through != 1).then(|| format!("{a:?} and {b:?} lie on {through} common lines"))
    })
}

/// Number of lines containing both points.
fn lines_through_both(space: &PhaseSpace, a: PhasePoint, b: PhasePoint) -> usize {
    space
        .striations()
        .filter(|&s| space.line_in_striation_through(s, a) == space.line_in_striation_through(s, b))
        .count()
}

/// Largest `| |⟨u|v⟩|² - 1/d |` over vectors of different bases, plus the
/// largest deviation from orthonormality within a basis.
pub fn mub_deviation(net: &QuantumNet, basis: &TranslationBasis) -> Result<f64> {
    let bases = net.mub_bases(basis)?;
    let d = net.d();
    let vecs: Vec<Vec<Vec<Complex64>>> = bases
        .iter()
        .map(|b| b.iter().map(crate::net::projector_vector).collect())
        .collect();
    let mut worst: f64 = 0.0;
    for (i, bi) in vecs.iter().enumerate() {
        for (j, bj) in vecs.iter().enumerate() {
            for (ki, u) in bi.iter().enumerate() {
                for (kj, v) in bj.iter().enumerate() {
                    let o = crate::dense::inner(u, v).norm_sqr();
                    let want = if i != j {
                        1.0 / d as f64
                    } else if ki == kj {
                        1.0
                    } else {
                        0.0
                    };
                    worst = worst.max((o - want).abs());
                }
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AxiomReport {
    pub line_sum: f64,
    pub inner_product: f64,
    pub covariance: f64,
    pub point_operator_agreement: f64,
    pub normalization: f64,
}

impl AxiomReport {
    pub fn max(&self) -> f64 {
        [self.line_sum, self.inner_product, self.covariance, self.point_operator_agreement, self.normalization]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn ok(&self) -> bool {
        self.max() <= TOL
    }

    fn merge(mut self, o: AxiomReport) -> AxiomReport {
        self.line_sum = self.line_sum.max(o.line_sum);
        self.inner_product = self.inner_product.max(o.inner_product);
        self.covariance = self.covariance.max(o.covariance);
        self.point_operator_agreement = self.point_operator_agreement.max(o.point_operator_agreement);
        self.normalization = self.normalization.max(o.normalization);
        self
    }
}

/// Maximum deviations of the defining Wigner axioms for one net and a set
/// of states: line sums against `Tr(ρ P(λ))`, table inner products against
/// `Tr(ρ₁ρ₂)`, covariance under a translation, and agreement of the two
/// point-operator constructions.
pub fn wigner_axioms(
    net: &QuantumNet,
    basis: &TranslationBasis,
    states: &[QuantumState],
    delta: PhasePoint,
) -> Result<AxiomReport> {
    let space = net.space();
    let projectors: Vec<(Line, DenseOperator)> = space
        .lines()
        .map(|l| net.line_projector(basis, &l).map(|p| (l, p)))
        .collect::<Result<_>>()?;
    let tables = states
        .iter()
        .map(|s| wigner_of_state(net, basis, s))
        .collect::<Result<Vec<_>>>()?;
    let densities: Vec<DenseOperator> = states.iter().map(QuantumState::density).collect();
    let mut rep = AxiomReport::default();
    for ((w, rho), s) in tables.iter().zip(&densities).zip(states) {
        rep.normalization = rep.normalization.max((w.sum() - 1.0).abs());
        for (l, p) in &projectors {
            let dev = (line_sum(w, space, l) - rho.trace_product(p).re).abs();
            rep.line_sum = rep.line_sum.max(dev);
        }
        rep.covariance = rep.covariance.max(covariance_check(net, basis, s, delta)?);
    }
    for (i, wi) in tables.iter().enumerate() {
        for (j, wj) in tables.iter().enumerate().skip(i) {
            let dev = (table_inner_product(wi, wj)? - densities[i].trace_product(&densities[j]).re).abs();
            rep.inner_product = rep.inner_product.max(dev);
        }
    }
    let points: Vec<PhasePoint> = space.points().collect();
    let agreement = points
        .par_iter()
        .map(|&a| -> Result<f64> {
            Ok(point_operator(net, basis, a)?.max_abs_diff(&point_operator_from_lines(net, basis, a)?))
        })
        .collect::<Result<Vec<f64>>>()?;
    rep.point_operator_agreement = agreement.into_iter().fold(0.0, f64::max);
    Ok(rep)
}

/// Axiom checks over seeded random nets and states (half pure, half mixed).
pub fn random_wigner_axioms(n: u32, nets: usize, states: usize, seed: u64) -> Result<AxiomReport> {
    let space = PhaseSpace::standard(n)?;
    let basis = TranslationBasis::standard(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jobs: Vec<(u64, Vec<QuantumState>, PhasePoint)> = (0..nets)
        .map(|_| {
            let st = (0..states)
                .map(|k| {
                    if k % 2 == 0 {
                        QuantumState::random_pure(n, &mut rng)
                    } else {
                        QuantumState::random_mixed(n, 3, &mut rng)
                    }
                })
                .collect();
            let delta = space.point_at(rng.gen_range(0..space.d()), rng.gen_range(0..space.d()));
            (rng.gen(), st, delta)
        })
        .collect();
    let reports = jobs
        .par_iter()
        .map(|(net_seed, st, delta)| {
            let net = QuantumNet::random(Arc::clone(&space), *net_seed);
            wigner_axioms(&net, &basis, st, *delta)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reports.into_iter().fold(AxiomReport::default(), AxiomReport::merge))
}

/// The Bell state `(|00⟩ + |11⟩)/√2` as a stabilizer state.
pub fn bell_state() -> StabilizerState {
    use crate::pauli::translation_op;
    use crate::tuple::NTuple;
    StabilizerState::new(vec![
        translation_op(2, NTuple(0b11), NTuple::ZERO),
        translation_op(2, NTuple::ZERO, NTuple(0b11)),
    ])
    .expect("XX and ZZ stabilize a Bell state")
}

/// Which of the two Bell-state patterns a table shows: `a` when nonzero only
/// at four points (`1/4` each), `b` for `±1/8` everywhere.
pub fn bell_pattern(numerators: &[i64]) -> Option<char> {
    let mut sorted = numerators.to_vec();
    sorted.sort_unstable();
    let mut a = vec![0i64; 12];
    a.extend([4; 4]);
    let mut b = vec![-2i64; 4];
    b.extend([2; 12]);
    if sorted == a {
        Some('a')
    } else if sorted == b {
        Some('b')
    } else {
        None
    }
}
