//! Interference between two computational basis states.
//!
//! For `a|0̄⟩ + b|m̄⟩` the cross term of the Wigner function separates as
//! `2 Re{a b* (-1)^{m̄·p̄} F(q̄)}` with
//! `F(q̄) = d⁻² Σ_p' f_(m̄,p') (-1)^{q̄·p'} i^{m̄·p'}`.
//! Profiles are kept exact as Gaussian-integer numerators over `d²`.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{capability, invalid, Result};
use crate::field::MAX_QUBITS;
use crate::net::{enumerate_nets, NetEnumeration, QuantumNet, SignTable};
use crate::phase_space::{PhaseSpace, Striation};
use crate::transform::{fwht, GaussianInt};
use crate::tuple::NTuple;
use crate::wigner::{WignerTable, WignerValues};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterferenceProfile {
    n: u32,
    m: NTuple,
    /// `d² F(q̄)`, indexed by `q̄`.
    numerators: Vec<GaussianInt>,
}

impl InterferenceProfile {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> usize {
        1 << self.n
    }

    pub fn m(&self) -> NTuple {
        self.m
    }

    pub fn numerators(&self) -> &[GaussianInt] {
        &self.numerators
    }

    pub fn value(&self, q: NTuple) -> Complex64 {
        let g = self.numerators[q.0 as usize];
        let den = (self.d() * self.d()) as f64;
        Complex64::new(g.re as f64 / den, g.im as f64 / den)
    }

    /// `R(q̄) = |Re F(q̄)|`.
    pub fn r_values(&self) -> Vec<f64> {
        let den = (self.d() * self.d()) as f64;
        self.numerators.iter().map(|g| g.re.abs() as f64 / den).collect()
    }

    /// `I(q̄) = |Im F(q̄)|`.
    pub fn i_values(&self) -> Vec<f64> {
        let den = (self.d() * self.d()) as f64;
        self.numerators.iter().map(|g| g.im.abs() as f64 / den).collect()
    }

    pub fn max_r(&self) -> f64 {
        self.r_values().into_iter().fold(0.0, f64::max)
    }

    pub fn max_i(&self) -> f64 {
        self.i_values().into_iter().fold(0.0, f64::max)
    }

    /// Positions where `F` is nonzero.
    pub fn support(&self) -> Vec<NTuple> {
        (0..self.d() as u32)
            .map(NTuple)
            .filter(|q| !self.numerators[q.0 as usize].is_zero())
            .collect()
    }

    /// `F(q̄ + m̄) = F(q̄)*` for every `q̄`.
    pub fn is_conjugate_symmetric(&self) -> bool {
        (0..self.d()).all(|q| self.numerators[q ^ self.m.0 as usize] == self.numerators[q].conj())
    }
}

fn check_m(n: u32, m: NTuple) -> Result<()> {
    if m.is_zero() || m.0 >> n != 0 {
        return Err(invalid(format!("displacement must be a nonzero {n}-tuple")));
    }
    Ok(())
}

/// `g(p') = f_(m̄,p') i^{m̄·p'}`.
fn profile_input(n: u32, m: NTuple, f: impl Fn(NTuple) -> i8) -> Vec<GaussianInt> {
    (0..1u32 << n)
        .map(|p| {
            let p = NTuple(p);
            GaussianInt::i_pow(m.dot(p)).scale(f(p) as i64)
        })
        .collect()
}

fn profile_from_input(n: u32, m: NTuple, mut g: Vec<GaussianInt>) -> InterferenceProfile {
    fwht(&mut g);
    InterferenceProfile { n, m, numerators: g }
}

pub fn interference_profile(net: &QuantumNet, m: NTuple) -> Result<InterferenceProfile> {
    let n = net.n();
    check_m(n, m)?;
    let space = net.space();
    let g = profile_input(n, m, |p| net.f_of(space.point_from_tuples(m, p)));
    Ok(profile_from_input(n, m, g))
}

/// Same as [`interference_profile`], reading signs from a precomputed table.
pub fn interference_profile_from_table(table: &SignTable, m: NTuple) -> Result<InterferenceProfile> {
    let n = table.n();
    check_m(n, m)?;
    let g = profile_input(n, m, |p| table.get(m, p));
    Ok(profile_from_input(n, m, g))
}

/// Reference evaluation of the profile by direct `d`-term sums.
pub fn interference_profile_direct(net: &QuantumNet, m: NTuple) -> Result<InterferenceProfile> {
    let n = net.n();
    check_m(n, m)?;
    let space = net.space();
    let g = profile_input(n, m, |p| net.f_of(space.point_from_tuples(m, p)));
    let numerators = (0..1u32 << n)
        .map(|q| {
            let mut acc = GaussianInt::ZERO;
            for (p, &v) in g.iter().enumerate() {
                if NTuple(q).dot2(NTuple(p as u32)) == 1 {
                    acc = acc - v;
                } else {
                    acc += v;
                }
            }
            acc
        })
        .collect();
    Ok(InterferenceProfile { n, m, numerators })
}

/// Cross term `2 Re{a b* (-1)^{m̄·p̄} F(q̄)}` over the grid, in power order.
pub fn full_interference_term(net: &QuantumNet, m: NTuple, a: Complex64, b: Complex64) -> Result<WignerTable> {
    let norm = a.norm_sqr() + b.norm_sqr();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("|a|² + |b|² = {norm}, expected 1")));
    }
    let prof = interference_profile(net, m)?;
    let space = net.space();
    let ab = a * b.conj();
    let values = space
        .points()
        .map(|pt| {
            let (q, p) = space.tuples_of(pt);
            let sign = if m.dot2(p) == 1 { -2.0 } else { 2.0 };
            sign * (ab * prof.value(q)).re
        })
        .collect();
    Ok(WignerTable::from_parts(net.n(), WignerValues::Float(values)))
}

/// A net whose profile for `m̄` is `(1+i)/2d` at `q̄_I`, its conjugate at
/// `q̄_I + m̄`, and zero elsewhere. Unconstrained signs are `+1`.
pub fn localized_net_for(space: Arc<PhaseSpace>, m: NTuple, q_i: NTuple) -> Result<QuantumNet> {
    let n = space.n();
    check_m(n, m)?;
    if q_i.0 >> n != 0 {
        return Err(invalid(format!("q_I must be an {n}-tuple")));
    }
    let mut net = QuantumNet::all_plus(Arc::clone(&space));
    for p in 1..1u32 << n {
        let p = NTuple(p);
        let mut target = if q_i.dot2(p) == 1 { -1 } else { 1 };
        // f i^{m·p} must be ±1 for even m·p and ±i for odd m·p
        if m.dot(p) % 4 >= 2 {
            target = -target;
        }
        net.impose(space.point_from_tuples(m, p), target)?;
    }
    Ok(net)
}

/// `-Σ P log_d P` of the normalized input; `None` when the input is all zero.
pub fn normalized_entropy(values: &[f64]) -> Result<Option<f64>> {
    if values.iter().any(|&v| v < 0.0 || v.is_nan()) {
        return Err(invalid("entropy input must be nonnegative"));
    }
    let total: f64 = values.iter().sum();
    if total == 0.0 {
        return Ok(None);
    }
    if values.len() < 2 {
        return Ok(Some(0.0));
    }
    let h: f64 = values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| {
            let p = v / total;
            -p * p.ln()
        })
        .sum();
    Ok(Some((h / (values.len() as f64).ln()).clamp(0.0, 1.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverlapReport {
    pub n: u32,
    /// Independent oblique-ray signs ranged over.
    pub relevant_signs: u32,
    pub assignments: u64,
    pub satisfying: u64,
    /// For each nonzero `m̄` in increasing order, assignments satisfying
    /// that single `F(0̄) = 0` condition.
    pub per_m: Vec<(String, u64)>,
    /// Up to [`MAX_WITNESSES`] satisfying nets, as generator signs.
    pub witnesses: Vec<Vec<Vec<i8>>>,
}

pub const MAX_WITNESSES: usize = 8;

/// One term of `d² F(0̄)` as a function of the oblique sign assignment.
#[derive(Clone, Copy)]
struct Term {
    mask: u32,
    value: GaussianInt,
}

/// Count assignments of the oblique-ray signs (vertical and horizontal rays
/// fixed to `+1`) for which `F(0̄) = 0` for every nonzero `m̄`.
pub fn overlap_search(space: Arc<PhaseSpace>) -> Result<OverlapReport> {
    let n = space.n();
    if !(2..=3).contains(&n) {
        return Err(capability(format!("exhaustive overlap search supports n = 2 or 3, got {n}")));
    }
    let d = space.d();
    let plus = QuantumNet::all_plus(Arc::clone(&space));
    let terms: Vec<Vec<Term>> = (1..d as u32)
        .map(|m| {
            let m = NTuple(m);
            (0..d as u32)
                .map(|p| {
                    let p = NTuple(p);
                    let beta = space.point_from_tuples(m, p);
                    let value = GaussianInt::i_pow(m.dot(p)).scale(plus.f_of(beta) as i64);
                    let mask = match space.striation_of_ray_through(beta) {
                        Some(Striation::Oblique(k)) => {
                            let coeffs = space.ray_coefficients(space.ray_parameter(Striation::Oblique(k), beta));
                            coeffs << (k * n)
                        }
                        _ => 0,
                    };
                    Term { mask, value }
                })
                .collect()
        })
        .collect();
    let bits = n * (d as u32 - 1);
    let total = 1u64 << bits;

    #[derive(Clone)]
    struct Acc {
        all: u64,
        per_m: Vec<u64>,
        witnesses: Vec<u32>,
    }
    let empty = || Acc { all: 0, per_m: vec![0; d - 1], witnesses: Vec::new() };
    let acc = (0..total as u32)
        .into_par_iter()
        .fold(empty, |mut acc, assign| {
            let mut ok = true;
            for (mi, row) in terms.iter().enumerate() {
                let mut s = GaussianInt::ZERO;
                for t in row {
                    if (assign & t.mask).count_ones() & 1 == 1 {
                        s = s - t.value;
                    } else {
                        s += t.value;
                    }
                }
                if s.is_zero() {
                    acc.per_m[mi] += 1;
                } else {
                    ok = false;
                }
            }
            if ok {
                acc.all += 1;
                if acc.witnesses.len() < MAX_WITNESSES {
                    acc.witnesses.push(assign);
                }
            }
            acc
        })
        .reduce(empty, |mut a, b| {
            a.all += b.all;
            for (x, y) in a.per_m.iter_mut().zip(b.per_m) {
                *x += y;
            }
            a.witnesses.extend(b.witnesses);
            a.witnesses.sort_unstable();
            a.witnesses.truncate(MAX_WITNESSES);
            a
        });

    let witnesses = acc
        .witnesses
        .iter()
        .map(|&assign| {
            let mut net = QuantumNet::all_plus(Arc::clone(&space));
            for k in 0..d as u32 - 1 {
                net.set_neg_mask(Striation::Oblique(k), assign >> (k * n));
            }
            net.gen_signs()
        })
        .collect();
    Ok(OverlapReport {
        n,
        relevant_signs: bits,
        assignments: total,
        satisfying: acc.all,
        per_m: (1..d as u32)
            .map(|m| NTuple(m).display(n).to_string())
            .zip(acc.per_m)
            .collect(),
        witnesses,
    })
}

/// Check `F(0̄) = 0` for all `m̄` over every net with all signs free.
/// Returns `(nets checked, nets satisfying)`.
pub fn overlap_search_full_nets(space: Arc<PhaseSpace>) -> Result<(u64, u64)> {
    let n = space.n();
    let iter = enumerate_nets(Arc::clone(&space), &NetEnumeration::All)?;
    let total = iter.len_total();
    let satisfying = iter
        .filter(|net| {
            let table = net.sign_table();
            (1..1u32 << n).all(|m| {
                let g = profile_input(n, NTuple(m), |p| table.get(NTuple(m), p));
                g.into_iter().fold(GaussianInt::ZERO, |a, b| a + b).is_zero()
            })
        })
        .count() as u64;
    Ok((total, satisfying))
}

/// One `(net, m̄)` sample of the averaging experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub n: u32,
    pub net_seed: u64,
    pub m: NTuple,
    /// `max R · d`.
    pub max_r: f64,
    /// `max I · d`.
    pub max_i: f64,
    pub entropy_r: Option<f64>,
    pub entropy_i: Option<f64>,
}

impl ExperimentRecord {
    /// Bit 0: `R` identically zero; bit 1: `I` identically zero.
    pub fn degenerate_flag(&self) -> u8 {
        u8::from(self.entropy_r.is_none()) | u8::from(self.entropy_i.is_none()) << 1
    }

    fn from_profile(net_seed: u64, prof: &InterferenceProfile) -> Result<ExperimentRecord> {
        let d = prof.d() as f64;
        Ok(ExperimentRecord {
            n: prof.n(),
            net_seed,
            m: prof.m(),
            max_r: prof.max_r() * d,
            max_i: prof.max_i() * d,
            entropy_r: normalized_entropy(&prof.r_values())?,
            entropy_i: normalized_entropy(&prof.i_values())?,
        })
    }
}

/// Per-`n` averages. `mean_ratio` and `mean_entropy` pool the `R` and `I`
/// samples; the split statistics are kept alongside.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub n: u32,
    pub records: usize,
    pub mean_ratio: f64,
    pub mean_dev_ratio: f64,
    pub mean_entropy: f64,
    pub mean_dev_entropy: f64,
    pub r: Stat,
    pub i: Stat,
    pub entropy_r: Stat,
    pub entropy_i: Stat,
    pub degenerate_r: usize,
    pub degenerate_i: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub mean_dev: f64,
}

impl Stat {
    pub fn of(xs: &[f64]) -> Stat {
        if xs.is_empty() {
            return Stat { mean: f64::NAN, mean_dev: f64::NAN };
        }
        let mean = pairwise_sum(xs) / xs.len() as f64;
        let devs: Vec<f64> = xs.iter().map(|x| (x - mean).abs()).collect();
        Stat { mean, mean_dev: pairwise_sum(&devs) / xs.len() as f64 }
    }
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub n_min: u32,
    pub n_max: u32,
    pub nets_per_n: usize,
    pub master_seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub records: Vec<ExperimentRecord>,
    pub aggregates: Vec<Aggregate>,
}

/// Net seeds for one `n`: a ChaCha stream selected by `n` under the master seed.
pub fn net_seeds(master_seed: u64, n: u32, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(n as u64);
    (0..count).map(|_| rng.next_u64()).collect()
}

/// Random-net average of interference maxima and entropies, for every
/// nonzero `m̄`. Output is independent of the worker count.
pub fn run_average_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    if cfg.n_min == 0 || cfg.n_min > cfg.n_max {
        return Err(invalid(format!("bad n range {}..{}", cfg.n_min, cfg.n_max)));
    }
    if cfg.n_max > MAX_QUBITS {
        return Err(capability(format!("experiment supports n <= {MAX_QUBITS}, got {}", cfg.n_max)));
    }
    let mut records = Vec::new();
    let mut aggregates = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        let space = PhaseSpace::standard(n)?;
        let seeds = net_seeds(cfg.master_seed, n, cfg.nets_per_n);
        let per_net: Vec<Vec<ExperimentRecord>> = seeds
            .par_iter()
            .map(|&seed| {
                let table = QuantumNet::random(Arc::clone(&space), seed).sign_table();
                (1..1u32 << n)
                    .into_par_iter()
                    .map(|m| {
                        let prof = interference_profile_from_table(&table, NTuple(m))?;
                        ExperimentRecord::from_profile(seed, &prof)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let recs: Vec<ExperimentRecord> = per_net.into_iter().flatten().collect();
        aggregates.push(aggregate(n, &recs));
        records.extend(recs);
    }
    Ok(ExperimentOutput { records, aggregates })
}

fn aggregate(n: u32, recs: &[ExperimentRecord]) -> Aggregate {
    let rs: Vec<f64> = recs.iter().map(|r| r.max_r).collect();
    let is: Vec<f64> = recs.iter().map(|r| r.max_i).collect();
    let ers: Vec<f64> = recs.iter().filter_map(|r| r.entropy_r).collect();
    let eis: Vec<f64> = recs.iter().filter_map(|r| r.entropy_i).collect();
    let pooled_ratio: Vec<f64> = rs.iter().chain(&is).copied().collect();
    let pooled_entropy: Vec<f64> = ers.iter().chain(&eis).copied().collect();
    let ratio = Stat::of(&pooled_ratio);
    let entropy = Stat::of(&pooled_entropy);
    Aggregate {
        n,
        records: recs.len(),
        mean_ratio: ratio.mean,
        mean_dev_ratio: ratio.mean_dev,
        mean_entropy: entropy.mean,
        mean_dev_entropy: entropy.mean_dev,
        r: Stat::of(&rs),
        i: Stat::of(&is),
        entropy_r: Stat::of(&ers),
        entropy_i: Stat::of(&eis),
        degenerate_r: recs.len() - ers.len(),
        degenerate_i: recs.len() - eis.len(),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.12}")).unwrap_or_default()
}

impl ExperimentOutput {
    pub fn records_csv(&self) -> String {
        let mut out = String::from("n,seed,m_bits,maxR,maxI,entropyR,entropyI,degenerate\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{:.12},{:.12},{},{},{}\n",
                r.n,
                r.net_seed,
                r.m.display(r.n),
                r.max_r,
                r.max_i,
                opt(r.entropy_r),
                opt(r.entropy_i),
                r.degenerate_flag()
            ));
        }
        out
    }

    pub fn aggregate_csv(&self) -> String {
        let mut out = String::from("n,mean_ratio,mean_dev_ratio,mean_entropy,mean_dev_entropy\n");
        for a in &self.aggregates {
            out.push_str(&format!(
                "{},{:.12},{:.12},{:.12},{:.12}\n",
                a.n, a.mean_ratio, a.mean_dev_ratio, a.mean_entropy, a.mean_dev_entropy
            ));
        }
        out
    }

    /// Two-column `n mean_ratio` data.
    pub fn decay_dat(&self) -> String {
        let mut out = String::from("# n mean_ratio\n");
        for a in &self.aggregates {
            out.push_str(&format!("{} {:.12}\n", a.n, a.mean_ratio));
        }
        out
    }

    /// Two-column `n mean_entropy` data.
    pub fn entropy_dat(&self) -> String {
        let mut out = String::from("# n mean_entropy\n");
        for a in &self.aggregates {
            out.push_str(&format!("{} {:.12}\n", a.n, a.mean_entropy));
        }
        out
    }

    pub fn fit(&self) -> Result<FitResult> {
        let pts: Vec<(f64, f64)> = self.aggregates.iter().map(|a| (a.n as f64, a.mean_ratio)).collect();
        fit_exponential(&pts)
    }
}

/// Least squares line through `(n, ln ratio)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

pub fn fit_exponential(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(invalid("an exponential fit needs at least 3 points"));
    }
    if points.iter().any(|&(_, y)| y.is_nan() || y <= 0.0) {
        return Err(invalid("ratios must be positive"));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("fit needs at least two distinct n"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(FitResult { slope, intercept, r_squared, points: points.len() })
}
