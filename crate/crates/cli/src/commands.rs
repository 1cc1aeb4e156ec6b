use std::fmt;
use std::fs;
use std::sync::Arc;

use gfwigner::checks::{bell_pattern, bell_state, geometry_check, random_wigner_axioms};
use gfwigner::code5::code5_report;
use gfwigner::interference::{
    interference_profile, interference_profile_direct, localized_net_for, overlap_search, overlap_search_full_nets,
    run_average_experiment, ExperimentConfig,
};
use gfwigner::pauli::translation_op;
use gfwigner::wigner::{wigner_exact, wigner_of_state};
use gfwigner::{NTuple, PhaseSpace, QuantumNet, QuantumState, StabilizerState, TranslationBasis};
use num_complex::Complex64;

use crate::{Code5Args, Common, Format, GeometryArgs, OverlapArgs, StatsArgs, WignerArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAPABILITY: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(gfwigner::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(gfwigner::Error::InvalidArgument(_) | gfwigner::Error::Json(_)) => EXIT_USAGE,
            CliError::Lib(gfwigner::Error::Capability(_)) => EXIT_CAPABILITY,
            CliError::Lib(_) => EXIT_CHECK,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<gfwigner::Error> for CliError {
    fn from(e: gfwigner::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(e.into())
    }
}

type CliResult = Result<u8, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("{flag} is required")))
}

/// Write `name` under `--out`, or print it when no directory was given and
/// `primary` is set.
fn emit(common: &Common, name: &str, contents: &str, primary: bool) -> Result<(), CliError> {
    match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), contents)?;
        }
        None if primary => print!("{contents}"),
        None => {}
    }
    Ok(())
}

fn report_checks(checks: &[(&str, bool, String)]) -> u8 {
    let mut ok = true;
    for (name, pass, detail) in checks {
        println!("selftest {name}: {} {detail}", if *pass { "PASS" } else { "FAIL" });
        ok &= pass;
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_CHECK
    }
}

pub fn geometry(a: &GeometryArgs) -> CliResult {
    if a.common.selftest {
        let mut checks = Vec::new();
        for n in 1..=4 {
            let r = geometry_check(n, a.seed)?;
            checks.push(("geometry", r.ok(), format!("n={n} {}", r.summary())));
        }
        return Ok(report_checks(&checks));
    }
    let n = require(a.n, "--n")?;
    let r = geometry_check(n, a.seed)?;
    println!("{}", r.summary());
    emit(&a.common, "geometry.json", &serde_json::to_string_pretty(&r).map_err(gfwigner::Error::from)?, false)?;
    match &r.counterexample {
        None => Ok(EXIT_OK),
        Some(c) => {
            eprintln!("counterexample: {c}");
            Ok(EXIT_CHECK)
        }
    }
}

enum StateSpec {
    Stabilizer(StabilizerState),
    Dense(QuantumState),
}

fn parse_state(spec: &str, n: u32) -> Result<StateSpec, CliError> {
    if let Some(bits) = spec.strip_prefix("comp:") {
        let k = NTuple::parse(bits, n).map_err(|e| usage(e.to_string()))?;
        let gens = (1..=n as usize)
            .map(|j| {
                let z = translation_op(n, NTuple::ZERO, NTuple::unit(j, n));
                if k.component(j, n) {
                    z.times_i_pow(2)
                } else {
                    z
                }
            })
            .collect();
        return Ok(StateSpec::Stabilizer(StabilizerState::new(gens)?));
    }
    if spec == "bell" {
        if n != 2 {
            return Err(usage("the bell state needs --n 2"));
        }
        return Ok(StateSpec::Stabilizer(bell_state()));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
        let amps = parse_amplitudes(&text)?;
        if amps.len() != 1 << n {
            return Err(usage(format!("state file has {} amplitudes, expected {}", amps.len(), 1 << n)));
        }
        return Ok(StateSpec::Dense(QuantumState::pure(amps)?));
    }
    Err(usage(format!("unknown state spec '{spec}' (use comp:<bits>, bell or file:<path>)")))
}

/// JSON `[[re, im], ...]`, or one `re im` pair per line.
fn parse_amplitudes(text: &str) -> Result<Vec<Complex64>, CliError> {
    if text.trim_start().starts_with('[') {
        let pairs: Vec<[f64; 2]> =
            serde_json::from_str(text).map_err(|e| usage(format!("bad amplitude JSON: {e}")))?;
        return Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect());
    }
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|l| {
            let parts: Vec<f64> = l
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| usage(format!("bad amplitude '{t}': {e}"))))
                .collect::<Result<_, _>>()?;
            match parts.as_slice() {
                [re] => Ok(Complex64::new(*re, 0.0)),
                [re, im] => Ok(Complex64::new(*re, *im)),
                _ => Err(usage(format!("expected 're im' per line, got '{l}'"))),
            }
        })
        .collect()
}

/// The net named by `--net-file` or `--seed`; with a net file, `--n` may be omitted.
fn load_net(a: &WignerArgs) -> Result<QuantumNet, CliError> {
    if let Some(path) = &a.net_file {
        if a.seed.is_some() {
            return Err(usage("give either --seed or --net-file"));
        }
        let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let net = QuantumNet::from_json(&text)?;
        if let Some(n) = a.n.filter(|&n| n != net.n()) {
            return Err(usage(format!("net file has n = {}, expected {n}", net.n())));
        }
        return Ok(net);
    }
    let n = require(a.n, "--n")?;
    let space = PhaseSpace::standard(n)?;
    Ok(match a.seed {
        Some(seed) => QuantumNet::random(space, seed),
        None => QuantumNet::all_plus(space),
    })
}

pub fn wigner(a: &WignerArgs) -> CliResult {
    if a.common.selftest {
        let mut checks = Vec::new();
        for n in 1..=3 {
            let r = random_wigner_axioms(n, 4, 4, a.seed.unwrap_or(1))?;
            checks.push(("wigner-axioms", r.ok(), format!("n={n} max_deviation={:.3e}", r.max())));
        }
        let space = PhaseSpace::standard(2)?;
        let basis = TranslationBasis::standard(2);
        let mut forms = std::collections::BTreeSet::new();
        for seed in 0..64 {
            let net = QuantumNet::random(Arc::clone(&space), seed);
            let w = wigner_exact(&net, &basis, &bell_state())?;
            let nums: Vec<i64> = (0..16).map(|k| w.numerator(k / 4, k % 4).unwrap_or(0)).collect();
            forms.insert(bell_pattern(&nums));
        }
        let ok = forms.iter().all(Option::is_some) && !forms.is_empty();
        checks.push(("bell-patterns", ok, format!("forms={forms:?}")));
        return Ok(report_checks(&checks));
    }
    let spec = a.state.as_deref().ok_or_else(|| usage("--state is required"))?;
    let net = load_net(a)?;
    let n = net.n();
    let state = parse_state(spec, n)?;
    let basis = TranslationBasis::standard(n);
    let table = match &state {
        StateSpec::Stabilizer(s) => wigner_exact(&net, &basis, s)?,
        StateSpec::Dense(s) => wigner_of_state(&net, &basis, s)?,
    };
    let (name, body) = match a.common.format {
        Format::Csv => ("wigner.csv", table.to_csv()),
        Format::Json => ("wigner.json", table.to_json() + "\n"),
    };
    emit(&a.common, name, &body, true)?;
    let sum = table.sum();
    eprintln!("sum={sum:.12} exact={}", table.is_exact());
    if spec == "bell" {
        let nums: Vec<i64> = (0..16).map(|k| table.numerator(k / 4, k % 4).unwrap_or(0)).collect();
        match bell_pattern(&nums) {
            Some(p) => eprintln!("bell_pattern={p}"),
            None => {
                eprintln!("bell_pattern=unrecognized");
                return Ok(EXIT_CHECK);
            }
        }
    }
    Ok(if (sum - 1.0).abs() <= 1e-10 { EXIT_OK } else { EXIT_CHECK })
}

pub fn overlap(a: &OverlapArgs) -> CliResult {
    let n = if a.common.selftest { 2 } else { require(a.n, "--n")? };
    let space = PhaseSpace::standard(n)?;
    let report = overlap_search(Arc::clone(&space))?;
    if a.common.selftest {
        let full = overlap_search_full_nets(space)?;
        let per_m_ok = report.per_m.iter().all(|(_, c)| *c > 0);
        return Ok(report_checks(&[
            ("overlap", report.satisfying == 0, format!("n=2 satisfying={}", report.satisfying)),
            ("overlap-full-nets", full.1 == 0, format!("checked={} satisfying={}", full.0, full.1)),
            ("overlap-single-m", per_m_ok, format!("{:?}", report.per_m)),
        ]));
    }
    println!("satisfying_nets={}", report.satisfying);
    println!("assignments={} relevant_signs={}", report.assignments, report.relevant_signs);
    if n == 2 {
        let (checked, sat) = overlap_search_full_nets(space)?;
        println!("full_nets_checked={checked} full_nets_satisfying={sat}");
    }
    emit(&a.common, "overlap.json", &serde_json::to_string_pretty(&report).map_err(gfwigner::Error::from)?, false)?;
    Ok(EXIT_OK)
}

fn parse_range(s: &str) -> Result<(u32, u32), CliError> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| usage(format!("bad range '{s}', expected A..B")))?;
    let lo = lo.trim().parse().map_err(|_| usage(format!("bad range start in '{s}'")))?;
    let hi = hi.trim().parse().map_err(|_| usage(format!("bad range end in '{s}'")))?;
    if lo > hi {
        return Err(usage(format!("empty range '{s}'")));
    }
    Ok((lo, hi))
}

pub fn interference_stats(a: &StatsArgs) -> CliResult {
    if a.common.selftest {
        return interference_selftest(a.seed.unwrap_or(1));
    }
    let (n_min, n_max) = match (&a.n_range, a.n) {
        (Some(r), None) => parse_range(r)?,
        (None, Some(n)) => (n, n),
        (Some(_), Some(_)) => return Err(usage("give either --n or --n-range")),
        (None, None) => return Err(usage("--n-range is required")),
    };
    let seed = require(a.seed, "--seed")?;
    if a.nets == 0 {
        return Err(usage("--nets must be positive"));
    }
    let cfg = ExperimentConfig { n_min, n_max, nets_per_n: a.nets, master_seed: seed };
    let out = run_average_experiment(&cfg)?;
    let fit = if out.aggregates.len() >= 3 { Some(out.fit()?) } else { None };
    match a.common.format {
        Format::Csv => {
            emit(&a.common, "aggregate.csv", &out.aggregate_csv(), true)?;
            emit(&a.common, "records.csv", &out.records_csv(), false)?;
        }
        Format::Json => {
            let agg = serde_json::to_string_pretty(&out.aggregates).map_err(gfwigner::Error::from)? + "\n";
            emit(&a.common, "aggregate.json", &agg, true)?;
            let recs = serde_json::to_string_pretty(&out.records).map_err(gfwigner::Error::from)? + "\n";
            emit(&a.common, "records.json", &recs, false)?;
        }
    }
    emit(&a.common, "decay.dat", &out.decay_dat(), false)?;
    emit(&a.common, "entropy.dat", &out.entropy_dat(), false)?;
    if let Some(f) = fit {
        emit(&a.common, "fit.json", &(serde_json::to_string_pretty(&f).map_err(gfwigner::Error::from)? + "\n"), false)?;
        eprintln!("fit slope={:.6} intercept={:.6} r_squared={:.6} points={}", f.slope, f.intercept, f.r_squared, f.points);
    }
    Ok(EXIT_OK)
}

fn interference_selftest(seed: u64) -> CliResult {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut fwht_ok = true;
    let mut conj_ok = true;
    let mut local_ok = true;
    for n in 1..=6 {
        let space = PhaseSpace::standard(n)?;
        let net = QuantumNet::random(Arc::clone(&space), rng.gen());
        for m in 1..1u32 << n {
            let fast = interference_profile(&net, NTuple(m))?;
            fwht_ok &= fast == interference_profile_direct(&net, NTuple(m))?;
            conj_ok &= fast.is_conjugate_symmetric();
        }
        let m = NTuple(rng.gen_range(1..1u32 << n));
        let q_i = NTuple(rng.gen_range(0..1u32 << n));
        let prof = interference_profile(&localized_net_for(Arc::clone(&space), m, q_i)?, m)?;
        let mut want = vec![q_i, q_i ^ m];
        want.sort_unstable_by_key(|t| t.0);
        local_ok &= prof.support() == want;
    }
    Ok(report_checks(&[
        ("fwht-vs-direct", fwht_ok, "n=1..6".into()),
        ("conjugate-symmetry", conj_ok, "n=1..6".into()),
        ("localized-net", local_ok, "n=1..6".into()),
    ]))
}

pub fn code5(a: &Code5Args) -> CliResult {
    let p_i = NTuple::parse(&a.p_index, 5).map_err(|e| usage(e.to_string()))?;
    let report = code5_report(p_i)?;
    if a.common.selftest {
        return Ok(report_checks(&[
            ("code5-frame", report.frame.passed(), format!("{:?}", report.frame)),
            ("code5-zero-l", report.zero_l_exact, String::new()),
            (
                "code5-encoded",
                report.encoded_formula_max_deviation <= 1e-10 && report.encoded_support_ok,
                format!("max_deviation={:.3e}", report.encoded_formula_max_deviation),
            ),
            ("code5-syndromes", report.syndrome.passed(), format!("max_overlap={:.3e}", report.syndrome.max_overlap)),
        ]));
    }
    let json = serde_json::to_string_pretty(&report).map_err(gfwigner::Error::from)? + "\n";
    emit(&a.common, "code5.json", &json, true)?;
    eprintln!(
        "offsets={} distinct={} degeneracy_classes={} overlaps_logical={} status={}",
        report.syndrome.offsets.len(),
        report.syndrome.offsets_distinct,
        report.syndrome.degeneracy_classes,
        report.interference_overlaps_logical_lines,
        if report.passed() { "PASS" } else { "FAIL" }
    );
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK })
}
