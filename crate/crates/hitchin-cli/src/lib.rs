//! Command implementations behind the `hitchin` binary.
//!
//! Four commands: `gen` draws a certified-stable pair, `analyze` reports
//! the invariants of a pair file, `verify` runs the Poisson-structure
//! comparison at one moduli point, and `suite` sweeps a seeded grid of
//! points through every check. All outputs are JSON with rationals as
//! decimal strings; everything except the verify timing field is
//! byte-deterministic for a fixed seed.
//!
//! Exit-code contract: 0 success, 1 verification failure, 2 input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use hitchin_core::defm::{
    end_complex, hyper_h1_basis, serre_pairing, serre_pairing_matrix, random_coboundary,
};
use hitchin_core::exact::{format_rat, parse_rat, rat_is_zero, RatMatrix};
use hitchin_core::hitchin::{
    sample_sigma0, sample_stable_pair, HitchinPair, PairFile, PoissonSection, StabilityCert,
};
use hitchin_core::poisson::{
    hamiltonian_commutation, poisson_hitchin_for, poisson_sheaf_for, skew_check,
    verify_theorem1_at, windowed_agreement, PointAnalysis, SkewReport, TheoremReport,
};
use hitchin_core::spectral::{
    fitting_determinant_agrees, genus, h0_normal_restriction, phi, smoothness_certificate,
    spectral_curve, SmoothCert,
};

/// PRNG used everywhere: ChaCha20, seeded with a caller-supplied 64-bit
/// value. Named and fixed so reports reproduce across platforms.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// splitmix64, for deriving independent per-point seeds from a master seed.
fn mix_seed(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn point_seed(master: u64, r: usize, n: i64, k: u64) -> u64 {
    mix_seed(master ^ ((r as u64) << 48) ^ ((n as u64) << 32) ^ k)
}

/// Input-class errors: bad files, bad flags, unstable inputs, exhaustion.
/// These exit with code 2; verification failures exit with code 1.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InputError {}

pub type CmdResult<T> = Result<T, InputError>;

fn write_output(out: Option<&Path>, contents: &str) -> CmdResult<()> {
    match out {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| InputError(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{contents}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

fn read_pair_file(path: &Path) -> CmdResult<(HitchinPair, PoissonSection)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    let file: PairFile = serde_json::from_str(&text).map_err(|e| {
        InputError(format!(
            "malformed pair JSON in {} at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    file.into_parts()
        .map_err(|e| InputError(format!("invalid pair data in {}: {e}", path.display())))
}

fn parse_sigma0_spec(n: i64, spec: &str) -> CmdResult<PoissonSection> {
    let coeffs: Result<Vec<_>, _> = spec.split(',').map(|s| parse_rat(s.trim())).collect();
    let coeffs = coeffs.map_err(|e| InputError(format!("bad --sigma0: {e}")))?;
    PoissonSection::from_coeffs(n, &coeffs)
        .map_err(|e| InputError(format!("bad --sigma0: {e}")))
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub seed: u64,
    pub r: usize,
    pub n: i64,
    pub bound: i64,
    pub retries: u64,
    pub out: Option<PathBuf>,
}

/// Rejection-sample a certified-stable pair with a nonzero sigma0 and emit
/// its JSON. Deterministic for a fixed seed.
pub fn cmd_gen(cfg: &GenConfig) -> CmdResult<PairFile> {
    if cfg.r < 1 || cfg.n < 1 {
        return Err(InputError("require r >= 1 and n >= 1".into()));
    }
    let mut rng = seeded_rng(cfg.seed);
    let (pair, cert) = sample_stable_pair(&mut rng, cfg.r, cfg.n, cfg.bound, cfg.retries)
        .map_err(|e| InputError(e.to_string()))?;
    let sigma0 = sample_sigma0(&mut rng, cfg.n, cfg.bound)
        .ok_or_else(|| InputError("sampling exhausted: sigma0 must be nonzero".into()))?;
    let file = PairFile::from_parts(&pair, &sigma0);
    write_output(cfg.out.as_deref(), &to_pretty_json(&file))?;
    eprintln!(
        "generated r={} n={} delta={} certificate={cert:?}",
        cfg.r,
        cfg.n,
        pair.degree()
    );
    Ok(file)
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub r: usize,
    pub n: i64,
    pub delta: i64,
    pub chi: i64,
    pub chi_equals_delta_plus_rank: bool,
    pub genus: i64,
    pub genus_formula_ok: bool,
    pub genus_riemann_roch_ok: Option<bool>,
    pub smoothness: SmoothCert,
    pub stability: StabilityCert,
    pub dims: (usize, usize, usize),
    pub dims_formula_ok: Option<bool>,
    pub pairing_det: String,
    pub pairing_nondegenerate: bool,
    pub fitting_determinant_ok: bool,
    pub window_extra: i64,
    pub window_stable: bool,
    pub pass: bool,
}

/// All invariants of a single pair, stable or not.
pub fn analyze_pair(
    pair: &HitchinPair,
    window_extra: i64,
) -> AnalyzeReport {
    let r = pair.rank();
    let n = pair.n();
    let delta = pair.degree();
    let rep = phi(pair);
    let chi = rep.chi();
    let curve = spectral_curve(pair);
    let smoothness = smoothness_certificate(&curve);
    let stability = hitchin_core::hitchin::is_stable(pair);
    let g = genus(&curve);
    let genus_formula_ok = g == 1 - r as i64 + n * (r as i64) * (r as i64 - 1) / 2;
    let genus_riemann_roch_ok = (smoothness == SmoothCert::Smooth)
        .then(|| g + h0_normal_restriction(&curve) == (r as i64) * (r as i64) * n + 1);

    let tan = end_complex(pair, 0);
    let cot = end_complex(pair, -n - 2);
    let tan_basis = hyper_h1_basis(tan.complex());
    let cot_basis = hyper_h1_basis(cot.complex());
    let dims = tan_basis.dims();
    let dims_formula_ok = stability
        .is_stable()
        .then(|| dims == (1, (r * r) as usize * n as usize + 1, 0));
    let pairing = serre_pairing_matrix(&cot, &tan, &cot_basis, &tan_basis);
    let det = pairing.det();
    let pairing_nondegenerate = !rat_is_zero(&det);
    let fitting_determinant_ok = fitting_determinant_agrees(pair);

    // windowed-route stability: basis classes reduce to the identity for
    // the base margin and the widened one, on both complexes
    let window_stable = [n + 2, n + 2 + window_extra].iter().all(|&m| {
        [&tan_basis, &cot_basis].iter().all(|b| {
            b.reduce_many_windowed(b.classes(), m)
                .map(|coords| RatMatrix::from_cols(coords) == RatMatrix::identity(b.dim()))
                .unwrap_or(false)
        })
    });

    let pass = chi == delta + r as i64
        && genus_formula_ok
        && genus_riemann_roch_ok.unwrap_or(true)
        && dims_formula_ok.unwrap_or(true)
        && pairing_nondegenerate
        && fitting_determinant_ok
        && window_stable;

    AnalyzeReport {
        r,
        n,
        delta,
        chi,
        chi_equals_delta_plus_rank: chi == delta + r as i64,
        genus: g,
        genus_formula_ok,
        genus_riemann_roch_ok,
        smoothness,
        stability,
        dims,
        dims_formula_ok,
        pairing_det: format_rat(&det),
        pairing_nondegenerate,
        fitting_determinant_ok,
        window_extra,
        window_stable,
        pass,
    }
}

pub fn cmd_analyze(
    input: &Path,
    out: Option<&Path>,
    window_extra: i64,
) -> CmdResult<AnalyzeReport> {
    let (pair, _sigma0) = read_pair_file(input)?;
    let report = analyze_pair(&pair, window_extra);
    write_output(out, &to_pretty_json(&report))?;
    Ok(report)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub theorem: TheoremReport,
    pub skew: SkewReport,
    pub hamiltonian_max: String,
    pub window_extra: i64,
    pub window_agreement: bool,
    pub pass: bool,
    /// Wall-clock milliseconds; the only nondeterministic field.
    pub timing_ms: u128,
}

pub struct VerifyConfig {
    pub input: Option<PathBuf>,
    pub seed: u64,
    pub r: usize,
    pub n: i64,
    pub bound: i64,
    pub sigma0: Option<String>,
    pub out: Option<PathBuf>,
    pub window_extra: i64,
    pub inject_sign_fault: bool,
}

/// Full verification at one moduli point: the theorem comparison, the
/// skew/rank checks, the Hamiltonian commutation, and the windowed-route
/// agreement. Passes only if everything does.
pub fn run_verify(
    pair: &HitchinPair,
    sigma0: &PoissonSection,
    window_extra: i64,
    inject_sign_fault: bool,
) -> CmdResult<VerifyOutput> {
    let started = std::time::Instant::now();
    let analysis = PointAnalysis::new(pair, sigma0, window_extra)
        .map_err(|e| InputError(format!("refusing to verify: {e}")))?;
    let run = || -> hitchin_core::Result<(TheoremReport, SkewReport, String, bool)> {
        let theorem = verify_theorem1_at(&analysis, inject_sign_fault)?;
        let skew = skew_check(&analysis)?;
        let ham = hamiltonian_commutation(&analysis)?;
        let window = windowed_agreement(&analysis, analysis.windowed_margin())?;
        Ok((theorem, skew, format_rat(&ham), window))
    };
    let (theorem, skew, hamiltonian_max, window_agreement) =
        run().map_err(|e| InputError(format!("verification aborted: {e}")))?;
    let pass = theorem.pass
        && skew.skew_ok
        && skew.rank_even
        && hamiltonian_max == "0"
        && window_agreement;
    Ok(VerifyOutput {
        theorem,
        skew,
        hamiltonian_max,
        window_extra,
        window_agreement,
        pass,
        timing_ms: started.elapsed().as_millis(),
    })
}

pub fn cmd_verify(cfg: &VerifyConfig) -> CmdResult<VerifyOutput> {
    let (pair, sigma0) = match &cfg.input {
        Some(path) => {
            let (pair, file_sigma) = read_pair_file(path)?;
            let sigma0 = match &cfg.sigma0 {
                Some(spec) => parse_sigma0_spec(pair.n(), spec)?,
                None => file_sigma,
            };
            (pair, sigma0)
        }
        None => {
            let mut rng = seeded_rng(cfg.seed);
            let (pair, _) = sample_stable_pair(&mut rng, cfg.r, cfg.n, cfg.bound, 10_000)
                .map_err(|e| InputError(e.to_string()))?;
            let sigma0 = match &cfg.sigma0 {
                Some(spec) => parse_sigma0_spec(pair.n(), spec)?,
                None => sample_sigma0(&mut rng, cfg.n, cfg.bound)
                    .ok_or_else(|| InputError("sigma0 sampling exhausted".into()))?,
            };
            (pair, sigma0)
        }
    };
    let output = run_verify(&pair, &sigma0, cfg.window_extra, cfg.inject_sign_fault)?;
    write_output(cfg.out.as_deref(), &to_pretty_json(&output))?;
    Ok(output)
}

// ---------------------------------------------------------------------------
// suite
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub r_max: usize,
    pub n_max: i64,
    pub samples: u64,
    pub bound: i64,
    pub window_extra: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuitePoint {
    pub r: usize,
    pub n: i64,
    pub sample: u64,
    pub seed: u64,
    pub delta: i64,
    pub stability: StabilityCert,
    pub dims: (usize, usize, usize),
    pub genus: i64,
    pub analyze_pass: bool,
    pub theorem_pass: bool,
    pub skew_ok: bool,
    pub rank: usize,
    pub rank_even: bool,
    pub hamiltonian_zero: bool,
    pub sigma_linearity_ok: bool,
    pub pairing_rep_independent: bool,
    pub window_agreement: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub points: Vec<SuitePoint>,
    pub all_pass: bool,
}

/// Every check at one seeded grid point.
fn run_point(cfg: &SuiteConfig, r: usize, n: i64, k: u64) -> CmdResult<SuitePoint> {
    let seed = point_seed(cfg.seed, r, n, k);
    let mut rng = seeded_rng(seed);
    let (pair, _) = sample_stable_pair(&mut rng, r, n, cfg.bound, 10_000)
        .map_err(|e| InputError(format!("point r={r} n={n} sample={k}: {e}")))?;
    let sigma0 = sample_sigma0(&mut rng, n, cfg.bound)
        .ok_or_else(|| InputError("sigma0 sampling exhausted".into()))?;

    let analyze = analyze_pair(&pair, cfg.window_extra);
    let analysis = PointAnalysis::new(&pair, &sigma0, cfg.window_extra)
        .map_err(|e| InputError(format!("point r={r} n={n} sample={k}: {e}")))?;
    let fail = |e: hitchin_core::Error| InputError(format!("point r={r} n={n} sample={k}: {e}"));

    let theorem = verify_theorem1_at(&analysis, false).map_err(&fail)?;
    let skew = skew_check(&analysis).map_err(&fail)?;
    let ham = hamiltonian_commutation(&analysis).map_err(&fail)?;
    let window_agreement =
        windowed_agreement(&analysis, analysis.windowed_margin()).map_err(&fail)?;

    // linearity of both routes in sigma0, against a second random section
    let sigma_b = sample_sigma0(&mut rng, n, cfg.bound)
        .ok_or_else(|| InputError("sigma0 sampling exhausted".into()))?;
    let sum = sigma0.poly() + sigma_b.poly();
    let mut sigma_linearity_ok = true;
    for route in [poisson_hitchin_for, poisson_sheaf_for] {
        let ma = route(&analysis, sigma0.poly()).map_err(&fail)?;
        let mb = route(&analysis, sigma_b.poly()).map_err(&fail)?;
        let msum = route(&analysis, &sum).map_err(&fail)?;
        sigma_linearity_ok &= ma.matrix.add(&mb.matrix) == msum.matrix;
    }

    // Serre pairing must not feel coboundary perturbations
    let tan = end_complex(&pair, 0);
    let cot = end_complex(&pair, -n - 2);
    let tan_basis = analysis.tangent_basis();
    let cot_basis = analysis.cotangent_basis();
    let mut pairing_rep_independent = true;
    for _ in 0..20 {
        let xi = &cot_basis.classes()[rand::Rng::gen_range(&mut rng, 0..cot_basis.dim())];
        let v = &tan_basis.classes()[rand::Rng::gen_range(&mut rng, 0..tan_basis.dim())];
        let base = serre_pairing(&cot, &tan, xi, v);
        let xi2 = xi.add(&random_coboundary(cot_basis.complex(), &mut rng, 3));
        let v2 = v.add(&random_coboundary(tan_basis.complex(), &mut rng, 3));
        pairing_rep_independent &= serre_pairing(&cot, &tan, &xi2, &v2) == base;
    }

    let hamiltonian_zero = rat_is_zero(&ham);
    let pass = analyze.pass
        && theorem.pass
        && skew.skew_ok
        && skew.rank_even
        && hamiltonian_zero
        && sigma_linearity_ok
        && pairing_rep_independent
        && window_agreement;

    Ok(SuitePoint {
        r,
        n,
        sample: k,
        seed,
        delta: pair.degree(),
        stability: analysis.stability(),
        dims: analyze.dims,
        genus: analyze.genus,
        analyze_pass: analyze.pass,
        theorem_pass: theorem.pass,
        skew_ok: skew.skew_ok,
        rank: skew.rank,
        rank_even: skew.rank_even,
        hamiltonian_zero,
        sigma_linearity_ok,
        pairing_rep_independent,
        window_agreement,
        pass,
    })
}

pub fn cmd_suite(cfg: &SuiteConfig, out: Option<&Path>) -> CmdResult<SuiteReport> {
    let started = std::time::Instant::now();
    let grid: Vec<(usize, i64, u64)> = (1..=cfg.r_max)
        .flat_map(|r| {
            (1..=cfg.n_max).flat_map(move |n| (0..cfg.samples).map(move |k| (r, n, k)))
        })
        .collect();
    if grid.is_empty() {
        eprintln!("warning: empty suite grid; nothing to check");
    }
    let results: Vec<CmdResult<SuitePoint>> = grid
        .par_iter()
        .map(|&(r, n, k)| run_point(cfg, r, n, k))
        .collect();
    let mut points = Vec::with_capacity(results.len());
    for res in results {
        points.push(res?);
    }
    let all_pass = points.iter().all(|p| p.pass);
    let report = SuiteReport {
        config: cfg.clone(),
        points,
        all_pass,
    };
    let mut table = String::new();
    table.push_str("  r  n  sample        seed  delta  dims         genus  rank  result\n");
    for p in &report.points {
        table.push_str(&format!(
            "{:>3} {:>2} {:>7} {:>11} {:>6}  ({},{:>2},{})  {:>5} {:>5}  {}\n",
            p.r,
            p.n,
            p.sample,
            p.seed,
            p.delta,
            p.dims.0,
            p.dims.1,
            p.dims.2,
            p.genus,
            p.rank,
            if p.pass { "pass" } else { "FAIL" }
        ));
    }
    table.push_str(if report.all_pass {
        "suite: all points pass\n"
    } else {
        "suite: FAILURES PRESENT\n"
    });
    print!("{table}");
    write_output(out, &to_pretty_json(&report))?;
    eprintln!(
        "suite finished in {} ms ({} points)",
        started.elapsed().as_millis(),
        report.points.len()
    );
    Ok(report)
}
