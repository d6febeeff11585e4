//! The five command-line experiments.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sobolev_core::eigen::{hessenberg_eigenvalues, smallest_root};
use sobolev_core::hiep::{diagnostics, solve, HiepSolution, Solver};
use sobolev_core::jordan::{
    build_discrete_laguerre_sobolev, build_same_measure, JordanBlock, JordanOperator, SpectralData,
    WeightVector,
};
use sobolev_core::quadrature::{gauss_laguerre, gauss_legendre};
use sobolev_core::sop::{
    grid_errors, hermite_coefficients, off_band_ratio, pentadiagonal_from_recurrence, HermiteSamples,
};
use sobolev_core::{Matrix, C64};

use crate::instrument::{solve_instrumented, Instrument};
use crate::report::{Cell, ExperimentReport};
use crate::{AppError, AppResult};

pub const ALL_SOLVERS: [Solver; 3] = [Solver::Arnoldi, Solver::UpdateHouseholder, Solver::UpdateRotations];

pub fn solver_name(s: Solver) -> &'static str {
    match s {
        Solver::Arnoldi => "arnoldi",
        Solver::UpdateHouseholder => "update-hh",
        Solver::UpdateRotations => "update-rot",
    }
}

fn config_err(msg: impl Into<String>) -> AppError {
    AppError::Config(msg.into())
}

/// Adds `<prefix>orthogonality`, `<prefix>similarity_rel`, `<prefix>first_column`
/// and `<prefix>min_subdiagonal`.
fn record_contract(report: &mut ExperimentReport, prefix: &str, data: &SpectralData, sol: &HiepSolution) {
    let d = diagnostics(data, &sol.h, &sol.q);
    report.diagnostic(&format!("{prefix}orthogonality"), d.orthogonality);
    report.diagnostic(&format!("{prefix}similarity_rel"), d.similarity / d.z_norm);
    report.diagnostic(&format!("{prefix}first_column"), d.first_column);
    report.diagnostic(&format!("{prefix}min_subdiagonal"), d.min_subdiag_re);
}

fn rel_diff(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).frobenius_norm() / a.frobenius_norm()
}

#[derive(Clone, Debug, Serialize)]
pub struct LaguerreRoots {
    pub gamma: f64,
    pub alpha: f64,
    pub n_quad: usize,
    pub k_max: usize,
    #[serde(serialize_with = "ser_solver")]
    pub solver: Solver,
}

impl Default for LaguerreRoots {
    fn default() -> Self {
        LaguerreRoots {
            gamma: 1.0,
            alpha: -0.5,
            n_quad: 10,
            k_max: 10,
            solver: Solver::UpdateRotations,
        }
    }
}

fn ser_solver<S: serde::Serializer>(s: &Solver, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(solver_name(*s))
}

fn echo_all(report: &mut ExperimentReport, cfg: &impl Serialize) {
    if let serde_json::Value::Object(map) = serde_json::to_value(cfg).expect("config serializes") {
        report.config.extend(map);
    }
}

/// Smallest root of each `p_k` for the same-measure Laguerre-Sobolev
/// product `integral p q + gamma integral p' q'` on `x^alpha e^-x`.
pub fn laguerre_roots(cfg: &LaguerreRoots, inst: &mut dyn Instrument) -> AppResult<ExperimentReport> {
    let start = Instant::now();
    if !(cfg.alpha > -1.0) {
        return Err(config_err("alpha must exceed -1"));
    }
    if !(cfg.gamma > 0.0) {
        return Err(config_err("gamma must be positive"));
    }
    if cfg.k_max == 0 || cfg.k_max > 2 * cfg.n_quad {
        return Err(config_err(format!("k_max must lie in 1..={}", 2 * cfg.n_quad)));
    }
    let rule = gauss_laguerre(cfg.n_quad, cfg.alpha)?;
    let data = build_same_measure(&rule, &[1.0, cfg.gamma])?;
    let sol = solve_instrumented(&data, cfg.solver, "laguerre-sobolev", inst)?;

    let mut report = ExperimentReport::new("laguerre-roots", &["k", "smallest_root_re", "smallest_root_im"]);
    echo_all(&mut report, cfg);
    for k in 1..=cfg.k_max {
        let r = smallest_root(&sol.h, k)?;
        report.push_row(vec![k.into(), r.re.into(), r.im.into()]);
    }
    record_contract(&mut report, "", &data, &sol);
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct AlthammerRoots {
    pub n: usize,
    pub gamma: f64,
    pub n_quad: usize,
    #[serde(serialize_with = "ser_solver")]
    pub solver: Solver,
}

impl Default for AlthammerRoots {
    fn default() -> Self {
        AlthammerRoots {
            n: 60,
            gamma: 100.0,
            n_quad: 60,
            solver: Solver::UpdateRotations,
        }
    }
}

pub const ROOT_IMAG_TOL: f64 = 1e-6;
pub const ROOT_INTERVAL_TOL: f64 = 1e-8;
pub const ROOT_GAP_TOL: f64 = 1e-10;

/// All roots of the degree-`n` Althammer polynomial (Legendre measure,
/// derivative weight `gamma`) with counts of qualitative violations.
pub fn althammer_roots(cfg: &AlthammerRoots, inst: &mut dyn Instrument) -> AppResult<ExperimentReport> {
    let start = Instant::now();
    if !(cfg.gamma > 0.0) {
        return Err(config_err("gamma must be positive"));
    }
    if cfg.n == 0 || cfg.n > 2 * cfg.n_quad {
        return Err(config_err(format!("n must lie in 1..={}", 2 * cfg.n_quad)));
    }
    let rule = gauss_legendre(cfg.n_quad)?;
    let data = build_same_measure(&rule, &[1.0, cfg.gamma])?;
    let sol = solve_instrumented(&data, cfg.solver, "althammer", inst)?;
    let spec = hessenberg_eigenvalues(&sol.h.leading(cfg.n))?;
    let roots = spec.eigenvalues();

    let mut report = ExperimentReport::new("althammer-roots", &["index", "root_re", "root_im"]);
    echo_all(&mut report, cfg);
    for (i, r) in roots.iter().enumerate() {
        report.push_row(vec![(i + 1).into(), r.re.into(), r.im.into()]);
    }
    let imag = roots.iter().filter(|r| r.im.abs() > ROOT_IMAG_TOL).count();
    let outside = roots
        .iter()
        .filter(|r| r.re.abs() > 1.0 + ROOT_INTERVAL_TOL)
        .count();
    let mut min_gap = f64::INFINITY;
    let mut close = 0;
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            let g = (a - b).norm();
            min_gap = min_gap.min(g);
            if g <= ROOT_GAP_TOL {
                close += 1;
            }
        }
    }
    report.diagnostic("violations_imag", imag as f64);
    report.diagnostic("violations_interval", outside as f64);
    report.diagnostic("violations_gap", close as f64);
    report.diagnostic("max_abs_imag", roots.iter().map(|r| r.im.abs()).fold(0.0, f64::max));
    if min_gap.is_finite() {
        report.diagnostic("min_gap", min_gap);
    }
    record_contract(&mut report, "", &data, &sol);
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct LeastSquares {
    pub gamma: f64,
    pub m: usize,
    pub degrees: Vec<usize>,
    #[serde(serialize_with = "ser_solver")]
    pub solver: Solver,
}

impl Default for LeastSquares {
    fn default() -> Self {
        LeastSquares {
            gamma: 0.01,
            m: 201,
            degrees: (1..=201).step_by(10).collect(),
            solver: Solver::UpdateRotations,
        }
    }
}

/// `exp(-100 (x - 1/5)^2)`
pub fn bump(x: f64) -> f64 {
    (-100.0 * (x - 0.2) * (x - 0.2)).exp()
}

pub fn bump_prime(x: f64) -> f64 {
    -200.0 * (x - 0.2) * bump(x)
}

struct FitCurve {
    /// Highest degree the basis supports.
    cap: usize,
    errors: Vec<(f64, f64)>,
}

fn fit_curve(
    rule: &sobolev_core::quadrature::QuadratureRule,
    gamma: f64,
    degrees: &[usize],
    solver: Solver,
    label: &str,
    inst: &mut dyn Instrument,
) -> AppResult<FitCurve> {
    let gammas: &[f64] = if gamma > 0.0 { &[1.0, gamma] } else { &[1.0] };
    let data = build_same_measure(rule, gammas)?;
    let sol = solve_instrumented(&data, solver, label, inst)?;
    let cap = data.dim() - 1;
    let used: Vec<usize> = degrees.iter().map(|&d| d.min(cap)).collect();
    let top = used.iter().copied().max().unwrap_or(0);
    let values: Vec<f64> = rule.nodes().iter().map(|&x| bump(x)).collect();
    let derivs: Vec<f64> = rule.nodes().iter().map(|&x| bump_prime(x)).collect();
    let samples = HermiteSamples {
        nodes: rule.nodes(),
        weights: rule.weights(),
        values: &values,
        derivatives: &derivs,
    };
    let wn = data.weights().norm();
    let coeffs = hermite_coefficients(&sol.h, wn, &samples, gamma, top)?;
    let errors = grid_errors(&sol.h, wn, &coeffs, &used, &bump, &bump_prime)?;
    Ok(FitCurve { cap, errors })
}

/// Max-norm value and derivative errors of Hermite least-squares fits to
/// [`bump`] in the Legendre basis (`gamma = 0`) and the Sobolev basis.
pub fn least_squares(cfg: &LeastSquares, inst: &mut dyn Instrument) -> AppResult<ExperimentReport> {
    let start = Instant::now();
    if !(cfg.gamma >= 0.0 && cfg.gamma.is_finite()) {
        return Err(config_err("gamma must be non-negative"));
    }
    if cfg.m == 0 {
        return Err(config_err("m must be positive"));
    }
    if cfg.degrees.is_empty() {
        return Err(config_err("at least one degree is required"));
    }
    if let Some(&d) = cfg.degrees.iter().find(|&&d| d > 2 * cfg.m - 1) {
        return Err(config_err(format!("degree {d} exceeds 2m - 1 = {}", 2 * cfg.m - 1)));
    }
    let rule = gauss_legendre(cfg.m)?;
    let legendre = fit_curve(&rule, 0.0, &cfg.degrees, cfg.solver, "legendre", inst)?;
    let sobolev = fit_curve(&rule, cfg.gamma, &cfg.degrees, cfg.solver, "sobolev", inst)?;

    let mut report = ExperimentReport::new(
        "least-squares",
        &[
            "degree",
            "legendre_value_error",
            "legendre_derivative_error",
            "sobolev_value_error",
            "sobolev_derivative_error",
        ],
    );
    echo_all(&mut report, cfg);
    report.echo("grid_points", sobolev_core::sop::GRID_POINTS);
    report.echo("legendre_degree_cap", legendre.cap);
    report.echo("sobolev_degree_cap", sobolev.cap);
    for (i, &d) in cfg.degrees.iter().enumerate() {
        let (lv, ld) = legendre.errors[i];
        let (sv, sd) = sobolev.errors[i];
        report.push_row(vec![Cell::from(d), lv.into(), ld.into(), sv.into(), sd.into()]);
    }
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct Penta {
    pub m: usize,
    pub alpha: f64,
    pub c: f64,
    pub mass: f64,
    pub derivative_mass: f64,
    #[serde(serialize_with = "ser_solver")]
    pub solver: Solver,
}

impl Default for Penta {
    fn default() -> Self {
        Penta {
            m: 5,
            alpha: 0.0,
            c: -1.0,
            mass: 1.0,
            derivative_mass: 1.0,
            solver: Solver::UpdateRotations,
        }
    }
}

/// Five-term recurrence matrix `B_m` for the discrete Laguerre-Sobolev
/// product with point masses at `c`, plus its off-band residual and the
/// agreement between solvers.
pub fn penta(cfg: &Penta, inst: &mut dyn Instrument) -> AppResult<ExperimentReport> {
    let start = Instant::now();
    if cfg.m == 0 {
        return Err(config_err("m must be positive"));
    }
    if !(cfg.alpha > -1.0) {
        return Err(config_err("alpha must exceed -1"));
    }
    let rule = gauss_laguerre(cfg.m + 1, cfg.alpha)?;
    let data = build_discrete_laguerre_sobolev(&rule, cfg.c, cfg.mass, cfg.derivative_mass)?
        .shifted(C64::new(cfg.c, 0.0));
    let sol = solve_instrumented(&data, cfg.solver, "shifted-laguerre-sobolev", inst)?;
    let b = pentadiagonal_from_recurrence(&sol.h, cfg.m)?;

    let mut report = ExperimentReport::new("penta", &["i", "j", "re", "im"]);
    echo_all(&mut report, cfg);
    for i in 0..cfg.m {
        for j in 0..cfg.m {
            let v = b[(i, j)];
            report.push_row(vec![(i + 1).into(), (j + 1).into(), v.re.into(), v.im.into()]);
        }
    }
    report.diagnostic("off_band_ratio", off_band_ratio(&b));
    let mut worst = 0.0_f64;
    for other in ALL_SOLVERS {
        let h = solve(&data, other)?.h;
        worst = worst.max(rel_diff(&b, &pentadiagonal_from_recurrence(&h, cfg.m)?));
    }
    report.diagnostic("cross_solver_rel_diff", worst);
    record_contract(&mut report, "", &data, &sol);
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareSolvers {
    pub cases: usize,
    pub max_dim: usize,
    pub seed: u64,
    /// Label of an input file; its instances replace the random ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

impl Default for CompareSolvers {
    fn default() -> Self {
        CompareSolvers {
            cases: 100,
            max_dim: 40,
            seed: 1,
            input: None,
        }
    }
}

/// Jordan blocks of size 1 to 4 with eigenvalues uniform in
/// `[-2, 2] x [-1, 1]i`, total dimension uniform in `1..=max_dim`.
/// Superdiagonals have modulus in `[0.5, 2)` and weights in `[0.2, 2)`,
/// both with uniform phase.
pub fn random_spectral_data(rng: &mut ChaCha8Rng, max_dim: usize) -> SpectralData {
    let phase = |rng: &mut ChaCha8Rng| C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let target = rng.gen_range(1..=max_dim.max(1));
    let mut blocks = Vec::new();
    let mut betas = Vec::new();
    let mut dim = 0;
    while dim < target {
        let size = rng.gen_range(1..=4).min(target - dim);
        let z = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
        let alphas = (1..size).map(|_| phase(rng) * rng.gen_range(0.5..2.0)).collect();
        // eigenvalues are continuous draws, so a repeat has probability zero
        blocks.push(JordanBlock::new(z, alphas).expect("nonzero superdiagonal"));
        betas.push(phase(rng) * rng.gen_range(0.2..2.0));
        dim += size;
    }
    SpectralData::new(
        JordanOperator::new(blocks).expect("distinct eigenvalues"),
        WeightVector::new(betas).expect("nonzero weights"),
    )
    .expect("matching counts")
}

/// Solves each instance with every solver and reports the relative
/// difference of the updating results to Arnoldi plus the worst contract
/// residuals.
pub fn compare_solvers(
    cfg: &CompareSolvers,
    instances: Option<Vec<SpectralData>>,
    inst: &mut dyn Instrument,
) -> AppResult<ExperimentReport> {
    let start = Instant::now();
    let instances = match instances {
        Some(v) => v,
        None => {
            if cfg.max_dim == 0 {
                return Err(config_err("max_dim must be positive"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..cfg.cases)
                .map(|_| random_spectral_data(&mut rng, cfg.max_dim))
                .collect()
        }
    };
    let mut report = ExperimentReport::new(
        "compare-solvers",
        &[
            "case",
            "m",
            "blocks",
            "rel_diff_update_hh",
            "rel_diff_update_rot",
            "orthogonality_per_m",
            "similarity_rel",
            "first_column",
            "contract_ok",
        ],
    );
    echo_all(&mut report, cfg);
    let (mut worst_diff, mut violations) = (0.0_f64, 0usize);
    for (case, data) in instances.iter().enumerate() {
        let m = data.dim();
        let mut sols = Vec::with_capacity(3);
        for solver in ALL_SOLVERS {
            let label = format!("case-{case}-{}", solver_name(solver));
            sols.push(solve_instrumented(data, solver, &label, inst)?);
        }
        let (mut orth, mut sim, mut first, mut ok) = (0.0_f64, 0.0_f64, 0.0_f64, true);
        for sol in &sols {
            let d = diagnostics(data, &sol.h, &sol.q);
            orth = orth.max(d.orthogonality / m as f64);
            sim = sim.max(d.similarity / d.z_norm);
            first = first.max(d.first_column);
            ok &= d.within_contract(m);
        }
        let reference = sols[0].h.as_matrix();
        let hh = rel_diff(reference, sols[1].h.as_matrix());
        let rot = rel_diff(reference, sols[2].h.as_matrix());
        worst_diff = worst_diff.max(hh).max(rot);
        violations += usize::from(!ok);
        report.push_row(vec![
            case.into(),
            m.into(),
            data.operator().blocks().len().into(),
            hh.into(),
            rot.into(),
            orth.into(),
            sim.into(),
            first.into(),
            usize::from(ok).into(),
        ]);
    }
    report.diagnostic("max_rel_diff", worst_diff);
    report.diagnostic("contract_violations", violations as f64);
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}
