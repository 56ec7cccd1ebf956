//! Command implementations behind the `ncdirac` binary.
//!
//! Each command takes a validated [`RunConfig`] and returns the bytes to
//! emit together with an exit code: 0 on success, 1 when a check fails,
//! 2 when the configuration is unusable.

use std::fmt::Write as _;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::classical_limit::{
    correspondence_params, fit_frequency, integrate_orbit, matrix_element_series, normalized_velocity_series,
    orbit_csv, paper_series, time_grid, OrbitSample,
};
use crate::error::Error;
use crate::estimates::{detectability_report, frequency_breakdown, NCBounds, PhysicalConstants};
use crate::fock_spectrum::{
    numerical_spectrum, spectrum_csv, spectrum_rows, Lambda, SpectralSetup, DEFAULT_TRUNC, SPECTRUM_REL_TOL,
};
use crate::nc_model::{
    effective_field, guiding_ladder, heisenberg_tensor, mechanical_momenta, nc_commutator_table, realize,
    rotated_canonical, BracketCheck, ModelParams, NCParameters, Units,
};
use crate::scalar::Scalar;
use crate::surd::Surd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A complete run description. Flags on the command line override keys
/// read from the config file, which override these defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub params: NCParameters,
    #[serde(rename = "trunc_N")]
    pub trunc_n: usize,
    /// Momentum along the effective field, in the units of `params`.
    pub eta: f64,
    /// Highest level reported by `spectrum`.
    pub n_max: u64,
    /// Quantum number of the orbit followed by `orbit`.
    pub n: u64,
    pub t_periods: f64,
    pub samples_per_period: usize,
    pub output_path: Option<String>,
    pub format: Option<Format>,
    /// Unit system of the run; `natural` rescales SI parameters.
    pub units: Option<Units>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: NCParameters::electron(1.0),
            trunc_n: DEFAULT_TRUNC,
            eta: 0.0,
            n_max: 5,
            n: 50,
            t_periods: 10.0,
            samples_per_period: 100,
            output_path: None,
            format: None,
            units: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Parameters in the requested unit system, validated.
    pub fn effective_params(&self) -> Result<NCParameters, Error> {
        self.params.validate()?;
        if !self.eta.is_finite() {
            return Err(Error::Config(format!("eta must be finite, got {}", self.eta)));
        }
        if !(self.t_periods.is_finite() && self.t_periods > 0.0) {
            return Err(Error::Config(format!("t_periods must be positive, got {}", self.t_periods)));
        }
        if self.samples_per_period < 3 {
            return Err(Error::Config("samples_per_period must be at least 3".into()));
        }
        match (self.units, self.params.units) {
            (Some(Units::Natural), _) => Ok(self.params.to_natural()),
            (Some(Units::Si), Units::Natural) => Err(Error::Config(
                "parameters are given in natural units and cannot be converted to SI".into(),
            )),
            _ => Ok(self.params.clone()),
        }
    }
}

/// Bytes produced by a command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub exit_code: i32,
    pub body: Vec<u8>,
    /// Written next to the main output as `<path>.report.json`.
    pub report: Option<Vec<u8>>,
    /// Human-readable explanation for a nonzero exit.
    pub message: Option<String>,
}

impl CommandOutput {
    fn ok(body: String) -> Self {
        Self {
            exit_code: 0,
            body: body.into_bytes(),
            report: None,
            message: None,
        }
    }

    fn from_error(e: &Error) -> Self {
        let exit_code = match e {
            Error::Residual { .. } | Error::Convergence { .. } | Error::Step(_) => 1,
            _ => 2,
        };
        Self {
            exit_code,
            body: Vec::new(),
            report: None,
            message: Some(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Info,
}

impl Status {
    fn from(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
            Status::Info => "INFO",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyRow {
    pub section: &'static str,
    pub check: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

const MAX_EXACT_WIDTH: usize = 60;

fn fmt_scalar(x: &Surd) -> String {
    let s = x.to_string();
    if s.len() <= MAX_EXACT_WIDTH {
        s
    } else {
        format!("≈{:e}", x.to_f64())
    }
}

fn fmt_complex(z: &Complex<Surd>) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (true, true) => "0".into(),
        (false, true) => fmt_scalar(&z.re),
        (true, false) => format!("i·({})", fmt_scalar(&z.im)),
        (false, false) => format!("{} + i·({})", fmt_scalar(&z.re), fmt_scalar(&z.im)),
    }
}

fn row(section: &'static str, check: impl Into<String>, expected: String, computed: String, status: Status) -> VerifyRow {
    VerifyRow {
        section,
        check: check.into(),
        expected,
        computed,
        status,
    }
}

fn equality_row(section: &'static str, check: &str, expected: &Surd, computed: &Surd) -> VerifyRow {
    row(
        section,
        check,
        fmt_scalar(expected),
        fmt_scalar(computed),
        Status::from(expected == computed),
    )
}

fn bracket_rows(section: &'static str, checks: &[BracketCheck<Surd>]) -> Vec<VerifyRow> {
    checks
        .iter()
        .map(|c| {
            row(
                section,
                c.label,
                fmt_complex(&c.expected),
                fmt_complex(&c.computed),
                Status::from(c.matches),
            )
        })
        .collect()
}

fn skipped(section: &'static str, check: &str, reason: &str) -> VerifyRow {
    row(section, check, String::new(), String::new(), Status::Skipped).with_reason(reason)
}

impl VerifyRow {
    fn with_reason(mut self, reason: &str) -> Self {
        self.computed = reason.to_string();
        self
    }
}

/// Exact verification of every commutator identity for the configured parameters.
pub fn verify_rows(params: &NCParameters) -> Result<Vec<VerifyRow>, Error> {
    let p: ModelParams<Surd> = params.exact()?;
    let mut rows = Vec::new();

    // realization: the discriminant is checked first so an invalid pair is a domain error
    match realize(&p) {
        Err(Error::Unsupported(reason)) => {
            rows.push(skipped("realization", "commutative realization", &reason));
            rows.push(skipped("mechanical", "[p1, p2], [p1, p3], [p2, p3]", &reason));
        }
        Err(e) => return Err(e),
        Ok(r) => {
            rows.push(equality_row("realization", "rho^2 - rho + mu*nu/hbar^2 = 0", &Surd::zero(), &r.quadratic_residual(&p)));
            rows.push(equality_row(
                "realization",
                "sigma*hbar*rho^2 = mu",
                &p.mu,
                &(r.sigma.clone() * p.hbar.clone() * r.rho_r.clone() * r.rho_r.clone()),
            ));
            for e in nc_commutator_table(&p)? {
                rows.push(row(
                    "realization",
                    e.label(),
                    fmt_complex(&e.target),
                    fmt_complex(&e.computed),
                    Status::from(e.matches),
                ));
            }
            let field = effective_field(&p)?;
            let m = mechanical_momenta(&p)?;
            let h = &p.hbar;
            let i = |v: Surd| Complex::new(Surd::zero(), v);
            let cases = [
                ("[p1, p2] = i m hbar omega_e", 0, 1, i(p.mass.clone() * h.clone() * field.omega_e.clone())),
                ("[p1, p3] = -i nu0", 0, 2, i(-p.nu0.clone())),
                ("[p2, p3] = i nu0", 1, 2, i(p.nu0.clone())),
            ];
            for (label, a, b, expected) in cases {
                let z = crate::operator_algebra::commutator(&m[a], &m[b], h);
                rows.push(row("mechanical", label, fmt_complex(&expected), fmt_complex(&z), Status::from(z == expected)));
            }
        }
    }

    let f = effective_field(&p)?;
    rows.push(equality_row(
        "field",
        "omega0^2 = omega_e^2 + 2 a0^2",
        &(f.omega_e.clone() * f.omega_e.clone() + Surd::from_ints(2, 1) * f.a0.clone() * f.a0.clone()),
        &(f.omega0.clone() * f.omega0.clone()),
    ));
    rows.push(equality_row(
        "field",
        "sin^2 + cos^2 = 1",
        &Surd::from_ints(1, 1),
        &(f.sin_theta.clone() * f.sin_theta.clone() + f.cos_theta.clone() * f.cos_theta.clone()),
    ));
    let defect = f.frame().orthonormality_defect();
    rows.push(row("field", "frame orthonormal (1e-14)", "0".into(), format!("{defect:e}"), Status::from(defect <= 1e-14)));

    let rc = rotated_canonical(&p)?;
    rows.extend(bracket_rows("rotated", &rc.momenta.checks));
    rows.push(row(
        "rotated",
        "p1θ = P1θ + qB0 X2θ/2, p2θ = P2θ - qB0 X1θ/2",
        "form equality".into(),
        if rc.mechanical_identity { "equal" } else { "differ" }.into(),
        Status::from(rc.mechanical_identity),
    ));
    rows.extend(bracket_rows("planar", &rc.checks));

    let ht = heisenberg_tensor(&p)?;
    let m_a0 = p.mass.clone() * f.a0.clone();
    rows.push(equality_row("heisenberg", "M12 = m omega_e", &(p.mass.clone() * f.omega_e.clone()), &ht.m[0][1]));
    rows.push(equality_row("heisenberg", "M23 = m a0", &m_a0, &ht.m[1][2]));
    rows.push(equality_row("heisenberg", "M31 = m a0", &m_a0, &ht.m[2][0]));
    rows.push(equality_row("heisenberg", "dp3/dt coefficient of v1 = m a0", &m_a0, &ht.m[2][0]));
    rows.push(equality_row("heisenberg", "dp3/dt coefficient of v2 = -m a0", &(-m_a0.clone()), &ht.m[2][1]));
    if ht.field.is_some() {
        rows.push(row("heisenberg", "|B_theta| = m omega0/|q|", "true".into(), ht.magnitude_matches.to_string(), Status::from(ht.magnitude_matches)));
        rows.push(row("heisenberg", "B_theta direction = n3", "true".into(), ht.direction_matches.to_string(), Status::from(ht.direction_matches)));
    } else {
        rows.push(skipped("heisenberg", "field reconstruction", "neutral particle"));
    }

    match guiding_ladder(&p) {
        Ok(g) => {
            for (i, r) in g.brackets.iter().enumerate() {
                for (j, z) in r.iter().enumerate() {
                    rows.push(row(
                        "guiding",
                        format!("[q{}θ, p{}θ] = 0", i + 1, j + 1),
                        "0".into(),
                        fmt_complex(z),
                        Status::from(z.is_zero()),
                    ));
                }
            }
            rows.push(row("guiding", "rho_g", String::new(), fmt_scalar(&g.rho_g), Status::Info));
            rows.push(row("guiding", "[q1θ, q2θ]", String::new(), fmt_complex(&g.q_bracket), Status::Info));
        }
        Err(Error::Degenerate(reason)) => rows.push(skipped("guiding", "guiding operators", &reason)),
        Err(e) => return Err(e),
    }
    Ok(rows)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_text(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn cmd_verify(cfg: &RunConfig) -> CommandOutput {
    let rows = match cfg.effective_params().and_then(|p| verify_rows(&p)) {
        Ok(r) => r,
        Err(e) => return CommandOutput::from_error(&e),
    };
    let failed = rows.iter().filter(|r| r.status == Status::Fail).count();
    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("section,check,expected,computed,status\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.section,
                    csv_field(&r.check),
                    csv_field(&r.expected),
                    csv_field(&r.computed),
                    r.status.as_str()
                );
            }
            out
        }
        Format::Json => json_text(&json!({ "rows": rows, "failed": failed })),
    };
    let mut out = CommandOutput::ok(body);
    if failed > 0 {
        out.exit_code = 1;
        out.message = Some(format!("{failed} check(s) failed"));
    }
    out
}

pub fn cmd_spectrum(cfg: &RunConfig) -> CommandOutput {
    let run = || -> Result<CommandOutput, Error> {
        let params = cfg.effective_params()?;
        let setup = SpectralSetup::from_params(&params)?;
        let n = cfg.trunc_n;
        if (cfg.n_max as f64) >= n as f64 / 4.0 {
            return Err(Error::Config(format!("n_max = {} must be below trunc_N/4 = {}", cfg.n_max, n as f64 / 4.0)));
        }
        let eta = cfg.eta / setup.momentum_unit;
        let spectrum = numerical_spectrum(n, eta, &setup)?;
        let rows = spectrum_rows(&spectrum, cfg.n_max)?;
        let body = match cfg.format.unwrap_or(Format::Csv) {
            Format::Csv => spectrum_csv(&rows, setup.rest_energy, setup.momentum_unit),
            Format::Json => {
                let items: Vec<_> = rows
                    .iter()
                    .map(|r| {
                        json!({
                            "n": r.line.n,
                            "lambda": r.line.lambda.value(),
                            "sign": r.line.sign.value(),
                            "eta": r.line.eta * setup.momentum_unit,
                            "E_closed": r.line.energy * setup.rest_energy,
                            "E_numeric": r.numeric * setup.rest_energy,
                            "abs_err": r.abs_err() * setup.rest_energy,
                            "rel_err": r.rel_err(),
                        })
                    })
                    .collect();
                json_text(&items)
            }
        };
        let mut out = CommandOutput::ok(body);
        let worst = spectrum.worst_window_rel_err();
        if worst > SPECTRUM_REL_TOL {
            out.exit_code = 1;
            out.message = Some(format!("window level off by {worst:e}, tolerance {SPECTRUM_REL_TOL:e}"));
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| CommandOutput::from_error(&e))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyFit {
    pub omega_measured: f64,
    pub omega_predicted: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    /// Rotation sense about `n̄₃θ`.
    pub sense: &'static str,
}

impl FrequencyFit {
    fn new(samples: &[OrbitSample], predicted: f64, tolerance: f64, time_unit: f64) -> Result<Self, Error> {
        let w = fit_frequency(samples)?;
        Ok(Self {
            omega_measured: w.abs() / time_unit,
            omega_predicted: predicted / time_unit,
            rel_err: ((w.abs() - predicted) / predicted).abs(),
            tolerance,
            sense: if w < 0.0 { "clockwise" } else { "counterclockwise" },
        })
    }

    fn passes(&self) -> bool {
        self.rel_err <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub omega_measured: f64,
    pub omega_predicted: f64,
    pub rel_err: f64,
    pub n: u64,
    #[serde(rename = "trunc_N_effective")]
    pub trunc_effective: usize,
    pub e_c: f64,
    pub ode: FrequencyFit,
    pub matrix_sum: FrequencyFit,
    pub paper_series: FrequencyFit,
    pub normalized_series: FrequencyFit,
    /// `V/V'` measured from the first samples, next to `2E_c/(E_c + mc²)`.
    pub amplitude_ratio: f64,
    pub amplitude_ratio_expected: f64,
    pub selection_rule_max: f64,
    pub p3_drift: f64,
    pub energy_drift: f64,
}

/// ODE sub-steps per sample so that `dt·ω₀ < 0.1` with margin.
fn substeps(sample_dt: f64, omega0: f64) -> usize {
    ((sample_dt * omega0 / 0.05).ceil() as usize).max(1)
}

pub fn orbit_report(cfg: &RunConfig) -> Result<(Vec<OrbitSample>, OrbitReport, SpectralSetup), Error> {
    let params = cfg.effective_params()?;
    let setup = SpectralSetup::from_params(&params)?;
    let n = cfg.n;
    let cp = correspondence_params(n, Lambda::Plus, &setup)?;
    let trunc = cfg.trunc_n.max(4 * (n as usize + 2));
    let grid = time_grid(cp.omega, cfg.t_periods, cfg.samples_per_period)?;

    let literal = paper_series(n, &grid, &setup)?;
    let normalized = normalized_velocity_series(n, &grid, &setup)?;
    let matrix = matrix_element_series(n, Lambda::Plus, trunc, &grid, &setup)?;

    let eta = cfg.eta / setup.momentum_unit;
    let axes = setup.frame.axes;
    let radius = cp.momentum_radius(&setup);
    let p0: [f64; 3] = std::array::from_fn(|k| radius * axes[0][k] + eta * axes[2][k]);
    let sample_dt = grid[1] - grid[0];
    let sub = substeps(sample_dt, setup.omega0);
    let ode = integrate_orbit(p0, &setup, sample_dt / sub as f64, (grid.len() - 1) * sub, sub)?;

    let corr_tol = 2.0 / n as f64;
    let tu = setup.time_unit;
    let ode_fit = FrequencyFit::new(&ode.samples, ode.omega_predicted, 1e-6, tu)?;
    let report = OrbitReport {
        omega_measured: ode_fit.omega_measured,
        omega_predicted: ode_fit.omega_predicted,
        rel_err: ode_fit.rel_err,
        n,
        trunc_effective: trunc,
        e_c: cp.e_c * setup.rest_energy,
        matrix_sum: FrequencyFit::new(&matrix.samples, cp.omega, corr_tol, tu)?,
        paper_series: FrequencyFit::new(&literal, cp.omega, 1e-12, tu)?,
        normalized_series: FrequencyFit::new(&normalized, cp.omega, 1e-12, tu)?,
        ode: ode_fit,
        amplitude_ratio: literal[0].v1 / normalized[0].v1,
        amplitude_ratio_expected: cp.amplitude_ratio(),
        selection_rule_max: matrix.selection_max,
        p3_drift: ode.p3_drift,
        energy_drift: ode.energy_drift,
    };
    let mut samples = literal;
    samples.extend(normalized);
    samples.extend(matrix.samples);
    samples.extend(ode.samples);
    Ok((samples, report, setup))
}

impl OrbitReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, fit) in [
            ("ode", &self.ode),
            ("matrix_sum", &self.matrix_sum),
            ("paper_series", &self.paper_series),
            ("normalized_series", &self.normalized_series),
        ] {
            if !fit.passes() {
                out.push(format!("{name} frequency off by {:e} (tolerance {:e})", fit.rel_err, fit.tolerance));
            }
        }
        if self.p3_drift > 1e-12 {
            out.push(format!("p3θ drift {:e}", self.p3_drift));
        }
        if ((self.amplitude_ratio - self.amplitude_ratio_expected) / self.amplitude_ratio_expected).abs() > 1e-12 {
            out.push("amplitude ratio mismatch".into());
        }
        out
    }
}

pub fn cmd_orbit(cfg: &RunConfig) -> CommandOutput {
    let (samples, report, setup) = match orbit_report(cfg) {
        Ok(x) => x,
        Err(e) => return CommandOutput::from_error(&e),
    };
    let report_text = json_text(&report);
    let mut out = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut o = CommandOutput::ok(orbit_csv(&samples, &setup));
            o.report = Some(report_text.into_bytes());
            o
        }
        Format::Json => {
            let rows: Vec<_> = samples
                .iter()
                .map(|s| {
                    json!({
                        "t": s.t * setup.time_unit,
                        "v1": s.v1 * setup.velocity_unit,
                        "v2": s.v2 * setup.velocity_unit,
                        "p1": s.p1 * setup.momentum_unit,
                        "p2": s.p2 * setup.momentum_unit,
                        "source": s.source.as_str(),
                    })
                })
                .collect();
            CommandOutput::ok(json_text(&json!({ "report": report, "samples": rows })))
        }
    };
    let failures = report.failures();
    if !failures.is_empty() {
        out.exit_code = 1;
        out.message = Some(failures.join("; "));
    }
    out
}

pub fn cmd_estimate(cfg: &RunConfig) -> CommandOutput {
    let run = || -> Result<CommandOutput, Error> {
        let p = cfg.effective_params()?;
        let consts = PhysicalConstants {
            electron_mass: p.mass,
            electron_charge: p.charge,
            hbar: p.hbar,
            c: p.c,
        };
        let bounds = NCBounds {
            mu_max: p.mu,
            nu_max: p.nu,
            ..NCBounds::default()
        };
        let breakdown = frequency_breakdown(p.b0, &bounds, &consts);
        let report = detectability_report(p.b0.abs(), &bounds, &consts)?;
        let body = match cfg.format.unwrap_or(Format::Json) {
            Format::Json => json_text(&json!({
                "b_tesla": breakdown.b_tesla,
                "term_cyclotron": breakdown.term_cyclotron,
                "term_nu": breakdown.term_nu,
                "term_mu": breakdown.term_mu,
                "omega_e": breakdown.omega_e,
                "nc_shift": report.nc_shift,
                "nc_fraction": report.nc_fraction,
                "paper_printed": report.paper_printed,
                "discrepancy_flags": report.discrepancy_flags,
            })),
            Format::Csv => {
                let mut s = String::from("b_tesla,term_cyclotron,term_nu,term_mu,omega_e,nc_shift,nc_fraction,discrepancy_flags\n");
                let _ = writeln!(
                    s,
                    "{:?},{:?},{:?},{:?},{:?},{:?},{},{}",
                    breakdown.b_tesla,
                    breakdown.term_cyclotron,
                    breakdown.term_nu,
                    breakdown.term_mu,
                    breakdown.omega_e,
                    report.nc_shift,
                    report.nc_fraction.map(|x| format!("{x:?}")).unwrap_or_default(),
                    report.discrepancy_flags.join(";"),
                );
                s
            }
        };
        Ok(CommandOutput::ok(body))
    };
    run().unwrap_or_else(|e| CommandOutput::from_error(&e))
}
