//! Scenario runner behind the `nlevel-gauge` binary.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! [system]
//! levels = 2
//! hbar = 1.0
//! mu = 1.0
//!
//! [seed]
//! kind = "explicit-spin"
//! b0 = 1.0
//! psi10 = [1.0, 0.0]
//! psi20 = [0.0, 0.0]
//!
//! [gauge]
//! sign = "auto"
//! alpha = [
//!     { kind = "polynomial", coeffs = [0.0, 0.3] },
//!     { kind = "constant", value = 0.0 },
//!     { kind = "constant", value = 0.0 },
//! ]
//!
//! [run]
//! t0 = 0.0
//! t1 = 66.66666666666667
//! samples = 401
//!
//! [outputs]
//! trajectory = "constant_to_rotating.csv"
//! report = "constant_to_rotating.json"
//! precision = 17
//! ```
//!
//! Seeds are `constant` (`hamiltonian` as rows of `[re, im]` pairs),
//! `diagonal` (`energies` as time functions) or `explicit-spin` (the field
//! `b0 k̂`). Complex numbers are `[re, im]` pairs.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::{self, Deserializer};
use serde::Deserialize;

use crate::adjoint::mean_values_at;
use crate::error::Error;
use crate::gauge::{
    gauge_transform_pair, gauge_transform_state, seed_constant, seed_diagonal, Provenance,
    SolutionPair,
};
use crate::lie::{su2_basis, un_basis, GroupPath, LieBasis, Sign};
use crate::linalg::{c, CMatrix, CVector};
use crate::spinhalf::{
    b_prime_closed_form, bloch_vector, constant_field_seed, field_to_connection, FieldPath,
};
use crate::timefn::{TimeFunction, VectorTimeFunction};
use crate::verify::{certify, resolve_sign_convention, CertificationReport, Tolerances};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "NLEVEL_GAUGE_OUTPUT_DIR";

pub const DEFAULT_PRECISION: usize = 17;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{path}: invalid TOML: {message}")]
    Syntax { path: PathBuf, message: String },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

impl ScenarioError {
    fn invalid(field: &str, message: impl Into<String>) -> Self {
        ScenarioError::Invalid {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Dotted path of the offending field, when known.
    pub fn field(&self) -> Option<&str> {
        match self {
            ScenarioError::Invalid { field, .. } => Some(field),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub levels: usize,
    #[serde(default = "one")]
    pub hbar: f64,
    pub mu: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SeedSpec {
    Constant {
        hamiltonian: Vec<Vec<[f64; 2]>>,
        psi0: Vec<[f64; 2]>,
    },
    Diagonal {
        energies: Vec<TimeFunction>,
        psi0: Vec<[f64; 2]>,
    },
    ExplicitSpin {
        b0: f64,
        psi10: [f64; 2],
        psi20: [f64; 2],
    },
}

/// `"auto"`, `1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignChoice {
    #[default]
    Auto,
    Fixed(Sign),
}

impl<'de> Deserialize<'de> for SignChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(1) => Ok(SignChoice::Fixed(Sign::Plus)),
            Raw::Int(-1) => Ok(SignChoice::Fixed(Sign::Minus)),
            Raw::Text(s) => match s.as_str() {
                "auto" => Ok(SignChoice::Auto),
                "+1" | "1" => Ok(SignChoice::Fixed(Sign::Plus)),
                "-1" => Ok(SignChoice::Fixed(Sign::Minus)),
                _ => Err(de::Error::custom(format!(
                    "expected \"auto\", 1 or -1, got {s:?}"
                ))),
            },
            Raw::Int(v) => Err(de::Error::custom(format!(
                "expected \"auto\", 1 or -1, got {v}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeSpec {
    pub alpha: Vec<TimeFunction>,
    #[serde(default)]
    pub sign: SignChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub trajectory: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub system: SystemSpec,
    pub seed: SeedSpec,
    pub gauge: GaugeSpec,
    pub run: RunSpec,
    #[serde(default)]
    pub verify: Tolerances,
    #[serde(default)]
    pub outputs: OutputSpec,
}

impl Scenario {
    pub fn parse(text: &str, path: &Path) -> Result<Self, ScenarioError> {
        let value: toml::Value = toml::from_str(text).map_err(|e| ScenarioError::Syntax {
            path: path.to_path_buf(),
            message: e.message().to_string(),
        })?;
        let scenario: Scenario =
            serde_path_to_error::deserialize(value).map_err(|e| ScenarioError::Invalid {
                field: e.path().to_string(),
                message: e.inner().to_string(),
            })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.run.t0, self.run.t1)
    }

    pub fn is_spin(&self) -> bool {
        matches!(self.seed, SeedSpec::ExplicitSpin { .. })
    }

    pub fn precision(&self) -> usize {
        self.outputs.precision.unwrap_or(DEFAULT_PRECISION)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let n = self.system.levels;
        if n < 2 {
            return Err(ScenarioError::invalid(
                "system.levels",
                format!("must be at least 2, got {n}"),
            ));
        }
        if !(self.system.hbar.is_finite() && self.system.hbar > 0.0) {
            return Err(ScenarioError::invalid("system.hbar", "must be positive"));
        }
        if let Some(mu) = self.system.mu {
            if !(mu.is_finite() && mu > 0.0) {
                return Err(ScenarioError::invalid("system.mu", "must be positive"));
            }
        }
        let RunSpec { t0, t1, samples } = self.run;
        if !t0.is_finite() {
            return Err(ScenarioError::invalid("run.t0", "must be finite"));
        }
        if !(t1.is_finite() && t1 > t0) {
            return Err(ScenarioError::invalid(
                "run.t1",
                format!("must exceed run.t0 = {t0}, got {t1}"),
            ));
        }
        if samples < 2 {
            return Err(ScenarioError::invalid(
                "run.samples",
                format!("must be at least 2, got {samples}"),
            ));
        }
        let p = self.precision();
        if !(1..=17).contains(&p) {
            return Err(ScenarioError::invalid(
                "outputs.precision",
                format!("must be in 1..=17, got {p}"),
            ));
        }
        let tol = &self.verify;
        for (name, v) in [
            ("verify.residual", tol.residual),
            ("verify.fidelity", tol.fidelity),
            ("verify.norm", tol.norm),
            ("verify.rtol", tol.rtol),
            ("verify.atol", tol.atol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ScenarioError::invalid(name, "must be positive"));
            }
        }

        match &self.seed {
            SeedSpec::Constant { hamiltonian, psi0 } => {
                if hamiltonian.len() != n || hamiltonian.iter().any(|row| row.len() != n) {
                    return Err(ScenarioError::invalid(
                        "seed.hamiltonian",
                        format!("must be {n}×{n}"),
                    ));
                }
                check_psi0(psi0, n, "seed.psi0")?;
            }
            SeedSpec::Diagonal { energies, psi0 } => {
                if energies.len() != n {
                    return Err(ScenarioError::invalid(
                        "seed.energies",
                        format!("expected {n} entries, got {}", energies.len()),
                    ));
                }
                for (k, e) in energies.iter().enumerate() {
                    e.validate().map_err(|err| {
                        ScenarioError::invalid(&format!("seed.energies[{k}]"), err.to_string())
                    })?;
                }
                check_psi0(psi0, n, "seed.psi0")?;
            }
            SeedSpec::ExplicitSpin { b0, psi10, psi20 } => {
                if n != 2 {
                    return Err(ScenarioError::invalid(
                        "system.levels",
                        "explicit-spin seeds need levels = 2",
                    ));
                }
                if self.system.mu.is_none() {
                    return Err(ScenarioError::invalid(
                        "system.mu",
                        "required for explicit-spin seeds",
                    ));
                }
                if !b0.is_finite() {
                    return Err(ScenarioError::invalid("seed.b0", "must be finite"));
                }
                check_psi0(&[*psi10, *psi20], 2, "seed.psi10")?;
            }
        }

        let d = self.gauge.alpha.len();
        let ok = if self.is_spin() {
            d == 3
        } else {
            d == n * n || (n == 2 && d == 3)
        };
        if !ok {
            let expected = if self.is_spin() {
                "3".to_string()
            } else {
                format!("{} (or 3 for levels = 2)", n * n)
            };
            return Err(ScenarioError::invalid(
                "gauge.alpha",
                format!("expected {expected} components, got {d}"),
            ));
        }
        for (k, a) in self.gauge.alpha.iter().enumerate() {
            let field = format!("gauge.alpha[{k}]");
            a.validate()
                .map_err(|err| ScenarioError::invalid(&field, err.to_string()))?;
            let (lo, hi) = a.domain();
            if lo > t0 || hi < t1 {
                return Err(ScenarioError::invalid(
                    &field,
                    format!("domain [{lo}, {hi}] does not cover [{t0}, {t1}]"),
                ));
            }
            a.derivative()
                .map_err(|err| ScenarioError::invalid(&field, err.to_string()))?;
        }
        Ok(())
    }

    /// Lie algebra the gauge coefficients refer to.
    pub fn gauge_basis(&self) -> Arc<LieBasis> {
        if self.gauge.alpha.len() == 3 && self.system.levels == 2 {
            Arc::new(su2_basis())
        } else {
            Arc::new(un_basis(self.system.levels))
        }
    }
}

fn check_psi0(psi0: &[[f64; 2]], n: usize, field: &str) -> Result<(), ScenarioError> {
    if psi0.len() != n {
        return Err(ScenarioError::invalid(
            field,
            format!("expected {n} components, got {}", psi0.len()),
        ));
    }
    if psi0.iter().flatten().any(|x| !x.is_finite()) {
        return Err(ScenarioError::invalid(field, "components must be finite"));
    }
    if psi0.iter().all(|z| z[0] == 0.0 && z[1] == 0.0) {
        return Err(ScenarioError::invalid(field, "state must be nonzero"));
    }
    Ok(())
}

fn cvec(v: &[[f64; 2]]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|z| c(z[0], z[1])))
}

/// What the trajectory table reports besides `t` and `ψ'`.
#[derive(Debug, Clone)]
pub enum TrajectoryMode {
    /// Seed field `B`, transformed field `B'` and Bloch vector `n`.
    Spin { seed_field: FieldPath },
    /// Connection coefficients and mean values in `basis`.
    General { basis: Arc<LieBasis> },
}

/// A generated pair together with how to tabulate it.
#[derive(Debug, Clone)]
pub struct Built {
    pub pair: SolutionPair,
    pub mode: TrajectoryMode,
    pub sign: Option<Sign>,
}

/// Builds the seed, applies the gauge path and returns the new pair.
pub fn build(scenario: &Scenario) -> crate::Result<Built> {
    let interval = scenario.interval();
    let alpha = VectorTimeFunction::new(scenario.gauge.alpha.clone());
    match &scenario.seed {
        SeedSpec::ExplicitSpin { b0, psi10, psi20 } => {
            let mu = scenario.system.mu.unwrap_or(1.0);
            let sign = match scenario.gauge.sign {
                SignChoice::Auto => resolve_sign_convention()?,
                SignChoice::Fixed(s) => s,
            };
            let seed = constant_field_seed(
                *b0,
                c(psi10[0], psi10[1]),
                c(psi20[0], psi20[1]),
                mu,
                interval,
            )?;
            let seed_field = FieldPath::constant([0.0, 0.0, *b0], mu)?;
            let g = GroupPath::axis_angle(alpha.clone(), Sign::Plus, Arc::new(su2_basis()))?;
            let state = gauge_transform_state(&seed.state, &g)?;
            let connection = field_to_connection(&b_prime_closed_form(&seed_field, &alpha, sign)?);
            let pair = SolutionPair::new(
                connection,
                state,
                Provenance::GaugeTransformed {
                    parent: Box::new(seed.provenance),
                    gauge: g,
                },
            )?;
            Ok(Built {
                pair,
                mode: TrajectoryMode::Spin { seed_field },
                sign: Some(sign),
            })
        }
        SeedSpec::Constant { hamiltonian, psi0 } => {
            let n = scenario.system.levels;
            let h0 = CMatrix::from_fn(n, n, |i, j| c(hamiltonian[i][j][0], hamiltonian[i][j][1]));
            let seed = seed_constant(&h0, &cvec(psi0), interval, scenario.system.hbar)?;
            general(scenario, seed, alpha)
        }
        SeedSpec::Diagonal { energies, psi0 } => {
            let seed = seed_diagonal(energies, &cvec(psi0), interval, scenario.system.hbar)?;
            general(scenario, seed, alpha)
        }
    }
}

fn general(
    scenario: &Scenario,
    seed: SolutionPair,
    alpha: VectorTimeFunction,
) -> crate::Result<Built> {
    let basis = scenario.gauge_basis();
    // the exponent sign; the transformation law is exact for either
    let sign = match scenario.gauge.sign {
        SignChoice::Auto => Sign::Plus,
        SignChoice::Fixed(s) => s,
    };
    let g = GroupPath::axis_angle(alpha, sign, basis.clone())?;
    Ok(Built {
        pair: gauge_transform_pair(&seed, &g)?,
        mode: TrajectoryMode::General { basis },
        sign: None,
    })
}

/// `samples` uniformly spaced times from `t0` to `t1` inclusive.
pub fn sample_grid(interval: (f64, f64), samples: usize) -> Vec<f64> {
    let (t0, t1) = interval;
    let m = samples.max(2) - 1;
    (0..=m)
        .map(|k| {
            if k == m {
                t1
            } else {
                t0 + (t1 - t0) * k as f64 / m as f64
            }
        })
        .collect()
}

fn header(pair: &SolutionPair, mode: &TrajectoryMode) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    match mode {
        TrajectoryMode::Spin { .. } => {
            cols.extend(["Bx", "By", "Bz", "Bpx", "Bpy", "Bpz"].map(String::from));
        }
        TrajectoryMode::General { basis } => {
            cols.extend((1..=basis.dim()).map(|i| format!("a{i}")))
        }
    }
    for k in 1..=pair.n() {
        cols.push(format!("re_psi{k}"));
        cols.push(format!("im_psi{k}"));
    }
    match mode {
        TrajectoryMode::Spin { .. } => cols.extend(["nx", "ny", "nz"].map(String::from)),
        TrajectoryMode::General { basis } => {
            cols.extend((1..=basis.dim()).map(|i| format!("lambda{i}")))
        }
    }
    cols
}

fn row(pair: &SolutionPair, mode: &TrajectoryMode, t: f64) -> crate::Result<Vec<f64>> {
    let psi = pair.state.value(t)?;
    let mut out = vec![t];
    match mode {
        TrajectoryMode::Spin { seed_field } => {
            out.extend(seed_field.at(t)?);
            let mu = seed_field.mu();
            let co = pair.connection.coefficients(t, &su2_basis())?;
            out.extend(co.iter().map(|a| a / mu));
        }
        TrajectoryMode::General { basis } => out.extend(pair.connection.coefficients(t, basis)?),
    }
    for z in psi.iter() {
        out.push(z.re);
        out.push(z.im);
    }
    match mode {
        TrajectoryMode::Spin { .. } => out.extend(bloch_vector(&psi)?.0),
        TrajectoryMode::General { basis } => out.extend(mean_values_at(&psi, basis).0),
    }
    Ok(out)
}

/// Formats `x` with `precision` significant digits.
pub fn format_number(x: f64, precision: usize) -> String {
    format!("{:.*e}", precision.saturating_sub(1), x)
}

/// Writes the CSV trajectory of `pair` on `grid`.
pub fn emit_trajectory<W: Write>(
    out: &mut W,
    pair: &SolutionPair,
    mode: &TrajectoryMode,
    grid: &[f64],
    precision: usize,
) -> crate::Result<()> {
    let io_err = |e: io::Error| Error::Numerical(format!("trajectory output: {e}"));
    let mut text = header(pair, mode).join(",");
    text.push('\n');
    for &t in grid {
        let values = row(pair, mode, t)?;
        for (k, v) in values.iter().enumerate() {
            if k > 0 {
                text.push(',');
            }
            let _ = write!(text, "{}", format_number(*v, precision));
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes()).map_err(io_err)
}

/// Command-line overrides applied on top of a scenario file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub grid: Option<usize>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub output_dir: Option<PathBuf>,
    /// Skip the trajectory file.
    pub report_only: bool,
}

impl RunOptions {
    fn apply(&self, tol: &mut Tolerances) {
        if let Some(g) = self.grid {
            tol.grid = g;
        }
        if let Some(r) = self.rtol {
            tol.rtol = r;
        }
        if let Some(a) = self.atol {
            tol.atol = a;
        }
    }

    fn resolve(&self, file: &Path) -> PathBuf {
        if file.is_absolute() {
            return file.to_path_buf();
        }
        match &self.output_dir {
            Some(dir) => dir.join(file),
            None => match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) => PathBuf::from(dir).join(file),
                None => file.to_path_buf(),
            },
        }
    }
}

/// Result of a scenario that parsed and validated.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub report: CertificationReport,
    pub report_path: PathBuf,
    pub trajectory_path: Option<PathBuf>,
}

impl ScenarioOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.pass {
            0
        } else {
            2
        }
    }
}

/// Exit code for a finished scenario: 0 pass, 2 certification failure,
/// 1 configuration or I/O error.
pub fn exit_code(result: &Result<ScenarioOutcome, ScenarioError>) -> i32 {
    match result {
        Ok(o) => o.exit_code(),
        Err(_) => 1,
    }
}

fn failed_report(scenario: &Scenario, tol: &Tolerances, err: &Error) -> CertificationReport {
    CertificationReport {
        max_schrodinger_residual: f64::INFINITY,
        min_fidelity: 0.0,
        norm_drift: f64::INFINITY,
        grid: crate::verify::uniform_grid(scenario.interval(), tol.grid),
        tolerances: *tol,
        pass: false,
        sign_convention_used: None,
        diagnostic: Some(err.to_string()),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ScenarioError> {
    let wrap = |source| ScenarioError::Write {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(wrap)?;
    }
    std::fs::write(path, bytes).map_err(wrap)
}

fn stem(config: &Path) -> String {
    config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_string())
}

/// Loads, builds, certifies and writes the outputs of one scenario file.
pub fn run_scenario(config: &Path, opts: &RunOptions) -> Result<ScenarioOutcome, ScenarioError> {
    let scenario = Scenario::load(config)?;
    let mut tol = scenario.verify;
    opts.apply(&mut tol);
    if let Some(g) = opts
        .rtol
        .or(opts.atol)
        .filter(|v| !(v.is_finite() && *v > 0.0))
    {
        return Err(ScenarioError::invalid(
            "--rtol/--atol",
            format!("must be positive, got {g}"),
        ));
    }
    let name = stem(config);
    let report_path = opts.resolve(
        &scenario
            .outputs
            .report
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{name}.report.json"))),
    );
    let trajectory_path = opts.resolve(
        &scenario
            .outputs
            .trajectory
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{name}.trajectory.csv"))),
    );

    let (report, built) = match build(&scenario) {
        Ok(built) => {
            let mut report = certify(&built.pair, scenario.interval(), &tol);
            report.sign_convention_used = built.sign;
            (report, Some(built))
        }
        Err(e) => (failed_report(&scenario, &tol, &e), None),
    };

    let mut written = None;
    if let (Some(built), false) = (&built, opts.report_only) {
        let mut buf = Vec::new();
        let grid = sample_grid(scenario.interval(), scenario.run.samples);
        match emit_trajectory(
            &mut buf,
            &built.pair,
            &built.mode,
            &grid,
            scenario.precision(),
        ) {
            Ok(()) => {
                write_file(&trajectory_path, &buf)?;
                written = Some(trajectory_path);
            }
            Err(e) => {
                return finish(report_with_error(report, &e), report_path, None);
            }
        }
    }
    finish(report, report_path, written)
}

fn report_with_error(mut report: CertificationReport, err: &Error) -> CertificationReport {
    report.pass = false;
    report.diagnostic = Some(match report.diagnostic.take() {
        Some(d) => format!("{d}; {err}"),
        None => err.to_string(),
    });
    report
}

fn finish(
    report: CertificationReport,
    report_path: PathBuf,
    trajectory_path: Option<PathBuf>,
) -> Result<ScenarioOutcome, ScenarioError> {
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    write_file(&report_path, json.as_bytes())?;
    Ok(ScenarioOutcome {
        report,
        report_path,
        trajectory_path,
    })
}

/// Runs each config on up to `jobs` threads; results keep the input order.
pub fn run_many(
    configs: &[PathBuf],
    opts: &RunOptions,
    jobs: usize,
) -> Vec<Result<ScenarioOutcome, ScenarioError>> {
    let jobs = jobs.clamp(1, configs.len().max(1));
    if jobs == 1 {
        return configs.iter().map(|p| run_scenario(p, opts)).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Result<ScenarioOutcome, ScenarioError>>>> = configs
        .iter()
        .map(|_| std::sync::Mutex::new(None))
        .collect();
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let k = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if k >= configs.len() {
                    break;
                }
                let r = run_scenario(&configs[k], opts);
                *slots[k].lock().unwrap() = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every slot filled"))
        .collect()
}

/// Combined exit code: 1 if any scenario failed to load or write, else 2 if
/// any failed certification, else 0.
pub fn combined_exit_code(results: &[Result<ScenarioOutcome, ScenarioError>]) -> i32 {
    let codes: Vec<i32> = results.iter().map(exit_code).collect();
    if codes.contains(&1) {
        1
    } else if codes.contains(&2) {
        2
    } else {
        0
    }
}
