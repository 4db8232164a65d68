//! Config-driven experiment: grid, field sampling, gradients, wall
//! derivatives, skin friction and the output directory.
//!
//! Configs are TOML restricted to dotted keys, e.g.
//!
//! ```toml
//! seed = 7
//! methods = ["FD1", "FD3_ETA"]
//! grid.nx = 128
//! lsq.weight_exponent = 2
//! ```
//!
//! Every key has a default, so an empty file is the stock flat-plate run.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{
    exact_wall_derivative, solve_blasius, AnalyticField, BlasiusFlow, FlowParams, Poly2, U, V,
};
use crate::gradient::{
    cell_gradients_from_nodal, cell_lsq_gradients, nodal_lsq_gradients, CellGradientMethod, LsqOptions,
};
use crate::gridgen::{generate, DiagonalMode, GridSpec, WALL_TAG};
use crate::mesh::{read_mesh, write_mesh, TriMesh};
use crate::report::{
    emit_csv, emit_noise_csv, emit_svg, noise_metrics, skin_friction, BlasiusReference, FrictionMode,
    NoiseReport, Reference, ReportError, SkinFrictionCurve,
};
use crate::wallnormal::{evaluate, Method, StepRule, WallInputs};

pub const THREADS_ENV: &str = "WALLGRAD_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl ConfigError {
    pub fn code(&self) -> &'static str {
        match self {
            ConfigError::Parse { .. } => "config-parse-error",
            ConfigError::Invalid(_) => "invalid-config",
            ConfigError::Io { .. } => "io-error",
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ConfigError + '_ {
    move |source| ConfigError::Io { path: path.display().to_string(), source }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Read this mesh instead of generating one.
    pub mesh: Option<PathBuf>,
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub first_layer_height: f64,
    pub stretch: f64,
    pub perturb: f64,
    pub diagonal_mode: DiagonalMode,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = GridSpec::default();
        GridConfig {
            mesh: None,
            x_min: g.x_range.0,
            x_max: g.x_range.1,
            nx: g.nx,
            ny: g.ny,
            first_layer_height: g.first_layer_height,
            stretch: g.stretch,
            perturb: g.perturb,
            diagonal_mode: g.diagonal_mode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Blasius,
    Polynomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldConfig {
    pub kind: FieldKind,
    pub eta_max: f64,
    pub n_steps: usize,
    /// Relative amplitude of the seeded sampling noise; 0 disables it.
    pub noise: f64,
    pub u: Poly2,
    pub v: Poly2,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            kind: FieldKind::Blasius,
            eta_max: 10.0,
            n_steps: 2000,
            noise: 0.0,
            u: Poly2::zero(),
            v: Poly2::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    pub mach: f64,
    pub reynolds: f64,
    /// Defaults to `mach / reynolds`.
    pub mu: Option<f64>,
}

impl Default for FlowConfig {
    fn default() -> Self {
        let f = FlowParams::default();
        FlowConfig { mach: f.mach, reynolds: f.reynolds, mu: None }
    }
}

impl FlowConfig {
    pub fn params(&self) -> FlowParams {
        let mut p = FlowParams::new(self.mach, self.reynolds);
        if let Some(mu) = self.mu {
            p.mu = mu;
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StepConfig {
    pub eta: f64,
    pub x_ref: f64,
}

impl Default for StepConfig {
    fn default() -> Self {
        StepConfig { eta: 0.5, x_ref: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LsqConfig {
    pub weight_exponent: u8,
    pub bc_augment: bool,
    pub second_ring_threshold: f64,
}

impl Default for LsqConfig {
    fn default() -> Self {
        let o = LsqOptions::default();
        LsqConfig {
            weight_exponent: o.weight_exponent,
            bc_augment: o.bc_augment,
            second_ring_threshold: o.second_ring_threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FdConfig {
    pub cell_gradient: CellGradientMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    pub window: [f64; 2],
}

impl Default for ReportConfig {
    fn default() -> Self {
        let (lo, hi) = crate::report::DEFAULT_WINDOW;
        ReportConfig { window: [lo, hi] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub output: PathBuf,
    pub methods: Vec<Method>,
    pub grid: GridConfig,
    pub field: FieldConfig,
    pub flow: FlowConfig,
    pub step: StepConfig,
    pub lsq: LsqConfig,
    pub fd: FdConfig,
    pub report: ReportConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: GridSpec::default().seed,
            output: PathBuf::from("wallgrad-out"),
            methods: Method::ALL.to_vec(),
            grid: GridConfig::default(),
            field: FieldConfig::default(),
            flow: FlowConfig::default(),
            step: StepConfig::default(),
            lsq: LsqConfig::default(),
            fd: FdConfig::default(),
            report: ReportConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_string(),
            msg: e.to_string().lines().filter(|l| !l.trim().is_empty()).collect::<Vec<_>>().join(" "),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn grid_spec(&self) -> GridSpec {
        let g = &self.grid;
        GridSpec {
            x_range: (g.x_min, g.x_max),
            nx: g.nx,
            ny: g.ny,
            first_layer_height: g.first_layer_height,
            stretch: g.stretch,
            perturb: g.perturb,
            diagonal_mode: g.diagonal_mode,
            seed: self.seed,
        }
    }

    pub fn lsq_options(&self) -> LsqOptions {
        LsqOptions {
            weight_exponent: self.lsq.weight_exponent,
            bc_augment: self.lsq.bc_augment,
            second_ring_threshold: self.lsq.second_ring_threshold,
            wall_tag: WALL_TAG.to_string(),
        }
    }

    pub fn window(&self) -> (f64, f64) {
        (self.report.window[0], self.report.window[1])
    }

    /// Checks everything that can be checked without touching the mesh.
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::from(ConfigError::Invalid(msg)));
        if self.methods.is_empty() {
            return invalid("methods must name at least one method".into());
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return invalid("methods lists a method twice".into());
        }
        if self.grid.mesh.is_none() {
            self.grid_spec().validate()?;
        }
        self.flow.params().validate()?;
        if self.field.kind == FieldKind::Blasius && !(self.field.eta_max >= 8.0 && self.field.n_steps >= 1000) {
            return invalid(format!(
                "field.eta_max = {} must be >= 8 and field.n_steps = {} >= 1000",
                self.field.eta_max, self.field.n_steps
            ));
        }
        if !(self.field.noise >= 0.0 && self.field.noise.is_finite()) {
            return invalid(format!("field.noise = {} must be >= 0", self.field.noise));
        }
        StepRule::eta_profile(self.step.eta, self.flow.reynolds).validate()?;
        StepRule::global_constant(self.step.eta, self.step.x_ref, self.flow.reynolds).validate()?;
        self.lsq_options().validate()?;
        let (lo, hi) = self.window();
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return invalid(format!("report.window [{lo}, {hi}] must be increasing"));
        }
        Ok(())
    }

    /// Every effective setting as one `key = value` line, loadable by
    /// [`ExperimentConfig::parse`].
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let s = |v: &str| toml::Value::String(v.to_string()).to_string();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("seed", self.seed.to_string());
        kv("output", s(&self.output.display().to_string()));
        kv("methods", format!("[{}]", self.methods.iter().map(|m| s(m.name())).collect::<Vec<_>>().join(", ")));
        if let Some(mesh) = &self.grid.mesh {
            kv("grid.mesh", s(&mesh.display().to_string()));
        }
        let g = &self.grid;
        kv("grid.x_min", fnum(g.x_min));
        kv("grid.x_max", fnum(g.x_max));
        kv("grid.nx", g.nx.to_string());
        kv("grid.ny", g.ny.to_string());
        kv("grid.first_layer_height", fnum(g.first_layer_height));
        kv("grid.stretch", fnum(g.stretch));
        kv("grid.perturb", fnum(g.perturb));
        kv("grid.diagonal_mode", s(g.diagonal_mode.as_str()));
        let f = &self.field;
        kv("field.kind", s(match f.kind {
            FieldKind::Blasius => "blasius",
            FieldKind::Polynomial => "polynomial",
        }));
        kv("field.eta_max", fnum(f.eta_max));
        kv("field.n_steps", f.n_steps.to_string());
        kv("field.noise", fnum(f.noise));
        for (name, p) in [("u", &f.u), ("v", &f.v)] {
            for (c, v) in ["c00", "c10", "c01", "c20", "c11", "c02"].iter().zip(p.coeffs()) {
                kv(&format!("field.{name}.{c}"), fnum(v));
            }
        }
        kv("flow.mach", fnum(self.flow.mach));
        kv("flow.reynolds", fnum(self.flow.reynolds));
        kv("flow.mu", fnum(self.flow.params().mu));
        kv("step.eta", fnum(self.step.eta));
        kv("step.x_ref", fnum(self.step.x_ref));
        kv("lsq.weight_exponent", self.lsq.weight_exponent.to_string());
        kv("lsq.bc_augment", self.lsq.bc_augment.to_string());
        kv("lsq.second_ring_threshold", fnum(self.lsq.second_ring_threshold));
        kv("fd.cell_gradient", s(self.fd.cell_gradient.as_str()));
        kv("report.window", format!("[{}, {}]", fnum(self.report.window[0]), fnum(self.report.window[1])));
        out
    }
}

/// Shortest round-trip float that TOML reads back as a float.
fn fnum(v: f64) -> String {
    let s = format!("{v:?}");
    if s.contains(['.', 'e', 'E']) || !v.is_finite() {
        s
    } else {
        format!("{s}.0")
    }
}

/// Applies `WALLGRAD_THREADS` to the global thread pool; `0` means serial.
/// Returns the cap that was applied, if any.
pub fn configure_threads_from_env() -> Result<Option<usize>, ConfigError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| ConfigError::Invalid(format!("{THREADS_ENV} = {raw:?} is not a non-negative integer")))?;
    let threads = n.max(1);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| ConfigError::Invalid(format!("cannot size thread pool: {e}")))?;
    Ok(Some(n))
}

/// Exact flat-wall skin friction of an analytic field, `mu (u_y + v_x) 2 / M^2`.
#[derive(Debug, Clone)]
pub struct AnalyticReference {
    pub field: AnalyticField,
    pub params: FlowParams,
}

impl Reference for AnalyticReference {
    fn cfx(&self, x: f64) -> Result<f64, ReportError> {
        if let AnalyticField::Blasius(b) = &self.field {
            return BlasiusReference { params: self.params, wall_shear: b.table.wall_shear() }.cfx(x);
        }
        let p = crate::mesh::Point::new(x, 0.0);
        let du = self.field.gradient(U, &p).map_err(|_| ReportError::NonpositiveX { x })?;
        let dv = self.field.gradient(V, &p).map_err(|_| ReportError::NonpositiveX { x })?;
        let FlowParams { mach, mu, .. } = self.params;
        Ok(mu * (du.y + dv.x) * 2.0 / (mach * mach))
    }
}

pub fn build_mesh(cfg: &ExperimentConfig) -> Result<TriMesh> {
    Ok(match &cfg.grid.mesh {
        Some(path) => read_mesh(path)?,
        None => generate(&cfg.grid_spec())?,
    })
}

pub fn build_field(cfg: &ExperimentConfig) -> Result<AnalyticField> {
    Ok(match cfg.field.kind {
        FieldKind::Blasius => {
            let table = solve_blasius(cfg.field.eta_max, cfg.field.n_steps)?;
            AnalyticField::Blasius(BlasiusFlow::new(cfg.flow.params(), Arc::new(table)))
        }
        FieldKind::Polynomial => AnalyticField::Polynomial { u: cfg.field.u, v: cfg.field.v },
    })
}

/// Per-method outcome of an experiment.
#[derive(Debug, Clone)]
pub struct MethodResult {
    pub method: Method,
    pub curve: SkinFrictionCurve,
    pub report: NoiseReport,
    /// Finite-difference points that fell outside their adjacent cell.
    pub outside_cell: usize,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub results: Vec<MethodResult>,
    pub n_cells: usize,
    pub n_wall_faces: usize,
}

impl ExperimentResult {
    pub fn get(&self, method: Method) -> Option<&MethodResult> {
        self.results.iter().find(|r| r.method == method)
    }
}

/// Runs the pipeline without touching the file system (beyond reading a
/// configured mesh).
pub fn compute(cfg: &ExperimentConfig) -> Result<(TriMesh, AnalyticReference, ExperimentResult)> {
    cfg.validate()?;
    let mesh = build_mesh(cfg)?;
    let field = build_field(cfg)?;
    let params = cfg.flow.params();
    let mut cells = field.sample(&mesh)?;
    if cfg.field.noise > 0.0 {
        cells = cells.with_noise(cfg.field.noise, cfg.seed);
    }
    let opts = cfg.lsq_options();
    let nodal = nodal_lsq_gradients(&mesh, &cells, &field, &opts)?;
    let cell_grads = match cfg.fd.cell_gradient {
        CellGradientMethod::NodalAverage => cell_gradients_from_nodal(&mesh, &nodal)?,
        CellGradientMethod::CellLsq => cell_lsq_gradients(&mesh, &cells, &field, &opts)?,
    };
    let inputs = WallInputs {
        mesh: &mesh,
        field: &cells,
        bc: &field,
        nodal: &nodal,
        cell_grads: &cell_grads,
        tag: WALL_TAG,
        eta_rule: StepRule::eta_profile(cfg.step.eta, params.reynolds),
        const_rule: StepRule::global_constant(cfg.step.eta, cfg.step.x_ref, params.reynolds),
    };
    let reference = AnalyticReference { field: field.clone(), params };
    let results = cfg
        .methods
        .par_iter()
        .map(|&method| -> Result<MethodResult> {
            let samples = evaluate(method, &inputs)?;
            let outside_cell = samples.iter().filter(|s| s.outside_cell).count();
            let curve = skin_friction(&samples, &params, FrictionMode::for_method(method))?;
            let report = noise_metrics(&curve, &reference, cfg.window())?;
            Ok(MethodResult { method, curve, report, outside_cell })
        })
        .collect::<Result<Vec<_>>>()?;
    let n_wall_faces = mesh.tagged_bfaces(WALL_TAG).count();
    let n_cells = mesh.n_cells();
    Ok((mesh, reference, ExperimentResult { results, n_cells, n_wall_faces }))
}

pub const MESH_FILE: &str = "mesh.txt";
pub const CONFIG_ECHO_FILE: &str = "config.toml";
pub const COMBINED_CSV: &str = "cf_all.csv";
pub const NOISE_CSV: &str = "noise.csv";
pub const SVG_FILE: &str = "cf.svg";

pub fn method_csv_name(method: Method) -> String {
    format!("cf_{}.csv", method.name())
}

/// Runs the experiment and writes every artifact into `cfg.output`.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let (mesh, reference, result) = compute(cfg)?;
    let dir = &cfg.output;
    std::fs::create_dir_all(dir).map_err(io_err(dir)).map_err(Error::from)?;
    write_mesh(&mesh, dir.join(MESH_FILE))?;
    let echo = dir.join(CONFIG_ECHO_FILE);
    std::fs::write(&echo, cfg.echo()).map_err(io_err(&echo)).map_err(Error::from)?;

    let curves: Vec<SkinFrictionCurve> = result.results.iter().map(|r| r.curve.clone()).collect();
    for r in &result.results {
        emit_csv(std::slice::from_ref(&r.curve), Some(&reference), &dir.join(method_csv_name(r.method)))?;
    }
    emit_csv(&curves, Some(&reference), &dir.join(COMBINED_CSV))?;
    let reports: Vec<NoiseReport> = result.results.iter().map(|r| r.report.clone()).collect();
    emit_noise_csv(&reports, &dir.join(NOISE_CSV))?;
    emit_svg(&curves, Some(&reference), cfg.window(), &dir.join(SVG_FILE))?;
    Ok(result)
}

/// Fixed-width summary table: method, mean relative error, tv, hf_rms.
pub fn format_summary(result: &ExperimentResult) -> String {
    let mut out = format!("{:<10} {:>14} {:>14} {:>14}\n", "method", "mean_rel_err", "tv", "hf_rms");
    for r in &result.results {
        let _ = writeln!(
            out,
            "{:<10} {:>14.6e} {:>14.6e} {:>14.6e}",
            r.method.name(),
            r.report.mean_rel_err,
            r.report.tv,
            r.report.hf_rms
        );
    }
    out
}

/// `eta,f,fp,fpp` rows of the Blasius table.
pub fn format_blasius_table(eta_max: f64, n_steps: usize) -> Result<String> {
    let table = solve_blasius(eta_max, n_steps)?;
    let mut out = String::from("eta,f,fp,fpp\n");
    for (eta, f, fp, fpp) in table.rows() {
        let _ = writeln!(out, "{eta:.12e},{f:.12e},{fp:.12e},{fpp:.12e}");
    }
    Ok(out)
}

/// Worst wall-normal derivative error of one method over random affine fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearCheck {
    pub method: Method,
    /// Max of `|dudn - exact| / (1 + |exact|)`.
    pub max_error: f64,
}

/// Random affine field with coefficients in `[-1, 1]`, tangential variation
/// included.
pub fn random_affine_field(rng: &mut ChaCha8Rng) -> AnalyticField {
    let mut c = || rng.random_range(-1.0..=1.0);
    let u = Poly2::linear(c(), c(), c());
    let v = Poly2::linear(c(), c(), c());
    AnalyticField::Polynomial { u, v }
}

/// Wall-normal derivative errors of every method on `n_fields` seeded affine
/// fields sampled on `mesh`.
pub fn verify_linear(mesh: &TriMesh, n_fields: usize, seed: u64, methods: &[Method]) -> Result<Vec<LinearCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = vec![0.0f64; methods.len()];
    let opts = LsqOptions::default();
    for _ in 0..n_fields {
        let field = random_affine_field(&mut rng);
        let cells = field.sample(mesh)?;
        let nodal = nodal_lsq_gradients(mesh, &cells, &field, &opts)?;
        let cell_grads = cell_gradients_from_nodal(mesh, &nodal)?;
        let inputs = WallInputs {
            mesh,
            field: &cells,
            bc: &field,
            nodal: &nodal,
            cell_grads: &cell_grads,
            tag: WALL_TAG,
            eta_rule: StepRule::eta_profile(0.5, 1e6),
            const_rule: StepRule::global_constant(0.5, 1.0, 1e6),
        };
        for (k, &method) in methods.iter().enumerate() {
            for s in evaluate(method, &inputs)? {
                let exact = exact_wall_derivative(&field, &s.location, &s.normal)?;
                worst[k] = worst[k].max((s.dudn - exact).abs() / (1.0 + exact.abs()));
            }
        }
    }
    Ok(methods.iter().zip(worst).map(|(&method, max_error)| LinearCheck { method, max_error }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.grid.nx = 24;
        cfg.grid.ny = 12;
        cfg.grid.first_layer_height = 1e-3;
        cfg
    }

    #[test]
    fn empty_config_is_default() {
        assert_eq!(ExperimentConfig::parse("", "<empty>").unwrap(), ExperimentConfig::default());
        let d = ExperimentConfig::default();
        assert_eq!(d.flow.params().mu, 0.15 / 1e6);
        assert_eq!((d.grid.x_min, d.grid.x_max), (0.0, 2.0));
        assert_eq!(d.step.eta, 0.5);
        assert_eq!(d.methods.len(), 8);
    }

    #[test]
    fn dotted_keys() {
        let cfg = ExperimentConfig::parse(
            "seed = 9\nmethods = [\"FD1\", \"NG\"]\ngrid.nx = 10\nlsq.weight_exponent = 2\nfield.kind = \"polynomial\"\nfield.u.c01 = 3.5\nfd.cell_gradient = \"cell_lsq\"\n",
            "t",
        )
        .unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.methods, vec![Method::Fd1, Method::Ng]);
        assert_eq!(cfg.grid.nx, 10);
        assert_eq!(cfg.lsq.weight_exponent, 2);
        assert_eq!(cfg.field.kind, FieldKind::Polynomial);
        assert_eq!(cfg.field.u.c01, 3.5);
        assert_eq!(cfg.fd.cell_gradient, CellGradientMethod::CellLsq);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ExperimentConfig::parse("grid.nz = 3\n", "t").unwrap_err();
        assert_eq!(err.code(), "config-parse-error");
        let err = ExperimentConfig::parse("methods = [\"FD9\"]\n", "t").unwrap_err();
        assert_eq!(err.code(), "config-parse-error");
    }

    #[test]
    fn zero_methods_fail_validation() {
        let cfg = ExperimentConfig { methods: vec![], ..ExperimentConfig::default() };
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.machine().to_string().split(':').next().unwrap(), "cli.invalid-config");
    }

    #[test]
    fn echo_round_trips() {
        let mut cfg = small();
        cfg.grid.mesh = Some(PathBuf::from("some dir/mesh \"q\".txt"));
        cfg.flow.mu = Some(3e-7);
        cfg.field.u = Poly2::new([0.1, 1e-9, 2.0, 0.0, -0.25, 7.0]);
        cfg.report.window = [0.25, 1.5];
        let back = ExperimentConfig::parse(&cfg.echo(), "echo").unwrap();
        assert_eq!(back, cfg);
        let plain = small();
        let back = ExperimentConfig::parse(&plain.echo(), "echo").unwrap();
        assert_eq!(back.flow.params(), plain.flow.params());
        assert_eq!(back.echo(), plain.echo());
    }

    #[test]
    fn compute_small_blasius() {
        let (_, _, res) = compute(&small()).unwrap();
        assert_eq!(res.results.len(), 8);
        for r in &res.results {
            assert!(r.report.mean_rel_err < 0.5, "{}: {}", r.method, r.report.mean_rel_err);
        }
    }

    #[test]
    fn polynomial_experiment_is_exact() {
        let mut cfg = small();
        cfg.field.kind = FieldKind::Polynomial;
        cfg.field.u = Poly2::linear(0.0, 0.0, 2.0);
        cfg.methods.retain(|&m| m != Method::Fd1);
        let (_, _, res) = compute(&cfg).unwrap();
        for r in &res.results {
            assert!(r.report.max_rel_err < 1e-9, "{}", r.method);
        }
    }

    #[test]
    fn run_writes_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = small();
        cfg.output = dir.path().join("out");
        cfg.methods = vec![Method::Fd1, Method::Cang];
        let res = run(&cfg).unwrap();
        for f in [MESH_FILE, CONFIG_ECHO_FILE, COMBINED_CSV, NOISE_CSV, SVG_FILE, "cf_FD1.csv", "cf_CANG.csv"] {
            assert!(cfg.output.join(f).is_file(), "{f}");
        }
        let summary = format_summary(&res);
        assert_eq!(summary.lines().count(), 3);
        assert!(summary.lines().nth(1).unwrap().starts_with("FD1"));
    }

    #[test]
    fn blasius_table_first_row() {
        let text = format_blasius_table(10.0, 2000).unwrap();
        let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(&row[..3], &[0.0, 0.0, 0.0]);
        assert!((row[3] - 0.332057).abs() < 1e-5);
    }

    #[test]
    fn verify_linear_on_generated_mesh() {
        let mesh = generate(&GridSpec { nx: 12, ny: 6, seed: 3, ..GridSpec::default() }).unwrap();
        let checks = verify_linear(&mesh, 3, 11, &Method::ALL).unwrap();
        for c in checks {
            if c.method == Method::Fd1 {
                assert!(c.max_error > 1e-6);
            } else {
                assert!(c.max_error < 1e-10, "{}: {}", c.method, c.max_error);
            }
        }
    }
}
