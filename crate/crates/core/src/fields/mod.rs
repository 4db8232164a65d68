//! Analytic solution fields sampled at cell centroids.
//!
//! These stand in for a finite-volume solution: the wall-derivative methods
//! only ever see one point value per cell plus the wall boundary values.

mod blasius;
mod poly;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use blasius::{solve_blasius, BlasiusPoint, BlasiusTable};
pub use poly::Poly2;

use crate::mesh::{MeshId, Point, TriMesh, Vec2};

pub const U: &str = "u";
pub const V: &str = "v";

#[derive(Debug, thiserror::Error)]
pub enum FieldError {
    #[error("x = {x} must be positive")]
    NonpositiveX { x: f64 },
    #[error("cell {cell} centroid at x = {x} is at or left of the leading edge")]
    CentroidAtLeadingEdge { cell: usize, x: f64 },
    #[error("{0}")]
    InvalidBlasius(String),
    #[error("shooting did not converge after {iterations} bisection iterations")]
    NoConvergence { iterations: usize },
    #[error("unknown field component {0:?}")]
    UnknownComponent(String),
    #[error("unknown field kind {0:?}")]
    UnknownFieldKind(String),
    #[error("field was sampled on a different mesh")]
    MeshMismatch,
    #[error("component {name:?} has {len} values for {cells} cells")]
    LengthMismatch { name: String, len: usize, cells: usize },
    #[error("invalid flow parameters: {0}")]
    InvalidFlow(String),
}

impl FieldError {
    pub fn code(&self) -> &'static str {
        match self {
            FieldError::NonpositiveX { .. } => "nonpositive-x",
            FieldError::CentroidAtLeadingEdge { .. } => "centroid-at-or-left-of-leading-edge",
            FieldError::InvalidBlasius(_) => "invalid-blasius",
            FieldError::NoConvergence { .. } => "no-convergence",
            FieldError::UnknownComponent(_) => "unknown-component",
            FieldError::UnknownFieldKind(_) => "unknown-field-kind",
            FieldError::MeshMismatch => "mesh-mismatch",
            FieldError::LengthMismatch { .. } => "length-mismatch",
            FieldError::InvalidFlow(_) => "invalid-flow",
        }
    }
}

/// Free-stream conditions in the nondimensionalization where velocities are
/// scaled by the free-stream speed of sound and lengths by the plate unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    pub mach: f64,
    /// Reynolds number per unit length.
    pub reynolds: f64,
    /// Nondimensional viscosity at the wall.
    pub mu: f64,
}

impl FlowParams {
    /// Viscosity defaults to `mach / reynolds`, the value consistent with
    /// `U = mach` and `rho = 1`.
    pub fn new(mach: f64, reynolds: f64) -> Self {
        FlowParams { mach, reynolds, mu: mach / reynolds }
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        for (name, v) in [("mach", self.mach), ("reynolds", self.reynolds), ("mu", self.mu)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(FieldError::InvalidFlow(format!("{name} = {v} must be positive")));
            }
        }
        Ok(())
    }
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams::new(0.15, 1e6)
    }
}

/// Similarity coordinate `eta = (y / x) sqrt(Re_x)` with `Re_x = Re x`.
pub fn eta_of(x: f64, y: f64, params: &FlowParams) -> Result<f64, FieldError> {
    if !(x > 0.0) {
        return Err(FieldError::NonpositiveX { x });
    }
    Ok(y / x * (params.reynolds * x).sqrt())
}

/// Per-cell point values, one array per named component.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    mesh: MeshId,
    components: Vec<(String, Vec<f64>)>,
}

impl CellField {
    pub fn new(mesh: &TriMesh, components: Vec<(String, Vec<f64>)>) -> Result<Self, FieldError> {
        for (name, values) in &components {
            if values.len() != mesh.n_cells() {
                return Err(FieldError::LengthMismatch {
                    name: name.clone(),
                    len: values.len(),
                    cells: mesh.n_cells(),
                });
            }
        }
        Ok(CellField { mesh: mesh.id(), components })
    }

    pub fn mesh_id(&self) -> MeshId {
        self.mesh
    }

    pub fn check_mesh(&self, mesh: &TriMesh) -> Result<(), FieldError> {
        if self.mesh != mesh.id() {
            return Err(FieldError::MeshMismatch);
        }
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.components.iter().map(|(n, _)| n.as_str())
    }

    pub fn component(&self, name: &str) -> Result<&[f64], FieldError> {
        self.components
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| FieldError::UnknownComponent(name.to_string()))
    }

    pub fn has(&self, name: &str) -> bool {
        self.components.iter().any(|(n, _)| n == name)
    }

    /// Scales every component by `alpha`.
    pub fn scaled(&self, alpha: f64) -> CellField {
        let components = self
            .components
            .iter()
            .map(|(n, v)| (n.clone(), v.iter().map(|x| alpha * x).collect()))
            .collect();
        CellField { mesh: self.mesh, components }
    }

    /// Adds uniform noise of amplitude `amplitude * |value|` to every cell
    /// value. Component `k` draws from stream `k` of a ChaCha8 generator
    /// seeded with `seed`.
    pub fn with_noise(&self, amplitude: f64, seed: u64) -> CellField {
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(k, (n, v))| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k as u64);
                let noisy = v
                    .iter()
                    .map(|&x| x + amplitude * x.abs() * (2.0 * rng.random::<f64>() - 1.0))
                    .collect();
                (n.clone(), noisy)
            })
            .collect();
        CellField { mesh: self.mesh, components }
    }
}

/// Known boundary values on the wall, per component.
pub trait WallBc: Sync {
    fn boundary_value(&self, component: &str, p: &Point) -> f64;
}

/// Zero velocity on the wall.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoSlip;

impl WallBc for NoSlip {
    fn boundary_value(&self, _component: &str, _p: &Point) -> f64 {
        0.0
    }
}

/// Laminar flat-plate flow built from the Blasius profile.
#[derive(Debug, Clone)]
pub struct BlasiusFlow {
    pub params: FlowParams,
    pub table: Arc<BlasiusTable>,
}

impl BlasiusFlow {
    pub fn new(params: FlowParams, table: Arc<BlasiusTable>) -> Self {
        BlasiusFlow { params, table }
    }

    /// `(u, v)` at `p`; `u = M f'(eta)`, `v = M (eta f' - f) / (2 sqrt(Re x))`.
    pub fn velocity(&self, p: &Point) -> Result<(f64, f64), FieldError> {
        let eta = eta_of(p.x, p.y, &self.params)?;
        let prof = self.table.eval(eta);
        let m = self.params.mach;
        let u = m * prof.fp;
        let v = 0.5 * m / (self.params.reynolds * p.x).sqrt() * (eta * prof.fp - prof.f);
        Ok((u, v))
    }

    /// Exact gradients of `u` and `v` at `p`.
    pub fn velocity_gradient(&self, p: &Point) -> Result<(Vec2, Vec2), FieldError> {
        let (x, re, m) = (p.x, self.params.reynolds, self.params.mach);
        let eta = eta_of(x, p.y, &self.params)?;
        let prof = self.table.eval(eta);
        let deta_dx = -eta / (2.0 * x);
        let deta_dy = (re / x).sqrt();
        let du = Vec2::new(m * prof.fpp * deta_dx, m * prof.fpp * deta_dy);
        let g = eta * prof.fp - prof.f;
        let dg = eta * prof.fpp;
        let scale = 0.5 * m / (re * x).sqrt();
        let dv = Vec2::new(scale * (-0.5 * g / x + dg * deta_dx), scale * dg * deta_dy);
        Ok((du, dv))
    }

    /// Exact `du/dy` on the wall at `x`: `M f''(0) sqrt(Re / x)`.
    pub fn wall_dudy(&self, x: f64) -> Result<f64, FieldError> {
        if !(x > 0.0) {
            return Err(FieldError::NonpositiveX { x });
        }
        Ok(self.params.mach * self.table.wall_shear() * (self.params.reynolds / x).sqrt())
    }
}

/// A field with closed-form values and gradients everywhere.
#[derive(Debug, Clone)]
pub enum AnalyticField {
    Blasius(BlasiusFlow),
    Polynomial { u: Poly2, v: Poly2 },
}

impl AnalyticField {
    pub fn value(&self, component: &str, p: &Point) -> Result<f64, FieldError> {
        match (self, component) {
            (AnalyticField::Blasius(b), U) => Ok(b.velocity(p)?.0),
            (AnalyticField::Blasius(b), V) => Ok(b.velocity(p)?.1),
            (AnalyticField::Polynomial { u, .. }, U) => Ok(u.value(p)),
            (AnalyticField::Polynomial { v, .. }, V) => Ok(v.value(p)),
            (_, other) => Err(FieldError::UnknownComponent(other.to_string())),
        }
    }

    pub fn gradient(&self, component: &str, p: &Point) -> Result<Vec2, FieldError> {
        match (self, component) {
            (AnalyticField::Blasius(b), U) => Ok(b.velocity_gradient(p)?.0),
            (AnalyticField::Blasius(b), V) => Ok(b.velocity_gradient(p)?.1),
            (AnalyticField::Polynomial { u, .. }, U) => Ok(u.gradient(p)),
            (AnalyticField::Polynomial { v, .. }, V) => Ok(v.gradient(p)),
            (_, other) => Err(FieldError::UnknownComponent(other.to_string())),
        }
    }

    /// Point values of `u` and `v` at every cell centroid.
    pub fn sample(&self, mesh: &TriMesh) -> Result<CellField, FieldError> {
        match self {
            AnalyticField::Blasius(b) => sample_blasius_field(mesh, &b.params, &b.table),
            AnalyticField::Polynomial { u, v } => Ok(sample_polynomial_field(mesh, u, v)),
        }
    }
}

impl WallBc for AnalyticField {
    fn boundary_value(&self, component: &str, p: &Point) -> f64 {
        match self {
            AnalyticField::Blasius(_) => 0.0,
            AnalyticField::Polynomial { u, v } => match component {
                V => v.value(p),
                _ => u.value(p),
            },
        }
    }
}

pub fn sample_blasius_field(
    mesh: &TriMesh,
    params: &FlowParams,
    table: &Arc<BlasiusTable>,
) -> Result<CellField, FieldError> {
    let flow = BlasiusFlow::new(*params, Arc::clone(table));
    let mut u = Vec::with_capacity(mesh.n_cells());
    let mut v = Vec::with_capacity(mesh.n_cells());
    for c in 0..mesh.n_cells() {
        let p = mesh.cell_centroid(c);
        if !(p.x > 0.0) {
            return Err(FieldError::CentroidAtLeadingEdge { cell: c, x: p.x });
        }
        let (uc, vc) = flow.velocity(&p)?;
        u.push(uc);
        v.push(vc);
    }
    CellField::new(mesh, vec![(U.to_string(), u), (V.to_string(), v)])
}

pub fn sample_polynomial_field(mesh: &TriMesh, u: &Poly2, v: &Poly2) -> CellField {
    let (mut us, mut vs) = (Vec::with_capacity(mesh.n_cells()), Vec::with_capacity(mesh.n_cells()));
    for c in 0..mesh.n_cells() {
        let p = mesh.cell_centroid(c);
        us.push(u.value(&p));
        vs.push(v.value(&p));
    }
    CellField { mesh: mesh.id(), components: vec![(U.to_string(), us), (V.to_string(), vs)] }
}

/// True `du/dn` at wall point `p` with inward unit normal `normal`.
pub fn exact_wall_derivative(field: &AnalyticField, p: &Point, normal: &Vec2) -> Result<f64, FieldError> {
    match field {
        AnalyticField::Blasius(b) if p.y == 0.0 => Ok(b.wall_dudy(p.x)? * normal.y),
        _ => Ok(field.gradient(U, p)?.dot(normal)),
    }
}
