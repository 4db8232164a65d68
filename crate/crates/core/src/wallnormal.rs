//! Wall-normal derivative estimators.
//!
//! Three estimators project least-squares nodal gradients onto the wall
//! normal (at nodes, averaged over a wall face, averaged over the adjacent
//! cell). Four are one-sided finite differences between the wall value and a
//! value at some height above the wall face; they differ in where that value
//! comes from and in the step length:
//!
//! | method      | interior point                                  | step            |
//! |-------------|-------------------------------------------------|-----------------|
//! | `FD1`       | the cell centroid itself                        | centroid height |
//! | `FD2`       | above the face midpoint at the centroid height  | centroid height |
//! | `FD3_*`     | above the face midpoint at a prescribed height  | common `h`      |
//! | `FD_FAWC`   | above the face midpoint at the FAWC height      | FAWC height     |
//!
//! All but `FD1` extrapolate the cell value linearly with the cell gradient.

use serde::{Deserialize, Serialize};

use crate::fields::{CellField, FieldError, WallBc, U, V};
use crate::gradient::{CellGradientField, GradientError, NodalGradientField};
use crate::mesh::{MeshError, Point, TriMesh, Vec2};

#[derive(Debug, thiserror::Error)]
pub enum WallError {
    #[error("boundary face {face}: adjacent cell centroid height {height} is not positive")]
    NonpositiveHeight { face: usize, height: f64 },
    #[error("step length {step} at x = {x} is not positive")]
    NonpositiveStep { x: f64, step: f64 },
    #[error("eta-profile step needs x > 0, got x = {x}")]
    NonpositiveX { x: f64 },
    #[error("invalid step rule: {0}")]
    InvalidStepRule(String),
    #[error("no boundary faces tagged {0:?}")]
    NoTaggedBoundary(String),
    #[error("unknown method {0:?}")]
    UnknownMethod(String),
    #[error(transparent)]
    Gradient(#[from] GradientError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

impl WallError {
    pub fn code(&self) -> &'static str {
        match self {
            WallError::NonpositiveHeight { .. } => "nonpositive-height",
            WallError::NonpositiveStep { .. } => "nonpositive-step",
            WallError::NonpositiveX { .. } => "nonpositive-x",
            WallError::InvalidStepRule(_) => "invalid-step-rule",
            WallError::NoTaggedBoundary(_) => "no-tagged-boundary",
            WallError::UnknownMethod(_) => "unknown-method",
            WallError::Gradient(e) => e.code(),
            WallError::Field(e) => e.code(),
            WallError::Mesh(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "NG")]
    Ng,
    #[serde(rename = "FANG")]
    Fang,
    #[serde(rename = "CANG")]
    Cang,
    #[serde(rename = "FD1")]
    Fd1,
    #[serde(rename = "FD2")]
    Fd2,
    #[serde(rename = "FD3_ETA")]
    Fd3Eta,
    #[serde(rename = "FD3_CONST")]
    Fd3Const,
    #[serde(rename = "FD_FAWC")]
    FdFawc,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Ng,
        Method::Fang,
        Method::Cang,
        Method::Fd1,
        Method::Fd2,
        Method::Fd3Eta,
        Method::Fd3Const,
        Method::FdFawc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ng => "NG",
            Method::Fang => "FANG",
            Method::Cang => "CANG",
            Method::Fd1 => "FD1",
            Method::Fd2 => "FD2",
            Method::Fd3Eta => "FD3_ETA",
            Method::Fd3Const => "FD3_CONST",
            Method::FdFawc => "FD_FAWC",
        }
    }

    /// Least-squares gradient methods, as opposed to finite differences.
    pub fn is_lsq(self) -> bool {
        matches!(self, Method::Ng | Method::Fang | Method::Cang)
    }

    /// Evaluated at wall nodes rather than wall-face midpoints.
    pub fn at_nodes(self) -> bool {
        self == Method::Ng
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = WallError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| WallError::UnknownMethod(s.to_string()))
    }
}

/// One wall-normal derivative estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct WallSample {
    /// Wall node for `NG`, wall-face midpoint otherwise.
    pub location: Point,
    pub x_along_wall: f64,
    pub normal: Vec2,
    pub dudn: f64,
    pub method: Method,
    /// Finite-difference step length.
    pub step: Option<f64>,
    /// Gradients of `u` and `v` behind a least-squares estimate.
    pub velocity_gradient: Option<(Vec2, Vec2)>,
    /// The finite-difference interior point lies outside the adjacent cell.
    pub outside_cell: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// `h = eta sqrt(x / Re)`: constant in the similarity coordinate.
    EtaProfile,
    /// `h = eta sqrt(x_ref / Re)` on every face.
    GlobalConstant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRule {
    pub kind: StepKind,
    pub eta: f64,
    pub x_ref: f64,
    pub reynolds: f64,
}

impl StepRule {
    pub fn eta_profile(eta: f64, reynolds: f64) -> Self {
        StepRule { kind: StepKind::EtaProfile, eta, x_ref: 1.0, reynolds }
    }

    pub fn global_constant(eta: f64, x_ref: f64, reynolds: f64) -> Self {
        StepRule { kind: StepKind::GlobalConstant, eta, x_ref, reynolds }
    }

    pub fn validate(&self) -> Result<(), WallError> {
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(WallError::InvalidStepRule(format!("eta = {} must be positive", self.eta)));
        }
        if !(self.reynolds > 0.0 && self.reynolds.is_finite()) {
            return Err(WallError::InvalidStepRule(format!("reynolds = {} must be positive", self.reynolds)));
        }
        if self.kind == StepKind::GlobalConstant && !(self.x_ref > 0.0 && self.x_ref.is_finite()) {
            return Err(WallError::InvalidStepRule(format!("x_ref = {} must be positive", self.x_ref)));
        }
        Ok(())
    }
}

/// Common finite-difference step at wall position `x`.
pub fn step_length(rule: &StepRule, x: f64) -> Result<f64, WallError> {
    rule.validate()?;
    let h = match rule.kind {
        StepKind::EtaProfile => {
            if !(x > 0.0) {
                return Err(WallError::NonpositiveX { x });
            }
            rule.eta * (x / rule.reynolds).sqrt()
        }
        StepKind::GlobalConstant => rule.eta * (rule.x_ref / rule.reynolds).sqrt(),
    };
    if !(h > 0.0) {
        return Err(WallError::NonpositiveStep { x, step: h });
    }
    Ok(h)
}

fn sort_samples(samples: &mut [WallSample]) {
    samples.sort_by(|a, b| {
        a.x_along_wall
            .total_cmp(&b.x_along_wall)
            .then(a.location.y.total_cmp(&b.location.y))
    });
}

fn tagged_faces(mesh: &TriMesh, tag: &str) -> Result<Vec<usize>, WallError> {
    let faces: Vec<usize> = mesh.tagged_bfaces(tag).collect();
    if faces.is_empty() {
        return Err(WallError::NoTaggedBoundary(tag.to_string()));
    }
    Ok(faces)
}

fn lsq_sample(
    method: Method,
    location: Point,
    normal: Vec2,
    du: Vec2,
    dv: Option<Vec2>,
) -> WallSample {
    WallSample {
        location,
        x_along_wall: location.x,
        normal,
        dudn: du.dot(&normal),
        method,
        step: None,
        velocity_gradient: dv.map(|dv| (du, dv)),
        outside_cell: false,
    }
}

/// Nodal gradient projected on the node normal at every wall node.
pub fn wall_deriv_ng(mesh: &TriMesh, grads: &NodalGradientField, tag: &str) -> Result<Vec<WallSample>, WallError> {
    grads.check_mesh(mesh)?;
    tagged_faces(mesh, tag)?;
    let du = grads.component(U)?;
    let dv = grads.has(V).then(|| grads.component(V)).transpose()?;
    let mut out = Vec::new();
    for n in mesh.tagged_nodes(tag) {
        let normal = mesh.node_normal(n, tag)?.unit_normal;
        out.push(lsq_sample(Method::Ng, mesh.node(n), normal, du[n], dv.map(|g| g[n])));
    }
    sort_samples(&mut out);
    Ok(out)
}

fn averaged_lsq(
    mesh: &TriMesh,
    grads: &NodalGradientField,
    tag: &str,
    method: Method,
) -> Result<Vec<WallSample>, WallError> {
    grads.check_mesh(mesh)?;
    let du = grads.component(U)?;
    let dv = grads.has(V).then(|| grads.component(V)).transpose()?;
    let mut out = Vec::new();
    for f in tagged_faces(mesh, tag)? {
        let geom = mesh.bface_geom(f);
        let nodes: Vec<usize> = match method {
            Method::Fang => mesh.bface(f).nodes.to_vec(),
            _ => mesh.tri(mesh.bface_cell(f)).to_vec(),
        };
        let mean = |g: &[Vec2]| nodes.iter().map(|&n| g[n]).sum::<Vec2>() / nodes.len() as f64;
        out.push(lsq_sample(method, geom.midpoint, geom.unit_normal, mean(du), dv.map(mean)));
    }
    sort_samples(&mut out);
    Ok(out)
}

/// Face-averaged nodal gradient projected on the face normal.
pub fn wall_deriv_fang(mesh: &TriMesh, grads: &NodalGradientField, tag: &str) -> Result<Vec<WallSample>, WallError> {
    averaged_lsq(mesh, grads, tag, Method::Fang)
}

/// Cell-averaged nodal gradient of the adjacent cell projected on the face normal.
pub fn wall_deriv_cang(mesh: &TriMesh, grads: &NodalGradientField, tag: &str) -> Result<Vec<WallSample>, WallError> {
    averaged_lsq(mesh, grads, tag, Method::Cang)
}

/// Per-face quantities shared by the finite-difference methods.
struct FdFace {
    face: usize,
    cell: usize,
    midpoint: Point,
    normal: Vec2,
    centroid: Point,
    u_cell: f64,
    u_wall: f64,
}

fn fd_faces(
    mesh: &TriMesh,
    field: &CellField,
    bc: &dyn WallBc,
    tag: &str,
) -> Result<Vec<FdFace>, WallError> {
    field.check_mesh(mesh)?;
    let u = field.component(U)?;
    tagged_faces(mesh, tag)?
        .into_iter()
        .map(|f| {
            let geom = mesh.bface_geom(f);
            let cell = mesh.bface_cell(f);
            Ok(FdFace {
                face: f,
                cell,
                midpoint: geom.midpoint,
                normal: geom.unit_normal,
                centroid: mesh.cell_centroid(cell),
                u_cell: u[cell],
                u_wall: bc.boundary_value(U, &geom.midpoint),
            })
        })
        .collect()
}

fn positive_height(face: usize, height: f64) -> Result<f64, WallError> {
    if !(height > 0.0) {
        return Err(WallError::NonpositiveHeight { face, height });
    }
    Ok(height)
}

fn fd_sample(ff: &FdFace, method: Method, dudn: f64, step: f64, outside_cell: bool) -> WallSample {
    WallSample {
        location: ff.midpoint,
        x_along_wall: ff.midpoint.x,
        normal: ff.normal,
        dudn,
        method,
        step: Some(step),
        velocity_gradient: None,
        outside_cell,
    }
}

/// `(u_c - u_b) / h` with `h` the centroid height above the face.
pub fn wall_deriv_fd1(
    mesh: &TriMesh,
    field: &CellField,
    bc: &dyn WallBc,
    tag: &str,
) -> Result<Vec<WallSample>, WallError> {
    let mut out = fd_faces(mesh, field, bc, tag)?
        .iter()
        .map(|ff| {
            let h = positive_height(ff.face, (ff.centroid - ff.midpoint).dot(&ff.normal))?;
            Ok(fd_sample(ff, Method::Fd1, (ff.u_cell - ff.u_wall) / h, h, false))
        })
        .collect::<Result<Vec<_>, WallError>>()?;
    sort_samples(&mut out);
    Ok(out)
}

/// Extrapolates the cell value to the point `h` above the face midpoint and
/// differences it against the wall value.
fn extrapolated(
    mesh: &TriMesh,
    ff: &FdFace,
    grad: &Vec2,
    method: Method,
    h: f64,
) -> WallSample {
    let target = ff.midpoint + ff.normal * h;
    let u_target = ff.u_cell + grad.dot(&(target - ff.centroid));
    let outside = !mesh.cell_contains(ff.cell, &target);
    fd_sample(ff, method, (u_target - ff.u_wall) / h, h, outside)
}

fn fd_extrapolating(
    mesh: &TriMesh,
    field: &CellField,
    cell_grads: &CellGradientField,
    bc: &dyn WallBc,
    tag: &str,
    method: Method,
    height: impl Fn(&FdFace) -> Result<f64, WallError>,
) -> Result<Vec<WallSample>, WallError> {
    cell_grads.check_mesh(mesh)?;
    let grads = cell_grads.component(U)?;
    let mut out = fd_faces(mesh, field, bc, tag)?
        .iter()
        .map(|ff| Ok(extrapolated(mesh, ff, &grads[ff.cell], method, height(ff)?)))
        .collect::<Result<Vec<_>, WallError>>()?;
    sort_samples(&mut out);
    Ok(out)
}

/// Finite difference from the point directly above the face midpoint at the
/// centroid height.
pub fn wall_deriv_fd2(
    mesh: &TriMesh,
    field: &CellField,
    cell_grads: &CellGradientField,
    bc: &dyn WallBc,
    tag: &str,
) -> Result<Vec<WallSample>, WallError> {
    fd_extrapolating(mesh, field, cell_grads, bc, tag, Method::Fd2, |ff| {
        positive_height(ff.face, (ff.centroid - ff.midpoint).dot(&ff.normal))
    })
}

/// Finite difference with a step length set by `rule` rather than by the grid.
pub fn wall_deriv_fd3(
    mesh: &TriMesh,
    field: &CellField,
    cell_grads: &CellGradientField,
    bc: &dyn WallBc,
    tag: &str,
    rule: &StepRule,
) -> Result<Vec<WallSample>, WallError> {
    let method = match rule.kind {
        StepKind::EtaProfile => Method::Fd3Eta,
        StepKind::GlobalConstant => Method::Fd3Const,
    };
    fd_extrapolating(mesh, field, cell_grads, bc, tag, method, |ff| step_length(rule, ff.midpoint.x))
}

/// Finite difference with the step taken from the face-area-weighted
/// centroid height of the adjacent cell.
pub fn wall_deriv_fd_fawc(
    mesh: &TriMesh,
    field: &CellField,
    cell_grads: &CellGradientField,
    bc: &dyn WallBc,
    tag: &str,
) -> Result<Vec<WallSample>, WallError> {
    fd_extrapolating(mesh, field, cell_grads, bc, tag, Method::FdFawc, |ff| {
        positive_height(ff.face, (mesh.fawc(ff.cell) - ff.midpoint).dot(&ff.normal))
    })
}

/// Everything the estimators need, bundled for dispatch by [`Method`].
pub struct WallInputs<'a> {
    pub mesh: &'a TriMesh,
    pub field: &'a CellField,
    pub bc: &'a dyn WallBc,
    pub nodal: &'a NodalGradientField,
    pub cell_grads: &'a CellGradientField,
    pub tag: &'a str,
    pub eta_rule: StepRule,
    pub const_rule: StepRule,
}

pub fn evaluate(method: Method, inp: &WallInputs<'_>) -> Result<Vec<WallSample>, WallError> {
    let WallInputs { mesh, field, bc, nodal, cell_grads, tag, .. } = *inp;
    match method {
        Method::Ng => wall_deriv_ng(mesh, nodal, tag),
        Method::Fang => wall_deriv_fang(mesh, nodal, tag),
        Method::Cang => wall_deriv_cang(mesh, nodal, tag),
        Method::Fd1 => wall_deriv_fd1(mesh, field, bc, tag),
        Method::Fd2 => wall_deriv_fd2(mesh, field, cell_grads, bc, tag),
        Method::Fd3Eta => wall_deriv_fd3(mesh, field, cell_grads, bc, tag, &inp.eta_rule),
        Method::Fd3Const => wall_deriv_fd3(mesh, field, cell_grads, bc, tag, &inp.const_rule),
        Method::FdFawc => wall_deriv_fd_fawc(mesh, field, cell_grads, bc, tag),
    }
}
