//! Least-squares gradients from cell-centered data.
//!
//! Nodal gradients use the fully linear formulation: at node `i` the unknowns
//! are the node value `u_i*` and the gradient, fitted to the surrounding
//! cell-centroid values (and, at wall nodes, the known wall values at the
//! wall-face midpoints) with inverse-distance weights `|x_k - x_i|^-q`.
//!
//! The fit is linear in the data, so each node stores its solution operator
//! once and every field component reuses it.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fields::{CellField, FieldError, WallBc};
use crate::mesh::{MeshId, Point, TriMesh, Vec2};

/// Scaled condition numbers up to this bound are solved through the normal
/// equations; above it the pseudo-inverse comes from an SVD.
const NORMAL_EQUATIONS_MAX_COND: f64 = 1e2;
/// Scaled condition number treated as numerical rank deficiency.
const RANK_DEFICIENT_COND: f64 = 1e12;

#[derive(Debug, thiserror::Error)]
pub enum GradientError {
    #[error("least-squares stencil at node {node} is rank deficient after second-ring augmentation")]
    RankDeficientNode { node: usize },
    #[error("least-squares stencil at cell {cell} is rank deficient")]
    RankDeficientCell { cell: usize },
    #[error("invalid least-squares options: {0}")]
    InvalidOptions(String),
    #[error("gradient field was computed on a different mesh")]
    MeshMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl GradientError {
    pub fn code(&self) -> &'static str {
        match self {
            GradientError::RankDeficientNode { .. } | GradientError::RankDeficientCell { .. } => {
                "rank-deficient-stencil"
            }
            GradientError::InvalidOptions(_) => "invalid-options",
            GradientError::MeshMismatch => "mesh-mismatch",
            GradientError::Field(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsqOptions {
    /// Exponent `q` of the inverse-distance weights, one of 0, 1, 2.
    pub weight_exponent: u8,
    /// Append wall-value rows at wall nodes.
    pub bc_augment: bool,
    /// Scaled condition number above which the second ring of cells is added.
    pub second_ring_threshold: f64,
    pub wall_tag: String,
}

impl Default for LsqOptions {
    fn default() -> Self {
        LsqOptions {
            weight_exponent: 1,
            bc_augment: true,
            second_ring_threshold: 1e8,
            wall_tag: crate::gridgen::WALL_TAG.to_string(),
        }
    }
}

impl LsqOptions {
    pub fn validate(&self) -> Result<(), GradientError> {
        if self.weight_exponent > 2 {
            return Err(GradientError::InvalidOptions(format!(
                "weight_exponent = {} must be 0, 1 or 2",
                self.weight_exponent
            )));
        }
        if !(self.second_ring_threshold > 1.0) {
            return Err(GradientError::InvalidOptions(format!(
                "second_ring_threshold = {} must exceed 1",
                self.second_ring_threshold
            )));
        }
        Ok(())
    }

    fn weight(&self, d: f64) -> f64 {
        match self.weight_exponent {
            0 => 1.0,
            1 => 1.0 / d,
            _ => 1.0 / (d * d),
        }
    }
}

/// What went into the fit at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilInfo {
    pub cells: usize,
    pub bc_rows: usize,
    pub second_ring: bool,
    /// Condition number of the column-scaled weighted system.
    pub condition: f64,
}

#[derive(Debug, Clone)]
struct NodeOperator {
    cells: Vec<usize>,
    cell_weights: Vec<Vec2>,
    bc_points: Vec<Point>,
    bc_weights: Vec<Vec2>,
}

impl NodeOperator {
    fn apply(&self, values: &[f64], bc: &dyn WallBc, component: &str) -> Vec2 {
        let mut g = Vec2::zeros();
        for (&c, w) in self.cells.iter().zip(&self.cell_weights) {
            g += w * values[c];
        }
        for (p, w) in self.bc_points.iter().zip(&self.bc_weights) {
            g += w * bc.boundary_value(component, p);
        }
        g
    }
}

#[derive(Debug, Clone)]
pub struct NodalGradientField {
    mesh: MeshId,
    components: Vec<(String, Vec<Vec2>)>,
    stencils: Vec<StencilInfo>,
}

impl NodalGradientField {
    pub fn mesh_id(&self) -> MeshId {
        self.mesh
    }

    pub fn check_mesh(&self, mesh: &TriMesh) -> Result<(), GradientError> {
        if self.mesh != mesh.id() {
            return Err(GradientError::MeshMismatch);
        }
        Ok(())
    }

    pub fn component(&self, name: &str) -> Result<&[Vec2], GradientError> {
        self.components
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g.as_slice())
            .ok_or_else(|| FieldError::UnknownComponent(name.to_string()).into())
    }

    pub fn has(&self, name: &str) -> bool {
        self.components.iter().any(|(n, _)| n == name)
    }

    pub fn stencils(&self) -> &[StencilInfo] {
        &self.stencils
    }

    /// Overwrites one component, keeping the stencil diagnostics.
    pub fn replace_component(&mut self, name: &str, values: Vec<Vec2>) -> Result<(), GradientError> {
        let slot = self
            .components
            .iter_mut()
            .find(|(n, _)| n == name)
            .ok_or_else(|| GradientError::from(FieldError::UnknownComponent(name.to_string())))?;
        if values.len() != slot.1.len() {
            return Err(FieldError::LengthMismatch { name: name.to_string(), len: values.len(), cells: slot.1.len() }.into());
        }
        slot.1 = values;
        Ok(())
    }
}

/// Solution operator of a weighted linear least-squares problem.
///
/// `design` holds the unweighted rows; the result `O` (ncols x nrows) maps
/// unweighted right-hand sides to the unknowns. Returns `None` when the
/// system has fewer rows than unknowns.
fn lsq_operator(design: &DMatrix<f64>, sqrt_w: &[f64]) -> Option<(DMatrix<f64>, f64)> {
    let (nrows, ncols) = design.shape();
    if nrows < ncols {
        return None;
    }
    let mut a = design.clone();
    for (r, &w) in sqrt_w.iter().enumerate() {
        a.row_mut(r).scale_mut(w);
    }
    let mut col_scale = vec![1.0; ncols];
    for (j, s) in col_scale.iter_mut().enumerate() {
        let norm = a.column(j).norm();
        if norm > 0.0 {
            *s = 1.0 / norm;
            a.column_mut(j).scale_mut(*s);
        }
    }

    let normal = a.transpose() * &a;
    let eig = SymmetricEigen::new(normal.clone());
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min().max(0.0);
    let cond = if lmin > 0.0 { (lmax / lmin).sqrt() } else { f64::INFINITY };

    let pinv = if cond <= NORMAL_EQUATIONS_MAX_COND {
        let chol = normal.cholesky()?;
        chol.solve(&a.transpose())
    } else {
        let svd = a.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let svd_cond = smax / svd.singular_values.min();
        let cond = if svd_cond.is_finite() { svd_cond } else { f64::INFINITY };
        if !(cond < RANK_DEFICIENT_COND) {
            return Some((DMatrix::zeros(ncols, nrows), f64::INFINITY));
        }
        svd.pseudo_inverse(smax * 1e-14).ok()?
    };

    let mut op = pinv;
    for (j, &s) in col_scale.iter().enumerate() {
        op.row_mut(j).scale_mut(s);
    }
    for (r, &w) in sqrt_w.iter().enumerate() {
        op.column_mut(r).scale_mut(w);
    }
    Some((op, cond))
}

fn second_ring(mesh: &TriMesh, first: &[usize]) -> Vec<usize> {
    let mut cells: Vec<usize> = first
        .iter()
        .flat_map(|&c| mesh.tri(c))
        .flat_map(|n| mesh.node_cells(n).iter().copied())
        .collect();
    cells.sort_unstable();
    cells.dedup();
    cells
}

fn node_operator(
    mesh: &TriMesh,
    node: usize,
    opts: &LsqOptions,
) -> Result<(NodeOperator, StencilInfo), GradientError> {
    let xi = mesh.node(node);
    let bc_points: Vec<Point> = if opts.bc_augment {
        mesh.node_bfaces(node)
            .iter()
            .filter(|&&f| mesh.bface(f).tag == opts.wall_tag)
            .map(|&f| mesh.bface_geom(f).midpoint)
            .collect()
    } else {
        Vec::new()
    };

    // Offsets are taken from the weighted mean of the stencil rather than
    // from the node; the fitted plane is the same, only the value unknown
    // moves, and the constant column decouples from the gradient columns.
    let attempt = |cells: &[usize]| {
        let points: Vec<Point> =
            cells.iter().map(|&c| mesh.cell_centroid(c)).chain(bc_points.iter().copied()).collect();
        let weights: Vec<f64> = points.iter().map(|p| opts.weight((p - xi).norm())).collect();
        let wsum: f64 = weights.iter().sum();
        let mean = points.iter().zip(&weights).map(|(p, w)| (p - xi) * *w).sum::<Vec2>() / wsum;
        let mut design = DMatrix::zeros(points.len(), 3);
        for (r, p) in points.iter().enumerate() {
            let d = p - xi - mean;
            design[(r, 0)] = 1.0;
            design[(r, 1)] = d.x;
            design[(r, 2)] = d.y;
        }
        let sqrt_w: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
        lsq_operator(&design, &sqrt_w)
    };

    let mut cells = mesh.node_cells(node).to_vec();
    let mut ring2 = false;
    let mut solved = attempt(&cells);
    let rows = cells.len() + bc_points.len();
    let needs_ring = match &solved {
        Some((_, cond)) => rows < 4 || *cond > opts.second_ring_threshold,
        None => true,
    };
    if needs_ring {
        cells = second_ring(mesh, &cells);
        ring2 = true;
        solved = attempt(&cells);
    }
    let (op, cond) = match solved {
        Some((op, cond)) if cond < RANK_DEFICIENT_COND => (op, cond),
        _ => return Err(GradientError::RankDeficientNode { node }),
    };

    let ncells = cells.len();
    let grad_row = |r: usize| Vec2::new(op[(1, r)], op[(2, r)]);
    let cell_weights = (0..ncells).map(grad_row).collect();
    let bc_weights = (ncells..ncells + bc_points.len()).map(grad_row).collect();
    let info = StencilInfo { cells: ncells, bc_rows: bc_points.len(), second_ring: ring2, condition: cond };
    Ok((NodeOperator { cells, cell_weights, bc_points, bc_weights }, info))
}

/// Nodal gradients of every component of `field`.
pub fn nodal_lsq_gradients(
    mesh: &TriMesh,
    field: &CellField,
    bc: &dyn WallBc,
    opts: &LsqOptions,
) -> Result<NodalGradientField, GradientError> {
    opts.validate()?;
    field.check_mesh(mesh)?;
    let built: Vec<(NodeOperator, StencilInfo)> = (0..mesh.n_nodes())
        .into_par_iter()
        .map(|n| node_operator(mesh, n, opts))
        .collect::<Result<_, _>>()?;

    let mut components = Vec::new();
    for name in field.names() {
        let values = field.component(name)?;
        let grads = built.par_iter().map(|(op, _)| op.apply(values, bc, name)).collect();
        components.push((name.to_string(), grads));
    }
    let stencils = built.into_iter().map(|(_, info)| info).collect();
    Ok(NodalGradientField { mesh: mesh.id(), components, stencils })
}

/// Mean of the nodal gradients at the two ends of boundary face `f`.
pub fn face_average_gradient(
    mesh: &TriMesh,
    grads: &NodalGradientField,
    component: &str,
    f: usize,
) -> Result<Vec2, GradientError> {
    let g = grads.component(component)?;
    let [a, b] = mesh.bface(f).nodes;
    Ok(0.5 * (g[a] + g[b]))
}

/// Mean of the nodal gradients at the three vertices of cell `c`.
pub fn cell_average_gradient(
    mesh: &TriMesh,
    grads: &NodalGradientField,
    component: &str,
    c: usize,
) -> Result<Vec2, GradientError> {
    let g = grads.component(component)?;
    let [a, b, d] = mesh.tri(c);
    Ok((g[a] + g[b] + g[d]) / 3.0)
}

/// Source of the cell gradients used to extrapolate from cell centroids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellGradientMethod {
    /// Mean of the three nodal least-squares gradients.
    #[default]
    NodalAverage,
    /// Gradient-only least squares about the centroid over face neighbors.
    CellLsq,
}

impl CellGradientMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CellGradientMethod::NodalAverage => "nodal_average",
            CellGradientMethod::CellLsq => "cell_lsq",
        }
    }
}

impl std::str::FromStr for CellGradientMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nodal_average" => Ok(CellGradientMethod::NodalAverage),
            "cell_lsq" => Ok(CellGradientMethod::CellLsq),
            other => Err(format!("unknown cell gradient method {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CellGradientField {
    mesh: MeshId,
    components: Vec<(String, Vec<Vec2>)>,
}

impl CellGradientField {
    /// Wraps externally computed per-cell gradients.
    pub fn new(mesh: &TriMesh, components: Vec<(String, Vec<Vec2>)>) -> Result<Self, GradientError> {
        for (name, g) in &components {
            if g.len() != mesh.n_cells() {
                return Err(FieldError::LengthMismatch { name: name.clone(), len: g.len(), cells: mesh.n_cells() }.into());
            }
        }
        Ok(CellGradientField { mesh: mesh.id(), components })
    }

    pub fn component(&self, name: &str) -> Result<&[Vec2], GradientError> {
        self.components
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g.as_slice())
            .ok_or_else(|| FieldError::UnknownComponent(name.to_string()).into())
    }

    pub fn check_mesh(&self, mesh: &TriMesh) -> Result<(), GradientError> {
        if self.mesh != mesh.id() {
            return Err(GradientError::MeshMismatch);
        }
        Ok(())
    }
}

pub fn cell_gradients_from_nodal(
    mesh: &TriMesh,
    grads: &NodalGradientField,
) -> Result<CellGradientField, GradientError> {
    grads.check_mesh(mesh)?;
    let components = grads
        .components
        .iter()
        .map(|(name, g)| {
            let cells = mesh
                .tris()
                .iter()
                .map(|&[a, b, d]| (g[a] + g[b] + g[d]) / 3.0)
                .collect();
            (name.clone(), cells)
        })
        .collect();
    Ok(CellGradientField { mesh: mesh.id(), components })
}

/// Stencil cells, their operator columns, wall BC points and their columns.
type CellOperator = (Vec<usize>, Vec<Vec2>, Vec<Point>, Vec<Vec2>);

/// Gradient-only least squares anchored at each cell's own value.
///
/// The stencil is the face neighbors plus, when `bc_augment` is on, the wall
/// values at the cell's own wall faces; cells whose stencil cannot determine
/// a gradient fall back to every cell sharing a node.
pub fn cell_lsq_gradients(
    mesh: &TriMesh,
    field: &CellField,
    bc: &dyn WallBc,
    opts: &LsqOptions,
) -> Result<CellGradientField, GradientError> {
    opts.validate()?;
    field.check_mesh(mesh)?;

    let ops: Vec<CellOperator> = (0..mesh.n_cells())
        .into_par_iter()
        .map(|c| {
            let xc = mesh.cell_centroid(c);
            let bc_points: Vec<Point> = if opts.bc_augment {
                mesh.cell_bfaces(c)
                    .iter()
                    .flatten()
                    .filter(|&&f| mesh.bface(f).tag == opts.wall_tag)
                    .map(|&f| mesh.bface_geom(f).midpoint)
                    .collect()
            } else {
                Vec::new()
            };
            let attempt = |cells: &[usize]| {
                let points: Vec<Point> = cells
                    .iter()
                    .map(|&k| mesh.cell_centroid(k))
                    .chain(bc_points.iter().copied())
                    .collect();
                let mut design = DMatrix::zeros(points.len(), 2);
                let mut sqrt_w = Vec::with_capacity(points.len());
                for (r, p) in points.iter().enumerate() {
                    let d = p - xc;
                    design[(r, 0)] = d.x;
                    design[(r, 1)] = d.y;
                    sqrt_w.push(opts.weight(d.norm()).sqrt());
                }
                lsq_operator(&design, &sqrt_w)
            };
            let mut cells: Vec<usize> = mesh.cell_neighbors(c).iter().flatten().copied().collect();
            let mut solved = attempt(&cells);
            let ok = |s: &Option<(DMatrix<f64>, f64)>| {
                matches!(s, Some((_, cond)) if *cond <= opts.second_ring_threshold)
            };
            if !ok(&solved) {
                cells = second_ring(mesh, &[c]);
                cells.retain(|&k| k != c);
                solved = attempt(&cells);
            }
            let op = match solved {
                Some((op, cond)) if cond < RANK_DEFICIENT_COND => op,
                _ => return Err(GradientError::RankDeficientCell { cell: c }),
            };
            let n = cells.len();
            let col = |r: usize| Vec2::new(op[(0, r)], op[(1, r)]);
            let cw = (0..n).map(col).collect();
            let bw = (n..n + bc_points.len()).map(col).collect();
            Ok((cells, cw, bc_points, bw))
        })
        .collect::<Result<_, GradientError>>()?;

    let mut components = Vec::new();
    for name in field.names() {
        let values = field.component(name)?;
        let grads = ops
            .iter()
            .enumerate()
            .map(|(c, (cells, cw, bp, bw))| {
                let mut g = Vec2::zeros();
                let uc = values[c];
                for (&k, w) in cells.iter().zip(cw) {
                    g += w * (values[k] - uc);
                }
                for (p, w) in bp.iter().zip(bw) {
                    g += w * (bc.boundary_value(name, p) - uc);
                }
                g
            })
            .collect();
        components.push((name.to_string(), grads));
    }
    Ok(CellGradientField { mesh: mesh.id(), components })
}
