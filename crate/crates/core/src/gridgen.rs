//! Irregular anisotropic boundary-layer grids over a flat plate.
//!
//! The generator starts from a structured quad grid, geometrically stretched
//! away from the wall at `y = 0`, jitters the nodes and splits every quad into
//! two triangles. The result has the property that matters for wall-normal
//! derivatives: the height of the wall-adjacent cell centroids above the wall
//! varies randomly from face to face.
//!
//! Randomness comes from ChaCha8 (a counter-based generator) with a fixed draw
//! order: two jitter draws per node in row-major order on stream 0, one
//! diagonal draw per quad on stream 1. Every draw is taken whether or not it
//! is used, so the meshes for a given seed never change. When strong jitter
//! would make the drawn diagonal invert a cell, the other diagonal is used.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::mesh::{BFace, MeshError, Point, TriMesh};

pub const WALL_TAG: &str = "wall";
pub const FAR_TAG: &str = "far";

#[derive(Debug, thiserror::Error)]
pub enum GridError {
    #[error("invalid grid spec: {0}")]
    InvalidSpec(String),
    #[error("triangle {tri} is inverted or degenerate after perturbation")]
    InvertedElement { tri: usize },
    #[error("no boundary faces tagged {0:?}")]
    NoTaggedBoundary(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

impl GridError {
    pub fn code(&self) -> &'static str {
        match self {
            GridError::InvalidSpec(_) => "invalid-spec",
            GridError::InvertedElement { .. } => "inverted-element",
            GridError::NoTaggedBoundary(_) => "no-tagged-boundary",
            GridError::Mesh(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalMode {
    /// Every quad split from its lower-left to its upper-right corner.
    Fixed,
    /// Checkerboard of the two diagonals.
    Alternating,
    /// Diagonal drawn per quad from the seeded generator.
    Random,
}

impl std::str::FromStr for DiagonalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed" => Ok(DiagonalMode::Fixed),
            "alternating" => Ok(DiagonalMode::Alternating),
            "random" => Ok(DiagonalMode::Random),
            other => Err(format!("unknown diagonal mode {other:?}")),
        }
    }
}

impl DiagonalMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagonalMode::Fixed => "fixed",
            DiagonalMode::Alternating => "alternating",
            DiagonalMode::Random => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub first_layer_height: f64,
    /// Ratio between consecutive layer heights.
    pub stretch: f64,
    /// Jitter amplitude as a fraction of the local spacing.
    pub perturb: f64,
    pub diagonal_mode: DiagonalMode,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x_range: (0.0, 2.0),
            nx: 64,
            ny: 32,
            first_layer_height: 1.5e-4,
            stretch: 1.1,
            perturb: 0.3,
            diagonal_mode: DiagonalMode::Random,
            seed: 1,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), GridError> {
        let bad = |msg: String| Err(GridError::InvalidSpec(msg));
        let (x0, x1) = self.x_range;
        if !(x0.is_finite() && x1.is_finite() && x1 > x0) {
            return bad(format!("x_range ({x0}, {x1}) must be a finite increasing interval"));
        }
        if self.nx == 0 || self.ny == 0 {
            return bad(format!("nx = {} and ny = {} must be positive", self.nx, self.ny));
        }
        if !(self.first_layer_height > 0.0 && self.first_layer_height.is_finite()) {
            return bad(format!("first_layer_height = {} must be positive", self.first_layer_height));
        }
        if !(self.stretch >= 1.0 && self.stretch.is_finite()) {
            return bad(format!("stretch = {} must be >= 1", self.stretch));
        }
        if !(0.0..0.5).contains(&self.perturb) {
            return bad(format!("perturb = {} must lie in [0, 0.5)", self.perturb));
        }
        Ok(())
    }

    /// Heights of the structured grid lines, from the wall (0) to the top.
    pub fn layer_levels(&self) -> Vec<f64> {
        let mut levels = Vec::with_capacity(self.ny + 1);
        let mut y = 0.0;
        let mut h = self.first_layer_height;
        levels.push(y);
        for _ in 0..self.ny {
            y += h;
            h *= self.stretch;
            levels.push(y);
        }
        levels
    }
}

fn uniform_pm1(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

pub fn generate(spec: &GridSpec) -> Result<TriMesh, GridError> {
    spec.validate()?;
    let (nx, ny) = (spec.nx, spec.ny);
    let (x0, x1) = spec.x_range;
    let dx = (x1 - x0) / nx as f64;
    let levels = spec.layer_levels();

    let mut jitter = ChaCha8Rng::seed_from_u64(spec.seed);
    jitter.set_stream(0);
    let mut diag = ChaCha8Rng::seed_from_u64(spec.seed);
    diag.set_stream(1);

    let node = |i: usize, j: usize| j * (nx + 1) + i;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for (j, &y_line) in levels.iter().enumerate() {
        let dy_local = match j {
            0 => levels[1] - levels[0],
            j if j == ny => levels[ny] - levels[ny - 1],
            j => (levels[j] - levels[j - 1]).min(levels[j + 1] - levels[j]),
        };
        for i in 0..=nx {
            let (rx, ry) = (uniform_pm1(&mut jitter), uniform_pm1(&mut jitter));
            let side = i == 0 || i == nx;
            let cap = j == 0 || j == ny;
            let mut x = if i == nx { x1 } else { x0 + i as f64 * dx };
            let mut y = y_line;
            if !side {
                x += spec.perturb * dx * rx;
            }
            if !cap {
                y += spec.perturb * dy_local * ry;
            }
            nodes.push(Point::new(x, y));
        }
    }

    let mut tris = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let flip: bool = diag.random();
            let (a, b, c, d) = (node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1));
            let mut use_bd = match spec.diagonal_mode {
                DiagonalMode::Fixed => false,
                DiagonalMode::Alternating => (i + j) % 2 == 1,
                DiagonalMode::Random => flip,
            };
            // a jittered quad is always simple, so at least one diagonal lies inside it
            let valid = |t: [usize; 3]| twice_area(&nodes, t) > 0.0;
            let ok = |bd: bool| if bd { valid([a, b, d]) && valid([b, c, d]) } else { valid([a, b, c]) && valid([a, c, d]) };
            if !ok(use_bd) && ok(!use_bd) {
                use_bd = !use_bd;
            }
            if use_bd {
                tris.push([a, b, d]);
                tris.push([b, c, d]);
            } else {
                tris.push([a, b, c]);
                tris.push([a, c, d]);
            }
        }
    }

    for (t, &tri) in tris.iter().enumerate() {
        if twice_area(&nodes, tri) <= 0.0 {
            return Err(GridError::InvertedElement { tri: t });
        }
    }

    let mut bfaces = Vec::with_capacity(2 * (nx + ny));
    for i in 0..nx {
        bfaces.push(BFace::new(node(i, 0), node(i + 1, 0), WALL_TAG));
    }
    for j in 0..ny {
        bfaces.push(BFace::new(node(nx, j), node(nx, j + 1), FAR_TAG));
    }
    for i in (0..nx).rev() {
        bfaces.push(BFace::new(node(i + 1, ny), node(i, ny), FAR_TAG));
    }
    for j in (0..ny).rev() {
        bfaces.push(BFace::new(node(0, j + 1), node(0, j), FAR_TAG));
    }

    Ok(TriMesh::build(nodes, tris, bfaces)?)
}

fn twice_area(nodes: &[Point], [a, b, c]: [usize; 3]) -> f64 {
    let e1 = nodes[b] - nodes[a];
    let e2 = nodes[c] - nodes[a];
    e1.x * e2.y - e1.y * e2.x
}

/// Height `(x_c - x_j) . n_j` of the adjacent cell centroid above every face
/// tagged `tag`, as `(x_j, height)` pairs sorted by `x_j`.
pub fn centroid_height_profile(mesh: &TriMesh, tag: &str) -> Result<Vec<(f64, f64)>, GridError> {
    let mut out: Vec<(f64, f64)> = mesh
        .tagged_bfaces(tag)
        .map(|f| {
            let g = mesh.bface_geom(f);
            let c = mesh.cell_centroid(mesh.bface_cell(f));
            (g.midpoint.x, (c - g.midpoint).dot(&g.unit_normal))
        })
        .collect();
    if out.is_empty() {
        return Err(GridError::NoTaggedBoundary(tag.to_string()));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}
