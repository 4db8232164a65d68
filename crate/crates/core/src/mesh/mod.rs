//! Triangular mesh data model.
//!
//! A [`TriMesh`] is built once from raw nodes, triangles and tagged boundary
//! edges, and is immutable afterwards. Construction validates the topology
//! and derives the adjacency maps every downstream operation relies on.

mod geom;
mod io;

use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};

use nalgebra::{Point2, Vector2};

pub use geom::{FaceGeom, NodeNormal};
pub use io::{read_mesh, write_mesh, parse_mesh, format_mesh, FORMAT_HEADER};

pub type Point = Point2<f64>;
pub type Vec2 = Vector2<f64>;

#[derive(Debug, thiserror::Error)]
pub enum MeshError {
    #[error("triangle {tri} references node {node}, but the mesh has {nnodes} nodes")]
    NodeIndexOutOfRange { tri: usize, node: usize, nnodes: usize },
    #[error("boundary face {face} references node {node}, but the mesh has {nnodes} nodes")]
    FaceIndexOutOfRange { face: usize, node: usize, nnodes: usize },
    #[error("triangle {tri} has zero area")]
    ZeroAreaTriangle { tri: usize },
    #[error("triangles {first} and {second} share the same three nodes")]
    DuplicateTriangle { first: usize, second: usize },
    #[error("boundary face {face} ({a}, {b}) is not an edge of any triangle")]
    DanglingBoundaryFace { face: usize, a: usize, b: usize },
    #[error("boundary face {face} ({a}, {b}) lies on an interior edge")]
    InteriorBoundaryFace { face: usize, a: usize, b: usize },
    #[error("boundary face {face} duplicates edge ({a}, {b})")]
    DuplicateBoundaryFace { face: usize, a: usize, b: usize },
    #[error("edge ({a}, {b}) is shared by more than two triangles")]
    NonManifoldEdge { a: usize, b: usize },
    #[error("edge ({a}, {b}) belongs to one triangle but is not listed as a boundary face")]
    OpenEdge { a: usize, b: usize },
    #[error("mesh has no cells")]
    NoCells,
    #[error("node {node} is not on a boundary face tagged {tag:?}")]
    NodeNotOnTaggedBoundary { node: usize, tag: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported mesh format header {found:?}, expected {expected:?}")]
    Version { found: String, expected: &'static str },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl MeshError {
    pub fn code(&self) -> &'static str {
        match self {
            MeshError::NodeIndexOutOfRange { .. } | MeshError::FaceIndexOutOfRange { .. } => {
                "index-out-of-range"
            }
            MeshError::ZeroAreaTriangle { .. } => "zero-area-triangle",
            MeshError::DuplicateTriangle { .. } => "duplicate-triangle",
            MeshError::DanglingBoundaryFace { .. } => "dangling-boundary-face",
            MeshError::InteriorBoundaryFace { .. } => "interior-boundary-face",
            MeshError::DuplicateBoundaryFace { .. } => "duplicate-boundary-face",
            MeshError::NonManifoldEdge { .. } => "non-manifold-edge",
            MeshError::OpenEdge { .. } => "open-edge",
            MeshError::NoCells => "no-cells",
            MeshError::NodeNotOnTaggedBoundary { .. } => "node-not-on-tagged-boundary",
            MeshError::Parse { .. } => "parse-error",
            MeshError::Version { .. } => "version-mismatch",
            MeshError::Io { .. } => "io-error",
        }
    }
}

/// A tagged boundary edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFace {
    pub nodes: [usize; 2],
    pub tag: String,
}

impl BFace {
    pub fn new(a: usize, b: usize, tag: impl Into<String>) -> Self {
        BFace { nodes: [a, b], tag: tag.into() }
    }
}

/// Opaque fingerprint of a mesh's coordinates and connectivity.
///
/// Fields and gradient fields record the id of the mesh they were built on so
/// that mixing data from different meshes is caught early.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeshId(u64);

#[derive(Debug, Clone)]
pub struct TriMesh {
    nodes: Vec<Point>,
    tris: Vec<[usize; 3]>,
    bfaces: Vec<BFace>,
    node_cells: Vec<Vec<usize>>,
    node_bfaces: Vec<Vec<usize>>,
    /// Neighbor across local edge `k`, the edge from vertex `k` to vertex `k+1`.
    cell_neighbors: Vec<[Option<usize>; 3]>,
    cell_bfaces: Vec<[Option<usize>; 3]>,
    bface_cell: Vec<usize>,
    id: MeshId,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn signed_double_area(p0: &Point, p1: &Point, p2: &Point) -> f64 {
    let e1 = p1 - p0;
    let e2 = p2 - p0;
    e1.x * e2.y - e1.y * e2.x
}

impl TriMesh {
    /// Validates the input and builds the adjacency maps.
    ///
    /// Clockwise triangles are reoriented counterclockwise.
    pub fn build(
        nodes: Vec<Point>,
        mut tris: Vec<[usize; 3]>,
        bfaces: Vec<BFace>,
    ) -> Result<Self, MeshError> {
        if tris.is_empty() {
            return Err(MeshError::NoCells);
        }
        let nnodes = nodes.len();
        for (t, tri) in tris.iter_mut().enumerate() {
            for &n in tri.iter() {
                if n >= nnodes {
                    return Err(MeshError::NodeIndexOutOfRange { tri: t, node: n, nnodes });
                }
            }
            let (p0, p1, p2) = (&nodes[tri[0]], &nodes[tri[1]], &nodes[tri[2]]);
            let area2 = signed_double_area(p0, p1, p2);
            let scale = (p1 - p0).norm() * (p2 - p0).norm();
            if !(area2.abs() > 1e-14 * scale) || tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::ZeroAreaTriangle { tri: t });
            }
            if area2 < 0.0 {
                tri.swap(1, 2);
            }
        }

        let mut seen: HashMap<[usize; 3], usize> = HashMap::with_capacity(tris.len());
        for (t, tri) in tris.iter().enumerate() {
            let mut key = *tri;
            key.sort_unstable();
            if let Some(&first) = seen.get(&key) {
                return Err(MeshError::DuplicateTriangle { first, second: t });
            }
            seen.insert(key, t);
        }

        let mut edge_cells: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for (t, tri) in tris.iter().enumerate() {
            for k in 0..3 {
                let key = edge_key(tri[k], tri[(k + 1) % 3]);
                let entry = edge_cells.entry(key).or_default();
                entry.push((t, k));
                if entry.len() > 2 {
                    return Err(MeshError::NonManifoldEdge { a: key.0, b: key.1 });
                }
            }
        }

        let mut cell_neighbors = vec![[None; 3]; tris.len()];
        for cells in edge_cells.values() {
            if let [(t0, k0), (t1, k1)] = cells[..] {
                cell_neighbors[t0][k0] = Some(t1);
                cell_neighbors[t1][k1] = Some(t0);
            }
        }

        let mut cell_bfaces = vec![[None; 3]; tris.len()];
        let mut bface_cell = Vec::with_capacity(bfaces.len());
        let mut face_of_edge: HashMap<(usize, usize), usize> = HashMap::new();
        for (f, face) in bfaces.iter().enumerate() {
            let [a, b] = face.nodes;
            for n in [a, b] {
                if n >= nnodes {
                    return Err(MeshError::FaceIndexOutOfRange { face: f, node: n, nnodes });
                }
            }
            let key = edge_key(a, b);
            if face_of_edge.insert(key, f).is_some() {
                return Err(MeshError::DuplicateBoundaryFace { face: f, a, b });
            }
            match edge_cells.get(&key).map(|v| &v[..]) {
                Some(&[(t, k)]) => {
                    cell_bfaces[t][k] = Some(f);
                    bface_cell.push(t);
                }
                Some(_) => return Err(MeshError::InteriorBoundaryFace { face: f, a, b }),
                None => return Err(MeshError::DanglingBoundaryFace { face: f, a, b }),
            }
        }

        let mut open: Vec<(usize, usize)> = edge_cells
            .iter()
            .filter(|(key, cells)| cells.len() == 1 && !face_of_edge.contains_key(key))
            .map(|(key, _)| *key)
            .collect();
        if !open.is_empty() {
            open.sort_unstable();
            let (a, b) = open[0];
            return Err(MeshError::OpenEdge { a, b });
        }

        let mut node_cells = vec![Vec::new(); nnodes];
        for (t, tri) in tris.iter().enumerate() {
            for &n in tri {
                node_cells[n].push(t);
            }
        }
        let mut node_bfaces = vec![Vec::new(); nnodes];
        for (f, face) in bfaces.iter().enumerate() {
            for &n in &face.nodes {
                node_bfaces[n].push(f);
            }
        }

        let id = fingerprint(&nodes, &tris, &bfaces);
        Ok(TriMesh {
            nodes,
            tris,
            bfaces,
            node_cells,
            node_bfaces,
            cell_neighbors,
            cell_bfaces,
            bface_cell,
            id,
        })
    }

    pub fn id(&self) -> MeshId {
        self.id
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Point {
        self.nodes[i]
    }

    pub fn tris(&self) -> &[[usize; 3]] {
        &self.tris
    }

    pub fn tri(&self, c: usize) -> [usize; 3] {
        self.tris[c]
    }

    pub fn bfaces(&self) -> &[BFace] {
        &self.bfaces
    }

    pub fn bface(&self, f: usize) -> &BFace {
        &self.bfaces[f]
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_cells(&self) -> usize {
        self.tris.len()
    }

    pub fn n_bfaces(&self) -> usize {
        self.bfaces.len()
    }

    /// Cells incident to node `i`, in ascending order.
    pub fn node_cells(&self, i: usize) -> &[usize] {
        &self.node_cells[i]
    }

    /// Boundary faces incident to node `i`, in ascending order.
    pub fn node_bfaces(&self, i: usize) -> &[usize] {
        &self.node_bfaces[i]
    }

    pub fn cell_neighbors(&self, c: usize) -> [Option<usize>; 3] {
        self.cell_neighbors[c]
    }

    /// Boundary face on each local edge of cell `c`, if any.
    pub fn cell_bfaces(&self, c: usize) -> [Option<usize>; 3] {
        self.cell_bfaces[c]
    }

    /// The single cell adjacent to boundary face `f`.
    pub fn bface_cell(&self, f: usize) -> usize {
        self.bface_cell[f]
    }

    /// Indices of the boundary faces carrying `tag`.
    pub fn tagged_bfaces<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = usize> + 'a {
        self.bfaces
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.tag == tag)
            .map(|(i, _)| i)
    }

    /// Nodes lying on at least one boundary face carrying `tag`, ascending.
    pub fn tagged_nodes(&self, tag: &str) -> Vec<usize> {
        let mut nodes: Vec<usize> = self
            .tagged_bfaces(tag)
            .flat_map(|f| self.bfaces[f].nodes)
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.bfaces.iter().any(|f| f.tag == tag)
    }
}

fn fingerprint(nodes: &[Point], tris: &[[usize; 3]], bfaces: &[BFace]) -> MeshId {
    let mut h = DefaultHasher::new();
    nodes.len().hash(&mut h);
    for p in nodes {
        p.x.to_bits().hash(&mut h);
        p.y.to_bits().hash(&mut h);
    }
    tris.hash(&mut h);
    for f in bfaces {
        f.nodes.hash(&mut h);
        f.tag.hash(&mut h);
    }
    MeshId(h.finish())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn single_triangle() -> TriMesh {
        TriMesh::build(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)],
            vec![[0, 1, 2]],
            vec![BFace::new(0, 1, "wall"), BFace::new(1, 2, "far"), BFace::new(2, 0, "far")],
        )
        .unwrap()
    }

    pub fn unit_square() -> TriMesh {
        TriMesh::build(
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(1.0, 1.0),
                Point::new(0.0, 1.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
            vec![
                BFace::new(0, 1, "wall"),
                BFace::new(1, 2, "far"),
                BFace::new(2, 3, "far"),
                BFace::new(3, 0, "far"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn smallest_mesh() {
        let m = single_triangle();
        assert_eq!(m.n_cells(), 1);
        assert_eq!(m.n_bfaces(), 3);
        for f in 0..3 {
            assert_eq!(m.bface_cell(f), 0);
        }
        assert_eq!(m.cell_neighbors(0), [None, None, None]);
    }

    #[test]
    fn square_shares_diagonal() {
        let m = unit_square();
        assert_eq!(m.n_cells(), 2);
        assert_eq!(m.n_bfaces(), 4);
        let n0: Vec<_> = m.cell_neighbors(0).iter().flatten().copied().collect();
        let n1: Vec<_> = m.cell_neighbors(1).iter().flatten().copied().collect();
        assert_eq!(n0, vec![1]);
        assert_eq!(n1, vec![0]);
    }

    #[test]
    fn clockwise_triangle_is_reoriented() {
        let m = TriMesh::build(
            vec![Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 0.0)],
            vec![[0, 1, 2]],
            vec![BFace::new(0, 1, "a"), BFace::new(1, 2, "a"), BFace::new(2, 0, "a")],
        )
        .unwrap();
        assert_eq!(m.cell_area(0), 0.5);
    }

    #[test]
    fn degenerate_triangle_rejected() {
        let err = TriMesh::build(
            vec![Point::new(1.0, 1.0), Point::new(1.0, 1.0), Point::new(1.0, 1.0)],
            vec![[0, 1, 2]],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err.code(), "zero-area-triangle");

        let err = TriMesh::build(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)],
            vec![[0, 1, 2]],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err.code(), "zero-area-triangle");
    }

    #[test]
    fn duplicate_triangle_rejected() {
        let err = TriMesh::build(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)],
            vec![[0, 1, 2], [1, 2, 0]],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err.code(), "duplicate-triangle");
    }

    #[test]
    fn dangling_face_rejected() {
        let err = TriMesh::build(
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0),
                Point::new(5.0, 5.0),
            ],
            vec![[0, 1, 2]],
            vec![
                BFace::new(0, 1, "wall"),
                BFace::new(1, 2, "far"),
                BFace::new(2, 0, "far"),
                BFace::new(2, 3, "far"),
            ],
        )
        .unwrap_err();
        assert_eq!(err.code(), "dangling-boundary-face");
    }

    #[test]
    fn open_edge_rejected() {
        let err = TriMesh::build(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)],
            vec![[0, 1, 2]],
            vec![BFace::new(0, 1, "wall")],
        )
        .unwrap_err();
        assert_eq!(err.code(), "open-edge");
    }

    #[test]
    fn interior_face_rejected() {
        let err = TriMesh::build(
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(1.0, 1.0),
                Point::new(0.0, 1.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
            vec![
                BFace::new(0, 1, "wall"),
                BFace::new(1, 2, "far"),
                BFace::new(2, 3, "far"),
                BFace::new(3, 0, "far"),
                BFace::new(0, 2, "far"),
            ],
        )
        .unwrap_err();
        assert_eq!(err.code(), "interior-boundary-face");
    }

    #[test]
    fn node_cell_adjacency_inverts_incidence() {
        let m = unit_square();
        for (c, tri) in m.tris().iter().enumerate() {
            for &n in tri {
                assert!(m.node_cells(n).contains(&c));
            }
        }
        for n in 0..m.n_nodes() {
            for &c in m.node_cells(n) {
                assert!(m.tri(c).contains(&n));
            }
        }
    }

    #[test]
    fn out_of_range_index() {
        let err = TriMesh::build(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)],
            vec![[0, 1, 99]],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err.code(), "index-out-of-range");
    }
}
