use super::{signed_double_area, MeshError, Point, TriMesh, Vec2};

/// Geometry of a boundary face as seen from its adjacent cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceGeom {
    pub midpoint: Point,
    /// Unit normal pointing into the domain (toward the adjacent cell).
    pub unit_normal: Vec2,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeNormal {
    pub node: usize,
    pub unit_normal: Vec2,
}

impl TriMesh {
    pub fn cell_centroid(&self, c: usize) -> Point {
        let [a, b, d] = self.tris[c];
        let (pa, pb, pd) = (self.nodes[a], self.nodes[b], self.nodes[d]);
        Point::new((pa.x + pb.x + pd.x) / 3.0, (pa.y + pb.y + pd.y) / 3.0)
    }

    pub fn cell_area(&self, c: usize) -> f64 {
        let [a, b, d] = self.tris[c];
        0.5 * signed_double_area(&self.nodes[a], &self.nodes[b], &self.nodes[d])
    }

    /// Midpoint and length of local edge `k` of cell `c`.
    pub fn cell_edge(&self, c: usize, k: usize) -> (Point, f64) {
        let tri = self.tris[c];
        let p0 = self.nodes[tri[k]];
        let p1 = self.nodes[tri[(k + 1) % 3]];
        (nalgebra::center(&p0, &p1), (p1 - p0).norm())
    }

    pub fn bface_geom(&self, f: usize) -> FaceGeom {
        let [a, b] = self.bfaces[f].nodes;
        let (pa, pb) = (self.nodes[a], self.nodes[b]);
        let edge = pb - pa;
        let length = edge.norm();
        let midpoint = nalgebra::center(&pa, &pb);
        let mut unit_normal = Vec2::new(-edge.y, edge.x) / length;
        let inward = self.cell_centroid(self.bface_cell[f]) - midpoint;
        if unit_normal.dot(&inward) < 0.0 {
            unit_normal = -unit_normal;
        }
        FaceGeom { midpoint, unit_normal, length }
    }

    /// Length-weighted average of the inward normals of the `tag` faces
    /// incident to `node`, renormalized.
    pub fn node_normal(&self, node: usize, tag: &str) -> Result<NodeNormal, MeshError> {
        let mut sum = Vec2::zeros();
        let mut found = false;
        for &f in &self.node_bfaces[node] {
            if self.bfaces[f].tag != tag {
                continue;
            }
            let g = self.bface_geom(f);
            sum += g.unit_normal * g.length;
            found = true;
        }
        if !found {
            return Err(MeshError::NodeNotOnTaggedBoundary { node, tag: tag.to_string() });
        }
        Ok(NodeNormal { node, unit_normal: sum.normalize() })
    }

    /// Face-area-weighted centroid with the default exponent `p = 2`.
    pub fn fawc(&self, c: usize) -> Point {
        self.fawc_with_exponent(c, 2.0)
    }

    /// Weighted mean of the cell's edge midpoints, with weights
    /// `(A / A_max)^p` for edge lengths `A`.
    pub fn fawc_with_exponent(&self, c: usize, p: f64) -> Point {
        let edges = [self.cell_edge(c, 0), self.cell_edge(c, 1), self.cell_edge(c, 2)];
        let max_len = edges.iter().map(|e| e.1).fold(0.0, f64::max);
        let mut num = Vec2::zeros();
        let mut den = 0.0;
        for (mid, len) in edges {
            let w = (len / max_len).powf(p);
            num += mid.coords * w;
            den += w;
        }
        Point::from(num / den)
    }

    /// Whether `p` lies inside or on the boundary of cell `c`.
    pub fn cell_contains(&self, c: usize, p: &Point) -> bool {
        let [a, b, d] = self.tris[c];
        let (pa, pb, pd) = (&self.nodes[a], &self.nodes[b], &self.nodes[d]);
        let scale = self.cell_area(c).abs() * 1e-12;
        signed_double_area(pa, pb, p) >= -scale
            && signed_double_area(pb, pd, p) >= -scale
            && signed_double_area(pd, pa, p) >= -scale
    }
}
