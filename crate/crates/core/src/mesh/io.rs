//! Plain-text mesh format.
//!
//! ```text
//! trimesh v1
//! <nnodes> <ntris> <nbfaces>
//! x y            (nnodes lines, shortest round-trip decimal)
//! i j k          (ntris lines, 0-based)
//! a b tag        (nbfaces lines)
//! ```

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{BFace, MeshError, Point, TriMesh};

pub const FORMAT_HEADER: &str = "trimesh v1";

pub fn format_mesh(mesh: &TriMesh) -> String {
    let mut out = String::with_capacity(32 * (mesh.n_nodes() + mesh.n_cells()));
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    let _ = writeln!(out, "{} {} {}", mesh.n_nodes(), mesh.n_cells(), mesh.n_bfaces());
    for p in mesh.nodes() {
        // `{:?}` is the shortest representation that parses back to the same bits
        let _ = writeln!(out, "{:?} {:?}", p.x, p.y);
    }
    for t in mesh.tris() {
        let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
    }
    for f in mesh.bfaces() {
        let _ = writeln!(out, "{} {} {}", f.nodes[0], f.nodes[1], f.tag);
    }
    out
}

pub fn write_mesh(mesh: &TriMesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    let path = path.as_ref();
    std::fs::write(path, format_mesh(mesh))
        .map_err(|source| MeshError::Io { path: path.display().to_string(), source })
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<TriMesh, MeshError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| MeshError::Io { path: path.display().to_string(), source })?;
    parse_mesh(&text)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next_fields(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), MeshError> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !fields.is_empty() {
                return Ok((i + 1, fields));
            }
        }
        Err(MeshError::Parse { line: self.last + 1, msg: format!("unexpected end of file, expected {what}") })
    }
}

fn field<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T, MeshError> {
    tok.parse()
        .map_err(|_| MeshError::Parse { line, msg: format!("invalid {what} {tok:?}") })
}

fn expect_len(fields: &[&str], n: usize, line: usize, what: &str) -> Result<(), MeshError> {
    if fields.len() != n {
        return Err(MeshError::Parse {
            line,
            msg: format!("expected {n} fields for {what}, found {}", fields.len()),
        });
    }
    Ok(())
}

pub fn parse_mesh(text: &str) -> Result<TriMesh, MeshError> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };

    let (ln, header) = lines.next_fields("header")?;
    let header = header.join(" ");
    if header != FORMAT_HEADER {
        if header.starts_with("trimesh") {
            return Err(MeshError::Version { found: header, expected: FORMAT_HEADER });
        }
        return Err(MeshError::Parse { line: ln, msg: format!("expected {FORMAT_HEADER:?}") });
    }

    let (ln, counts) = lines.next_fields("counts")?;
    expect_len(&counts, 3, ln, "counts")?;
    let nnodes: usize = field(counts[0], ln, "node count")?;
    let ntris: usize = field(counts[1], ln, "triangle count")?;
    let nbfaces: usize = field(counts[2], ln, "boundary face count")?;
    if ntris == 0 {
        return Err(MeshError::NoCells);
    }

    let mut nodes = Vec::with_capacity(nnodes);
    for _ in 0..nnodes {
        let (ln, f) = lines.next_fields("node")?;
        expect_len(&f, 2, ln, "node")?;
        let x: f64 = field(f[0], ln, "coordinate")?;
        let y: f64 = field(f[1], ln, "coordinate")?;
        if !x.is_finite() || !y.is_finite() {
            return Err(MeshError::Parse { line: ln, msg: "non-finite coordinate".into() });
        }
        nodes.push(Point::new(x, y));
    }

    let mut tris = Vec::with_capacity(ntris);
    for _ in 0..ntris {
        let (ln, f) = lines.next_fields("triangle")?;
        expect_len(&f, 3, ln, "triangle")?;
        let mut t = [0usize; 3];
        for (k, tok) in f.iter().enumerate() {
            t[k] = field(tok, ln, "node index")?;
            if t[k] >= nnodes {
                return Err(MeshError::Parse {
                    line: ln,
                    msg: format!("triangle references node {} of {nnodes}", t[k]),
                });
            }
        }
        tris.push(t);
    }

    let mut bfaces = Vec::with_capacity(nbfaces);
    for _ in 0..nbfaces {
        let (ln, f) = lines.next_fields("boundary face")?;
        expect_len(&f, 3, ln, "boundary face")?;
        let a: usize = field(f[0], ln, "node index")?;
        let b: usize = field(f[1], ln, "node index")?;
        for n in [a, b] {
            if n >= nnodes {
                return Err(MeshError::Parse {
                    line: ln,
                    msg: format!("boundary face references node {n} of {nnodes}"),
                });
            }
        }
        bfaces.push(BFace::new(a, b, f[2]));
    }

    if let Ok((ln, _)) = lines.next_fields("end of file") {
        return Err(MeshError::Parse { line: ln, msg: "trailing content after boundary faces".into() });
    }

    TriMesh::build(nodes, tris, bfaces)
}

#[cfg(test)]
mod tests {
    use super::super::tests::unit_square;
    use super::*;

    #[test]
    fn round_trip_text() {
        let m = unit_square();
        let text = format_mesh(&m);
        let back = parse_mesh(&text).unwrap();
        assert_eq!(format_mesh(&back), text);
        assert_eq!(back.id(), m.id());
    }

    #[test]
    fn bad_node_reference_names_line() {
        let mut text = String::from("trimesh v1\n10 1 0\n");
        for i in 0..10 {
            text.push_str(&format!("{i} 0.5\n"));
        }
        text.push_str("0 1 99\n");
        let err = parse_mesh(&text).unwrap_err();
        match err {
            MeshError::Parse { line, ref msg } => {
                assert_eq!(line, 13);
                assert!(msg.contains("99"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_triangle_section() {
        let err = parse_mesh("trimesh v1\n3 0 0\n0 0\n1 0\n0 1\n").unwrap_err();
        assert_eq!(err.code(), "no-cells");
    }

    #[test]
    fn version_mismatch() {
        let err = parse_mesh("trimesh v2\n3 1 0\n").unwrap_err();
        assert_eq!(err.code(), "version-mismatch");
    }

    #[test]
    fn truncated_file() {
        let err = parse_mesh("trimesh v1\n3 1 3\n0 0\n1 0\n").unwrap_err();
        assert_eq!(err.code(), "parse-error");
    }

    #[test]
    fn coordinates_survive_bit_exact() {
        let x = 0.1f64 + 0.2;
        let y = std::f64::consts::PI * 1e-7;
        let text = format!(
            "trimesh v1\n3 1 3\n0 0\n{x:?} 0\n0 {y:?}\n0 1 2\n0 1 wall\n1 2 far\n2 0 far\n"
        );
        let m = parse_mesh(&text).unwrap();
        assert_eq!(m.node(1).x.to_bits(), x.to_bits());
        assert_eq!(m.node(2).y.to_bits(), y.to_bits());
    }
}
