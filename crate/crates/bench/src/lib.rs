//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use wallgrad::fields::{solve_blasius, BlasiusFlow};
use wallgrad::gridgen::generate;
use wallgrad::{AnalyticField, CellField, FlowParams, GridSpec, TriMesh};

/// Default boundary-layer grid scaled to `nx` columns, half as many rows.
pub fn grid(nx: usize) -> TriMesh {
    generate(&GridSpec { nx, ny: nx / 2, ..GridSpec::default() }).expect("valid default grid")
}

pub fn blasius() -> AnalyticField {
    let table = solve_blasius(10.0, 2000).expect("blasius table");
    AnalyticField::Blasius(BlasiusFlow::new(FlowParams::default(), Arc::new(table)))
}

pub fn sampled(mesh: &TriMesh, field: &AnalyticField) -> CellField {
    field.sample(mesh).expect("field defined on grid")
}
