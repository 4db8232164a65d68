use serde::{Deserialize, Serialize};

use crate::mesh::{Point, Vec2};

/// Bivariate polynomial of degree at most two,
/// `c00 + c10 x + c01 y + c20 x^2 + c11 x y + c02 y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Poly2 {
    pub c00: f64,
    pub c10: f64,
    pub c01: f64,
    pub c20: f64,
    pub c11: f64,
    pub c02: f64,
}

impl Poly2 {
    /// Coefficients in graded-lex order `[c00, c10, c01, c20, c11, c02]`.
    pub fn new(c: [f64; 6]) -> Self {
        Poly2 { c00: c[0], c10: c[1], c01: c[2], c20: c[3], c11: c[4], c02: c[5] }
    }

    pub fn linear(c00: f64, c10: f64, c01: f64) -> Self {
        Poly2 { c00, c10, c01, ..Poly2::default() }
    }

    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn coeffs(&self) -> [f64; 6] {
        [self.c00, self.c10, self.c01, self.c20, self.c11, self.c02]
    }

    pub fn is_affine(&self) -> bool {
        self.c20 == 0.0 && self.c11 == 0.0 && self.c02 == 0.0
    }

    pub fn value(&self, p: &Point) -> f64 {
        let (x, y) = (p.x, p.y);
        self.c00 + self.c10 * x + self.c01 * y + self.c20 * x * x + self.c11 * x * y + self.c02 * y * y
    }

    pub fn gradient(&self, p: &Point) -> Vec2 {
        let (x, y) = (p.x, p.y);
        Vec2::new(
            self.c10 + 2.0 * self.c20 * x + self.c11 * y,
            self.c01 + self.c11 * x + 2.0 * self.c02 * y,
        )
    }

    /// The polynomial `q(p) = self(p - shift)`.
    pub fn translated(&self, shift: &Vec2) -> Poly2 {
        let (a, b) = (shift.x, shift.y);
        Poly2 {
            c00: self.c00 - self.c10 * a - self.c01 * b + self.c20 * a * a + self.c11 * a * b + self.c02 * b * b,
            c10: self.c10 - 2.0 * self.c20 * a - self.c11 * b,
            c01: self.c01 - self.c11 * a - 2.0 * self.c02 * b,
            c20: self.c20,
            c11: self.c11,
            c02: self.c02,
        }
    }
}
