//! Blasius similarity profile `f''' + f f'' / 2 = 0`, `f(0) = f'(0) = 0`,
//! `f'(inf) = 1`, solved by shooting on `f''(0)`.

use super::FieldError;

/// Bracket for the wall shear `f''(0)`; `f'(eta_max)` increases with it.
const SHOOT_BRACKET: (f64, f64) = (0.05, 1.0);
const SHOOT_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

type State = [f64; 3];

fn rhs(s: &State) -> State {
    [s[1], s[2], -0.5 * s[0] * s[2]]
}

fn rk4_step(s: &State, h: f64) -> State {
    let add = |a: &State, k: &State, c: f64| [a[0] + c * k[0], a[1] + c * k[1], a[2] + c * k[2]];
    let k1 = rhs(s);
    let k2 = rhs(&add(s, &k1, 0.5 * h));
    let k3 = rhs(&add(s, &k2, 0.5 * h));
    let k4 = rhs(&add(s, &k3, h));
    [
        s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        s[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

fn integrate(wall_shear: f64, h: f64, n_steps: usize, mut visit: impl FnMut(&State)) -> State {
    let mut s = [0.0, 0.0, wall_shear];
    visit(&s);
    for _ in 0..n_steps {
        s = rk4_step(&s, h);
        visit(&s);
    }
    s
}

/// Dense samples of `(eta, f, f', f'')` on `[0, eta_max]`.
#[derive(Debug, Clone)]
pub struct BlasiusTable {
    step: f64,
    eta_max: f64,
    f: Vec<f64>,
    fp: Vec<f64>,
    fpp: Vec<f64>,
    wall_shear: f64,
}

/// Profile value at one `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlasiusPoint {
    pub f: f64,
    pub fp: f64,
    pub fpp: f64,
}

pub fn solve_blasius(eta_max: f64, n_steps: usize) -> Result<BlasiusTable, FieldError> {
    if !(eta_max >= 8.0) || !eta_max.is_finite() {
        return Err(FieldError::InvalidBlasius(format!("eta_max = {eta_max} must be >= 8")));
    }
    if n_steps < 1000 {
        return Err(FieldError::InvalidBlasius(format!("n_steps = {n_steps} must be >= 1000")));
    }
    let h = eta_max / n_steps as f64;
    let miss = |s: f64| integrate(s, h, n_steps, |_| {})[1] - 1.0;

    let (mut lo, mut hi) = SHOOT_BRACKET;
    if !(miss(lo) < 0.0 && miss(hi) > 0.0) {
        return Err(FieldError::NoConvergence { iterations: 0 });
    }
    let mut wall_shear = None;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let m = miss(mid);
        if m.abs() < SHOOT_TOL {
            wall_shear = Some(mid);
            break;
        }
        if m < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let wall_shear = wall_shear.ok_or(FieldError::NoConvergence { iterations: MAX_BISECTIONS })?;

    let mut f = Vec::with_capacity(n_steps + 1);
    let mut fp = Vec::with_capacity(n_steps + 1);
    let mut fpp = Vec::with_capacity(n_steps + 1);
    integrate(wall_shear, h, n_steps, |s| {
        f.push(s[0]);
        fp.push(s[1]);
        fpp.push(s[2]);
    });
    Ok(BlasiusTable { step: h, eta_max, f, fp, fpp, wall_shear })
}

fn hermite(y0: f64, y1: f64, d0: f64, d1: f64, h: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * d1
}

impl BlasiusTable {
    /// `f''(0)`.
    pub fn wall_shear(&self) -> f64 {
        self.wall_shear
    }

    pub fn eta_max(&self) -> f64 {
        self.eta_max
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// Row `k` of the table as `(eta, f, f', f'')`.
    pub fn row(&self, k: usize) -> (f64, f64, f64, f64) {
        (k as f64 * self.step, self.f[k], self.fp[k], self.fpp[k])
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        (0..self.len()).map(|k| self.row(k))
    }

    /// Cubic Hermite interpolation of the profile at `eta`, using the ODE
    /// itself for the slope of `f''`. Beyond the table the profile is
    /// continued as free stream.
    pub fn eval(&self, eta: f64) -> BlasiusPoint {
        let last = self.len() - 1;
        if eta <= 0.0 {
            return BlasiusPoint { f: 0.0, fp: 0.0, fpp: self.wall_shear };
        }
        if eta >= self.eta_max {
            return BlasiusPoint {
                f: self.f[last] + self.fp[last] * (eta - self.eta_max),
                fp: self.fp[last],
                fpp: 0.0,
            };
        }
        let k = ((eta / self.step) as usize).min(last - 1);
        let t = (eta - k as f64 * self.step) / self.step;
        let h = self.step;
        let fppp = |i: usize| -0.5 * self.f[i] * self.fpp[i];
        BlasiusPoint {
            f: hermite(self.f[k], self.f[k + 1], self.fp[k], self.fp[k + 1], h, t),
            fp: hermite(self.fp[k], self.fp[k + 1], self.fpp[k], self.fpp[k + 1], h, t),
            fpp: hermite(self.fpp[k], self.fpp[k + 1], fppp(k), fppp(k + 1), h, t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wall_shear_and_boundary_values() {
        let t = solve_blasius(10.0, 2000).unwrap();
        assert!((t.wall_shear() - 0.3320573).abs() < 1e-5);
        let (eta, f, fp, fpp) = t.row(0);
        assert_eq!((eta, f, fp), (0.0, 0.0, 0.0));
        assert_eq!(fpp, t.wall_shear());
    }

    #[test]
    fn shooting_target_met_at_eta_8() {
        let t = solve_blasius(8.0, 1000).unwrap();
        let (eta, _, fp, _) = t.row(t.len() - 1);
        assert_eq!(eta, 8.0);
        assert!((fp - 1.0).abs() < 1e-8);
    }

    #[test]
    fn monotone_velocity() {
        let t = solve_blasius(10.0, 2000).unwrap();
        let fps: Vec<f64> = t.rows().map(|r| r.2).collect();
        assert!(fps.windows(2).all(|w| w[1] >= w[0]));
        assert!(t.rows().all(|r| r.3 > 0.0));
    }

    #[test]
    fn interpolation_hits_nodes_and_is_smooth() {
        let t = solve_blasius(10.0, 2000).unwrap();
        let (eta, f, fp, fpp) = t.row(700);
        let p = t.eval(eta);
        assert!((p.f - f).abs() < 1e-15 && (p.fp - fp).abs() < 1e-15 && (p.fpp - fpp).abs() < 1e-15);
        // Hermite midpoints against a much finer table
        let fine = solve_blasius(10.0, 64000).unwrap();
        for eta in [0.0123, 0.77, 2.5051, 4.9999, 7.3] {
            let (a, b) = (t.eval(eta), fine.eval(eta));
            assert!((a.f - b.f).abs() < 1e-9, "f at {eta}");
            assert!((a.fp - b.fp).abs() < 1e-9, "fp at {eta}");
            assert!((a.fpp - b.fpp).abs() < 1e-8, "fpp at {eta}");
        }
    }

    #[test]
    fn free_stream_continuation() {
        let t = solve_blasius(10.0, 2000).unwrap();
        let p = t.eval(25.0);
        assert!((p.fp - 1.0).abs() < 1e-9);
        assert_eq!(p.fpp, 0.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert_eq!(solve_blasius(5.0, 2000).unwrap_err().code(), "invalid-blasius");
        assert_eq!(solve_blasius(10.0, 10).unwrap_err().code(), "invalid-blasius");
    }
}
