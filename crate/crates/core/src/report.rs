//! Skin friction, the Blasius reference curve, smoothness metrics and the
//! CSV/SVG artifacts.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::fields::FlowParams;
use crate::wallnormal::{Method, WallSample};

/// Label used for the reference curve in artifacts.
pub const REFERENCE_LABEL: &str = "BLASIUS";
/// Fewest samples a window must hold for [`noise_metrics`].
pub const MIN_WINDOW_SAMPLES: usize = 8;
pub const DEFAULT_WINDOW: (f64, f64) = (0.2, 1.8);

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("{method} samples cannot be reduced in {mode} mode")]
    ModeMismatch { method: Method, mode: FrictionMode },
    #[error("{method} sample at x = {x} carries no velocity gradient")]
    MissingGradient { method: Method, x: f64 },
    #[error("reference needs x > 0, got x = {x}")]
    NonpositiveX { x: f64 },
    #[error("{n} samples in window [{lo}, {hi}], need at least {min}")]
    WindowEmpty { n: usize, lo: f64, hi: f64, min: usize },
    #[error("curve {label} is not strictly increasing in x at x = {x}")]
    Unordered { label: String, x: f64 },
    #[error("non-finite skin friction {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl ReportError {
    pub fn code(&self) -> &'static str {
        match self {
            ReportError::ModeMismatch { .. } => "mode-mismatch",
            ReportError::MissingGradient { .. } => "missing-gradient",
            ReportError::NonpositiveX { .. } => "nonpositive-x",
            ReportError::WindowEmpty { .. } => "window-empty",
            ReportError::Unordered { .. } => "unordered-curve",
            ReportError::NonFinite { .. } => "non-finite",
            ReportError::Io { .. } => "io-error",
        }
    }
}

/// Which velocity derivatives enter the wall stress.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrictionMode {
    /// `du/dn` only.
    Fd,
    /// Full stress projection from both velocity gradients.
    Lsq,
}

impl FrictionMode {
    pub fn for_method(method: Method) -> Self {
        if method.is_lsq() {
            FrictionMode::Lsq
        } else {
            FrictionMode::Fd
        }
    }
}

impl std::fmt::Display for FrictionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FrictionMode::Fd => "fd",
            FrictionMode::Lsq => "lsq",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkinFrictionCurve {
    pub label: String,
    pub params: FlowParams,
    /// `(x, C_fx)`, strictly increasing in `x`.
    pub samples: Vec<(f64, f64)>,
}

impl SkinFrictionCurve {
    pub fn new(label: impl Into<String>, params: FlowParams, samples: Vec<(f64, f64)>) -> Result<Self, ReportError> {
        let label = label.into();
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(ReportError::Unordered { label, x: w[1].0 });
            }
        }
        if let Some(&(x, value)) = samples.iter().find(|s| !s.1.is_finite()) {
            return Err(ReportError::NonFinite { x, value });
        }
        Ok(SkinFrictionCurve { label, params, samples })
    }
}

/// `C_fx = mu * (tau . n) * 2 / M^2` for each sample.
pub fn skin_friction(
    samples: &[WallSample],
    params: &FlowParams,
    mode: FrictionMode,
) -> Result<SkinFrictionCurve, ReportError> {
    let scale = params.mu * 2.0 / (params.mach * params.mach);
    let mut label = String::new();
    let mut out = Vec::with_capacity(samples.len());
    for s in samples {
        if label.is_empty() {
            label = s.method.name().to_string();
        }
        let stress = match mode {
            FrictionMode::Fd => {
                if s.method.is_lsq() {
                    return Err(ReportError::ModeMismatch { method: s.method, mode });
                }
                s.dudn
            }
            FrictionMode::Lsq => {
                if !s.method.is_lsq() {
                    return Err(ReportError::ModeMismatch { method: s.method, mode });
                }
                let (du, dv) = s
                    .velocity_gradient
                    .ok_or(ReportError::MissingGradient { method: s.method, x: s.x_along_wall })?;
                let txx = 2.0 / 3.0 * du.x - 1.0 / 3.0 * dv.y;
                let txy = du.y + dv.x;
                txx * s.normal.x + txy * s.normal.y
            }
        };
        out.push((s.x_along_wall, scale * stress));
    }
    SkinFrictionCurve::new(label, *params, out)
}

/// Closed-form reference skin friction.
pub trait Reference {
    fn cfx(&self, x: f64) -> Result<f64, ReportError>;
}

/// Blasius skin friction `2 f''(0) / sqrt(Re x)`, scaled by `mu Re / M` so it
/// stays consistent with [`skin_friction`] when `mu` is not `M / Re`.
#[derive(Debug, Clone, Copy)]
pub struct BlasiusReference {
    pub params: FlowParams,
    pub wall_shear: f64,
}

impl Reference for BlasiusReference {
    fn cfx(&self, x: f64) -> Result<f64, ReportError> {
        if !(x > 0.0) {
            return Err(ReportError::NonpositiveX { x });
        }
        let FlowParams { mach, reynolds, mu } = self.params;
        let consistency = mu * reynolds / mach;
        Ok(consistency * 2.0 * self.wall_shear / (reynolds * x).sqrt())
    }
}

pub fn blasius_reference(
    params: &FlowParams,
    wall_shear: f64,
    xs: &[f64],
) -> Result<SkinFrictionCurve, ReportError> {
    let r = BlasiusReference { params: *params, wall_shear };
    let samples = xs.iter().map(|&x| Ok((x, r.cfx(x)?))).collect::<Result<Vec<_>, ReportError>>()?;
    SkinFrictionCurve::new(REFERENCE_LABEL, *params, samples)
}

/// Smoothness and accuracy of one curve over an `x` window.
///
/// `tv` and `hf_rms` are not standard quantities: they are this crate's way
/// of putting a number on how noisy a wall distribution looks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseReport {
    pub label: String,
    /// Total variation, `sum |C_{i+1} - C_i|`.
    pub tv: f64,
    /// RMS of `C_{i+1} - 2 C_i + C_{i-1}` over interior window samples.
    pub hf_rms: f64,
    pub mean_rel_err: f64,
    pub max_rel_err: f64,
    /// Mean signed error `C - C_ref`.
    pub mean_err: f64,
    pub window: (f64, f64),
    pub n: usize,
}

pub fn noise_metrics(
    curve: &SkinFrictionCurve,
    reference: &dyn Reference,
    window: (f64, f64),
) -> Result<NoiseReport, ReportError> {
    let (lo, hi) = window;
    let inside: Vec<(f64, f64)> = curve.samples.iter().copied().filter(|s| s.0 >= lo && s.0 <= hi).collect();
    let n = inside.len();
    if n < MIN_WINDOW_SAMPLES {
        return Err(ReportError::WindowEmpty { n, lo, hi, min: MIN_WINDOW_SAMPLES });
    }
    let c: Vec<f64> = inside.iter().map(|s| s.1).collect();
    let tv = c.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let second: Vec<f64> = c.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect();
    let hf_rms = (second.iter().map(|d| d * d).sum::<f64>() / second.len() as f64).sqrt();

    let (mut sum_rel, mut max_rel, mut sum_err) = (0.0, 0.0f64, 0.0);
    for &(x, cf) in &inside {
        let r = reference.cfx(x)?;
        let err = cf - r;
        let rel = (err / r).abs();
        sum_rel += rel;
        max_rel = max_rel.max(rel);
        sum_err += err;
    }
    Ok(NoiseReport {
        label: curve.label.clone(),
        tv,
        hf_rms,
        mean_rel_err: sum_rel / n as f64,
        max_rel_err: max_rel,
        mean_err: sum_err / n as f64,
        window,
        n,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), ReportError> {
    std::fs::write(path, contents).map_err(|source| ReportError::Io { path: path.display().to_string(), source })
}

/// Curves as `method,x,cfx,href` rows; `href` is the reference at `x`, left
/// empty where the reference is undefined or absent.
pub fn format_csv(curves: &[SkinFrictionCurve], reference: Option<&dyn Reference>) -> String {
    let mut out = String::from("method,x,cfx,href\n");
    for curve in curves {
        for &(x, cf) in &curve.samples {
            let href = reference.and_then(|r| r.cfx(x).ok()).map(|h| format!("{h:.12e}")).unwrap_or_default();
            let _ = writeln!(out, "{},{x:.12e},{cf:.12e},{href}", curve.label);
        }
    }
    out
}

pub fn emit_csv(
    curves: &[SkinFrictionCurve],
    reference: Option<&dyn Reference>,
    path: &Path,
) -> Result<(), ReportError> {
    write_file(path, &format_csv(curves, reference))
}

pub fn format_noise_csv(reports: &[NoiseReport]) -> String {
    let mut out = String::from(
        "# tv = sum |C_{i+1} - C_i|; hf_rms = rms of C_{i+1} - 2 C_i + C_{i-1}; \
         both are ad hoc smoothness measures defined by this tool\n",
    );
    out.push_str("method,n,x_lo,x_hi,tv,hf_rms,mean_rel_err,max_rel_err,mean_err\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            r.label, r.n, r.window.0, r.window.1, r.tv, r.hf_rms, r.mean_rel_err, r.max_rel_err, r.mean_err
        );
    }
    out
}

pub fn emit_noise_csv(reports: &[NoiseReport], path: &Path) -> Result<(), ReportError> {
    write_file(path, &format_noise_csv(reports))
}

const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Static line chart of every curve over `window`, the reference dashed.
pub fn format_svg(curves: &[SkinFrictionCurve], reference: Option<&dyn Reference>, window: (f64, f64)) -> String {
    let (w, h) = (800.0, 500.0);
    let (left, right, top, bottom) = (70.0, 160.0, 20.0, 50.0);
    let (x0, x1) = window;

    let ref_pts: Vec<(f64, f64)> = match reference {
        Some(r) => (0..=200)
            .filter_map(|k| {
                let x = x0 + (x1 - x0) * k as f64 / 200.0;
                r.cfx(x).ok().map(|c| (x, c))
            })
            .collect(),
        None => Vec::new(),
    };
    let in_window = |c: &SkinFrictionCurve| -> Vec<(f64, f64)> {
        c.samples.iter().copied().filter(|s| s.0 >= x0 && s.0 <= x1).collect()
    };
    let all_y = curves.iter().flat_map(|c| in_window(c).into_iter().map(|s| s.1)).chain(ref_pts.iter().map(|s| s.1));
    let (mut y0, mut y1) = all_y.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    if !(y0.is_finite() && y1.is_finite()) {
        (y0, y1) = (0.0, 1.0);
    }
    if y1 - y0 <= f64::EPSILON * y1.abs().max(1.0) {
        (y0, y1) = (y0 - 0.5, y1 + 0.5);
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let px = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let py = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);
    let polyline = |pts: &[(f64, f64)]| {
        pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect::<Vec<_>>().join(" ")
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - left - right,
        h - top - bottom
    );
    for k in 0..=4 {
        let xv = x0 + (x1 - x0) * k as f64 / 4.0;
        let yv = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{xv:.2}</text>"#,
            px(xv),
            h - bottom + 16.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{yv:.3e}</text>"#,
            left - 6.0,
            py(yv) + 4.0
        );
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">x</text>"#, px(0.5 * (x0 + x1)), h - 12.0);
    let _ = writeln!(s, r#"<text x="14" y="{:.2}" font-size="12">Cfx</text>"#, top + 12.0);

    let mut legend = Vec::new();
    if !ref_pts.is_empty() {
        let _ = writeln!(s, r#"<polyline fill="none" stroke="black" stroke-width="1.5" stroke-dasharray="6,4" points="{}"/>"#, polyline(&ref_pts));
        legend.push((REFERENCE_LABEL.to_string(), "black"));
    }
    for (k, c) in curves.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1" points="{}"/>"#, polyline(&in_window(c)));
        legend.push((c.label.clone(), color));
    }
    for (k, (label, color)) in legend.iter().enumerate() {
        let y = top + 14.0 + 18.0 * k as f64;
        let lx = w - right + 12.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/>"#, lx + 24.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11">{label}</text>"#, lx + 30.0, y + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(
    curves: &[SkinFrictionCurve],
    reference: Option<&dyn Reference>,
    window: (f64, f64),
    path: &Path,
) -> Result<(), ReportError> {
    write_file(path, &format_svg(curves, reference, window))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Point, Vec2};
    use proptest::prelude::*;

    const F2_WALL: f64 = 0.332057;

    fn fd_sample(x: f64, dudn: f64) -> WallSample {
        WallSample {
            location: Point::new(x, 0.0),
            x_along_wall: x,
            normal: Vec2::new(0.0, 1.0),
            dudn,
            method: Method::Fd1,
            step: Some(1e-3),
            velocity_gradient: None,
            outside_cell: false,
        }
    }

    fn unit_params() -> FlowParams {
        FlowParams { mach: 1.0, reynolds: 1.0, mu: 1.0 }
    }

    struct Flat(f64);

    impl Reference for Flat {
        fn cfx(&self, _x: f64) -> Result<f64, ReportError> {
            Ok(self.0)
        }
    }

    fn curve(points: Vec<(f64, f64)>) -> SkinFrictionCurve {
        SkinFrictionCurve::new("T", unit_params(), points).unwrap()
    }

    #[test]
    fn fd_skin_friction_substitution() {
        let c = skin_friction(&[fd_sample(0.5, 1.0), fd_sample(0.7, 0.0)], &unit_params(), FrictionMode::Fd).unwrap();
        assert_eq!(c.samples, vec![(0.5, 2.0), (0.7, 0.0)]);
        assert_eq!(c.label, "FD1");
    }

    #[test]
    fn blasius_wall_value() {
        let params = FlowParams::new(0.15, 1e6);
        let c = skin_friction(&[fd_sample(1.0, 49.809)], &params, FrictionMode::Fd).unwrap();
        assert!((c.samples[0].1 - 6.641e-4).abs() < 1e-6);
        assert!((c.samples[0].1 - 0.664 / 1e3).abs() < 1e-6);
    }

    #[test]
    fn lsq_mode_keeps_dvdx() {
        let mut s = fd_sample(1.0, 3.0);
        s.method = Method::Fang;
        s.velocity_gradient = Some((Vec2::new(0.4, 3.0), Vec2::new(0.5, -0.4)));
        let c = skin_friction(&[s.clone()], &unit_params(), FrictionMode::Lsq).unwrap();
        assert!((c.samples[0].1 - 7.0).abs() < 1e-15);

        // tilted normal picks up the normal-stress row
        s.normal = Vec2::new(1.0, 0.0);
        let c = skin_friction(&[s], &unit_params(), FrictionMode::Lsq).unwrap();
        let expect = 2.0 * (2.0 / 3.0 * 0.4 + 1.0 / 3.0 * 0.4);
        assert!((c.samples[0].1 - expect).abs() < 1e-15);
    }

    #[test]
    fn mode_mismatch() {
        let mut ng = fd_sample(1.0, 1.0);
        ng.method = Method::Ng;
        assert_eq!(skin_friction(&[ng], &unit_params(), FrictionMode::Fd).unwrap_err().code(), "mode-mismatch");
        let fd = fd_sample(1.0, 1.0);
        assert_eq!(skin_friction(&[fd], &unit_params(), FrictionMode::Lsq).unwrap_err().code(), "mode-mismatch");
        let mut bare = fd_sample(1.0, 1.0);
        bare.method = Method::Cang;
        assert_eq!(skin_friction(&[bare], &unit_params(), FrictionMode::Lsq).unwrap_err().code(), "missing-gradient");
    }

    #[test]
    fn reference_values() {
        let p = FlowParams::new(0.15, 1e6);
        let r = BlasiusReference { params: p, wall_shear: F2_WALL };
        let at1 = r.cfx(1.0).unwrap();
        assert!((at1 - 6.641e-4).abs() < 1e-6);
        assert!((r.cfx(0.25).unwrap() - 2.0 * at1).abs() < 1e-18);
        let p4 = FlowParams::new(0.15, 4e6);
        let r4 = BlasiusReference { params: p4, wall_shear: F2_WALL };
        assert!((r4.cfx(1.0).unwrap() - 0.5 * at1).abs() < 1e-18);
        assert_eq!(r.cfx(0.0).unwrap_err().code(), "nonpositive-x");
        assert_eq!(blasius_reference(&p, F2_WALL, &[1.0, -1.0]).unwrap_err().code(), "nonpositive-x");
    }

    #[test]
    fn metric_examples() {
        let xs = |n: usize| (0..n).map(|i| 0.2 + 0.1 * i as f64);
        let flat = noise_metrics(&curve(xs(12).map(|x| (x, 3.0)).collect()), &Flat(3.0), (0.0, 2.0)).unwrap();
        assert_eq!((flat.tv, flat.hf_rms, flat.mean_rel_err), (0.0, 0.0, 0.0));

        let eps = 1e-3;
        let alt: Vec<(f64, f64)> = xs(10).enumerate().map(|(i, x)| (x, 1.0 + if i % 2 == 0 { eps } else { -eps })).collect();
        let r = noise_metrics(&curve(alt), &Flat(1.0), (0.0, 2.0)).unwrap();
        assert!((r.tv - 2.0 * eps * 9.0).abs() < 1e-15);
        assert!((r.hf_rms - 4.0 * eps).abs() < 1e-15);
        assert!((r.mean_rel_err - eps).abs() < 1e-15);

        let lin: Vec<(f64, f64)> = (0..=16).map(|i| (0.2 + 0.1 * i as f64, 5.0 * (0.2 + 0.1 * i as f64))).collect();
        let r = noise_metrics(&curve(lin), &Flat(1.0), (0.2, 1.8 + 1e-12)).unwrap();
        assert!((r.tv - 5.0 * 1.6).abs() < 1e-12);
        assert!(r.hf_rms < 1e-12);
    }

    #[test]
    fn window_too_small() {
        let c = curve((0..20).map(|i| (i as f64, 1.0)).collect());
        let err = noise_metrics(&c, &Flat(1.0), (0.5, 5.5)).unwrap_err();
        assert_eq!(err.code(), "window-empty");
    }

    #[test]
    fn unordered_curve_rejected() {
        let err = SkinFrictionCurve::new("T", unit_params(), vec![(1.0, 0.0), (1.0, 0.0)]).unwrap_err();
        assert_eq!(err.code(), "unordered-curve");
    }

    #[test]
    fn csv_shapes() {
        assert_eq!(format_csv(&[], None), "method,x,cfx,href\n");
        let c = curve(vec![(0.5, 1.0), (1.5, 2.0)]);
        let text = format_csv(std::slice::from_ref(&c), Some(&Flat(0.25)));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("T,5.000000000000e-1,"));
        assert!(lines[1].ends_with(",2.500000000000e-1"));
        assert_eq!(text, format_csv(std::slice::from_ref(&c), Some(&Flat(0.25))));
        assert_eq!(format_svg(std::slice::from_ref(&c), None, DEFAULT_WINDOW), format_svg(&[c], None, DEFAULT_WINDOW));
    }

    #[test]
    fn noise_csv_is_labeled() {
        let text = format_noise_csv(&[]);
        assert!(text.starts_with("# tv = "));
        assert!(text.lines().nth(1).unwrap().starts_with("method,n,"));
    }

    #[test]
    fn files_written() {
        let dir = tempfile::tempdir().unwrap();
        let c = curve(vec![(0.5, 1.0), (1.5, 2.0)]);
        emit_csv(std::slice::from_ref(&c), None, &dir.path().join("a.csv")).unwrap();
        emit_svg(&[c], Some(&Flat(1.5)), DEFAULT_WINDOW, &dir.path().join("a.svg")).unwrap();
        let svg = std::fs::read_to_string(dir.path().join("a.svg")).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("polyline") && !svg.contains("<script"));
        let err = emit_csv(&[], None, &dir.path().join("missing/a.csv")).unwrap_err();
        assert_eq!(err.code(), "io-error");
    }

    proptest! {
        #[test]
        fn skin_friction_is_linear(a in -1e3f64..1e3, b in -1e3f64..1e3, k in -10f64..10.0) {
            let p = FlowParams::new(0.15, 1e6);
            let at = |d: f64| skin_friction(&[fd_sample(1.0, d)], &p, FrictionMode::Fd).unwrap().samples[0].1;
            let lhs = at(a + k * b);
            let rhs = at(a) + k * at(b);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (lhs.abs() + rhs.abs() + 1e-12));
        }

        #[test]
        fn metrics_translation_invariant(
            values in proptest::collection::vec(-1.0f64..1.0, 10..40),
            shift in -5.0f64..5.0,
        ) {
            let pts = |s: f64| values.iter().enumerate().map(|(i, v)| (i as f64 * 0.05, v + s)).collect();
            let base = noise_metrics(&curve(pts(0.0)), &Flat(10.0), (0.0, 100.0)).unwrap();
            let moved = noise_metrics(&curve(pts(shift)), &Flat(10.0), (0.0, 100.0)).unwrap();
            prop_assert!((base.tv - moved.tv).abs() < 1e-9);
            prop_assert!((base.hf_rms - moved.hf_rms).abs() < 1e-9);
            prop_assert!((moved.mean_err - base.mean_err - shift).abs() < 1e-9);
            prop_assert!(base.tv >= 0.0 && base.hf_rms >= 0.0 && base.max_rel_err >= base.mean_rel_err - 1e-15);
        }

        #[test]
        fn reference_decreasing(x in 0.01f64..10.0, dx in 1e-3f64..5.0) {
            let r = BlasiusReference { params: FlowParams::new(0.15, 1e6), wall_shear: F2_WALL };
            prop_assert!(r.cfx(x + dx).unwrap() < r.cfx(x).unwrap());
        }
    }
}
