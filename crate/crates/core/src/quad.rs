//! Quadrature: adaptive Simpson and panelized 64-point Gauss-Legendre.
//!
//! The two rules are deliberately independent routes; moment checks in the
//! mollifier module require them to agree before a value is trusted.

use crate::{Error, Result};

/// Adaptive Simpson on one panel with absolute tolerance budget.
fn adaptive_panel<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 {
        return Err(Error::QuadratureFailure(format!(
            "max subdivision depth reached on [{a}, {b}]"
        )));
    }
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    let l = adaptive_panel(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = adaptive_panel(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

fn simpson_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_panel(f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Adaptive Simpson over [lo, hi], forcing panel boundaries at the given
/// breakpoints (scale boundaries of the integrand). `tol` is an absolute
/// tolerance for the whole integral.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<f64> {
    let pts = panel_points(lo, hi, breakpoints);
    let n = (pts.len() - 1).max(1) as f64;
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += simpson_panel(&f, w[0], w[1], tol / n)?;
    }
    Ok(total)
}

fn panel_points(lo: f64, hi: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    pts.extend(breakpoints.iter().copied().filter(|&x| x > lo && x < hi));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// P_n(x) and P_n'(x) via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Panelized Gauss-Legendre: applies the fixed rule on every panel between
/// consecutive breakpoints, with one extra bisection level per panel for
/// resolution.
pub fn integrate_gauss<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    rule: &[(f64, f64)],
) -> f64 {
    let pts = panel_points(lo, hi, breakpoints);
    let mut total = 0.0;
    for w in pts.windows(2) {
        let m = 0.5 * (w[0] + w[1]);
        for &(a, b) in &[(w[0], m), (m, w[1])] {
            let c = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            let panel: f64 = rule.iter().map(|&(x, wt)| wt * f(c + h * x)).sum();
            total += h * panel;
        }
    }
    total
}
