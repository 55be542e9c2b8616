//! Compactly supported smooth bumps with vanishing moments, and their
//! assembly into a generalized (eps-indexed) mollifier.
//!
//! The construction starts from the normalized bump
//! psi0(x) = C exp(-1/(1-x^2)) on (-1,1) and lifts moment order one level at
//! a time: phi_n(x) = a_n phi_{n-1}(x) + b_n phi_{n-1}(x/eta_n) with the
//! closed-form coefficients a_n = -eta^n/(1-eta^n), b_n = 1/(eta - eta^{n+1}).
//! Each lift kills moment n while keeping mass 1 and an L1 budget
//! (1+eta^n)/(1-eta^n) times the previous one. The diagonal table then picks
//! eps-thresholds from the derivative seminorms M_n so that the piecewise
//! family eps -> phi_{n(eps)} has every fixed moment eventually zero.
//!
//! Every integral is computed by two independent quadrature routes (adaptive
//! Simpson and panelized 64-point Gauss-Legendre) and the routes must agree
//! before a value is trusted.

use crate::quad::{gauss_legendre, integrate_adaptive, integrate_gauss};
use crate::{Error, Result};

/// Cross-validation bound for the two quadrature routes.
pub const DUAL_ROUTE_TOL: f64 = 1e-11;
/// A moment counts as vanishing when its magnitude is below this.
pub const MOMENT_TOL: f64 = 1e-8;
/// Slack allowed on mass / L1 postconditions beyond the analytic bound.
pub const POST_TOL: f64 = 1e-9;
/// Geometric search grid for the scale eta: 2^-1 .. 2^-ETA_GRID_DEPTH.
const ETA_GRID_DEPTH: i32 = 200;
/// Points per scale in the derivative-sup meshes.
const SUP_MESH: usize = 513;

/// The normalized base bump psi0(x) = C exp(-1/(1-x^2)) on (-1,1).
#[derive(Debug, Clone)]
pub struct BumpBase {
    /// Normalization constant with integral 1; about 2.25228.
    pub c: f64,
}

impl BumpBase {
    /// Computes C by dual-route quadrature to the given absolute tolerance.
    pub fn build(quad_tol: f64) -> Result<BumpBase> {
        let raw = |x: f64| {
            let t = 1.0 - x * x;
            if t <= 0.0 { 0.0 } else { (-1.0 / t).exp() }
        };
        let s = integrate_adaptive(raw, -1.0, 1.0, &[0.0], quad_tol)?;
        let rule = gauss_legendre(64);
        let g = integrate_gauss(raw, -1.0, 1.0, &[0.0], &rule);
        if (s - g).abs() > DUAL_ROUTE_TOL {
            return Err(Error::QuadratureFailure(format!(
                "routes disagree on the base mass: {s} vs {g}"
            )));
        }
        Ok(BumpBase { c: 1.0 / s })
    }

    /// psi0(x).
    pub fn eval(&self, x: f64) -> f64 {
        let t = 1.0 - x * x;
        if t <= 0.0 {
            0.0
        } else {
            self.c * (-1.0 / t).exp()
        }
    }

    /// Numerator polynomials P_j of psi0^(j) = P_j/(1-x^2)^{2j} * psi0,
    /// indexed 0..=max_order. P_0 = 1 and
    /// P_{j+1} = P_j'(1-x^2)^2 + (4j x (1-x^2) - 2x) P_j.
    pub fn deriv_polys(max_order: u32) -> Result<Vec<Vec<f64>>> {
        let q2 = vec![1.0, 0.0, -2.0, 0.0, 1.0]; // (1-x^2)^2
        let mut polys: Vec<Vec<f64>> = vec![vec![1.0]];
        for j in 0..max_order {
            let p = &polys[j as usize];
            // 4j x (1-x^2) - 2x = (4j-2) x - 4j x^3.
            let mult = vec![0.0, 4.0 * j as f64 - 2.0, 0.0, -4.0 * j as f64];
            let next = poly_add(&poly_mul(&poly_deriv(p), &q2), &poly_mul(&mult, p));
            if next.iter().any(|c| !c.is_finite()) {
                return Err(Error::DerivativeOverflow(j + 1));
            }
            polys.push(next);
        }
        Ok(polys)
    }

    /// psi0^(j)(x), evaluated through the closed-form recurrence. The rational
    /// prefactor and the exponential are combined in the log domain so the
    /// pole of P_j/(1-x^2)^{2j} at the support edge is tamed by exp(-1/t).
    pub fn eval_deriv(&self, poly_j: &[f64], j: u32, x: f64) -> f64 {
        let t = 1.0 - x * x;
        if t <= 0.0 {
            return 0.0;
        }
        let p = poly_eval(poly_j, x);
        if p == 0.0 {
            return 0.0;
        }
        self.c * p * (-2.0 * j as f64 * t.ln() - 1.0 / t).exp()
    }
}

/// One lift level of the moment recursion.
#[derive(Debug, Clone)]
pub struct Level {
    /// Moment order killed at this level (1-based).
    pub n: u32,
    pub eta: f64,
    pub a: f64,
    pub b: f64,
    /// Measured L1 norm of phi_n after the lift.
    pub l1: f64,
    /// Budget delta_n this level was allowed.
    pub budget: f64,
}

/// Bump with vanishing moments 1..order, represented per level and flattened
/// to a scale-indexed sum of base bumps for evaluation.
#[derive(Debug, Clone)]
pub struct MollifierTree {
    pub base: BumpBase,
    pub levels: Vec<Level>,
    /// Quadrature tolerance all verifications were run with.
    pub quad_tol: f64,
    /// prefix_terms[n] = flattened terms (coef, lambda) of phi_n, sorted by
    /// lambda descending: phi_n(x) = sum coef * psi0(x/lambda). Unrolling the
    /// two-branch recursion; terms with equal scale are merged.
    prefix_terms: Vec<Vec<(f64, f64)>>,
    /// Measured L1 of the base (exactly 1 by normalization, kept measured).
    pub l1_base: f64,
}

/// One row of a moment table: value from the adaptive route, and the
/// disagreement of the two routes as an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct MomentEntry {
    pub k: u32,
    pub value: f64,
    pub error: f64,
}

impl MollifierTree {
    /// Number of vanishing-moment levels.
    pub fn order(&self) -> u32 {
        self.levels.len() as u32
    }

    /// Flattened terms of phi_n.
    pub fn terms(&self, n: u32) -> &[(f64, f64)] {
        &self.prefix_terms[n as usize]
    }

    /// phi_n(x).
    pub fn eval_at_order(&self, n: u32, x: f64) -> f64 {
        let ax = x.abs();
        let mut s = 0.0;
        for &(c, lam) in self.terms(n) {
            if lam <= ax {
                break; // terms are sorted by scale; the rest vanish at x
            }
            s += c * self.base.eval(x / lam);
        }
        s
    }

    /// phi_order(x).
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_at_order(self.order(), x)
    }

    /// phi_n^(j)(x) given the numerator polynomial for order j.
    pub fn eval_deriv_at_order(&self, n: u32, poly_j: &[f64], j: u32, x: f64) -> f64 {
        let ax = x.abs();
        let mut s = 0.0;
        for &(c, lam) in self.terms(n) {
            if lam <= ax {
                break;
            }
            s += c * lam.powi(-(j as i32)) * self.base.eval_deriv(poly_j, j, x / lam);
        }
        s
    }

    /// Distinct scale boundaries of phi_n, as quadrature breakpoints
    /// (+/- every scale, plus 0).
    pub fn breakpoints(&self, n: u32) -> Vec<f64> {
        let mut pts = vec![0.0];
        for &(_, lam) in self.terms(n) {
            pts.push(lam);
            pts.push(-lam);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Integral of weight(x) * phi_n(x) over [-1,1] by both routes; errors if
    /// the routes disagree beyond `DUAL_ROUTE_TOL`.
    pub fn dual_integral<F: Fn(f64) -> f64>(&self, n: u32, weight: F) -> Result<(f64, f64)> {
        let bps = self.breakpoints(n);
        let s = integrate_adaptive(
            |x| weight(x) * self.eval_at_order(n, x),
            -1.0,
            1.0,
            &bps,
            self.quad_tol,
        )?;
        let rule = gauss_legendre(64);
        let g = integrate_gauss(
            |x| weight(x) * self.eval_at_order(n, x),
            -1.0,
            1.0,
            &bps,
            &rule,
        );
        if (s - g).abs() > DUAL_ROUTE_TOL {
            return Err(Error::QuadratureFailure(format!(
                "routes disagree at order {n}: {s} vs {g}"
            )));
        }
        Ok((s, g))
    }

    /// k-th moment of phi_n (adaptive route, dual-validated).
    pub fn moment(&self, n: u32, k: u32) -> Result<f64> {
        Ok(self.dual_integral(n, |x| x.powi(k as i32))?.0)
    }

    /// L1 norm of phi_n (dual-validated).
    pub fn l1_norm(&self, n: u32) -> Result<f64> {
        l1_dual(self, n)
    }

    /// Moments 0..=k_max of the full-order bump with error estimates.
    pub fn moment_report(&self, k_max: u32) -> Result<Vec<MomentEntry>> {
        let n = self.order();
        let mut out = Vec::with_capacity(k_max as usize + 1);
        for k in 0..=k_max {
            let (s, g) = self.dual_integral(n, |x| x.powi(k as i32))?;
            out.push(MomentEntry { k, value: s, error: (s - g).abs() });
        }
        Ok(out)
    }
}

/// Integral of |phi_n| by both routes. |phi_n| has kinks at the zero
/// crossings of phi_n, so those roots are located first and added to the
/// panel breakpoints; each panel is then smooth and the two routes must
/// agree to the usual bound.
fn l1_dual(tree: &MollifierTree, n: u32) -> Result<f64> {
    let mut bps = tree.breakpoints(n);
    let roots = sign_change_roots(|x| tree.eval_at_order(n, x), &bps);
    bps.extend(roots);
    let s = integrate_adaptive(
        |x| tree.eval_at_order(n, x).abs(),
        -1.0,
        1.0,
        &bps,
        tree.quad_tol,
    )?;
    let rule = gauss_legendre(64);
    let g = integrate_gauss(|x| tree.eval_at_order(n, x).abs(), -1.0, 1.0, &bps, &rule);
    if (s - g).abs() > DUAL_ROUTE_TOL {
        return Err(Error::QuadratureFailure(format!(
            "routes disagree on L1 at order {n}: {s} vs {g}"
        )));
    }
    Ok(s)
}

/// Zero crossings of f between consecutive breakpoints, by a sign scan
/// followed by bisection. Tangential zeros without a sign change do not
/// create kinks in |f| and are ignored.
fn sign_change_roots<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64]) -> Vec<f64> {
    const SCAN: usize = 64;
    let mut pts: Vec<f64> = breakpoints.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut roots = Vec::new();
    for w in pts.windows(2) {
        for i in 0..SCAN {
            let mut lo = w[0] + (w[1] - w[0]) * i as f64 / SCAN as f64;
            let mut hi = w[0] + (w[1] - w[0]) * (i + 1) as f64 / SCAN as f64;
            let (mut flo, fhi) = (f(lo), f(hi));
            if flo == 0.0 || fhi == 0.0 || flo.signum() == fhi.signum() {
                continue;
            }
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 || hi - lo < f64::EPSILON * lo.abs().max(hi.abs()) {
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    roots
}

/// Order-0 tree: just the normalized base bump.
pub fn build_base(quad_tol: f64) -> Result<MollifierTree> {
    let base = BumpBase::build(quad_tol)?;
    let tree = MollifierTree {
        base,
        levels: Vec::new(),
        quad_tol,
        prefix_terms: vec![vec![(1.0, 1.0)]],
        l1_base: 1.0,
    };
    let l1 = l1_dual(&tree, 0)?;
    let mass = tree.moment(0, 0)?;
    if (mass - 1.0).abs() > POST_TOL || (l1 - 1.0).abs() > POST_TOL {
        return Err(Error::QuadratureFailure(format!(
            "base normalization off: mass {mass}, L1 {l1}"
        )));
    }
    Ok(MollifierTree { l1_base: l1, ..tree })
}

/// Adds one lift level: chooses the largest grid scale eta meeting the L1
/// budget, kills moment n = order+1 with the closed-form coefficients, and
/// verifies mass, moments and the L1 bound by dual quadrature.
pub fn lift_order(tree: &MollifierTree, delta_target: f64) -> Result<MollifierTree> {
    let n = tree.order() + 1;

    // Preconditions: previous moments vanish and the L1 budget has headroom.
    for k in 1..n {
        let m = tree.moment(n - 1, k)?;
        if m.abs() > MOMENT_TOL {
            return Err(Error::PreconditionMomentFailure { level: n, k, value: m });
        }
    }
    let l1_prev = if n == 1 { tree.l1_base } else { tree.levels.last().unwrap().l1 };
    if l1_prev > 1.0 + delta_target / 2.0 + POST_TOL {
        return Err(Error::BudgetInfeasible);
    }

    // Largest eta = 2^-j with (1+eta^n)/(1-eta^n) * (1+delta/2) <= 1+delta.
    let eta = (1..=ETA_GRID_DEPTH)
        .map(|j| 2f64.powi(-j))
        .find(|&eta| {
            let en = eta.powi(n as i32);
            (1.0 + en) / (1.0 - en) * (1.0 + delta_target / 2.0) <= 1.0 + delta_target
        })
        .ok_or(Error::BudgetInfeasible)?;
    let en = eta.powi(n as i32);
    let a = -en / (1.0 - en);
    let b = 1.0 / (eta - en * eta);

    // Flatten: phi_n = a phi_{n-1}(x) + b phi_{n-1}(x/eta).
    let prev = tree.terms(n - 1);
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity(2 * prev.len());
    for &(c, lam) in prev {
        terms.push((a * c, lam));
        terms.push((b * c, eta * lam));
    }
    terms.sort_by(|p, q| q.1.total_cmp(&p.1));
    // Scales are products of powers of two, so equal scales merge exactly.
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(terms.len());
    for (c, lam) in terms {
        match merged.last_mut() {
            Some(last) if last.1 == lam => last.0 += c,
            _ => merged.push((c, lam)),
        }
    }

    let mut next = tree.clone();
    next.levels.push(Level { n, eta, a, b, l1: f64::NAN, budget: delta_target });
    next.prefix_terms.push(merged);

    // Postconditions, all via dual-route quadrature.
    let mass = next.moment(n, 0)?;
    if (mass - 1.0).abs() > POST_TOL {
        return Err(Error::QuadratureFailure(format!(
            "mass postcondition failed at level {n}: {mass}"
        )));
    }
    for k in 1..=n {
        let m = next.moment(n, k)?;
        if m.abs() > MOMENT_TOL {
            return Err(Error::QuadratureFailure(format!(
                "moment {k} did not vanish at level {n}: {m:e}"
            )));
        }
    }
    let l1 = l1_dual(&next, n)?;
    if l1 > 1.0 + delta_target + POST_TOL {
        return Err(Error::QuadratureFailure(format!(
            "L1 budget exceeded at level {n}: {l1} > 1 + {delta_target}"
        )));
    }
    next.levels.last_mut().unwrap().l1 = l1;
    Ok(next)
}

/// Builds a bump with vanishing moments 1..=order and L1 norm at most
/// 1 + delta, allocating per-level budgets delta * 2^(n - order).
pub fn build_vanishing(order: u32, delta: f64, quad_tol: f64) -> Result<MollifierTree> {
    if delta <= 0.0 {
        return Err(Error::Syntax("delta must be positive".into()));
    }
    let mut tree = build_base(quad_tol)?;
    for n in 1..=order {
        let budget = delta * 2f64.powi(n as i32 - order as i32);
        tree = lift_order(&tree, budget)?;
    }
    Ok(tree)
}

/// One diagonal row: derivative seminorm and eps-threshold for order n.
#[derive(Debug, Clone, Copy)]
pub struct DiagonalRow {
    pub n: u32,
    /// M_n = max_{j<=n} sup_{|x|<=1} |phi_n^(j)(x)|.
    pub m_n: f64,
    /// eps_n = min(eps_{n-1}/2, 1/M_n); the assembled family uses phi_n on
    /// (eps_{n+1}, eps_n].
    pub eps_n: f64,
}

/// Grid verification that a fixed moment vanishes past its threshold.
#[derive(Debug, Clone, Copy)]
pub struct MomentCheck {
    /// Moment index being checked.
    pub m: u32,
    /// Grid level; eps = 2^-k.
    pub k: u32,
    /// Order n with eps in (eps_{n+1}, eps_n] — the bump in force at eps.
    pub n_used: u32,
    pub value: f64,
    pub ok: bool,
}

/// The assembled generalized mollifier: thresholds plus grid moment checks.
#[derive(Debug, Clone)]
pub struct DiagonalTable {
    pub rows: Vec<DiagonalRow>,
    pub checks: Vec<MomentCheck>,
    pub all_ok: bool,
}

impl DiagonalTable {
    /// Order in force at eps: the largest n with eps <= eps_n.
    pub fn order_at(&self, eps: f64) -> u32 {
        self.rows
            .iter()
            .rev()
            .find(|r| eps <= r.eps_n)
            .map_or(0, |r| r.n)
    }
}

/// Estimates the seminorms M_n = p_n(phi_n) on fine meshes, fixes the
/// strictly decreasing thresholds eps_n = min(eps_{n-1}/2, 1/M_n), and
/// verifies on the grid eps_k = 2^-k (k_min..=k_max) that each fixed moment
/// m vanishes for every grid eps <= eps_m. Thresholds below the finest grid
/// point leave nothing to check; the rows still report them.
pub fn assemble_generalized(
    tree: &MollifierTree,
    k_min: u32,
    k_max: u32,
) -> Result<DiagonalTable> {
    let order = tree.order();
    let polys = BumpBase::deriv_polys(order)?;
    let mut rows: Vec<DiagonalRow> = Vec::with_capacity(order as usize + 1);
    for n in 0..=order {
        let mut m_n = 0.0f64;
        for (j, poly) in polys.iter().enumerate().take(n as usize + 1) {
            let sup = deriv_sup(tree, n, poly, j as u32)?;
            m_n = m_n.max(sup);
        }
        let cap = if n == 0 { 0.5 } else { rows[n as usize - 1].eps_n / 2.0 };
        let eps_n = cap.min(1.0 / m_n);
        rows.push(DiagonalRow { n, m_n, eps_n });
    }

    // Cache dual-validated moments per (order, moment index) pair.
    let mut cache: Vec<Vec<Option<f64>>> =
        vec![vec![None; order as usize + 1]; order as usize + 1];
    let mut checks = Vec::new();
    let mut all_ok = true;
    for m in 1..=order {
        let eps_m = rows[m as usize].eps_n;
        for k in k_min..=k_max {
            let eps = 2f64.powi(-(k as i32));
            if eps > eps_m {
                continue;
            }
            let n_used = rows
                .iter()
                .rev()
                .find(|r| eps <= r.eps_n)
                .map_or(0, |r| r.n);
            let slot = &mut cache[n_used as usize][m as usize];
            let value = match *slot {
                Some(v) => v,
                None => {
                    let v = tree.moment(n_used, m)?;
                    *slot = Some(v);
                    v
                }
            };
            let ok = value.abs() <= MOMENT_TOL;
            all_ok &= ok;
            checks.push(MomentCheck { m, k, n_used, value, ok });
        }
    }
    Ok(DiagonalTable { rows, checks, all_ok })
}

/// sup over [-1,1] of |phi_n^(j)| on a union of meshes, one per scale of
/// phi_n plus a global one. All phi_n are even, so meshing [0,1] suffices.
fn deriv_sup(tree: &MollifierTree, n: u32, poly_j: &[f64], j: u32) -> Result<f64> {
    let mut sup = 0.0f64;
    let mut scales: Vec<f64> = tree.terms(n).iter().map(|t| t.1).collect();
    scales.push(1.0);
    scales.dedup();
    for lam in scales {
        for i in 0..SUP_MESH {
            let x = lam * i as f64 / (SUP_MESH - 1) as f64;
            let v = tree.eval_deriv_at_order(n, poly_j, j, x).abs();
            if !v.is_finite() {
                return Err(Error::DerivativeOverflow(j));
            }
            sup = sup.max(v);
        }
    }
    Ok(sup)
}

/// d-dimensional tensor bump psi_d(x) = (sqrt d)^d prod_i phi(x_i sqrt d),
/// supported in the Euclidean unit ball with unit mass.
#[derive(Debug, Clone)]
pub struct TensorMollifier<'a> {
    pub tree: &'a MollifierTree,
    pub dim: usize,
}

pub fn tensorize(tree: &MollifierTree, dim: usize) -> Result<TensorMollifier<'_>> {
    if dim == 0 {
        return Err(Error::Syntax("dimension must be at least 1".into()));
    }
    Ok(TensorMollifier { tree, dim })
}

impl TensorMollifier<'_> {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: x.len() });
        }
        let s = (self.dim as f64).sqrt();
        let mut v = s.powi(self.dim as i32);
        for &xi in x {
            v *= self.tree.eval(xi * s);
            if v == 0.0 {
                return Ok(0.0);
            }
        }
        Ok(v)
    }

    /// Per-coordinate support half-width: 1/sqrt(d). The support cube
    /// [-1/sqrt d, 1/sqrt d]^d sits inside the Euclidean unit ball.
    pub fn half_width(&self) -> f64 {
        1.0 / (self.dim as f64).sqrt()
    }

    /// Mixed moment int x^pow psi_d dx by tensor-product Gauss-Legendre,
    /// one panelized 64-point pass per coordinate.
    pub fn moment_gauss(&self, pow: &[u32]) -> Result<f64> {
        if pow.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: pow.len() });
        }
        let s = (self.dim as f64).sqrt();
        let rule = gauss_legendre(64);
        let bps: Vec<f64> = self
            .tree
            .breakpoints(self.tree.order())
            .iter()
            .map(|b| b / s)
            .collect();
        let h = self.half_width();
        let mut total = s.powi(self.dim as i32);
        // The integrand factors coordinatewise, so the tensor quadrature is a
        // product of one-dimensional panelized sums.
        for &p in pow {
            let f = |x: f64| x.powi(p as i32) * self.tree.eval(x * s);
            total *= integrate_gauss(f, -h, h, &bps, &rule);
        }
        Ok(total)
    }

    /// Total mass by the product route; the one-dimensional dual-validated
    /// mass is the independent cross-check.
    pub fn mass(&self) -> Result<f64> {
        self.moment_gauss(&vec![0; self.dim])
    }
}

/// Polynomial helpers on dense coefficient vectors (index = power).
fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn poly_deriv(p: &[f64]) -> Vec<f64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_add(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len().max(q.len())];
    for (i, &a) in p.iter().enumerate() {
        out[i] += a;
    }
    for (i, &b) in q.iter().enumerate() {
        out[i] += b;
    }
    while out.last() == Some(&0.0) {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn base_normalization_and_shape() {
        let tree = build_base(TOL).unwrap();
        let c = tree.base.c;
        assert!((c - 2.25228).abs() < 1e-4);
        assert!((c * 0.443994 - 1.0).abs() < 1e-5);
        assert!((tree.base.eval(0.0) - c * (-1.0f64).exp()).abs() < 1e-14);
        assert_eq!(tree.base.eval(1.0), 0.0);
        assert_eq!(tree.base.eval(-1.0), 0.0);
        assert_eq!(tree.base.eval(1.5), 0.0);
        assert!((tree.moment(0, 0).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn closed_form_coefficients_at_half() {
        // n = 1, eta = 1/2: a = -eta/(1-eta) = -1, b = 1/(eta - eta^2) = 4.
        let (n, eta) = (1, 0.5f64);
        let en = eta.powi(n);
        let a = -en / (1.0 - en);
        let b = 1.0 / (eta - en * eta);
        assert_eq!(a, -1.0);
        assert_eq!(b, 4.0);
    }

    #[test]
    fn level_identities_hold() {
        let tree = build_vanishing(4, 0.5, TOL).unwrap();
        for lvl in &tree.levels {
            let n = lvl.n as i32;
            assert!((lvl.a + lvl.b * lvl.eta - 1.0).abs() <= 1e-14);
            assert!((lvl.a + lvl.b * lvl.eta.powi(n + 1)).abs() <= 1e-14);
        }
    }

    #[test]
    fn vanishing_moments_and_budget() {
        let tree = build_vanishing(4, 0.5, TOL).unwrap();
        assert!((tree.moment(4, 0).unwrap() - 1.0).abs() < 1e-9);
        for k in 1..=4 {
            assert!(tree.moment(4, k).unwrap().abs() <= 1e-9, "moment {k}");
        }
        let l1 = tree.levels.last().unwrap().l1;
        assert!(l1 <= 1.5 + 1e-9, "L1 = {l1}");
        // Monotone budget: each lift multiplies L1 by at most the level factor.
        let mut prev = tree.l1_base;
        for lvl in &tree.levels {
            let en = lvl.eta.powi(lvl.n as i32);
            assert!(lvl.l1 <= (1.0 + en) / (1.0 - en) * prev + 1e-9);
            prev = lvl.l1;
        }
    }

    #[test]
    fn odd_moments_vanish_by_parity() {
        let tree = build_vanishing(4, 0.5, TOL).unwrap();
        // Parity alone kills odd moments far below the generic tolerance.
        assert!(tree.moment(4, 5).unwrap().abs() < 1e-12);
        // The first even moment past the order is genuinely nonzero.
        assert!(tree.moment(4, 6).unwrap().abs() > 1e-10);
    }

    #[test]
    fn support_stays_in_unit_interval() {
        let tree = build_vanishing(3, 0.5, TOL).unwrap();
        for &x in &[1.0, -1.0, 1.0001, -2.0, 5.0] {
            assert_eq!(tree.eval(x), 0.0);
        }
        assert!(tree.eval(0.0) != 0.0);
        // Every flattened scale is at most 1.
        assert!(tree.terms(3).iter().all(|&(_, lam)| lam <= 1.0));
    }

    #[test]
    fn moment_report_routes_agree() {
        let tree = build_vanishing(3, 0.5, TOL).unwrap();
        let report = tree.moment_report(4).unwrap();
        assert_eq!(report.len(), 5);
        assert!((report[0].value - 1.0).abs() < 1e-9);
        for e in &report {
            assert!(e.error <= DUAL_ROUTE_TOL, "k={} err={:e}", e.k, e.error);
        }
    }

    #[test]
    fn derivative_recurrence_matches_finite_differences() {
        let base = BumpBase::build(TOL).unwrap();
        let polys = BumpBase::deriv_polys(2).unwrap();
        // P_1 = -2x.
        assert_eq!(polys[1], vec![0.0, -2.0]);
        let h = 1e-6;
        for &x in &[0.0, 0.3, -0.5, 0.8] {
            let fd = (base.eval(x + h) - base.eval(x - h)) / (2.0 * h);
            let cf = base.eval_deriv(&polys[1], 1, x);
            assert!((fd - cf).abs() < 1e-6 * (1.0 + cf.abs()), "x={x}");
            let fd2 = (base.eval(x + h) - 2.0 * base.eval(x) + base.eval(x - h)) / (h * h);
            let cf2 = base.eval_deriv(&polys[2], 2, x);
            assert!((fd2 - cf2).abs() < 1e-2 * (1.0 + cf2.abs()), "x={x}");
        }
    }

    #[test]
    fn diagonal_thresholds_decrease_and_checks_pass() {
        let tree = build_vanishing(3, 0.5, TOL).unwrap();
        let table = assemble_generalized(&tree, 2, 48).unwrap();
        assert_eq!(table.rows.len(), 4);
        for w in table.rows.windows(2) {
            assert!(w[1].eps_n < w[0].eps_n);
            assert!(w[1].m_n >= w[0].m_n);
        }
        assert!(table.all_ok);
        // The first threshold is checkable on the default grid.
        assert!(table.checks.iter().any(|c| c.m == 1));
        for c in &table.checks {
            assert!(c.n_used >= c.m);
        }
        // Coarse eps uses low order, fine eps uses higher order.
        assert_eq!(table.order_at(0.4), 0);
        assert!(table.order_at(table.rows[1].eps_n) >= 1);
    }

    #[test]
    fn precondition_failure_reports_moment() {
        // Corrupt a level-2 tree so its second moment no longer vanishes
        // (every building block is even, so odd moments cannot be used to
        // trip the check), then ask for level 3.
        let mut tree = build_base(TOL).unwrap();
        tree = lift_order(&tree, 0.25).unwrap();
        tree = lift_order(&tree, 0.5).unwrap();
        tree.prefix_terms[2][0].0 *= 1.5;
        match lift_order(&tree, 0.5) {
            Err(Error::PreconditionMomentFailure { level: 3, k: 2, .. }) => {}
            other => panic!("expected moment precondition failure, got {other:?}"),
        }
    }

    #[test]
    fn tensor_product_mass_and_moments_factor() {
        let tree = build_vanishing(2, 0.5, TOL).unwrap();
        let psi2 = tensorize(&tree, 2).unwrap();
        let mass = psi2.mass().unwrap();
        assert!((mass - 1.0).abs() < 1e-9, "mass = {mass}");
        // Moments factor: m_(i,j) = d^{-(i+j)/2} m_i m_j.
        let m2 = tree.moment(2, 2).unwrap();
        let got = psi2.moment_gauss(&[2, 0]).unwrap();
        assert!((got - m2 / 2.0).abs() < 1e-9);
        let mixed = psi2.moment_gauss(&[2, 2]).unwrap();
        assert!((mixed - m2 * m2 / 4.0).abs() < 1e-9);
        // Support: zero outside the unit ball.
        let h = psi2.half_width();
        assert_eq!(psi2.eval(&[h * 1.01, 0.0]).unwrap(), 0.0);
        assert!(psi2.eval(&[0.0, 0.0]).unwrap() > 0.0);
        // d = 1 reduces to the plain bump.
        let psi1 = tensorize(&tree, 1).unwrap();
        let v = psi1.eval(&[0.3]).unwrap();
        assert!((v - tree.eval(0.3)).abs() < 1e-14);
    }
}
