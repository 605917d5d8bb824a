//! Independent numerical routes used to cross-check the closed forms in
//! [`crate::constants`]: adaptive Simpson quadrature and grid-plus-golden-
//! section extremum search. Nothing here reuses the closed-form expressions it
//! is checking.

use crate::constants::unit_ball_volume;
use crate::error::{Error, Result};

/// Adaptive Simpson quadrature with Richardson-style acceptance.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
pub fn golden_section_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Coarse grid scan followed by golden-section refinement around the best
/// grid cell. Returns `(argmax, max)`.
pub fn grid_then_golden_max(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    grid: usize,
    tol: f64,
) -> (f64, f64) {
    let mut best_k = 0usize;
    let mut best = f64::NEG_INFINITY;
    for k in 0..=grid {
        let x = a + (b - a) * k as f64 / grid as f64;
        let v = f(x);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let lo = a + (b - a) * best_k.saturating_sub(1) as f64 / grid as f64;
    let hi = a + (b - a) * (best_k + 1).min(grid) as f64 / grid as f64;
    golden_section_max(f, lo, hi, tol)
}

/// Numerical route for the resolvent integral `int_R (xi^2 + eps)^{-1} dxi`:
/// adaptive quadrature on `(-X, X)` plus an asymptotic-series tail
/// correction `2 int_X^inf = 2/X (1 - eps/(3X^2) + eps^2/(5X^4) - ...)`.
pub fn kss_integral_quadrature(eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::invalid("quadrature oracle requires eps > 0"));
    }
    let root = eps.sqrt();
    let x_cut = 5e3 * root;
    let f = move |x: f64| 1.0 / (x * x + eps);
    let body = adaptive_simpson(&f, -x_cut, x_cut, 1e-12 / root);
    // sum the alternating series until terms stop mattering
    let mut tail_series = 0.0;
    let mut term = 1.0 / x_cut;
    let mut k = 0u32;
    loop {
        let contrib = term / (2.0 * k as f64 + 1.0);
        tail_series += if k % 2 == 0 { contrib } else { -contrib };
        term *= eps / (x_cut * x_cut);
        k += 1;
        if term / (2.0 * k as f64 + 1.0) < 1e-18 * tail_series.abs() || k > 30 {
            break;
        }
    }
    Ok(body + 2.0 * tail_series)
}

/// Numerical route for the Beta integral
/// `int_0^1 s^{a-1} (1-s)^b ds`, handling the integrable endpoint singularity
/// for `a < 1` by the substitution `s = u^{1/a}`.
pub fn beta_integral_quadrature(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b >= 0.0) {
        return Err(Error::invalid("beta quadrature requires a > 0, b >= 0"));
    }
    if a >= 1.0 {
        let f = move |s: f64| s.powf(a - 1.0) * (1.0 - s).max(0.0).powf(b);
        Ok(adaptive_simpson(&f, 0.0, 1.0, 1e-13))
    } else {
        // int_0^1 s^{a-1} g(s) ds = (1/a) int_0^1 g(u^{1/a}) du
        let f = move |u: f64| (1.0 - u.powf(1.0 / a)).max(0.0).powf(b);
        Ok(adaptive_simpson(&f, 0.0, 1.0, 1e-13) / a)
    }
}

/// Numerical supremum route for the weak norm of the resolvent symbol:
/// maximize `F(t)^{1/q}` with `F(t) = tau_d t^q ((2 pi t)^{-2} - eps)^{d/2}`
/// over `t in (0, eps^{-1/2}/(2 pi))`. Returns `(argmax, sup^{1/q})`.
pub fn weak_norm_sup_oracle(d: usize, q: f64, eps: f64) -> Result<(f64, f64)> {
    if d == 0 || !(q >= d as f64) || !(eps > 0.0) {
        return Err(Error::invalid("weak-norm oracle requires d >= 1, q >= d, eps > 0"));
    }
    let tau = unit_ball_volume(d)?;
    let df = d as f64;
    let two_pi = 2.0 * std::f64::consts::PI;
    let t_max = 1.0 / (eps.sqrt() * two_pi);
    let f = move |t: f64| {
        if t <= 0.0 || t >= t_max {
            return f64::NEG_INFINITY;
        }
        let inner = (two_pi * t).powi(-2) - eps;
        if inner <= 0.0 {
            return f64::NEG_INFINITY;
        }
        // maximize the logarithm for stability
        (tau.ln() + q * t.ln() + df / 2.0 * inner.ln()) / q
    };
    let (t_star, log_sup) = grid_then_golden_max(&f, t_max * 1e-9, t_max * (1.0 - 1e-9), 4000, t_max * 1e-13);
    Ok((t_star, log_sup.exp()))
}

/// Grid-plus-golden-section minimum of `t^{-gp} (1+t)^g` over `t > 0`,
/// scanned on a log grid. Returns `(argmin, min)`.
pub fn t_objective_grid_min(g: f64, gp: f64) -> Result<(f64, f64)> {
    if !(g > gp) || gp < 0.0 {
        return Err(Error::invalid("grid min requires 0 <= gp < g"));
    }
    let obj = move |log_t: f64| {
        let t = log_t.exp();
        -(t.powf(-gp) * (1.0 + t).powf(g))
    };
    let (log_t, neg_min) = grid_then_golden_max(&obj, -16.0, 16.0, 6000, 1e-10);
    Ok((log_t.exp(), -neg_min))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_on_polynomial_is_exact() {
        let f = |x: f64| 3.0 * x * x + 2.0 * x + 1.0;
        let v = adaptive_simpson(&f, -1.0, 2.0, 1e-14);
        // antiderivative x^3 + x^2 + x: (8+4+2) - (-1+1-1) = 15
        assert!((v - 15.0).abs() < 1e-12);
    }

    #[test]
    fn simpson_on_gaussianish() {
        let f = |x: f64| (-x * x).exp();
        let v = adaptive_simpson(&f, -8.0, 8.0, 1e-13);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let f = |x: f64| -(x - 0.7) * (x - 0.7);
        let (x, _) = golden_section_max(&f, 0.0, 2.0, 1e-12);
        assert!((x - 0.7).abs() < 1e-9);
    }

    #[test]
    fn kss_quadrature_matches_closed_form() {
        for eps in [0.1, 1.0, 10.0] {
            let ours = kss_integral_quadrature(eps).unwrap();
            let closed = crate::constants::kss_integral_check(eps).unwrap();
            assert!(
                ((ours - closed) / closed).abs() <= 1e-8,
                "eps={eps}: {ours} vs {closed}"
            );
        }
    }

    #[test]
    fn beta_quadrature_matches_gamma_ratio() {
        use crate::constants::gamma_function;
        for (a, b) in [(0.5, 1.5), (0.25, 2.0), (1.0, 0.5), (2.5, 3.0)] {
            let ours = beta_integral_quadrature(a, b).unwrap();
            let closed = gamma_function(a).unwrap() * gamma_function(b + 1.0).unwrap()
                / gamma_function(a + b + 1.0).unwrap();
            assert!(
                ((ours - closed) / closed).abs() <= 1e-8,
                "a={a} b={b}: {ours} vs {closed}"
            );
        }
    }

    #[test]
    fn weak_norm_oracle_matches_closed_form() {
        use crate::constants::{weak_norm_maximizer, weak_norm_u};
        for &(d, q) in &[(1usize, 3.0f64), (2, 4.0), (3, 6.0)] {
            for eps in [0.1, 1.0, 10.0] {
                let (t_star, sup) = weak_norm_sup_oracle(d, q, eps).unwrap();
                let closed = weak_norm_u(d, q, eps).unwrap();
                assert!(
                    ((sup - closed) / closed).abs() <= 1e-8,
                    "d={d} q={q} eps={eps}: {sup} vs {closed}"
                );
                let t_closed = weak_norm_maximizer(d, q, eps).unwrap();
                assert!(
                    ((t_star - t_closed) / t_closed).abs() <= 1e-6,
                    "maximizer d={d} q={q} eps={eps}: {t_star} vs {t_closed}"
                );
            }
        }
    }

    #[test]
    fn t_grid_min_matches_closed_form() {
        use crate::constants::t_optimum;
        for (g, gp) in [(1.0, 0.5), (2.0, 0.75), (3.0, 1.0)] {
            let (t, v) = t_objective_grid_min(g, gp).unwrap();
            let closed = t_optimum(g, gp).unwrap();
            assert!(((v - closed.inf_value) / closed.inf_value).abs() <= 1e-6);
            assert!(((t - closed.t_star) / closed.t_star).abs() <= 1e-4);
        }
    }
}
