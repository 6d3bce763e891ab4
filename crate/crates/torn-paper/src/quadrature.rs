//! Adaptive Simpson quadrature on finite intervals.
//!
//! The capacity integrals run over `[theta, infinity)`; callers truncate the
//! upper limit with an analytic tail bound and integrate the remainder here.
//! The rule subdivides until the local Richardson error estimate drops below
//! the per-interval tolerance, and reports a diagnostic error instead of a
//! silently wrong value when an interval refuses to converge.

use crate::error::{Error, Result};

/// Absolute tolerance used by the capacity routines.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Deepest bisection level before giving up on an interval.
const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Returns 0 for an empty interval (`b <= a`). Fails with a `Numeric` error
/// carrying the offending subinterval when the recursion depth is exhausted,
/// or when the integrand produces a non-finite value.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::parameter(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::parameter(format!("tolerance must be positive, got {tol}")));
    }
    if b <= a {
        return Ok(0.0);
    }
    let fa = eval(&f, a)?;
    let fb = eval(&f, b)?;
    let m = 0.5 * (a + b);
    let fm = eval(&f, m)?;
    let whole = simpson(a, b, fa, fm, fb);
    refine(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::numeric(format!("integrand returned {y} at x = {x}")))
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
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
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // Standard Richardson criterion: |S_fine - S_coarse| <= 15 tol implies
    // the extrapolated value is within tol of the true integral.
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::numeric(format!(
            "adaptive Simpson did not converge on [{a}, {b}]: \
             estimate {:.6e}, residual {:.3e}, local tolerance {:.3e}",
            left + right,
            delta.abs(),
            tol
        )));
    }
    let half = 0.5 * tol;
    Ok(refine(f, a, m, fa, flm, fm, left, half, depth - 1)?
        + refine(f, m, b, fm, frm, fb, right, half, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_tail() {
        let v = integrate(|x| (-x).exp(), 0.0, 40.0, 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn oscillatory() {
        let v = integrate(f64::sin, 0.0, std::f64::consts::PI, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(integrate(|x| x, 2.0, 2.0, 1e-9).unwrap(), 0.0);
        assert_eq!(integrate(|x| x, 3.0, 2.0, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let err = integrate(|x| 1.0 / x, 0.0, 1.0, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Numeric(_)));
    }

    #[test]
    fn divergent_singularity_reports_diagnostics() {
        // Integrable but steep enough that the depth budget runs out before
        // the local tolerance is met near the singularity.
        let err = integrate(|x| (x - 0.3).abs().powf(-0.97), 0.0, 1.0, 1e-12).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("did not converge"), "unexpected message: {msg}");
    }
}
