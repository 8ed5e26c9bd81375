//! One-polymer ratios on the infinite D-regular tree with homogeneous
//! fugacity: the stable branch of α = 1 − ρ/α^{D−1}, its critical point
//! ρ* = (D−1)^{D−1}/D^D with α(ρ*) = (D−1)/D, and the derivative blow-up
//! at the boundary.

use crate::error::{Error, Result};

/// ρ* = (D−1)^{D−1} / D^D.
pub fn rho_star(degree: usize) -> Result<f64> {
    if degree < 2 {
        return Err(Error::OutOfRange(format!(
            "degree must be >= 2, got {degree}"
        )));
    }
    let d = degree as f64;
    Ok((d - 1.0).powi(degree as i32 - 1) / d.powi(degree as i32))
}

/// The stable fixed point α(ρ) of α = 1 − ρ/α^{D−1}: the branch through
/// α(0) = 1, i.e. the root of α^D − α^{D−1} + ρ on [(D−1)/D, 1].
pub fn alpha(degree: usize, rho: f64) -> Result<f64> {
    let rs = rho_star(degree)?;
    if !(0.0..=rs + 1e-15).contains(&rho) {
        return Err(Error::OutOfRange(format!(
            "rho = {rho} outside [0, rho* = {rs}]"
        )));
    }
    let critical = (degree as f64 - 1.0) / degree as f64;
    // At the critical point the root is a double root; floating-point
    // evaluation of f cannot locate it better than sqrt(eps), so the known
    // closed-form value is returned directly.
    if (rho - rs).abs() <= 4.0 * f64::EPSILON * rs {
        return Ok(critical);
    }
    let d = degree as i32;
    let f = |a: f64| a.powi(d) - a.powi(d - 1) + rho;
    let fp = |a: f64| (d as f64) * a.powi(d - 1) - (d as f64 - 1.0) * a.powi(d - 2);
    let mut lo = critical;
    let mut hi = 1.0;
    // f is increasing on [lo, hi] with f(lo) = rho - rho* <= 0 <= rho = f(hi).
    let mut a = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fa = f(a);
        if fa > 0.0 {
            hi = a;
        } else {
            lo = a;
        }
        let da = fp(a);
        let newton = a - fa / da;
        a = if da.abs() > 1e-300 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-17 {
            break;
        }
    }
    Ok(a)
}

/// |α − (1 − ρ/α^{D−1})|.
pub fn fixpoint_residual(degree: usize, rho: f64, a: f64) -> f64 {
    (a - (1.0 - rho / a.powi(degree as i32 - 1))).abs()
}

/// The pair (α(ρ), ρ*) for a D-regular tree.
pub fn homogeneous_tree(degree: usize, rho: f64) -> Result<(f64, f64)> {
    Ok((alpha(degree, rho)?, rho_star(degree)?))
}

/// Central finite-difference derivative dα/dρ.
pub fn derivative_fd(degree: usize, rho: f64, h: f64) -> Result<f64> {
    let up = alpha(degree, (rho + h).min(rho_star(degree)?))?;
    let down = alpha(degree, rho - h)?;
    Ok((up - down) / ((rho + h).min(rho_star(degree)?) - (rho - h)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_at_zero_is_one() {
        for d in 2..=6 {
            assert!((alpha(d, 0.0).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn critical_values() {
        assert!((rho_star(3).unwrap() - 4.0 / 27.0).abs() < 1e-16);
        assert!((rho_star(2).unwrap() - 0.25).abs() < 1e-16);
        for d in 2..=6 {
            let rs = rho_star(d).unwrap();
            let a = alpha(d, rs).unwrap();
            let expected = (d as f64 - 1.0) / d as f64;
            assert!((a - expected).abs() < 1e-12, "d={d}: {a} vs {expected}");
        }
    }

    #[test]
    fn quadratic_branch_matches_closed_form() {
        // D = 2: α = (1 + sqrt(1 - 4ρ)) / 2.
        for &rho in &[0.0, 0.1, 0.2, 0.24] {
            let a = alpha(2, rho).unwrap();
            let closed = 0.5 * (1.0 + (1.0 - 4.0 * rho).sqrt());
            assert!((a - closed).abs() < 1e-13);
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(alpha(3, 0.2).is_err());
        assert!(rho_star(1).is_err());
    }

    #[test]
    fn combined_entry_point() {
        let (a, rs) = homogeneous_tree(3, 0.0).unwrap();
        assert!((a - 1.0).abs() < 1e-14);
        assert!((rs - 4.0 / 27.0).abs() < 1e-16);
    }
}
