//! Quadrature rules used by the cross-checking oracles.
//!
//! Gauss rules are generated by the Golub-Welsch eigenvalue method: nodes are
//! eigenvalues of the Jacobi matrix of the orthogonal-polynomial recurrence,
//! weights come from the first components of the normalized eigenvectors. An
//! n-point rule integrates polynomials of degree 2n-1 exactly, which is what
//! makes the moment and truncation cross-checks sharp rather than approximate.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Nodes and weights for the weight function e^{-t^2} on the real line.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let beta: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(&beta, std::f64::consts::PI.sqrt())
}

/// Nodes and weights for the weight function 1 on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let beta: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    golub_welsch(&beta, 2.0)
}

/// Jacobi-matrix eigendecomposition for a symmetric three-term recurrence
/// with zero diagonal; `mu0` is the total mass of the weight function.
fn golub_welsch(beta: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = beta.len() + 1;
    let mut jacobi = DMatrix::zeros(n, n);
    for (k, &b) in beta.iter().enumerate() {
        jacobi[(k, k + 1)] = b;
        jacobi[(k + 1, k)] = b;
    }
    let eigen = jacobi.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));
    let nodes = order.iter().map(|&i| eigen.eigenvalues[i]).collect();
    let weights = order
        .iter()
        .map(|&i| {
            let first = eigen.eigenvectors[(0, i)];
            mu0 * first * first
        })
        .collect();
    (nodes, weights)
}

/// Adaptive Simpson integration on [a, b] to absolute tolerance `tol`.
///
/// Each panel is accepted when the Richardson estimate of its error is below
/// its share of the tolerance; accepted panels include the extrapolation term.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite(format!("integrand at {x} is {y}")))
        }
    };
    let fa = eval(a)?;
    let m = 0.5 * (a + b);
    let fm = eval(m)?;
    let fb = eval(b)?;
    let whole = simpson_panel(fa, fm, fb, b - a);
    simpson_rec(&eval, a, b, fa, fm, fb, whole, tol, 48)
}

fn simpson_panel(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
    width / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    eval: &impl Fn(f64) -> Result<f64>,
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
    let flm = eval(lm)?;
    let frm = eval(rm)?;
    let left = simpson_panel(fa, flm, fm, m - a);
    let right = simpson_panel(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    let half_tol = 0.5 * tol;
    Ok(simpson_rec(eval, a, m, fa, flm, fm, left, half_tol, depth - 1)?
        + simpson_rec(eval, m, b, fm, frm, fb, right, half_tol, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hermite_rule_reproduces_low_moments() {
        let (nodes, weights) = gauss_hermite(12);
        let total: f64 = weights.iter().sum();
        assert!((total - PI.sqrt()).abs() < 1e-13);
        let second: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(t, w)| w * t * t)
            .sum();
        assert!((second - PI.sqrt() / 2.0).abs() < 1e-13);
        // Degree-22 monomial is still exact for a 12-point rule:
        // \int t^22 e^{-t^2} = Gamma(23/2) = (21!!/2^11) sqrt(pi).
        let m22: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(t, w)| w * t.powi(22))
            .sum();
        let exact = (1..=21u64)
            .step_by(2)
            .map(|k| k as f64)
            .product::<f64>()
            / 2f64.powi(11)
            * PI.sqrt();
        assert!((m22 - exact).abs() / exact < 1e-12);
    }

    #[test]
    fn legendre_rule_is_exact_on_polynomials() {
        let (nodes, weights) = gauss_legendre(8);
        let total: f64 = weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        let quartic: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(4))
            .sum();
        assert!((quartic - 0.4).abs() < 1e-14);
    }

    #[test]
    fn adaptive_simpson_gaussian_tail() {
        let value = adaptive_simpson(|x| (-x * x).exp(), 0.0, 8.0, 1e-13).unwrap();
        assert!((value - PI.sqrt() / 2.0).abs() < 1e-11);
    }

    #[test]
    fn adaptive_simpson_rejects_non_finite_integrand() {
        let res = adaptive_simpson(|x| 1.0 / x, 0.0, 1.0, 1e-10);
        assert!(matches!(res, Err(Error::NonFinite(_))));
    }
}
