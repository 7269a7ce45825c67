//! Damped Gauss-Newton (Levenberg-Marquardt) engine for the nonlinear fits.
//!
//! Residual-based interface: the caller supplies a closure writing the
//! residual vector for a parameter vector, plus per-parameter scales used
//! for finite-difference steps and convergence metrics. The Jacobian is
//! built by central differences, which keeps model code free of derivative
//! bookkeeping and makes the gradient consistency checks meaningful.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Relative step-size convergence threshold.
    pub xtol: f64,
    /// Relative cost-change convergence threshold.
    pub ftol: f64,
    pub lambda_init: f64,
    /// Relative finite-difference step for the Jacobian.
    pub fd_step: f64,
    /// Cap on |δ_j|/scale_j per iteration; oversized steps are shrunk.
    /// Keeps flat directions from launching parameters to infinity.
    pub max_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            xtol: 1e-9,
            ftol: 1e-12,
            lambda_init: 1e-3,
            fd_step: 1e-6,
            max_step: 10.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmReport {
    pub params: Vec<f64>,
    pub cost: f64,
    pub iterations: usize,
    /// Cost after each accepted step, for diagnostics on failure.
    pub cost_trace: Vec<f64>,
}

/// 0.5 * sum of squared residuals.
pub fn cost_of(residuals: &[f64]) -> f64 {
    0.5 * residuals.iter().map(|r| r * r).sum::<f64>()
}

/// Central-difference Jacobian of `f` at `x`. `scales[j]` sets the step for
/// parameter j: h_j = fd_step * max(|x_j|, scales[j]).
pub fn numeric_jacobian<F>(f: &F, x: &[f64], scales: &[f64], fd_step: f64) -> DMatrix<f64>
where
    F: Fn(&[f64], &mut Vec<f64>),
{
    let mut probe = x.to_vec();
    let mut r_plus = Vec::new();
    let mut r_minus = Vec::new();
    f(x, &mut r_plus);
    let m = r_plus.len();
    let n = x.len();
    let mut jac = DMatrix::zeros(m, n);
    for j in 0..n {
        let h = fd_step * x[j].abs().max(scales[j]);
        probe[j] = x[j] + h;
        f(&probe, &mut r_plus);
        probe[j] = x[j] - h;
        f(&probe, &mut r_minus);
        probe[j] = x[j];
        for i in 0..m {
            jac[(i, j)] = (r_plus[i] - r_minus[i]) / (2.0 * h);
        }
    }
    jac
}

/// Gradient of the half-sum-of-squares cost, J^T r.
pub fn cost_gradient<F>(f: &F, x: &[f64], scales: &[f64], fd_step: f64) -> Vec<f64>
where
    F: Fn(&[f64], &mut Vec<f64>),
{
    let mut r = Vec::new();
    f(x, &mut r);
    let jac = numeric_jacobian(f, x, scales, fd_step);
    let rv = DVector::from_column_slice(&r);
    (jac.transpose() * rv).iter().cloned().collect()
}

/// Minimize 0.5 ||f(x)||² starting at `x0`.
///
/// Marquardt scaling: the solve is (JᵀJ + λ diag(JᵀJ)) δ = −Jᵀr, so λ is
/// dimensionless relative to each parameter's own curvature.
pub fn levenberg_marquardt<F>(
    f: F,
    x0: &[f64],
    scales: &[f64],
    opts: &LmOptions,
) -> Result<LmReport>
where
    F: Fn(&[f64], &mut Vec<f64>),
{
    assert_eq!(x0.len(), scales.len(), "one scale per parameter");
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut residuals = Vec::new();
    f(&x, &mut residuals);
    if residuals.len() < n {
        return Err(Error::fit(format!(
            "underdetermined problem: {} residuals for {} parameters",
            residuals.len(),
            n
        )));
    }
    let mut cost = cost_of(&residuals);
    if !cost.is_finite() {
        return Err(Error::fit("initial residuals are not finite".to_string()));
    }
    let mut lambda = opts.lambda_init;
    let mut cost_trace = vec![cost];
    let mut slow_progress = 0usize;

    for iter in 1..=opts.max_iterations {
        let jac = numeric_jacobian(&f, &x, scales, opts.fd_step);
        let rv = DVector::from_column_slice(&residuals);
        let grad = jac.transpose() * &rv;
        let hess = jac.transpose() * &jac;

        let mut stepped = false;
        for _ in 0..40 {
            let mut damped = hess.clone();
            for j in 0..n {
                let d = hess[(j, j)];
                damped[(j, j)] = d + lambda * d.max(1e-30);
            }
            let mut delta = match damped.clone().cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => match damped.lu().solve(&(-&grad)) {
                    Some(sol) => sol,
                    None => {
                        lambda *= 10.0;
                        continue;
                    }
                },
            };
            let rel_step = delta
                .iter()
                .enumerate()
                .map(|(j, d)| d.abs() / x[j].abs().max(scales[j]))
                .fold(0.0f64, f64::max);
            if rel_step > opts.max_step {
                delta *= opts.max_step / rel_step;
            }
            let rel_step = rel_step.min(opts.max_step);
            let trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
            let mut trial_res = Vec::new();
            f(&trial, &mut trial_res);
            let trial_cost = cost_of(&trial_res);
            if trial_cost.is_finite() && trial_cost <= cost {
                let rel_drop = (cost - trial_cost) / cost.max(f64::MIN_POSITIVE);
                let lambda_used = lambda;
                x = trial;
                residuals = trial_res;
                cost = trial_cost;
                cost_trace.push(cost);
                lambda = (lambda * 0.25).max(1e-12);
                stepped = true;
                // Convergence: a genuine (near-Gauss-Newton) step that
                // moved nothing, or repeated steps that stopped reducing
                // the cost. A single heavily damped micro-step proves
                // nothing and does not terminate the loop.
                let tiny = rel_step < opts.xtol || rel_drop < opts.ftol;
                if tiny {
                    slow_progress += 1;
                } else {
                    slow_progress = 0;
                }
                if (lambda_used <= 1e-2 && tiny) || slow_progress >= 3 {
                    return Ok(LmReport {
                        params: x,
                        cost,
                        iterations: iter,
                        cost_trace,
                    });
                }
                break;
            }
            lambda *= 10.0;
        }
        if !stepped {
            // damping exhausted without an acceptable step: stationary point
            return Ok(LmReport {
                params: x,
                cost,
                iterations: iter,
                cost_trace,
            });
        }
    }
    Err(Error::Convergence {
        context: format!(
            "Levenberg-Marquardt exceeded {} iterations, cost trace tail {:?}",
            opts.max_iterations,
            &cost_trace[cost_trace.len().saturating_sub(4)..]
        ),
        residual: (2.0 * cost).sqrt(),
    })
}
