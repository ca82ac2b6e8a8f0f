//! Local optimizers on group manifolds.
//!
//! Both optimizers move in Lie-algebra coordinates and retract onto the
//! group with the polar projection: a step `δ` at `g` produces the trial
//! point `project(g + (Σ δ_i B_i) g)` for the algebra basis `B_i`.
//!
//! `steepest_descent` is the decider's workhorse: backtracking Armijo line
//! search with fixed shrink factor, stopping on a gradient threshold, an
//! iteration cap, or a target value. `gauss_newton` is used by the
//! normalizer search, where the objective is a smooth sum of squares and
//! quadratic local convergence pays off.

use crate::group::{project_to_group, Group, GroupElement};
use crate::linalg::{cr, CMat, RMat, RVec};

pub struct DescentParams {
    pub max_iters: usize,
    pub grad_tol: f64,
    pub armijo: f64,
    pub shrink: f64,
    /// Stop as soon as the value drops below this.
    pub target: f64,
}

impl Default for DescentParams {
    fn default() -> Self {
        DescentParams {
            max_iters: 500,
            grad_tol: 1e-12,
            armijo: 1e-4,
            shrink: 0.5,
            target: 0.0,
        }
    }
}

pub struct DescentOutcome {
    pub point: GroupElement,
    pub value: f64,
    pub iters: usize,
}

fn step(group: &Group, g: &CMat, direction: &RVec, s: f64) -> Option<CMat> {
    let mut x = CMat::zeros(group.ambient_size, group.ambient_size);
    for (i, b) in group.algebra_basis.iter().enumerate() {
        x += b * cr(direction[i] * s);
    }
    let trial = g + x * g;
    project_to_group(group, &trial).ok().map(|e| e.matrix)
}

/// Steepest descent in algebra coordinates with projection retraction and
/// backtracking Armijo line search.
pub fn steepest_descent<V, Gr>(
    group: &Group,
    start: GroupElement,
    value: V,
    gradient: Gr,
    params: &DescentParams,
) -> DescentOutcome
where
    V: Fn(&CMat) -> f64,
    Gr: Fn(&CMat) -> RVec,
{
    let mut g = start.matrix;
    let mut f = value(&g);
    let mut iters = 0;
    let gram_inv = group.gram_inverse();
    // Last accepted coordinate step and metric gradient, for the
    // Barzilai-Borwein estimate of the next initial step length. Plain
    // Armijo backtracking from a fixed step zigzags on these quadratic-like
    // objectives (the weak sufficient-decrease constant accepts
    // near-stationary oscillation); the BB length breaks the cycle.
    let mut prev: Option<(RVec, RVec)> = None;
    for _ in 0..params.max_iters {
        if f <= params.target {
            break;
        }
        iters += 1;
        let grad = gradient(&g);
        // The gradient closure returns the coordinate differential; the
        // steepest-descent direction in a non-orthonormal basis is its image
        // under the inverse Gram matrix, and the slope along it is
        // grad^T G^{-1} grad.
        let metric_grad = gram_inv * &grad;
        let slope = grad.dot(&metric_grad);
        if slope.sqrt() < params.grad_tol {
            break;
        }
        let dir = -&metric_grad;
        let s_init = match &prev {
            Some((dx, h_prev)) => {
                let dh = &metric_grad - h_prev;
                let den = dx.dot(&dh);
                if den > 1e-300 {
                    (dx.dot(dx) / den).clamp(1e-8, 1e2)
                } else {
                    1.0
                }
            }
            None => 1.0,
        };
        let mut s = s_init;
        let mut accepted = false;
        for _ in 0..60 {
            if let Some(trial) = step(group, &g, &dir, s) {
                let ft = value(&trial);
                if ft <= f - params.armijo * s * slope {
                    g = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            s *= params.shrink;
        }
        if !accepted {
            break; // line search exhausted: local minimum at resolution
        }
        prev = Some((&dir * s, metric_grad));
    }
    DescentOutcome {
        point: GroupElement::new_unchecked(group, g),
        value: f,
        iters,
    }
}

pub struct GaussNewtonParams {
    pub max_iters: usize,
    pub target: f64,
    pub lambda_init: f64,
}

impl Default for GaussNewtonParams {
    fn default() -> Self {
        GaussNewtonParams {
            max_iters: 80,
            target: 1e-14,
            lambda_init: 1e-3,
        }
    }
}

/// Levenberg-Marquardt damped Gauss-Newton for residual systems on the
/// group. `residual` returns the stacked residual vector, `jacobian` its
/// derivative along the algebra basis directions (columns).
pub fn gauss_newton<Rf, Jf>(
    group: &Group,
    start: GroupElement,
    residual: Rf,
    jacobian: Jf,
    params: &GaussNewtonParams,
) -> DescentOutcome
where
    Rf: Fn(&CMat) -> RVec,
    Jf: Fn(&CMat) -> RMat,
{
    let d = group.dim;
    let mut g = start.matrix;
    let mut r = residual(&g);
    let mut f = r.norm_squared();
    let mut lambda = params.lambda_init;
    let mut iters = 0;
    for _ in 0..params.max_iters {
        if f <= params.target {
            break;
        }
        iters += 1;
        let j = jacobian(&g);
        let jtj = j.transpose() * &j;
        let jtr = j.transpose() * &r;
        let mut improved = false;
        for _ in 0..12 {
            let damped = &jtj + RMat::identity(d, d) * lambda;
            let Some(delta) = damped.lu().solve(&(-&jtr)) else {
                lambda *= 10.0;
                continue;
            };
            if let Some(trial) = step(group, &g, &delta, 1.0) {
                let rt = residual(&trial);
                let ft = rt.norm_squared();
                if ft < f {
                    g = trial;
                    r = rt;
                    f = ft;
                    lambda = (lambda * 0.3).max(1e-12);
                    improved = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    DescentOutcome {
        point: GroupElement::new_unchecked(group, g),
        value: f,
        iters,
    }
}
