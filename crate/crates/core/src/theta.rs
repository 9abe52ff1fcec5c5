//! The quantum bound: the Lovász number `ϑ(G)`.
//!
//! Primal: maximize `⟨J, X⟩` over symmetric `X ⪰ 0` with `tr X = 1` and
//! `X_ij = 0` on every edge. Dual: minimize `λ_max(B)` over symmetric `B`
//! with ones on the diagonal and on every non-edge, free on edges.
//!
//! [`solve_theta`] runs ADMM on the split `X = Z`, `X` in the affine set and
//! `Z` in the PSD cone. Neither iterate is trusted as an answer: a feasible
//! primal point is rounded out of `Z` by [`certify_lower`], a dual matrix is
//! read off the scaled multiplier and evaluated by [`certify_upper`], and the
//! solve stops once the two certificates are within `tolerance`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::independence::greedy_lower_bound;
use crate::linalg::{self, Matrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ThetaConfig {
    /// Target width of the certified bracket (absolute).
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Initial ADMM penalty; adapted during the solve.
    pub step_parameter: f64,
    /// The penalty is doubled or halved when one residual exceeds the other by this factor.
    pub residual_balance_factor: f64,
    pub eig_tolerance: f64,
}

impl Default for ThetaConfig {
    fn default() -> Self {
        ThetaConfig {
            tolerance: 1e-4,
            max_iterations: 50_000,
            step_parameter: 1.0,
            residual_balance_factor: 10.0,
            eig_tolerance: 1e-10,
        }
    }
}

impl ThetaConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tolerance", self.tolerance),
            ("step_parameter", self.step_parameter),
            ("residual_balance_factor", self.residual_balance_factor),
            ("eig_tolerance", self.eig_tolerance),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::input(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::input("max_iterations must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaStatus {
    /// Closed form (edgeless or complete graph).
    Exact,
    Converged,
    /// Iteration limit hit with the bracket still wider than the tolerance.
    Unconverged,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThetaResult {
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub status: ThetaStatus,
    /// Feasible primal point whose objective is `lower_bound`.
    pub primal_matrix: Matrix,
    /// Dual-feasible matrix whose top eigenvalue is `upper_bound`.
    pub dual_certificate: Matrix,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

impl ThetaResult {
    pub fn converged(&self) -> bool {
        self.status != ThetaStatus::Unconverged
    }

    pub fn gap(&self) -> f64 {
        self.upper_bound - self.lower_bound
    }

    /// Edge entries of the dual certificate, keyed `(u, v)` with `u < v`.
    pub fn dual_edge_values(&self, g: &Graph) -> BTreeMap<(usize, usize), f64> {
        g.edges().into_iter().map(|(u, v)| ((u, v), self.dual_certificate[(u, v)])).collect()
    }
}

/// Rounds an arbitrary symmetric matrix to a feasible primal point and
/// returns its objective, a valid lower bound on `ϑ(G)`.
pub fn certify_lower(g: &Graph, x: &Matrix) -> Result<f64> {
    Ok(feasible_primal(g, x)?.0)
}

/// Zero the edge entries, rescale to unit trace, then shift by `μI` with
/// `μ = max(0, -λ_min)` and renormalize. The shift keeps edge entries at zero.
pub(crate) fn feasible_primal(g: &Graph, x: &Matrix) -> Result<(f64, Matrix)> {
    let n = g.n();
    if x.n() != n {
        return Err(Error::input(format!("matrix is {}x{}, graph has {n} vertices", x.n(), x.n())));
    }
    if !x.is_finite() {
        return Err(Error::input("matrix has non-finite entries"));
    }
    if x.max_asymmetry() > 1e-12 * x.max_abs().max(1.0) {
        return Err(Error::input("matrix is not symmetric"));
    }
    let mut y = x.clone();
    y.symmetrize();
    for (u, v) in g.edges() {
        y[(u, v)] = 0.0;
        y[(v, u)] = 0.0;
    }
    let tr = y.trace();
    if tr.is_nan() || tr <= 0.0 {
        return Err(Error::input(format!("trace {tr} cannot be normalized to one")));
    }
    for a in y.as_mut_slice() {
        *a /= tr;
    }
    let lmin = *linalg::eig_unchecked(&y).values.last().expect("n >= 1");
    let mu = (-lmin).max(0.0);
    if mu > 0.0 {
        for i in 0..n {
            y[(i, i)] += mu;
        }
        let scale = 1.0 + n as f64 * mu;
        for a in y.as_mut_slice() {
            *a /= scale;
        }
    }
    Ok((y.total(), y))
}

/// `λ_max(B)` for the dual matrix with the given edge entries: a valid upper
/// bound on `ϑ(G)` whatever the values are.
pub fn certify_upper(g: &Graph, edge_values: &BTreeMap<(usize, usize), f64>) -> Result<f64> {
    let n = g.n();
    let mut b = Matrix::filled(n, 1.0);
    for (&(u, v), &val) in edge_values {
        if u >= n || v >= n || u == v || !g.has_edge(u, v) {
            return Err(Error::input(format!("({u}, {v}) is not an edge")));
        }
        if !val.is_finite() {
            return Err(Error::input(format!("edge value for ({u}, {v}) is not finite")));
        }
        b[(u, v)] = val;
        b[(v, u)] = val;
    }
    // edges without a supplied value keep 1, which is still dual-feasible
    Ok(linalg::lambda_max(&b).0)
}

/// Dual matrix with ones off the edges and `source`'s entries on them.
fn dual_matrix(g: &Graph, edges: &[(usize, usize)], source: &Matrix) -> Matrix {
    let mut b = Matrix::filled(g.n(), 1.0);
    for &(u, v) in edges {
        let val = 0.5 * (source[(u, v)] + source[(v, u)]);
        b[(u, v)] = val;
        b[(v, u)] = val;
    }
    b
}

struct Best {
    lower: f64,
    primal: Matrix,
    upper: f64,
    dual: Matrix,
}

impl Best {
    fn offer_primal(&mut self, lower: f64, primal: Matrix) {
        if lower > self.lower {
            self.lower = lower;
            self.primal = primal;
        }
    }

    fn offer_dual(&mut self, upper: f64, dual: Matrix) {
        if upper < self.upper {
            self.upper = upper;
            self.dual = dual;
        }
    }
}

/// Iterations between certificate evaluations.
const CERTIFY_EVERY: usize = 50;
/// Iterations between penalty updates.
const BALANCE_EVERY: usize = 100;
/// Subgradient steps spent polishing the dual certificate at the end.
const POLISH_STEPS: usize = 40;

pub fn solve_theta(g: &Graph, cfg: &ThetaConfig) -> Result<ThetaResult> {
    cfg.validate()?;
    let n = g.n();
    if n == 0 {
        return Err(Error::input("graph has no vertices"));
    }
    if g.is_edgeless() {
        return Ok(exact(n as f64, Matrix::filled(n, 1.0 / n as f64), Matrix::filled(n, 1.0)));
    }
    if g.is_complete() {
        let primal = Matrix::diag(&vec![1.0 / n as f64; n]);
        return Ok(exact(1.0, primal, Matrix::identity(n)));
    }

    let edges = g.edges();
    let nf = n as f64;
    let mut rho = cfg.step_parameter;
    let mut z = Matrix::identity(n);
    for a in z.as_mut_slice() {
        *a /= nf;
    }
    let mut u = Matrix::zeros(n);
    let mut x = Matrix::zeros(n);
    let mut w = Matrix::zeros(n);

    // Any independent set S gives the feasible point 1_S 1_Sᵀ / |S| of value
    // |S|. It closes the bracket early when ϑ = α, where the iterates
    // approach a degenerate optimal face slowly.
    let set = greedy_lower_bound(g).witness_set;
    let k = set.len() as f64;
    let mut seed = Matrix::zeros(n);
    for &i in &set {
        for &j in &set {
            seed[(i, j)] = 1.0 / k;
        }
    }
    let (lower, primal) = feasible_primal(g, &seed)?;
    let mut best = Best { lower, primal, upper: f64::INFINITY, dual: Matrix::filled(n, 1.0) };
    let stop_residual = 1e-8 * nf;
    let mut iterations = 0;
    let (mut r_primal, mut r_dual) = (f64::INFINITY, f64::INFINITY);

    while iterations < cfg.max_iterations {
        iterations += 1;

        // X = projection of (Z - U + J/rho) onto {tr X = 1, X_ij = 0 on edges}
        let shift = 1.0 / rho;
        for ((xi, zi), ui) in x.as_mut_slice().iter_mut().zip(z.as_slice()).zip(u.as_slice()) {
            *xi = zi - ui + shift;
        }
        project_affine(&mut x, &edges);

        // Z = projection of (X + U) onto the PSD cone
        for ((wi, xi), ui) in w.as_mut_slice().iter_mut().zip(x.as_slice()).zip(u.as_slice()) {
            *wi = xi + ui;
        }
        let z_new = project_psd(&w);

        let (mut rp, mut rd) = (0.0, 0.0);
        for (((ui, xi), zn), zo) in
            u.as_mut_slice().iter_mut().zip(x.as_slice()).zip(z_new.as_slice()).zip(z.as_slice())
        {
            let diff = xi - zn;
            *ui += diff;
            rp += diff * diff;
            rd += (zn - zo) * (zn - zo);
        }
        z = z_new;
        r_primal = rp.sqrt();
        r_dual = rho * rd.sqrt();

        let small = r_primal <= stop_residual && r_dual <= stop_residual;
        if small || iterations % CERTIFY_EVERY == 0 || iterations == cfg.max_iterations {
            certify_iterate(g, &edges, &z, &u, rho, &mut best);
            if best.upper - best.lower <= cfg.tolerance {
                break;
            }
        }

        // residual balancing; U is the scaled multiplier, so it rescales with rho
        let mu = cfg.residual_balance_factor;
        if iterations % BALANCE_EVERY != 0 {
            continue;
        }
        if r_primal > mu * r_dual {
            rho *= 2.0;
            scale(&mut u, 0.5);
        } else if r_dual > mu * r_primal {
            rho *= 0.5;
            scale(&mut u, 2.0);
        }
    }

    if best.upper - best.lower > cfg.tolerance {
        polish_dual(&edges, &mut best);
    }
    // On graphs with ϑ = α both certificates can land on the optimum and
    // cross by rounding.
    if best.lower > best.upper {
        best.lower = best.upper;
    }
    let status =
        if best.upper - best.lower <= cfg.tolerance { ThetaStatus::Converged } else { ThetaStatus::Unconverged };
    Ok(ThetaResult {
        lower_bound: best.lower,
        upper_bound: best.upper,
        status,
        primal_matrix: best.primal,
        dual_certificate: best.dual,
        iterations,
        primal_residual: r_primal,
        dual_residual: r_dual,
    })
}

fn exact(value: f64, primal: Matrix, dual: Matrix) -> ThetaResult {
    ThetaResult {
        lower_bound: value,
        upper_bound: value,
        status: ThetaStatus::Exact,
        primal_matrix: primal,
        dual_certificate: dual,
        iterations: 0,
        primal_residual: 0.0,
        dual_residual: 0.0,
    }
}

fn certify_iterate(g: &Graph, edges: &[(usize, usize)], z: &Matrix, u: &Matrix, rho: f64, best: &mut Best) {
    if let Ok((lower, primal)) = feasible_primal(g, z) {
        best.offer_primal(lower, primal);
    }
    // the unscaled multiplier rho*U carries the dual edge entries
    let mut y = u.clone();
    scale(&mut y, rho);
    let b = dual_matrix(g, edges, &y);
    let upper = linalg::lambda_max(&b).0;
    best.offer_dual(upper, b);
}

/// Polyak subgradient steps on `λ_max(B)` over the edge entries, aiming at
/// the best lower bound.
fn polish_dual(edges: &[(usize, usize)], best: &mut Best) {
    if edges.is_empty() || !best.upper.is_finite() {
        return;
    }
    let mut b = best.dual.clone();
    for _ in 0..POLISH_STEPS {
        let (lam, v) = linalg::lambda_max(&b);
        best.offer_dual(lam, b.clone());
        let norm2: f64 = edges.iter().map(|&(i, j)| (2.0 * v[i] * v[j]).powi(2)).sum();
        if norm2 == 0.0 || lam - best.lower <= 0.0 {
            break;
        }
        let step = (lam - best.lower) / norm2;
        for &(i, j) in edges {
            let val = b[(i, j)] - step * 2.0 * v[i] * v[j];
            b[(i, j)] = val;
            b[(j, i)] = val;
        }
    }
}

/// Zero the edge entries, then fix the trace through the diagonal. The two
/// constraint sets touch disjoint entries, so this is the exact Euclidean
/// projection.
fn project_affine(x: &mut Matrix, edges: &[(usize, usize)]) {
    let n = x.n();
    x.symmetrize();
    for &(u, v) in edges {
        x[(u, v)] = 0.0;
        x[(v, u)] = 0.0;
    }
    let fix = (1.0 - x.trace()) / n as f64;
    for i in 0..n {
        x[(i, i)] += fix;
    }
}

/// Clip negative eigenvalues. Rebuilds from whichever side of the spectrum
/// has fewer terms.
fn project_psd(w: &Matrix) -> Matrix {
    let e = linalg::eig_unchecked(w);
    let positive = e.values.iter().filter(|&&l| l > 0.0).count();
    if positive <= e.values.len() / 2 {
        e.reconstruct(|l| l.max(0.0))
    } else {
        // W - Σ_{λ<0} λ v vᵀ
        let neg = e.reconstruct(|l| l.min(0.0));
        let mut z = w.sub(&neg);
        z.symmetrize();
        z
    }
}

fn scale(m: &mut Matrix, s: f64) {
    for a in m.as_mut_slice() {
        *a *= s;
    }
}
