//! Quantum realizations of a witness.
//!
//! An orthonormal representation assigns a unit vector to every vertex so
//! that adjacent (exclusive) vertices get orthogonal vectors. Measuring the
//! rank-one projectors onto those vectors in the handle state gives event
//! probabilities `P_i = ⟨handle, v_i⟩²`, and their sum is the quantum value
//! of the witness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, SubsetFamilySpec};
use crate::linalg;
use crate::theta::ThetaResult;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalRepresentation {
    pub dimension: usize,
    pub handle: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub probabilities: Vec<f64>,
    pub value: f64,
}

impl OrthonormalRepresentation {
    /// Builds the probabilities and value from vectors and handle.
    pub fn from_vectors(dimension: usize, handle: Vec<f64>, vectors: Vec<Vec<f64>>) -> Self {
        let probabilities: Vec<f64> = vectors.iter().map(|v| dot(&handle, v).powi(2)).collect();
        let value = probabilities.iter().sum();
        OrthonormalRepresentation { dimension, handle, vectors, probabilities, value }
    }

    /// Parses the JSON export and checks that every length agrees with `dimension`.
    pub fn from_json(text: &str) -> Result<Self> {
        let rep: OrthonormalRepresentation = serde_json::from_str(text)?;
        rep.check_shape()?;
        Ok(rep)
    }

    fn check_shape(&self) -> Result<()> {
        let d = self.dimension;
        if self.handle.len() != d {
            return Err(Error::input(format!("handle has length {}, dimension is {d}", self.handle.len())));
        }
        if let Some((i, v)) = self.vectors.iter().enumerate().find(|(_, v)| v.len() != d) {
            return Err(Error::input(format!("vector {i} has length {}, dimension is {d}", v.len())));
        }
        if self.probabilities.len() != self.vectors.len() {
            return Err(Error::input("one probability per vector is required"));
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Eigenvalues at or below this are dropped when factoring the primal matrix.
pub const RANK_CUTOFF: f64 = 1e-9;
/// Factor columns shorter than this become fresh axes.
const ZERO_COLUMN: f64 = 1e-9;
/// Edge overlaps above this after factoring trigger the repair pass.
const REPAIR_THRESHOLD: f64 = 1e-9;

/// Factors the certified primal matrix `X = VΛVᵀ` into columns
/// `b_i = (√Λ Vᵀ)_i`. Vertex vectors are the normalized columns and the
/// handle is the normalized column sum, so `X_ij = 0` on edges gives
/// orthogonality and the value is at least `⟨J, X⟩`.
///
/// Vertices that carry (numerically) no weight in `X` have a direction that
/// is mostly rounding noise. Those whose overlap with a neighbour exceeds
/// `1e-9` are re-aimed, in index order, at the part of the handle orthogonal
/// to all their neighbours' vectors; a vertex left with no room gets a
/// fresh axis.
pub fn extract_representation(g: &Graph, theta: &ThetaResult) -> Result<OrthonormalRepresentation> {
    let n = g.n();
    let x = &theta.primal_matrix;
    if x.n() != n {
        return Err(Error::input(format!("primal matrix is {}x{}, graph has {n} vertices", x.n(), x.n())));
    }
    if (x.trace() - 1.0).abs() > 1e-9 {
        return Err(Error::input(format!("primal matrix has trace {}", x.trace())));
    }
    if let Some((u, v)) = g.edges().into_iter().find(|&(u, v)| x[(u, v)] != 0.0 || x[(v, u)] != 0.0) {
        return Err(Error::input(format!("primal matrix is nonzero on edge ({u}, {v})")));
    }
    let eig = linalg::symmetric_eig(x)?;
    let lmin = *eig.values.last().expect("n >= 1");
    if lmin < -1e-9 {
        return Err(Error::input(format!("primal matrix is not PSD (λ_min = {lmin:e})")));
    }

    let kept: Vec<usize> = (0..n).filter(|&k| eig.values[k] > RANK_CUTOFF).collect();
    let rank = kept.len();
    let mut columns: Vec<Vec<f64>> =
        (0..n).map(|i| kept.iter().map(|&k| eig.values[k].sqrt() * eig.vectors[(k, i)]).collect()).collect();
    let mut sum = vec![0.0; rank];
    for b in &columns {
        for (s, x) in sum.iter_mut().zip(b) {
            *s += x;
        }
    }
    let sum_norm = norm(&sum);
    if sum_norm.is_nan() || sum_norm <= 0.0 {
        return Err(Error::input("primal matrix has zero objective; no handle"));
    }

    let zero: Vec<usize> = (0..n).filter(|&i| norm(&columns[i]) < ZERO_COLUMN).collect();
    let dimension = rank + zero.len();
    let mut handle: Vec<f64> = sum.iter().map(|s| s / sum_norm).collect();
    handle.resize(dimension, 0.0);
    let mut weight = vec![0.0; n];
    for (i, b) in columns.iter_mut().enumerate() {
        let len = norm(b);
        weight[i] = len;
        b.resize(dimension, 0.0);
        if len >= ZERO_COLUMN {
            for x in b.iter_mut() {
                *x /= len;
            }
        }
    }
    for (axis, &i) in zero.iter().enumerate() {
        columns[i][rank + axis] = 1.0;
    }

    let extra = repair(g, &mut columns, &mut handle, &weight);
    Ok(OrthonormalRepresentation::from_vectors(dimension + extra, handle, columns))
}

/// Returns the number of axes appended.
fn repair(g: &Graph, vectors: &mut [Vec<f64>], handle: &mut Vec<f64>, weight: &[f64]) -> usize {
    let n = g.n();
    let mut flagged = vec![false; n];
    let mut extra = 0;
    for (u, v) in g.edges() {
        if dot(&vectors[u], &vectors[v]).abs() > REPAIR_THRESHOLD {
            let lighter = if weight[v] < weight[u] { v } else { u };
            flagged[lighter] = true;
        }
    }
    for i in (0..n).filter(|&i| flagged[i]) {
        // orthonormal basis of the neighbours' span (modified Gram-Schmidt)
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for j in g.neighbors(i) {
            let mut w = vectors[j].clone();
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(&w, q);
                    w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
                }
            }
            let len = norm(&w);
            if len > 1e-12 {
                w.iter_mut().for_each(|a| *a /= len);
                basis.push(w);
            }
        }
        let mut target = handle.clone();
        let mut best = None;
        // try the handle first, then coordinate axes, for a direction with room left
        for candidate in 0..=target.len() {
            if candidate > 0 {
                target = vec![0.0; handle.len()];
                target[candidate - 1] = 1.0;
            }
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(&target, q);
                    target.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
                }
            }
            let len = norm(&target);
            if len > 1e-6 {
                target.iter_mut().for_each(|a| *a /= len);
                best = Some(target.clone());
                break;
            }
        }
        match best {
            Some(v) => vectors[i] = v,
            None => {
                for v in vectors.iter_mut() {
                    v.push(0.0);
                }
                handle.push(0.0);
                let d = handle.len();
                vectors[i] = vec![0.0; d];
                vectors[i][d - 1] = 1.0;
                extra += 1;
            }
        }
    }
    extra
}

/// The explicit `2q`-dimensional representation of `G(q, s)`.
///
/// Vertex `S` gets the vector with entry `a` on the coordinates in `S` and
/// `1` elsewhere, normalized, where `a` is the larger root of
/// `s·a² + 2(q−s)·a + s = 0`; two subsets meeting in exactly `s` elements are
/// then orthogonal. The handle is the uniform vector, and every vertex has
/// probability `(a+1)² / (2(a²+1))`. Real roots exist only for `q ≥ 2s`.
pub fn two_value_representation(spec: SubsetFamilySpec) -> Result<OrthonormalRepresentation> {
    spec.validate()?;
    let q = spec.q as f64;
    if spec.q < 2 * spec.s {
        return Err(Error::Unsupported(format!(
            "two-value construction needs q >= 2s (no real root for q={}, s={})",
            spec.q, spec.s
        )));
    }
    let a = two_value_root(spec.q, spec.s);
    let d = 2 * spec.q;
    let len = (q * a * a + q).sqrt();
    let vectors: Vec<Vec<f64>> = spec
        .subsets()
        .iter()
        .map(|mask| (0..d).map(|e| if mask >> e & 1 == 1 { a / len } else { 1.0 / len }).collect())
        .collect();
    let handle = vec![1.0 / (d as f64).sqrt(); d];
    Ok(OrthonormalRepresentation::from_vectors(d, handle, vectors))
}

/// Larger root of `s·a² + 2(q−s)·a + s = 0` (requires `q ≥ 2s`).
pub fn two_value_root(q: usize, s: usize) -> f64 {
    let (q, s) = (q as f64, s as f64);
    let half_b = q - s;
    let disc = (half_b * half_b - s * s).max(0.0);
    (-half_b + disc.sqrt()) / s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Largest `|‖v‖ − 1|` over the vertex vectors and the handle.
    pub max_norm_error: f64,
    /// Largest `|⟨v_i, v_j⟩|` over edges `ij`.
    pub max_edge_overlap: f64,
    /// Largest mismatch between a stored probability and `⟨h, v_i⟩²`, or its
    /// distance outside `[0, 1]`.
    pub max_probability_error: f64,
    /// `|value − Σ P_i|`.
    pub value_error: f64,
    pub recomputed_value: f64,
    pub passed: bool,
}

pub fn validate_representation(g: &Graph, rep: &OrthonormalRepresentation, tol: f64) -> Result<ValidationReport> {
    rep.check_shape()?;
    if rep.vectors.len() != g.n() {
        return Err(Error::input(format!(
            "representation has {} vectors, graph has {} vertices",
            rep.vectors.len(),
            g.n()
        )));
    }
    let max_norm_error =
        rep.vectors.iter().chain(std::iter::once(&rep.handle)).map(|v| (norm(v) - 1.0).abs()).fold(0.0, f64::max);
    let max_edge_overlap =
        g.edges().into_iter().map(|(u, v)| dot(&rep.vectors[u], &rep.vectors[v]).abs()).fold(0.0, f64::max);
    let mut max_probability_error = 0.0f64;
    for (v, &p) in rep.vectors.iter().zip(&rep.probabilities) {
        let exact = dot(&rep.handle, v).powi(2);
        let outside = (-p).max(p - 1.0).max(0.0);
        max_probability_error = max_probability_error.max((p - exact).abs()).max(outside);
    }
    let recomputed_value: f64 = rep.vectors.iter().map(|v| dot(&rep.handle, v).powi(2)).sum();
    let value_error = (rep.value - rep.probabilities.iter().sum::<f64>()).abs();
    let passed = [max_norm_error, max_edge_overlap, max_probability_error, value_error]
        .iter()
        .all(|e| e.is_finite() && *e <= tol);
    Ok(ValidationReport {
        max_norm_error,
        max_edge_overlap,
        max_probability_error,
        value_error,
        recomputed_value,
        passed,
    })
}
