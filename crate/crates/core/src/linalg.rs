//! Dense symmetric matrices and their eigendecomposition.
//!
//! [`symmetric_eig`] reduces to tridiagonal form with Householder reflections
//! and then runs the implicit-shift QL iteration (the EISPACK `tred2`/`tql2`
//! pair). If QL fails to converge it falls back to cyclic Jacobi, which is
//! also exposed as [`jacobi_eig`] so tests have an independent route.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<f64>>", try_from = "Vec<Vec<f64>>")]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.data.chunks(m.n.max(1)).map(|r| r.to_vec()).take(m.n).collect()
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<f64>>) -> std::result::Result<Self, String> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err("matrix rows must all have length n".into());
        }
        Ok(Matrix { n, data: rows.concat() })
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Matrix {
    pub fn zeros(n: usize) -> Matrix {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn filled(n: usize, value: f64) -> Matrix {
        Matrix { n, data: vec![value; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Matrix {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn diag(values: &[f64]) -> Matrix {
        let mut m = Matrix::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Sum of all entries, i.e. `⟨J, M⟩`.
    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Replaces both off-diagonal triangles with their average.
    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let a = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = a;
                self[(j, i)] = a;
            }
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(other.row(k)) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }
}

/// Eigenvalues in descending order; row `k` of `vectors` is the unit
/// eigenvector for `values[k]`.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigen {
    /// `Σ_k f(λ_k) v_k v_kᵀ`, skipping terms where `f` returns zero.
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.values.len();
        let mut out = Matrix::zeros(n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w != 0.0 {
                add_rank_one(&mut out, w, self.vectors.row(k));
            }
        }
        mirror_upper(&mut out);
        out
    }
}

/// Adds `w·u·uᵀ` to the upper triangle of `m`.
pub(crate) fn add_rank_one(m: &mut Matrix, w: f64, u: &[f64]) {
    let n = m.n;
    for i in 0..n {
        let a = w * u[i];
        if a == 0.0 {
            continue;
        }
        let dst = &mut m.data[i * n + i..(i + 1) * n];
        for (d, b) in dst.iter_mut().zip(&u[i..]) {
            *d += a * b;
        }
    }
}

pub(crate) fn mirror_upper(m: &mut Matrix) {
    let n = m.n;
    for i in 0..n {
        for j in i + 1..n {
            m.data[j * n + i] = m.data[i * n + j];
        }
    }
}

const SYMMETRY_TOL: f64 = 1e-12;

fn check_symmetric(m: &Matrix) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::input("matrix has non-finite entries"));
    }
    let asym = m.max_asymmetry();
    if asym > SYMMETRY_TOL * m.max_abs().max(1.0) {
        return Err(Error::input(format!("matrix is not symmetric (max |M_ij - M_ji| = {asym:e})")));
    }
    Ok(())
}

/// Eigendecomposition of a symmetric matrix (Householder + implicit QL).
pub fn symmetric_eig(m: &Matrix) -> Result<Eigen> {
    check_symmetric(m)?;
    Ok(eig_unchecked(m))
}

pub(crate) fn eig_unchecked(m: &Matrix) -> Eigen {
    match tridiagonal_ql(m) {
        Some(e) => e,
        None => jacobi_unchecked(m),
    }
}

/// Largest eigenvalue only (still a full decomposition underneath).
pub(crate) fn lambda_max(m: &Matrix) -> (f64, Vec<f64>) {
    let e = eig_unchecked(m);
    (e.values[0], e.vectors.row(0).to_vec())
}

fn tridiagonal_ql(a: &Matrix) -> Option<Eigen> {
    let n = a.n;
    if n == 0 {
        return Some(Eigen { values: vec![], vectors: Matrix::zeros(0) });
    }
    // `w` stores V column-major: V[r][c] lives at w[c * n + r]. Since A is
    // symmetric, copying it row-major gives the same thing. Every inner loop
    // below then runs over contiguous memory, and at the end row c of `w` is
    // eigenvector c.
    let mut w = a.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let idx = |r: usize, c: usize| c * n + r;

    // Householder reduction to tridiagonal form
    for j in 0..n {
        d[j] = w[idx(n - 1, j)];
    }
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = w[idx(i - 1, j)];
                w[idx(i, j)] = 0.0;
                w[idx(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);
            for j in 0..i {
                f = d[j];
                w[idx(j, i)] = f;
                g = e[j] + w[idx(j, j)] * f;
                let col = &w[j * n..j * n + i];
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                let col = &mut w[j * n..j * n + i];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = w[idx(i - 1, j)];
                w[idx(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate the transformations
    for i in 0..n - 1 {
        w[idx(n - 1, i)] = w[idx(i, i)];
        w[idx(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = w[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let (lo, hi) = w.split_at_mut((i + 1) * n);
                let colj = &mut lo[j * n..j * n + i + 1];
                let coli1 = &hi[..i + 1];
                let g: f64 = coli1.iter().zip(colj.iter()).map(|(a, b)| a * b).sum();
                for (c, dk) in colj.iter_mut().zip(&d[..=i]) {
                    *c -= g * dk;
                }
            }
        }
        for k in 0..=i {
            w[idx(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = w[idx(n - 1, j)];
        w[idx(n - 1, j)] = 0.0;
    }
    w[idx(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;

    // implicit QL on the tridiagonal (d, e)
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    let max_iter = 60 * n.max(1);
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return None;
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in &mut d[l + 2..] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = w.split_at_mut((i + 1) * n);
                    let vi = &mut lo[i * n..];
                    let vi1 = &mut hi[..n];
                    for (a, b) in vi.iter_mut().zip(vi1.iter_mut()) {
                        let hb = *b;
                        *b = s * *a + c * hb;
                        *a = c * *a - s * hb;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    if !d.iter().all(|x| x.is_finite()) {
        return None;
    }
    Some(sorted(n, d, w))
}

fn sorted(n: usize, values: Vec<f64>, rows: Vec<f64>) -> Eigen {
    let mut order: Vec<usize> = (0..n).collect();
    // stable, so equal eigenvalues keep their computed order
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut vectors = Matrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.data[dst * n..(dst + 1) * n].copy_from_slice(&rows[src * n..(src + 1) * n]);
    }
    Eigen { values: order.iter().map(|&k| values[k]).collect(), vectors }
}

/// Cyclic Jacobi eigendecomposition. Slow (`O(n³)` per sweep) but simple;
/// used as a fallback and as a cross-check.
pub fn jacobi_eig(m: &Matrix) -> Result<Eigen> {
    check_symmetric(m)?;
    Ok(jacobi_unchecked(m))
}

fn jacobi_unchecked(m: &Matrix) -> Eigen {
    let n = m.n;
    let mut a = m.clone();
    a.symmetrize();
    // rows of `v` are the eigenvectors being accumulated
    let mut v = Matrix::identity(n);
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum();
        if off <= (f64::EPSILON * a.frobenius()).powi(2) || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vp = v[(p, k)];
                    let vq = v[(q, k)];
                    v[(p, k)] = c * vp - s * vq;
                    v[(q, k)] = s * vp + c * vq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)]).collect();
    sorted(n, values, v.data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    fn random_symmetric(n: usize, seed: u64) -> Matrix {
        let mut r = rng::seeded(seed);
        let mut m = Matrix::from_fn(n, |_, _| r.gen_range(-1.0..1.0));
        m.symmetrize();
        m
    }

    fn check_decomposition(m: &Matrix, e: &Eigen) {
        let n = m.n();
        let rec = e.reconstruct(|x| x);
        assert!(rec.sub(m).frobenius() <= 1e-10 * m.frobenius().max(1.0), "reconstruction");
        let gram = e.vectors.matmul(&e.vectors.transpose());
        assert!(gram.sub(&Matrix::identity(n)).max_abs() <= 1e-10, "orthonormality");
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]), "descending");
    }

    #[test]
    fn small_examples() {
        let e = symmetric_eig(&Matrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        let e = symmetric_eig(&Matrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        let e = symmetric_eig(&Matrix::filled(4, 1.0)).unwrap();
        assert!((e.values[0] - 4.0).abs() < 1e-12);
        assert!(e.values[1..].iter().all(|x| x.abs() < 1e-12));
        let e = symmetric_eig(&Matrix::filled(1, 2.5)).unwrap();
        assert_eq!(e.values, vec![2.5]);
    }

    #[test]
    fn rejects_asymmetric() {
        let mut m = Matrix::identity(3);
        m[(0, 1)] = 1e-6;
        assert!(matches!(symmetric_eig(&m), Err(Error::Input(_))));
        assert!(matches!(jacobi_eig(&m), Err(Error::Input(_))));
        m[(1, 0)] = 1e-6;
        assert!(symmetric_eig(&m).is_ok());
    }

    #[test]
    fn ql_agrees_with_jacobi() {
        for (n, seed) in [(2, 1), (5, 2), (17, 3), (40, 4), (64, 5), (65, 6)] {
            let m = random_symmetric(n, seed);
            let ql = symmetric_eig(&m).unwrap();
            let jac = jacobi_eig(&m).unwrap();
            check_decomposition(&m, &ql);
            check_decomposition(&m, &jac);
            for (a, b) in ql.values.iter().zip(&jac.values) {
                assert!((a - b).abs() < 1e-10, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn degenerate_and_low_rank() {
        // rank two, with a repeated zero eigenvalue of multiplicity n-2
        let n = 30;
        let u: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let v: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).cos()).collect();
        let m = Matrix::from_fn(n, |i, j| 3.0 * u[i] * u[j] - 2.0 * v[i] * v[j]);
        let e = symmetric_eig(&m).unwrap();
        check_decomposition(&m, &e);
        assert_eq!(e.values.iter().filter(|x| x.abs() > 1e-9).count(), 2);
    }

    #[test]
    fn deterministic() {
        let m = random_symmetric(33, 9);
        let a = symmetric_eig(&m).unwrap();
        let b = symmetric_eig(&m).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]
        #[test]
        fn reconstruction_holds(n in 1usize..30, seed: u64) {
            let m = random_symmetric(n, seed);
            check_decomposition(&m, &symmetric_eig(&m).unwrap());
        }
    }
}
