//! Dense symmetric eigensolvers.
//!
//! Two independent routes: cyclic Jacobi rotations (small matrices, and
//! whenever eigenvectors are needed) and Householder tridiagonalization
//! followed by implicit QL (eigenvalues only, large matrices).

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm at which Jacobi stops.
pub const JACOBI_TOLERANCE: f64 = 1e-10;
/// Sweep cap for Jacobi.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Above this order, eigenvalue-only solves go through the tridiagonal route.
pub const JACOBI_ORDER_LIMIT: usize = 256;

const QL_MAX_ITERATIONS: usize = 60;

/// Square matrix in row-major storage. Only symmetric contents are
/// meaningful to the solvers in this module.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }
}

/// Eigenpairs from the Jacobi route; `vectors` holds eigenvector `k` in
/// column `k`, matching `values[k]`. Values are sorted ascending.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl EigenDecomposition {
    /// `‖A v_k − λ_k v_k‖₂` for every pair.
    pub fn residuals(&self, a: &DenseMatrix) -> Vec<f64> {
        let n = a.order();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        let av: f64 = (0..n).map(|j| a.get(i, j) * self.vectors.get(j, k)).sum();
                        let r = av - self.values[k] * self.vectors.get(i, k);
                        r * r
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    /// `Q Λ Qᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.values.len();
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let s = (0..n)
                    .map(|k| self.vectors.get(i, k) * self.values[k] * self.vectors.get(j, k))
                    .sum();
                out.set(i, j, s);
            }
        }
        out
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.order();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..i {
            s += 2.0 * a.get(i, j) * a.get(i, j);
        }
    }
    s.sqrt()
}

fn sort_pairs(values: Vec<f64>, vectors: DenseMatrix) -> EigenDecomposition {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut sorted = DenseMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            sorted.set(i, new, vectors.get(i, old));
        }
    }
    EigenDecomposition {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: sorted,
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
pub fn jacobi(a: &DenseMatrix) -> Result<EigenDecomposition> {
    let n = a.order();
    let mut a = a.clone();
    let mut v = DenseMatrix::zeros(n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= JACOBI_TOLERANCE {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigenNonConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                // tan of the rotation angle, smaller root for stability
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a.set(r, p, new_rp);
                    a.set(p, r, new_rp);
                    a.set(r, q, new_rq);
                    a.set(q, r, new_rq);
                }
                for r in 0..n {
                    let vrp = v.get(r, p);
                    let vrq = v.get(r, q);
                    v.set(r, p, vrp - s * (vrq + tau * vrp));
                    v.set(r, q, vrq + s * (vrp - tau * vrq));
                }
            }
        }
    }
    let values = (0..n).map(|i| a.get(i, i)).collect();
    Ok(sort_pairs(values, v))
}

struct Reflector {
    u: Vec<f64>,
    h: f64,
}

/// Householder vector annihilating `row[..len-1]` against `row[len-1]`.
/// Returns the resulting subdiagonal entry and the reflector, or `None`
/// when the row is already zero.
fn householder(row: &[f64]) -> (f64, Option<Reflector>) {
    let l = row.len() - 1;
    let scale: f64 = row.iter().map(|x| x.abs()).sum();
    if scale == 0.0 {
        return (0.0, None);
    }
    let mut u: Vec<f64> = row.iter().map(|x| x / scale).collect();
    let mut h: f64 = u.iter().map(|x| x * x).sum();
    let f = u[l];
    let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
    h -= f * g;
    u[l] = f - g;
    (scale * g, Some(Reflector { u, h }))
}

/// Adds row `j` of the lower triangle (`row = A[j][..=j]`) into `p = A u`.
#[inline]
fn accumulate_row(row: &[f64], u: &[f64], p: &mut [f64]) {
    let j = row.len() - 1;
    let uj = u[j];
    // four independent partial sums so the dot product vectorizes
    let mut acc = [0.0f64; 4];
    let (r4, rr) = row[..j].split_at(j - j % 4);
    let (u4, ur) = u[..j].split_at(j - j % 4);
    let (p4, pr) = p[..j].split_at_mut(j - j % 4);
    for ((rc, uc), pc) in r4.chunks_exact(4).zip(u4.chunks_exact(4)).zip(p4.chunks_exact_mut(4)) {
        for t in 0..4 {
            acc[t] += rc[t] * uc[t];
            pc[t] += rc[t] * uj;
        }
    }
    let mut dot = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for ((&ajk, &uk), pk) in rr.iter().zip(ur).zip(pr) {
        dot += ajk * uk;
        *pk += ajk * uj;
    }
    p[j] += dot + row[j] * uj;
}

/// `row -= u_j q + q_j u` on `row = A[j][..=j]`.
#[inline]
fn apply_row(row: &mut [f64], u: &[f64], q: &[f64]) {
    let j = row.len() - 1;
    let (fj, gj) = (u[j], q[j]);
    for ((ajk, &qk), &uk) in row.iter_mut().zip(&q[..=j]).zip(&u[..=j]) {
        *ajk -= fj * qk + gj * uk;
    }
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// Returns `(diagonal, subdiagonal)` with `subdiagonal[i]` coupling rows
/// `i` and `i + 1`. Only the lower triangle of the input is read.
///
/// Each pass over the trailing lower triangle applies the current
/// reflector and accumulates the matrix-vector product for the next one.
pub fn tridiagonalize(a: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.order();
    let mut a = a.clone();
    let mut off = vec![0.0; n];
    if n >= 3 {
        let row = |a: &DenseMatrix, i: usize, len: usize| a.data[i * n..i * n + len].to_vec();
        let (e, mut reflector) = householder(&row(&a, n - 1, n - 1));
        off[n - 1] = e;
        let mut p = vec![0.0; n - 1];
        if let Some(r) = &reflector {
            for j in 0..n - 1 {
                accumulate_row(&a.data[j * n..j * n + j + 1], &r.u, &mut p);
            }
        }
        for i in (2..n).rev() {
            // finish the reflector for row i: q = p/h − (uᵀp / 2h²) u
            let transform = reflector.take().map(|r| {
                let mut q: Vec<f64> = p[..i].iter().map(|x| x / r.h).collect();
                let k: f64 = q.iter().zip(&r.u).map(|(a, b)| a * b).sum::<f64>() / (2.0 * r.h);
                q.iter_mut().zip(&r.u).for_each(|(x, u)| *x -= k * u);
                (r.u, q)
            });
            let below = i - 1;
            if let Some((u, q)) = &transform {
                apply_row(&mut a.data[below * n..below * n + below + 1], u, q);
            }
            if below >= 2 {
                let (e, next) = householder(&a.data[below * n..below * n + below]);
                off[below] = e;
                p[..below].iter_mut().for_each(|x| *x = 0.0);
                for j in 0..below {
                    let row = &mut a.data[j * n..j * n + j + 1];
                    if let Some((u, q)) = &transform {
                        apply_row(row, u, q);
                    }
                    if let Some(r) = &next {
                        accumulate_row(row, &r.u, &mut p);
                    }
                }
                reflector = next;
            } else {
                if let Some((u, q)) = &transform {
                    apply_row(&mut a.data[..1], u, q);
                }
                off[1] = a.get(1, 0);
            }
        }
    } else if n == 2 {
        off[1] = a.get(1, 0);
    }
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    let sub = if n > 0 { off[1..].to_vec() } else { Vec::new() };
    (diag, sub)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts. Returned unsorted.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, sub: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&sub[..n.saturating_sub(1)]);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == QL_MAX_ITERATIONS {
                return Err(Error::EigenNonConvergence {
                    sweeps: iter,
                    off_norm: e[l].abs(),
                });
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

/// Sorted eigenvalues of a symmetric matrix, choosing the solver by order.
pub fn symmetric_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    let mut values = if a.order() <= JACOBI_ORDER_LIMIT {
        jacobi(a)?.values
    } else {
        let (d, e) = tridiagonalize(a);
        tridiagonal_eigenvalues(d, &e)?
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}
