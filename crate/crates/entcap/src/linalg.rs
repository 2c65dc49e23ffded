//! Small dense linear algebra used by the moment machinery: pivoted
//! symmetric elimination for PSD verdicts, LU determinants and solves, and
//! the implicit-shift QL eigensolver for symmetric tridiagonal (Jacobi)
//! matrices.
//!
//! Everything here works on tiny matrices (Hankel orders are single digits;
//! the Jacobi matrices reach a few thousand) so the implementations favour
//! clarity over blocking.

use crate::{Error, Result};

/// Dense symmetric matrix in row-major storage.
#[derive(Debug, Clone)]
pub(crate) struct SymMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl SymMatrix {
    #[cfg(test)]
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut data = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        SymMatrix { n, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn swap_sym(&mut self, p: usize, q: usize) {
        if p == q {
            return;
        }
        let n = self.n;
        for j in 0..n {
            self.data.swap(p * n + j, q * n + j);
        }
        for i in 0..n {
            self.data.swap(i * n + p, i * n + q);
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j) * x[j]).sum())
            .collect()
    }
}

/// Outcome of the pivoted symmetric elimination.
#[derive(Debug, Clone)]
pub(crate) struct PivotedFactor {
    /// Original matrix (kept for residual checks).
    original: SymMatrix,
    /// Factored working copy: strictly-lower part holds the multipliers of
    /// the first `rank` columns; the trailing block holds the Schur
    /// complement at the stopping point.
    factored: SymMatrix,
    /// `perm[k]` = original index moved into pivot position `k`.
    perm: Vec<usize>,
    /// Accepted pivots, all strictly greater than the tolerance.
    pub pivots: Vec<f64>,
    /// Number of accepted pivots.
    pub rank: usize,
    /// Most negative diagonal entry of the trailing block (0 when complete).
    pub trailing_min_diag: f64,
    /// Largest absolute entry of the trailing block (0 when complete).
    pub trailing_max_abs: f64,
}

/// Pivoted symmetric elimination with greedy max-diagonal pivoting.
///
/// Elimination proceeds while the largest remaining diagonal entry exceeds
/// `tol`. A positive semidefinite matrix that cannot be factored further
/// must have a (numerically) zero trailing block, which is what the PSD
/// verdict checks.
pub(crate) fn pivoted_factor(matrix: &SymMatrix, tol: f64) -> PivotedFactor {
    let n = matrix.n;
    let mut a = matrix.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::with_capacity(n);
    let mut rank = n;

    for k in 0..n {
        let (imax, dmax) = (k..n)
            .map(|i| (i, a.at(i, i)))
            .fold((k, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        if dmax <= tol {
            rank = k;
            break;
        }
        a.swap_sym(k, imax);
        perm.swap(k, imax);
        pivots.push(dmax);
        // Snapshot column k: the update must use the original entries, not
        // the multipliers written over them.
        let col: Vec<f64> = ((k + 1)..n).map(|i| a.at(i, k)).collect();
        for i in (k + 1)..n {
            let li = col[i - k - 1] / dmax;
            for j in (k + 1)..=i {
                *a.at_mut(i, j) -= li * col[j - k - 1];
            }
            *a.at_mut(i, k) = li;
        }
        // Keep the trailing block symmetric.
        for i in (k + 1)..n {
            for j in (i + 1)..n {
                *a.at_mut(i, j) = a.at(j, i);
            }
        }
    }

    let mut trailing_min_diag = 0.0_f64;
    let mut trailing_max_abs = 0.0_f64;
    for i in rank..n {
        trailing_min_diag = trailing_min_diag.min(a.at(i, i));
        for j in rank..n {
            trailing_max_abs = trailing_max_abs.max(a.at(i, j).abs());
        }
    }

    PivotedFactor {
        original: matrix.clone(),
        factored: a,
        perm,
        pivots,
        rank,
        trailing_min_diag,
        trailing_max_abs,
    }
}

impl PivotedFactor {
    /// True when the factorization completed with every pivot above `tol`.
    pub fn is_positive_definite(&self) -> bool {
        self.rank == self.original.n
    }

    /// True when the trailing block left after elimination is numerically
    /// zero, i.e. the matrix is positive semidefinite within `off_tol`.
    pub fn is_positive_semidefinite(&self, off_tol: f64) -> bool {
        self.is_positive_definite()
            || (self.trailing_min_diag >= -off_tol && self.trailing_max_abs <= off_tol)
    }

    /// Range-space solve of `A x = b` using the rank-`r` factors, with
    /// coordinates outside the pivoted range set to zero. Returns the
    /// solution together with the residual vector `b - A x`, which is
    /// (numerically) zero exactly when `b` lies in the range.
    pub fn range_solve(&self, b: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.original.n;
        let r = self.rank;
        // Permute b.
        let mut c: Vec<f64> = (0..n).map(|k| b[self.perm[k]]).collect();
        // Forward substitution with the unit-lower factor (first r columns).
        for i in 0..r {
            for k in 0..i.min(r) {
                c[i] -= self.factored.at(i, k) * c[k];
            }
        }
        // Diagonal solve.
        for (i, pivot) in self.pivots.iter().enumerate() {
            c[i] /= pivot;
        }
        // Back substitution with the transposed factor, free coordinates zero.
        let mut y = vec![0.0; n];
        for i in (0..r).rev() {
            let mut v = c[i];
            for k in (i + 1)..r {
                v -= self.factored.at(k, i) * y[k];
            }
            y[i] = v;
        }
        // Undo the permutation.
        let mut x = vec![0.0; n];
        for k in 0..n {
            x[self.perm[k]] = y[k];
        }
        let ax = self.original.matvec(&x);
        let residual = b.iter().zip(&ax).map(|(&rhs, &lhs)| rhs - lhs).collect();
        (x, residual)
    }
}

/// Determinant via LU with partial pivoting. Returns 0 for exactly
/// singular input; small matrices only.
pub(crate) fn determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut det = 1.0_f64;
    for k in 0..n {
        let (imax, pmax) = (k..n)
            .map(|i| (i, a[i][k].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax == 0.0 {
            return 0.0;
        }
        if imax != k {
            a.swap(k, imax);
            det = -det;
        }
        det *= a[k][k];
        for i in (k + 1)..n {
            let l = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= l * a[k][j];
            }
        }
    }
    det
}

/// Solve a dense linear system by Gaussian elimination with partial
/// pivoting. Errors when a pivot falls below machine-scale of the matrix.
pub(crate) fn solve(rows: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut x: Vec<f64> = b.to_vec();
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1.0);
    for k in 0..n {
        let (imax, pmax) = (k..n)
            .map(|i| (i, a[i][k].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax <= f64::EPSILON * scale * n as f64 {
            return Err(Error::Numerical(format!(
                "singular linear system (pivot {pmax:.3e} at column {k})"
            )));
        }
        a.swap(k, imax);
        x.swap(k, imax);
        for i in (k + 1)..n {
            let l = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= l * a[k][j];
            }
            x[i] -= l * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut v = x[i];
        for j in (i + 1)..n {
            v -= a[i][j] * x[j];
        }
        x[i] = v / a[i][i];
    }
    Ok(x)
}

/// Eigenvalues of a symmetric tridiagonal matrix together with the first
/// component of each (normalized) eigenvector, by the implicit-shift QL
/// algorithm. Rotations are accumulated only against the first row of the
/// identity, which is all Gauss quadrature weights need; this keeps the
/// solve at O(n^2).
///
/// `diag` has length n; `off` has length n-1 with `off[i]` coupling rows
/// i and i+1. Results are sorted by ascending eigenvalue.
pub(crate) fn tridiag_eigen_first_row(diag: &[f64], off: &[f64]) -> Result<Vec<(f64, f64)>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Look for a split point with a negligible off-diagonal.
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
            iter += 1;
            if iter > 64 {
                return Err(Error::Numerical(
                    "tridiagonal QL failed to converge".into(),
                ));
            }
            // Wilkinson-style shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (1.0_f64, 1.0_f64);
            let mut p = 0.0_f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
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
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn determinant_matches_hand_values() {
        assert_abs_diff_eq!(determinant(&[vec![3.0]]), 3.0);
        assert_abs_diff_eq!(
            determinant(&[vec![1.0, 2.0], vec![3.0, 4.0]]),
            -2.0,
            epsilon = 1e-14
        );
        // Gaussian moment Hankel of order 2 has determinant 2.
        let h = vec![
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 3.0],
        ];
        assert_abs_diff_eq!(determinant(&h), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn solve_roundtrips() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve(&a, &[3.0, 5.0]).unwrap();
        assert_abs_diff_eq!(2.0 * x[0] + x[1], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[0] + 3.0 * x[1], 5.0, epsilon = 1e-12);
        assert!(solve(&[vec![1.0, 1.0], vec![1.0, 1.0]], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn pivoted_factor_detects_sign() {
        let pd = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let f = pivoted_factor(&pd, 1e-12);
        assert!(f.is_positive_definite());

        let psd = SymMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let f = pivoted_factor(&psd, 1e-12);
        assert!(!f.is_positive_definite());
        assert!(f.is_positive_semidefinite(1e-12));

        // Eigenvalues +1/-1: zero diagonal but a large off-diagonal entry.
        let indef = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let f = pivoted_factor(&indef, 1e-12);
        assert!(!f.is_positive_semidefinite(1e-12));
    }

    #[test]
    fn range_solve_flags_inconsistent_rhs() {
        // Rank-1 PSD matrix; range is the span of (1, 1).
        let m = SymMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let f = pivoted_factor(&m, 1e-12);
        let (_, res) = f.range_solve(&[2.0, 2.0]);
        assert!(res.iter().all(|v| v.abs() < 1e-12));
        let (_, res) = f.range_solve(&[1.0, -1.0]);
        assert!(res.iter().any(|v| v.abs() > 0.5));
    }

    #[test]
    fn tridiag_eigen_three_point_hermite() {
        // Probabilists' Hermite Jacobi matrix of order 3: eigenvalues
        // -sqrt(3), 0, sqrt(3) with squared first components 1/6, 2/3, 1/6.
        let pairs = tridiag_eigen_first_row(&[0.0; 3], &[1.0, 2.0_f64.sqrt()]).unwrap();
        let expect = [(-3.0_f64.sqrt(), 1.0 / 6.0), (0.0, 2.0 / 3.0), (3.0_f64.sqrt(), 1.0 / 6.0)];
        for ((ev, z0), (ev_want, w_want)) in pairs.iter().zip(expect.iter()) {
            assert_abs_diff_eq!(ev, ev_want, epsilon = 1e-12);
            assert_abs_diff_eq!(z0 * z0, *w_want, epsilon = 1e-12);
        }
    }
}
