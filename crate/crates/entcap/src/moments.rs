//! Moment sequences, Hankel matrices, and the truncated moment problem.
//!
//! A sequence (s0, s1, ..., sk) of prospective moments is realizable by some
//! distribution on the real line exactly when the associated Hankel matrices
//! are positive semidefinite, possibly after extending the sequence by one
//! or two free trailing values (the truncated Hamburger problem). This
//! module provides the sequence and matrix types, PSD verdicts by pivoted
//! symmetric elimination, leading principal minors, moment centering, and
//! the feasibility test with an explicit witness extension.

use serde::{Deserialize, Serialize};

use crate::linalg::{self, SymMatrix};
use crate::{Error, Result};

/// A finite prefix (s0, s1, ..., sk) of real moments.
///
/// Serializes as a plain JSON array of doubles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MomentSequence {
    values: Vec<f64>,
}

impl MomentSequence {
    /// Wraps raw values. The sequence must be nonempty and finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("moment sequence must be nonempty".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite moment value {bad}")));
        }
        Ok(MomentSequence { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Order k, the index of the last stored moment.
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    /// s_n, if stored.
    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }

    fn require_normalized(&self) -> Result<()> {
        let s0 = self.values[0];
        if (s0 - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(s0));
        }
        Ok(())
    }

    /// The Hankel matrix of order n, with (i, j) entry s_{i+j}.
    ///
    /// Requires at least 2n + 1 stored values.
    pub fn hankel(&self, order: usize) -> Result<HankelMatrix> {
        let needed = 2 * order + 1;
        if self.values.len() < needed {
            return Err(Error::SequenceTooShort {
                needed,
                got: self.values.len(),
            });
        }
        let n = order + 1;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = self.values[i + j];
            }
        }
        Ok(HankelMatrix {
            order,
            mat: SymMatrix { n, data },
        })
    }

    /// Moments of X - s1: the centered sequence via the binomial expansion
    /// of E[(X - s1)^n]. Requires s0 = 1. Centering a centered sequence is
    /// the identity.
    pub fn centered(&self) -> Result<MomentSequence> {
        self.require_normalized()?;
        let m1 = if self.values.len() > 1 { self.values[1] } else { 0.0 };
        let k = self.order();
        let mut out = Vec::with_capacity(k + 1);
        out.push(1.0);
        for n in 1..=k {
            // sum_i (-1)^i C(n, i) s_{n-i} m1^i
            let mut acc = 0.0;
            let mut binom = 1.0_f64;
            let mut m1_pow = 1.0_f64;
            for i in 0..=n {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binom * self.values[n - i] * m1_pow;
                binom = binom * (n - i) as f64 / (i + 1) as f64;
                m1_pow *= m1;
            }
            out.push(acc);
        }
        // E[(X - s1)^1] vanishes identically; pin it against roundoff.
        out[1] = 0.0;
        MomentSequence::new(out)
    }

    /// Feasibility of the truncated Hamburger problem: does some
    /// distribution on the real line have exactly these initial moments?
    ///
    /// For odd order k = 2n+1 the answer is positive exactly when one
    /// trailing value s_{2n+2} makes the order-(n+1) Hankel matrix PSD; for
    /// even k = 2n two trailing values are free. The returned witness holds
    /// the extension values found. `tol` scales all PSD tolerances relative
    /// to the matrix magnitude.
    pub fn truncated_feasible(&self, tol: f64) -> Result<Feasibility> {
        self.require_normalized()?;
        let k = self.order();
        if k % 2 == 1 {
            self.feasible_odd(tol)
        } else {
            self.feasible_even(tol)
        }
    }

    /// Odd k = 2n+1: one free extension value.
    fn feasible_odd(&self, tol: f64) -> Result<Feasibility> {
        let k = self.order();
        let n = (k - 1) / 2;
        let base = self.hankel(n)?;
        let abs_tol = base.scaled_tol(tol);
        if base.psd_check(abs_tol) == PsdVerdict::Indefinite {
            return Ok(Feasibility::Infeasible {
                reason: format!("Hankel matrix of order {n} is indefinite"),
            });
        }
        let factor = linalg::pivoted_factor(base.sym(), abs_tol);
        let rhs: Vec<f64> = self.values[n + 1..=2 * n + 1].to_vec();
        let (solution, residual) = factor.range_solve(&rhs);
        let resid_norm: f64 = max_abs(&residual);
        if resid_norm > 100.0 * abs_tol.max(1e-12) {
            return Ok(Feasibility::Infeasible {
                reason: format!(
                    "trailing moments leave the Hankel range (residual {resid_norm:.3e})"
                ),
            });
        }
        let minimal: f64 = rhs.iter().zip(&solution).map(|(b, x)| b * x).sum();
        for candidate in extension_candidates(minimal) {
            let mut extended = self.values.clone();
            extended.push(candidate);
            let big = MomentSequence::new(extended)?.hankel(n + 1)?;
            if big.psd_check(big.scaled_tol(tol)) != PsdVerdict::Indefinite {
                return Ok(Feasibility::Feasible {
                    extension: vec![candidate],
                });
            }
        }
        Ok(Feasibility::Infeasible {
            reason: "no PSD extension found".into(),
        })
    }

    /// Even k = 2n: two free extension values s_{2n+1} = t and s_{2n+2}.
    /// When the order-n Hankel matrix is singular, t must keep the extended
    /// column inside its range; the minimizing t has a closed form since
    /// the range residual is affine in t.
    fn feasible_even(&self, tol: f64) -> Result<Feasibility> {
        let k = self.order();
        let n = k / 2;
        let base = self.hankel(n)?;
        let abs_tol = base.scaled_tol(tol);
        if base.psd_check(abs_tol) == PsdVerdict::Indefinite {
            return Ok(Feasibility::Infeasible {
                reason: format!("Hankel matrix of order {n} is indefinite"),
            });
        }
        let factor = linalg::pivoted_factor(base.sym(), abs_tol);

        // Column to extend: (s_{n+1}, ..., s_{2n}, t).
        let mut col0: Vec<f64> = self.values[n + 1..=2 * n].to_vec();
        col0.push(0.0);
        let mut unit_t = vec![0.0; n + 1];
        unit_t[n] = 1.0;

        let (_, res0) = factor.range_solve(&col0);
        let (_, res_t) = factor.range_solve(&unit_t);
        let res_t_norm2: f64 = res_t.iter().map(|v| v * v).sum();
        let t = if res_t_norm2.sqrt() > abs_tol.max(1e-14) {
            -res0.iter().zip(&res_t).map(|(a, b)| a * b).sum::<f64>() / res_t_norm2
        } else {
            0.0
        };
        let combined: Vec<f64> = res0.iter().zip(&res_t).map(|(a, b)| a + t * b).collect();
        if max_abs(&combined) > 100.0 * abs_tol.max(1e-12) {
            return Ok(Feasibility::Infeasible {
                reason: "no odd extension keeps the Hankel column in range".into(),
            });
        }

        let mut rhs = col0;
        rhs[n] = t;
        let (solution, _) = factor.range_solve(&rhs);
        let minimal: f64 = rhs.iter().zip(&solution).map(|(b, x)| b * x).sum();
        for candidate in extension_candidates(minimal) {
            let mut extended = self.values.clone();
            extended.push(t);
            extended.push(candidate);
            let big = MomentSequence::new(extended)?.hankel(n + 1)?;
            if big.psd_check(big.scaled_tol(tol)) != PsdVerdict::Indefinite {
                return Ok(Feasibility::Feasible {
                    extension: vec![t, candidate],
                });
            }
        }
        Ok(Feasibility::Infeasible {
            reason: "no PSD extension found".into(),
        })
    }
}

/// Witness candidates: the minimal (rank-preserving) extension first, then
/// widening margins in case roundoff leaves the minimal one indefinite.
fn extension_candidates(minimal: f64) -> Vec<f64> {
    let scale = 1.0 + minimal.abs();
    [0.0, 1.0, 10.0, 100.0]
        .iter()
        .map(|m| minimal + m * scale)
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Symmetric matrix with constant anti-diagonals, built from a moment
/// sequence: entry (i, j) is s_{i+j}.
#[derive(Debug, Clone)]
pub struct HankelMatrix {
    order: usize,
    mat: SymMatrix,
}

/// Verdict of the pivoted-elimination PSD test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PsdVerdict {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

/// Feasibility verdict for the truncated moment problem, carrying the
/// witness extension values when one exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Feasibility {
    Feasible { extension: Vec<f64> },
    Infeasible { reason: String },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

impl HankelMatrix {
    /// Hankel order n (the matrix is (n+1) x (n+1)).
    pub fn order(&self) -> usize {
        self.order
    }

    /// Matrix dimension n + 1.
    pub fn size(&self) -> usize {
        self.mat.n
    }

    /// Entry (i, j) = s_{i+j}.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.mat.at(i, j)
    }

    /// Rows as owned vectors.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.size())
            .map(|i| (0..self.size()).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub(crate) fn sym(&self) -> &SymMatrix {
        &self.mat
    }

    /// Default absolute PSD tolerance: 1e-10 scaled by the matrix magnitude.
    pub fn default_tolerance(&self) -> f64 {
        self.scaled_tol(1e-10)
    }

    fn scaled_tol(&self, rel: f64) -> f64 {
        rel.max(0.0) * (1.0 + self.mat.max_abs())
    }

    /// Positive-(semi)definiteness verdict by pivoted symmetric elimination
    /// with absolute pivot tolerance `tol`: every pivot above `tol` gives
    /// PositiveDefinite; if elimination stalls but the remaining block is
    /// zero within `tol`, PositiveSemidefinite; otherwise Indefinite.
    pub fn psd_check(&self, tol: f64) -> PsdVerdict {
        let tol = tol.max(0.0);
        let factor = linalg::pivoted_factor(&self.mat, tol);
        if factor.is_positive_definite() {
            PsdVerdict::PositiveDefinite
        } else if factor.is_positive_semidefinite(tol) {
            PsdVerdict::PositiveSemidefinite
        } else {
            PsdVerdict::Indefinite
        }
    }

    /// Determinants of the leading principal submatrices, orders 1..=n+1,
    /// each by pivoted elimination.
    pub fn leading_minors(&self) -> Vec<f64> {
        let rows = self.rows();
        (1..=self.size())
            .map(|m| {
                let block: Vec<Vec<f64>> =
                    rows[..m].iter().map(|r| r[..m].to_vec()).collect();
                linalg::determinant(&block)
            })
            .collect()
    }

    /// Numerical rank from the pivoted factorization at tolerance `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        linalg::pivoted_factor(&self.mat, tol.max(0.0)).rank
    }
}
