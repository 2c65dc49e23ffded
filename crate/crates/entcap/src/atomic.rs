//! Finitely supported probability distributions.
//!
//! [`AtomicDistribution`] is the carrier for every discrete input in this
//! crate: it computes moments and entropy, standardizes to zero mean and
//! unit variance, recovers a measure from a truncated moment sequence
//! (Prony-style, via the orthogonal polynomial of the sequence), and builds
//! the Gauss-Hermite quadrature distributions that match standard-normal
//! moments.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::moments::MomentSequence;
use crate::{Error, Result};

/// Relative gap below which two atom positions are considered equal and
/// merged on construction.
const MERGE_REL_TOL: f64 = 1e-12;

/// A probability distribution supported on finitely many points.
///
/// Invariants maintained by construction: atoms strictly increasing
/// (duplicates merged, weights summed), all weights strictly positive, and
/// weights summing to one. Serializes as `{"atoms": [...], "weights": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomicDistribution {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl<'de> Deserialize<'de> for AtomicDistribution {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            atoms: Vec<f64>,
            weights: Vec<f64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        AtomicDistribution::new(raw.atoms, raw.weights).map_err(serde::de::Error::custom)
    }
}

impl AtomicDistribution {
    /// Builds a distribution from atom positions and weights.
    ///
    /// Atoms are sorted; positions closer than `1e-12 * (1 + max|atom|)`
    /// are merged with their weights summed; zero-weight atoms are dropped.
    /// The weights must be nonnegative and sum to 1 within 1e-9 (they are
    /// renormalized to machine precision afterwards).
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::Domain(format!(
                "atom/weight length mismatch: {} vs {}",
                atoms.len(),
                weights.len()
            )));
        }
        if atoms.is_empty() {
            return Err(Error::Domain("distribution needs at least one atom".into()));
        }
        if atoms.iter().any(|a| !a.is_finite()) || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Domain("non-finite atom or weight".into()));
        }
        if let Some(w) = weights.iter().find(|&&w| w < -1e-12) {
            return Err(Error::Domain(format!("negative weight {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("weights sum to {sum}, expected 1")));
        }

        let mut pairs: Vec<(f64, f64)> = atoms.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite atoms"));
        let max_abs = pairs.iter().fold(0.0_f64, |m, p| m.max(p.0.abs()));
        let merge_tol = MERGE_REL_TOL * (1.0 + max_abs);

        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (a, w) in pairs {
            match merged.last_mut() {
                Some(last) if a - last.0 <= merge_tol => last.1 += w,
                _ => merged.push((a, w)),
            }
        }
        merged.retain(|&(_, w)| w > 0.0);
        if merged.is_empty() {
            return Err(Error::Domain("all weights vanish".into()));
        }
        let total: f64 = merged.iter().map(|p| p.1).sum();
        let (atoms, weights) = merged.into_iter().map(|(a, w)| (a, w / total)).unzip();
        Ok(AtomicDistribution { atoms, weights })
    }

    /// Point mass at `position`.
    pub fn point(position: f64) -> Result<Self> {
        Self::new(vec![position], vec![1.0])
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one atom
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.atoms
            .iter()
            .zip(&self.weights)
            .map(|(a, w)| a * a * w)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.atoms
            .iter()
            .zip(&self.weights)
            .map(|(a, w)| w * (a - mean) * (a - mean))
            .sum()
    }

    /// Index and mass of the heaviest atom (ties broken by position order).
    pub fn dominant_atom(&self) -> (usize, f64) {
        self.weights
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &w)| {
                if w > best.1 {
                    (i, w)
                } else {
                    best
                }
            })
    }

    /// Moment sequence (s0, ..., sk) with s_n = sum_i w_i a_i^n.
    pub fn moments(&self, k: usize) -> MomentSequence {
        let mut values = Vec::with_capacity(k + 1);
        values.push(1.0);
        let mut powers: Vec<f64> = vec![1.0; self.atoms.len()];
        for _ in 1..=k {
            for (p, a) in powers.iter_mut().zip(&self.atoms) {
                *p *= a;
            }
            values.push(powers.iter().zip(&self.weights).map(|(p, w)| p * w).sum());
        }
        MomentSequence::new(values).expect("atomic moments are finite")
    }

    /// Shannon entropy in units of `log_base`. Zero exactly for a single atom.
    pub fn entropy(&self, base: f64) -> f64 {
        assert!(base > 1.0, "entropy base must exceed 1");
        self.entropy_nats() / base.ln()
    }

    /// Shannon entropy in nats.
    pub fn entropy_nats(&self) -> f64 {
        if self.atoms.len() == 1 {
            return 0.0;
        }
        -self.weights.iter().map(|&w| w * w.ln()).sum::<f64>()
    }

    /// Affine image `scale * X + shift`; weights (hence entropy) unchanged.
    pub fn affine(&self, scale: f64, shift: f64) -> Result<Self> {
        if scale == 0.0 || !scale.is_finite() || !shift.is_finite() {
            return Err(Error::Domain("affine map must have nonzero finite scale".into()));
        }
        let atoms = self.atoms.iter().map(|a| scale * a + shift).collect();
        Self::new(atoms, self.weights.clone())
    }

    /// Affine standardization to zero mean and unit variance.
    pub fn standardize(&self) -> Result<Self> {
        let variance = self.variance();
        if self.atoms.len() < 2 || variance <= 0.0 {
            return Err(Error::Degenerate(
                "standardization needs positive variance".into(),
            ));
        }
        let scale = 1.0 / variance.sqrt();
        self.affine(scale, -self.mean() * scale)
    }

    /// Recovers an atomic distribution from a truncated moment sequence of
    /// order 2n-1 or 2n (Prony-style).
    ///
    /// The atom positions are the roots of the orthogonal polynomial whose
    /// coefficients solve the Hankel linear system of the sequence (degree
    /// = numerical Hankel rank, so rank-deficient sequences recover fewer
    /// atoms); the weights solve the Vandermonde system. Roots are taken
    /// from the companion-matrix eigenvalues; imaginary parts above the
    /// truncation threshold, negative weights, or a moment mismatch beyond
    /// `tol * (1 + |s_j|)` all signal that no representing measure exists.
    pub fn from_moments(seq: &MomentSequence, tol: f64) -> Result<Self> {
        if (seq.values()[0] - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(seq.values()[0]));
        }
        let k = seq.order();
        if k == 0 {
            return Err(Error::Domain(
                "need at least the first moment to recover a measure".into(),
            ));
        }

        let q = k / 2;
        let hq = seq.hankel(q)?;
        if hq.psd_check(hq.default_tolerance()) == crate::moments::PsdVerdict::Indefinite {
            return Err(Error::Infeasible(
                "Hankel matrix is indefinite; no representing measure".into(),
            ));
        }

        // Attempt degrees from the largest consistent with the available
        // moments downwards; rank-deficient sequences make the larger
        // Hankel systems singular (or fail the moment verification) and
        // fall through to fewer atoms. An even-order sequence may need
        // floor(k/2) + 1 atoms, with the free odd moment pinned to 0.
        let mut degrees: Vec<(usize, bool)> = Vec::new();
        if k % 2 == 0 {
            degrees.push((q + 1, true));
        }
        for d in (1..=(k + 1) / 2).rev() {
            degrees.push((d, false));
        }

        let mut last_err = Error::Infeasible("no representing measure".into());
        for (degree, extend) in degrees {
            let mut values = seq.values().to_vec();
            if extend {
                values.push(0.0);
            }
            match Self::recover_with_degree(&values, degree, seq, tol) {
                Ok(dist) => return Ok(dist),
                Err(e) => last_err = e,
            }
        }
        Err(last_err)
    }

    /// One Prony attempt at a fixed atom count; verification against the
    /// original sequence decides whether the attempt stands.
    fn recover_with_degree(
        values: &[f64],
        degree: usize,
        seq: &MomentSequence,
        tol: f64,
    ) -> Result<Self> {
        // Monic orthogonal polynomial: H_{d-1} c = -(s_d, ..., s_{2d-1}).
        let atoms = if degree == 1 {
            vec![values[1]]
        } else {
            let rows: Vec<Vec<f64>> = (0..degree)
                .map(|i| values[i..i + degree].to_vec())
                .collect();
            let rhs: Vec<f64> = values[degree..2 * degree].iter().map(|s| -s).collect();
            let coeffs = linalg::solve(&rows, &rhs)?;
            companion_roots(&coeffs)?
        };

        // Weights from the Vandermonde system V w = (s_0, ..., s_{d-1}).
        let vandermonde: Vec<Vec<f64>> = (0..degree)
            .map(|j| atoms.iter().map(|a| a.powi(j as i32)).collect())
            .collect();
        let weights = linalg::solve(&vandermonde, &values[..degree])?;
        if weights.iter().any(|&w| w < -1e-9) {
            return Err(Error::Infeasible(format!(
                "recovered negative weight {weights:?}"
            )));
        }
        let weights: Vec<f64> = weights.iter().map(|w| w.max(0.0)).collect();
        let dist = Self::new(atoms, weights)
            .map_err(|e| Error::Infeasible(format!("invalid recovered measure: {e}")))?;

        // The recovered measure must actually reproduce the input moments.
        let check = dist.moments(seq.order());
        for (j, (got, want)) in check.values().iter().zip(seq.values()).enumerate() {
            if (got - want).abs() > tol * (1.0 + want.abs()) {
                return Err(Error::Infeasible(format!(
                    "moment {j} mismatch: recovered {got}, sequence has {want}"
                )));
            }
        }
        Ok(dist)
    }

    /// CSV export with header `atom,weight`, full double precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("atom,weight\n");
        for (a, w) in self.atoms.iter().zip(&self.weights) {
            out.push_str(&format!("{a:.16e},{w:.16e}\n"));
        }
        out
    }
}

/// Roots of the monic polynomial x^d + c_{d-1} x^{d-1} + ... + c_0 via the
/// companion-matrix eigenvalues. Imaginary parts below 1e-8 (relative to
/// the root magnitude) are truncated; anything larger is an infeasibility.
fn companion_roots(coeffs: &[f64]) -> Result<Vec<f64>> {
    let d = coeffs.len();
    let mut companion = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = 1.0;
    }
    for (i, &c) in coeffs.iter().enumerate() {
        companion[(i, d - 1)] = -c;
    }
    let eigen = companion.complex_eigenvalues();
    let mut roots = Vec::with_capacity(d);
    for z in eigen.iter() {
        if z.im.abs() > 1e-8 * (1.0 + z.norm()) {
            return Err(Error::Infeasible(format!(
                "complex atom position {} + {}i; no real representing measure",
                z.re, z.im
            )));
        }
        roots.push(z.re);
    }
    Ok(roots)
}

/// Binary entropy h2(x) = -x log x - (1-x) log(1-x) in units of `log_base`,
/// with the usual convention 0 log 0 = 0.
pub fn binary_entropy(x: f64, base: f64) -> Result<f64> {
    assert!(base > 1.0, "entropy base must exceed 1");
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("binary entropy needs x in [0,1], got {x}")));
    }
    Ok(binary_entropy_nats(x) / base.ln())
}

pub(crate) fn binary_entropy_nats(x: f64) -> f64 {
    let mut acc = 0.0;
    if x > 0.0 {
        acc -= x * x.ln();
    }
    if x < 1.0 {
        acc -= (1.0 - x) * (1.0 - x).ln();
    }
    acc
}

/// The unique x in [0, 1/2] with h2(x) = y (y in units of `log_base`),
/// found by bisection to 1e-12.
pub fn inverse_binary_entropy(y: f64, base: f64) -> Result<f64> {
    assert!(base > 1.0, "entropy base must exceed 1");
    let y_nats = y * base.ln();
    inverse_binary_entropy_nats(y_nats)
}

pub(crate) fn inverse_binary_entropy_nats(y_nats: f64) -> Result<f64> {
    let max = std::f64::consts::LN_2;
    if !(0.0..=max + 1e-12).contains(&y_nats) {
        return Err(Error::Domain(format!(
            "inverse binary entropy needs y in [0, log 2] nats, got {y_nats}"
        )));
    }
    if y_nats <= 0.0 {
        return Ok(0.0);
    }
    if y_nats >= max {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy_nats(mid) < y_nats {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The m-point Gauss-Hermite quadrature distribution in the unit-variance
/// (probabilists') normalization: the unique m-atom distribution matching
/// the standard normal moments through order 2m - 1.
///
/// Atoms are the eigenvalues of the order-m Jacobi matrix of the Hermite
/// recurrence (zero diagonal, off-diagonal sqrt(j)); weights are the
/// squared first components of the eigenvectors.
pub fn gauss_hermite(points: usize) -> Result<AtomicDistribution> {
    if points == 0 {
        return Err(Error::Domain("quadrature needs at least one point".into()));
    }
    let diag = vec![0.0; points];
    let off: Vec<f64> = (1..points).map(|j| (j as f64).sqrt()).collect();
    let pairs = linalg::tridiag_eigen_first_row(&diag, &off)?;
    let (atoms, weights): (Vec<f64>, Vec<f64>) =
        pairs.into_iter().map(|(ev, z0)| (ev, z0 * z0)).unzip();
    AtomicDistribution::new(atoms, weights)
}

/// The smallest fourth moment s4 that extends (1, s1, s2, s3) to a
/// feasible sequence: the value making the order-2 Hankel matrix singular,
/// so the representing measure has exactly two atoms.
///
/// The determinant of H_2(1, s1, s2, s3, s4) is affine in s4 with positive
/// coefficient det H_1, so the root is available in closed form. Requires
/// H_1(1, s1, s2) positive definite.
pub fn minimal_extension(seq: &MomentSequence) -> Result<f64> {
    if (seq.values()[0] - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(seq.values()[0]));
    }
    if seq.order() != 3 {
        return Err(Error::Domain(format!(
            "minimal extension needs a sequence of order 3, got order {}",
            seq.order()
        )));
    }
    let (s1, s2, s3) = (seq.values()[1], seq.values()[2], seq.values()[3]);
    let det1 = s2 - s1 * s1;
    let scale = 1.0 + seq.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if det1 <= 1e-12 * scale {
        return Err(Error::Infeasible(format!(
            "H_1 not positive definite (s2 - s1^2 = {det1})"
        )));
    }
    // det H_2 = det1 * s4 - [s3 (s3 - s1 s2) - s2 (s1 s3 - s2^2)] = 0.
    Ok((s3 * (s3 - s1 * s2) - s2 * (s1 * s3 - s2 * s2)) / det1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dist(atoms: &[f64], weights: &[f64]) -> AtomicDistribution {
        AtomicDistribution::new(atoms.to_vec(), weights.to_vec()).unwrap()
    }

    fn seq(values: &[f64]) -> MomentSequence {
        MomentSequence::new(values.to_vec()).unwrap()
    }

    /// Double-factorial oracle for standard normal moments: E[Z^n] = (n-1)!!
    /// for even n, zero for odd n.
    fn gaussian_moment(n: usize) -> f64 {
        if n % 2 == 1 {
            0.0
        } else {
            (1..n).step_by(2).map(|j| j as f64).product()
        }
    }

    #[test]
    fn gaussian_moment_oracle_is_double_factorial() {
        // (2j-1)!!: 1, 1, 3, 15, 105
        assert_abs_diff_eq!(gaussian_moment(0), 1.0);
        assert_abs_diff_eq!(gaussian_moment(2), 1.0);
        assert_abs_diff_eq!(gaussian_moment(4), 3.0);
        assert_abs_diff_eq!(gaussian_moment(6), 15.0);
        assert_abs_diff_eq!(gaussian_moment(8), 105.0);
    }

    #[test]
    fn construction_merges_and_validates() {
        let d = dist(&[1.0, -1.0], &[0.5, 0.5]);
        assert_eq!(d.atoms(), &[-1.0, 1.0]);

        // Duplicates merge with weights summed.
        let d = dist(&[2.0, 2.0 + 1e-14, 0.0], &[0.25, 0.25, 0.5]);
        assert_eq!(d.len(), 2);
        assert_abs_diff_eq!(d.weights()[1], 0.5);

        // Zero-weight atoms disappear.
        let d = dist(&[0.0, 5.0], &[1.0, 0.0]);
        assert_eq!(d.len(), 1);

        assert!(AtomicDistribution::new(vec![0.0], vec![0.7]).is_err());
        assert!(AtomicDistribution::new(vec![0.0, 1.0], vec![1.3, -0.3]).is_err());
    }

    #[test]
    fn moments_match_direct_summation() {
        let d = dist(&[-1.0, 1.0], &[0.5, 0.5]);
        assert_eq!(d.moments(4).values(), &[1.0, 0.0, 1.0, 0.0, 1.0]);

        let d = dist(&[-1.0, 2.0], &[2.0 / 3.0, 1.0 / 3.0]);
        let m = d.moments(4);
        let expected = [1.0, 0.0, 2.0, 2.0, 6.0];
        for (got, want) in m.values().iter().zip(&expected) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }

        let c = 1.7;
        let d = AtomicDistribution::point(c).unwrap();
        let m = d.moments(2);
        assert_abs_diff_eq!(m.values()[1], c);
        assert_abs_diff_eq!(m.values()[2], c * c, epsilon = 1e-15);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(AtomicDistribution::point(3.0).unwrap().entropy(2.0), 0.0);
        assert_abs_diff_eq!(dist(&[-1.0, 1.0], &[0.5, 0.5]).entropy(2.0), 1.0, epsilon = 1e-15);
        // h2(1/3) = log2(3) - 2/3.
        assert_abs_diff_eq!(
            dist(&[0.0, 1.0], &[1.0 / 3.0, 2.0 / 3.0]).entropy(2.0),
            0.9182958340544895,
            epsilon = 1e-12
        );
    }

    #[test]
    fn binary_entropy_and_inverse() {
        assert_eq!(binary_entropy(0.0, 2.0).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.5, 2.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            binary_entropy(1.0 / 3.0, 2.0).unwrap(),
            0.9182958340544895,
            epsilon = 1e-14
        );
        assert!(binary_entropy(1.5, 2.0).is_err());

        assert_eq!(inverse_binary_entropy(0.0, 2.0).unwrap(), 0.0);
        assert_eq!(inverse_binary_entropy(1.0, 2.0).unwrap(), 0.5);
        // Bisection oracle value at half a bit.
        assert_abs_diff_eq!(
            inverse_binary_entropy(0.5, 2.0).unwrap(),
            0.11002786443835955,
            epsilon = 1e-11
        );
        assert!(inverse_binary_entropy(1.1, 2.0).is_err());

        // Mutual inverses across [0, 1/2].
        for i in 0..=50 {
            let x = 0.5 * i as f64 / 50.0;
            let y = binary_entropy(x, 2.0).unwrap();
            let back = inverse_binary_entropy(y, 2.0).unwrap();
            assert_abs_diff_eq!(back, x, epsilon = 1e-10);
        }
    }

    #[test]
    fn standardize_examples() {
        let d = dist(&[0.0, 2.0], &[0.5, 0.5]).standardize().unwrap();
        assert_eq!(d.atoms(), &[-1.0, 1.0]);

        let fixed = dist(&[-1.0, 1.0], &[0.5, 0.5]);
        assert_eq!(fixed.standardize().unwrap(), fixed);

        let d = dist(&[0.0, 1.0, 2.0], &[0.25, 0.5, 0.25]).standardize().unwrap();
        let root2 = 2.0_f64.sqrt();
        for (got, want) in d.atoms().iter().zip(&[-root2, 0.0, root2]) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
        assert_eq!(d.weights(), &[0.25, 0.5, 0.25]);

        // Entropy untouched by standardization.
        let skewed = dist(&[0.0, 3.0, 7.0], &[0.6, 0.3, 0.1]);
        assert_eq!(skewed.standardize().unwrap().entropy_nats(), skewed.entropy_nats());

        assert!(AtomicDistribution::point(4.0).unwrap().standardize().is_err());
    }

    #[test]
    fn recovery_examples() {
        // Unique symmetric two-atom measure with unit second moment.
        let d = AtomicDistribution::from_moments(&seq(&[1.0, 0.0, 1.0, 0.0]), 1e-9).unwrap();
        assert_eq!(d.len(), 2);
        assert_abs_diff_eq!(d.atoms()[0], -1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.atoms()[1], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.weights()[0], 0.5, epsilon = 1e-10);

        // Forward-computed in the moments test; here the roundtrip.
        let d = AtomicDistribution::from_moments(&seq(&[1.0, 0.0, 2.0, 2.0]), 1e-9).unwrap();
        assert_eq!(d.len(), 2);
        assert_abs_diff_eq!(d.atoms()[0], -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.atoms()[1], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.weights()[0], 2.0 / 3.0, epsilon = 1e-9);

        // A bare first moment gives the point mass.
        let d = AtomicDistribution::from_moments(&seq(&[1.0, 0.25]), 1e-9).unwrap();
        assert_eq!(d.len(), 1);
        assert_abs_diff_eq!(d.atoms()[0], 0.25);

        // Indefinite sequence: no measure.
        assert!(AtomicDistribution::from_moments(&seq(&[1.0, 0.0, -1.0]), 1e-9).is_err());
    }

    #[test]
    fn recovery_roundtrip_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1..=6);
            let mut atoms: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            atoms.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // Keep atoms separated so the roundtrip is well conditioned.
            let ok = atoms.windows(2).all(|w| w[1] - w[0] > 0.15);
            if !ok {
                continue;
            }
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let d = AtomicDistribution::new(atoms, weights).unwrap();
            let m = d.moments(2 * n - 1);
            let back = AtomicDistribution::from_moments(&m, 1e-6).unwrap();
            assert_eq!(back.len(), d.len());
            for (got, want) in back.atoms().iter().zip(d.atoms()) {
                assert_abs_diff_eq!(got, want, epsilon = 1e-6);
            }
            for (got, want) in back.weights().iter().zip(d.weights()) {
                assert_abs_diff_eq!(got, want, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn recovery_handles_rank_deficiency() {
        // Moments of a 2-atom measure handed over at order 5 (as if 3 atoms).
        let d = dist(&[-0.5, 1.5], &[0.75, 0.25]);
        let m = d.moments(5);
        let back = AtomicDistribution::from_moments(&m, 1e-7).unwrap();
        assert_eq!(back.len(), 2);
        for (got, want) in back.atoms().iter().zip(d.atoms()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-8);
        }
    }

    #[test]
    fn minimal_extension_examples() {
        assert_abs_diff_eq!(
            minimal_extension(&seq(&[1.0, 0.0, 1.0, 0.0])).unwrap(),
            1.0
        );
        assert_abs_diff_eq!(
            minimal_extension(&seq(&[1.0, 0.0, 2.0, 2.0])).unwrap(),
            6.0,
            epsilon = 1e-12
        );
        assert!(minimal_extension(&seq(&[1.0, 1.0, 1.0, 1.0])).is_err());
    }

    #[test]
    fn minimal_extension_yields_two_atom_measure() {
        let s = seq(&[1.0, 0.3, 1.4, -0.2]);
        let s4 = minimal_extension(&s).unwrap();
        let full = seq(&[1.0, 0.3, 1.4, -0.2, s4]);
        let h = full.hankel(2).unwrap();
        // Singular but PSD: rank 2.
        assert_eq!(h.rank(h.default_tolerance()), 2);
        let d = AtomicDistribution::from_moments(&full, 1e-8).unwrap();
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn gauss_hermite_examples() {
        let d = gauss_hermite(1).unwrap();
        assert_eq!(d.atoms(), &[0.0]);
        assert_eq!(d.weights(), &[1.0]);

        let d = gauss_hermite(2).unwrap();
        assert_abs_diff_eq!(d.atoms()[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.atoms()[1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.weights()[0], 0.5, epsilon = 1e-14);

        let d = gauss_hermite(3).unwrap();
        let root3 = 3.0_f64.sqrt();
        for (got, want) in d.atoms().iter().zip(&[-root3, 0.0, root3]) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-13);
        }
        for (got, want) in d.weights().iter().zip(&[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-13);
        }

        assert!(gauss_hermite(0).is_err());
    }

    #[test]
    fn gauss_hermite_matches_gaussian_moments() {
        for m in 1..=8 {
            let d = gauss_hermite(m).unwrap();
            let mom = d.moments(2 * m);
            for n in 0..=(2 * m - 1) {
                let want = gaussian_moment(n);
                assert!(
                    (mom.values()[n] - want).abs() <= 1e-8 * (1.0 + want.abs()),
                    "GH({m}) moment {n}: {} vs {}",
                    mom.values()[n],
                    want
                );
            }
            if m <= 6 {
                let want = gaussian_moment(2 * m);
                assert!(
                    (mom.values()[2 * m] - want).abs() > 1e-3 * (1.0 + want.abs()),
                    "GH({m}) should miss moment {}",
                    2 * m
                );
            }
        }
    }

    #[test]
    fn gauss_hermite_entropy_grows_like_half_log_m() {
        let mut last = 0.0;
        for m in [2usize, 4, 8, 16, 64, 256, 1024] {
            let h = gauss_hermite(m).unwrap().entropy_nats();
            assert!(h > last, "entropy not increasing at m = {m}");
            last = h;
            if m >= 64 {
                let ratio = h / (0.5 * (m as f64).ln());
                assert!(
                    (0.8..=1.3).contains(&ratio),
                    "entropy ratio {ratio} out of band at m = {m}"
                );
            }
        }
    }
}
