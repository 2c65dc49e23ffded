//! Low-entropy moment matching.
//!
//! A discrete random variable with entropy below log 2 has a dominant atom:
//! it can be written as "anchor point x0 with probability 1 - eps, tail
//! variable otherwise", and its entropy splits exactly as
//! `H(X) = h2(eps) + eps * H(tail)`. Pushing the moment constraints of a
//! continuous target through that decomposition turns "match four moments
//! at low entropy" into a Hankel positivity question for the tail, which
//! fails for every tail mass below an explicit threshold. Matching three
//! moments, by contrast, is possible at arbitrarily low entropy, and the
//! construction here is fully explicit.
//!
//! The module provides:
//!
//! - [`Decomposition`], [`compose`], [`decompose`] — the dominant-atom
//!   representation and the exact entropy identity;
//! - [`induced_tail_moments`], [`tail_minor_determinants`] — the moments
//!   the tail must carry and the closed-form leading minors of its Hankel
//!   matrix;
//! - [`critical_tail_mass`] — the threshold (closed form for symmetric
//!   targets, certified numerical sweep otherwise);
//! - [`four_moment_certificate`] — a grid certificate that no distribution
//!   of entropy below a given budget matches four target moments;
//! - [`match_three_moments`] — a three-atom construction matching three
//!   target moments within any positive entropy budget.

use serde::{Deserialize, Serialize};

use crate::atomic::{
    binary_entropy_nats, inverse_binary_entropy_nats, minimal_extension, AtomicDistribution,
};
use crate::moments::MomentSequence;
use crate::{Error, Result};

/// Matches `AtomicDistribution`'s construction-time merge threshold; an
/// anchor closer than this to a tail atom would be merged away.
const ANCHOR_SEPARATION_REL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Dominant-atom decomposition
// ---------------------------------------------------------------------------

/// A low-entropy random variable written as a dominant anchor atom taken
/// with probability `1 - tail_mass`, and a draw from `tail` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    anchor: f64,
    tail_mass: f64,
    tail: AtomicDistribution,
}

impl Decomposition {
    /// Validates `0 < tail_mass < 1/2` and that the anchor is separated
    /// from every tail atom.
    pub fn new(anchor: f64, tail_mass: f64, tail: AtomicDistribution) -> Result<Self> {
        if !anchor.is_finite() || !tail_mass.is_finite() {
            return Err(Error::Domain("non-finite decomposition parameters".into()));
        }
        if tail_mass <= 0.0 || tail_mass >= 0.5 {
            return Err(Error::Domain(format!(
                "tail mass must lie strictly between 0 and 1/2, got {tail_mass}"
            )));
        }
        let scale = tail
            .atoms()
            .iter()
            .fold(anchor.abs(), |m, a| m.max(a.abs()));
        let min_gap = tail
            .atoms()
            .iter()
            .fold(f64::INFINITY, |m, a| m.min((a - anchor).abs()));
        if min_gap <= ANCHOR_SEPARATION_REL * (1.0 + scale) {
            return Err(Error::InvariantViolation(format!(
                "anchor {anchor} collides with a tail atom"
            )));
        }
        Ok(Decomposition {
            anchor,
            tail_mass,
            tail,
        })
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// Probability that the variable differs from the anchor.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn tail(&self) -> &AtomicDistribution {
        &self.tail
    }
}

/// Mixture distribution of a decomposition: mass `1 - tail_mass` at the
/// anchor and `tail_mass * w` at each tail atom.
///
/// The entropy identity `H(compose(d)) = h2(tail_mass) + tail_mass * H(tail)`
/// holds exactly (same logarithm base on both sides).
pub fn compose(dec: &Decomposition) -> AtomicDistribution {
    let mut atoms = Vec::with_capacity(dec.tail.len() + 1);
    let mut weights = Vec::with_capacity(dec.tail.len() + 1);
    atoms.push(dec.anchor);
    weights.push(1.0 - dec.tail_mass);
    for (a, w) in dec.tail.atoms().iter().zip(dec.tail.weights()) {
        atoms.push(*a);
        weights.push(dec.tail_mass * w);
    }
    AtomicDistribution::new(atoms, weights).expect("anchor separation guarantees a valid mixture")
}

/// Splits a distribution at its heaviest atom: anchor = argmax-probability
/// atom, tail mass = remaining probability, tail = conditional distribution
/// given the variable differs from the anchor. Inverse of [`compose`].
///
/// Errors: a single atom has zero entropy and nothing to split; if no atom
/// carries more than half the mass the decomposition hypothesis fails.
pub fn decompose(dist: &AtomicDistribution) -> Result<Decomposition> {
    if dist.len() == 1 {
        return Err(Error::Degenerate(
            "single-atom distribution has zero entropy; nothing to decompose".into(),
        ));
    }
    let (idx, max_weight) = dist.dominant_atom();
    if max_weight <= 0.5 {
        return Err(Error::HypothesisViolation(format!(
            "heaviest atom carries {max_weight} <= 1/2; tail mass would reach 1/2"
        )));
    }
    let tail_mass = 1.0 - max_weight;
    let mut atoms = Vec::with_capacity(dist.len() - 1);
    let mut weights = Vec::with_capacity(dist.len() - 1);
    for (i, (a, w)) in dist.atoms().iter().zip(dist.weights()).enumerate() {
        if i != idx {
            atoms.push(*a);
            weights.push(w / tail_mass);
        }
    }
    let tail = AtomicDistribution::new(atoms, weights)?;
    Decomposition::new(dist.atoms()[idx], tail_mass, tail)
}

// ---------------------------------------------------------------------------
// Target moments
// ---------------------------------------------------------------------------

/// Moments (m1, m2, ...) of the continuous target variable to be matched,
/// with a flag marking symmetric targets (odd moments zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetMoments {
    moments: Vec<f64>,
    symmetric: bool,
}

impl TargetMoments {
    /// Builds a target from the moments starting at order 1.
    ///
    /// Requires at least (m1, m2) with positive centered variance; when the
    /// fourth moment is present it must exceed the squared second moment
    /// (the variance of the squared target is positive); symmetric targets
    /// must have vanishing odd moments.
    pub fn new(moments: Vec<f64>, symmetric: bool) -> Result<Self> {
        if moments.len() < 2 {
            return Err(Error::Domain(
                "target needs at least the first two moments".into(),
            ));
        }
        if moments.iter().any(|m| !m.is_finite()) {
            return Err(Error::Domain("non-finite target moment".into()));
        }
        let scale = moments.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let variance = moments[1] - moments[0] * moments[0];
        if variance <= 1e-12 * scale {
            return Err(Error::Domain(format!(
                "continuous target needs positive centered variance, got {variance}"
            )));
        }
        if symmetric {
            for (i, m) in moments.iter().enumerate() {
                if i % 2 == 0 && m.abs() > 1e-9 * scale {
                    return Err(Error::Domain(format!(
                        "symmetric target has nonzero odd moment m{} = {m}",
                        i + 1
                    )));
                }
            }
        }
        if moments.len() >= 4 {
            let (m2, m4) = (moments[1], moments[3]);
            if m4 <= m2 * m2 {
                return Err(Error::Domain(format!(
                    "fourth moment {m4} must exceed squared second moment {}",
                    m2 * m2
                )));
            }
        }
        Ok(TargetMoments { moments, symmetric })
    }

    /// Standard normal target through the fourth moment.
    pub fn standard_normal() -> Self {
        TargetMoments {
            moments: vec![0.0, 1.0, 0.0, 3.0],
            symmetric: true,
        }
    }

    /// Standard normal target through an arbitrary moment order (>= 2),
    /// using the double-factorial moments (n-1)!! at even orders.
    pub fn standard_normal_of_order(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Domain("need order >= 2".into()));
        }
        let mut moments = vec![0.0; order];
        let mut value = 1.0;
        for n in (2..=order).step_by(2) {
            value *= (n - 1) as f64;
            moments[n - 1] = value;
        }
        TargetMoments::new(moments, true)
    }

    /// m_n for n >= 1 (m_0 = 1 by convention).
    pub fn moment(&self, n: usize) -> Option<f64> {
        if n == 0 {
            return Some(1.0);
        }
        self.moments.get(n - 1).copied()
    }

    /// Highest stored moment order.
    pub fn order(&self) -> usize {
        self.moments.len()
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    /// Centered variance m2 - m1^2.
    pub fn variance(&self) -> f64 {
        self.moments[1] - self.moments[0] * self.moments[0]
    }

    /// Moments of the shifted target W - m1 (binomial re-expansion).
    pub fn centered(&self) -> TargetMoments {
        let mut with_mass = Vec::with_capacity(self.moments.len() + 1);
        with_mass.push(1.0);
        with_mass.extend_from_slice(&self.moments);
        let centered = MomentSequence::new(with_mass)
            .and_then(|s| s.centered())
            .expect("target moments are finite and normalized");
        TargetMoments {
            moments: centered.values()[1..].to_vec(),
            symmetric: self.symmetric,
        }
    }

    fn require_centered(&self) -> Result<()> {
        let scale = self.moments.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        if self.moments[0].abs() > 1e-9 * scale {
            return Err(Error::Precondition(format!(
                "target must be centered (m1 = {}); call centered() first",
                self.moments[0]
            )));
        }
        Ok(())
    }

    fn require_order(&self, order: usize) -> Result<()> {
        if self.order() < order {
            return Err(Error::SequenceTooShort {
                needed: order,
                got: self.order(),
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Induced tail moments and closed-form minors
// ---------------------------------------------------------------------------

/// Moments the tail variable must carry for the composed variable to match
/// the target: `s_n = m_n / eps - ((1 - eps) / eps) * x0^n`.
pub fn induced_tail_moments(
    target: &TargetMoments,
    tail_mass: f64,
    anchor: f64,
    order: usize,
) -> Result<MomentSequence> {
    if tail_mass <= 0.0 || tail_mass >= 0.5 {
        return Err(Error::Domain(format!(
            "tail mass must lie strictly between 0 and 1/2, got {tail_mass}"
        )));
    }
    target.require_order(order)?;
    let ratio = (1.0 - tail_mass) / tail_mass;
    let mut values = Vec::with_capacity(order + 1);
    values.push(1.0);
    let mut anchor_pow = 1.0;
    for n in 1..=order {
        anchor_pow *= anchor;
        let m_n = target.moment(n).expect("order checked");
        values.push(m_n / tail_mass - ratio * anchor_pow);
    }
    MomentSequence::new(values)
}

/// The two leading-minor determinants of the induced tail Hankel matrix.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailMinors {
    /// det H_1(1, s1, s2), the 2x2 leading minor.
    pub det_h1: f64,
    /// det H_2(1, s1, ..., s4), the full 3x3 determinant.
    pub det_h2: f64,
}

/// Closed forms for the induced tail Hankel minors of a centered target.
///
/// With `p(x) = m2 x^4 - 2 m3 x^3 + (m4 - 3 m2^2) x^2 + 2 m2 m3 x`,
/// `alpha = p(x0) + (m2 m4 - m3^2)` and `beta = p(x0) + m2^3`:
///
/// ```text
/// det H_1 = m2/eps - ((1 - eps)/eps^2) x0^2
/// det H_2 = alpha/eps^2 - beta/eps^3
/// ```
///
/// Matching four moments at tail mass `eps` requires both to be
/// nonnegative; below the critical tail mass one of them is always
/// negative, whatever the anchor.
pub fn tail_minor_determinants(
    target: &TargetMoments,
    tail_mass: f64,
    anchor: f64,
) -> Result<TailMinors> {
    target.require_centered()?;
    target.require_order(4)?;
    if tail_mass <= 0.0 || tail_mass >= 0.5 {
        return Err(Error::Domain(format!(
            "tail mass must lie strictly between 0 and 1/2, got {tail_mass}"
        )));
    }
    let eps = tail_mass;
    let (m2, m3, m4) = (
        target.moment(2).unwrap(),
        target.moment(3).unwrap(),
        target.moment(4).unwrap(),
    );
    let x = anchor;
    let det_h1 = m2 / eps - ((1.0 - eps) / (eps * eps)) * x * x;
    let p =
        m2 * x.powi(4) - 2.0 * m3 * x.powi(3) + (m4 - 3.0 * m2 * m2) * x * x + 2.0 * m2 * m3 * x;
    let alpha = p + (m2 * m4 - m3 * m3);
    let beta = p + m2 * m2 * m2;
    let det_h2 = alpha / (eps * eps) - beta / (eps * eps * eps);
    Ok(TailMinors { det_h1, det_h2 })
}

// ---------------------------------------------------------------------------
// Critical tail mass
// ---------------------------------------------------------------------------

/// How the threshold was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdMethod {
    ClosedFormSymmetric,
    NumericalGeneral,
}

/// The critical tail mass of a target: below this mixing probability no
/// dominant-atom variable can match the target's first four moments.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailMassThreshold {
    /// The threshold itself, in (0, 1/2).
    #[serde(rename = "eta")]
    pub value: f64,
    /// Binary entropy of the threshold in bits: the entropy budget below
    /// which four-moment matching is impossible.
    #[serde(rename = "threshold_bits")]
    pub entropy_threshold_bits: f64,
    pub method: ThresholdMethod,
}

impl TailMassThreshold {
    /// Entropy threshold in nats.
    pub fn entropy_threshold_nats(&self) -> f64 {
        binary_entropy_nats(self.value)
    }
}

/// Numerical sweep cap: the threshold never reaches 1/2.
const TAIL_MASS_CAP: f64 = 0.5 - 1e-6;

/// Critical tail mass of the target.
///
/// Symmetric targets use the closed form `m2^2 / m4` when `m4 >= 3 m2^2`
/// and `(5 m2^2 - m4) / (9 m2^2 - m4)` otherwise. General targets are
/// centered first and swept numerically: the threshold is the largest
/// `eps` such that for every smaller tail mass, every admissible anchor
/// (those keeping det H_1 nonnegative) leaves det H_2 negative. The inner
/// maximization over the anchor runs on a dense grid with derivative
/// polish on the quartic; the outer threshold is bisected to 1e-6.
pub fn critical_tail_mass(target: &TargetMoments) -> Result<TailMassThreshold> {
    target.require_order(4)?;
    if target.symmetric() {
        let (m2, m4) = (target.moment(2).unwrap(), target.moment(4).unwrap());
        let value = if m4 >= 3.0 * m2 * m2 {
            m2 * m2 / m4
        } else {
            (5.0 * m2 * m2 - m4) / (9.0 * m2 * m2 - m4)
        };
        return Ok(TailMassThreshold {
            value,
            entropy_threshold_bits: binary_entropy_nats(value) / std::f64::consts::LN_2,
            method: ThresholdMethod::ClosedFormSymmetric,
        });
    }

    let centered = target.centered();
    let blocked = |eps: f64| -> bool { worst_det_h2(&centered, eps) < 0.0 };

    // Upward scan for the first tail mass where four-moment matching stops
    // being blocked, then bisection to 1e-6.
    const SCAN_POINTS: usize = 512;
    let mut lo = 0.0;
    let mut hi = TAIL_MASS_CAP;
    let mut found = false;
    for i in 1..=SCAN_POINTS {
        let eps = TAIL_MASS_CAP * i as f64 / SCAN_POINTS as f64;
        if !blocked(eps) {
            hi = eps;
            found = true;
            break;
        }
        lo = eps;
    }
    let value = if !found {
        TAIL_MASS_CAP
    } else {
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            if blocked(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    if value <= 0.0 {
        return Err(Error::Numerical(
            "numerical threshold sweep collapsed to zero".into(),
        ));
    }
    Ok(TailMassThreshold {
        value,
        entropy_threshold_bits: binary_entropy_nats(value) / std::f64::consts::LN_2,
        method: ThresholdMethod::NumericalGeneral,
    })
}

/// Maximum of det H_2 over all admissible anchors at fixed tail mass.
/// Maximizing det H_2 is minimizing the quartic p over |x0| <= r, since
/// its coefficient (eps - 1) is negative.
fn worst_det_h2(centered: &TargetMoments, eps: f64) -> f64 {
    let (m2, m3, m4) = (
        centered.moment(2).unwrap(),
        centered.moment(3).unwrap(),
        centered.moment(4).unwrap(),
    );
    let r = (eps / (1.0 - eps) * m2).sqrt();
    let p_min = min_quartic_on_interval(m2, m3, m4, r);
    ((eps - 1.0) * p_min + eps * (m2 * m4 - m3 * m3) - m2 * m2 * m2) / (eps * eps * eps)
}

/// Minimum of p(x) = m2 x^4 - 2 m3 x^3 + (m4 - 3 m2^2) x^2 + 2 m2 m3 x on
/// [-r, r]: dense grid, then Newton polish on p' from the best grid point.
fn min_quartic_on_interval(m2: f64, m3: f64, m4: f64, r: f64) -> f64 {
    let c2 = m4 - 3.0 * m2 * m2;
    let p = |x: f64| m2 * x.powi(4) - 2.0 * m3 * x.powi(3) + c2 * x * x + 2.0 * m2 * m3 * x;
    let dp = |x: f64| 4.0 * m2 * x.powi(3) - 6.0 * m3 * x * x + 2.0 * c2 * x + 2.0 * m2 * m3;
    let ddp = |x: f64| 12.0 * m2 * x * x - 12.0 * m3 * x + 2.0 * c2;

    const GRID: usize = 2048;
    let mut best_x = -r;
    let mut best = p(-r);
    for i in 0..=GRID {
        let x = -r + 2.0 * r * i as f64 / GRID as f64;
        let v = p(x);
        if v < best {
            best = v;
            best_x = x;
        }
    }
    // Polish the interior minimum; endpoints are already covered.
    let mut x = best_x;
    for _ in 0..16 {
        let d2 = ddp(x);
        if d2.abs() < 1e-300 {
            break;
        }
        let step = dp(x) / d2;
        x = (x - step).clamp(-r, r);
        if step.abs() < 1e-14 * (1.0 + r) {
            break;
        }
    }
    best.min(p(x))
}

// ---------------------------------------------------------------------------
// Four-moment certificate
// ---------------------------------------------------------------------------

/// Resolution of the certificate sweep.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CertificateGrid {
    /// Tail-mass grid points on (0, h2^{-1}(budget)].
    pub eps_points: usize,
    /// Anchor grid points per tail mass.
    pub x0_points: usize,
    /// Fractional extension of the anchor range beyond the det H_1 = 0
    /// boundary, to confirm the first minor goes negative outside it.
    pub margin: f64,
    /// The certificate is valid when the grid maximum of
    /// min(det H_1, det H_2) stays below minus this tolerance.
    pub tolerance: f64,
}

impl Default for CertificateGrid {
    fn default() -> Self {
        CertificateGrid {
            eps_points: 512,
            x0_points: 2048,
            margin: 0.01,
            tolerance: 1e-6,
        }
    }
}

/// Outcome of the four-moment certificate sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    /// Critical tail mass of the target.
    pub eta: f64,
    /// Entropy threshold h2(eta) in bits.
    pub threshold_bits: f64,
    pub method: ThresholdMethod,
    /// Entropy budget the certificate covers, in nats.
    pub entropy_budget_nats: f64,
    pub grid: CertificateGrid,
    /// Grid maximum of min(det H_1, det H_2); negative means no admissible
    /// (tail mass, anchor) pair supports a four-moment tail.
    pub max_min_det: f64,
    pub worst_eps: f64,
    pub worst_x0: f64,
    pub valid: bool,
}

/// Sweeps every tail mass compatible with the entropy budget and every
/// admissible anchor, recording the largest value of
/// `min(det H_1, det H_2)`. A strictly negative sweep maximum certifies
/// that no distribution with entropy at most `budget_nats` matches the
/// first four target moments.
///
/// Errors when the budget reaches the target's entropy threshold — the
/// certificate is inapplicable there.
pub fn four_moment_certificate(
    target: &TargetMoments,
    budget_nats: f64,
    grid: &CertificateGrid,
) -> Result<CertificateReport> {
    if budget_nats <= 0.0 {
        return Err(Error::Domain(format!(
            "entropy budget must be positive, got {budget_nats}"
        )));
    }
    if grid.eps_points == 0 || grid.x0_points < 2 {
        return Err(Error::Config("certificate grid too small".into()));
    }
    let threshold = critical_tail_mass(target)?;
    if budget_nats >= threshold.entropy_threshold_nats() {
        return Err(Error::Precondition(format!(
            "entropy budget {budget_nats} nats is not below the threshold {} nats",
            threshold.entropy_threshold_nats()
        )));
    }
    let centered = target.centered();
    let m2 = centered.moment(2).unwrap();
    let eps_max = inverse_binary_entropy_nats(budget_nats)?;

    let mut max_min_det = f64::NEG_INFINITY;
    let (mut worst_eps, mut worst_x0) = (0.0, 0.0);
    for i in 1..=grid.eps_points {
        let eps = eps_max * i as f64 / grid.eps_points as f64;
        let r = (eps / (1.0 - eps) * m2).sqrt() * (1.0 + grid.margin);
        for j in 0..grid.x0_points {
            let x0 = -r + 2.0 * r * j as f64 / (grid.x0_points - 1) as f64;
            let minors = tail_minor_determinants(&centered, eps, x0)?;
            let v = minors.det_h1.min(minors.det_h2);
            if v > max_min_det {
                max_min_det = v;
                worst_eps = eps;
                worst_x0 = x0;
            }
        }
    }

    Ok(CertificateReport {
        eta: threshold.value,
        threshold_bits: threshold.entropy_threshold_bits,
        method: threshold.method,
        entropy_budget_nats: budget_nats,
        grid: *grid,
        max_min_det,
        worst_eps,
        worst_x0,
        valid: max_min_det < -grid.tolerance,
    })
}

/// Streams the certificate sweep as CSV with columns `eps,x0,det1,det3`
/// (full double precision), for plotting.
pub fn write_certificate_sweep<W: std::io::Write>(
    target: &TargetMoments,
    budget_nats: f64,
    grid: &CertificateGrid,
    out: &mut W,
) -> Result<()> {
    let threshold = critical_tail_mass(target)?;
    if budget_nats <= 0.0 || budget_nats >= threshold.entropy_threshold_nats() {
        return Err(Error::Precondition(
            "entropy budget must lie strictly between 0 and the threshold".into(),
        ));
    }
    let centered = target.centered();
    let m2 = centered.moment(2).unwrap();
    let eps_max = inverse_binary_entropy_nats(budget_nats)?;
    writeln!(out, "eps,x0,det1,det3")?;
    for i in 1..=grid.eps_points {
        let eps = eps_max * i as f64 / grid.eps_points as f64;
        let r = (eps / (1.0 - eps) * m2).sqrt() * (1.0 + grid.margin);
        for j in 0..grid.x0_points {
            let x0 = -r + 2.0 * r * j as f64 / (grid.x0_points - 1) as f64;
            let minors = tail_minor_determinants(&centered, eps, x0)?;
            writeln!(
                out,
                "{eps:.16e},{x0:.16e},{:.16e},{:.16e}",
                minors.det_h1, minors.det_h2
            )?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Three-moment matching
// ---------------------------------------------------------------------------

/// How the entropy budget is spent by [`match_three_moments_with_mode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchMode {
    /// Tail mass from h2(eps) = budget/2: half the budget pays for the
    /// mixing variable, leaving the tail far more entropy than its two
    /// atoms can use. Simple and always strictly inside the budget.
    HalfBudget,
    /// Tail mass chosen by bisection so the composed entropy lands within
    /// a relative 1e-6 of the budget; falls back to `HalfBudget` when the
    /// bisection cannot certify the budget.
    Tight,
}

/// Builds a distribution with at most three atoms whose first three
/// moments equal the target's, with entropy at most `budget_nats`.
/// Uses [`MatchMode::HalfBudget`].
pub fn match_three_moments(target: &TargetMoments, budget_nats: f64) -> Result<AtomicDistribution> {
    match_three_moments_with_mode(target, budget_nats, MatchMode::HalfBudget)
}

/// Three-moment matching with an explicit budget mode.
///
/// Construction: center the target; pick the tail mass from the mode; put
/// the anchor at zero (any anchor with `x0^2 < (eps/(1-eps)) m2` keeps the
/// tail feasible, and zero maximizes the slack); extend the three induced
/// tail moments by the minimal fourth moment, which makes the tail Hankel
/// matrix singular and the tail an exact two-atom measure; recover it,
/// compose, and undo the centering shift.
pub fn match_three_moments_with_mode(
    target: &TargetMoments,
    budget_nats: f64,
    mode: MatchMode,
) -> Result<AtomicDistribution> {
    if budget_nats <= 0.0 {
        return Err(Error::Domain(format!(
            "entropy budget must be positive, got {budget_nats} nats"
        )));
    }
    target.require_order(3)?;
    let centered = target.centered();
    let mean = target.moment(1).unwrap();

    let eps = match mode {
        MatchMode::HalfBudget => half_budget_tail_mass(budget_nats)?,
        MatchMode::Tight => tight_tail_mass(&centered, budget_nats)?,
    };
    let composed = compose_matched(&centered, eps)?;
    let shifted = if mean == 0.0 {
        composed
    } else {
        composed.affine(1.0, mean)?
    };
    debug_assert!(shifted.entropy_nats() <= budget_nats + 1e-9);
    Ok(shifted)
}

fn half_budget_tail_mass(budget_nats: f64) -> Result<f64> {
    let cap = std::f64::consts::LN_2 * (1.0 - 1e-12);
    inverse_binary_entropy_nats((0.5 * budget_nats).min(cap))
}

/// Bisection on the tail mass so the composed entropy approaches the
/// budget from below. The two-atom tail's entropy varies with the tail
/// mass, so the map is evaluated through the full construction.
fn tight_tail_mass(centered: &TargetMoments, budget_nats: f64) -> Result<f64> {
    let cap = std::f64::consts::LN_2 * (1.0 - 1e-12);
    let goal = budget_nats * (1.0 - 1e-6);
    let mut lo = half_budget_tail_mass(budget_nats)?;
    let mut hi = inverse_binary_entropy_nats(goal.min(cap))?;
    if hi <= lo {
        return Ok(lo);
    }
    let entropy_at = |eps: f64| -> Result<f64> { Ok(compose_matched(centered, eps)?.entropy_nats()) };
    // The half-budget point is always feasible; expand toward the cap.
    if entropy_at(hi)? <= goal {
        return Ok(hi);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if entropy_at(mid)? <= goal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Core construction at fixed tail mass on a centered target.
fn compose_matched(centered: &TargetMoments, eps: f64) -> Result<AtomicDistribution> {
    let m2 = centered.moment(2).unwrap();
    let radius = (eps / (1.0 - eps) * m2).sqrt();
    // Anchor candidates: zero first, then interior fractions of the
    // admissible radius in case a tail atom lands on the anchor.
    let candidates = [0.0, radius / 8.0, -radius / 8.0, radius / 4.0, -radius / 4.0];
    let mut last_err = Error::Numerical("three-moment construction failed".into());
    for &x0 in &candidates {
        match try_anchor(centered, eps, x0) {
            Ok(dist) => return Ok(dist),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

fn try_anchor(centered: &TargetMoments, eps: f64, x0: f64) -> Result<AtomicDistribution> {
    let induced = induced_tail_moments(centered, eps, x0, 3)?;
    let s4 = minimal_extension(&induced)?;
    let mut values = induced.values().to_vec();
    values.push(s4);
    let tail = AtomicDistribution::from_moments(&MomentSequence::new(values)?, 1e-8)?;
    let dec = Decomposition::new(x0, eps, tail)?;
    Ok(compose(&dec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::gauss_hermite;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    const LN_2: f64 = std::f64::consts::LN_2;

    fn dist(atoms: &[f64], weights: &[f64]) -> AtomicDistribution {
        AtomicDistribution::new(atoms.to_vec(), weights.to_vec()).unwrap()
    }

    #[test]
    fn compose_reproduces_three_point_hermite() {
        let root3 = 3.0_f64.sqrt();
        let tail = dist(&[-root3, root3], &[0.5, 0.5]);
        let dec = Decomposition::new(0.0, 1.0 / 3.0, tail).unwrap();
        let x = compose(&dec);
        assert_eq!(x.len(), 3);
        for (got, want) in x.atoms().iter().zip(&[-root3, 0.0, root3]) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-14);
        }
        for (got, want) in x.weights().iter().zip(&[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-14);
        }
        // Entropy identity: h2(1/3) + 1/3 bits, and it matches GH(3).
        let expect_bits = 0.9182958340544895 + 1.0 / 3.0;
        assert_abs_diff_eq!(x.entropy(2.0), expect_bits, epsilon = 1e-12);
        let gh3 = gauss_hermite(3).unwrap();
        for (a, b) in x.atoms().iter().zip(gh3.atoms()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn compose_two_atoms_and_collision() {
        let dec = Decomposition::new(0.0, 0.25, AtomicDistribution::point(2.0).unwrap()).unwrap();
        let x = compose(&dec);
        assert_eq!(x.len(), 2);
        assert_abs_diff_eq!(x.entropy_nats(), binary_entropy_nats(0.25), epsilon = 1e-14);

        // Anchor colliding with the tail atom violates the invariant.
        assert!(matches!(
            Decomposition::new(5.0, 0.25, AtomicDistribution::point(5.0).unwrap()),
            Err(Error::InvariantViolation(_))
        ));
        // Tail mass outside (0, 1/2).
        assert!(Decomposition::new(0.0, 0.5, AtomicDistribution::point(1.0).unwrap()).is_err());
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&dist(&[0.0, 3.0], &[0.9, 0.1])).unwrap();
        assert_eq!(d.anchor(), 0.0);
        assert_abs_diff_eq!(d.tail_mass(), 0.1, epsilon = 1e-15);
        assert_eq!(d.tail().atoms(), &[3.0]);

        let gh3 = gauss_hermite(3).unwrap();
        let d = decompose(&gh3).unwrap();
        assert_abs_diff_eq!(d.anchor(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.tail_mass(), 1.0 / 3.0, epsilon = 1e-13);
        assert_eq!(d.tail().len(), 2);
        assert_abs_diff_eq!(d.tail().weights()[0], 0.5, epsilon = 1e-13);

        assert!(matches!(
            decompose(&dist(&[-1.0, 1.0], &[0.5, 0.5])),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(matches!(
            decompose(&AtomicDistribution::point(1.0).unwrap()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn entropy_identity_and_roundtrip_on_random_decompositions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let mut atoms: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
            atoms.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if atoms.windows(2).any(|w| w[1] - w[0] < 1e-3) {
                continue;
            }
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let tail =
                AtomicDistribution::new(atoms, raw.iter().map(|w| w / total).collect()).unwrap();
            let anchor = 5.0 + rng.gen_range(0.0..1.0);
            let eps = rng.gen_range(0.01..0.49);
            let dec = Decomposition::new(anchor, eps, tail.clone()).unwrap();
            let x = compose(&dec);

            // Exact entropy identity in nats.
            let identity = binary_entropy_nats(eps) + eps * tail.entropy_nats();
            assert_abs_diff_eq!(x.entropy_nats(), identity, epsilon = 1e-12);

            // compose then decompose gives the decomposition back; the
            // anchor always dominates because 1 - eps > 1/2 >= eps * w.
            let back = decompose(&x).unwrap();
            assert_abs_diff_eq!(back.anchor(), anchor, epsilon = 1e-12);
            assert_abs_diff_eq!(back.tail_mass(), eps, epsilon = 1e-12);
            assert_eq!(back.tail().len(), tail.len());
            for (a, b) in back.tail().atoms().iter().zip(tail.atoms()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn induced_moments_examples() {
        let gaussian = TargetMoments::standard_normal();
        let s = induced_tail_moments(&gaussian, 1.0 / 3.0, 0.0, 4).unwrap();
        let expect = [1.0, 0.0, 3.0, 0.0, 9.0];
        for (got, want) in s.values().iter().zip(&expect) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }

        assert!(induced_tail_moments(&gaussian, 0.5, 0.0, 2).is_err());

        let s = induced_tail_moments(&gaussian, 0.25, 1.0, 2).unwrap();
        assert_abs_diff_eq!(s.values()[1], -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.values()[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn minor_determinants_gaussian_boundary() {
        let gaussian = TargetMoments::standard_normal();

        // Exactly at the threshold the 3x3 determinant vanishes.
        let minors = tail_minor_determinants(&gaussian, 1.0 / 3.0, 0.0).unwrap();
        assert_abs_diff_eq!(minors.det_h2, 0.0, epsilon = 1e-12);

        // Below it the determinant is negative, above it positive.
        let below = tail_minor_determinants(&gaussian, 0.2, 0.0).unwrap();
        assert_abs_diff_eq!(below.det_h2, -50.0, epsilon = 1e-10);
        let above = tail_minor_determinants(&gaussian, 0.4, 0.0).unwrap();
        assert!(above.det_h2 > 0.0);

        // Uncentered targets are rejected.
        let shifted = TargetMoments::new(vec![1.0, 2.0, 4.0, 10.0], false).unwrap();
        assert!(matches!(
            tail_minor_determinants(&shifted, 0.2, 0.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn closed_form_matches_hankel_minors() {
        // det H_1 and det H_2 of the induced moments: closed form versus
        // direct linear algebra, over random targets and parameters.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let m2 = rng.gen_range(0.2..4.0);
            let m3 = rng.gen_range(-2.0..2.0);
            let m4 = m2 * m2 * (1.0 + rng.gen_range(0.05..4.0)) + m3 * m3 / m2;
            let target = TargetMoments::new(vec![0.0, m2, m3, m4], false).unwrap();
            let eps = rng.gen_range(0.01..0.49);
            let r = (eps / (1.0 - eps) * m2).sqrt();
            let x0 = rng.gen_range(-1.5 * r..1.5 * r);

            let minors = tail_minor_determinants(&target, eps, x0).unwrap();
            let induced = induced_tail_moments(&target, eps, x0, 4).unwrap();
            let hankel = induced.hankel(2).unwrap();
            let direct = hankel.leading_minors();
            let tol = 1e-8;
            assert!(
                (minors.det_h1 - direct[1]).abs() <= tol * (1.0 + direct[1].abs()),
                "det H1 {} vs {}",
                minors.det_h1,
                direct[1]
            );
            assert!(
                (minors.det_h2 - direct[2]).abs() <= tol * (1.0 + direct[2].abs()),
                "det H2 {} vs {}",
                minors.det_h2,
                direct[2]
            );
        }
    }

    #[test]
    fn thresholds_for_known_targets() {
        // Standard normal: 1/3, about 0.92 bits.
        let t = critical_tail_mass(&TargetMoments::standard_normal()).unwrap();
        assert_abs_diff_eq!(t.value, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.entropy_threshold_bits, 0.9182958340544895, epsilon = 1e-12);
        assert_eq!(t.method, ThresholdMethod::ClosedFormSymmetric);

        // Uniform on [-sqrt(3), sqrt(3)]: m2 = 1, m4 = 9/5 < 3.
        let uniform = TargetMoments::new(vec![0.0, 1.0, 0.0, 9.0 / 5.0], true).unwrap();
        let t = critical_tail_mass(&uniform).unwrap();
        assert_abs_diff_eq!(t.value, 4.0 / 9.0, epsilon = 1e-12);

        // Unit-variance Laplace: m4 = 6 >= 3.
        let laplace = TargetMoments::new(vec![0.0, 1.0, 0.0, 6.0], true).unwrap();
        let t = critical_tail_mass(&laplace).unwrap();
        assert_abs_diff_eq!(t.value, 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn numerical_threshold_agrees_with_closed_form() {
        // Same moments rerun through the general path (symmetric flag off).
        for (m2, m3, m4, expect) in [
            (1.0, 0.0, 3.0, 1.0 / 3.0),
            (1.0, 0.0, 9.0 / 5.0, 4.0 / 9.0),
            (1.0, 0.0, 6.0, 1.0 / 6.0),
            (2.0, 0.0, 12.0, 1.0 / 3.0),
        ] {
            let target = TargetMoments::new(vec![0.0, m2, m3, m4], false).unwrap();
            let t = critical_tail_mass(&target).unwrap();
            assert_eq!(t.method, ThresholdMethod::NumericalGeneral);
            assert!(
                (t.value - expect).abs() < 1e-4,
                "numerical threshold {} vs closed form {expect}",
                t.value
            );
        }
    }

    #[test]
    fn gaussian_blocked_below_threshold() {
        // For any tail mass below 1/3, every admissible anchor keeps
        // det H_2 negative.
        let centered = TargetMoments::standard_normal().centered();
        for i in 1..=50 {
            let eps = (1.0 / 3.0 - 1e-3) * i as f64 / 50.0;
            assert!(worst_det_h2(&centered, eps) < 0.0, "eps = {eps}");
        }
    }

    #[test]
    fn certificate_for_gaussian() {
        let gaussian = TargetMoments::standard_normal();
        let grid = CertificateGrid {
            eps_points: 64,
            x0_points: 256,
            ..CertificateGrid::default()
        };
        for h_bits in [0.9_f64, 0.5] {
            let report = four_moment_certificate(&gaussian, h_bits * LN_2, &grid).unwrap();
            assert!(report.valid, "h = {h_bits} bits: {report:?}");
            assert!(report.max_min_det < -1e-6);
        }
        // Above the threshold the certificate does not apply.
        assert!(matches!(
            four_moment_certificate(&gaussian, 1.0 * LN_2, &grid),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn three_moment_match_gaussian() {
        let gaussian = TargetMoments::standard_normal();
        for h_bits in [0.4_f64, 0.05] {
            let budget = h_bits * LN_2;
            let x = match_three_moments(&gaussian, budget).unwrap();
            assert!(x.len() <= 3);
            assert!(x.entropy_nats() <= budget + 1e-9, "entropy over budget");
            let m = x.moments(4);
            assert_abs_diff_eq!(m.values()[1], 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(m.values()[2], 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(m.values()[3], 0.0, epsilon = 1e-9);
            // The fourth moment cannot also match below the threshold.
            assert!((m.values()[4] - 3.0).abs() > 0.1);
        }
    }

    #[test]
    fn three_moment_match_asymmetric_target() {
        // Centered exponential: m2 = 1, m3 = 2.
        let target = TargetMoments::new(vec![0.0, 1.0, 2.0, 9.0], false).unwrap();
        let budget = 0.3 * LN_2;
        let x = match_three_moments(&target, budget).unwrap();
        assert!(x.len() <= 3);
        assert!(x.entropy_nats() <= budget + 1e-9);
        let m = x.moments(3);
        assert_abs_diff_eq!(m.values()[1], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(m.values()[2], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(m.values()[3], 2.0, epsilon = 1e-9);
    }

    #[test]
    fn three_moment_match_uncentered_target() {
        // Shifted target: matching must reproduce the raw moments.
        let target = TargetMoments::new(vec![1.5, 3.25, 8.875], false).unwrap();
        let x = match_three_moments(&target, 0.5 * LN_2).unwrap();
        let m = x.moments(3);
        assert_abs_diff_eq!(m.values()[1], 1.5, epsilon = 1e-9);
        assert_abs_diff_eq!(m.values()[2], 3.25, epsilon = 1e-9);
        assert_abs_diff_eq!(m.values()[3], 8.875, epsilon = 1e-9);
    }

    #[test]
    fn tight_mode_uses_more_of_the_budget() {
        let gaussian = TargetMoments::standard_normal();
        let budget = 0.4 * LN_2;
        let half = match_three_moments_with_mode(&gaussian, budget, MatchMode::HalfBudget).unwrap();
        let tight = match_three_moments_with_mode(&gaussian, budget, MatchMode::Tight).unwrap();
        assert!(tight.entropy_nats() <= budget + 1e-9);
        assert!(tight.entropy_nats() >= half.entropy_nats());
        // Both still match three moments.
        let m = tight.moments(3);
        assert_abs_diff_eq!(m.values()[2], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn matching_commutes_with_affine_maps() {
        // Match then map versus map then match.
        let base = TargetMoments::new(vec![0.0, 1.0, 0.4, 3.5], false).unwrap();
        let budget = 0.6 * LN_2;
        let (scale, shift) = (2.5, -0.75);

        let matched = match_three_moments(&base, budget).unwrap();
        let mapped_after = matched.affine(scale, shift).unwrap();

        // Moments of scale*W + shift from the base moments.
        let m1 = shift;
        let m2 = scale * scale + shift * shift;
        let m3 = scale.powi(3) * 0.4 + 3.0 * scale * scale * shift + shift.powi(3);
        let mapped_target = TargetMoments::new(vec![m1, m2, m3], false).unwrap();
        let matched_mapped = match_three_moments(&mapped_target, budget).unwrap();

        assert_eq!(mapped_after.len(), matched_mapped.len());
        for (a, b) in mapped_after.atoms().iter().zip(matched_mapped.atoms()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
        assert_abs_diff_eq!(
            mapped_after.entropy_nats(),
            matched_mapped.entropy_nats(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn target_moment_validation() {
        assert!(TargetMoments::new(vec![0.0], true).is_err());
        // Zero variance.
        assert!(TargetMoments::new(vec![1.0, 1.0], false).is_err());
        // Symmetric flag with nonzero odd moment.
        assert!(TargetMoments::new(vec![0.0, 1.0, 0.5, 3.0], true).is_err());
        // Fourth moment at most the squared second moment.
        assert!(TargetMoments::new(vec![0.0, 1.0, 0.0, 0.9], true).is_err());
        // Centering the exponential distribution (raw moments 1, 2, 6, 24).
        let exp = TargetMoments::new(vec![1.0, 2.0, 6.0, 24.0], false).unwrap();
        let c = exp.centered();
        assert_abs_diff_eq!(c.moment(1).unwrap(), 0.0);
        assert_abs_diff_eq!(c.moment(2).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.moment(3).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.moment(4).unwrap(), 9.0, epsilon = 1e-12);
    }
}
