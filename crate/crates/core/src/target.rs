//! Target-function families ψ for shrinking targets around the all-zero
//! point, exposed through Φ(N) = −log_m ψ(N) and the rate τ = lim Φ(N)/N.

use serde::{Deserialize, Serialize};

/// A family ψ with evaluator Φ(N) = −log_m ψ(N).
///
/// * `LogRate`: Φ(N) = c·log_A N with A = e^h (τ = 0);
/// * `LinearRate`: Φ(N) = τ·N;
/// * `PowerRate`: Φ(N) = N^s with s ∈ (0,1) (τ = 0, regular);
/// * `Table`: explicit (N, Φ(N)) pairs, linearly interpolated — monotonicity
///   is the caller's responsibility.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum TargetFunction {
    #[serde(rename = "LOG_RATE")]
    LogRate { c: f64, entropy: f64 },
    #[serde(rename = "LINEAR_RATE")]
    LinearRate { tau: f64 },
    #[serde(rename = "POWER_RATE")]
    PowerRate { s: f64 },
    #[serde(rename = "TABLE")]
    Table { points: Vec<(f64, f64)> },
}

impl TargetFunction {
    pub fn log_rate(c: f64, entropy: f64) -> Self {
        assert!(entropy > 0.0);
        TargetFunction::LogRate { c, entropy }
    }

    pub fn linear_rate(tau: f64) -> Self {
        assert!(tau >= 0.0);
        TargetFunction::LinearRate { tau }
    }

    pub fn power_rate(s: f64) -> Self {
        assert!(s > 0.0 && s < 1.0, "power exponent must lie in (0,1)");
        TargetFunction::PowerRate { s }
    }

    /// Φ(N) as a nonnegative float; defined for real N >= 1.
    pub fn phi(&self, n: f64) -> f64 {
        debug_assert!(n >= 1.0);
        match self {
            TargetFunction::LogRate { c, entropy } => c * n.ln() / entropy,
            TargetFunction::LinearRate { tau } => tau * n,
            TargetFunction::PowerRate { s } => n.powf(*s),
            TargetFunction::Table { points } => interpolate(points, n),
        }
    }

    /// The exponential shrinking rate τ = lim Φ(N)/N where known exactly;
    /// for tables, a crude final-slope estimate.
    pub fn tau(&self) -> f64 {
        match self {
            TargetFunction::LogRate { .. } | TargetFunction::PowerRate { .. } => 0.0,
            TargetFunction::LinearRate { tau } => *tau,
            TargetFunction::Table { points } => match points.last() {
                Some(&(n, phi)) if n > 0.0 => phi / n,
                _ => 0.0,
            },
        }
    }

    /// Strictly increasing in N? (What the Cantor builders require.)
    pub fn strictly_increasing(&self) -> bool {
        match self {
            TargetFunction::LogRate { c, .. } => *c > 0.0,
            TargetFunction::LinearRate { tau } => *tau > 0.0,
            TargetFunction::PowerRate { .. } => true,
            TargetFunction::Table { points } => points.windows(2).all(|w| w[1].1 > w[0].1),
        }
    }

    /// Largest integer n in [1, cap] with Φ(n) <= y, by bisection (requires a
    /// strictly increasing family). Returns 1 when even Φ(1) > y.
    pub fn inv_floor(&self, y: f64, cap: u64) -> u64 {
        debug_assert!(self.strictly_increasing());
        if self.phi(1.0) > y {
            return 1;
        }
        let (mut lo, mut hi) = (1u64, 2u64);
        while hi <= cap && self.phi(hi as f64) <= y {
            lo = hi;
            hi = hi.saturating_mul(2);
        }
        let mut hi = hi.min(cap);
        // invariant: phi(lo) <= y < phi(hi+1-ish); bisect for the boundary
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.phi(mid as f64) <= y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if self.phi(hi as f64) <= y {
            hi
        } else {
            lo
        }
    }
}

fn interpolate(points: &[(f64, f64)], n: f64) -> f64 {
    assert!(!points.is_empty(), "table target needs at least one point");
    if n <= points[0].0 {
        return points[0].1;
    }
    for w in points.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if n <= x1 {
            return y0 + (y1 - y0) * (n - x0) / (x1 - x0);
        }
    }
    points.last().unwrap().1
}
