//! The measure of maximal entropy (Parry measure) of a primitive SFT, built
//! from the Perron eigendata of the transition matrix: exact cylinder
//! measures, correlations, Gibbs-constant audits, and a seeded orbit sampler.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::rng_from_seed;
use crate::sft::Sft;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GibbsError {
    #[error("power iteration did not reach tolerance within {0} iterations")]
    ConvergenceFailure(usize),
    #[error("enumerating {needed} words of length {n} exceeds the budget of {budget}")]
    BudgetExceeded { n: usize, needed: u64, budget: u64 },
    #[error("correlation windows overlap: offset {n} < first window length {len_e}")]
    WindowOverlap { n: usize, len_e: usize },
}

/// Perron–Frobenius eigendata of the transition matrix.
///
/// `right` and `left` are the strictly positive eigenvectors, normalized so
/// that left·right = 1; `theta` is |lambda_2|/lambda_1, the mixing rate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerronData {
    pub lambda: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
    pub theta: f64,
    pub entropy: f64,
}

const POWER_ITER_BUDGET: usize = 200_000;
const POWER_ITER_TOL: f64 = 1e-13;

/// Compute Perron eigendata by power iteration (vectors) plus a full dense
/// eigensolve for the subdominant modulus; m is small throughout.
pub fn perron(sft: &Sft) -> Result<PerronData, GibbsError> {
    let m = sft.m();
    let a: Vec<Vec<f64>> = sft
        .allowed()
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    let at: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| a[j][i]).collect())
        .collect();
    let (lambda, mut right) = power_iteration(&a)?;
    let (_, mut left) = power_iteration(&at)?;
    // normalize: max(right) = 1, then scale left so left·right = 1
    let rmax = right.iter().cloned().fold(0.0, f64::max);
    right.iter_mut().for_each(|x| *x /= rmax);
    let dot: f64 = left.iter().zip(&right).map(|(l, r)| l * r).sum();
    left.iter_mut().for_each(|x| *x /= dot);

    let mat = nalgebra::DMatrix::<f64>::from_fn(m, m, |i, j| a[i][j]);
    let mut moduli: Vec<f64> = mat.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let theta = if m >= 2 { (moduli[1] / moduli[0]).max(0.0) } else { 0.0 };

    Ok(PerronData {
        lambda,
        right,
        left,
        theta,
        entropy: lambda.ln(),
    })
}

fn power_iteration(a: &[Vec<f64>]) -> Result<(f64, Vec<f64>), GibbsError> {
    let m = a.len();
    let mut v = vec![1.0; m];
    for _ in 0..POWER_ITER_BUDGET {
        let mut next = vec![0.0; m];
        for i in 0..m {
            for j in 0..m {
                next[i] += a[i][j] * v[j];
            }
        }
        let norm = next.iter().cloned().fold(0.0, f64::max);
        next.iter_mut().for_each(|x| *x /= norm);
        let lambda = norm;
        // residual ||A v - lambda v||_inf against the updated iterate
        let mut resid: f64 = 0.0;
        for i in 0..m {
            let mut av = 0.0;
            for j in 0..m {
                av += a[i][j] * next[j];
            }
            resid = resid.max((av - lambda * next[i]).abs());
        }
        v = next;
        if resid <= POWER_ITER_TOL * lambda {
            // one Rayleigh refinement of lambda
            let mut av = vec![0.0; m];
            for i in 0..m {
                for j in 0..m {
                    av[i] += a[i][j] * v[j];
                }
            }
            let num: f64 = av.iter().zip(&v).map(|(x, y)| x * y).sum();
            let den: f64 = v.iter().map(|y| y * y).sum();
            return Ok((num / den, v));
        }
    }
    Err(GibbsError::ConvergenceFailure(POWER_ITER_BUDGET))
}

/// The Parry measure: stationary distribution `pi` and Markov kernel `trans`,
/// with pi_i = l_i r_i and p_ij = allowed[i][j] r_j / (lambda r_i).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParryMeasure {
    pub pi: Vec<f64>,
    pub trans: Vec<Vec<f64>>,
    pub lambda: f64,
    pub theta: f64,
    pub entropy: f64,
}

impl ParryMeasure {
    pub fn new(sft: &Sft) -> Result<ParryMeasure, GibbsError> {
        let pd = perron(sft)?;
        Ok(ParryMeasure::from_perron(sft, &pd))
    }

    pub fn from_perron(sft: &Sft, pd: &PerronData) -> ParryMeasure {
        let m = sft.m();
        let total: f64 = (0..m).map(|i| pd.left[i] * pd.right[i]).sum();
        let pi: Vec<f64> = (0..m).map(|i| pd.left[i] * pd.right[i] / total).collect();
        let trans: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if sft.allowed()[i][j] == 1 {
                            pd.right[j] / (pd.lambda * pd.right[i])
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        ParryMeasure {
            pi,
            trans,
            lambda: pd.lambda,
            theta: pd.theta,
            entropy: pd.entropy,
        }
    }

    pub fn m(&self) -> usize {
        self.pi.len()
    }

    /// Exact measure of the cylinder with the given base word; 0 for
    /// inadmissible words (including out-of-range symbols), 1 for the empty
    /// word (the whole space).
    pub fn cylinder_measure(&self, w: &[u8]) -> f64 {
        if w.is_empty() {
            return 1.0;
        }
        let m = self.m();
        if w.iter().any(|&s| s as usize >= m) {
            return 0.0;
        }
        let mut mu = self.pi[w[0] as usize];
        for p in w.windows(2) {
            mu *= self.trans[p[0] as usize][p[1] as usize];
            if mu == 0.0 {
                return 0.0;
            }
        }
        mu
    }

    /// Extremes of mu(I_n(w))·lambda^n over admissible words of length n.
    /// A valid Gibbs constant at depth n is gamma_n = max(max, 1/min).
    pub fn gibbs_ratio_bounds(
        &self,
        sft: &Sft,
        n: usize,
        budget: u64,
    ) -> Result<(f64, f64), GibbsError> {
        assert!(n >= 1);
        let count = sft.count_words(n as u64);
        let needed = count.ln.exp().ceil() as u64;
        if count.exact.bits() > 63 || needed > budget {
            return Err(GibbsError::BudgetExceeded { n, needed, budget });
        }
        let scale = self.lambda.powi(n as i32);
        let mut min = f64::INFINITY;
        let mut max = 0.0f64;
        sft.for_each_word(n, &mut |w| {
            let v = self.cylinder_measure(w) * scale;
            min = min.min(v);
            max = max.max(v);
        });
        Ok((min, max))
    }

    /// Exact correlation mu(I(e) ∩ sigma^{-n} I(f)) − mu(I(e))·mu(I(f)),
    /// computed by chaining kernel powers across the gap of n − len(e) edges.
    pub fn correlation(&self, e: &[u8], f: &[u8], n: usize) -> Result<f64, GibbsError> {
        if n < e.len() {
            return Err(GibbsError::WindowOverlap { n, len_e: e.len() });
        }
        let mu_e = self.cylinder_measure(e);
        let mu_f = self.cylinder_measure(f);
        if mu_e == 0.0 || mu_f == 0.0 || e.is_empty() || f.is_empty() {
            return Ok(-mu_e * mu_f);
        }
        // path weight of e, then n - len(e) + 1 kernel steps to the head of f,
        // then the path weight of f without its initial distribution
        let steps = n - e.len() + 1;
        let p = mat_pow_f64(&self.trans, steps as u64);
        let mut joint = self.pi[e[0] as usize];
        for w in e.windows(2) {
            joint *= self.trans[w[0] as usize][w[1] as usize];
        }
        joint *= p[*e.last().unwrap() as usize][f[0] as usize];
        for w in f.windows(2) {
            joint *= self.trans[w[0] as usize][w[1] as usize];
        }
        Ok(joint - mu_e * mu_f)
    }

    /// A word of the given length drawn from the stationary chain.
    pub fn sample_orbit(&self, seed: u64, length: usize) -> Vec<u8> {
        assert!(length >= 1);
        let mut rng = rng_from_seed(seed);
        self.sample_orbit_rng(&mut rng, length)
    }

    pub fn sample_orbit_rng(&self, rng: &mut impl Rng, length: usize) -> Vec<u8> {
        let m = self.m();
        let mut w = Vec::with_capacity(length);
        let mut cur = sample_categorical(rng, &self.pi);
        w.push(cur as u8);
        // row cumulative sums once; the linear scan is fast for tiny m
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut acc = 0.0;
                self.trans[i]
                    .iter()
                    .map(|&p| {
                        acc += p;
                        acc
                    })
                    .collect()
            })
            .collect();
        for _ in 1..length {
            let u: f64 = rng.gen();
            let row = &rows[cur];
            cur = row.iter().position(|&c| u < c).unwrap_or(m - 1);
            w.push(cur as u8);
        }
        w
    }
}

fn sample_categorical(rng: &mut impl Rng, p: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        acc += pi;
        if u < acc {
            return i;
        }
    }
    p.len() - 1
}

fn mat_mul_f64(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = a.len();
    let mut out = vec![vec![0.0; m]; m];
    for i in 0..m {
        for k in 0..m {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn mat_pow_f64(a: &[Vec<f64>], mut e: u64) -> Vec<Vec<f64>> {
    let m = a.len();
    let mut result: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul_f64(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul_f64(&base, &base);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const PHI: f64 = 1.618033988749895;

    #[test]
    fn full_shift_perron() {
        let s = Sft::full_shift(2);
        let pd = perron(&s).unwrap();
        assert_abs_diff_eq!(pd.lambda, 2.0, epsilon = 1e-12);
        assert!(pd.theta.abs() < 1e-12);
        let mu = ParryMeasure::from_perron(&s, &pd);
        assert_abs_diff_eq!(mu.pi[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(mu.cylinder_measure(&[0, 1, 0]), 0.125, epsilon = 1e-15);
    }

    #[test]
    fn golden_mean_perron() {
        let s = Sft::golden_mean();
        let pd = perron(&s).unwrap();
        assert_abs_diff_eq!(pd.lambda, PHI, epsilon = 1e-10);
        assert_abs_diff_eq!(pd.theta, (PHI - 1.0) / PHI, epsilon = 1e-10);
        assert_abs_diff_eq!(pd.entropy, PHI.ln(), epsilon = 1e-12);
    }

    #[test]
    fn golden_mean_cylinders() {
        let mu = ParryMeasure::new(&Sft::golden_mean()).unwrap();
        assert_abs_diff_eq!(mu.cylinder_measure(&[0]), 0.7236068, epsilon = 1e-7);
        assert_abs_diff_eq!(mu.cylinder_measure(&[0, 0]), 0.4472136, epsilon = 1e-7);
        assert_eq!(mu.cylinder_measure(&[1, 1]), 0.0);
        assert_eq!(mu.cylinder_measure(&[]), 1.0);
        assert_eq!(mu.cylinder_measure(&[5]), 0.0);
    }

    #[test]
    fn gibbs_bounds_examples() {
        let full = Sft::full_shift(2);
        let mu = ParryMeasure::new(&full).unwrap();
        let (lo, hi) = mu.gibbs_ratio_bounds(&full, 6, 1 << 20).unwrap();
        assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-10);

        let gm = Sft::golden_mean();
        let mu = ParryMeasure::new(&gm).unwrap();
        let (lo, hi) = mu.gibbs_ratio_bounds(&gm, 1, 1 << 20).unwrap();
        assert_abs_diff_eq!(lo, 0.4472, epsilon = 1e-4);
        assert_abs_diff_eq!(hi, 1.1708, epsilon = 1e-4);
        let err = mu.gibbs_ratio_bounds(&gm, 10, 8).unwrap_err();
        assert!(matches!(err, GibbsError::BudgetExceeded { .. }));
    }

    #[test]
    fn correlation_examples() {
        let full = ParryMeasure::new(&Sft::full_shift(2)).unwrap();
        assert_abs_diff_eq!(full.correlation(&[0], &[0], 1).unwrap(), 0.0, epsilon = 1e-14);

        let mu = ParryMeasure::new(&Sft::golden_mean()).unwrap();
        assert_abs_diff_eq!(
            mu.correlation(&[1], &[1], 1).unwrap(),
            -0.0763932,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            mu.correlation(&[0], &[0], 2).unwrap(),
            0.0291796,
            epsilon = 1e-6
        );
        assert!(matches!(
            mu.correlation(&[0, 0], &[0], 1),
            Err(GibbsError::WindowOverlap { .. })
        ));
    }

    #[test]
    fn sampler_statistics() {
        let gm = Sft::golden_mean();
        let mu = ParryMeasure::new(&gm).unwrap();
        let w = mu.sample_orbit(42, 1_000_000);
        assert!(gm.is_admissible(&w).unwrap());
        let freq0 = w.iter().filter(|&&s| s == 0).count() as f64 / w.len() as f64;
        assert!((freq0 - 0.7236068).abs() < 0.002);
        // determinism
        assert_eq!(mu.sample_orbit(42, 100), mu.sample_orbit(42, 100));
        // prefix property under extension (same seed, longer word)
        let short = mu.sample_orbit(7, 100);
        let long = mu.sample_orbit(7, 200);
        assert_eq!(&long[..100], &short[..]);
    }
}
