//! Explicit Cantor constructions realizing prescribed run-length behavior,
//! their mass distributions and local-dimension curves, and the closed-form
//! dimension evaluators for eventually-always hitting sets and level sets.
//!
//! Two families of level sequences are built:
//!
//! * `Section4`: geometric levels n_k = ⌊(b/a)^{k+k0}⌋+1 (with a separate
//!   seeding for a = 0) targeting liminf a and limsup b of L_N/N;
//! * `Case2`..`Case6`: Φ-driven levels n_k, d_k for sub-linear targets,
//!   parameterized by an integer P >= 3, whose mass distribution certifies
//!   dimension at least (1 - 2/P)·dim_H Σ.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::rng_from_seed;
use crate::sft::Sft;
use crate::target::TargetFunction;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CantorError {
    #[error("empty regime: b = {b} < {bound} = a/(1-τa) makes the level set empty")]
    EmptyRegime { a: f64, b: f64, bound: f64 },
    #[error("seed search failed: {0}")]
    SeedSearchFailure(String),
    #[error("level {0} exceeds the built depth {1}")]
    DepthExceeded(u32, u32),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid pair: a = {a} > b = {b}")]
    InvalidPair { a: f64, b: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Variant {
    Section4,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
}

impl Variant {
    pub fn tag(&self) -> &'static str {
        match self {
            Variant::Section4 => "SECTION4",
            Variant::Case2 => "CASE2",
            Variant::Case3 => "CASE3",
            Variant::Case4 => "CASE4",
            Variant::Case5 => "CASE5",
            Variant::Case6 => "CASE6",
        }
    }
}

/// One level of the geometric (Section4) construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Section4Level {
    pub k: u32,
    pub n: u64,
    pub m: u64,
    pub t: u64,
    pub n_next: u64,
    pub m_next: u64,
    /// ln ♯W_k, from exact big-integer word counts
    pub ln_w: f64,
}

/// One level of the Φ-driven constructions (Case2..Case6).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateLevel {
    pub k: u32,
    pub n: u64,
    pub d: u64,
    /// number of filler blocks at this level (blocks of length d_{k-1}-1-2M)
    pub l: u64,
    pub r: u64,
    pub ln_w: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Levels {
    Section4 { k0: u64, levels: Vec<Section4Level> },
    Rate { p: u32, n0: u64, d0: u64, levels: Vec<RateLevel> },
}

/// Built level sequences for one construction instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelSequences {
    pub variant: Variant,
    pub a: f64,
    pub b: f64,
    pub gap: usize,
    pub alphabet: usize,
    pub levels: Levels,
}

pub const DEFAULT_DEPTH_BUDGET: u64 = 1_000_000;

/// Parameters for [`build_sequences`]; `phi` is required for Case2..Case6.
#[derive(Clone, Debug)]
pub struct BuildParams<'a> {
    pub a: f64,
    pub b: f64,
    pub phi: Option<&'a TargetFunction>,
    pub p: u32,
    pub depth_budget: u64,
}

impl<'a> BuildParams<'a> {
    pub fn section4(a: f64, b: f64, depth_budget: u64) -> Self {
        BuildParams {
            a,
            b,
            phi: None,
            p: 3,
            depth_budget,
        }
    }

    pub fn rate(phi: &'a TargetFunction, p: u32, depth_budget: u64) -> Self {
        BuildParams {
            a: 0.0,
            b: 0.0,
            phi: Some(phi),
            p,
            depth_budget,
        }
    }
}

const SEED_SEARCH_CAP: u64 = 1_000_000_000;

pub fn build_sequences(
    variant: Variant,
    sft: &Sft,
    params: &BuildParams,
) -> Result<LevelSequences, CantorError> {
    match variant {
        Variant::Section4 => build_section4(sft, params),
        _ => build_rate(variant, sft, params),
    }
}

fn ln_count(sft: &Sft, len: u64, cache: &mut std::collections::HashMap<u64, f64>) -> f64 {
    *cache
        .entry(len)
        .or_insert_with(|| sft.count_words(len).ln)
}

fn build_section4(sft: &Sft, params: &BuildParams) -> Result<LevelSequences, CantorError> {
    let (a, b) = (params.a, params.b);
    if !(0.0..1.0).contains(&a) || !(b > 0.0) || !b.is_finite() {
        return Err(CantorError::InvalidParams(format!(
            "SECTION4 needs 0 <= a < 1 and 0 < b < inf, got a={a}, b={b}"
        )));
    }
    let bound = a / (1.0 - a);
    if b < bound {
        return Err(CantorError::EmptyRegime { a, b, bound });
    }
    let gap = sft.gap() as u64;
    let mut cache = std::collections::HashMap::new();

    if a > 0.0 {
        if b <= bound {
            // boundary b = a/(1-a): the k0 inequality has no solution
            return Err(CantorError::SeedSearchFailure(format!(
                "b = a/(1-a) = {bound}: the k0 inequality (b(1-a)-a > 0) is degenerate"
            )));
        }
        let g = b / a; // > 1 since b > a/(1-a) > a
        let rhs = f64::max(
            a * (2.0 + b) / (b * (1.0 - a) - a),
            a * (1.0 + b) / (b * (b - a)),
        );
        let mut k0 = if rhs < 1.0 {
            0
        } else {
            (rhs.ln() / g.ln()).floor() as u64 + 1
        };
        // the level invariants hold from k0 on asymptotically; floors can bite
        // for extreme parameters, so re-validate and bump k0 if needed
        'retry: for _ in 0..64 {
            let n_of = |k: u64| (g.powi((k + k0) as i32)).floor() as u64 + 1;
            let m_of = |n: u64| ((1.0 + b) * n as f64).floor() as u64 + 1;
            let mut levels = Vec::new();
            let mut prev_mn: Option<u64> = None;
            let mut k = 1u64;
            loop {
                let n = n_of(k);
                let n_next = n_of(k + 1);
                let m = m_of(n);
                if n > (1 << 50) {
                    break;
                }
                let cap_n = n_next + (2 * gap + 1) * k;
                if cap_n > params.depth_budget {
                    break;
                }
                let ok = m > n + 2 * gap + 1
                    && m < n_next
                    && prev_mn.map_or(true, |p| m - n > p);
                if !ok {
                    k0 += 1;
                    continue 'retry;
                }
                let t = (n_next - m - 1) / (m - n);
                let block = m - n - 2 * gap - 1;
                let v_len = n_next - m - t * (m - n);
                let ln_w =
                    t as f64 * ln_count(sft, block, &mut cache) + ln_count(sft, v_len, &mut cache);
                levels.push(Section4Level {
                    k: k as u32,
                    n,
                    m,
                    t,
                    n_next,
                    m_next: m_of(n_next),
                    ln_w,
                });
                prev_mn = Some(m - n);
                k += 1;
            }
            if levels.is_empty() {
                return Err(CantorError::InvalidParams(
                    "depth budget too small for even one SECTION4 level".into(),
                ));
            }
            return Ok(LevelSequences {
                variant: Variant::Section4,
                a,
                b,
                gap: sft.gap(),
                alphabet: sft.m(),
                levels: Levels::Section4 { k0, levels },
            });
        }
        Err(CantorError::SeedSearchFailure(
            "no k0 satisfies the SECTION4 level invariants".into(),
        ))
    } else {
        // a = 0 seeding: n_{k+1} = (k + k0 + 1) n_k, m_k = ⌊(1+b)n_k⌋+⌊√n_k⌋+1
        let k0 = (b + 1.0).ceil() as u64;
        let m_of = |n: u64| {
            ((1.0 + b) * n as f64).floor() as u64 + (n as f64).sqrt().floor() as u64 + 1
        };
        let mut n1 = 24u64; // smallest integer >= 4(√2+1)^2 ≈ 23.3
        while m_of(n1) <= n1 + 2 * gap + 1 {
            n1 += 1;
        }
        let mut levels = Vec::new();
        let mut n = n1;
        let mut prev_mn: Option<u64> = None;
        let mut k = 1u64;
        loop {
            let n_next = (k + k0 + 1) * n;
            let m = m_of(n);
            let cap_n = n_next + (2 * gap + 1) * k;
            if cap_n > params.depth_budget {
                break;
            }
            if m >= n_next || prev_mn.map_or(false, |p| m - n <= p) {
                return Err(CantorError::SeedSearchFailure(
                    "SECTION4 (a=0) level invariants failed".into(),
                ));
            }
            let t = (n_next - m - 1) / (m - n);
            let block = m - n - 2 * gap - 1;
            let v_len = n_next - m - t * (m - n);
            let ln_w =
                t as f64 * ln_count(sft, block, &mut cache) + ln_count(sft, v_len, &mut cache);
            levels.push(Section4Level {
                k: k as u32,
                n,
                m,
                t,
                n_next,
                m_next: m_of(n_next),
                ln_w,
            });
            prev_mn = Some(m - n);
            n = n_next;
            k += 1;
        }
        if levels.is_empty() {
            return Err(CantorError::InvalidParams(
                "depth budget too small for even one SECTION4 level".into(),
            ));
        }
        Ok(LevelSequences {
            variant: Variant::Section4,
            a,
            b,
            gap: sft.gap(),
            alphabet: sft.m(),
            levels: Levels::Section4 { k0, levels },
        })
    }
}

fn build_rate(
    variant: Variant,
    sft: &Sft,
    params: &BuildParams,
) -> Result<LevelSequences, CantorError> {
    let phi = params
        .phi
        .ok_or_else(|| CantorError::InvalidParams("Φ-driven variants require a Φ family".into()))?;
    if phi.tau() != 0.0 {
        return Err(CantorError::InvalidParams(
            "Φ-driven variants require τ = 0 (sub-linear Φ)".into(),
        ));
    }
    if !phi.strictly_increasing() {
        return Err(CantorError::InvalidParams(
            "Φ-driven variants require strictly increasing Φ".into(),
        ));
    }
    let p = params.p;
    if p < 3 {
        return Err(CantorError::InvalidParams(format!(
            "P must be an integer >= 3, got {p}"
        )));
    }
    let (a, b) = (params.a, params.b);
    // variant-specific parameter domain (a, b prescribe liminf/limsup of L_N/Φ(N))
    match variant {
        Variant::Case2 => {
            if !(a > 0.0 && a <= b && b.is_finite()) {
                return Err(CantorError::InvalidParams(format!(
                    "CASE2 needs 0 < a <= b < inf, got a={a}, b={b}"
                )));
            }
        }
        Variant::Case3 => {
            if !(a > 0.0 && a.is_finite() && b.is_infinite()) {
                return Err(CantorError::InvalidParams(format!(
                    "CASE3 needs 0 < a < inf and b = inf, got a={a}, b={b}"
                )));
            }
        }
        Variant::Case4 => {
            if !(a == 0.0 && b > 0.0 && b.is_finite()) {
                return Err(CantorError::InvalidParams(format!(
                    "CASE4 needs a = 0 and 0 < b < inf, got a={a}, b={b}"
                )));
            }
        }
        Variant::Case5 => {
            if !(a == 0.0 && b.is_infinite()) {
                return Err(CantorError::InvalidParams(format!(
                    "CASE5 needs a = 0 and b = inf, got a={a}, b={b}"
                )));
            }
        }
        Variant::Case6 => {
            if !(a == 0.0 && b == 0.0) {
                return Err(CantorError::InvalidParams(format!(
                    "CASE6 needs a = b = 0, got a={a}, b={b}"
                )));
            }
        }
        Variant::Section4 => unreachable!(),
    }
    let gap = sft.gap() as u64;
    // d-value at a given n, per variant
    let d_of = |n: u64| -> u64 {
        let nf = n as f64;
        let ph = phi.phi(nf);
        match variant {
            Variant::Case2 | Variant::Case4 => (b * ph).floor() as u64,
            Variant::Case3 => (a * ph * (nf / ph).ln()).floor() as u64,
            Variant::Case5 => (nf * ph).sqrt().floor() as u64,
            Variant::Case6 => ph.sqrt().floor() as u64,
            Variant::Section4 => unreachable!(),
        }
    };
    // seeding threshold: Case2 needs room for the longer zero block (3M)
    let threshold = match variant {
        Variant::Case2 => p as u64 + 2 + 3 * gap,
        _ => p as u64 + 2 + 2 * gap,
    };
    let mut n0 = None;
    // d_of is nondecreasing for the monotone families we ship; find the least
    // n0 satisfying the threshold by doubling + bisection
    {
        let pred = |n: u64| d_of(n) >= threshold;
        if pred(1) {
            n0 = Some(1);
        } else {
            let mut hi = 2u64;
            while hi <= SEED_SEARCH_CAP && !pred(hi) {
                hi *= 2;
            }
            if hi <= SEED_SEARCH_CAP * 2 && pred(hi.min(SEED_SEARCH_CAP)) {
                let mut lo = hi / 2;
                let mut hi = hi.min(SEED_SEARCH_CAP);
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if pred(mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                n0 = Some(hi);
            }
        }
    }
    let n0 = n0.ok_or_else(|| {
        CantorError::SeedSearchFailure(format!(
            "no n0 <= {SEED_SEARCH_CAP} satisfies the seeding inequality (threshold {threshold})"
        ))
    })?;
    let d0 = d_of(n0);
    let mut cache = std::collections::HashMap::new();
    let mut levels: Vec<RateLevel> = Vec::new();
    let (mut n_prev, mut d_prev) = (n0, d0);
    let mut k = 1u64;
    const INV_CAP: u64 = 1 << 50;
    loop {
        let base = match variant {
            Variant::Case2 => phi.inv_floor((b / a) * phi.phi(n_prev as f64), INV_CAP),
            Variant::Case3 => {
                let ph = phi.phi(n_prev as f64);
                phi.inv_floor(ph * (n_prev as f64 / ph).ln(), INV_CAP)
            }
            Variant::Case4 => phi.inv_floor((k - 1) as f64 * phi.phi(n_prev as f64), INV_CAP),
            Variant::Case5 => phi.inv_floor(n_prev as f64 * phi.phi(n_prev as f64), INV_CAP),
            Variant::Case6 => n_prev + 1,
            Variant::Section4 => unreachable!(),
        };
        let n = base + p as u64 * d_prev;
        if n <= n_prev {
            return Err(CantorError::SeedSearchFailure(format!(
                "level recursion stalled at k={k} (n={n} <= n_prev={n_prev})"
            )));
        }
        if n > params.depth_budget {
            break;
        }
        let d = d_of(n);
        let span = n - n_prev;
        let l = span / d_prev - 1;
        let r = span - d_prev * (l + 1);
        if d_prev < 2 + 3 * gap || l < 1 {
            return Err(CantorError::SeedSearchFailure(format!(
                "level invariants failed at k={k}: d_prev={d_prev}, l={l}"
            )));
        }
        let ln_w = l as f64 * ln_count(sft, d_prev - 1 - 2 * gap, &mut cache);
        levels.push(RateLevel {
            k: k as u32,
            n,
            d,
            l,
            r,
            ln_w,
        });
        n_prev = n;
        d_prev = d;
        k += 1;
        if k > 500_000 {
            break;
        }
    }
    if levels.is_empty() {
        return Err(CantorError::InvalidParams(
            "depth budget too small for even one level".into(),
        ));
    }
    Ok(LevelSequences {
        variant,
        a,
        b,
        gap: sft.gap(),
        alphabet: sft.m(),
        levels: Levels::Rate { p, n0, d0, levels },
    })
}

impl LevelSequences {
    /// Number of built levels K.
    pub fn depth(&self) -> u32 {
        match &self.levels {
            Levels::Section4 { levels, .. } => levels.len() as u32,
            Levels::Rate { levels, .. } => levels.len() as u32,
        }
    }

    fn check_depth(&self, k: u32) -> Result<(), CantorError> {
        if k < 1 || k > self.depth() {
            return Err(CantorError::DepthExceeded(k, self.depth()));
        }
        Ok(())
    }

    /// The word length N_k at which level k's mass splitting is complete.
    pub fn horizon(&self, k: u32) -> Result<u64, CantorError> {
        self.check_depth(k)?;
        let g = self.gap as u64;
        Ok(match &self.levels {
            Levels::Section4 { levels, .. } => {
                levels[k as usize - 1].n_next + (2 * g + 1) * k as u64
            }
            Levels::Rate { levels, .. } => levels[k as usize - 1].n,
        })
    }

    /// Last position of level k's mass plateau: the measure of I_N is constant
    /// for horizon(k) <= N <= plateau_end(k), so the local-dimension curve
    /// attains its level-k minimum here.
    pub fn plateau_end(&self, k: u32) -> Result<u64, CantorError> {
        self.check_depth(k)?;
        let g = self.gap as u64;
        Ok(match &self.levels {
            Levels::Section4 { levels, .. } => {
                levels[k as usize - 1].m_next + (2 * g + 1) * (k as u64 + 1)
            }
            Levels::Rate { levels, .. } => {
                let lv = &levels[k as usize - 1];
                lv.n + lv.d
            }
        })
    }

    /// ln λ(I_{N_k}) = −Σ_{i<=k} ln ♯W_i; k = 0 gives 0 (the root cylinder).
    pub fn log_mass(&self, k: u32) -> Result<f64, CantorError> {
        if k == 0 {
            return Ok(0.0);
        }
        self.check_depth(k)?;
        let s: f64 = match &self.levels {
            Levels::Section4 { levels, .. } => {
                levels[..k as usize].iter().map(|l| l.ln_w).sum()
            }
            Levels::Rate { levels, .. } => levels[..k as usize].iter().map(|l| l.ln_w).sum(),
        };
        Ok(-s)
    }

    /// −log_mass(k) / (N_k · ln m): the local-dimension curve at N = N_k.
    pub fn local_dimension(&self, k: u32) -> Result<f64, CantorError> {
        let lm = self.log_mass(k)?;
        let n = self.horizon(k)? as f64;
        Ok(-lm / (n * (self.alphabet as f64).ln()))
    }

    /// The local-dimension curve at the end of level k's mass plateau — the
    /// per-level minimum, whose limit is the construction's dimension bound.
    pub fn plateau_dimension(&self, k: u32) -> Result<f64, CantorError> {
        let lm = self.log_mass(k)?;
        let n = self.plateau_end(k)? as f64;
        Ok(-lm / (n * (self.alphabet as f64).ln()))
    }

    /// Closed-form dimension target (absolute) the construction approaches:
    /// (b(1−a)−a)/((1+b)(b−a))·dim for Section4 (1/(1+b)·dim at a = 0);
    /// the (1 − 2/P) lower bound for the Φ-driven variants.
    pub fn target_dimension(&self, sft: &Sft) -> f64 {
        let dim = sft.entropy() / (sft.m() as f64).ln();
        match &self.levels {
            Levels::Section4 { .. } => {
                let (a, b) = (self.a, self.b);
                if a == 0.0 {
                    dim / (1.0 + b)
                } else {
                    (b * (1.0 - a) - a) / ((1.0 + b) * (b - a)) * dim
                }
            }
            Levels::Rate { p, .. } => (1.0 - 2.0 / *p as f64) * dim,
        }
    }

    /// Checkpoints at which L_N/Φ(N) swings between the prescribed liminf and
    /// limsup for Section4 points: N_k and N_k + 2M + 1, per level.
    pub fn ratio_checkpoints(&self) -> Vec<u64> {
        let g = self.gap as u64;
        (1..=self.depth())
            .flat_map(|k| {
                let n = self.horizon(k).unwrap();
                [n, n + 2 * g + 1]
            })
            .collect()
    }

    /// A prefix (of the requested length) of a point of the constructed
    /// Cantor set: the all-zero seed block, mandatory markers/zero blocks
    /// joined by lex-minimal bridges, and seeded uniform filler blocks.
    pub fn sample_point(
        &self,
        sft: &Sft,
        seed: u64,
        length: usize,
    ) -> Result<Vec<u8>, CantorError> {
        let full = self.horizon(self.depth())?;
        if length as u64 > full {
            return Err(CantorError::DepthExceeded(self.depth() + 1, self.depth()));
        }
        let mut rng = rng_from_seed(seed);
        // token stream: None = bridge slot, Some(block) = fixed symbols
        let marker = marker_symbol(sft);
        let g = self.gap as u64;
        let mut blocks: Vec<Vec<u8>> = Vec::new(); // joined by bridges
        let max_filler = self.max_filler_len();
        let sampler = UniformWordSampler::new(sft, max_filler as usize);
        match &self.levels {
            Levels::Section4 { levels, .. } => {
                blocks.push(vec![0u8; levels[0].n as usize]);
                for lv in levels {
                    let block = (lv.m - lv.n - 2 * g - 1) as usize;
                    let v_len = (lv.n_next - lv.m - lv.t * (lv.m - lv.n)) as usize;
                    // W_k: ω | 0-block | ω, then t times (filler | ω), then v
                    blocks.push(vec![marker]);
                    blocks.push(vec![0u8; block]);
                    blocks.push(vec![marker]);
                    for _ in 0..lv.t {
                        blocks.push(sampler.sample(&mut rng, block));
                        blocks.push(vec![marker]);
                    }
                    blocks.push(sampler.sample(&mut rng, v_len));
                }
            }
            Levels::Rate { p, n0, d0, levels } => {
                blocks.push(vec![0u8; *n0 as usize]);
                let mut d_prev = *d0;
                for lv in levels {
                    let zero_block = (d_prev - 1 - 3 * g) as usize;
                    let filler = (d_prev - 1 - 2 * g) as usize;
                    blocks.push(vec![marker]);
                    blocks.push(vec![0u8; zero_block]);
                    blocks.push(vec![marker]);
                    for i in 0..lv.l {
                        blocks.push(sampler.sample(&mut rng, filler));
                        if i + 1 < lv.l {
                            blocks.push(vec![marker]);
                        }
                    }
                    // v_k: 0^r if r <= P, else marker then zeros; an empty v
                    // still occupies a bridge slot (pushed as an empty token)
                    let r = lv.r as usize;
                    if r == 0 {
                        blocks.push(Vec::new());
                    } else if r <= *p as usize {
                        blocks.push(vec![0u8; r]);
                    } else {
                        let mut v = vec![marker];
                        v.extend(vec![0u8; r - 1]);
                        blocks.push(v);
                    }
                    d_prev = lv.d;
                }
            }
        }
        // join blocks with lex-minimal bridges of length M; an empty token
        // (possible for v_k with r = 0) widens the next junction by another M
        let mut out: Vec<u8> = Vec::new();
        let mut pending = 0usize;
        for block in blocks {
            if block.is_empty() {
                pending += 1;
                continue;
            }
            if out.is_empty() {
                out.extend(block);
            } else {
                let len = self.gap * (1 + pending);
                let bridge = sft
                    .connect_symbols(out[out.len() - 1], block[0], len)
                    .expect("specification guarantees bridges of length >= M");
                out.extend(bridge);
                out.extend(block);
            }
            pending = 0;
            if out.len() >= length {
                break;
            }
        }
        // pad the tail (possible only when truncating below block granularity)
        while out.len() < length {
            let tail = sft.open_bridge(&out[out.len() - 1..]).unwrap();
            if tail.is_empty() {
                out.push(0);
            } else {
                out.extend(tail);
            }
        }
        out.truncate(length);
        Ok(out)
    }

    fn max_filler_len(&self) -> u64 {
        let g = self.gap as u64;
        match &self.levels {
            Levels::Section4 { levels, .. } => levels
                .iter()
                .map(|lv| {
                    (lv.m - lv.n - 2 * g - 1)
                        .max(lv.n_next - lv.m - lv.t * (lv.m - lv.n))
                })
                .max()
                .unwrap_or(1),
            Levels::Rate { d0, levels, .. } => {
                let mut d_prev = *d0;
                let mut mx = 1;
                for lv in levels {
                    mx = mx.max(d_prev - 1 - 2 * g);
                    d_prev = lv.d;
                }
                mx
            }
        }
    }

    /// JSON construction report with per-level data and the dimension target.
    pub fn report(&self, sft: &Sft) -> serde_json::Value {
        let levels: Vec<serde_json::Value> = (1..=self.depth())
            .map(|k| {
                let (second, third) = match &self.levels {
                    Levels::Section4 { levels, .. } => {
                        let lv = &levels[k as usize - 1];
                        (lv.m, lv.t)
                    }
                    Levels::Rate { levels, .. } => {
                        let lv = &levels[k as usize - 1];
                        (lv.d, lv.l)
                    }
                };
                serde_json::json!({
                    "k": k,
                    "n_k": self.level_n(k),
                    "m_k_or_d_k": second,
                    "t_k_or_l_k": third,
                    "N_k": self.horizon(k).unwrap(),
                    "log_mass": self.log_mass(k).unwrap(),
                    "local_dim": self.local_dimension(k).unwrap(),
                    "plateau_dim": self.plateau_dimension(k).unwrap(),
                })
            })
            .collect();
        serde_json::json!({
            "variant": self.variant.tag(),
            "params": {
                "a": json_extended(self.a),
                "b": json_extended(self.b),
                "gap": self.gap,
                "seeding": match &self.levels {
                    Levels::Section4 { k0, .. } => serde_json::json!({"k0": k0}),
                    Levels::Rate { p, n0, d0, .. } =>
                        serde_json::json!({"P": p, "n0": n0, "d0": d0}),
                },
            },
            "levels": levels,
            "target_dim": self.target_dimension(sft),
        })
    }

    fn level_n(&self, k: u32) -> u64 {
        match &self.levels {
            Levels::Section4 { levels, .. } => levels[k as usize - 1].n,
            Levels::Rate { levels, .. } => levels[k as usize - 1].n,
        }
    }
}

fn json_extended(x: f64) -> serde_json::Value {
    if x.is_infinite() {
        serde_json::json!("inf")
    } else {
        serde_json::json!(x)
    }
}

/// Smallest nonzero symbol; valid as a construction marker since a primitive
/// SFT has no dead symbols and bridges exist between any pair.
fn marker_symbol(_sft: &Sft) -> u8 {
    1
}

/// Samples uniformly random admissible words of a given length.
///
/// Weight vectors are extension counts per starting symbol, renormalized in
/// f64 per length (exact up to rounding; exactly uniform on the full shift).
struct UniformWordSampler {
    m: usize,
    allowed: Vec<Vec<u8>>,
    // weights[t][j]: relative number of admissible words of length t+1
    // starting at symbol j
    weights: Vec<Vec<f64>>,
}

impl UniformWordSampler {
    fn new(sft: &Sft, max_len: usize) -> UniformWordSampler {
        let m = sft.m();
        let mut weights = Vec::with_capacity(max_len.max(1));
        weights.push(vec![1.0; m]);
        for t in 1..max_len.max(1) {
            let prev = &weights[t - 1];
            let mut next = vec![0.0; m];
            for i in 0..m {
                for j in 0..m {
                    if sft.allowed()[i][j] == 1 {
                        next[i] += prev[j];
                    }
                }
            }
            let norm: f64 = next.iter().sum();
            next.iter_mut().for_each(|x| *x /= norm);
            weights.push(next);
        }
        UniformWordSampler {
            m,
            allowed: sft.allowed().to_vec(),
            weights,
        }
    }

    fn sample(&self, rng: &mut impl Rng, len: usize) -> Vec<u8> {
        if len == 0 {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(len);
        let mut cur = self.pick(rng, None, len - 1);
        out.push(cur as u8);
        for pos in 1..len {
            cur = self.pick(rng, Some(cur), len - 1 - pos);
            out.push(cur as u8);
        }
        out
    }

    // choose the next symbol with weight allowed[prev][j] * weights[rem][j]
    fn pick(&self, rng: &mut impl Rng, prev: Option<usize>, rem: usize) -> usize {
        let w = &self.weights[rem];
        let mut total = 0.0;
        for j in 0..self.m {
            if prev.map_or(true, |i| self.allowed[i][j] == 1) {
                total += w[j];
            }
        }
        let mut u: f64 = rng.gen::<f64>() * total;
        for j in 0..self.m {
            if prev.map_or(true, |i| self.allowed[i][j] == 1) {
                u -= w[j];
                if u < 0.0 {
                    return j;
                }
            }
        }
        // numerical edge: return the last admissible symbol
        (0..self.m)
            .rev()
            .find(|&j| prev.map_or(true, |i| self.allowed[i][j] == 1))
            .unwrap()
    }
}

/// Tagged dimension result: the case analysis distinguishes empty sets, countable
/// sets (dimension 0), genuine formula values, and the full-dimension cases.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DimensionValue {
    Empty,
    Countable,
    Value { relative: f64, full: bool },
}

impl DimensionValue {
    pub fn regime_tag(&self) -> &'static str {
        match self {
            DimensionValue::Empty => "EMPTY",
            DimensionValue::Countable => "COUNTABLE",
            DimensionValue::Value { full: true, .. } => "FULL",
            DimensionValue::Value { full: false, .. } => "FORMULA",
        }
    }

    /// Dimension as a multiple of dim_H Σ (0 for empty/countable).
    pub fn relative(&self) -> f64 {
        match self {
            DimensionValue::Value { relative, .. } => *relative,
            _ => 0.0,
        }
    }

    /// Absolute dimension given the ambient shift.
    pub fn absolute(&self, sft: &Sft) -> f64 {
        self.relative() * sft.entropy() / (sft.m() as f64).ln()
    }
}

/// Dimension of the eventually-always hitting set for targets shrinking at
/// exponential rate τ: ((1−τ)/(1+τ))²·dim_H Σ for τ <= 1, countable beyond.
pub fn dim_hea(tau: f64) -> DimensionValue {
    assert!(tau >= 0.0);
    if tau > 1.0 {
        return DimensionValue::Countable;
    }
    let rel = ((1.0 - tau) / (1.0 + tau)).powi(2);
    DimensionValue::Value {
        relative: rel,
        full: tau == 0.0,
    }
}

/// Full case analysis for the level set with prescribed liminf a and limsup b
/// of L_N/Φ(N), at shrinking rate τ ∈ [0, ∞].
pub fn dim_level_set(a: f64, b: f64, tau: f64) -> Result<DimensionValue, CantorError> {
    if a > b {
        return Err(CantorError::InvalidPair { a, b });
    }
    assert!(a >= 0.0 && tau >= 0.0);
    if tau == 0.0 {
        // sub-exponential targets: the level set has full dimension
        return Ok(DimensionValue::Value {
            relative: 1.0,
            full: true,
        });
    }
    if tau.is_infinite() {
        return Ok(if b > 0.0 {
            DimensionValue::Value {
                relative: 0.0,
                full: false,
            }
        } else {
            DimensionValue::Value {
                relative: 1.0,
                full: true,
            }
        });
    }
    // 0 < tau < inf
    if a >= 1.0 / tau {
        return Ok(if b.is_finite() {
            DimensionValue::Empty
        } else {
            DimensionValue::Value {
                relative: 0.0,
                full: false,
            }
        });
    }
    if a == 0.0 && b == 0.0 {
        // stipulated limit value of the formula at the origin
        return Ok(DimensionValue::Value {
            relative: 1.0,
            full: true,
        });
    }
    let bound = a / (1.0 - tau * a);
    if b < bound {
        return Ok(DimensionValue::Empty);
    }
    if b == bound {
        // exactly zero on the boundary curve (the formula leaves float dust)
        return Ok(DimensionValue::Value {
            relative: 0.0,
            full: false,
        });
    }
    if b.is_infinite() {
        return Ok(DimensionValue::Value {
            relative: 0.0,
            full: false,
        });
    }
    let rel = (b * (1.0 - tau * a) - a) / ((1.0 + tau * b) * (b - a));
    Ok(DimensionValue::Value {
        relative: rel,
        full: false,
    })
}

/// Dimension of the exact-liminf set at rate τ = 1 (sup over b of the level
/// sets): ((1−a)/(1+a))²·dim_H Σ, with the optimizing b* = 2a/(1−a) exposed.
pub struct UaResult {
    pub dim: DimensionValue,
    pub optimal_b: Option<f64>,
}

pub fn dim_u_a(a: f64) -> UaResult {
    assert!(a >= 0.0);
    if a > 1.0 {
        return UaResult {
            dim: DimensionValue::Countable,
            optimal_b: None,
        };
    }
    let rel = ((1.0 - a) / (1.0 + a)).powi(2);
    UaResult {
        dim: DimensionValue::Value {
            relative: rel,
            full: a == 0.0,
        },
        optimal_b: if a < 1.0 { Some(2.0 * a / (1.0 - a)) } else { None },
    }
}
