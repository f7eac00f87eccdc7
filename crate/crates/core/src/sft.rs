//! Subshifts of finite type over the alphabet {0, ..., m-1}: word counting,
//! entropy, specification gap, bridging words, and cylinder geometry.
//!
//! An [`Sft`] is a primitive 0/1 transition matrix `allowed` with
//! `allowed[i][j] = 1` iff symbol `j` may follow symbol `i`, plus the standing
//! requirement `allowed[0][0] = 1` so the all-zero point belongs to the shift.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigmath::{big_from_u8, big_pow, big_total, ln_big};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SftError {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(usize),
    #[error("transition matrix must be {expected}x{expected}, found a row of length {found}")]
    BadShape { expected: usize, found: usize },
    #[error("transition matrix entries must be 0 or 1")]
    BadEntry,
    #[error("row {0} of the transition matrix has no 1 (dead symbol)")]
    DeadRow(usize),
    #[error("column {0} of the transition matrix has no 1 (unreachable symbol)")]
    DeadColumn(usize),
    #[error("allowed[0][0] must be 1 so that the all-zero point is admissible")]
    ZeroLoopMissing,
    #[error("transition matrix is not primitive (no power up to m^2 is entrywise positive)")]
    NotPrimitive,
    #[error("symbol {symbol} out of range for alphabet of size {m}")]
    SymbolOutOfRange { symbol: usize, m: usize },
    #[error("word must be nonempty")]
    EmptyWord,
    #[error("word is not admissible for this shift")]
    NotAdmissible,
}

/// Raw serialization form: `{"m": 2, "allowed": [[1,1],[1,0]]}`.
#[derive(Serialize, Deserialize)]
struct SftRaw {
    m: usize,
    allowed: Vec<Vec<u8>>,
}

/// A primitive subshift of finite type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SftRaw", into = "SftRaw")]
pub struct Sft {
    m: usize,
    allowed: Vec<Vec<u8>>,
    /// Specification gap M = primitivity index - 1, cached at construction.
    gap: usize,
}

impl TryFrom<SftRaw> for Sft {
    type Error = SftError;
    fn try_from(raw: SftRaw) -> Result<Self, SftError> {
        Sft::new(raw.m, raw.allowed)
    }
}

impl From<Sft> for SftRaw {
    fn from(s: Sft) -> SftRaw {
        SftRaw {
            m: s.m,
            allowed: s.allowed,
        }
    }
}

/// Exact word count together with its natural log.
#[derive(Clone, Debug)]
pub struct WordCount {
    pub exact: BigUint,
    pub ln: f64,
}

/// Exact cylinder diameter m^{-exp} (kept in exponent form: the value
/// underflows f64 for deep cylinders).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CylinderDiameter {
    pub base: usize,
    pub exp: usize,
}

impl CylinderDiameter {
    pub fn value(&self) -> f64 {
        (self.base as f64).powi(-(self.exp as i32))
    }
    pub fn ln_value(&self) -> f64 {
        -(self.exp as f64) * (self.base as f64).ln()
    }
}

impl Sft {
    pub fn new(m: usize, allowed: Vec<Vec<u8>>) -> Result<Self, SftError> {
        if m < 2 {
            return Err(SftError::AlphabetTooSmall(m));
        }
        if allowed.len() != m {
            return Err(SftError::BadShape {
                expected: m,
                found: allowed.len(),
            });
        }
        for row in &allowed {
            if row.len() != m {
                return Err(SftError::BadShape {
                    expected: m,
                    found: row.len(),
                });
            }
            if row.iter().any(|&x| x > 1) {
                return Err(SftError::BadEntry);
            }
        }
        for (i, row) in allowed.iter().enumerate() {
            if row.iter().all(|&x| x == 0) {
                return Err(SftError::DeadRow(i));
            }
        }
        for j in 0..m {
            if (0..m).all(|i| allowed[i][j] == 0) {
                return Err(SftError::DeadColumn(j));
            }
        }
        if allowed[0][0] != 1 {
            return Err(SftError::ZeroLoopMissing);
        }
        let gap = primitivity_index(m, &allowed).ok_or(SftError::NotPrimitive)? - 1;
        Ok(Sft { m, allowed, gap })
    }

    /// The full shift on m symbols (all transitions allowed).
    pub fn full_shift(m: usize) -> Sft {
        Sft::new(m, vec![vec![1; m]; m]).expect("full shift is always valid")
    }

    /// The golden-mean shift: {0,1} sequences with no "11" factor.
    pub fn golden_mean() -> Sft {
        Sft::new(2, vec![vec![1, 1], vec![1, 0]]).expect("golden-mean shift is valid")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn allowed(&self) -> &[Vec<u8>] {
        &self.allowed
    }

    pub fn is_allowed(&self, i: u8, j: u8) -> bool {
        self.allowed[i as usize][j as usize] == 1
    }

    /// Cached specification gap M.
    pub fn gap(&self) -> usize {
        self.gap
    }

    /// Least M >= 0 with allowed^(M+1) entrywise positive, re-derived from the
    /// matrix (the construction-time value is cached in [`Sft::gap`]).
    pub fn specification_gap(&self) -> Result<usize, SftError> {
        primitivity_index(self.m, &self.allowed)
            .map(|q| q - 1)
            .ok_or(SftError::NotPrimitive)
    }

    /// True iff every consecutive pair of symbols is an allowed transition.
    /// Empty and length-1 words are admissible.
    pub fn is_admissible(&self, w: &[u8]) -> Result<bool, SftError> {
        for &s in w {
            if s as usize >= self.m {
                return Err(SftError::SymbolOutOfRange {
                    symbol: s as usize,
                    m: self.m,
                });
            }
        }
        Ok(w.windows(2).all(|p| self.is_allowed(p[0], p[1])))
    }

    /// Number of admissible words of length n: the total of allowed^(n-1).
    pub fn count_words(&self, n: u64) -> WordCount {
        assert!(n >= 1, "word length must be positive");
        let p = big_pow(&big_from_u8(&self.allowed), n - 1);
        let exact = big_total(&p);
        let ln = ln_big(&exact);
        WordCount { exact, ln }
    }

    /// Spectral radius of the transition matrix.
    pub fn spectral_radius(&self) -> f64 {
        let m = self.m;
        let a = nalgebra::DMatrix::<f64>::from_fn(m, m, |i, j| self.allowed[i][j] as f64);
        a.complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Topological entropy h = ln(spectral radius), in nats.
    pub fn entropy(&self) -> f64 {
        self.spectral_radius().ln()
    }

    /// Finite-n estimate ln(count_words(n))/n; dominates the entropy.
    pub fn entropy_estimate(&self, n: u64) -> f64 {
        self.count_words(n).ln / n as f64
    }

    /// Lexicographically smallest w of length M (the specification gap) such
    /// that u·w·v is admissible. For M = 0 returns the empty word, which
    /// requires u·v admissible directly.
    pub fn bridge(&self, u: &[u8], v: &[u8]) -> Result<Vec<u8>, SftError> {
        if u.is_empty() || v.is_empty() {
            return Err(SftError::EmptyWord);
        }
        if !self.is_admissible(u)? || !self.is_admissible(v)? {
            return Err(SftError::NotAdmissible);
        }
        let last = *u.last().unwrap() as usize;
        let first = v[0] as usize;
        let gap = self.gap;
        if gap == 0 {
            // allowed is entrywise positive, so u·v is admissible as-is
            debug_assert!(self.is_allowed(last as u8, first as u8));
            return Ok(Vec::new());
        }
        // reach[t][i][j]: a path of exactly t edges from i to j exists
        let reach = bool_powers(self.m, &self.allowed, gap + 1);
        let mut w = Vec::with_capacity(gap);
        let mut cur = last;
        for p in 0..gap {
            // after placing position p there remain gap-1-p bridge symbols,
            // then the edge into v: gap-p edges to reach `first`
            let steps = gap - p;
            let mut chosen = None;
            for s in 0..self.m {
                if self.allowed[cur][s] == 1 && reach[steps][s][first] {
                    chosen = Some(s);
                    break;
                }
            }
            // specification with gap M guarantees a bridge exists
            let s = chosen.expect("primitivity guarantees a bridge symbol");
            w.push(s as u8);
            cur = s;
        }
        Ok(w)
    }

    /// Lexicographically smallest w of the given length with a·w·b admissible
    /// as a symbol chain; None if no such word exists (always Some when
    /// len >= the specification gap). Generalizes [`Sft::bridge`].
    pub fn connect_symbols(&self, a: u8, b: u8, len: usize) -> Option<Vec<u8>> {
        if len == 0 {
            return if self.is_allowed(a, b) {
                Some(Vec::new())
            } else {
                None
            };
        }
        let reach = bool_powers(self.m, &self.allowed, len + 1);
        if !reach[len + 1][a as usize][b as usize] {
            return None;
        }
        let mut w = Vec::with_capacity(len);
        let mut cur = a as usize;
        for p in 0..len {
            let steps = len - p;
            let s = (0..self.m)
                .find(|&s| self.allowed[cur][s] == 1 && reach[steps][s][b as usize])?;
            w.push(s as u8);
            cur = s;
        }
        Some(w)
    }

    /// Lexicographically smallest w of length M with u·w admissible (no right
    /// constraint); used when a construction block is followed by nothing.
    pub fn open_bridge(&self, u: &[u8]) -> Result<Vec<u8>, SftError> {
        if u.is_empty() {
            return Err(SftError::EmptyWord);
        }
        if !self.is_admissible(u)? {
            return Err(SftError::NotAdmissible);
        }
        let mut w = Vec::with_capacity(self.gap);
        let mut cur = *u.last().unwrap() as usize;
        for _ in 0..self.gap {
            let s = (0..self.m)
                .find(|&s| self.allowed[cur][s] == 1)
                .expect("no dead rows");
            w.push(s as u8);
            cur = s;
        }
        Ok(w)
    }

    /// Least t >= 1 at which the continuation tree from `symbol` branches,
    /// i.e. there are at least two admissible extensions of length t.
    pub fn branching_offset(&self, symbol: u8) -> Result<usize, SftError> {
        if symbol as usize >= self.m {
            return Err(SftError::SymbolOutOfRange {
                symbol: symbol as usize,
                m: self.m,
            });
        }
        // row of allowed^t from `symbol`; counts stay tiny before branching
        let mut row: Vec<u64> = self.allowed[symbol as usize]
            .iter()
            .map(|&x| x as u64)
            .collect();
        for t in 1..=(self.m * self.m + 1) {
            if row.iter().sum::<u64>() >= 2 {
                return Ok(t);
            }
            let mut next = vec![0u64; self.m];
            for i in 0..self.m {
                if row[i] == 0 {
                    continue;
                }
                for j in 0..self.m {
                    if self.allowed[i][j] == 1 {
                        next[j] = next[j].saturating_add(row[i]);
                    }
                }
            }
            row = next;
        }
        unreachable!("a primitive matrix branches within the primitivity index")
    }

    /// Largest branching offset over all symbols; the per-shift constant K in
    /// the diameter lower bound m^{-(n+M+K)} <= |I_n|.
    pub fn max_branching_offset(&self) -> usize {
        (0..self.m)
            .map(|s| self.branching_offset(s as u8).unwrap())
            .max()
            .unwrap()
    }

    /// Diameter of the cylinder with the given admissible base: m^{-(n+t)}
    /// where t is the branching offset of the final symbol.
    pub fn cylinder_diameter(&self, base: &[u8]) -> Result<CylinderDiameter, SftError> {
        if base.is_empty() {
            return Err(SftError::EmptyWord);
        }
        if !self.is_admissible(base)? {
            return Err(SftError::NotAdmissible);
        }
        let t = self.branching_offset(*base.last().unwrap())?;
        Ok(CylinderDiameter {
            base: self.m,
            exp: base.len() + t,
        })
    }

    /// Visit every admissible word of length n (depth-first, lexicographic).
    pub fn for_each_word(&self, n: usize, f: &mut impl FnMut(&[u8])) {
        assert!(n >= 1);
        let mut stack = Vec::with_capacity(n);
        for s in 0..self.m {
            stack.push(s as u8);
            self.visit(n, &mut stack, f);
            stack.pop();
        }
    }

    fn visit(&self, n: usize, stack: &mut Vec<u8>, f: &mut impl FnMut(&[u8])) {
        if stack.len() == n {
            f(stack);
            return;
        }
        let cur = *stack.last().unwrap() as usize;
        for s in 0..self.m {
            if self.allowed[cur][s] == 1 {
                stack.push(s as u8);
                self.visit(n, stack, f);
                stack.pop();
            }
        }
    }
}

/// Least q >= 1 with allowed^q entrywise positive, or None if no power up to
/// the Wielandt bound (m-1)^2 + 1 (<= m^2) is positive.
fn primitivity_index(m: usize, allowed: &[Vec<u8>]) -> Option<usize> {
    let cap = (m - 1) * (m - 1) + 1;
    let mut p: Vec<Vec<bool>> = allowed
        .iter()
        .map(|row| row.iter().map(|&x| x == 1).collect())
        .collect();
    for q in 1..=cap {
        if p.iter().all(|row| row.iter().all(|&x| x)) {
            return Some(q);
        }
        p = bool_mul(m, &p, allowed);
    }
    None
}

fn bool_mul(m: usize, a: &[Vec<bool>], b: &[Vec<u8>]) -> Vec<Vec<bool>> {
    let mut out = vec![vec![false; m]; m];
    for i in 0..m {
        for k in 0..m {
            if a[i][k] {
                for j in 0..m {
                    if b[k][j] == 1 {
                        out[i][j] = true;
                    }
                }
            }
        }
    }
    out
}

/// reach[t][i][j] for t = 0..=tmax: a path of exactly t edges from i to j.
fn bool_powers(m: usize, allowed: &[Vec<u8>], tmax: usize) -> Vec<Vec<Vec<bool>>> {
    let mut out = Vec::with_capacity(tmax + 1);
    let mut id = vec![vec![false; m]; m];
    for (i, row) in id.iter_mut().enumerate() {
        row[i] = true;
    }
    out.push(id);
    for t in 1..=tmax {
        out.push(bool_mul(m, &out[t - 1], allowed));
    }
    out
}

/// Parse a word from text: digit characters when m <= 10.
pub fn parse_word(s: &str, m: usize) -> Result<Vec<u8>, SftError> {
    assert!(m <= 10, "textual words are only defined for m <= 10");
    let mut out = Vec::with_capacity(s.len());
    for ch in s.chars() {
        let d = ch
            .to_digit(10)
            .ok_or(SftError::SymbolOutOfRange { symbol: 99, m })? as usize;
        if d >= m {
            return Err(SftError::SymbolOutOfRange { symbol: d, m });
        }
        out.push(d as u8);
    }
    Ok(out)
}

/// Format a word as digit text (m <= 10).
pub fn format_word(w: &[u8]) -> String {
    w.iter().map(|&s| char::from(b'0' + s)).collect()
}
