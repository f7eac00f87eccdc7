//! Small arbitrary-precision helpers: m×m matrix powers over BigUint and
//! natural logs of huge integers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Natural log of a nonnegative big integer. ln(0) = -inf.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 52 {
        return x.to_f64().unwrap().ln();
    }
    // take the top 52 bits and account for the shift
    let shift = bits - 52;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub type BigMat = Vec<Vec<BigUint>>;

pub fn big_identity(m: usize) -> BigMat {
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { BigUint::one() } else { BigUint::zero() })
                .collect()
        })
        .collect()
}

pub fn big_from_u8(a: &[Vec<u8>]) -> BigMat {
    a.iter()
        .map(|row| row.iter().map(|&x| BigUint::from(x)).collect())
        .collect()
}

pub fn big_mul(a: &BigMat, b: &BigMat) -> BigMat {
    let m = a.len();
    let mut out = vec![vec![BigUint::zero(); m]; m];
    for i in 0..m {
        for k in 0..m {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// a^e by binary exponentiation; a^0 is the identity.
pub fn big_pow(a: &BigMat, mut e: u64) -> BigMat {
    let mut result = big_identity(a.len());
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = big_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = big_mul(&base, &base);
        }
    }
    result
}

pub fn big_total(a: &BigMat) -> BigUint {
    let mut s = BigUint::zero();
    for row in a {
        for x in row {
            s += x;
        }
    }
    s
}
