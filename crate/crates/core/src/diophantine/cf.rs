use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::precision::isqrt_exact;

/// Simple continued fraction of `sqrt(m) / k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdCf {
    pub m: u64,
    pub k: u64,
    /// `a_0, a_1, ...`; `a_i >= 1` for `i >= 1`.
    pub quotients: Vec<BigUint>,
    /// `sqrt(m) / k` is rational and `quotients` is its complete expansion.
    pub terminates: bool,
}

/// One truncation `p_m / q_m = [a_0; a_1, ..., a_m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub p: BigUint,
    pub q: BigUint,
}

/// First `count + 1` partial quotients of `sqrt(m) / k` (fewer if the value
/// is rational and its expansion ends sooner).
///
/// Irrational values run the integer recurrence on `(P + sqrt(D)) / Q` with
/// `D = m k^2`, `P_0 = 0`, `Q_0 = k^2`, which keeps `Q | D - P^2` at every
/// step. No floating point is involved.
pub fn expand_surd(m: u64, k: u64, count: usize) -> Result<SurdCf> {
    if m == 0 || k == 0 {
        return Err(Error::Domain(format!("surd sqrt({m})/{k} needs m >= 1 and k >= 1")));
    }
    let k2 = BigUint::from(k) * BigUint::from(k);
    let d = BigUint::from(m) * &k2;

    if let Some(r) = isqrt_exact(&d) {
        // r / k^2 by Euclid
        let (mut num, mut den) = (r, k2);
        let mut quotients = Vec::new();
        while !den.is_zero() && quotients.len() <= count {
            let (a, rem) = num.div_rem(&den);
            quotients.push(a);
            num = std::mem::replace(&mut den, rem);
        }
        return Ok(SurdCf {
            m,
            k,
            quotients,
            terminates: den.is_zero(),
        });
    }

    let d = BigInt::from(d);
    let root = BigInt::from(d.magnitude().sqrt());
    let mut p = BigInt::zero();
    let mut q = BigInt::from(k2);
    let mut quotients = Vec::with_capacity(count + 1);
    for _ in 0..=count {
        let a = (&p + &root).div_floor(&q);
        p = &a * &q - &p;
        q = (&d - &p * &p) / &q;
        quotients.push(a.to_biguint().expect("partial quotients of a positive surd are nonnegative"));
    }
    Ok(SurdCf {
        m,
        k,
        quotients,
        terminates: false,
    })
}

/// Convergents through the three-term recurrence
/// `p_i = a_i p_{i-1} + p_{i-2}`, seeds `(p_{-1}, q_{-1}) = (1, 0)`,
/// `(p_{-2}, q_{-2}) = (0, 1)`.
pub fn convergents(cf: &SurdCf) -> Vec<Convergent> {
    let (mut p_prev2, mut q_prev2) = (BigUint::zero(), BigUint::one());
    let (mut p_prev, mut q_prev) = (BigUint::one(), BigUint::zero());
    let mut out = Vec::with_capacity(cf.quotients.len());
    for (index, a) in cf.quotients.iter().enumerate() {
        let p = a * &p_prev + &p_prev2;
        let q = a * &q_prev + &q_prev2;
        p_prev2 = std::mem::replace(&mut p_prev, p.clone());
        q_prev2 = std::mem::replace(&mut q_prev, q.clone());
        out.push(Convergent { index, p, q });
    }
    out
}

/// `|sqrt(m)/k - p/q| < 1/q^2`, decided exactly.
///
/// With `x = sqrt(m) q^2` and `y = k p q`, the condition is `|x - y| < k`,
/// i.e. `y - k < x < y + k`; both sides are compared after squaring.
pub fn within_inverse_square(m: u64, k: u64, c: &Convergent) -> bool {
    if c.q.is_zero() {
        return false;
    }
    let q2 = &c.q * &c.q;
    let x2 = BigInt::from(BigUint::from(m) * &q2 * &q2);
    let y = BigInt::from(BigUint::from(k) * &c.p * &c.q);
    let k = BigInt::from(k);
    let upper = &y + &k;
    let lower = &y - &k;
    let below_upper = x2 < &upper * &upper;
    let above_lower = lower.sign() == num_bigint::Sign::Minus || x2 > &lower * &lower;
    below_upper && above_lower
}
