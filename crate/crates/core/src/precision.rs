//! Exact fractional parts of `q * sqrt(u)` for huge integers `q`.
//!
//! Evaluating `cos(2 sqrt(D) t)` at `t = q pi` with `q ~ 1e30` is hopeless in
//! double precision: the argument carries no correct fractional digits. Here
//! `sqrt(u)` is computed as a scaled integer square root, multiplied by `q`
//! in exact integer arithmetic, and the fractional part is certified by an
//! interval of width `q * 10^-d`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Certified error on every approximate fractional part returned here.
pub const FRAC_ERROR_BOUND: f64 = 1e-10;

const GUARD_DIGITS: u32 = 20;

/// `floor(sqrt(n))`, exact.
pub fn isqrt_floor(n: &BigInt) -> Result<BigInt> {
    match n.sign() {
        Sign::Minus => Err(Error::Domain(format!("isqrt of negative number {n}"))),
        _ => Ok(BigInt::from(n.magnitude().sqrt())),
    }
}

pub(crate) fn isqrt_exact(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Number of decimal digits of `n` (1 for zero).
pub fn decimal_digits(n: &BigUint) -> u32 {
    if n.is_zero() {
        1
    } else {
        n.to_str_radix(10).len() as u32
    }
}

/// Working precision, in decimal digits after the point, of the scaled root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionBudget {
    pub decimal_digits: u32,
}

impl PrecisionBudget {
    /// `digits(q) + 20`: the interval width `q * 10^-d` stays below `10^-20`.
    pub fn for_multiplier(q: &BigUint) -> Self {
        PrecisionBudget {
            decimal_digits: decimal_digits(q) + GUARD_DIGITS,
        }
    }

    pub fn doubled(self) -> Self {
        PrecisionBudget {
            decimal_digits: self.decimal_digits * 2,
        }
    }
}

/// Fractional part of `q * sqrt(u)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SurdFrac {
    /// `sqrt(u)` is rational: the fractional part is `numer / denom` exactly
    /// (reduced, `denom > 0`).
    Exact { numer: BigUint, denom: BigUint },
    /// Certified to within [`FRAC_ERROR_BOUND`].
    Approx(f64),
}

impl SurdFrac {
    pub fn value(&self) -> f64 {
        match self {
            SurdFrac::Exact { numer, denom } => ratio_to_f64(numer, denom),
            SurdFrac::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SurdFrac::Exact { .. })
    }
}

/// `numer / denom` for `0 <= numer < denom`, correct to about one ulp.
fn ratio_to_f64(numer: &BigUint, denom: &BigUint) -> f64 {
    let scaled: BigUint = (numer << 64u32) / denom;
    scaled.to_f64().unwrap_or(0.0) / 18_446_744_073_709_551_616.0
}

/// `frac(q * sqrt(u_num / u_den))` with absolute error below `1e-10`.
///
/// Rational square roots take an exact path. Otherwise
/// `s = floor(sqrt(u) * 10^d)` is an exact scaled root, and
/// `q * sqrt(u) * 10^d` lies in `[q s, q s + q)`. The call fails with
/// [`Error::Precision`] if that interval is wider than the error bound or
/// straddles an integer.
pub fn frac_of_surd_multiple(
    u_num: &BigUint,
    u_den: &BigUint,
    q: &BigUint,
    budget: PrecisionBudget,
) -> Result<SurdFrac> {
    if u_den.is_zero() {
        return Err(Error::Domain("u_den must be positive".into()));
    }
    let g = u_num.gcd(u_den);
    let (num, den) = if g.is_zero() {
        (BigUint::zero(), BigUint::one())
    } else {
        (u_num / &g, u_den / &g)
    };

    if let (Some(rn), Some(rd)) = (isqrt_exact(&num), isqrt_exact(&den)) {
        // q * rn / rd, exact
        let prod = q * &rn;
        let numer = &prod % &rd;
        let g = numer.gcd(&rd);
        let (numer, denom) = if numer.is_zero() {
            (numer, BigUint::one())
        } else {
            (&numer / &g, &rd / &g)
        };
        return Ok(SurdFrac::Exact { numer, denom });
    }

    let d = budget.decimal_digits;
    let scale = BigUint::from(10u32).pow(d);
    // Width q/10^d must sit inside the error bound: q * 10^10 < 10^d.
    if q * BigUint::from(10_000_000_000u64) >= scale {
        return Err(Error::Precision {
            digits: d,
            reason: format!(
                "multiplier has {} digits, so at least {} are needed",
                decimal_digits(q),
                decimal_digits(q) + 11
            ),
        });
    }
    let root = ((&num * &scale * &scale) / &den).sqrt();
    let lo = q * &root;
    let rem = &lo % &scale;
    if &rem + q > scale {
        return Err(Error::Precision {
            digits: d,
            reason: "enclosing interval straddles an integer".into(),
        });
    }
    Ok(SurdFrac::Approx(scaled_to_unit(&rem, d)))
}

/// `rem / 10^d` as f64, reading only the leading 30 digits.
fn scaled_to_unit(rem: &BigUint, d: u32) -> f64 {
    const KEEP: u32 = 30;
    if d <= KEEP {
        return rem.to_f64().unwrap_or(0.0) / 10f64.powi(d as i32);
    }
    let top = rem / BigUint::from(10u32).pow(d - KEEP);
    top.to_u128().map(|v| v as f64).unwrap_or(0.0) / 1e30
}

/// `cos(2 pi x)` for `x` in `[0, 1)`, exact at the quarter points.
pub fn cos_two_pi_frac(x: f64) -> f64 {
    use std::f64::consts::TAU;
    let z = if x > 0.5 { 1.0 - x } else { x };
    if z <= 0.125 {
        (TAU * z).cos()
    } else if z <= 0.375 {
        (TAU * (0.25 - z)).sin()
    } else {
        -(TAU * (0.5 - z)).cos()
    }
}

/// [`frac_of_surd_multiple`] starting at [`PrecisionBudget::for_multiplier`]
/// and doubling the budget while the interval straddles an integer.
///
/// `q sqrt(u)` is at least `c / q` away from any integer when `sqrt(u)` is a
/// quadratic irrational, so about `2 digits(q)` digits always decide.
pub fn frac_of_surd_multiple_auto(u_num: &BigUint, u_den: &BigUint, q: &BigUint) -> Result<SurdFrac> {
    let mut budget = PrecisionBudget::for_multiplier(q);
    let mut last = None;
    for _ in 0..=MAX_DOUBLINGS {
        match frac_of_surd_multiple(u_num, u_den, q, budget) {
            Err(e @ Error::Precision { .. }) => {
                last = Some(e);
                budget = budget.doubled();
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

const MAX_DOUBLINGS: usize = 4;

/// `cos(2 pi q sqrt(u_num / u_den))` through a certified fractional part.
pub fn cos_two_pi_surd_multiple(u_num: &BigUint, u_den: &BigUint, q: &BigUint) -> Result<f64> {
    Ok(cos_two_pi_frac(frac_of_surd_multiple_auto(u_num, u_den, q)?.value()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt_floor(&BigInt::from(0)).unwrap(), BigInt::from(0));
        assert_eq!(isqrt_floor(&BigInt::from(12)).unwrap(), BigInt::from(3));
        let e40 = BigInt::from(10u32).pow(40);
        assert_eq!(isqrt_floor(&e40).unwrap(), BigInt::from(10u32).pow(20));
        assert!(matches!(isqrt_floor(&BigInt::from(-1)), Err(Error::Domain(_))));
    }

    #[test]
    fn frac_examples() {
        let b = PrecisionBudget::for_multiplier(&big(7));
        assert_eq!(
            frac_of_surd_multiple(&big(4), &big(1), &big(7), b).unwrap(),
            SurdFrac::Exact { numer: big(0), denom: big(1) }
        );
        let f = frac_of_surd_multiple(&big(2), &big(1), &big(1), PrecisionBudget::for_multiplier(&big(1)))
            .unwrap()
            .value();
        assert!((f - 0.414_213_562_373_095_05).abs() < 1e-12);
        // convergent denominator 2131 of sqrt(3)
        let f = frac_of_surd_multiple(&big(3), &big(1), &big(2131), PrecisionBudget::for_multiplier(&big(2131)))
            .unwrap()
            .value();
        assert!(f.min(1.0 - f) < 1.0 / 2131.0, "{f}");
    }

    #[test]
    fn rational_roots_are_exact() {
        // sqrt(9/4) = 3/2; 5 * 3/2 = 7.5
        let f = frac_of_surd_multiple(&big(9), &big(4), &big(5), PrecisionBudget { decimal_digits: 1 }).unwrap();
        assert_eq!(f, SurdFrac::Exact { numer: big(1), denom: big(2) });
        // sqrt(18/8) = 3/2 after reduction
        let f = frac_of_surd_multiple(&big(18), &big(8), &big(1), PrecisionBudget { decimal_digits: 1 }).unwrap();
        assert_eq!(f.value(), 0.5);
    }

    #[test]
    fn insufficient_budget_is_reported() {
        let q = big(1_000_000_007);
        let err = frac_of_surd_multiple(&big(2), &big(1), &q, PrecisionBudget { decimal_digits: 12 });
        assert!(matches!(err, Err(Error::Precision { digits: 12, .. })));
        assert!(frac_of_surd_multiple(&big(2), &big(0), &q, PrecisionBudget::for_multiplier(&q)).is_err());
    }

    #[test]
    fn huge_multiplier_matches_independent_value() {
        // frac(q sqrt 2) for q = 10^30; reference from mpmath at 80 digits.
        let q = BigUint::from(10u32).pow(30);
        let f = frac_of_surd_multiple(&big(2), &big(1), &q, PrecisionBudget::for_multiplier(&q))
            .unwrap()
            .value();
        assert!((f - 0.698_078_569_671_875_376_9).abs() < 1e-12, "{f}");
    }

    #[test]
    fn doubling_resolves_near_integers() {
        // Convergent denominator of sqrt 2 with frac(q sqrt 2) = 1 - 1.08e-23.
        let q: BigUint = "32733777552734744709300".parse().unwrap();
        let base = PrecisionBudget::for_multiplier(&q);
        assert!(matches!(
            frac_of_surd_multiple(&big(2), &big(1), &q, base),
            Err(Error::Precision { .. })
        ));
        let f = frac_of_surd_multiple_auto(&big(2), &big(1), &q).unwrap().value();
        assert!(1.0 - f < 1e-15, "{f}");
        assert_eq!(cos_two_pi_surd_multiple(&big(2), &big(1), &q).unwrap(), 1.0);
    }

    #[test]
    fn cosine_quarter_points() {
        assert_eq!(cos_two_pi_frac(0.0), 1.0);
        assert_eq!(cos_two_pi_frac(0.5), -1.0);
        assert_eq!(cos_two_pi_frac(0.25), 0.0);
        assert_eq!(cos_two_pi_frac(0.75), 0.0);
        for i in 0..1000 {
            let x = i as f64 / 1000.0;
            assert!((cos_two_pi_frac(x) - (std::f64::consts::TAU * x).cos()).abs() < 1e-14);
        }
    }
}
