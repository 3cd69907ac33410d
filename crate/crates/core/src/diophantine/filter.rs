use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::candidates::CandidateSet;
use crate::error::{Error, Result};
use crate::exec;
use crate::model::{eigen_d_integer, ModelParams};
use crate::precision::cos_two_pi_surd_multiple;

/// How `cos(2 sqrt(D_n) t_q)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    /// Exact integer square roots with a certified fractional part.
    #[default]
    Certified,
    /// IEEE double, evaluated as `cos(2.0 * sqrt(D) * q * PI)` left to right
    /// with `q` rounded to f64. Meaningless once `q` exceeds ~1e12, but it is
    /// the evaluation that reproduces the published filtered sets.
    Float64,
}

/// The low-temperature filter on candidate denominators.
///
/// A candidate `q` is kept when, with `b = exp(-beta)` and `t_q = q pi / r`,
///
/// ```text
/// sum_{j<=order} b^j (1 - 2 eps c_j)  <  sum_{n<=order} b^n cos(2 sqrt(D_n) t_q)
/// ```
///
/// where `c_j = floor(j / l) + 1` are the series coefficients of
/// `1 / ((1 - b)(1 - b^l))`. This is `|L3(t_q)| < eps` expanded to `O(b^order)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub beta: f64,
    pub epsilon: f64,
    pub order: usize,
    /// `r^2` in `t_q = q pi / r`.
    pub time_divisor_squared: u64,
    pub arithmetic: Arithmetic,
}

impl FilterSpec {
    pub fn new(beta: f64, epsilon: f64) -> Self {
        FilterSpec {
            beta,
            epsilon,
            order: 2,
            time_divisor_squared: 1,
            arithmetic: Arithmetic::Certified,
        }
    }

    /// `beta = 2` with the published per-`l` thresholds.
    pub fn published_epsilon(l: u32) -> Option<f64> {
        match l {
            1 => Some(0.0035),
            2 => Some(0.05),
            3 => Some(0.003),
            4 => Some(0.04),
            _ => None,
        }
    }

    pub fn with_arithmetic(self, arithmetic: Arithmetic) -> Self {
        FilterSpec { arithmetic, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::invalid("filter.beta", format!("must be finite and > 0, got {}", self.beta)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::invalid("filter.epsilon", format!("must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.time_divisor_squared == 0 {
            return Err(Error::invalid("filter.time_divisor_squared", "must be >= 1"));
        }
        Ok(())
    }

    pub fn boltzmann_factor(&self) -> f64 {
        (-self.beta).exp()
    }

    /// Left-hand side of the filter inequality.
    pub fn threshold(&self, l: u32) -> f64 {
        let b = self.boltzmann_factor();
        let mut lhs = 0.0;
        for j in 0..=self.order {
            let c = (j / l as usize + 1) as f64;
            lhs += b.powi(j as i32) * (1.0 - 2.0 * self.epsilon * c);
        }
        lhs
    }

    /// Bound on `|S_z(t_q)|` guaranteed for every accepted `q`.
    ///
    /// The dropped orders of both sides of the inequality are bounded by
    /// `2 b^(order+1) / (1 - b)`, which turns `|L3| < eps` into
    /// `|L3| < eps + (1 - b^l) b^(order+1)`.
    pub fn implied_sz_bound(&self, l: u32) -> f64 {
        let b = self.boltzmann_factor();
        self.epsilon + (1.0 - b.powi(l as i32)) * b.powi(self.order as i32 + 1)
    }
}

/// `sum_{n<=order} b^n cos(2 sqrt(D_n) t_q)`.
pub fn filter_rhs(q: &BigUint, l: u32, fspec: &FilterSpec) -> Result<f64> {
    let b = fspec.boltzmann_factor();
    let r2 = fspec.time_divisor_squared;
    let mut rhs = 0.0;
    for n in 0..=fspec.order as u64 {
        let d = eigen_d_integer(n, l)
            .ok_or_else(|| Error::Domain(format!("D_{n} overflows for l = {l}")))?;
        let c = match fspec.arithmetic {
            Arithmetic::Certified => cos_two_pi_surd_multiple(&BigUint::from(d), &BigUint::from(r2), q)?,
            Arithmetic::Float64 => {
                let qf = q.to_f64().unwrap_or(f64::INFINITY);
                let mut arg = 2.0 * (d as f64).sqrt() * qf * PI;
                if r2 != 1 {
                    arg /= (r2 as f64).sqrt();
                }
                arg.cos()
            }
        };
        rhs += b.powi(n as i32) * c;
    }
    Ok(rhs)
}

/// `rhs - lhs`; the candidate passes when this is positive.
pub fn filter_margin(q: &BigUint, l: u32, fspec: &FilterSpec) -> Result<f64> {
    Ok(filter_rhs(q, l, fspec)? - fspec.threshold(l))
}

/// The subset of `mset` that satisfies the filter inequality.
///
/// The inequality is written for `g = omega = 1`; other normalizations are
/// rejected.
pub fn filter_candidates(mset: &CandidateSet, params: &ModelParams, fspec: &FilterSpec) -> Result<CandidateSet> {
    params.validate()?;
    if !params.is_normalized() {
        return Err(Error::Normalization {
            g: params.g,
            omega: params.omega,
        });
    }
    fspec.validate()?;
    let members: Vec<&BigUint> = mset.members().collect();
    let keep = exec::try_map_slice(&members, |q| Ok::<_, Error>(filter_margin(q, params.l, fspec)? > 0.0))?;
    let accepted: std::collections::BTreeSet<&BigUint> = members
        .iter()
        .zip(keep)
        .filter_map(|(q, k)| k.then_some(*q))
        .collect();
    Ok(mset.retain_from(|q| accepted.contains(q)))
}
