use num_complex::Complex64;
use serde::Serialize;

use super::SamplingPlan;
use crate::error::{Error, Result};
use crate::exec;

const TWO_PI_HI: f64 = std::f64::consts::TAU;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;
const CHUNK: usize = 4096;
const DEGENERATE: f64 = 1e-12;

/// `k * step` reduced to `[-pi, pi]`, accurate to a few ulps of `pi` as long
/// as `k * step` stays below ~1e15.
///
/// The product is split into `p + e` with an fma, then `2 pi` is removed in
/// two parts so the large multiple cancels exactly.
pub fn reduce_phase(k: f64, step: f64) -> f64 {
    let p = k * step;
    let e = k.mul_add(step, -p);
    let j = (p / TWO_PI_HI).round();
    let r = (-j).mul_add(TWO_PI_HI, p);
    (-j).mul_add(TWO_PI_LO, r) + e
}

/// `sum_{n=0}^{terms-1} exp(i m n step)`, summed term by term in fixed-size
/// chunks (deterministic regardless of thread count).
pub fn weyl_sum_direct(step: f64, terms: u64, m: i64) -> Complex64 {
    let n = usize::try_from(terms).expect("terms fits in usize");
    let chunks = n.div_ceil(CHUNK);
    let partial = exec::map_range(chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            let phase = reduce_phase(m as f64 * i as f64, step);
            let (s, co) = phase.sin_cos();
            acc += Complex64::new(co, s);
        }
        acc
    });
    partial.into_iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b)
}

/// Geometric-series form of [`weyl_sum_direct`].
pub fn weyl_sum_closed(step: f64, terms: u64, m: i64) -> Result<Complex64> {
    let theta = reduce_phase(m as f64, step);
    if theta.abs() < DEGENERATE {
        return Err(Error::DegenerateStep { dt: step, m });
    }
    let big = reduce_phase(m as f64 * terms as f64, step);
    let one = Complex64::new(1.0, 0.0);
    Ok((one - Complex64::from_polar(1.0, big)) / (one - Complex64::from_polar(1.0, theta)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylReport {
    pub n_points: u64,
    pub step: f64,
    /// `(m, |(1/(N+1)) sum_{n=0}^{N} exp(i m n step)|)` for
    /// `m = +-1..=+-m_max`.
    pub magnitudes: Vec<(i64, f64)>,
    pub max: f64,
    /// `max_m 1 / ((N+1) |sin(m step / 2)|)`, the exact envelope of the
    /// magnitudes.
    pub envelope: f64,
}

/// Normalized Weyl sums of the sampling phases `n * step mod 2 pi`,
/// `n = 0..=N`.
pub fn weyl_discrepancy(plan: &SamplingPlan, m_max: u32) -> Result<WeylReport> {
    plan.validate()?;
    if plan.n_points == 0 {
        return Err(Error::invalid("n_points", "must be >= 1"));
    }
    if m_max == 0 {
        return Err(Error::invalid("m_max", "must be >= 1"));
    }
    let step = plan.step();
    let terms = plan.n_points + 1;
    let nf = terms as f64;
    let mut magnitudes = Vec::with_capacity(2 * m_max as usize);
    let mut envelope: f64 = 0.0;
    for mm in 1..=m_max as i64 {
        let theta = reduce_phase(mm as f64, step);
        if theta.abs() < DEGENERATE {
            return Err(Error::DegenerateStep { dt: step, m: mm });
        }
        envelope = envelope.max(1.0 / (nf * (0.5 * theta).sin().abs()));
        for m in [-mm, mm] {
            magnitudes.push((m, weyl_sum_direct(step, terms, m).norm() / nf));
        }
    }
    let max = magnitudes.iter().map(|&(_, v)| v).fold(0.0, f64::max);
    Ok(WeylReport {
        n_points: plan.n_points,
        step,
        magnitudes,
        max,
        envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reduction_is_accurate() {
        // 1e6 * 4 = 4e6 exactly; 4e6 mod 2pi from high precision arithmetic.
        let r = reduce_phase(1e6, 4.0);
        let expect = 4e6 - 636_620.0 * 2.0 * PI;
        assert!((r - expect).abs() < 1e-8);
        assert!(r.abs() <= PI + 1e-15);
        assert!((reduce_phase(3.0, 4.0) - (12.0 - 4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn direct_matches_closed() {
        for &(step, n) in &[(4.0, 10_000u64), (4.8, 12_345), (1.0, 1000)] {
            for m in [-3i64, -1, 1, 2, 7] {
                let d = weyl_sum_direct(step, n, m);
                let c = weyl_sum_closed(step, n, m).unwrap();
                assert!((d - c).norm() < 1e-9 * n as f64, "step={step} m={m}");
            }
        }
    }

    #[test]
    fn degenerate_step() {
        assert!(matches!(weyl_sum_closed(2.0 * PI, 10, 1), Err(Error::DegenerateStep { .. })));
        assert!(matches!(
            weyl_discrepancy(&SamplingPlan::new(PI, 10), 2),
            Err(Error::DegenerateStep { m: 2, .. })
        ));
    }

    #[test]
    fn report_bounded_by_envelope() {
        let r = weyl_discrepancy(&SamplingPlan::new(4.0, 50_000), 4).unwrap();
        assert_eq!(r.magnitudes.len(), 8);
        assert!(r.max <= r.envelope * (1.0 + 1e-9));
        assert!(r.max < 1e-3);
    }
}
