use serde::{Deserialize, Serialize};

use super::SamplingPlan;
use crate::error::{Error, Result};
use crate::exec;
use crate::model::{ModelParams, SeriesConfig, ThermalSeries};

const BETA_MIN: f64 = 0.5;
const BETA_MAX: f64 = 5.0;

/// Temperature-dependent threshold and sample count for [`zero_scan`].
///
/// `eps(beta) = eps0` for `2 <= beta <= 5` and `eps0 exp(c0 (2 - beta))`
/// below. `N(beta)` is `n0`, `n0/2`, `n0/5`, `n0/10` on
/// `[0.5, 1)`, `[1, 2)`, `[2, 3)`, `[3, 5]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSchedule {
    pub eps0: f64,
    pub c0: f64,
    pub n0: u64,
}

impl EpsilonSchedule {
    pub fn published(l: u32) -> Option<Self> {
        let (eps0, c0) = match l {
            1 => (0.0035, 0.7),
            2 => (0.009, 0.6),
            3 => (0.0024, 1.5),
            4 => (0.009, 0.7),
            _ => return None,
        };
        Some(EpsilonSchedule { eps0, c0, n0: 1_000_000 })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps0 > 0.0 && self.eps0.is_finite()) {
            return Err(Error::invalid("eps0", format!("must be finite and > 0, got {}", self.eps0)));
        }
        if !self.c0.is_finite() {
            return Err(Error::invalid("c0", "must be finite"));
        }
        if self.n0 < 10 {
            return Err(Error::invalid("n0", "must be >= 10"));
        }
        Ok(())
    }

    fn check_beta(beta: f64) -> Result<()> {
        if !(BETA_MIN..=BETA_MAX).contains(&beta) {
            return Err(Error::Domain(format!(
                "beta = {beta} lies outside the scan range [{BETA_MIN}, {BETA_MAX}]"
            )));
        }
        Ok(())
    }

    pub fn epsilon(&self, beta: f64) -> Result<f64> {
        Self::check_beta(beta)?;
        Ok(if beta >= 2.0 {
            self.eps0
        } else {
            self.eps0 * (self.c0 * (2.0 - beta)).exp()
        })
    }

    pub fn n_points(&self, beta: f64) -> Result<u64> {
        Self::check_beta(beta)?;
        let div = if beta < 1.0 {
            1
        } else if beta < 2.0 {
            2
        } else if beta < 3.0 {
            5
        } else {
            10
        };
        Ok(self.n0 / div)
    }
}

/// A sample with `|S_z| < eps(beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanHit {
    pub beta: f64,
    pub n: u64,
    pub t: f64,
    pub sx: f64,
    pub sz: f64,
}

/// `points` values of `beta`, evenly spaced in `log(beta)`, with exact
/// endpoints.
pub fn log_beta_grid(points: usize, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::invalid("beta_grid", format!("need 0 < lo <= hi, got [{lo}, {hi}]")));
    }
    match points {
        0 => Ok(Vec::new()),
        1 => Ok(vec![lo]),
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let last = points - 1;
            Ok((0..points)
                .map(|i| match i {
                    0 => lo,
                    i if i == last => hi,
                    i => (a + (b - a) * i as f64 / last as f64).exp(),
                })
                .collect())
        }
    }
}

/// Samples `t_n = n * plan.step()`, `n = 0..=N(beta)`, from
/// `S(0) = (1, 0, 0)` for every `beta` in the grid and keeps the frames
/// with `|S_z(t_n)| < eps(beta)`. `plan.n_points` is ignored in favour of
/// the schedule.
pub fn zero_scan(
    params: &ModelParams,
    plan: &SamplingPlan,
    sched: &EpsilonSchedule,
    beta_grid: &[f64],
    cfg: &SeriesConfig,
) -> Result<Vec<ScanHit>> {
    plan.validate()?;
    sched.validate()?;
    let step = plan.step();
    let mut hits = Vec::new();
    for &beta in beta_grid {
        let eps = sched.epsilon(beta)?;
        let n_points = sched.n_points(beta)?;
        let p = params.with_beta(beta);
        p.validate()?;
        let series = ThermalSeries::new(&p, cfg)?;
        let len = usize::try_from(n_points).expect("n_points fits in usize") + 1;
        // The one-cosine form screens; the reported value comes from the
        // full matrix elements so re-evaluation agrees bit for bit.
        let slack = 1e-9;
        hits.extend(exec::filter_map_range(len, |i| {
            let n = i as u64;
            let t = n as f64 * step;
            if series.l3_double_angle(t).abs() >= eps + slack {
                return None;
            }
            let s = series.bloch_from_plus_x(t);
            (s.sz.abs() < eps).then_some(ScanHit {
                beta,
                n,
                t,
                sx: s.sx,
                sz: s.sz,
            })
        }));
    }
    Ok(hits)
}
