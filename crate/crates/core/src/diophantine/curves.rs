use num_bigint::BigUint;

use super::candidates::CandidateSet;
use crate::error::{Error, Result};
use crate::exec;
use crate::model::{eigen_d_integer, BlochVector, ModelParams, SeriesConfig};
use crate::precision::cos_two_pi_surd_multiple;

/// One point `(beta, S_x(q pi / r))` of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub beta: f64,
    pub q: BigUint,
    pub sx: f64,
}

/// Certified cosines at `t_q = q pi / r` for `n = 0..=n_max`:
/// `half[n] = cos(sqrt(D_n) t_q)` and `full[n] = cos(2 sqrt(D_n) t_q)`.
/// Since `D'_n = D_{n-l}`, the primed cosines are `half[n - l]`.
struct ExactTimeCosines {
    half: Vec<f64>,
    full: Vec<f64>,
}

impl ExactTimeCosines {
    fn new(q: &BigUint, l: u32, r2: u64, n_max: usize) -> Result<Self> {
        let mut half = Vec::with_capacity(n_max + 1);
        let mut full = Vec::with_capacity(n_max + 1);
        let r2 = BigUint::from(r2);
        let four_r2 = &r2 * 4u32;
        for n in 0..=n_max as u64 {
            let d = BigUint::from(
                eigen_d_integer(n, l).ok_or_else(|| Error::Domain(format!("D_{n} overflows for l = {l}")))?,
            );
            half.push(cos_two_pi_surd_multiple(&d, &four_r2, q)?);
            full.push(cos_two_pi_surd_multiple(&d, &r2, q)?);
        }
        Ok(ExactTimeCosines { half, full })
    }

    fn bloch(&self, params: &ModelParams, n_max: usize) -> BlochVector {
        let b = params.boltzmann_factor();
        let l = params.l as usize;
        let (mut sx, mut f, mut b_pow_n) = (0.0, 0.0, 1.0);
        for n in 0..=n_max {
            let w = (1.0 - b) * b_pow_n;
            b_pow_n *= b;
            let primed = if n >= l { self.half[n - l] } else { 1.0 };
            sx += w * self.half[n] * primed;
            f += w * self.full[n];
        }
        let sz = -0.5 * (1.0 - b.powi(params.l as i32)) * (1.0 - f);
        BlochVector { sx, sy: 0.0, sz }
    }
}

fn check_normalized(params: &ModelParams) -> Result<()> {
    params.validate()?;
    if !params.is_normalized() {
        return Err(Error::Normalization {
            g: params.g,
            omega: params.omega,
        });
    }
    Ok(())
}

/// `S(t_q)` from `S(0) = (1, 0, 0)` at `t_q = q pi / sqrt(r2)`, with every
/// cosine evaluated through a certified fractional part. Works for any size
/// of `q`; requires `g = omega = 1`.
pub fn bloch_at_q_pi(q: &BigUint, params: &ModelParams, r2: u64, cfg: &SeriesConfig) -> Result<BlochVector> {
    check_normalized(params)?;
    let n_max = cfg.n_max(params)?;
    Ok(ExactTimeCosines::new(q, params.l, r2.max(1), n_max)?.bloch(params, n_max))
}

/// `S_x(q pi / r)` for every `beta` in the grid and every `q` in `mtilde`,
/// beta-major.
pub fn blue_curves(
    mtilde: &CandidateSet,
    params_grid: &[ModelParams],
    time_divisor_squared: u64,
    cfg: &SeriesConfig,
) -> Result<Vec<CurvePoint>> {
    let Some(first) = params_grid.first() else {
        return Ok(Vec::new());
    };
    let mut n_maxes = Vec::with_capacity(params_grid.len());
    for p in params_grid {
        check_normalized(p)?;
        if p.l != first.l {
            return Err(Error::invalid("params_grid", "all grid points must share l"));
        }
        n_maxes.push(cfg.n_max(p)?);
    }
    let n_top = n_maxes.iter().copied().max().unwrap_or(0);
    let qs: Vec<&BigUint> = mtilde.members().collect();
    let cosines = exec::try_map_slice(&qs, |q| {
        ExactTimeCosines::new(q, first.l, time_divisor_squared.max(1), n_top)
    })?;
    let mut out = Vec::with_capacity(params_grid.len() * qs.len());
    for (p, &n_max) in params_grid.iter().zip(&n_maxes) {
        for (q, c) in qs.iter().zip(&cosines) {
            out.push(CurvePoint {
                beta: p.beta,
                q: (*q).clone(),
                sx: c.bloch(p, n_max).sx,
            });
        }
    }
    Ok(out)
}
