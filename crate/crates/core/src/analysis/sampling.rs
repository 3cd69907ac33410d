use super::SamplingPlan;
use crate::error::Result;
use crate::exec;
use crate::model::{check_initial_state, BlochVector, ModelParams, SeriesConfig, ThermalSeries, TrajectoryFrame};

/// Frames `t_n = n * step`, `n = 0..=N`, from `S(0) = (1, 0, 0)`.
///
/// A plan with `dt mod 2 pi <= pi` is sampled anyway, with a warning.
pub fn sample_trajectory(params: &ModelParams, plan: &SamplingPlan, cfg: &SeriesConfig) -> Result<Vec<TrajectoryFrame>> {
    sample_trajectory_from(&BlochVector::PLUS_X, params, plan, cfg)
}

pub fn sample_trajectory_from(
    s0: &BlochVector,
    params: &ModelParams,
    plan: &SamplingPlan,
    cfg: &SeriesConfig,
) -> Result<Vec<TrajectoryFrame>> {
    plan.validate()?;
    check_initial_state(s0)?;
    if !plan.wraps_every_two_steps() {
        log::warn!(
            "dt mod 2pi = {} is not above pi; sampled phases are not a two-step congruential sequence",
            plan.residue()
        );
    }
    let series = ThermalSeries::new(params, cfg)?;
    let step = plan.step();
    let len = usize::try_from(plan.n_points).expect("n_points fits in usize") + 1;
    Ok(exec::map_range(len, |i| {
        let n = i as u64;
        let t = n as f64 * step;
        TrajectoryFrame {
            n,
            t,
            bloch: series.bloch(s0, t),
        }
    }))
}
