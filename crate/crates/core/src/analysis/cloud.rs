use serde::Serialize;

use super::{sample_trajectory, SamplingPlan};
use crate::error::{Error, Result};
use crate::model::{ModelParams, SeriesConfig, TrajectoryFrame};

/// Points `(S_x, S_z)` of a sampled trajectory.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    pub points: Vec<[f64; 2]>,
}

impl PointCloud {
    pub fn from_frames(frames: &[TrajectoryFrame]) -> Self {
        PointCloud {
            points: frames.iter().map(|f| [f.bloch.sx, f.bloch.sz]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(x, z) -> (-x, z)`.
    pub fn reflect_x(&self) -> Self {
        PointCloud {
            points: self.points.iter().map(|&[x, z]| [-x, z]).collect(),
        }
    }

    pub fn union(&self, other: &PointCloud) -> Self {
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        PointCloud { points }
    }
}

/// Normalized occupancy of a `bins x bins` grid on `[-1, 1]^2`, plus one
/// cell for points outside the square (or non-finite).
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram2d {
    bins: usize,
    counts: Vec<u64>,
    outside: u64,
    total: u64,
}

impl Histogram2d {
    pub fn new(cloud: &PointCloud, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::invalid("bins", "must be >= 1"));
        }
        if cloud.is_empty() {
            return Err(Error::EmptyCloud);
        }
        let mut counts = vec![0u64; bins * bins];
        let mut outside = 0;
        for &[x, z] in &cloud.points {
            match (Self::index(x, bins), Self::index(z, bins)) {
                (Some(i), Some(j)) => counts[i * bins + j] += 1,
                _ => outside += 1,
            }
        }
        Ok(Histogram2d {
            bins,
            counts,
            outside,
            total: cloud.len() as u64,
        })
    }

    fn index(v: f64, bins: usize) -> Option<usize> {
        if !(-1.0..=1.0).contains(&v) {
            return None;
        }
        let i = ((v + 1.0) * 0.5 * bins as f64) as usize;
        Some(i.min(bins - 1))
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn outside(&self) -> u64 {
        self.outside
    }

    /// Total variation style L1 distance, in `[0, 2]`.
    pub fn l1_distance(&self, other: &Histogram2d) -> Result<f64> {
        if self.bins != other.bins {
            return Err(Error::invalid("bins", "histograms must share the grid"));
        }
        let (na, nb) = (self.total as f64, other.total as f64);
        let cells = self.counts.iter().zip(&other.counts).map(|(&a, &b)| (a as f64 / na - b as f64 / nb).abs());
        let out = (self.outside as f64 / na - other.outside as f64 / nb).abs();
        Ok(cells.sum::<f64>() + out)
    }
}

/// L1 distance between the binned densities of two clouds. 0 for identical
/// densities, 2 for clouds with disjoint support.
pub fn cloud_distance(a: &PointCloud, b: &PointCloud, bins: usize) -> Result<f64> {
    Histogram2d::new(a, bins)?.l1_distance(&Histogram2d::new(b, bins)?)
}

/// Distance between a cloud and its mirror image in `S_x`.
pub fn reflection_asymmetry(cloud: &PointCloud, bins: usize) -> Result<f64> {
    cloud_distance(cloud, &cloud.reflect_x(), bins)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleCheck {
    /// Cloud at step `dt` vs. cloud at step `s dt`.
    pub distance: f64,
    /// Cloud at step `dt` vs. cloud at `control_beta`, step `dt`.
    pub control_distance: f64,
    pub threshold: f64,
    /// `distance < threshold`.
    pub pass: bool,
    /// `control_distance > threshold`: the comparison can tell different
    /// clouds apart.
    pub control_pass: bool,
}

/// Compares the cloud sampled at `dt` with the one sampled at `s dt`, and,
/// as a negative control, with the cloud at another temperature.
///
/// `plan.s` must be set and admissible; a plan whose `dt mod 2 pi` is not
/// above `pi` is rejected.
pub fn scale_invariance_check(
    params: &ModelParams,
    plan: &SamplingPlan,
    cfg: &SeriesConfig,
    bins: usize,
    threshold: f64,
    control_beta: f64,
) -> Result<ScaleCheck> {
    plan.validate()?;
    if plan.s.is_none() {
        return Err(Error::invalid("s", "a scale factor is required"));
    }
    if !plan.wraps_every_two_steps() {
        return Err(Error::invalid(
            "dt",
            format!("dt mod 2pi = {} must exceed pi", plan.residue()),
        ));
    }
    plan.check_scale()?;
    let base_plan = SamplingPlan { s: None, ..*plan };
    let base = PointCloud::from_frames(&sample_trajectory(params, &base_plan, cfg)?);
    let scaled = PointCloud::from_frames(&sample_trajectory(params, plan, cfg)?);
    let control_params = params.with_beta(control_beta);
    control_params.validate()?;
    let control = PointCloud::from_frames(&sample_trajectory(&control_params, &base_plan, cfg)?);
    let distance = cloud_distance(&base, &scaled, bins)?;
    let control_distance = cloud_distance(&base, &control, bins)?;
    Ok(ScaleCheck {
        distance,
        control_distance,
        threshold,
        pass: distance < threshold,
        control_pass: control_distance > threshold,
    })
}
