//! Run settings: command-line flags over a TOML file over defaults.

use std::path::Path;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use thermal_jcm::analysis::{panel_betas, EpsilonSchedule, SamplingPlan, Thresholds};
use thermal_jcm::diophantine::{Arithmetic, CandidateSpec, FilterSpec};
use thermal_jcm::{ModelParams, SeriesConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticArg {
    /// Exact integer square roots with certified fractional parts.
    Certified,
    /// IEEE double evaluation; reproduces the published filtered-set sizes.
    Float64,
}

impl From<ArithmeticArg> for Arithmetic {
    fn from(a: ArithmeticArg) -> Self {
        match a {
            ArithmeticArg::Certified => Arithmetic::Certified,
            ArithmeticArg::Float64 => Arithmetic::Float64,
        }
    }
}

/// Every tunable. Flags and the TOML file share these names
/// (`--n-points` on the command line is `n_points` in the file).
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Photon number of the transition.
    #[arg(long)]
    pub l: Option<u32>,
    /// Inverse temperature; `inf` for zero temperature.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Sampling interval.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Number of steps N (frames n = 0..=N).
    #[arg(long)]
    pub n_points: Option<u64>,
    /// Scale factor applied to dt.
    #[arg(long)]
    pub s: Option<f64>,
    /// Sample [0, t_max] with n_points steps instead of a fixed dt.
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub tail_tolerance: Option<f64>,
    #[arg(long)]
    pub max_terms: Option<usize>,
    /// Histogram cells per axis for cloud comparisons.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Temperature of the negative-control cloud.
    #[arg(long)]
    pub control_beta: Option<f64>,
    /// Pass threshold for the scale-invariance distance.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Pass threshold for the reflection asymmetry.
    #[arg(long)]
    pub symmetry_threshold: Option<f64>,
    /// Largest Weyl frequency.
    #[arg(long)]
    pub m_max: Option<u32>,
    #[arg(long)]
    pub eps0: Option<f64>,
    #[arg(long)]
    pub c0: Option<f64>,
    #[arg(long)]
    pub n0: Option<u64>,
    #[arg(long)]
    pub beta_points: Option<usize>,
    #[arg(long)]
    pub beta_min: Option<f64>,
    #[arg(long)]
    pub beta_max: Option<f64>,
    /// Inverse temperature of the candidate filter.
    #[arg(long)]
    pub filter_beta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum)]
    pub arithmetic: Option<ArithmeticArg>,
    /// r^2 in t_q = q pi / r.
    #[arg(long)]
    pub time_divisor_squared: Option<u64>,
    /// Largest thermal weight the oracle's Fock cutoff may distort.
    #[arg(long)]
    pub oracle_tolerance: Option<f64>,
}

macro_rules! merge {
    ($flags:expr, $file:expr, $($f:ident),+ $(,)?) => {
        Settings { $($f: $flags.$f.or($file.$f)),+ }
    };
}

impl Settings {
    pub fn load(path: &Path) -> anyhow::Result<Settings> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// `self` wins over `file`.
    pub fn over(self, file: Settings) -> Settings {
        merge!(
            self, file, l, beta, g, omega, dt, n_points, s, t_max, tail_tolerance, max_terms, bins, control_beta,
            threshold, symmetry_threshold, m_max, eps0, c0, n0, beta_points, beta_min, beta_max, filter_beta,
            epsilon, arithmetic, time_divisor_squared, oracle_tolerance,
        )
    }

    pub fn resolve(&self) -> anyhow::Result<Resolved> {
        let l = self.l.unwrap_or(2);
        if l == 0 {
            bail!("l must be >= 1");
        }
        let beta = self.beta.unwrap_or_else(|| panel_betas(l).map_or(1.0, |p| p.0));
        let sched = EpsilonSchedule::published(l).unwrap_or(EpsilonSchedule {
            eps0: 0.005,
            c0: 1.0,
            n0: 1_000_000,
        });
        let thresholds = Thresholds::calibrated(l);
        Ok(Resolved {
            l,
            beta,
            g: self.g.unwrap_or(1.0),
            omega: self.omega.unwrap_or(1.0),
            dt: self.dt.unwrap_or(4.0),
            n_points: self.n_points.unwrap_or(400_000),
            s: self.s,
            t_max: self.t_max,
            tail_tolerance: self.tail_tolerance.unwrap_or(SeriesConfig::default().tail_tolerance),
            max_terms: self.max_terms.unwrap_or(SeriesConfig::default().max_terms),
            bins: self.bins.unwrap_or(64),
            control_beta: self.control_beta.unwrap_or_else(|| panel_betas(l).map_or(2.0 * beta, |p| p.1)),
            threshold: self.threshold.or(thresholds.map(|t| t.scale_invariance)).unwrap_or(0.5),
            symmetry_threshold: self.symmetry_threshold.or(thresholds.map(|t| t.symmetry)).unwrap_or(0.5),
            m_max: self.m_max.unwrap_or(8),
            eps0: self.eps0.unwrap_or(sched.eps0),
            c0: self.c0.unwrap_or(sched.c0),
            n0: self.n0.unwrap_or(sched.n0),
            beta_points: self.beta_points.unwrap_or(100),
            beta_min: self.beta_min.unwrap_or(0.5),
            beta_max: self.beta_max.unwrap_or(5.0),
            filter_beta: self.filter_beta.unwrap_or(2.0),
            epsilon: self.epsilon.or(FilterSpec::published_epsilon(l)).unwrap_or(0.01),
            arithmetic: self.arithmetic.unwrap_or(ArithmeticArg::Certified),
            time_divisor_squared: self.time_divisor_squared.unwrap_or(1),
            oracle_tolerance: self.oracle_tolerance.unwrap_or(1e-12),
        })
    }
}

/// Settings with every default filled in; written next to the outputs.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub l: u32,
    pub beta: f64,
    pub g: f64,
    pub omega: f64,
    pub dt: f64,
    pub n_points: u64,
    pub s: Option<f64>,
    pub t_max: Option<f64>,
    pub tail_tolerance: f64,
    pub max_terms: usize,
    pub bins: usize,
    pub control_beta: f64,
    pub threshold: f64,
    pub symmetry_threshold: f64,
    pub m_max: u32,
    pub eps0: f64,
    pub c0: f64,
    pub n0: u64,
    pub beta_points: usize,
    pub beta_min: f64,
    pub beta_max: f64,
    pub filter_beta: f64,
    pub epsilon: f64,
    pub arithmetic: ArithmeticArg,
    pub time_divisor_squared: u64,
    pub oracle_tolerance: f64,
}

impl Resolved {
    pub fn params(&self) -> thermal_jcm::Result<ModelParams> {
        ModelParams::new(self.l, self.g, self.omega, self.beta)
    }

    pub fn series(&self) -> SeriesConfig {
        SeriesConfig {
            tail_tolerance: self.tail_tolerance,
            max_terms: self.max_terms,
        }
    }

    pub fn plan(&self) -> SamplingPlan {
        let plan = SamplingPlan::new(self.dt, self.n_points);
        match self.s {
            Some(s) => plan.with_scale(s),
            None => plan,
        }
    }

    pub fn schedule(&self) -> EpsilonSchedule {
        EpsilonSchedule {
            eps0: self.eps0,
            c0: self.c0,
            n0: self.n0,
        }
    }

    pub fn filter(&self) -> FilterSpec {
        FilterSpec {
            time_divisor_squared: self.time_divisor_squared,
            ..FilterSpec::new(self.filter_beta, self.epsilon)
        }
        .with_arithmetic(self.arithmetic.into())
    }

    pub fn candidates(&self) -> anyhow::Result<CandidateSpec> {
        CandidateSpec::published(self.l)
            .with_context(|| format!("no published candidate windows for l = {}", self.l))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("resolved settings serialize")
    }
}
