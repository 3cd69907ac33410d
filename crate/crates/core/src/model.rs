//! Closed-form thermal Bloch-vector dynamics of the l-photon Jaynes-Cummings
//! model at zero detuning.
//!
//! The photon field starts in a Bose-Einstein state with Boltzmann factor
//! `b = exp(-beta * omega)`; the atom starts in an arbitrary Bloch state. In
//! the interaction picture the reduced atomic state is fixed by three thermal
//! series `A_{00,00}`, `A_{11,00}` and `A_{01,01}`, summed over the photon
//! number `n` with frequencies `sqrt(D_n)` and `sqrt(D'_n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical configuration of one evaluation (`hbar = k_B = 1`).
///
/// Detuning is fixed to zero, so the atomic frequency is always `l * omega`.
/// Only `g^2` enters any observable; a negative `g` is accepted and behaves
/// exactly like `|g|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Photon multiplicity of the interaction `sigma_+ a^l + h.c.`.
    pub l: u32,
    pub g: f64,
    pub omega: f64,
    /// Inverse temperature. `f64::INFINITY` selects the zero-temperature branch.
    pub beta: f64,
}

impl ModelParams {
    pub fn new(l: u32, g: f64, omega: f64, beta: f64) -> Result<Self> {
        let p = ModelParams { l, g, omega, beta };
        p.validate()?;
        Ok(p)
    }

    /// `g = omega = 1`, the normalization used by the Diophantine machinery.
    pub fn normalized(l: u32, beta: f64) -> Result<Self> {
        Self::new(l, 1.0, 1.0, beta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::invalid("l", "photon multiplicity must be >= 1"));
        }
        if !self.g.is_finite() || self.g == 0.0 {
            return Err(Error::invalid("g", format!("coupling must be finite and nonzero, got {}", self.g)));
        }
        if !self.omega.is_finite() || self.omega <= 0.0 {
            return Err(Error::invalid("omega", format!("must be finite and > 0, got {}", self.omega)));
        }
        if self.beta.is_nan() || self.beta <= 0.0 {
            return Err(Error::invalid("beta", format!("must be > 0 (or +inf), got {}", self.beta)));
        }
        Ok(())
    }

    pub fn with_beta(self, beta: f64) -> Self {
        ModelParams { beta, ..self }
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta == f64::INFINITY
    }

    pub fn is_normalized(&self) -> bool {
        self.g == 1.0 && self.omega == 1.0
    }

    /// `b = exp(-beta * omega)`; exactly 0 at zero temperature.
    pub fn boltzmann_factor(&self) -> f64 {
        if self.is_zero_temperature() {
            0.0
        } else {
            (-self.beta * self.omega).exp()
        }
    }

    /// Atomic transition frequency implied by zero detuning.
    pub fn atom_frequency(&self) -> f64 {
        self.l as f64 * self.omega
    }
}

/// Bloch vector `(S_x, S_y, S_z)` with `rho = (I + S . sigma) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl BlochVector {
    pub const PLUS_X: BlochVector = BlochVector { sx: 1.0, sy: 0.0, sz: 0.0 };
    pub const MINUS_X: BlochVector = BlochVector { sx: -1.0, sy: 0.0, sz: 0.0 };

    pub const fn new(sx: f64, sy: f64, sz: f64) -> Self {
        BlochVector { sx, sy, sz }
    }

    pub fn norm(&self) -> f64 {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }

    pub fn max_abs_diff(&self, other: &BlochVector) -> f64 {
        (self.sx - other.sx)
            .abs()
            .max((self.sy - other.sy).abs())
            .max((self.sz - other.sz).abs())
    }
}

/// Truncation policy for the infinite thermal sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeriesConfig {
    pub tail_tolerance: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            tail_tolerance: 1e-12,
            max_terms: 10_000,
        }
    }
}

impl SeriesConfig {
    /// Highest photon number kept in the sums.
    ///
    /// The weight beyond `n_max` is `b^(n_max + 1)`, so
    /// `n_max = ceil(ln(1 / tol) / (beta * omega)) + 2` keeps it below `tol`.
    pub fn n_max(&self, params: &ModelParams) -> Result<usize> {
        if !(self.tail_tolerance > 0.0 && self.tail_tolerance < 1.0) {
            return Err(Error::invalid("tail_tolerance", "must lie in (0, 1)"));
        }
        if params.is_zero_temperature() {
            return Ok(0);
        }
        let beta_omega = params.beta * params.omega;
        let raw = ((1.0 / self.tail_tolerance).ln() / beta_omega).ceil();
        if !raw.is_finite() || raw + 2.0 > self.max_terms as f64 {
            return Err(Error::TruncationOverflow {
                needed: if raw.is_finite() { raw as usize + 2 } else { usize::MAX },
                cap: self.max_terms,
                beta_omega,
                tolerance: self.tail_tolerance,
            });
        }
        Ok(raw as usize + 2)
    }
}

/// One sample of a discrete trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryFrame {
    pub n: u64,
    pub t: f64,
    pub bloch: BlochVector,
}

/// `prod_{k=1..l} (n + k)`, exact in u128 while it fits.
pub(crate) fn rising_product(n: u64, l: u32) -> f64 {
    let mut acc: u128 = 1;
    for k in 1..=l as u64 {
        match acc.checked_mul(n as u128 + k as u128) {
            Some(v) => acc = v,
            None => return (1..=l as u64).map(|k| (n + k) as f64).product(),
        }
    }
    acc as f64
}

/// `prod_{k=1..l} (n - k + 1)` for `n >= l`, zero otherwise.
pub(crate) fn falling_product(n: u64, l: u32) -> f64 {
    if n < l as u64 {
        return 0.0;
    }
    rising_product(n - l as u64, l)
}

/// Integer `D_n` for `g = 1`, if it fits in u128.
pub fn eigen_d_integer(n: u64, l: u32) -> Option<u128> {
    (1..=l as u64).try_fold(1u128, |acc, k| acc.checked_mul(n as u128 + k as u128))
}

/// `D_n = g^2 prod_{k=1..l} (n + k)`, eigenvalue of `g^2 a^l (a^dag)^l` on `|n>`.
pub fn eigen_d(n: u64, params: &ModelParams) -> f64 {
    let g2 = params.g * params.g;
    g2 * rising_product(n, params.l)
}

/// `D'_n = g^2 prod_{k=1..l} (n - k + 1)` for `n >= l`, else 0.
pub fn eigen_d_prime(n: u64, params: &ModelParams) -> f64 {
    let g2 = params.g * params.g;
    g2 * falling_product(n, params.l)
}

/// The three nonvanishing elements of the reduced dynamical map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AElements {
    pub a0000: f64,
    pub a1100: f64,
    pub a0101: f64,
}

/// `L1 = A_{01,01}`, `L2 = A_{00,00} - A_{11,00}`, `L3 = A_{00,00} + A_{11,00} - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LCoefficients {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl From<AElements> for LCoefficients {
    fn from(a: AElements) -> Self {
        LCoefficients {
            l1: a.a0101,
            l2: a.a0000 - a.a1100,
            l3: a.a0000 + a.a1100 - 1.0,
        }
    }
}

impl LCoefficients {
    pub fn propagate(&self, s0: &BlochVector) -> BlochVector {
        BlochVector {
            sx: self.l1 * s0.sx,
            sy: self.l1 * s0.sy,
            sz: self.l2 * s0.sz + self.l3,
        }
    }
}

/// Truncated thermal series for a fixed `(params, cfg)`, reusable across times.
///
/// Building it validates the parameters and fixes `n_max`; evaluation at a
/// time `t` then costs `O(n_max)` trig calls.
#[derive(Debug, Clone)]
pub struct ThermalSeries {
    params: ModelParams,
    /// `(1 - b) b^n`
    weights: Vec<f64>,
    b: f64,
    b_pow_l: f64,
    sqrt_d: Vec<f64>,
    sqrt_d_prime: Vec<f64>,
    /// `g^2 prod(n + k) / D_n`; identically 1 but kept explicit off the g = 1 path.
    exchange_ratio: Vec<f64>,
}

impl ThermalSeries {
    pub fn new(params: &ModelParams, cfg: &SeriesConfig) -> Result<Self> {
        params.validate()?;
        let n_max = cfg.n_max(params)?;
        let b = params.boltzmann_factor();
        let g2 = params.g * params.g;
        let mut weights = Vec::with_capacity(n_max + 1);
        let mut sqrt_d = Vec::with_capacity(n_max + 1);
        let mut sqrt_d_prime = Vec::with_capacity(n_max + 1);
        let mut exchange_ratio = Vec::with_capacity(n_max + 1);
        let mut b_pow_n = 1.0;
        for n in 0..=n_max as u64 {
            weights.push((1.0 - b) * b_pow_n);
            b_pow_n *= b;
            let d = eigen_d(n, params);
            sqrt_d.push(d.sqrt());
            sqrt_d_prime.push(eigen_d_prime(n, params).sqrt());
            exchange_ratio.push(if g2 == 1.0 {
                1.0
            } else {
                g2 * rising_product(n, params.l) / d
            });
        }
        Ok(ThermalSeries {
            params: *params,
            weights,
            b,
            b_pow_l: b.powi(params.l as i32),
            sqrt_d,
            sqrt_d_prime,
            exchange_ratio,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn n_max(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn a_elements(&self, t: f64) -> AElements {
        let (mut a00, mut a11, mut a01) = (0.0, 0.0, 0.0);
        for n in 0..self.weights.len() {
            let w = self.weights[n];
            let (s, c) = (self.sqrt_d[n] * t).sin_cos();
            a00 += w * c * c;
            a11 += w * self.b_pow_l * s * s * self.exchange_ratio[n];
            let cp = match self.sqrt_d_prime[n] {
                0.0 => 1.0,
                f => (f * t).cos(),
            };
            a01 += w * c * cp;
        }
        AElements {
            a0000: a00,
            a1100: a11,
            a0101: a01,
        }
    }

    pub fn l_coefficients(&self, t: f64) -> LCoefficients {
        self.a_elements(t).into()
    }

    /// `L1` alone (one cosine pair per term).
    pub fn l1(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for n in 0..self.weights.len() {
            let cp = match self.sqrt_d_prime[n] {
                0.0 => 1.0,
                f => (f * t).cos(),
            };
            acc += self.weights[n] * (self.sqrt_d[n] * t).cos() * cp;
        }
        acc
    }

    /// `L3` through the double-angle form
    /// `-(1 - b^l)/2 * [1 - sum (1 - b) b^n cos(2 sqrt(D_n) t)]`.
    ///
    /// Valid for any `g`, `omega`; one cosine per term.
    pub fn l3_double_angle(&self, t: f64) -> f64 {
        let mut f = 0.0;
        for n in 0..self.weights.len() {
            f += self.weights[n] * (2.0 * self.sqrt_d[n] * t).cos();
        }
        -0.5 * (1.0 - self.b_pow_l) * (1.0 - f)
    }

    pub fn bloch(&self, s0: &BlochVector, t: f64) -> BlochVector {
        self.l_coefficients(t).propagate(s0)
    }

    /// Trajectory from `S(0) = (1, 0, 0)`: `(L1, 0, L3)`.
    pub fn bloch_from_plus_x(&self, t: f64) -> BlochVector {
        let a = self.a_elements(t);
        BlochVector {
            sx: a.a0101,
            sy: 0.0,
            sz: a.a0000 + a.a1100 - 1.0,
        }
    }

    pub fn boltzmann_factor(&self) -> f64 {
        self.b
    }
}

pub fn a_elements(t: f64, params: &ModelParams, cfg: &SeriesConfig) -> Result<AElements> {
    check_time(t)?;
    Ok(ThermalSeries::new(params, cfg)?.a_elements(t))
}

pub fn l_coefficients(t: f64, params: &ModelParams, cfg: &SeriesConfig) -> Result<LCoefficients> {
    check_time(t)?;
    Ok(ThermalSeries::new(params, cfg)?.l_coefficients(t))
}

/// `L3` in its single-cosine form. Only defined under `g = omega = 1`.
pub fn l3_cosine_form(t: f64, params: &ModelParams, cfg: &SeriesConfig) -> Result<f64> {
    if !params.is_normalized() {
        return Err(Error::Normalization {
            g: params.g,
            omega: params.omega,
        });
    }
    check_time(t)?;
    Ok(ThermalSeries::new(params, cfg)?.l3_double_angle(t))
}

pub fn bloch_propagate(
    s0: &BlochVector,
    t: f64,
    params: &ModelParams,
    cfg: &SeriesConfig,
) -> Result<BlochVector> {
    check_initial_state(s0)?;
    check_time(t)?;
    Ok(ThermalSeries::new(params, cfg)?.bloch(s0, t))
}

pub(crate) fn check_initial_state(s0: &BlochVector) -> Result<()> {
    if !(s0.norm() <= 1.0 + 1e-12) {
        return Err(Error::invalid(
            "s0",
            format!("initial Bloch vector must satisfy |s0| <= 1, got {}", s0.norm()),
        ));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::invalid("t", "time must be finite"));
    }
    Ok(())
}
