//! Brute-force reference: evolve the joint atom-field density matrix in a
//! truncated Fock space and trace out the field.
//!
//! Shares nothing with the closed-form series except the model parameters:
//! the coupling operator is assembled from ladder-operator matrix elements,
//! diagonalized numerically, and the Bloch vector is read off the reduced
//! atomic state.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{AElements, BlochVector, ModelParams};

/// Photon numbers `0..=n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockTruncation {
    pub n_max: usize,
    /// Largest thermal weight allowed in the states the truncation distorts.
    pub tolerance: f64,
}

impl FockTruncation {
    /// Smallest cutoff whose distorted states carry thermal weight below
    /// `tolerance`, and at least `l + 2`.
    pub fn for_params(params: &ModelParams, tolerance: f64) -> Result<Self> {
        params.validate()?;
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(Error::invalid("tolerance", format!("must lie in (0, 1), got {tolerance}")));
        }
        let l = params.l as usize;
        let mut n_max = l + 2;
        if !params.is_zero_temperature() {
            let bw = params.beta * params.omega;
            let need = (tolerance.recip().ln() / bw).ceil() as usize + l;
            n_max = n_max.max(need);
        }
        let trunc = FockTruncation { n_max, tolerance };
        trunc.check(params)?;
        Ok(trunc)
    }

    /// Field states `|n>` with `n > n_max - l` lose their partner
    /// `|1, n + l>`; their total thermal weight must stay below tolerance.
    pub fn check(&self, params: &ModelParams) -> Result<()> {
        let l = params.l as usize;
        if self.n_max < l + 2 {
            return Err(Error::invalid("n_max", format!("must be >= l + 2 = {}", l + 2)));
        }
        let weight = if params.is_zero_temperature() {
            0.0
        } else {
            params.boltzmann_factor().powi((self.n_max - l + 1) as i32)
        };
        if weight > self.tolerance {
            return Err(Error::TruncationTooSmall {
                n_max: self.n_max,
                weight,
                tolerance: self.tolerance,
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }
}

/// Layout of the tensor-product basis `|a> (x) |n>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisOrdering {
    /// `index = a * (n_max + 1) + n`.
    #[default]
    AtomMajor,
    /// `index = 2 n + a`.
    PhotonMajor,
}

impl BasisOrdering {
    pub fn index(self, atom: usize, n: usize, n_max: usize) -> usize {
        match self {
            BasisOrdering::AtomMajor => atom * (n_max + 1) + n,
            BasisOrdering::PhotonMajor => 2 * n + atom,
        }
    }
}

/// The interaction `g (a^l sigma_+ + a^{dag l} sigma_-)`: couples `|1, m>` to
/// `|0, m - l>` with amplitude `g sqrt(m (m - 1) ... (m - l + 1))`.
pub fn build_c2(params: &ModelParams, trunc: &FockTruncation, ordering: BasisOrdering) -> DMatrix<f64> {
    let dim = trunc.dim();
    let l = params.l as usize;
    let mut c = DMatrix::zeros(dim, dim);
    for m in l..=trunc.n_max {
        let amp: f64 = (0..l).map(|k| ((m - k) as f64).sqrt()).product::<f64>() * params.g;
        let i = ordering.index(1, m, trunc.n_max);
        let j = ordering.index(0, m - l, trunc.n_max);
        c[(i, j)] = amp;
        c[(j, i)] = amp;
    }
    c
}

/// Largest deviation of `C2^2` from `diag(D_n on |0, n>, D_{n-l} on |1, n>)`
/// over the states the truncation leaves intact.
pub fn c2_squared_defect(params: &ModelParams, trunc: &FockTruncation, ordering: BasisOrdering) -> f64 {
    let c = build_c2(params, trunc, ordering);
    let sq = &c * &c;
    let l = params.l as usize;
    let g2 = params.g * params.g;
    let d = |n: usize| g2 * (1..=l).map(|k| (n + k) as f64).product::<f64>();
    let mut worst: f64 = 0.0;
    for atom in 0..2 {
        for n in 0..=trunc.n_max {
            if atom == 0 && n + l > trunc.n_max {
                continue;
            }
            let i = ordering.index(atom, n, trunc.n_max);
            let expect_diag = match (atom, n >= l) {
                (0, _) => d(n),
                (_, true) => d(n - l),
                _ => 0.0,
            };
            for j in 0..trunc.dim() {
                let expect = if i == j { expect_diag } else { 0.0 };
                worst = worst.max((sq[(i, j)] - expect).abs());
            }
        }
    }
    worst
}

/// A joint density matrix in a given basis layout.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub rho: DMatrix<Complex64>,
    pub n_max: usize,
    pub ordering: BasisOrdering,
}

impl JointState {
    /// `rho_A (x) rho_thermal`, with the thermal weights renormalized over
    /// the truncated space.
    pub fn product_thermal(
        s0: &BlochVector,
        params: &ModelParams,
        trunc: &FockTruncation,
        ordering: BasisOrdering,
    ) -> Result<Self> {
        if !(s0.norm() <= 1.0 + 1e-12) || !s0.sx.is_finite() || !s0.sy.is_finite() || !s0.sz.is_finite() {
            return Err(Error::invalid("s0", format!("Bloch vector must be finite with |S| <= 1, got {s0:?}")));
        }
        let rho_a = [
            [Complex64::new(0.5 * (1.0 + s0.sz), 0.0), Complex64::new(0.5 * s0.sx, -0.5 * s0.sy)],
            [Complex64::new(0.5 * s0.sx, 0.5 * s0.sy), Complex64::new(0.5 * (1.0 - s0.sz), 0.0)],
        ];
        let mut p: Vec<f64> = if params.is_zero_temperature() {
            (0..=trunc.n_max).map(|n| if n == 0 { 1.0 } else { 0.0 }).collect()
        } else {
            let b = params.boltzmann_factor();
            (0..=trunc.n_max).map(|n| b.powi(n as i32)).collect()
        };
        let z: f64 = p.iter().sum();
        p.iter_mut().for_each(|w| *w /= z);
        let dim = trunc.dim();
        let mut rho = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for (n, &w) in p.iter().enumerate() {
            for (a, row) in rho_a.iter().enumerate() {
                for (a2, &v) in row.iter().enumerate() {
                    let i = ordering.index(a, n, trunc.n_max);
                    let j = ordering.index(a2, n, trunc.n_max);
                    rho[(i, j)] = v * w;
                }
            }
        }
        Ok(JointState {
            rho,
            n_max: trunc.n_max,
            ordering,
        })
    }

    /// Trace 1 and Hermitian to within `tol`.
    pub fn check(&self, tol: f64) -> Result<()> {
        let dim = 2 * (self.n_max + 1);
        if self.rho.nrows() != dim || self.rho.ncols() != dim {
            return Err(Error::invalid("rho", format!("expected {dim}x{dim} matrix")));
        }
        let tr = self.rho.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::invalid("rho", format!("trace is {tr}, expected 1")));
        }
        let herm = (&self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > tol {
            return Err(Error::invalid("rho", format!("not Hermitian (defect {herm:e})")));
        }
        Ok(())
    }

    /// Reduced atomic state as a Bloch vector.
    pub fn atom_bloch(&self) -> BlochVector {
        let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
        for n in 0..=self.n_max {
            for (a, row) in r.iter_mut().enumerate() {
                for (a2, cell) in row.iter_mut().enumerate() {
                    let i = self.ordering.index(a, n, self.n_max);
                    let j = self.ordering.index(a2, n, self.n_max);
                    *cell += self.rho[(i, j)];
                }
            }
        }
        BlochVector {
            sx: 2.0 * r[0][1].re,
            sy: -2.0 * r[0][1].im,
            sz: (r[0][0] - r[1][1]).re,
        }
    }
}

/// Precomputed eigendecomposition of `C2` for repeated evolution.
pub struct Evolver {
    vectors: DMatrix<Complex64>,
    values: Vec<f64>,
    trunc: FockTruncation,
    ordering: BasisOrdering,
}

impl Evolver {
    pub fn new(params: &ModelParams, trunc: &FockTruncation, ordering: BasisOrdering) -> Result<Self> {
        params.validate()?;
        trunc.check(params)?;
        let eig = SymmetricEigen::new(build_c2(params, trunc, ordering));
        Ok(Evolver {
            vectors: eig.eigenvectors.map(|x| Complex64::new(x, 0.0)),
            values: eig.eigenvalues.iter().copied().collect(),
            trunc: *trunc,
            ordering,
        })
    }

    /// `exp(-i C2 t)`.
    pub fn propagator(&self, t: f64) -> DMatrix<Complex64> {
        let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&lam| Complex64::from_polar(1.0, -lam * t)),
        ));
        &self.vectors * phases * self.vectors.transpose()
    }

    pub fn evolve(&self, state: &JointState, t: f64) -> Result<JointState> {
        if state.n_max != self.trunc.n_max || state.ordering != self.ordering {
            return Err(Error::invalid("state", "basis does not match the evolver"));
        }
        let u = self.propagator(t);
        Ok(JointState {
            rho: &u * &state.rho * u.adjoint(),
            n_max: state.n_max,
            ordering: state.ordering,
        })
    }

    pub fn bloch(&self, state: &JointState, t: f64) -> Result<BlochVector> {
        Ok(self.evolve(state, t)?.atom_bloch())
    }
}

/// Reduced Bloch vector at time `t` for `rho_A(s0) (x) thermal field`.
pub fn evolve_and_trace(
    s0: &BlochVector,
    params: &ModelParams,
    t: f64,
    trunc: &FockTruncation,
    ordering: BasisOrdering,
) -> Result<BlochVector> {
    let ev = Evolver::new(params, trunc, ordering)?;
    let state = JointState::product_thermal(s0, params, trunc, ordering)?;
    ev.bloch(&state, t)
}

/// Matrix elements read off the oracle:
/// `A0000 = P(0 -> 0)`, `A1100 = P(1 -> 0)`, `A0101 = S_x` from `+x`.
pub fn oracle_a_elements(params: &ModelParams, t: f64, trunc: &FockTruncation) -> Result<AElements> {
    let ordering = BasisOrdering::AtomMajor;
    let ev = Evolver::new(params, trunc, ordering)?;
    let run = |s0: BlochVector| -> Result<BlochVector> {
        ev.bloch(&JointState::product_thermal(&s0, params, trunc, ordering)?, t)
    };
    let ground = run(BlochVector { sx: 0.0, sy: 0.0, sz: 1.0 })?;
    let excited = run(BlochVector { sx: 0.0, sy: 0.0, sz: -1.0 })?;
    let plus = run(BlochVector::PLUS_X)?;
    Ok(AElements {
        a0000: 0.5 * (1.0 + ground.sz),
        a1100: 0.5 * (1.0 + excited.sz),
        a0101: plus.sx,
    })
}
