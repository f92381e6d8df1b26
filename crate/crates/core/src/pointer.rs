//! Von Neumann measurement with a Gaussian pointer.
//!
//! The interaction is impulsive, so each eigenspace `P_k` of the measured
//! observable shifts the initial pointer amplitude `G` by `g * lambda_k`.
//! After post-selection the pointer amplitude is
//!
//! ```text
//! Phi(x) = sum_k <post|P_k|pre> G(x - g lambda_k)
//! ```
//!
//! with `|G|^2` a normal density of standard deviation `width`. Strong coupling
//! (`width << g * gap`) separates the peaks and reproduces ABL probabilities;
//! weak coupling (`width >> g`) merges them into one peak centered at
//! `g * Re(A_w)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qcore::{check_dim, Amplitude, HermitianOperator};
use crate::tsvf::{selection_amplitudes, TwoStateVector, VANISHING_POSTSELECTION};

pub const DEFAULT_GRID_POINTS: usize = 4096;
pub const MIN_GRID_POINTS: usize = 64;

/// Half-width, in units of the pointer spread, that the grid must cover
/// around every shifted peak.
const REQUIRED_SPAN: f64 = 6.0;
const AUTO_SPAN: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
            return Err(Error::Malformed(format!("grid bounds [{x_min}, {x_max}] are invalid")));
        }
        if n_points < MIN_GRID_POINTS {
            return Err(Error::Malformed(format!(
                "grid needs at least {MIN_GRID_POINTS} points, got {n_points}"
            )));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    /// `[min(g lambda) - 8 w, max(g lambda) + 8 w]` with `w = max(width, 0.1 g)`.
    pub fn auto(eigenvalues: &[f64], cfg: &PointerConfig, n_points: usize) -> Result<Self> {
        let shifts = eigenvalues.iter().map(|v| cfg.coupling * v);
        let lo = shifts.clone().fold(f64::INFINITY, f64::min);
        let hi = shifts.fold(f64::NEG_INFINITY, f64::max);
        let pad = AUTO_SPAN * cfg.width.max(0.1 * cfg.coupling.abs());
        Self::new(lo - pad, hi + pad, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + self.step() * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.point(i))
    }
}

/// Initial pointer spread and coupling strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerConfig {
    pub width: f64,
    pub coupling: f64,
}

impl PointerConfig {
    pub fn new(width: f64, coupling: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::Malformed(format!("pointer width must be positive, got {width}")));
        }
        if !coupling.is_finite() || coupling == 0.0 {
            return Err(Error::Malformed(format!("coupling must be non-zero, got {coupling}")));
        }
        Ok(Self { width, coupling })
    }
}

/// Post-selected pointer density sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerDensity {
    pub grid: GridSpec,
    pub density: Vec<f64>,
    /// `integral |Phi|^2 dx`, the probability that post-selection succeeds.
    pub post_selection_probability: f64,
}

impl PointerDensity {
    pub fn integral(&self) -> f64 {
        trapezoid(self.grid.step(), &self.density)
    }

    /// Mass on grid points within `[a, b]`.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        let h = self.grid.step();
        let mut total = 0.0;
        for i in 0..self.grid.n_points - 1 {
            let (x0, x1) = (self.grid.point(i), self.grid.point(i + 1));
            if x0 >= a && x1 <= b {
                total += 0.5 * h * (self.density[i] + self.density[i + 1]);
            }
        }
        total
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().zip(self.density.iter().copied())
    }
}

fn trapezoid(h: f64, values: &[f64]) -> f64 {
    let n = values.len();
    let mut sum = 0.0;
    for (i, v) in values.iter().enumerate() {
        sum += if i == 0 || i + 1 == n { 0.5 * v } else { *v };
    }
    sum * h
}

/// Pointer density after measuring `observable` with the given coupling and
/// post-selecting on `tsv.post()`.
pub fn pointer_distribution(
    tsv: &TwoStateVector,
    observable: &HermitianOperator,
    cfg: &PointerConfig,
    grid: &GridSpec,
) -> Result<PointerDensity> {
    check_dim(tsv.dim(), observable.dim())?;
    let dec = observable.spectral()?;
    let shifts: Vec<f64> = dec.eigenvalues().map(|v| cfg.coupling * v).collect();
    let amps = selection_amplitudes(tsv, &dec);

    let needed_min = shifts.iter().copied().fold(f64::INFINITY, f64::min) - REQUIRED_SPAN * cfg.width;
    let needed_max = shifts.iter().copied().fold(f64::NEG_INFINITY, f64::max) + REQUIRED_SPAN * cfg.width;
    if needed_min < grid.x_min || needed_max > grid.x_max {
        return Err(Error::GridTooNarrow {
            x_min: grid.x_min,
            x_max: grid.x_max,
            needed_min,
            needed_max,
        });
    }

    let norm = (2.0 * PI * cfg.width * cfg.width).powf(-0.25);
    let inv = 1.0 / (4.0 * cfg.width * cfg.width);
    let raw: Vec<f64> = grid
        .points()
        .map(|x| {
            let phi: Amplitude = amps
                .iter()
                .zip(&shifts)
                .map(|(a, s)| a * (norm * (-(x - s) * (x - s) * inv).exp()))
                .sum();
            phi.norm_sqr()
        })
        .collect();

    let probability = trapezoid(grid.step(), &raw);
    if probability < VANISHING_POSTSELECTION {
        return Err(Error::VanishingPostSelection { probability });
    }
    Ok(PointerDensity {
        grid: *grid,
        density: raw.into_iter().map(|d| d / probability).collect(),
        post_selection_probability: probability,
    })
}

/// Mean pointer position.
pub fn distribution_center(d: &PointerDensity) -> f64 {
    let moments: Vec<f64> = d.rows().map(|(x, p)| x * p).collect();
    let mean = trapezoid(d.grid.step(), &moments);
    mean.clamp(d.grid.x_min, d.grid.x_max)
}

/// One row of a [`coupling_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub width: f64,
    pub center: f64,
    pub post_selection_probability: f64,
}

/// Grid used for each width of a [`coupling_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepGrid {
    Fixed(GridSpec),
    /// [`GridSpec::auto`] per width with this many points.
    Auto(usize),
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid::Auto(DEFAULT_GRID_POINTS)
    }
}

/// Evaluates the pointer for each width at fixed coupling. Widths are
/// evaluated independently and in order.
pub fn coupling_sweep(
    tsv: &TwoStateVector,
    observable: &HermitianOperator,
    coupling: f64,
    widths: &[f64],
    grid: SweepGrid,
) -> Result<Vec<SweepPoint>> {
    let eigenvalues: Vec<f64> = observable.spectral()?.eigenvalues().collect();
    widths
        .iter()
        .map(|&width| {
            let cfg = PointerConfig::new(width, coupling)?;
            let grid = match grid {
                SweepGrid::Fixed(g) => g,
                SweepGrid::Auto(n) => GridSpec::auto(&eigenvalues, &cfg, n)?,
            };
            let d = pointer_distribution(tsv, observable, &cfg, &grid)?;
            Ok(SweepPoint {
                width,
                center: distribution_center(&d),
                post_selection_probability: d.post_selection_probability,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{spin, StateVector};
    use crate::tsvf::abl;

    fn generic_qubit() -> TwoStateVector {
        TwoStateVector::new(
            StateVector::from_real(&[0.8, 0.6]).unwrap(),
            StateVector::new(vec![Amplitude::new(0.6, 0.1), Amplitude::new(0.3, -0.7)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn config_and_grid_validation() {
        assert!(PointerConfig::new(0.0, 1.0).is_err());
        assert!(PointerConfig::new(1.0, 0.0).is_err());
        assert!(GridSpec::new(1.0, 1.0, 100).is_err());
        assert!(GridSpec::new(0.0, 1.0, 63).is_err());
        assert!(GridSpec::new(0.0, 1.0, 64).is_ok());
    }

    #[test]
    fn strong_regime_peaks_follow_abl() {
        let tsv = generic_qubit();
        let cfg = PointerConfig::new(0.01, 1.0).unwrap();
        let grid = GridSpec::auto(&[-0.5, 0.5], &cfg, DEFAULT_GRID_POINTS).unwrap();
        let d = pointer_distribution(&tsv, &spin::s_z(), &cfg, &grid).unwrap();
        let dist = abl(&tsv, &spin::s_z()).unwrap();
        assert!((d.mass_between(f64::NEG_INFINITY, 0.0) - dist.probability(-0.5)).abs() < 1e-6);
        assert!((d.mass_between(0.0, f64::INFINITY) - dist.probability(0.5)).abs() < 1e-6);
        assert!((d.integral() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn identity_observable_is_a_single_shifted_gaussian() {
        let tsv = generic_qubit();
        let cfg = PointerConfig::new(0.3, 1.0).unwrap();
        let grid = GridSpec::auto(&[1.0], &cfg, DEFAULT_GRID_POINTS).unwrap();
        let d = pointer_distribution(&tsv, &HermitianOperator::identity(2), &cfg, &grid).unwrap();
        assert!((distribution_center(&d) - 1.0).abs() < 1e-9);
        assert!((d.post_selection_probability - tsv.overlap().norm_sqr()).abs() < 1e-9);
    }

    #[test]
    fn symmetric_density_centers_at_zero() {
        // pre = post = |+x>, s_z outcomes equally likely and symmetric
        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let tsv = TwoStateVector::new(plus.clone(), plus).unwrap();
        let cfg = PointerConfig::new(0.05, 1.0).unwrap();
        let grid = GridSpec::new(-2.0, 2.0, 4001).unwrap();
        let d = pointer_distribution(&tsv, &spin::s_z(), &cfg, &grid).unwrap();
        assert!(distribution_center(&d).abs() < 1e-12);
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let cfg = PointerConfig::new(1.0, 1.0).unwrap();
        let grid = GridSpec::new(-3.0, 3.0, 1024).unwrap();
        assert!(matches!(
            pointer_distribution(&generic_qubit(), &spin::s_z(), &cfg, &grid),
            Err(Error::GridTooNarrow { .. })
        ));
    }

    #[test]
    fn orthogonal_selections_with_identity_vanish() {
        let tsv = TwoStateVector::new(StateVector::basis(2, 0).unwrap(), StateVector::basis(2, 1).unwrap()).unwrap();
        let cfg = PointerConfig::new(1.0, 1.0).unwrap();
        let grid = GridSpec::auto(&[1.0], &cfg, 512).unwrap();
        assert!(matches!(
            pointer_distribution(&tsv, &HermitianOperator::identity(2), &cfg, &grid),
            Err(Error::VanishingPostSelection { .. })
        ));
    }

    #[test]
    fn single_width_sweep_matches_direct_call() {
        let tsv = generic_qubit();
        let sweep = coupling_sweep(&tsv, &spin::s_x(), 1.0, &[0.7], SweepGrid::default()).unwrap();
        assert_eq!(sweep.len(), 1);
        let cfg = PointerConfig::new(0.7, 1.0).unwrap();
        let eigenvalues: Vec<f64> = spin::s_x().spectral().unwrap().eigenvalues().collect();
        let grid = GridSpec::auto(&eigenvalues, &cfg, DEFAULT_GRID_POINTS).unwrap();
        let d = pointer_distribution(&tsv, &spin::s_x(), &cfg, &grid).unwrap();
        assert_eq!(sweep[0].center, distribution_center(&d));
        assert_eq!(sweep[0].post_selection_probability, d.post_selection_probability);
    }
}
