use num_complex::Complex64;

use crate::error::{Error, Result};

/// A complex amplitude.
pub type Amplitude = Complex64;

/// Normalized pure state over a finite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, normalizing them.
    pub fn new(amps: Vec<Amplitude>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Malformed("state vector must have dim >= 1".into()));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Malformed("state vector has non-finite amplitude".into()));
        }
        let norm = norm(&amps);
        if norm < 1e-300 {
            return Err(Error::Malformed("state vector has zero norm".into()));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { amps })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Amplitude::new(x, 0.0)).collect())
    }

    /// Computational basis state `|k>`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::Malformed(format!("basis index {k} out of range for dim {dim}")));
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); dim];
        amps[k] = Amplitude::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Amplitude> {
        check_dim(self.dim(), other.dim())?;
        Ok(inner_raw(&self.amps, &other.amps))
    }

    /// Kronecker product; `self` is the most significant factor.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector { amps }
    }

    /// Multiplies every amplitude by `e^{i phase}`.
    pub fn with_phase(&self, phase: f64) -> StateVector {
        let w = Amplitude::from_polar(1.0, phase);
        StateVector {
            amps: self.amps.iter().map(|a| a * w).collect(),
        }
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

pub(crate) fn inner_raw(a: &[Amplitude], b: &[Amplitude]) -> Amplitude {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(v: &[Amplitude]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
