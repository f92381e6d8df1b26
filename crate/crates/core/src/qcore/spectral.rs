use super::operator::{HermitianOperator, Projector};
use super::state::Amplitude;
use crate::error::{Error, Result};

/// Eigenvalues closer than this are merged into one eigenspace.
pub const DEFAULT_MERGE_TOL: f64 = 1e-8;

pub const MAX_DIM: usize = 64;
const MAX_SWEEPS: usize = 100;

/// Eigenvalue/eigenprojector pairs of a Hermitian operator, eigenvalues
/// strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pairs: Vec<(f64, Projector)>,
}

impl SpectralDecomposition {
    pub fn pairs(&self) -> &[(f64, Projector)] {
        &self.pairs
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        self.pairs.iter().map(|(v, _)| *v)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// True when every eigenspace is one-dimensional.
    pub fn is_nondegenerate(&self) -> bool {
        self.pairs.iter().all(|(_, p)| p.rank() == 1)
    }

    /// Index of the eigenvalue within `tol` of `value`.
    pub fn find(&self, value: f64, tol: f64) -> Option<usize> {
        self.pairs.iter().position(|(v, _)| (v - value).abs() <= tol)
    }

    /// `sum_k lambda_k P_k`.
    pub fn reconstruct(&self) -> HermitianOperator {
        let dim = self.pairs[0].1.dim();
        let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
        for (value, proj) in &self.pairs {
            for (e, p) in entries.iter_mut().zip(proj.entries()) {
                *e += p * *value;
            }
        }
        HermitianOperator::from_entries_unchecked(dim, entries)
    }
}

impl HermitianOperator {
    /// Spectral decomposition with the default merge tolerance.
    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        spectral(self, DEFAULT_MERGE_TOL)
    }
}

/// Decomposes `op` by cyclic complex Jacobi rotations. Eigenvalues within
/// `tol` of their neighbour are merged into a single eigenspace.
pub fn spectral(op: &HermitianOperator, tol: f64) -> Result<SpectralDecomposition> {
    let n = op.dim();
    if n > MAX_DIM {
        return Err(Error::Malformed(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    let (values, vectors) = jacobi(op)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        match clusters.last_mut() {
            Some(cluster) if values[idx] - values[*cluster.last().unwrap()] <= tol => cluster.push(idx),
            _ => clusters.push(vec![idx]),
        }
    }

    let pairs = clusters
        .into_iter()
        .map(|cluster| {
            let value = cluster.iter().map(|&k| values[k]).sum::<f64>() / cluster.len() as f64;
            let mut entries = vec![Amplitude::new(0.0, 0.0); n * n];
            for &k in &cluster {
                for i in 0..n {
                    let vi = vectors[i * n + k];
                    for j in 0..n {
                        entries[i * n + j] += vi * vectors[j * n + k].conj();
                    }
                }
            }
            // exact Hermitian symmetry
            for i in 0..n {
                entries[i * n + i].im = 0.0;
                for j in i + 1..n {
                    entries[j * n + i] = entries[i * n + j].conj();
                }
            }
            let proj = HermitianOperator::from_entries_unchecked(n, entries);
            (value, Projector::from_operator_unchecked(proj))
        })
        .collect();
    Ok(SpectralDecomposition { pairs })
}

/// Returns eigenvalues and the row-major unitary whose columns are the
/// eigenvectors.
fn jacobi(op: &HermitianOperator) -> Result<(Vec<f64>, Vec<Amplitude>)> {
    let n = op.dim();
    let mut a = op.entries().to_vec();
    let mut v = HermitianOperator::identity(n).entries().to_vec();

    let scale = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let threshold = f64::EPSILON * scale.max(f64::MIN_POSITIVE);

    let off = |a: &[Amplitude]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NotConverged {
                sweeps,
                residual: off(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag; // e^{i phi}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let pc = phase.conj(); // e^{-i phi}

                // A <- A U on columns p, q
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * pc * s;
                    a[k * n + q] = akp * s + akq * pc * c;
                }
                // A <- U^dagger A on rows p, q
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * phase * s;
                    a[q * n + k] = apk * s + aqk * phase * c;
                }
                a[p * n + q] = Amplitude::new(0.0, 0.0);
                a[q * n + p] = Amplitude::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                // V <- V U
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * pc * s;
                    v[k * n + q] = vkp * s + vkq * pc * c;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i].re).collect();
    Ok((values, v))
}
