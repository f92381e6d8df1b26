#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use tsvf_lab::qcore::{Amplitude, HermitianOperator, StateVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Amplitude {
    Amplitude::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_vector(rng: &mut impl Rng, dim: usize) -> Vec<Amplitude> {
    (0..dim).map(|_| gaussian(rng)).collect()
}

pub fn random_state(rng: &mut impl Rng, dim: usize) -> StateVector {
    StateVector::new(random_vector(rng, dim)).unwrap()
}

/// `(M + M^dagger)/2` for a complex Gaussian `M`.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> HermitianOperator {
    let m = random_vector(rng, dim * dim);
    let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            entries[i * dim + j] = (m[i * dim + j] + m[j * dim + i].conj()) * 0.5;
        }
    }
    HermitianOperator::new(dim, entries).unwrap()
}

/// Columns of a Haar-ish random unitary, by Gram-Schmidt.
pub fn random_basis(rng: &mut impl Rng, dim: usize) -> Vec<Vec<Amplitude>> {
    let mut basis: Vec<Vec<Amplitude>> = Vec::new();
    while basis.len() < dim {
        let mut v = random_vector(rng, dim);
        for _ in 0..2 {
            for b in &basis {
                let c: Amplitude = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            basis.push(v.into_iter().map(|a| a / n).collect());
        }
    }
    basis
}

/// `sum_k values[k] |b_k><b_k|` over a random orthonormal basis.
pub fn hermitian_with_spectrum(rng: &mut impl Rng, values: &[f64]) -> HermitianOperator {
    let basis = random_basis(rng, values.len());
    hermitian_from_basis(&basis, values)
}

pub fn hermitian_from_basis(basis: &[Vec<Amplitude>], values: &[f64]) -> HermitianOperator {
    let dim = values.len();
    let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
    for (v, b) in values.iter().zip(basis) {
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] += b[i] * b[j].conj() * *v;
            }
        }
    }
    for i in 0..dim {
        for j in i..dim {
            let avg = (entries[i * dim + j] + entries[j * dim + i].conj()) * 0.5;
            entries[i * dim + j] = avg;
            entries[j * dim + i] = avg.conj();
        }
    }
    HermitianOperator::new(dim, entries).unwrap()
}

/// Random observable with well separated eigenvalues (gaps in [0.25, 1]).
pub fn separated_observable(rng: &mut impl Rng, dim: usize) -> HermitianOperator {
    let mut values = Vec::with_capacity(dim);
    let mut x: f64 = rng.random_range(-1.0..0.0);
    for _ in 0..dim {
        values.push(x);
        x += rng.random_range(0.25..1.0);
    }
    hermitian_with_spectrum(rng, &values)
}

/// Observable with a repeated eigenvalue when `dim >= 3`.
pub fn degenerate_observable(rng: &mut impl Rng, dim: usize) -> HermitianOperator {
    let mut values: Vec<f64> = (0..dim).map(|k| k as f64).collect();
    if dim >= 3 {
        values[1] = values[0];
    }
    hermitian_with_spectrum(rng, &values)
}

pub fn dense_diff(a: &[Amplitude], b: &[Amplitude]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
