//! Pre- and post-selected ensembles.
//!
//! For a measurement of `C` between complete measurements that fixed `|pre>`
//! and `<post|`, outcome `c_j` with eigenprojector `P_j` occurs with
//! probability
//!
//! ```text
//! p_j = |<post|P_j|pre>|^2 / sum_k |<post|P_k|pre>|^2
//! ```
//!
//! and the weak value of `A` is `<post|A|pre> / <post|pre>`. Both are computed
//! here over merged eigenspaces, so degenerate observables such as the box
//! projectors are handled correctly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qcore::{
    check_dim, inner_raw, norm, Amplitude, HermitianOperator, Projector, SpectralDecomposition, StateVector,
};

/// Certainty tolerance for [`element_of_reality`].
pub const DEFAULT_CERTAINTY_TOL: f64 = 1e-10;

/// Below this the post-selection is treated as impossible.
pub const VANISHING_POSTSELECTION: f64 = 1e-20;

/// Below this `|<post|pre>|` the weak value is undefined.
pub const ORTHOGONAL_OVERLAP: f64 = 1e-20;

/// The pair of states fixed by complete measurements before and after the
/// time of interest.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStateVector {
    pre: StateVector,
    post: StateVector,
}

impl TwoStateVector {
    pub fn new(pre: StateVector, post: StateVector) -> Result<Self> {
        check_dim(pre.dim(), post.dim())?;
        Ok(Self { pre, post })
    }

    pub fn pre(&self) -> &StateVector {
        &self.pre
    }

    pub fn post(&self) -> &StateVector {
        &self.post
    }

    pub fn dim(&self) -> usize {
        self.pre.dim()
    }

    /// `<post|pre>`.
    pub fn overlap(&self) -> Amplitude {
        inner_raw(self.post.amplitudes(), self.pre.amplitudes())
    }

    /// The same ensemble described backwards in time.
    pub fn reversed(&self) -> Self {
        Self {
            pre: self.post.clone(),
            post: self.pre.clone(),
        }
    }
}

/// Outcome values with their probabilities, ordered by eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    pairs: Vec<(f64, f64)>,
}

impl OutcomeDistribution {
    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Probability of the outcome within `1e-8` of `value`; zero when `value`
    /// is not an outcome.
    pub fn probability(&self, value: f64) -> f64 {
        self.pairs
            .iter()
            .find(|(v, _)| (v - value).abs() <= 1e-8)
            .map_or(0.0, |(_, p)| *p)
    }

    pub fn total(&self) -> f64 {
        self.pairs.iter().map(|(_, p)| p).sum()
    }
}

/// `<post|P_k|pre>` for every eigenspace of `dec`.
pub fn selection_amplitudes(tsv: &TwoStateVector, dec: &SpectralDecomposition) -> Vec<Amplitude> {
    dec.pairs()
        .iter()
        .map(|(_, p)| inner_raw(tsv.post.amplitudes(), &p.apply_raw(tsv.pre.amplitudes())))
        .collect()
}

/// ABL probabilities for a measurement of `observable` performed between the
/// pre- and post-selection.
pub fn abl(tsv: &TwoStateVector, observable: &HermitianOperator) -> Result<OutcomeDistribution> {
    check_dim(tsv.dim(), observable.dim())?;
    abl_spectral(tsv, &observable.spectral()?)
}

/// [`abl`] over an already computed decomposition.
pub fn abl_spectral(tsv: &TwoStateVector, dec: &SpectralDecomposition) -> Result<OutcomeDistribution> {
    if let Some((_, p)) = dec.pairs().first() {
        check_dim(tsv.dim(), p.dim())?;
    }
    let weights: Vec<f64> = selection_amplitudes(tsv, dec).iter().map(|a| a.norm_sqr()).collect();
    let total: f64 = weights.iter().sum();
    if total < VANISHING_POSTSELECTION {
        return Err(Error::VanishingPostSelection { probability: total });
    }
    Ok(OutcomeDistribution {
        pairs: dec.eigenvalues().zip(weights.iter().map(|w| w / total)).collect(),
    })
}

/// The eigenvalue a measurement of `observable` is certain to yield, if any.
///
/// Certain means the ABL probability is at least `1 - tol`. This is an
/// operational statement about the ensemble, not a claim that the observable
/// possesses a value.
pub fn element_of_reality(tsv: &TwoStateVector, observable: &HermitianOperator, tol: f64) -> Result<Option<f64>> {
    let dist = abl(tsv, observable)?;
    Ok(dist.pairs.iter().find(|(_, p)| *p >= 1.0 - tol).map(|(v, _)| *v))
}

/// `<post|op|pre> / <post|pre>`.
pub fn weak_value(tsv: &TwoStateVector, op: &HermitianOperator) -> Result<Amplitude> {
    check_dim(tsv.dim(), op.dim())?;
    let overlap = tsv.overlap();
    if overlap.norm() < ORTHOGONAL_OVERLAP {
        return Err(Error::OrthogonalSelections {
            overlap: overlap.norm(),
        });
    }
    let numerator = inner_raw(tsv.post.amplitudes(), &op.apply_raw(tsv.pre.amplitudes()));
    Ok(numerator / overlap)
}

/// Weak value of `op` acting on one factor of a composite system.
pub fn weak_value_local(
    tsv: &TwoStateVector,
    op: &HermitianOperator,
    factor_index: usize,
    factor_dims: &[usize],
) -> Result<Amplitude> {
    let total: usize = factor_dims.iter().product();
    check_dim(tsv.dim(), total)?;
    weak_value(tsv, &op.embed(factor_index, factor_dims)?)
}

/// Result of a [`sequential_oracle`] run.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    /// Empirical frequencies among post-selected shots.
    pub distribution: OutcomeDistribution,
    /// Post-selected shots per outcome, aligned with `distribution`.
    pub counts: Vec<u64>,
    pub postselected: u64,
    pub shots: u64,
}

impl OracleEstimate {
    /// `sqrt(p (1-p) / n)` with `n` the number of post-selected shots.
    pub fn standard_error(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.postselected as f64).sqrt()
    }
}

/// Monte Carlo estimate of the intermediate-outcome distribution by direct
/// simulation: Born-rule measurement of `observable` on `pre`, Lüders
/// collapse, then a post-selection measurement of `post_projector`. Only
/// shots that pass post-selection are counted.
pub fn sequential_oracle(
    pre: &StateVector,
    observable: &HermitianOperator,
    post_projector: &Projector,
    shots: u64,
    seed: u64,
) -> Result<OracleEstimate> {
    if shots == 0 {
        return Err(Error::Malformed("shots must be >= 1".into()));
    }
    check_dim(pre.dim(), observable.dim())?;
    check_dim(pre.dim(), post_projector.dim())?;
    let dec = observable.spectral()?;

    // Per-branch Born weight and post-selection probability of the collapsed state.
    let mut born = Vec::with_capacity(dec.len());
    let mut survive = Vec::with_capacity(dec.len());
    for (_, proj) in dec.pairs() {
        let projected = proj.apply_raw(pre.amplitudes());
        let weight = norm(&projected).powi(2);
        born.push(weight);
        if weight > 0.0 {
            let collapsed: Vec<Amplitude> = projected.iter().map(|a| a / weight.sqrt()).collect();
            let kept = inner_raw(&collapsed, &post_projector.apply_raw(&collapsed)).re;
            survive.push(kept.clamp(0.0, 1.0));
        } else {
            survive.push(0.0);
        }
    }
    let born_total: f64 = born.iter().sum();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; dec.len()];
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * born_total;
        let mut acc = 0.0;
        let mut outcome = born.len() - 1;
        for (j, w) in born.iter().enumerate() {
            acc += w;
            if u < acc {
                outcome = j;
                break;
            }
        }
        if rng.random::<f64>() < survive[outcome] {
            counts[outcome] += 1;
        }
    }
    let postselected: u64 = counts.iter().sum();
    if postselected == 0 {
        return Err(Error::NoPostSelectedShots { shots });
    }
    let distribution = OutcomeDistribution {
        pairs: dec
            .eigenvalues()
            .zip(&counts)
            .map(|(v, &c)| (v, c as f64 / postselected as f64))
            .collect(),
    };
    Ok(OracleEstimate {
        distribution,
        counts,
        postselected,
        shots,
    })
}
