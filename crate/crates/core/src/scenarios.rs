//! Canned pre/post-selection setups.
//!
//! * Three boxes: a particle certain to be found in box A when A is opened,
//!   and equally certain to be found in B when B is opened instead.
//! * The trivial variant pre-selected in A+B and post-selected in B+C.
//! * The spin raffle: a spin-1/2 particle entangled with an ancilla lets its
//!   owner name, after the fact, the outcome of a spin measurement along
//!   whichever of x, y, z was performed.
//! * The shutter toy: a probe scattering off the three-box particle sees it
//!   in both A and B at once.

use std::fmt;

use crate::error::{Error, Result};
use crate::qcore::{inner_raw, max_abs_diff, norm, spin, Amplitude, HermitianOperator, StateVector};
use crate::tsvf::{element_of_reality, TwoStateVector, DEFAULT_CERTAINTY_TOL};

const ORTHONORMAL_TOL: f64 = 1e-10;

/// Particle (factor 0) and ancilla (factor 1) dimensions of the raffle.
pub const KING_FACTORS: [usize; 2] = [2, 2];

/// `|A>`, `|B>`, `|C>` as basis states 0, 1, 2.
pub fn box_projector(index: usize) -> HermitianOperator {
    let mut diag = [0.0; 3];
    diag[index] = 1.0;
    HermitianOperator::diagonal(&diag).expect("diagonal is hermitian")
}

/// Pre `(A+B+C)/sqrt3`, post `(A+B-C)/sqrt3`.
pub fn three_box() -> TwoStateVector {
    TwoStateVector::new(
        StateVector::from_real(&[1.0, 1.0, 1.0]).expect("nonzero"),
        StateVector::from_real(&[1.0, 1.0, -1.0]).expect("nonzero"),
    )
    .expect("equal dims")
}

/// Pre `(A+B)/sqrt2`, post `(B+C)/sqrt2`.
pub fn three_box_trivial() -> TwoStateVector {
    TwoStateVector::new(
        StateVector::from_real(&[1.0, 1.0, 0.0]).expect("nonzero"),
        StateVector::from_real(&[0.0, 1.0, 1.0]).expect("nonzero"),
    )
    .expect("equal dims")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn operator(self) -> HermitianOperator {
        match self {
            Axis::X => spin::s_x(),
            Axis::Y => spin::s_y(),
            Axis::Z => spin::s_z(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The participant's three claims, one per axis, each `+-1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaffleAnswer {
    pub s_x: f64,
    pub s_y: f64,
    pub s_z: f64,
}

impl RaffleAnswer {
    pub fn new(s_x: f64, s_y: f64, s_z: f64) -> Result<Self> {
        for v in [s_x, s_y, s_z] {
            if v != 0.5 && v != -0.5 {
                return Err(Error::InvalidProtocol(format!("{v} is not a spin eigenvalue")));
            }
        }
        Ok(Self { s_x, s_y, s_z })
    }

    pub fn component(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.s_x,
            Axis::Y => self.s_y,
            Axis::Z => self.s_z,
        }
    }

    pub fn is_all_plus(&self) -> bool {
        self.s_x == 0.5 && self.s_y == 0.5 && self.s_z == 0.5
    }
}

/// Entangled initial state, final complete measurement and the answer each
/// final outcome implies.
#[derive(Debug, Clone, PartialEq)]
pub struct KingProtocol {
    initial: StateVector,
    final_basis: Vec<StateVector>,
    answers: Vec<RaffleAnswer>,
}

impl KingProtocol {
    pub fn new(initial: StateVector, final_basis: Vec<StateVector>, answers: Vec<RaffleAnswer>) -> Result<Self> {
        if initial.dim() != 4 {
            return Err(Error::InvalidProtocol(format!(
                "initial state has dim {}",
                initial.dim()
            )));
        }
        if final_basis.len() != 4 || answers.len() != 4 {
            return Err(Error::InvalidProtocol(
                "need exactly 4 final states and 4 answers".into(),
            ));
        }
        for (i, a) in final_basis.iter().enumerate() {
            if a.dim() != 4 {
                return Err(Error::InvalidProtocol(format!("final state {i} has dim {}", a.dim())));
            }
            for (j, b) in final_basis.iter().enumerate().skip(i + 1) {
                let overlap = a.inner(b)?.norm();
                if overlap > ORTHONORMAL_TOL {
                    return Err(Error::InvalidProtocol(format!(
                        "final states {i} and {j} overlap by {overlap:.3e}"
                    )));
                }
            }
        }
        for (i, a) in answers.iter().enumerate() {
            RaffleAnswer::new(a.s_x, a.s_y, a.s_z)?;
            if answers[i + 1..].contains(a) {
                return Err(Error::InvalidProtocol(format!("answer {i} is repeated")));
            }
        }
        Ok(Self {
            initial,
            final_basis,
            answers,
        })
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }

    pub fn final_basis(&self) -> &[StateVector] {
        &self.final_basis
    }

    pub fn answers(&self) -> &[RaffleAnswer] {
        &self.answers
    }

    pub fn all_plus_index(&self) -> Option<usize> {
        self.answers.iter().position(RaffleAnswer::is_all_plus)
    }
}

/// Builds the raffle protocol.
///
/// The participant prepares `(|00> + |11>)/sqrt2`. If the king measures `s_d`
/// and gets `r`, the pair is left in `(P_{d,r} ⊗ 1)|initial>`. A final state
/// that certifies answer `a` must be orthogonal to the three branches the
/// answer excludes, `(P_{d,-a_d} ⊗ 1)|initial>` for d = x, y, z, which fixes
/// it up to phase. Of the eight candidate answers, the first four whose
/// final states are mutually orthogonal form the measurement basis.
pub fn build_king_protocol() -> KingProtocol {
    let initial = StateVector::from_real(&[1.0, 0.0, 0.0, 1.0]).expect("nonzero");

    let signs = [0.5, -0.5];
    let mut candidates: Vec<(RaffleAnswer, StateVector)> = Vec::new();
    for &sx in &signs {
        for &sy in &signs {
            for &sz in &signs {
                let answer = RaffleAnswer {
                    s_x: sx,
                    s_y: sy,
                    s_z: sz,
                };
                let excluded: Vec<Vec<Amplitude>> = Axis::ALL
                    .iter()
                    .map(|&axis| branch(&initial, axis, -answer.component(axis)))
                    .collect();
                if let Some(state) = orthogonal_complement_vector(&excluded, 4) {
                    candidates.push((answer, state));
                }
            }
        }
    }

    let n = candidates.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let chosen = [a, b, c, d];
                    let orthogonal = chosen.iter().enumerate().all(|(i, &p)| {
                        chosen[i + 1..].iter().all(|&q| {
                            inner_raw(candidates[p].1.amplitudes(), candidates[q].1.amplitudes()).norm()
                                < ORTHONORMAL_TOL
                        })
                    });
                    if orthogonal {
                        let (answers, basis) = chosen.iter().map(|&i| candidates[i].clone()).unzip();
                        return KingProtocol::new(initial, basis, answers).expect("derived basis is orthonormal");
                    }
                }
            }
        }
    }
    unreachable!("no orthogonal set of certifying final states")
}

/// `(P_{axis,value} ⊗ 1)|state>`, unnormalized.
fn branch(state: &StateVector, axis: Axis, value: f64) -> Vec<Amplitude> {
    let dec = axis.operator().spectral().expect("spin decomposes");
    let idx = dec.find(value, 1e-9).expect("spin eigenvalue");
    let proj = dec.pairs()[idx].1.embed(0, &KING_FACTORS).expect("particle factor");
    proj.apply(state.amplitudes()).expect("dim 4")
}

/// A unit vector orthogonal to every vector in `spanning`, when their span
/// leaves exactly one dimension free.
fn orthogonal_complement_vector(spanning: &[Vec<Amplitude>], dim: usize) -> Option<StateVector> {
    let mut basis: Vec<Vec<Amplitude>> = Vec::new();
    let project_out = |v: &mut Vec<Amplitude>, basis: &[Vec<Amplitude>]| {
        for b in basis {
            let c = inner_raw(b, v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    };
    for v in spanning {
        let mut w = v.clone();
        project_out(&mut w, &basis);
        project_out(&mut w, &basis);
        let n = norm(&w);
        if n > 1e-10 {
            basis.push(w.into_iter().map(|x| x / n).collect());
        }
    }
    if basis.len() + 1 != dim {
        return None;
    }
    let best = (0..dim)
        .map(|k| {
            let mut e = vec![Amplitude::new(0.0, 0.0); dim];
            e[k] = Amplitude::new(1.0, 0.0);
            project_out(&mut e, &basis);
            project_out(&mut e, &basis);
            e
        })
        .max_by(|a, b| norm(a).total_cmp(&norm(b)))?;
    StateVector::new(canonical_phase(best)).ok()
}

/// Rotates the global phase so the first largest amplitude is real and
/// positive.
fn canonical_phase(mut v: Vec<Amplitude>) -> Vec<Amplitude> {
    let max = v.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if let Some(pivot) = v.iter().find(|a| a.norm() >= max * (1.0 - 1e-9)).copied() {
        let rot = pivot.conj() / pivot.norm();
        for a in &mut v {
            *a *= rot;
        }
    }
    v
}

/// One (direction, final outcome) cell of the raffle.
#[derive(Debug, Clone, PartialEq)]
pub struct KingCase {
    pub axis: Axis,
    pub outcome: usize,
    /// Joint probability of the king's result `+1/2` and final outcome `k`.
    pub p_plus: f64,
    /// Joint probability of the king's result `-1/2` and final outcome `k`.
    pub p_minus: f64,
    /// The king's result as fixed by the final outcome, if determined.
    pub inferred: Option<f64>,
    pub claimed: f64,
    pub win: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KingReport {
    pub cases: Vec<KingCase>,
    pub wins: usize,
    pub total: usize,
    /// Per axis, total probability summed over the king's results and final
    /// outcomes.
    pub axis_totals: Vec<(Axis, f64)>,
    /// `|<final_k|initial>|^2` with no intermediate measurement.
    pub undisturbed_probabilities: Vec<f64>,
}

/// Checks that every final outcome lets the participant name the king's
/// result for every axis.
///
/// Each case is decided twice: from the joint branch probabilities of the
/// simulated king measurement, and as an ABL element of reality for `s_d` on
/// the particle given pre-selection `initial` and post-selection `final_k`.
pub fn validate_king_protocol(p: &KingProtocol) -> Result<KingReport> {
    let mut cases = Vec::with_capacity(12);
    let mut axis_totals = Vec::with_capacity(3);
    let mut violations = Vec::new();

    for axis in Axis::ALL {
        let observable = axis.operator().embed(0, &KING_FACTORS)?;
        let plus = branch(&p.initial, axis, 0.5);
        let minus = branch(&p.initial, axis, -0.5);
        let mut axis_total = 0.0;
        for (k, (final_state, answer)) in p.final_basis.iter().zip(&p.answers).enumerate() {
            let p_plus = inner_raw(final_state.amplitudes(), &plus).norm_sqr();
            let p_minus = inner_raw(final_state.amplitudes(), &minus).norm_sqr();
            let total = p_plus + p_minus;
            axis_total += total;
            let claimed = answer.component(axis);

            let (inferred, win) = if total <= 1e-12 {
                (None, true)
            } else {
                let by_branches = if p_minus <= DEFAULT_CERTAINTY_TOL * total {
                    Some(0.5)
                } else if p_plus <= DEFAULT_CERTAINTY_TOL * total {
                    Some(-0.5)
                } else {
                    None
                };
                let tsv = TwoStateVector::new(p.initial.clone(), final_state.clone())?;
                let by_abl = element_of_reality(&tsv, &observable, DEFAULT_CERTAINTY_TOL)?;
                let agree = match (by_branches, by_abl) {
                    (Some(a), Some(b)) => (a - b).abs() < 1e-8,
                    (None, None) => true,
                    _ => false,
                };
                let win = agree && by_branches == Some(claimed);
                (by_branches, win)
            };
            if !win {
                violations.push(format!(
                    "axis {axis}, outcome {k}: claimed {claimed}, p(+)={p_plus:.3e}, p(-)={p_minus:.3e}"
                ));
            }
            cases.push(KingCase {
                axis,
                outcome: k,
                p_plus,
                p_minus,
                inferred,
                claimed,
                win,
            });
        }
        axis_totals.push((axis, axis_total));
    }

    if !violations.is_empty() {
        return Err(Error::ValidationFailed(violations.join("; ")));
    }
    let undisturbed_probabilities = p
        .final_basis
        .iter()
        .map(|f| p.initial.fidelity(f))
        .collect::<Result<Vec<_>>>()?;
    let wins = cases.iter().filter(|c| c.win).count();
    Ok(KingReport {
        total: cases.len(),
        wins,
        cases,
        axis_totals,
        undisturbed_probabilities,
    })
}

/// Pre-selection: the raffle's initial state. Post-selection: the final
/// outcome certifying `s_x = s_y = s_z = +1/2`.
pub fn all_plus_tsv() -> TwoStateVector {
    let protocol = build_king_protocol();
    let idx = protocol.all_plus_index().expect("all-plus outcome present");
    TwoStateVector::new(protocol.initial.clone(), protocol.final_basis[idx].clone()).expect("dim 4")
}

/// Probe basis: path (a, b) ⊗ flag (in, reflected).
pub const PROBE_A_IN: usize = 0;
pub const PROBE_A_REFL: usize = 1;
pub const PROBE_B_IN: usize = 2;
pub const PROBE_B_REFL: usize = 3;
const PROBE_DIM: usize = 4;
const SHUTTER_DIM: usize = 3 * PROBE_DIM;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShutterInteraction {
    /// A particle in box A flips the flag of a probe on path a; likewise B, b.
    Reflecting,
    /// No coupling.
    Identity,
}

/// 12×12 row-major interaction on box ⊗ probe. The reflecting interaction
/// swaps `|A,a,in> <-> |A,a,refl>` and `|B,b,in> <-> |B,b,refl>` and fixes the
/// other basis states.
pub fn shutter_unitary(kind: ShutterInteraction) -> Vec<Amplitude> {
    let mut perm: Vec<usize> = (0..SHUTTER_DIM).collect();
    if kind == ShutterInteraction::Reflecting {
        let a = 0;
        let b = PROBE_DIM;
        perm.swap(a + PROBE_A_IN, a + PROBE_A_REFL);
        perm.swap(b + PROBE_B_IN, b + PROBE_B_REFL);
    }
    let mut u = vec![Amplitude::new(0.0, 0.0); SHUTTER_DIM * SHUTTER_DIM];
    for (src, &dst) in perm.iter().enumerate() {
        u[dst * SHUTTER_DIM + src] = Amplitude::new(1.0, 0.0);
    }
    u
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShutterReport {
    /// Post-selected probe state, phase fixed so the first largest amplitude
    /// is real positive.
    pub probe: StateVector,
    pub reflection_probability: f64,
    pub post_selection_probability: f64,
}

/// Three-box particle scattered by a probe in superposition of paths a and b,
/// then post-selected in `(A+B-C)/sqrt3`.
pub fn shutter_scattering() -> ShutterReport {
    shutter_scattering_with(ShutterInteraction::Reflecting, three_box().post()).expect("post-selection succeeds")
}

pub fn shutter_scattering_with(kind: ShutterInteraction, post: &StateVector) -> Result<ShutterReport> {
    crate::qcore::check_dim(3, post.dim())?;
    let particle = three_box().pre().clone();
    let mut probe_amps = vec![Amplitude::new(0.0, 0.0); PROBE_DIM];
    probe_amps[PROBE_A_IN] = Amplitude::new(1.0, 0.0);
    probe_amps[PROBE_B_IN] = Amplitude::new(1.0, 0.0);
    let probe = StateVector::new(probe_amps)?;
    let joint = particle.tensor(&probe);

    let u = shutter_unitary(kind);
    let scattered: Vec<Amplitude> = u
        .chunks_exact(SHUTTER_DIM)
        .map(|row| row.iter().zip(joint.amplitudes()).map(|(a, b)| a * b).sum())
        .collect();

    let mut projected = vec![Amplitude::new(0.0, 0.0); PROBE_DIM];
    for (i, w) in post.amplitudes().iter().enumerate() {
        for (j, p) in projected.iter_mut().enumerate() {
            *p += w.conj() * scattered[i * PROBE_DIM + j];
        }
    }
    let post_selection_probability = norm(&projected).powi(2);
    if post_selection_probability < crate::tsvf::VANISHING_POSTSELECTION {
        return Err(Error::VanishingPostSelection {
            probability: post_selection_probability,
        });
    }
    let probe = StateVector::new(canonical_phase(projected))?;
    let a = probe.amplitudes();
    let reflection_probability = a[PROBE_A_REFL].norm_sqr() + a[PROBE_B_REFL].norm_sqr();
    Ok(ShutterReport {
        probe,
        reflection_probability,
        post_selection_probability,
    })
}

/// Named setups exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    ThreeBox,
    ThreeBoxTrivial,
    AllPlus,
}

impl Scenario {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "three-box" => Some(Self::ThreeBox),
            "three-box-trivial" => Some(Self::ThreeBoxTrivial),
            "all-plus" => Some(Self::AllPlus),
            _ => None,
        }
    }

    pub fn tsv(self) -> TwoStateVector {
        match self {
            Self::ThreeBox => three_box(),
            Self::ThreeBoxTrivial => three_box_trivial(),
            Self::AllPlus => all_plus_tsv(),
        }
    }

    /// Built-in observables: `P_A`, `P_B`, `P_C` on the box scenarios and
    /// `s_x`, `s_y`, `s_z`, `s_xi` on the raffle particle.
    pub fn observable(self, name: &str) -> Result<HermitianOperator> {
        let unknown = || Error::UnknownObservable(name.to_string());
        match self {
            Self::ThreeBox | Self::ThreeBoxTrivial => match name {
                "P_A" => Ok(box_projector(0)),
                "P_B" => Ok(box_projector(1)),
                "P_C" => Ok(box_projector(2)),
                _ => Err(unknown()),
            },
            Self::AllPlus => {
                let op = match name {
                    "s_x" => spin::s_x(),
                    "s_y" => spin::s_y(),
                    "s_z" => spin::s_z(),
                    "s_xi" => spin::s_xi(),
                    _ => return Err(unknown()),
                };
                op.embed(0, &KING_FACTORS)
            }
        }
    }
}

/// `max |U^dagger U - 1|` for a row-major square matrix.
pub fn unitarity_residual(u: &[Amplitude], dim: usize) -> f64 {
    let mut product = vec![Amplitude::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            product[i * dim + j] = (0..dim).map(|k| u[k * dim + i].conj() * u[k * dim + j]).sum();
        }
    }
    max_abs_diff(&product, HermitianOperator::identity(dim).entries())
}
