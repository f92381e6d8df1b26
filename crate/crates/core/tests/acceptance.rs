//! Acceptance criteria, one line of output each. Runs as a plain binary so the
//! report is printed on every `cargo test`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use tsvf_lab::pointer::{
    coupling_sweep, distribution_center, pointer_distribution, GridSpec, PointerConfig, SweepGrid, DEFAULT_GRID_POINTS,
};
use tsvf_lab::qcore::{spin, Amplitude, HermitianOperator, Projector, StateVector};
use tsvf_lab::scenarios::{
    all_plus_tsv, box_projector, build_king_protocol, shutter_scattering, three_box, three_box_trivial,
    validate_king_protocol, KING_FACTORS,
};
use tsvf_lab::tsvf::{
    abl, element_of_reality, sequential_oracle, weak_value, weak_value_local, TwoStateVector, DEFAULT_CERTAINTY_TOL,
};
use tsvf_lab::worlds::{counterfactual, parse_world};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn three_box_certainties() -> Check {
    let tsv = three_box();
    let p_a = abl(&tsv, &box_projector(0))
        .map_err(|e| e.to_string())?
        .probability(1.0);
    let p_b = abl(&tsv, &box_projector(1))
        .map_err(|e| e.to_string())?
        .probability(1.0);
    let err = (p_a - 1.0).abs().max((p_b - 1.0).abs());
    ensure(err < 1e-12, format!("p(A)={p_a:.17} p(B)={p_b:.17} err={err:.3e}"))
}

fn trivial_variant() -> Check {
    let p_b = abl(&three_box_trivial(), &box_projector(1))
        .map_err(|e| e.to_string())?
        .probability(1.0);
    let err = (p_b - 1.0).abs();
    ensure(err < 1e-12, format!("p(B)={p_b:.17} err={err:.3e}"))
}

fn mean_king() -> Check {
    let protocol = build_king_protocol();
    let report = validate_king_protocol(&protocol).map_err(|e| e.to_string())?;
    let worst = report
        .undisturbed_probabilities
        .iter()
        .map(|p| (p - 0.25).abs())
        .fold(0.0, f64::max);
    ensure(
        report.wins == 12 && report.total == 12 && report.undisturbed_probabilities.len() == 4 && worst < 1e-12,
        format!("{}/{} wins, max |p - 1/4| = {worst:.3e}", report.wins, report.total),
    )
}

fn all_plus_weak_values() -> Check {
    let tsv = all_plus_tsv();
    let local = |op: HermitianOperator| weak_value_local(&tsv, &op, 0, &KING_FACTORS).map_err(|e| e.to_string());
    let (wx, wy, wz, wxi) = (
        local(spin::s_x())?,
        local(spin::s_y())?,
        local(spin::s_z())?,
        local(spin::s_xi())?,
    );
    let half = Amplitude::new(0.5, 0.0);
    let target = Amplitude::new(3f64.sqrt() / 2.0, 0.0);
    let err = [
        (wx - half).norm(),
        (wy - half).norm(),
        (wz - half).norm(),
        (wxi - target).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    ensure(
        err < 1e-10 && wxi.re > 0.5,
        format!(
            "s_x={:.12} s_y={:.12} s_z={:.12} s_xi={:.12} err={err:.3e}",
            wx.re, wy.re, wz.re, wxi.re
        ),
    )
}

fn pointer_anomaly() -> Check {
    let tsv = all_plus_tsv();
    let obs = spin::s_xi().embed(0, &KING_FACTORS).map_err(|e| e.to_string())?;
    let g = 1.0;
    let start = Instant::now();
    let sweep = coupling_sweep(
        &tsv,
        &obs,
        g,
        &[0.01, 0.1, 1.0, 10.0, 50.0],
        SweepGrid::Auto(DEFAULT_GRID_POINTS),
    )
    .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();

    let cfg = PointerConfig::new(20.0 * g, g).map_err(|e| e.to_string())?;
    let eigenvalues: Vec<f64> = obs.spectral().map_err(|e| e.to_string())?.eigenvalues().collect();
    let grid = GridSpec::auto(&eigenvalues, &cfg, DEFAULT_GRID_POINTS).map_err(|e| e.to_string())?;
    let center = distribution_center(&pointer_distribution(&tsv, &obs, &cfg, &grid).map_err(|e| e.to_string())?);
    let rel = (center - 0.8660 * g).abs() / (0.8660 * g);
    ensure(
        rel < 0.02 && center > 0.5 * g && elapsed < 5.0 && sweep.len() == 5,
        format!("center={center:.6} rel.err={rel:.3e} sweep={elapsed:.3}s"),
    )
}

fn strong_limit() -> Check {
    let mut rng = common::rng(6);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let dim = 2 + i % 2;
        let obs = common::separated_observable(&mut rng, dim);
        let tsv = TwoStateVector::new(common::random_state(&mut rng, dim), common::random_state(&mut rng, dim))
            .map_err(|e| e.to_string())?;
        let dist = abl(&tsv, &obs).map_err(|e| e.to_string())?;
        let cfg = PointerConfig::new(0.01, 1.0).map_err(|e| e.to_string())?;
        let values: Vec<f64> = dist.pairs().iter().map(|(v, _)| *v).collect();
        let grid = GridSpec::auto(&values, &cfg, DEFAULT_GRID_POINTS).map_err(|e| e.to_string())?;
        let density = pointer_distribution(&tsv, &obs, &cfg, &grid).map_err(|e| e.to_string())?;
        for (k, (v, p)) in dist.pairs().iter().enumerate() {
            let lo = if k == 0 {
                grid.x_min()
            } else {
                0.5 * (values[k - 1] + v)
            };
            let hi = if k + 1 == values.len() {
                grid.x_max()
            } else {
                0.5 * (values[k + 1] + v)
            };
            worst = worst.max((density.mass_between(lo, hi) - p).abs());
        }
    }
    ensure(worst < 1e-6, format!("20 instances, max |area - p| = {worst:.3e}"))
}

fn weak_value_linearity() -> Check {
    let mut rng = common::rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let dim = rng.random_range(2..=5);
        let a = common::random_hermitian(&mut rng, dim);
        let b = common::random_hermitian(&mut rng, dim);
        let tsv = TwoStateVector::new(common::random_state(&mut rng, dim), common::random_state(&mut rng, dim))
            .map_err(|e| e.to_string())?;
        let sum = a.add(&b).map_err(|e| e.to_string())?;
        let lhs = weak_value(&tsv, &sum).map_err(|e| e.to_string())?;
        let rhs = weak_value(&tsv, &a).map_err(|e| e.to_string())? + weak_value(&tsv, &b).map_err(|e| e.to_string())?;
        worst = worst.max((lhs - rhs).norm());
    }
    ensure(worst < 1e-10, format!("1000 instances, max error = {worst:.3e}"))
}

/// Post-selection orthogonal to every `P_k |pre>` except the chosen branch.
fn certain_post(rng: &mut impl Rng, obs: &HermitianOperator, pre: &StateVector, keep: usize) -> Option<StateVector> {
    let dec = obs.spectral().ok()?;
    let dim = pre.dim();
    let mut excluded: Vec<Vec<Amplitude>> = Vec::new();
    for (k, (_, proj)) in dec.pairs().iter().enumerate() {
        if k == keep {
            continue;
        }
        let mut v = proj.apply(pre.amplitudes()).ok()?;
        for e in &excluded {
            let c: Amplitude = e.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            v.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
        }
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-9 {
            excluded.push(v.into_iter().map(|a| a / n).collect());
        }
    }
    let mut v = common::random_vector(rng, dim);
    for _ in 0..2 {
        for e in &excluded {
            let c: Amplitude = e.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            v.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
        }
    }
    StateVector::new(v).ok()
}

fn certainty_implies_weak_value() -> Check {
    let mut rng = common::rng(8);
    let mut checked = 0;
    let mut attempts = 0;
    let mut worst: f64 = 0.0;
    while checked < 1000 {
        attempts += 1;
        let dim = rng.random_range(2..=5);
        let obs = if rng.random_bool(0.5) {
            common::separated_observable(&mut rng, dim)
        } else {
            common::degenerate_observable(&mut rng, dim)
        };
        let pre = common::random_state(&mut rng, dim);
        let n_values = obs.spectral().map_err(|e| e.to_string())?.len();
        let keep = rng.random_range(0..n_values);
        let Some(post) = certain_post(&mut rng, &obs, &pre, keep) else {
            continue;
        };
        let tsv = TwoStateVector::new(pre, post).map_err(|e| e.to_string())?;
        if tsv.overlap().norm() < 1e-6 {
            continue;
        }
        if let Some(c) = element_of_reality(&tsv, &obs, DEFAULT_CERTAINTY_TOL).map_err(|e| e.to_string())? {
            let w = weak_value(&tsv, &obs).map_err(|e| e.to_string())?;
            worst = worst.max((w - Amplitude::new(c, 0.0)).norm());
            checked += 1;
        }
    }
    ensure(
        worst < 1e-8,
        format!("{checked} elements of reality from {attempts} candidates, max |A_w - c| = {worst:.3e}"),
    )
}

fn oracle_equivalence() -> Check {
    let mut rng = common::rng(9);
    let start = Instant::now();
    let mut worst_sigma: f64 = 0.0;
    for i in 0..10 {
        let obs = common::separated_observable(&mut rng, 3);
        let pre = common::random_state(&mut rng, 3);
        let post = common::random_state(&mut rng, 3);
        let tsv = TwoStateVector::new(pre.clone(), post.clone()).map_err(|e| e.to_string())?;
        let exact = abl(&tsv, &obs).map_err(|e| e.to_string())?;
        let est =
            sequential_oracle(&pre, &obs, &Projector::onto(&post), 100_000, 1000 + i).map_err(|e| e.to_string())?;
        for ((_, p), (_, q)) in exact.pairs().iter().zip(est.distribution.pairs()) {
            let se = est.standard_error(*p);
            let gap = (p - q).abs();
            let sigma = if se > 0.0 {
                gap / se
            } else if gap == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            if sigma > worst_sigma {
                worst_sigma = sigma;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(
        worst_sigma <= 3.0 && elapsed < 10.0,
        format!("10 instances, worst gap = {worst_sigma:.2} SE, {elapsed:.3}s"),
    )
}

fn shutter() -> Check {
    let report = shutter_scattering();
    let expected = [0.0, 1.0, 0.0, 1.0].map(|x| x / 2f64.sqrt());
    let overlap: Amplitude = report
        .probe
        .amplitudes()
        .iter()
        .zip(expected)
        .map(|(a, e)| a.conj() * e)
        .sum();
    let phase = overlap / overlap.norm();
    let err = report
        .probe
        .amplitudes()
        .iter()
        .zip(expected)
        .map(|(a, e)| (a * phase - Amplitude::new(e, 0.0)).norm())
        .fold(0.0, f64::max);
    let psel_err = (report.post_selection_probability - 1.0 / 9.0).abs();
    ensure(
        err < 1e-12 && psel_err < 1e-12,
        format!("probe err={err:.3e} psel={:.17}", report.post_selection_probability),
    )
}

fn counterfactual_world() -> Check {
    let text = include_str!("../data/threebox.world");
    let world = parse_world(text).map_err(|e| e.to_string())?;
    let direct = three_box();
    let mut lines = Vec::new();
    let mut ok = true;
    for name in ["P_A", "P_B"] {
        let obs = world.observable(name).ok_or(format!("{name} missing"))?;
        let via_world = counterfactual(&world, 5, obs).map_err(|e| e.to_string())?;
        let via_abl = abl(&direct, obs).map_err(|e| e.to_string())?;
        let bracketing = abl(&world.two_state_at(5).map_err(|e| e.to_string())?, obs).map_err(|e| e.to_string())?;
        let (p_world, p_abl) = (via_world.probability(1.0), via_abl.probability(1.0));
        ok &= p_world.to_bits() == p_abl.to_bits() && via_world == bracketing && (p_world - 1.0).abs() < 1e-12;
        lines.push(format!("{name}: {p_world:.17} vs {p_abl:.17}"));
    }
    ensure(ok, lines.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("three-box certainties", three_box_certainties),
        ("trivial three-box variant", trivial_variant),
        ("mean king raffle", mean_king),
        ("all-plus weak values", all_plus_weak_values),
        ("pointer anomaly at weak coupling", pointer_anomaly),
        ("strong-limit pointer areas", strong_limit),
        ("weak-value linearity", weak_value_linearity),
        ("certainty implies weak value", certainty_implies_weak_value),
        ("sequential oracle equivalence", oracle_equivalence),
        ("shutter scattering", shutter),
        ("counterfactual world equivalence", counterfactual_world),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
