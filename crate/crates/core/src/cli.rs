//! `tsvf-lab` command-line front end.
//!
//! Exit status: 0 on success, 1 on usage or I/O errors, 2 on domain errors
//! (the error name is printed on standard error). Output is deterministic:
//! JSON keys are sorted and every float is written with 17 significant
//! digits.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Number, Value};

use crate::error::Error;
use crate::pointer::{coupling_sweep, pointer_distribution, GridSpec, PointerConfig, SweepGrid};
use crate::qcore::{spin, Amplitude, HermitianOperator};
use crate::scenarios::{
    self, build_king_protocol, shutter_scattering, validate_king_protocol, Axis, Scenario, KING_FACTORS,
};
use crate::tsvf::{abl, element_of_reality, sequential_oracle, weak_value, TwoStateVector};
use crate::worlds::{parse_world, World};

#[derive(Debug, Parser)]
#[command(name = "tsvf-lab", version, about = "Pre- and post-selected quantum systems")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the artifact here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioName {
    ThreeBox,
    ThreeBoxTrivial,
    King,
    AllPlus,
    Shutter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TsvScenario {
    ThreeBox,
    ThreeBoxTrivial,
    AllPlus,
}

impl From<TsvScenario> for Scenario {
    fn from(s: TsvScenario) -> Self {
        match s {
            TsvScenario::ThreeBox => Scenario::ThreeBox,
            TsvScenario::ThreeBoxTrivial => Scenario::ThreeBoxTrivial,
            TsvScenario::AllPlus => Scenario::AllPlus,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report the numbers of a built-in scenario.
    Scenario {
        #[arg(value_enum)]
        name: ScenarioName,
        /// Monte Carlo shots for the sequential-measurement cross-check.
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = crate::tsvf::DEFAULT_CERTAINTY_TOL)]
        tolerance: f64,
        #[command(flatten)]
        out: Output,
    },
    /// ABL distribution for a measurement inserted at `--time` in a world file.
    Counterfactual {
        #[arg(long)]
        world: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        time: i64,
        /// Observable declared in the world file, or a built-in name.
        #[arg(long)]
        obs: String,
        #[command(flatten)]
        out: Output,
    },
    /// Weak value of a built-in observable in a built-in scenario.
    WeakValue {
        #[arg(long, value_enum)]
        scenario: TsvScenario,
        #[arg(long)]
        obs: String,
        #[command(flatten)]
        out: Output,
    },
    /// Pointer centers across coupling strengths, or one pointer density.
    Pointer {
        #[arg(long, value_enum)]
        scenario: TsvScenario,
        #[arg(long)]
        obs: String,
        /// Initial pointer spreads, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        widths: Vec<f64>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        coupling: f64,
        #[arg(long, default_value_t = crate::pointer::DEFAULT_GRID_POINTS)]
        grid_points: usize,
        /// Emit the sampled density `(x, density)` for a single width.
        #[arg(long)]
        density: bool,
        #[command(flatten)]
        out: Output,
    },
}

/// Report produced by a command, rendered as JSON or CSV.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Document(Value),
    Table { header: Vec<String>, rows: Vec<Vec<f64>> },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&config) {
        Ok((artifact, out)) => {
            let text = render(&artifact, out.format);
            let written = match &out.output {
                Some(path) => fs::write(path, text.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => 0,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    1
                }
            }
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(stderr, "error: {}: {e}", e.name());
            2
        }
    }
}

/// Runs a parsed command and returns its artifact.
pub fn execute(config: &RunConfig) -> Result<(Artifact, &Output), CliError> {
    match &config.command {
        Command::Scenario {
            name,
            shots,
            seed,
            tolerance,
            out,
        } => Ok((scenario_report(*name, *shots, *seed, *tolerance)?, out)),
        Command::Counterfactual { world, time, obs, out } => {
            let text = fs::read_to_string(world).map_err(|e| CliError::Usage(format!("{}: {e}", world.display())))?;
            let world = parse_world(&text)?;
            Ok((counterfactual_report(&world, *time, obs, out.format)?, out))
        }
        Command::WeakValue { scenario, obs, out } => {
            let scenario = Scenario::from(*scenario);
            let tsv = scenario.tsv();
            let op = scenario.observable(obs)?;
            let w = weak_value(&tsv, &op)?;
            let values: Vec<f64> = op.spectral()?.eigenvalues().collect();
            let mut doc = Map::new();
            doc.insert("observable".into(), obs.as_str().into());
            doc.insert("scenario".into(), scenario_name(scenario).into());
            doc.insert("weak_value".into(), complex(w));
            doc.insert("eigenvalue_min".into(), num(values[0]));
            doc.insert("eigenvalue_max".into(), num(values[values.len() - 1]));
            doc.insert(
                "outside_eigenvalue_range".into(),
                (w.re < values[0] || w.re > values[values.len() - 1]).into(),
            );
            Ok((Artifact::Document(Value::Object(doc)), out))
        }
        Command::Pointer {
            scenario,
            obs,
            widths,
            coupling,
            grid_points,
            density,
            out,
        } => {
            let scenario = Scenario::from(*scenario);
            let tsv = scenario.tsv();
            let op = scenario.observable(obs)?;
            if *density {
                let [width] = widths[..] else {
                    return Err(CliError::Usage("--density takes exactly one width".into()));
                };
                let cfg = PointerConfig::new(width, *coupling)?;
                let eigenvalues: Vec<f64> = op.spectral()?.eigenvalues().collect();
                let grid = GridSpec::auto(&eigenvalues, &cfg, *grid_points)?;
                let d = pointer_distribution(&tsv, &op, &cfg, &grid)?;
                let rows = d.rows().map(|(x, p)| vec![x, p]).collect();
                return Ok((
                    Artifact::Table {
                        header: vec!["x".into(), "density".into()],
                        rows,
                    },
                    out,
                ));
            }
            let sweep = coupling_sweep(&tsv, &op, *coupling, widths, SweepGrid::Auto(*grid_points))?;
            let rows = sweep
                .iter()
                .map(|p| vec![p.width, p.center, p.post_selection_probability])
                .collect();
            Ok((
                Artifact::Table {
                    header: vec!["width".into(), "center".into(), "psel_prob".into()],
                    rows,
                },
                out,
            ))
        }
    }
}

fn scenario_report(name: ScenarioName, shots: u64, seed: u64, tol: f64) -> Result<Artifact, CliError> {
    let doc = match name {
        ScenarioName::ThreeBox | ScenarioName::ThreeBoxTrivial => {
            let scenario = if name == ScenarioName::ThreeBox {
                Scenario::ThreeBox
            } else {
                Scenario::ThreeBoxTrivial
            };
            box_report(scenario, shots, seed, tol)?
        }
        ScenarioName::King => king_report()?,
        ScenarioName::AllPlus => all_plus_report(tol)?,
        ScenarioName::Shutter => shutter_report(),
    };
    Ok(Artifact::Document(Value::Object(doc)))
}

fn box_report(scenario: Scenario, shots: u64, seed: u64, tol: f64) -> Result<Map<String, Value>, CliError> {
    let tsv = scenario.tsv();
    let post = crate::qcore::Projector::onto(tsv.post());
    let mut doc = Map::new();
    let mut weak = Map::new();
    let mut oracle = Map::new();
    let mut certain = Map::new();
    for (label, name) in [("A", "P_A"), ("B", "P_B"), ("C", "P_C")] {
        let op = scenario.observable(name)?;
        doc.insert(format!("p_{label}"), num(abl(&tsv, &op)?.probability(1.0)));
        weak.insert(name.into(), complex(weak_value(&tsv, &op)?));
        certain.insert(
            name.into(),
            element_of_reality(&tsv, &op, tol)?.map_or(Value::Null, num),
        );
        let est = sequential_oracle(tsv.pre(), &op, &post, shots, seed)?;
        oracle.insert(format!("p_{label}"), num(est.distribution.probability(1.0)));
        oracle.insert(format!("postselected_{label}"), est.postselected.into());
    }
    oracle.insert("seed".into(), seed.into());
    oracle.insert("shots".into(), shots.into());
    doc.insert("elements_of_reality".into(), Value::Object(certain));
    doc.insert("oracle".into(), Value::Object(oracle));
    doc.insert("post_selection_probability".into(), num(tsv.overlap().norm_sqr()));
    doc.insert("scenario".into(), scenario_name(scenario).into());
    doc.insert("two_state".into(), two_state(&tsv));
    doc.insert("weak_values".into(), Value::Object(weak));
    Ok(doc)
}

fn king_report() -> Result<Map<String, Value>, CliError> {
    let protocol = build_king_protocol();
    let report = validate_king_protocol(&protocol)?;
    let mut doc = Map::new();
    let answers = protocol
        .answers()
        .iter()
        .zip(protocol.final_basis())
        .zip(&report.undisturbed_probabilities)
        .enumerate()
        .map(|(k, ((a, state), p))| {
            let mut m = Map::new();
            m.insert("outcome".into(), k.into());
            m.insert("s_x".into(), num(a.s_x));
            m.insert("s_y".into(), num(a.s_y));
            m.insert("s_z".into(), num(a.s_z));
            m.insert("final_state".into(), amplitudes(state.amplitudes()));
            m.insert("probability_without_measurement".into(), num(*p));
            Value::Object(m)
        })
        .collect();
    let cases = report
        .cases
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("axis".into(), c.axis.name().into());
            m.insert("outcome".into(), c.outcome.into());
            m.insert("p_plus".into(), num(c.p_plus));
            m.insert("p_minus".into(), num(c.p_minus));
            m.insert("claimed".into(), num(c.claimed));
            m.insert("inferred".into(), c.inferred.map_or(Value::Null, num));
            m.insert("win".into(), c.win.into());
            Value::Object(m)
        })
        .collect();
    let totals = report
        .axis_totals
        .iter()
        .map(|(axis, t)| (axis.name().to_string(), num(*t)))
        .collect::<Map<_, _>>();
    doc.insert("answers".into(), Value::Array(answers));
    doc.insert("axis_totals".into(), Value::Object(totals));
    doc.insert("cases".into(), Value::Array(cases));
    doc.insert("initial_state".into(), amplitudes(protocol.initial().amplitudes()));
    doc.insert("scenario".into(), "king".into());
    doc.insert("total".into(), report.total.into());
    doc.insert("wins".into(), report.wins.into());
    Ok(doc)
}

fn all_plus_report(tol: f64) -> Result<Map<String, Value>, CliError> {
    let tsv = Scenario::AllPlus.tsv();
    let mut doc = Map::new();
    let mut weak = Map::new();
    let mut certain = Map::new();
    for axis in Axis::ALL {
        let op = axis.operator().embed(0, &KING_FACTORS)?;
        let name = format!("s_{}", axis.name());
        weak.insert(name.clone(), complex(weak_value(&tsv, &op)?));
        certain.insert(name, element_of_reality(&tsv, &op, tol)?.map_or(Value::Null, num));
    }
    let xi = spin::s_xi().embed(0, &KING_FACTORS)?;
    let w_xi = weak_value(&tsv, &xi)?;
    weak.insert("s_xi".into(), complex(w_xi));
    certain.insert(
        "s_xi".into(),
        element_of_reality(&tsv, &xi, tol)?.map_or(Value::Null, num),
    );
    doc.insert("elements_of_reality".into(), Value::Object(certain));
    doc.insert("outside_eigenvalue_range".into(), (w_xi.re.abs() > 0.5).into());
    doc.insert("post_selection_probability".into(), num(tsv.overlap().norm_sqr()));
    doc.insert("scenario".into(), "all-plus".into());
    doc.insert("weak_values".into(), Value::Object(weak));
    Ok(doc)
}

fn shutter_report() -> Map<String, Value> {
    let report = shutter_scattering();
    let mut doc = Map::new();
    doc.insert(
        "post_selection_probability".into(),
        num(report.post_selection_probability),
    );
    doc.insert(
        "probe_basis".into(),
        Value::Array(["a_in", "a_refl", "b_in", "b_refl"].iter().map(|&s| s.into()).collect()),
    );
    doc.insert("probe_state".into(), amplitudes(report.probe.amplitudes()));
    doc.insert("reflection_probability".into(), num(report.reflection_probability));
    doc.insert("scenario".into(), "shutter".into());
    doc
}

fn counterfactual_report(world: &World, time: i64, obs: &str, format: Format) -> Result<Artifact, CliError> {
    let op = match world.observable(obs) {
        Some(op) => op.clone(),
        None => builtin_observable(obs, world.dim())?,
    };
    let dist = crate::worlds::counterfactual(world, time, &op)?;
    if format == Format::Csv {
        return Ok(Artifact::Table {
            header: vec!["eigenvalue".into(), "probability".into()],
            rows: dist.pairs().iter().map(|&(v, p)| vec![v, p]).collect(),
        });
    }
    let by_value: Map<String, Value> = dist.pairs().iter().map(|&(v, p)| (format!("{v}"), num(p))).collect();
    let mut doc = Map::new();
    doc.insert("distribution".into(), Value::Object(by_value));
    doc.insert("observable".into(), obs.into());
    doc.insert("time".into(), time.into());
    Ok(Artifact::Document(Value::Object(doc)))
}

fn builtin_observable(name: &str, dim: usize) -> Result<HermitianOperator, Error> {
    match (dim, name) {
        (3, "P_A") => Ok(scenarios::box_projector(0)),
        (3, "P_B") => Ok(scenarios::box_projector(1)),
        (3, "P_C") => Ok(scenarios::box_projector(2)),
        (2, "s_x") => Ok(spin::s_x()),
        (2, "s_y") => Ok(spin::s_y()),
        (2, "s_z") => Ok(spin::s_z()),
        (2, "s_xi") => Ok(spin::s_xi()),
        _ => Err(Error::UnknownObservable(name.to_string())),
    }
}

fn scenario_name(s: Scenario) -> &'static str {
    match s {
        Scenario::ThreeBox => "three-box",
        Scenario::ThreeBoxTrivial => "three-box-trivial",
        Scenario::AllPlus => "all-plus",
    }
}

/// Formats with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let n: Number = format_float(x).parse().expect("formatted float is valid JSON");
    Value::Number(n)
}

fn complex(z: Amplitude) -> Value {
    let mut m = Map::new();
    m.insert("im".into(), num(z.im));
    m.insert("re".into(), num(z.re));
    Value::Object(m)
}

fn amplitudes(a: &[Amplitude]) -> Value {
    Value::Array(a.iter().map(|z| complex(*z)).collect())
}

fn two_state(tsv: &TwoStateVector) -> Value {
    let mut m = Map::new();
    m.insert("post".into(), amplitudes(tsv.post().amplitudes()));
    m.insert("pre".into(), amplitudes(tsv.pre().amplitudes()));
    Value::Object(m)
}

/// Renders an artifact. Documents become key/value CSV with dotted paths;
/// tables become arrays of row objects in JSON.
pub fn render(artifact: &Artifact, format: Format) -> String {
    match (artifact, format) {
        (Artifact::Document(v), Format::Json) => json_text(v),
        (Artifact::Table { header, rows }, Format::Json) => {
            let rows = rows
                .iter()
                .map(|row| Value::Object(header.iter().cloned().zip(row.iter().map(|&x| num(x))).collect()))
                .collect();
            json_text(&Value::Array(rows))
        }
        (Artifact::Document(v), Format::Csv) => {
            let mut flat = Vec::new();
            flatten("", v, &mut flat);
            csv_text(&["key", "value"], flat.into_iter().map(|(k, v)| vec![k, v]))
        }
        (Artifact::Table { header, rows }, Format::Csv) => {
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            csv_text(
                &header,
                rows.iter().map(|r| r.iter().map(|&x| format_float(x)).collect()),
            )
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
