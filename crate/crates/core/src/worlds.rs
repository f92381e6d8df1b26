//! Measurement-record worlds and counterfactual queries.
//!
//! A world is the time-ordered list of measurement results on one system.
//! A counterfactual query at time `t` keeps every record fixed and asks what a
//! measurement performed at `t` would have yielded. The answer depends only on
//! the nearest complete measurements on either side of `t`, which fix the
//! pre- and post-selected states.
//!
//! # File format
//!
//! ```text
//! # comments run to end of line
//! dim 2
//! obs sz 0.5 0 0 -0.5
//! obs sy 0 -0.5i 0.5i 0
//! record 0 sz 0.5
//! record 10 sy 0.5
//! ```
//!
//! Matrix entries are row-major complex literals: `1.5`, `2i`, `1+2i`, `1-2i`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::qcore::{check_dim, Amplitude, HermitianOperator, StateVector};
use crate::tsvf::{abl, OutcomeDistribution, TwoStateVector};

/// Outcomes within this distance of an eigenvalue are accepted.
pub const OUTCOME_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub time: i64,
    pub observable_name: String,
    pub observable: HermitianOperator,
    pub outcome: f64,
    /// Every eigenspace of the observable is one-dimensional.
    pub complete: bool,
}

impl MeasurementRecord {
    pub fn new(
        time: i64,
        observable_name: impl Into<String>,
        observable: HermitianOperator,
        outcome: f64,
    ) -> Result<Self> {
        let observable_name = observable_name.into();
        let dec = observable.spectral()?;
        if dec.find(outcome, OUTCOME_TOL).is_none() {
            return Err(Error::OutcomeNotEigenvalue {
                line: 0,
                observable: observable_name,
                outcome,
            });
        }
        Ok(Self {
            time,
            observable_name,
            complete: dec.is_nondegenerate(),
            observable,
            outcome,
        })
    }

    /// The state a complete measurement leaves behind.
    pub fn fixed_state(&self) -> Result<StateVector> {
        let dec = self.observable.spectral()?;
        let idx = dec
            .find(self.outcome, OUTCOME_TOL)
            .ok_or_else(|| Error::OutcomeNotEigenvalue {
                line: 0,
                observable: self.observable_name.clone(),
                outcome: self.outcome,
            })?;
        dec.pairs()[idx].1.range_vector()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    dim: usize,
    observables: Vec<(String, HermitianOperator)>,
    records: Vec<MeasurementRecord>,
}

impl World {
    /// Builds a world, sorting records by time.
    pub fn new(
        dim: usize,
        observables: Vec<(String, HermitianOperator)>,
        mut records: Vec<MeasurementRecord>,
    ) -> Result<Self> {
        for (_, op) in &observables {
            check_dim(dim, op.dim())?;
        }
        for r in &records {
            check_dim(dim, r.observable.dim())?;
        }
        records.sort_by_key(|r| r.time);
        if let Some(w) = records.windows(2).find(|w| w[0].time == w[1].time) {
            return Err(Error::DuplicateTimestamp {
                line: 0,
                time: w[0].time,
            });
        }
        Ok(Self {
            dim,
            observables,
            records,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn records(&self) -> &[MeasurementRecord] {
        &self.records
    }

    pub fn observable(&self, name: &str) -> Option<&HermitianOperator> {
        self.observables.iter().find(|(n, _)| n == name).map(|(_, op)| op)
    }

    pub fn observables(&self) -> &[(String, HermitianOperator)] {
        &self.observables
    }

    /// Two-state vector fixed by the complete measurements bracketing `t`.
    pub fn two_state_at(&self, t: i64) -> Result<TwoStateVector> {
        if self.records.iter().any(|r| r.time == t) {
            return Err(Error::TimeCollision { time: t });
        }
        let before = self.records.iter().rev().find(|r| r.time < t && r.complete);
        let after = self.records.iter().find(|r| r.time > t && r.complete);
        let (Some(first), Some(second)) = (before, after) else {
            return Err(Error::NoBracketingCompleteMeasurements { time: t });
        };
        if let Some(r) = self
            .records
            .iter()
            .find(|r| r.time > first.time && r.time < second.time)
        {
            return Err(Error::InterveningRecord {
                t1: first.time,
                t2: second.time,
                record_time: r.time,
            });
        }
        TwoStateVector::new(first.fixed_state()?, second.fixed_state()?)
    }

    /// Serializes into the world-file format. Floats use the shortest
    /// representation that parses back to the same value.
    pub fn to_text(&self) -> String {
        let mut out = format!("dim {}\n", self.dim);
        for (name, op) in &self.observables {
            let _ = write!(out, "obs {name}");
            for e in op.entries() {
                let _ = write!(out, " {}", format_complex(*e));
            }
            out.push('\n');
        }
        for r in &self.records {
            let _ = writeln!(out, "record {} {} {}", r.time, r.observable_name, r.outcome);
        }
        out
    }
}

/// Distribution of outcomes for a measurement of `observable` at time `t`,
/// with all other records of `world` unchanged.
pub fn counterfactual(world: &World, t: i64, observable: &HermitianOperator) -> Result<OutcomeDistribution> {
    check_dim(world.dim, observable.dim())?;
    let tsv = world.two_state_at(t)?;
    abl(&tsv, observable)
}

pub fn parse_world(text: &str) -> Result<World> {
    let mut dim: Option<usize> = None;
    let mut observables: Vec<(String, HermitianOperator)> = Vec::new();
    let mut records: Vec<MeasurementRecord> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::Syntax { line, message };
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().unwrap_or_default();
        let rest: Vec<&str> = tokens.collect();
        match keyword {
            "dim" => {
                if dim.is_some() {
                    return Err(syntax("`dim` declared twice".into()));
                }
                let [n] = rest[..] else {
                    return Err(syntax("expected `dim N`".into()));
                };
                let n: usize = n.parse().map_err(|_| syntax(format!("invalid dimension `{n}`")))?;
                if n == 0 {
                    return Err(syntax("dimension must be positive".into()));
                }
                dim = Some(n);
            }
            "obs" => {
                let n = dim.ok_or_else(|| syntax("`obs` before `dim`".into()))?;
                let Some((name, entries)) = rest.split_first() else {
                    return Err(syntax("expected `obs <name> <entries>`".into()));
                };
                if observables.iter().any(|(existing, _)| existing == name) {
                    return Err(syntax(format!("observable `{name}` declared twice")));
                }
                if entries.len() != n * n {
                    return Err(syntax(format!(
                        "observable `{name}` needs {} entries, got {}",
                        n * n,
                        entries.len()
                    )));
                }
                let values = entries
                    .iter()
                    .map(|tok| parse_complex(tok).ok_or_else(|| syntax(format!("invalid complex literal `{tok}`"))))
                    .collect::<Result<Vec<_>>>()?;
                let op = HermitianOperator::new(n, values).map_err(|e| match e {
                    Error::Malformed(message) => syntax(message),
                    other => other,
                })?;
                observables.push((name.to_string(), op));
            }
            "record" => {
                let [time, name, outcome] = rest[..] else {
                    return Err(syntax("expected `record <time> <obs> <outcome>`".into()));
                };
                let time: i64 = time
                    .parse()
                    .map_err(|_| syntax(format!("invalid timestamp `{time}`")))?;
                let outcome: f64 = outcome
                    .parse()
                    .ok()
                    .filter(|v: &f64| v.is_finite())
                    .ok_or_else(|| syntax(format!("invalid outcome `{outcome}`")))?;
                let op = observables
                    .iter()
                    .find(|(n, _)| n == name)
                    .map(|(_, op)| op.clone())
                    .ok_or_else(|| syntax(format!("unknown observable `{name}`")))?;
                if records.iter().any(|r| r.time == time) {
                    return Err(Error::DuplicateTimestamp { line, time });
                }
                let record = MeasurementRecord::new(time, name, op, outcome).map_err(|e| match e {
                    Error::OutcomeNotEigenvalue {
                        observable, outcome, ..
                    } => Error::OutcomeNotEigenvalue {
                        line,
                        observable,
                        outcome,
                    },
                    other => other,
                })?;
                records.push(record);
            }
            other => return Err(syntax(format!("unknown directive `{other}`"))),
        }
    }

    let dim = dim.ok_or(Error::Syntax {
        line: text.lines().count().max(1),
        message: "missing `dim` declaration".into(),
    })?;
    World::new(dim, observables, records)
}

/// Parses `<float>`, `<float>i`, `<float>+<float>i` or `<float>-<float>i`.
pub fn parse_complex(token: &str) -> Option<Amplitude> {
    let Some(body) = token.strip_suffix('i') else {
        return token.parse().ok().map(|re| Amplitude::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re: f64 = body[..k].parse().ok()?;
            let im: f64 = body[k..].parse().ok()?;
            Some(Amplitude::new(re, im))
        }
        None => body.parse().ok().map(|im| Amplitude::new(0.0, im)),
    }
}

pub fn format_complex(z: Amplitude) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
