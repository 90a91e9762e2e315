//! `(beta, chi)` grid sweeps: configuration from flags and/or a JSON file,
//! evaluation, and CSV/JSON serialization.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use relbell::optimizer::{angles_to_settings, maximize_mermin};
use relbell::{pipeline_epsilon, BellSettings, ScenarioKind, ScenarioResult, ScenarioSpec};
use serde::{Deserialize, Serialize};

use crate::format::sig15;
use crate::Failure;

pub const CSV_HEADER: [&str; 7] = [
    "kind",
    "beta",
    "chi",
    "delta",
    "epsilon_pipeline",
    "epsilon_closed",
    "abs_error",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridRange {
    /// `steps` evenly spaced points from `start` to `stop` inclusive.
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.start + span * (i as f64 / last))
            .collect()
    }
}

impl FromStr for GridRange {
    type Err = String;

    /// `start:stop:steps`, or a single value for a one-point range.
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
        match parts.as_slice() {
            [v] => Ok(Self {
                start: num(v)?,
                stop: num(v)?,
                steps: 1,
            }),
            [a, b, n] => Ok(Self {
                start: num(a)?,
                stop: num(b)?,
                steps: n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?,
            }),
            _ => Err(format!(
                "expected START:STOP:STEPS or a single value, got {s:?}"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SettingsSource {
    /// Fixed rest-frame optimal directions.
    #[value(alias = "eq22")]
    #[serde(alias = "eq22")]
    Standard,
    /// Directions maximized per grid point.
    Optimized,
    /// Directions given as polar/azimuthal angle pairs.
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Sweep options as read from a JSON file or from flags; every field may be
/// missing, and flags override the file field by field.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialSweepConfig {
    pub kind: Option<String>,
    pub beta: Option<GridRange>,
    pub chi: Option<GridRange>,
    pub settings: Option<SettingsSource>,
    pub angles: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl PartialSweepConfig {
    pub fn overridden_by(self, flags: PartialSweepConfig) -> Self {
        Self {
            kind: flags.kind.or(self.kind),
            beta: flags.beta.or(self.beta),
            chi: flags.chi.or(self.chi),
            settings: flags.settings.or(self.settings),
            angles: flags.angles.or(self.angles),
            seed: flags.seed.or(self.seed),
            restarts: flags.restarts.or(self.restarts),
            output: flags.output.or(self.output),
            format: flags.format.or(self.format),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    #[serde(serialize_with = "kind_as_str")]
    pub kind: ScenarioKind,
    pub beta: GridRange,
    pub chi: GridRange,
    pub settings: SettingsSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angles: Option<Vec<f64>>,
    pub seed: u64,
    pub restarts: usize,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

fn kind_as_str<S: serde::Serializer>(k: &ScenarioKind, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(k.as_str())
}

pub const DEFAULT_BETA: GridRange = GridRange {
    start: 0.0,
    stop: 0.99,
    steps: 5,
};
pub const DEFAULT_CHI: GridRange = GridRange {
    start: 0.5,
    stop: 5.0,
    steps: 4,
};
pub const DEFAULT_RESTARTS: usize = 16;

impl SweepConfig {
    pub fn resolve(p: PartialSweepConfig) -> Result<Self, Failure> {
        let kind: ScenarioKind = p
            .kind
            .as_deref()
            .ok_or_else(|| Failure::usage("sweep needs a scenario kind (flag or config `kind`)"))?
            .parse()
            .map_err(|e: relbell::Error| Failure::usage(e.to_string()))?;
        let beta = p.beta.unwrap_or(DEFAULT_BETA);
        let chi = p.chi.unwrap_or(DEFAULT_CHI);
        check_range("beta", &beta, |v| (0.0..1.0).contains(&v))?;
        check_range("chi", &chi, |v| v >= 0.0)?;
        let settings = p.settings.unwrap_or(SettingsSource::Standard);
        let restarts = p.restarts.unwrap_or(DEFAULT_RESTARTS);
        if settings == SettingsSource::Explicit {
            let want = 2 * BellSettings::<f64>::standard(kind).n_directions();
            match &p.angles {
                Some(a) if a.len() == want && a.iter().all(|x| x.is_finite()) => {}
                Some(a) => {
                    return Err(Failure::usage(format!(
                        "{kind} needs {want} finite angles (theta, phi per direction), got {}",
                        a.len()
                    )))
                }
                None => return Err(Failure::usage("explicit settings need --angles")),
            }
        } else if p.angles.is_some() {
            return Err(Failure::usage("--angles only applies to explicit settings"));
        }
        Ok(Self {
            kind,
            beta,
            chi,
            settings,
            angles: p.angles,
            seed: p.seed.unwrap_or(0),
            restarts,
            output: p.output,
            format: p.format.unwrap_or(OutputFormat::Csv),
        })
    }
}

fn check_range(name: &str, r: &GridRange, ok: impl Fn(f64) -> bool) -> Result<(), Failure> {
    if r.steps == 0 {
        return Err(Failure::usage(format!(
            "{name} range needs at least one step"
        )));
    }
    if !(ok(r.start) && ok(r.stop)) || !r.start.is_finite() || !r.stop.is_finite() {
        return Err(Failure::usage(format!(
            "{name} range {}..{} is outside the allowed domain",
            r.start, r.stop
        )));
    }
    Ok(())
}

/// Evaluates the grid; rows come back ordered by `(beta index, chi index)`.
pub fn run(cfg: &SweepConfig) -> Result<Vec<ScenarioResult<f64>>, Failure> {
    let betas = cfg.beta.points();
    let chis = cfg.chi.points();
    let grid: Vec<(f64, f64)> = betas
        .iter()
        .flat_map(|&b| chis.iter().map(move |&c| (b, c)))
        .collect();
    let standard = BellSettings::standard(cfg.kind);
    grid.par_iter()
        .map(|&(beta, chi)| {
            let spec = ScenarioSpec::new(cfg.kind, beta, chi)?;
            let settings = match cfg.settings {
                SettingsSource::Standard => standard,
                SettingsSource::Explicit => {
                    angles_to_settings(&standard, cfg.angles.as_deref().unwrap_or_default())
                }
                SettingsSource::Optimized => {
                    maximize_mermin(&spec, cfg.seed, cfg.restarts)?.best_settings
                }
            };
            pipeline_epsilon(&spec, &settings)
        })
        .collect::<relbell::Result<Vec<_>>>()
        .map_err(|e| Failure::usage(e.to_string()))
}

#[derive(Serialize)]
struct JsonRow {
    kind: &'static str,
    beta: serde_json::Value,
    chi: serde_json::Value,
    delta: serde_json::Value,
    epsilon_pipeline: serde_json::Value,
    epsilon_closed: serde_json::Value,
    abs_error: serde_json::Value,
}

/// A JSON number carrying the same 15 significant digits as the CSV.
pub fn json_number(x: f64) -> serde_json::Value {
    sig15(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

fn row_fields(r: &ScenarioResult<f64>) -> [f64; 6] {
    [
        r.beta,
        r.chi,
        r.delta,
        r.epsilon_pipeline,
        r.epsilon_closed,
        r.abs_error,
    ]
}

pub fn write_csv<W: Write>(out: W, rows: &[ScenarioResult<f64>]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let mut rec = vec![r.kind.as_str().to_string()];
        rec.extend(row_fields(r).iter().map(|&x| sig15(x)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_json(cfg: &SweepConfig, rows: &[ScenarioResult<f64>]) -> serde_json::Value {
    let rows: Vec<JsonRow> = rows
        .iter()
        .map(|r| {
            let [beta, chi, delta, ep, ec, err] = row_fields(r).map(json_number);
            JsonRow {
                kind: r.kind.as_str(),
                beta,
                chi,
                delta,
                epsilon_pipeline: ep,
                epsilon_closed: ec,
                abs_error: err,
            }
        })
        .collect();
    serde_json::json!({
        "meta": {
            "version": env!("CARGO_PKG_VERSION"),
            "seed": cfg.seed,
            "config": cfg,
        },
        "rows": rows,
    })
}

impl fmt::Display for SettingsSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Standard => "standard",
            Self::Optimized => "optimized",
            Self::Explicit => "explicit",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r: GridRange = "0:0.9:4".parse().unwrap();
        assert_eq!(r.points(), vec![0.0, 0.3, 0.6, 0.9]);
        let one: GridRange = "0.5".parse().unwrap();
        assert_eq!(one.points(), vec![0.5]);
        assert!("0:1".parse::<GridRange>().is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = PartialSweepConfig {
            kind: Some("case1".into()),
            seed: Some(3),
            ..Default::default()
        };
        let flags = PartialSweepConfig {
            seed: Some(9),
            ..Default::default()
        };
        let merged = file.overridden_by(flags);
        assert_eq!(merged.kind.as_deref(), Some("case1"));
        assert_eq!(merged.seed, Some(9));
    }

    #[test]
    fn resolve_rejects_bad_ranges() {
        let p = |beta: &str| PartialSweepConfig {
            kind: Some("case1".into()),
            beta: Some(beta.parse().unwrap()),
            ..Default::default()
        };
        assert!(SweepConfig::resolve(p("0:0.9:3")).is_ok());
        assert!(SweepConfig::resolve(p("0:1:3")).is_err());
        assert!(SweepConfig::resolve(p("0:0.5:0")).is_err());
    }
}
