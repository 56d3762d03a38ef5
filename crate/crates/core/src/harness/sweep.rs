//! One-axis parameter sweeps.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use super::config::{RangeSpec, ScenarioConfig, VoidLayout};
use super::metrics::{evaluate, MetricsRow, METRICS_HEADER};
use super::scenario::Scenario;
use super::HarnessError;

type Getter = fn(&MetricsRow) -> f64;
type Setter = fn(&mut MetricsRow) -> &mut f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    RadioRange,
    /// Nodes removed by the central disc.
    VoidSize,
    /// Number of equal holes; the base config must use `holes(k, r)`.
    HoleCount,
    AlignDepth,
    ErrorFraction,
    Seed,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::RadioRange => "radio_range",
            SweepAxis::VoidSize => "void_size",
            SweepAxis::HoleCount => "hole_count",
            SweepAxis::AlignDepth => "align_depth",
            SweepAxis::ErrorFraction => "error_fraction",
            SweepAxis::Seed => "seed",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            SweepAxis::RadioRange,
            SweepAxis::VoidSize,
            SweepAxis::HoleCount,
            SweepAxis::AlignDepth,
            SweepAxis::ErrorFraction,
            SweepAxis::Seed,
        ]
        .into_iter()
        .find(|a| a.name() == s)
        .ok_or_else(|| HarnessError::Invalid(format!("unknown sweep axis `{s}`")))
    }
}

/// Outcome of one sweep point; failures do not stop the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub label: String,
    pub result: Result<MetricsRow, HarnessError>,
}

fn whole(axis: SweepAxis, v: f64) -> Result<u64, HarnessError> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(HarnessError::Invalid(format!("{axis} values must be whole numbers, got {v}")))
    }
}

/// Config for one sweep value.
pub fn apply(base: &ScenarioConfig, axis: SweepAxis, value: f64) -> Result<ScenarioConfig, HarnessError> {
    let mut cfg = base.clone();
    match axis {
        SweepAxis::RadioRange => {
            if !(value > 0.0) {
                return Err(HarnessError::Invalid(format!("radio range must be positive, got {value}")));
            }
            cfg.radio_range = RangeSpec::Absolute(value);
        }
        SweepAxis::VoidSize => cfg.voids = VoidLayout::RemoveCentral(whole(axis, value)? as usize),
        SweepAxis::HoleCount => match base.voids {
            VoidLayout::Holes { radius, .. } => {
                cfg.voids = VoidLayout::Holes {
                    count: whole(axis, value)? as usize,
                    radius,
                }
            }
            _ => return Err(HarnessError::Invalid("hole_count sweeps need `voids = holes(k, r)`".into())),
        },
        SweepAxis::AlignDepth => {
            cfg.align_depth = u32::try_from(whole(axis, value)?)
                .map_err(|_| HarnessError::Invalid(format!("depth {value} too large")))?
        }
        SweepAxis::ErrorFraction => {
            if !(0.0..=1.0).contains(&value) {
                return Err(HarnessError::Invalid(format!("error fraction must lie in [0, 1], got {value}")));
            }
            cfg.loc_error = value;
        }
        SweepAxis::Seed => cfg.seed = whole(axis, value)?,
    }
    cfg.id = format!("{}/{}={}", base.id, axis, value);
    Ok(cfg)
}

/// Evaluates `base` at every value of `axis`, in order.
///
/// Seed sweeps append a mean row and a sample standard deviation row over the
/// successful points (`pairs` holds the mean pair count and the number of
/// seeds, respectively).
pub fn sweep(base: &ScenarioConfig, axis: SweepAxis, values: &[f64]) -> Result<Vec<SweepPoint>, HarnessError> {
    if axis == SweepAxis::HoleCount && !matches!(base.voids, VoidLayout::Holes { .. }) {
        return Err(HarnessError::Invalid("hole_count sweeps need `voids = holes(k, r)`".into()));
    }
    let mut points: Vec<SweepPoint> = values
        .iter()
        .map(|&v| {
            let result = apply(base, axis, v).and_then(|cfg| evaluate(&Scenario::build(&cfg)?));
            SweepPoint {
                label: format!("{}/{}={}", base.id, axis, v),
                result,
            }
        })
        .collect();
    if axis == SweepAxis::Seed {
        let rows: Vec<&MetricsRow> = points.iter().filter_map(|p| p.result.as_ref().ok()).collect();
        if let Some(first) = rows.first() {
            let (mean, std) = summarize(first, &rows, &base.id);
            points.push(SweepPoint {
                label: mean.scenario_id.clone(),
                result: Ok(mean),
            });
            points.push(SweepPoint {
                label: std.scenario_id.clone(),
                result: Ok(std),
            });
        }
    }
    Ok(points)
}

/// Mean and sample standard deviation of the defined values.
fn moments(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let std = if v.len() < 2 {
        f64::NAN
    } else {
        (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    (mean, std)
}

fn summarize(template: &MetricsRow, rows: &[&MetricsRow], base_id: &str) -> (MetricsRow, MetricsRow) {
    let col = |f: fn(&MetricsRow) -> f64| moments(rows.iter().map(|r| f(r)));
    let mut mean = template.clone();
    let mut std = template.clone();
    mean.scenario_id = format!("{base_id}/seed=mean");
    std.scenario_id = format!("{base_id}/seed=std");
    let fields: [(Getter, Setter); 6] = [
        (|r| r.mean_degree, |r| &mut r.mean_degree),
        (|r| r.greedy_ratio, |r| &mut r.greedy_ratio),
        (|r| r.delivery_ratio, |r| &mut r.delivery_ratio),
        (|r| r.stretch_greedy, |r| &mut r.stretch_greedy),
        (|r| r.stretch_all, |r| &mut r.stretch_all),
        (|r| r.stretch_complementary, |r| &mut r.stretch_complementary),
    ];
    for (get, set) in fields {
        let (m, s) = col(get);
        *set(&mut mean) = m;
        *set(&mut std) = s;
    }
    mean.pairs = (rows.iter().map(|r| r.pairs).sum::<usize>() as f64 / rows.len() as f64).round() as usize;
    std.pairs = rows.len();
    mean.excluded_pairs = 0;
    std.excluded_pairs = 0;
    (mean, std)
}

/// CSV with the metrics header; failed points become `# <label> error: <reason>` lines.
pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{METRICS_HEADER}");
    for p in points {
        match &p.result {
            Ok(row) => {
                let _ = writeln!(out, "{}", row.to_csv());
            }
            Err(e) => {
                let _ = writeln!(out, "# {} error: {}", p.label, e);
            }
        }
    }
    out
}
