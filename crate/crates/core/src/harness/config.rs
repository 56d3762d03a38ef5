//! Flat `key = value` scenario descriptions.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coords::AlignRule;
use crate::distance::{DistanceFunction, DEFAULT_SEMI_WEIGHT};
use crate::geom::Point;
use crate::routing::Protocol;
use crate::topology::{NodeId, VoidSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {reason}")]
pub struct ConfigError {
    pub line: usize,
    pub reason: String,
}

impl ConfigError {
    fn new(line: usize, reason: impl Into<String>) -> Self {
        Self {
            line,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeploymentSpec {
    Grid { rows: usize, cols: usize, spacing: f64 },
    Random { n: usize, width: f64, height: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RangeSpec {
    Absolute(f64),
    /// Smallest range reaching this mean degree on the carved deployment.
    MeanDegree(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum VoidLayout {
    Regions(Vec<VoidSpec<f64>>),
    /// Disc around the node nearest the deployment centre sized to remove exactly this many nodes.
    RemoveCentral(usize),
    /// `count` equal discs: a quincunx for five, otherwise the first `count` cells of a square grid.
    Holes { count: usize, radius: f64 },
}

impl VoidLayout {
    pub fn none() -> Self {
        VoidLayout::Regions(Vec::new())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnchorSpec {
    Corners,
    Explicit(Vec<NodeId>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Label written to the first CSV column; not a config key.
    pub id: String,
    pub deployment: DeploymentSpec,
    pub radio_range: RangeSpec,
    pub voids: VoidLayout,
    pub anchors: AnchorSpec,
    pub dims: usize,
    pub align_rule: AlignRule,
    pub align_depth: u32,
    /// `None` picks the protocol's default: semi-Manhattan for bvr, Euclidean otherwise.
    pub distance: Option<DistanceFunction<f64>>,
    pub semi_weight: f64,
    pub protocol: Protocol,
    pub loc_error: f64,
    pub seed: u64,
    pub ttl_factor: usize,
    /// Ordered pairs to sample; 0 evaluates every pair.
    pub sample: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            id: "scenario".to_string(),
            deployment: DeploymentSpec::Grid {
                rows: 20,
                cols: 20,
                spacing: 1.0,
            },
            radio_range: RangeSpec::Absolute(1.0),
            voids: VoidLayout::none(),
            anchors: AnchorSpec::Corners,
            dims: 4,
            align_rule: AlignRule::UniformAverage,
            align_depth: 1,
            distance: None,
            semi_weight: DEFAULT_SEMI_WEIGHT,
            protocol: Protocol::GreedyAvcs,
            loc_error: 0.0,
            seed: 1,
            ttl_factor: 4,
            sample: 0,
        }
    }
}

impl ScenarioConfig {
    /// Distance function after defaults and the semi-Manhattan weight are applied.
    pub fn distance_function(&self) -> DistanceFunction<f64> {
        let f = self.distance.unwrap_or(match self.protocol {
            Protocol::Bvr => DistanceFunction::semi(self.semi_weight),
            _ => DistanceFunction::Euclidean,
        });
        match f {
            DistanceFunction::SemiManhattan { .. } => DistanceFunction::semi(self.semi_weight),
            other => other,
        }
    }

    /// Alignment depth actually used: raw coordinates for `gf-vcs`.
    pub fn effective_depth(&self) -> u32 {
        match self.protocol {
            Protocol::GreedyVcs => 0,
            _ => self.align_depth,
        }
    }
}

fn parse_num<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::new(line, format!("invalid value `{value}` for `{key}`")))
}

fn positive(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = parse_num(line, key, value)?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(ConfigError::new(line, format!("`{key}` must be positive, got {value}")));
    }
    Ok(v)
}

fn positive_int(line: usize, key: &str, value: &str) -> Result<usize, ConfigError> {
    let v: usize = parse_num(line, key, value)?;
    if v == 0 {
        return Err(ConfigError::new(line, format!("`{key}` must be at least 1")));
    }
    Ok(v)
}

/// Splits `name(a,b,...)` into the name and its numeric arguments.
fn call(line: usize, text: &str) -> Result<(String, Vec<f64>), ConfigError> {
    let bad = || ConfigError::new(line, format!("malformed void `{text}`"));
    let open = text.find('(').ok_or_else(bad)?;
    let inner = text[open + 1..].strip_suffix(')').ok_or_else(bad)?;
    let args = inner
        .split(',')
        .map(|a| a.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    if args.iter().any(|a| !a.is_finite()) {
        return Err(bad());
    }
    Ok((text[..open].trim().to_string(), args))
}

fn parse_voids(line: usize, value: &str) -> Result<VoidLayout, ConfigError> {
    if value == "none" {
        return Ok(VoidLayout::none());
    }
    let mut regions = Vec::new();
    let items: Vec<&str> = value.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
    for item in &items {
        let (name, args) = call(line, item)?;
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(ConfigError::new(line, format!("`{name}` takes {n} arguments")))
            }
        };
        let whole = |x: f64| -> Result<usize, ConfigError> {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(ConfigError::new(line, format!("`{name}` needs a whole-number count")))
            }
        };
        match name.as_str() {
            "disc" => {
                arity(3)?;
                if args[2] <= 0.0 {
                    return Err(ConfigError::new(line, "disc radius must be positive"));
                }
                regions.push(VoidSpec::Disc {
                    center: Point::new(args[0], args[1]),
                    radius: args[2],
                });
            }
            "rect" => {
                arity(4)?;
                if args[2] <= 0.0 || args[3] <= 0.0 {
                    return Err(ConfigError::new(line, "rect half-extents must be positive"));
                }
                regions.push(VoidSpec::Rect {
                    center: Point::new(args[0], args[1]),
                    half_width: args[2],
                    half_height: args[3],
                });
            }
            "remove" | "holes" if items.len() > 1 => {
                return Err(ConfigError::new(line, format!("`{name}` cannot be combined with other voids")));
            }
            "remove" => {
                arity(1)?;
                return Ok(VoidLayout::RemoveCentral(whole(args[0])?));
            }
            "holes" => {
                arity(2)?;
                if args[1] <= 0.0 {
                    return Err(ConfigError::new(line, "hole radius must be positive"));
                }
                return Ok(VoidLayout::Holes {
                    count: whole(args[0])?,
                    radius: args[1],
                });
            }
            other => return Err(ConfigError::new(line, format!("unknown void kind `{other}`"))),
        }
    }
    Ok(VoidLayout::Regions(regions))
}

const KEYS: [&str; 20] = [
    "deployment",
    "rows",
    "cols",
    "spacing",
    "n",
    "width",
    "height",
    "radio_range",
    "voids",
    "anchors",
    "dims",
    "align_rule",
    "align_depth",
    "distance",
    "semi_weight",
    "protocol",
    "loc_error",
    "seed",
    "ttl_factor",
    "sample",
];

/// Parses a config file. Blank lines and `#` comments are ignored; every key may appear once.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut seen: Vec<(&str, usize, &str)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::new(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let Some(&key) = KEYS.iter().find(|&&k| k == key) else {
            return Err(ConfigError::new(line, format!("unknown key `{key}`")));
        };
        if let Some(&(_, first, _)) = seen.iter().find(|(k, _, _)| *k == key) {
            return Err(ConfigError::new(line, format!("duplicate key `{key}` (first set on line {first})")));
        }
        if value.is_empty() {
            return Err(ConfigError::new(line, format!("missing value for `{key}`")));
        }
        seen.push((key, line, value));
    }
    let get = |key: &str| seen.iter().find(|(k, _, _)| *k == key).map(|&(_, l, v)| (l, v));

    let mut cfg = ScenarioConfig::default();
    let random = match get("deployment") {
        None | Some((_, "grid")) => false,
        Some((_, "random")) => true,
        Some((line, other)) => {
            return Err(ConfigError::new(line, format!("unknown deployment `{other}` (expected grid or random)")))
        }
    };
    let (grid_keys, random_keys) = (["rows", "cols", "spacing"], ["n", "width", "height"]);
    let foreign = if random { grid_keys } else { random_keys };
    for key in foreign {
        if let Some((line, _)) = get(key) {
            let kind = if random { "random" } else { "grid" };
            return Err(ConfigError::new(line, format!("`{key}` does not apply to {kind} deployments")));
        }
    }
    if random {
        let n = get("n").map(|(l, v)| positive_int(l, "n", v)).transpose()?.unwrap_or(400);
        let width = get("width").map(|(l, v)| positive(l, "width", v)).transpose()?.unwrap_or(20.0);
        let height = get("height").map(|(l, v)| positive(l, "height", v)).transpose()?.unwrap_or(20.0);
        cfg.deployment = DeploymentSpec::Random { n, width, height };
    } else {
        let rows = get("rows").map(|(l, v)| positive_int(l, "rows", v)).transpose()?.unwrap_or(20);
        let cols = get("cols").map(|(l, v)| positive_int(l, "cols", v)).transpose()?.unwrap_or(20);
        let spacing = get("spacing").map(|(l, v)| positive(l, "spacing", v)).transpose()?.unwrap_or(1.0);
        cfg.deployment = DeploymentSpec::Grid { rows, cols, spacing };
    }

    if let Some((line, value)) = get("radio_range") {
        cfg.radio_range = match value.strip_prefix("degree:") {
            Some(target) => RangeSpec::MeanDegree(positive(line, "radio_range", target.trim())?),
            None => RangeSpec::Absolute(positive(line, "radio_range", value)?),
        };
    }
    if let Some((line, value)) = get("voids") {
        cfg.voids = parse_voids(line, value)?;
    }
    if let Some((line, value)) = get("dims") {
        cfg.dims = parse_num(line, "dims", value)?;
    }
    if let Some((line, value)) = get("anchors") {
        if value != "corners" {
            let ids = value
                .split(',')
                .map(|s| parse_num::<NodeId>(line, "anchors", s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            if get("dims").is_some() && ids.len() != cfg.dims {
                return Err(ConfigError::new(
                    line,
                    format!("{} anchors listed but dims = {}", ids.len(), cfg.dims),
                ));
            }
            cfg.dims = ids.len();
            cfg.anchors = AnchorSpec::Explicit(ids);
        }
    }
    match cfg.anchors {
        AnchorSpec::Corners if !(3..=4).contains(&cfg.dims) => {
            let line = get("dims").map_or(0, |(l, _)| l);
            return Err(ConfigError::new(line, "corner anchors support 3 or 4 dimensions"));
        }
        AnchorSpec::Explicit(ref ids) => {
            let line = get("anchors").map_or(0, |(l, _)| l);
            if ids.len() < 3 {
                return Err(ConfigError::new(line, "at least 3 anchors are required"));
            }
            if let Some(dup) = ids.iter().enumerate().find(|(i, id)| ids[..*i].contains(id)) {
                return Err(ConfigError::new(line, format!("anchor {} listed twice", dup.1)));
            }
        }
        _ => {}
    }
    if let Some((line, value)) = get("align_rule") {
        cfg.align_rule = value.parse().map_err(|e| ConfigError::new(line, format!("{e}")))?;
    }
    if let Some((line, value)) = get("align_depth") {
        cfg.align_depth = parse_num(line, "align_depth", value)?;
    }
    if let Some((line, value)) = get("distance") {
        cfg.distance = Some(value.parse().map_err(|e| ConfigError::new(line, format!("{e}")))?);
    }
    if let Some((line, value)) = get("semi_weight") {
        cfg.semi_weight = positive(line, "semi_weight", value)?;
    }
    if let Some((line, value)) = get("protocol") {
        cfg.protocol = value.parse().map_err(|e| ConfigError::new(line, format!("{e}")))?;
    }
    if let Some((line, value)) = get("loc_error") {
        let e: f64 = parse_num(line, "loc_error", value)?;
        if !(0.0..=1.0).contains(&e) {
            return Err(ConfigError::new(line, "`loc_error` must lie in [0, 1]"));
        }
        cfg.loc_error = e;
    }
    if let Some((line, value)) = get("seed") {
        cfg.seed = parse_num(line, "seed", value)?;
    }
    if let Some((line, value)) = get("ttl_factor") {
        cfg.ttl_factor = positive_int(line, "ttl_factor", value)?;
    }
    if let Some((line, value)) = get("sample") {
        cfg.sample = parse_num(line, "sample", value)?;
    }
    Ok(cfg)
}

fn fmt_voids(v: &VoidLayout) -> String {
    match v {
        VoidLayout::Regions(r) if r.is_empty() => "none".to_string(),
        VoidLayout::Regions(r) => r
            .iter()
            .map(|v| match *v {
                VoidSpec::Disc { center, radius } => format!("disc({},{},{})", center.x, center.y, radius),
                VoidSpec::Rect {
                    center,
                    half_width,
                    half_height,
                } => format!("rect({},{},{},{})", center.x, center.y, half_width, half_height),
            })
            .collect::<Vec<_>>()
            .join(";"),
        VoidLayout::RemoveCentral(k) => format!("remove({k})"),
        VoidLayout::Holes { count, radius } => format!("holes({count},{radius})"),
    }
}

/// Renders the config back to the file format; [`parse_config`] reads it back unchanged
/// (except for `id`, which is not a key).
impl fmt::Display for ScenarioConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.deployment {
            DeploymentSpec::Grid { rows, cols, spacing } => {
                writeln!(f, "deployment = grid")?;
                writeln!(f, "rows = {rows}")?;
                writeln!(f, "cols = {cols}")?;
                writeln!(f, "spacing = {spacing}")?;
            }
            DeploymentSpec::Random { n, width, height } => {
                writeln!(f, "deployment = random")?;
                writeln!(f, "n = {n}")?;
                writeln!(f, "width = {width}")?;
                writeln!(f, "height = {height}")?;
            }
        }
        match self.radio_range {
            RangeSpec::Absolute(r) => writeln!(f, "radio_range = {r}")?,
            RangeSpec::MeanDegree(d) => writeln!(f, "radio_range = degree:{d}")?,
        }
        writeln!(f, "voids = {}", fmt_voids(&self.voids))?;
        match &self.anchors {
            AnchorSpec::Corners => writeln!(f, "anchors = corners")?,
            AnchorSpec::Explicit(ids) => {
                let list: Vec<String> = ids.iter().map(ToString::to_string).collect();
                writeln!(f, "anchors = {}", list.join(","))?;
            }
        }
        writeln!(f, "dims = {}", self.dims)?;
        writeln!(f, "align_rule = {}", self.align_rule)?;
        writeln!(f, "align_depth = {}", self.align_depth)?;
        if let Some(d) = self.distance {
            writeln!(f, "distance = {d}")?;
        }
        writeln!(f, "semi_weight = {}", self.semi_weight)?;
        writeln!(f, "protocol = {}", self.protocol)?;
        writeln!(f, "loc_error = {}", self.loc_error)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "ttl_factor = {}", self.ttl_factor)?;
        writeln!(f, "sample = {}", self.sample)
    }
}
