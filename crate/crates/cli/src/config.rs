//! Option merging: command-line flags plus an optional `KEY=VALUE` config
//! file. Flags always win; every effective value is echoed back in the
//! report for reproducibility.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hylie_core::{Error, Result};

/// Output format for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Domain(format!(
                "unknown output format `{other}` (expected json or csv)"
            ))),
        }
    }
}

/// Parses a real number, accepting plain decimals and `a/b` fractions
/// (so exponents like `4/3` stay exact to the last bit of division).
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad number `{s}`")))?;
        let den: f64 = den
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad number `{s}`")))?;
        if den == 0.0 {
            return Err(Error::Domain(format!("zero denominator in `{s}`")));
        }
        return Ok(num / den);
    }
    s.parse()
        .map_err(|_| Error::Domain(format!("bad number `{s}`")))
}

/// Comma-separated list of positive integers, e.g. `1,2,4,8`.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        out.push(
            tok.parse()
                .map_err(|_| Error::Domain(format!("bad list entry `{tok}`")))?,
        );
    }
    if out.is_empty() {
        return Err(Error::Domain(format!("empty integer list `{s}`")));
    }
    Ok(out)
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(Error::Domain(format!("bad boolean `{other}`"))),
    }
}

/// All run options before per-command defaults. Every field is optional;
/// commands apply their own defaults and validation.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub group: Option<String>,
    pub q: Option<f64>,
    pub p: Option<f64>,
    pub grid: Option<usize>,
    pub cutoff: Option<f64>,
    pub profile: Option<String>,
    pub radius: Option<f64>,
    pub k_list: Option<Vec<i64>>,
    pub n_list: Option<Vec<i64>>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub character: bool,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub terms: Option<usize>,
    pub max_coord: Option<i64>,
    pub tolerance: Option<f64>,
    pub xi_max: Option<f64>,
    pub xi_step: Option<f64>,
    pub euclid_n: Option<usize>,
}

/// Reads a `KEY=VALUE` config file. Blank lines and `#` comments are
/// ignored; keys use snake_case flag names (`k_list`, `xi_step`, ...).
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Format(format!(
                "{}:{}: expected KEY=VALUE, found `{line}`",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

impl Options {
    /// Fills any unset field from the config-file map. Unknown keys are an
    /// error so typos do not silently fall back to defaults.
    pub fn fill_from(&mut self, map: &BTreeMap<String, String>) -> Result<()> {
        for (key, value) in map {
            match key.as_str() {
                "group" => {
                    if self.group.is_none() {
                        self.group = Some(value.clone());
                    }
                }
                "q" => {
                    if self.q.is_none() {
                        self.q = Some(parse_real(value)?);
                    }
                }
                "p" => {
                    if self.p.is_none() {
                        self.p = Some(parse_real(value)?);
                    }
                }
                "grid" => {
                    if self.grid.is_none() {
                        self.grid = Some(value.parse().map_err(|_| {
                            Error::Domain(format!("bad grid size `{value}`"))
                        })?);
                    }
                }
                "cutoff" => {
                    if self.cutoff.is_none() {
                        self.cutoff = Some(parse_real(value)?);
                    }
                }
                "profile" => {
                    if self.profile.is_none() {
                        self.profile = Some(value.clone());
                    }
                }
                "radius" => {
                    if self.radius.is_none() {
                        self.radius = Some(parse_real(value)?);
                    }
                }
                "k_list" => {
                    if self.k_list.is_none() {
                        self.k_list = Some(parse_int_list(value)?);
                    }
                }
                "n_list" => {
                    if self.n_list.is_none() {
                        self.n_list = Some(parse_int_list(value)?);
                    }
                }
                "out" => {
                    if self.out.is_none() {
                        self.out = Some(PathBuf::from(value));
                    }
                }
                "format" => {
                    if self.format.is_none() {
                        self.format = Some(value.parse()?);
                    }
                }
                "character" => {
                    if !self.character {
                        self.character = parse_bool(value)?;
                    }
                }
                "trials" => {
                    if self.trials.is_none() {
                        self.trials = Some(value.parse().map_err(|_| {
                            Error::Domain(format!("bad trial count `{value}`"))
                        })?);
                    }
                }
                "seed" => {
                    if self.seed.is_none() {
                        self.seed = Some(value.parse().map_err(|_| {
                            Error::Domain(format!("bad seed `{value}`"))
                        })?);
                    }
                }
                "terms" => {
                    if self.terms.is_none() {
                        self.terms = Some(value.parse().map_err(|_| {
                            Error::Domain(format!("bad term count `{value}`"))
                        })?);
                    }
                }
                "max_coord" => {
                    if self.max_coord.is_none() {
                        self.max_coord = Some(value.parse().map_err(|_| {
                            Error::Domain(format!("bad coordinate bound `{value}`"))
                        })?);
                    }
                }
                "tolerance" => {
                    if self.tolerance.is_none() {
                        self.tolerance = Some(parse_real(value)?);
                    }
                }
                "xi_max" => {
                    if self.xi_max.is_none() {
                        self.xi_max = Some(parse_real(value)?);
                    }
                }
                "xi_step" => {
                    if self.xi_step.is_none() {
                        self.xi_step = Some(parse_real(value)?);
                    }
                }
                "euclid_n" => {
                    if self.euclid_n.is_none() {
                        self.euclid_n = Some(value.parse().map_err(|_| {
                            Error::Domain(format!("bad quadrature size `{value}`"))
                        })?);
                    }
                }
                other => {
                    return Err(Error::Domain(format!(
                        "unknown config key `{other}`"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn require_group(&self) -> Result<String> {
        self.group
            .clone()
            .ok_or_else(|| Error::Domain("missing required option `group`".into()))
    }
}

/// The CLI-level grid constraint: a power of two, at least 16.
pub fn validate_grid(n: usize) -> Result<usize> {
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::Domain(format!(
            "grid size {n} must be a power of two >= 16"
        )));
    }
    Ok(n)
}
