//! Run configuration: command defaults, `key=value` files and flag
//! overrides, all funnelled through [`RunConfig::set`].

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use num_complex::Complex64;
use orbit_bergman::groups::PresetName;
use orbit_bergman::moebius::parse_complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("no command given")]
    MissingCommand,
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("{0}")]
    Invalid(String),
    #[error("config file {path}: line {line}: {reason}")]
    File { path: String, line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Orbit,
    Reduce,
    Forms,
    Eval,
    Petersson,
    Dims,
    Poincare,
    Tracelike,
    Gram,
    Vndim,
    Density,
    Extremal,
    Wandering,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

/// Forms known to `forms`, `eval` and `petersson`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FormName {
    E4,
    E6,
    Delta,
    J,
    Eta,
    /// `(j - w) Δ η^r`.
    Rw,
    /// The cusp basis of weight `k`.
    Cusp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub y_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub preset: PresetName,
    pub s: Vec<f64>,
    pub z: Vec<Complex64>,
    pub budget_word: Option<usize>,
    pub budget_norm: i64,
    pub basis_n: usize,
    pub grid: Option<GridSpec>,
    pub radii: Option<Vec<f64>>,
    pub k: u32,
    pub form: FormName,
    pub w: f64,
    pub r: f64,
    pub points: Option<usize>,
    pub format: Format,
    pub seed: u64,
    pub level: Level,
    /// Destination only; it does not affect the result and is not recorded.
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

pub const KEYS: [&str; 18] = [
    "command", "preset", "s", "z", "budget_word", "budget_norm", "basis_n", "grid", "radii", "k",
    "form", "w", "r", "points", "format", "seed", "level", "out",
];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl RunConfig {
    /// Defaults for `command`.
    pub fn defaults(command: Command) -> Self {
        use Command::*;
        let s = match command {
            Vndim => vec![3.0],
            Extremal => vec![12.0, 14.0],
            Wandering => vec![1.5],
            _ => vec![2.5],
        };
        let z = match command {
            Tracelike => vec![c(0.1, 1.2), c(-0.3, 2.1)],
            Poincare => vec![c(0.21, 1.37)],
            Eval => vec![c(0.0, 1.0), c(0.1, 1.3)],
            Reduce => vec![c(0.3, 0.2)],
            _ => vec![c(0.0, 2.0)],
        };
        let (budget_norm, basis_n) = match command {
            Poincare | Tracelike => (120, 20),
            Vndim => (40, 400),
            Density => (300, 20),
            Extremal => (60, 20),
            Wandering => (40, 80),
            Forms | Dims | Petersson => (40, 50),
            _ => (40, 20),
        };
        let r = if command == Wandering { 2.0 } else { 0.1 };
        RunConfig {
            command,
            preset: PresetName::Psl2z,
            s,
            z,
            budget_word: None,
            budget_norm,
            basis_n,
            grid: None,
            radii: None,
            k: 12,
            form: FormName::Delta,
            w: 2000.0,
            r,
            points: None,
            format: Format::Json,
            seed: 7,
            level: Level::Fast,
            out: None,
        }
    }

    /// Build from a command, an optional config file and ordered overrides.
    /// Later settings win.
    pub fn from_sources(
        command: Option<Command>,
        file: Option<&Path>,
        overrides: &[(String, String)],
    ) -> Result<Self, ConfigError> {
        let file_pairs = match file {
            Some(p) => read_pairs(p)?,
            None => Vec::new(),
        };
        let from_file = file_pairs
            .iter()
            .rev()
            .find(|(k, _)| normalize_key(k) == "command")
            .map(|(_, v)| parse_enum::<Command>("command", v))
            .transpose()?;
        let command = command.or(from_file).ok_or(ConfigError::MissingCommand)?;
        let mut cfg = RunConfig::defaults(command);
        for (k, v) in file_pairs.iter().chain(overrides) {
            if normalize_key(k) != "command" {
                cfg.set(k, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = normalize_key(key);
        let v = value.trim();
        let bad = |reason: &str| ConfigError::BadValue {
            key: key.clone(),
            value: v.to_string(),
            reason: reason.to_string(),
        };
        match key.as_str() {
            "command" => self.command = parse_enum("command", v)?,
            "preset" => self.preset = PresetName::from_str(v).map_err(|e| bad(&e.to_string()))?,
            "s" => self.s = parse_list(v).map_err(|e| bad(&e))?,
            "z" => {
                self.z = list_items(v)
                    .map(|t| parse_complex(t).map_err(|e| bad(&e.to_string())))
                    .collect::<Result<_, _>>()?
            }
            "budget_word" => {
                self.budget_word = if v == "none" { None } else { Some(parse_num(v).map_err(|e| bad(&e))?) }
            }
            "budget_norm" => self.budget_norm = parse_num(v).map_err(|e| bad(&e))?,
            "basis_n" => self.basis_n = parse_num(v).map_err(|e| bad(&e))?,
            "grid" => {
                let parts: Vec<&str> = list_items(v).collect();
                if parts.len() != 3 {
                    return Err(bad("expected nx,ny,y_max"));
                }
                self.grid = Some(GridSpec {
                    nx: parse_num(parts[0]).map_err(|e| bad(&e))?,
                    ny: parse_num(parts[1]).map_err(|e| bad(&e))?,
                    y_max: parse_num(parts[2]).map_err(|e| bad(&e))?,
                });
            }
            "radii" => self.radii = Some(parse_list(v).map_err(|e| bad(&e))?),
            "k" => self.k = parse_num(v).map_err(|e| bad(&e))?,
            "form" => self.form = parse_enum("form", v)?,
            "w" => self.w = parse_num(v).map_err(|e| bad(&e))?,
            "r" => self.r = parse_num(v).map_err(|e| bad(&e))?,
            "points" => self.points = Some(parse_num(v).map_err(|e| bad(&e))?),
            "format" => self.format = parse_enum("format", v)?,
            "seed" => self.seed = parse_num(v).map_err(|e| bad(&e))?,
            "level" => self.level = parse_enum("level", v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            _ => return Err(ConfigError::UnknownKey(key)),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        if self.s.is_empty() {
            return invalid("s must list at least one weight".into());
        }
        if let Some(s) = self.s.iter().find(|s| !(s.is_finite() && **s > 1.0)) {
            return invalid(format!("weight s = {s} must exceed 1"));
        }
        if self.budget_norm < 1 {
            return invalid(format!("budget_norm = {} must be at least 1", self.budget_norm));
        }
        if let Some(z) = self.z.iter().find(|z| !(z.im > 0.0 && z.re.is_finite() && z.im.is_finite())) {
            return invalid(format!("z = {z} is not in the upper half-plane"));
        }
        if let Some(g) = &self.grid
            && (g.nx == 0 || g.ny == 0 || !(g.y_max > 1.0))
        {
            return invalid("grid needs nx, ny >= 1 and y_max > 1".into());
        }
        if let Some(r) = &self.radii
            && (r.iter().any(|x| !(*x > 0.0 && *x < 1.0)) || r.windows(2).any(|w| w[1] <= w[0]))
        {
            return invalid("radii must increase strictly inside (0, 1)".into());
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return invalid(format!("exponent r = {} must be positive", self.r));
        }
        if !self.w.is_finite() {
            return invalid("w must be finite".into());
        }
        if self.points == Some(0) {
            return invalid("points must be at least 1".into());
        }
        Ok(())
    }

    /// The effective `key=value` lines for this configuration.
    pub fn to_pairs(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        let mut push = |k: &str, v: String| out.push_str(&format!("{k}={v}\n"));
        push("command", enum_name(&self.command));
        push("preset", enum_name(&self.preset));
        push("s", list(&self.s));
        push(
            "z",
            self.z.iter().map(|z| orbit_bergman::moebius::format_complex(*z)).collect::<Vec<_>>().join(","),
        );
        push("budget_word", self.budget_word.map_or("none".into(), |b| b.to_string()));
        push("budget_norm", self.budget_norm.to_string());
        push("basis_n", self.basis_n.to_string());
        if let Some(g) = &self.grid {
            push("grid", format!("{},{},{:?}", g.nx, g.ny, g.y_max));
        }
        if let Some(r) = &self.radii {
            push("radii", list(r));
        }
        push("k", self.k.to_string());
        push("form", enum_name(&self.form));
        push("w", format!("{:?}", self.w));
        push("r", format!("{:?}", self.r));
        if let Some(p) = self.points {
            push("points", p.to_string());
        }
        push("format", enum_name(&self.format));
        push("seed", self.seed.to_string());
        push("level", enum_name(&self.level));
        out
    }
}

fn enum_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

fn normalize_key(k: &str) -> String {
    k.trim().trim_start_matches("--").replace('-', "_").to_ascii_lowercase()
}

fn list_items(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|t| !t.is_empty())
}

fn parse_num<T: FromStr>(v: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    v.trim().parse::<T>().map_err(|e| e.to_string())
}

fn parse_list(v: &str) -> Result<Vec<f64>, String> {
    list_items(v).map(parse_num).collect()
}

fn parse_enum<T: ValueEnum>(key: &str, v: &str) -> Result<T, ConfigError> {
    T::from_str(v.trim(), true).map_err(|reason| ConfigError::BadValue {
        key: key.to_string(),
        value: v.to_string(),
        reason,
    })
}

/// `key=value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str, path: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::File {
                path: path.to_string(),
                line: i + 1,
                reason: "expected key=value".into(),
            });
        };
        let key = normalize_key(k);
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::File {
                path: path.to_string(),
                line: i + 1,
                reason: format!("unknown key `{key}`"),
            });
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn read_pairs(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::File {
        path: path.display().to_string(),
        line: 0,
        reason: e.to_string(),
    })?;
    parse_pairs(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_win_over_the_file_and_defaults() {
        let pairs = parse_pairs("# comment\ns = 3, 4\nbudget-norm=12\n", "mem").unwrap();
        let mut cfg = RunConfig::defaults(Command::Vndim);
        for (k, v) in &pairs {
            cfg.set(k, v).unwrap();
        }
        cfg.set("--budget-norm", "30").unwrap();
        assert_eq!(cfg.s, vec![3.0, 4.0]);
        assert_eq!(cfg.budget_norm, 30);
        cfg.validate().unwrap();
    }

    #[test]
    fn effective_pairs_reproduce_the_config() {
        let mut cfg = RunConfig::defaults(Command::Eval);
        cfg.set("grid", "9,161,2000").unwrap();
        cfg.set("z", "0.25+1.5i, 2i").unwrap();
        let mut again = RunConfig::defaults(Command::Eval);
        for (k, v) in parse_pairs(&cfg.to_pairs(), "mem").unwrap() {
            again.set(&k, &v).unwrap();
        }
        assert_eq!(again, cfg);
    }

    #[test]
    fn rejects_bad_input() {
        let mut cfg = RunConfig::defaults(Command::Vndim);
        cfg.set("s", "0.5").unwrap();
        assert!(matches!(cfg.validate(), Err(ConfigError::Invalid(_))));
        assert!(matches!(cfg.set("colour", "red"), Err(ConfigError::UnknownKey(_))));
        assert!(cfg.set("z", "1+").is_err());
        assert!(parse_pairs("nonsense", "mem").is_err());
        assert!(matches!(
            RunConfig::from_sources(None, None, &[]),
            Err(ConfigError::MissingCommand)
        ));
    }
}
