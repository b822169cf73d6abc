use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    BurgersLifespan,
    BurgersSim,
    EulerSim,
    Functionals,
    Criterion,
    Sweep,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::BurgersLifespan,
        Mode::BurgersSim,
        Mode::EulerSim,
        Mode::Functionals,
        Mode::Criterion,
        Mode::Sweep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::BurgersLifespan => "burgers-lifespan",
            Mode::BurgersSim => "burgers-sim",
            Mode::EulerSim => "euler-sim",
            Mode::Functionals => "functionals",
            Mode::Criterion => "criterion",
            Mode::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Mode::ALL.iter().map(|m| m.as_str()).collect();
                Error::config("mode", format!("unknown mode '{s}', expected one of {}", names.join(", ")))
            })
    }
}

/// Every accepted key with its default, `""` meaning unset.
const KEYS: &[(&str, &str)] = &[
    ("mode", ""),
    ("gas.gamma", "1.4"),
    ("gas.rho_bar", "1.0"),
    ("damping.mu", "1.0"),
    ("damping.lambda", "1.0"),
    ("profile.kind", "bump"),
    ("profile.epsilon", "0.1"),
    ("profile.M", "1.0"),
    ("profile.M0", "0.25"),
    ("profile.path", ""),
    ("grid.r_max", "20.0"),
    ("grid.n_cells", "400"),
    ("grid.x_lo", ""),
    ("grid.x_hi", ""),
    ("run.t_end", "10.0"),
    ("run.cfl", "0.4"),
    ("run.monitor_cadence", "0.5"),
    ("run.scheme", "first-order"),
    ("run.breakdown", "gradient-multiple"),
    ("run.breakdown_value", ""),
    ("run.scan_points", "100000"),
    ("sweep.lambda", ""),
    ("sweep.mu", ""),
    ("sweep.epsilon", ""),
    ("sweep.target", "burgers-lifespan"),
    ("criterion.H0", ""),
    ("criterion.L0", ""),
    ("criterion.T_star", ""),
    ("input.snapshots", ""),
    ("output.dir", "critdamp-out"),
];

pub fn known_keys() -> impl Iterator<Item = &'static str> {
    KEYS.iter().map(|(k, _)| *k)
}

fn unknown_key(key: &str) -> Error {
    let suggestion = known_keys()
        .map(|k| (strsim::levenshtein(key, k), k))
        .filter(|(d, _)| *d <= 3)
        .min()
        .map(|(_, k)| k.to_string());
    Error::UnknownKey {
        key: key.to_string(),
        suggestion,
    }
}

/// Raw `key = value` assignments, validated against the known keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigMap {
    values: BTreeMap<String, String>,
}

impl ConfigMap {
    /// Parses the line format: `key = value`, `#` starts a comment, blank
    /// lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = ConfigMap::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected 'key = value', got '{line}'"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("invalid key '{key}'"),
                });
            }
            map.set(key, value)?;
        }
        Ok(map)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !known_keys().any(|k| k == key) {
            return Err(unknown_key(key));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Applies `--key value` pairs over the current values.
    pub fn apply_flags<S: AsRef<str>>(&mut self, args: &[S]) -> Result<()> {
        let mut it = args.iter().map(AsRef::as_ref);
        while let Some(flag) = it.next() {
            let Some(key) = flag.strip_prefix("--") else {
                return Err(Error::config(flag, "expected a flag of the form --key value"));
            };
            let (key, value) = match key.split_once('=') {
                Some((k, v)) => (k, v.to_string()),
                None => {
                    let v = it
                        .next()
                        .ok_or_else(|| Error::config(key, "flag is missing its value"))?;
                    (key, v.to_string())
                }
            };
            self.set(key, &value)?;
        }
        Ok(())
    }

    fn raw(&self, key: &str) -> Option<&str> {
        let v = match self.values.get(key) {
            Some(v) => v.as_str(),
            None => KEYS.iter().find(|(k, _)| *k == key).map(|(_, d)| *d)?,
        };
        (!v.is_empty()).then_some(v)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let v = self
            .raw(key)
            .ok_or_else(|| Error::config(key, "value required"))?;
        v.parse()
            .map_err(|_| Error::config(key, format!("cannot parse '{v}' as {}", std::any::type_name::<T>())))
    }

    fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(_) => self.get(key).map(Some),
        }
    }

    fn list(&self, key: &str) -> Result<Vec<f64>> {
        let Some(v) = self.raw(key) else {
            return Ok(Vec::new());
        };
        v.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::config(key, format!("cannot parse '{}' as a number", s.trim())))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Bump,
    Shell,
    OutgoingShell,
    Ramp,
    File,
}

impl FromStr for ProfileKind {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        Ok(match s {
            "bump" => ProfileKind::Bump,
            "shell" => ProfileKind::Shell,
            "outgoing-shell" => ProfileKind::OutgoingShell,
            "ramp" => ProfileKind::Ramp,
            "file" => ProfileKind::File,
            _ => return Err(()),
        })
    }
}

impl ProfileKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProfileKind::Bump => "bump",
            ProfileKind::Shell => "shell",
            ProfileKind::OutgoingShell => "outgoing-shell",
            ProfileKind::Ramp => "ramp",
            ProfileKind::File => "file",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeName {
    FirstOrder,
    Muscl,
}

impl FromStr for SchemeName {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "first-order" => Ok(SchemeName::FirstOrder),
            "muscl" => Ok(SchemeName::Muscl),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakdownName {
    GradientMultiple,
    UnresolvedJump,
}

impl FromStr for BreakdownName {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "gradient-multiple" => Ok(BreakdownName::GradientMultiple),
            "unresolved-jump" => Ok(BreakdownName::UnresolvedJump),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub gamma: f64,
    pub rho_bar: f64,
    pub mu: f64,
    pub lambda: f64,
    pub profile: ProfileKind,
    pub epsilon: f64,
    pub m: f64,
    pub m0: f64,
    pub profile_path: Option<PathBuf>,
    pub r_max: f64,
    pub n_cells: usize,
    pub x_range: Option<(f64, f64)>,
    pub t_end: f64,
    pub cfl: f64,
    pub monitor_cadence: f64,
    pub scheme: SchemeName,
    pub breakdown: BreakdownName,
    /// Threshold of the breakdown rule; the rule's default when unset.
    pub breakdown_value: Option<f64>,
    pub scan_points: usize,
    pub sweep_lambda: Vec<f64>,
    pub sweep_mu: Vec<f64>,
    pub sweep_epsilon: Vec<f64>,
    pub sweep_target: Mode,
    pub criterion_h0: Option<f64>,
    pub criterion_l0: Option<f64>,
    pub criterion_t_star: Option<f64>,
    pub input_snapshots: Option<PathBuf>,
    pub output_dir: PathBuf,
    /// Resolved `key = value` pairs, echoed into `verdict.txt`.
    pub echo: Vec<(String, String)>,
}

fn parse_enum<T: FromStr>(map: &ConfigMap, key: &str, choices: &str) -> Result<T> {
    let v: String = map.get(key)?;
    v.parse()
        .map_err(|_| Error::config(key, format!("unknown value '{v}', expected one of {choices}")))
}

impl ExperimentConfig {
    /// Resolves a config map; `mode` overrides any `mode` key in the map.
    pub fn from_map(map: &ConfigMap, mode: Option<Mode>) -> Result<Self> {
        let mode = match mode {
            Some(m) => m,
            None => map.get::<String>("mode")?.parse()?,
        };
        let x_range = match (map.opt::<f64>("grid.x_lo")?, map.opt::<f64>("grid.x_hi")?) {
            (Some(a), Some(b)) => Some((a, b)),
            (None, None) => None,
            _ => return Err(Error::config("grid.x_lo", "set both grid.x_lo and grid.x_hi, or neither")),
        };
        let sweep_target: Mode = map.get::<String>("sweep.target")?.parse().map_err(|_| {
            Error::config("sweep.target", "expected burgers-lifespan, burgers-sim or euler-sim")
        })?;
        if !matches!(sweep_target, Mode::BurgersLifespan | Mode::BurgersSim | Mode::EulerSim) {
            return Err(Error::config(
                "sweep.target",
                "expected burgers-lifespan, burgers-sim or euler-sim",
            ));
        }
        let echo = known_keys()
            .filter(|&k| k != "mode")
            .filter_map(|k| map.raw(k).map(|v| (k.to_string(), v.to_string())))
            .collect();
        let cfg = ExperimentConfig {
            mode,
            gamma: map.get("gas.gamma")?,
            rho_bar: map.get("gas.rho_bar")?,
            mu: map.get("damping.mu")?,
            lambda: map.get("damping.lambda")?,
            profile: parse_enum(map, "profile.kind", "bump, shell, outgoing-shell, ramp, file")?,
            epsilon: map.get("profile.epsilon")?,
            m: map.get("profile.M")?,
            m0: map.get("profile.M0")?,
            profile_path: map.opt("profile.path")?,
            r_max: map.get("grid.r_max")?,
            n_cells: map.get("grid.n_cells")?,
            x_range,
            t_end: map.get("run.t_end")?,
            cfl: map.get("run.cfl")?,
            monitor_cadence: map.get("run.monitor_cadence")?,
            scheme: parse_enum(map, "run.scheme", "first-order, muscl")?,
            breakdown: parse_enum(map, "run.breakdown", "gradient-multiple, unresolved-jump")?,
            breakdown_value: map.opt("run.breakdown_value")?,
            scan_points: map.get("run.scan_points")?,
            sweep_lambda: map.list("sweep.lambda")?,
            sweep_mu: map.list("sweep.mu")?,
            sweep_epsilon: map.list("sweep.epsilon")?,
            sweep_target,
            criterion_h0: map.opt("criterion.H0")?,
            criterion_l0: map.opt("criterion.L0")?,
            criterion_t_star: map.opt("criterion.T_star")?,
            input_snapshots: map.opt("input.snapshots")?,
            output_dir: map.get("output.dir")?,
            echo,
        };
        if cfg.profile == ProfileKind::File && cfg.profile_path.is_none() {
            return Err(Error::config("profile.path", "required when profile.kind = file"));
        }
        if !(cfg.monitor_cadence >= 0.0) {
            return Err(Error::config("run.monitor_cadence", "must be >= 0"));
        }
        Ok(cfg)
    }

    pub fn has_sweep(&self) -> bool {
        !(self.sweep_lambda.is_empty() && self.sweep_mu.is_empty() && self.sweep_epsilon.is_empty())
    }

    /// `(λ, μ, ε)` points in row-major order of the three lists; an empty
    /// list stands for the single configured value.
    pub fn sweep_points(&self) -> Vec<(f64, f64, f64)> {
        let pick = |v: &Vec<f64>, d: f64| if v.is_empty() { vec![d] } else { v.clone() };
        let (ls, ms, es) = (
            pick(&self.sweep_lambda, self.lambda),
            pick(&self.sweep_mu, self.mu),
            pick(&self.sweep_epsilon, self.epsilon),
        );
        let mut out = Vec::with_capacity(ls.len() * ms.len() * es.len());
        for &l in &ls {
            for &m in &ms {
                for &e in &es {
                    out.push((l, m, e));
                }
            }
        }
        out
    }
}

/// Parses a config file body and then applies flag overrides.
pub fn parse_config(text: &str, flags: &[String], mode: Option<Mode>) -> Result<ExperimentConfig> {
    let mut map = ConfigMap::parse(text)?;
    map.apply_flags(flags)?;
    ExperimentConfig::from_map(&map, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_dotted_keys_and_comments() {
        let text = "# damping\ndamping.lambda = 1.0\n\ndamping.mu = 2.0   # strong\n";
        let cfg = parse_config(text, &[], Some(Mode::BurgersLifespan)).unwrap();
        assert_eq!((cfg.mu, cfg.lambda), (2.0, 1.0));
        assert_eq!(cfg.gamma, 1.4);
    }

    #[test]
    fn unknown_key_suggests_nearest() {
        let err = parse_config("dampling.mu = 2.0", &[], Some(Mode::Sweep)).unwrap_err();
        match err {
            Error::UnknownKey { key, suggestion } => {
                assert_eq!(key, "dampling.mu");
                assert_eq!(suggestion.as_deref(), Some("damping.mu"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flags_override_file() {
        let flags = vec!["--damping.mu".to_string(), "3.0".to_string()];
        let cfg = parse_config("damping.mu = 2.0", &flags, Some(Mode::Sweep)).unwrap();
        assert_eq!(cfg.mu, 3.0);
        let flags = vec!["--damping.mu=4".to_string()];
        assert_eq!(parse_config("", &flags, Some(Mode::Sweep)).unwrap().mu, 4.0);
    }

    #[test]
    fn syntax_and_type_errors() {
        match parse_config("gas.gamma = 1.4\nnonsense", &[], Some(Mode::Sweep)).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let err = parse_config("grid.n_cells = many", &[], Some(Mode::Sweep)).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "grid.n_cells"));
        assert!(parse_config("mode = nope", &[], None).is_err());
    }

    #[test]
    fn sweep_points_in_order() {
        let cfg = parse_config("sweep.lambda = 0.5, 2\nsweep.mu = 1,2", &[], Some(Mode::Sweep)).unwrap();
        assert_eq!(
            cfg.sweep_points(),
            vec![(0.5, 1.0, 0.1), (0.5, 2.0, 0.1), (2.0, 1.0, 0.1), (2.0, 2.0, 0.1)]
        );
    }
}
