use std::fmt;
use std::path::PathBuf;

use crate::attacks::{AttackScenario, Reconciliation};
use crate::channels::GaussChannel;
use crate::keyrate::{log_gamma_grid, DEFAULT_GAMMA_COUNT, DEFAULT_GAMMA_MAX};
use crate::teleportation::AmplifierGain;

/// A config problem, tied to the offending key and, for files, its line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        write!(f, "`{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: None,
        field: field.to_owned(),
        message: message.into(),
    }
}

/// Channel noise, given either as `ε` (thermal loss) or directly as `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise {
    Epsilon(f64),
    V(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaStart {
    /// `γ_min` of the configured channel.
    Auto,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tau: f64,
    pub noise: Noise,
    pub zeta: f64,
    pub beta: f64,
    pub reconciliation: Reconciliation,
    pub gain: AmplifierGain,
    pub gamma_min: GammaStart,
    pub gamma_max: f64,
    pub gamma_count: usize,
    pub output: PathBuf,
    pub precision: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tau: 0.25,
            noise: Noise::Epsilon(1.01),
            zeta: 0.7,
            beta: 0.95,
            reconciliation: Reconciliation::Reverse,
            gain: AmplifierGain::Asymptotic,
            gamma_min: GammaStart::Auto,
            gamma_max: DEFAULT_GAMMA_MAX,
            gamma_count: DEFAULT_GAMMA_COUNT,
            output: PathBuf::from("sweep.csv"),
            precision: 9,
        }
    }
}

pub const KEYS: [&str; 12] = [
    "tau",
    "epsilon",
    "v",
    "zeta",
    "beta",
    "reconciliation",
    "g_policy",
    "gamma_min",
    "gamma_max",
    "gamma_count",
    "output",
    "precision",
];

fn number(field: &str, value: &str) -> Result<f64, ConfigError> {
    let x: f64 = value
        .parse()
        .map_err(|_| err(field, format!("expected a number, got `{value}`")))?;
    if !x.is_finite() {
        return Err(err(
            field,
            format!("expected a finite number, got `{value}`"),
        ));
    }
    Ok(x)
}

pub fn parse_gain(value: &str) -> Result<AmplifierGain, ConfigError> {
    let g = match value {
        "asymptotic" => return Ok(AmplifierGain::Asymptotic),
        v => number("g_policy", v.strip_prefix("finite:").unwrap_or(v))?,
    };
    if !(g > 1.0) {
        return Err(err("g_policy", format!("gain must exceed 1, got {g}")));
    }
    Ok(AmplifierGain::Finite(g))
}

pub fn parse_reconciliation(value: &str) -> Result<Reconciliation, ConfigError> {
    match value {
        "reverse" => Ok(Reconciliation::Reverse),
        "direct" => Ok(Reconciliation::Direct),
        v => Err(err(
            "reconciliation",
            format!("expected `direct` or `reverse`, got `{v}`"),
        )),
    }
}

/// Attribute a library error to the field it names, else to `fallback`.
fn lib_err(fallback: &str, e: crate::Error) -> ConfigError {
    let field = match &e {
        crate::Error::Domain { name, .. } => match *name {
            "t" => "tau",
            "tau" | "epsilon" | "v" | "zeta" | "beta" | "gamma_min" | "gamma_max"
            | "gamma_count" => name,
            _ => fallback,
        },
        _ => fallback,
    };
    err(field, e.to_string())
}

impl RunConfig {
    /// Parse a `key = value` file on top of the defaults. Blank lines and
    /// `#` comments are skipped; each key may appear once.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut seen: Vec<(String, usize)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let at = |mut e: ConfigError| {
                e.line = Some(n + 1);
                e
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(err(line, "expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            let has = |k: &str| seen.iter().any(|(s, _)| s == k);
            if has(key) {
                return Err(at(err(key, "given more than once")));
            }
            if (key == "epsilon" && has("v")) || (key == "v" && has("epsilon")) {
                return Err(at(err(key, "`epsilon` and `v` are mutually exclusive")));
            }
            cfg.set(key, value).map_err(at)?;
            seen.push((key.to_owned(), n + 1));
        }
        cfg.validate().map_err(|mut e| {
            e.line = seen.iter().find(|(k, _)| *k == e.field).map(|(_, n)| *n);
            e
        })?;
        Ok(cfg)
    }

    /// Set one field from its textual value. Setting `epsilon` or `v`
    /// replaces whichever noise form was there.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "tau" => self.tau = number(key, value)?,
            "epsilon" => self.noise = Noise::Epsilon(number(key, value)?),
            "v" => self.noise = Noise::V(number(key, value)?),
            "zeta" => self.zeta = number(key, value)?,
            "beta" => self.beta = number(key, value)?,
            "reconciliation" => self.reconciliation = parse_reconciliation(value)?,
            "g_policy" => self.gain = parse_gain(value)?,
            "gamma_min" => {
                self.gamma_min = match value {
                    "auto" => GammaStart::Auto,
                    v => GammaStart::Value(number(key, v)?),
                }
            }
            "gamma_max" => self.gamma_max = number(key, value)?,
            "gamma_count" => {
                self.gamma_count = value
                    .parse()
                    .map_err(|_| err(key, format!("expected a positive integer, got `{value}`")))?
            }
            "output" => {
                if value.is_empty() {
                    return Err(err(key, "empty path"));
                }
                self.output = PathBuf::from(value)
            }
            "precision" => {
                self.precision = value
                    .parse()
                    .map_err(|_| err(key, format!("expected an integer, got `{value}`")))?;
            }
            other => return Err(err(other, "unknown key")),
        }
        Ok(())
    }

    /// Field-level checks; whether the channel admits an attack is left to
    /// [`RunConfig::scenario`].
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.channel()?;
        if !(0.0..1.0).contains(&self.zeta) {
            return Err(err(
                "zeta",
                format!("must lie in [0, 1), got {}", self.zeta),
            ));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(err(
                "beta",
                format!("must lie in [0, 1], got {}", self.beta),
            ));
        }
        if let GammaStart::Value(g) = self.gamma_min {
            if !(0.0..1.0).contains(&g) {
                return Err(err("gamma_min", format!("must lie in [0, 1), got {g}")));
            }
        }
        if !(0.0..1.0).contains(&self.gamma_max) {
            return Err(err(
                "gamma_max",
                format!("must lie in [0, 1), got {}", self.gamma_max),
            ));
        }
        if self.gamma_count == 0 {
            return Err(err("gamma_count", "must be at least 1"));
        }
        if self.precision > 17 {
            return Err(err("precision", "at most 17 decimals"));
        }
        Ok(())
    }

    fn noise_field(&self) -> &'static str {
        match self.noise {
            Noise::Epsilon(_) => "epsilon",
            Noise::V(_) => "v",
        }
    }

    pub fn channel(&self) -> Result<GaussChannel, ConfigError> {
        match self.noise {
            Noise::Epsilon(eps) => GaussChannel::lossy(self.tau, eps),
            Noise::V(v) => GaussChannel::new(self.tau, v),
        }
        .map_err(|e| lib_err(self.noise_field(), e))
    }

    pub fn scenario(&self) -> Result<AttackScenario, ConfigError> {
        self.validate()?;
        AttackScenario::new(self.channel()?, self.zeta, self.reconciliation, self.gain)
            .map_err(|e| lib_err(self.noise_field(), e))
    }

    pub fn gamma_grid(&self) -> Result<Vec<f64>, ConfigError> {
        let lo = match self.gamma_min {
            GammaStart::Auto => crate::attacks::gamma_min(&self.channel()?).gamma,
            GammaStart::Value(g) => g,
        };
        log_gamma_grid(lo, self.gamma_max, self.gamma_count).map_err(|e| lib_err("gamma_min", e))
    }

    /// Render in the file format read by [`RunConfig::parse`].
    pub fn to_config_string(&self) -> String {
        let noise = match self.noise {
            Noise::Epsilon(e) => format!("epsilon = {e}"),
            Noise::V(v) => format!("v = {v}"),
        };
        let rec = match self.reconciliation {
            Reconciliation::Reverse => "reverse",
            Reconciliation::Direct => "direct",
        };
        let gain = match self.gain {
            AmplifierGain::Asymptotic => "asymptotic".to_owned(),
            AmplifierGain::Finite(g) => format!("finite:{g}"),
        };
        let gmin = match self.gamma_min {
            GammaStart::Auto => "auto".to_owned(),
            GammaStart::Value(g) => g.to_string(),
        };
        format!(
            "tau = {}\n{noise}\nzeta = {}\nbeta = {}\nreconciliation = {rec}\ng_policy = {gain}\n\
             gamma_min = {gmin}\ngamma_max = {}\ngamma_count = {}\noutput = {}\nprecision = {}\n",
            self.tau,
            self.zeta,
            self.beta,
            self.gamma_max,
            self.gamma_count,
            self.output.display(),
            self.precision
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::parse(&c.to_config_string()).unwrap(), c);
        assert_eq!(RunConfig::parse("").unwrap(), c);
    }

    #[test]
    fn shipped_config_is_the_default() {
        let text = include_str!("../../configs/default.conf");
        assert_eq!(RunConfig::parse(text).unwrap(), RunConfig::default());
    }

    #[test]
    fn comments_and_overrides() {
        let c = RunConfig::parse("# scenario\ntau = 0.5 # half\nv = 0.6\ng_policy = finite:20\n")
            .unwrap();
        assert_eq!(c.tau, 0.5);
        assert_eq!(c.noise, Noise::V(0.6));
        assert_eq!(c.gain, AmplifierGain::Finite(20.0));
    }

    #[test]
    fn errors_name_line_and_field() {
        let e = RunConfig::parse("tau = 0.25\nzeta = abc\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert_eq!(e.field, "zeta");
        let e = RunConfig::parse("epsilon = 1.01\nv = 0.7\n").unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (Some(2), "v"));
        let e = RunConfig::parse("tau = 0.25\ntau = 0.3\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = RunConfig::parse("colour = red\n").unwrap_err();
        assert_eq!(e.field, "colour");
        let e = RunConfig::parse("just words\n").unwrap_err();
        assert_eq!(e.line, Some(1));
        let e = RunConfig::parse("beta = 1.5\n").unwrap_err();
        assert_eq!(e.field, "beta");
        let e = RunConfig::parse("g_policy = finite:0.5\n").unwrap_err();
        assert_eq!(e.field, "g_policy");
        assert!(RunConfig::parse("tau = 0.25\nv = 0.5\n").is_err());
        // entanglement breaking is a valid channel but not an attack scenario
        let eb = RunConfig::parse("tau = 0.25\nv = 1.3\n").unwrap();
        assert_eq!(eb.scenario().unwrap_err().field, "v");
    }

    #[test]
    fn grid_from_config() {
        let c = RunConfig::default();
        let g = c.gamma_grid().unwrap();
        assert_eq!(g.len(), 41);
        assert!((g[0] - 0.4451652046870816).abs() < 1e-15);
        let mut c = RunConfig::default();
        c.set("gamma_min", "0.99999").unwrap();
        let e = c.gamma_grid().unwrap_err();
        assert_eq!(e.field, "gamma_max");
    }
}
