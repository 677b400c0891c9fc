//! Sweep configuration: defaults, `key = value` config files, and flag
//! overlays.
//!
//! Settings resolve in three layers with fixed precedence: command-line
//! flags override config-file entries, which override the built-in
//! defaults. Each layer is a [`PartialConfig`]; [`SweepConfig::resolve`]
//! collapses the stack and validates the result.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Dynamical closure used for the EMFT side of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Per-time global fixed point of the self-consistency condition.
    Fixed,
    /// Time-dependent self-consistent field (instantaneous closure).
    Tdscf,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Fixed => "fixed",
            Mode::Tdscf => "tdscf",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed" => Ok(Mode::Fixed),
            "tdscf" => Ok(Mode::Tdscf),
            other => Err(format!("expected 'fixed' or 'tdscf', got '{other}'")),
        }
    }
}

/// Configuration failures; all map to the usage exit code.
#[derive(Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("config line {line}: expected 'key = value'")]
    Syntax { line: usize },
    #[error("config line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: duplicate key '{key}'")]
    DuplicateKey { line: usize, key: String },
    #[error("config line {line}: bad value for '{key}': {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("alpha conflicts with alpha-min/alpha-max/alpha-steps")]
    AlphaConflict,
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// One layer of settings; `None` means "not set at this layer".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub mode: Option<Mode>,
    pub alpha: Option<f64>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub alpha_steps: Option<usize>,
    pub tau_max: Option<f64>,
    pub tau_steps: Option<usize>,
    pub nu_e: Option<u32>,
    pub chain_n: Option<usize>,
    pub extrema_eps: Option<f64>,
    pub out: Option<PathBuf>,
    pub strict: Option<bool>,
    pub threads: Option<usize>,
}

impl PartialConfig {
    /// Parse a config file body. The format is one `key = value` per
    /// line; `#` starts a comment, blank lines are skipped, keys use the
    /// same spelling as the long command-line flags.
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        fn parse<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError>
        where
            T::Err: fmt::Display,
        {
            value.parse().map_err(|e: T::Err| ConfigError::BadValue {
                line,
                key: key.to_string(),
                reason: e.to_string(),
            })
        }

        let mut out = PartialConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = match raw.find('#') {
                Some(cut) => &raw[..cut],
                None => raw,
            }
            .trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax { line });
            }
            if seen.iter().any(|k| k == key) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            seen.push(key.to_string());

            match key {
                "mode" => out.mode = Some(parse(line, key, value)?),
                "alpha" => out.alpha = Some(parse(line, key, value)?),
                "alpha-min" => out.alpha_min = Some(parse(line, key, value)?),
                "alpha-max" => out.alpha_max = Some(parse(line, key, value)?),
                "alpha-steps" => out.alpha_steps = Some(parse(line, key, value)?),
                "tau-max" => out.tau_max = Some(parse(line, key, value)?),
                "tau-steps" => out.tau_steps = Some(parse(line, key, value)?),
                "nu-e" => out.nu_e = Some(parse(line, key, value)?),
                "chain-n" => out.chain_n = Some(parse(line, key, value)?),
                "extrema-eps" => out.extrema_eps = Some(parse(line, key, value)?),
                "out" => out.out = Some(PathBuf::from(value)),
                "strict" => out.strict = Some(parse(line, key, value)?),
                "threads" => out.threads = Some(parse(line, key, value)?),
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        if out.alpha.is_some() && out.has_alpha_range() {
            return Err(ConfigError::AlphaConflict);
        }
        Ok(out)
    }

    fn has_alpha_range(&self) -> bool {
        self.alpha_min.is_some() || self.alpha_max.is_some() || self.alpha_steps.is_some()
    }

    /// Lay `over` on top of `self`. A single-alpha setting and a range
    /// setting displace each other across layers, so a flag range beats a
    /// file `alpha` and vice versa.
    pub fn overlaid(mut self, over: &PartialConfig) -> PartialConfig {
        if over.alpha.is_some() {
            self.alpha_min = None;
            self.alpha_max = None;
            self.alpha_steps = None;
        }
        if over.has_alpha_range() {
            self.alpha = None;
        }
        PartialConfig {
            mode: over.mode.or(self.mode),
            alpha: over.alpha.or(self.alpha),
            alpha_min: over.alpha_min.or(self.alpha_min),
            alpha_max: over.alpha_max.or(self.alpha_max),
            alpha_steps: over.alpha_steps.or(self.alpha_steps),
            tau_max: over.tau_max.or(self.tau_max),
            tau_steps: over.tau_steps.or(self.tau_steps),
            nu_e: over.nu_e.or(self.nu_e),
            chain_n: over.chain_n.or(self.chain_n),
            extrema_eps: over.extrema_eps.or(self.extrema_eps),
            out: over.out.clone().or(self.out),
            strict: over.strict.or(self.strict),
            threads: over.threads.or(self.threads),
        }
    }
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_steps: usize,
    pub tau_max: f64,
    pub tau_steps: usize,
    pub nu_e: u32,
    pub chain_n: usize,
    pub extrema_eps: f64,
    pub out: Option<PathBuf>,
    pub strict: bool,
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Fixed,
            alpha_min: 0.594,
            alpha_max: 0.594,
            alpha_steps: 1,
            tau_max: 15.0,
            tau_steps: 600,
            nu_e: 1,
            chain_n: 512,
            extrema_eps: 0.01,
            out: None,
            strict: false,
            threads: None,
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 / (n - 1) as f64))
        .collect()
}

impl SweepConfig {
    /// Collapse a layered [`PartialConfig`] onto the defaults and
    /// validate. `alpha` is shorthand for a one-point grid.
    pub fn resolve(partial: &PartialConfig) -> Result<Self, ConfigError> {
        if partial.alpha.is_some() && partial.has_alpha_range() {
            return Err(ConfigError::AlphaConflict);
        }
        let mut cfg = SweepConfig::default();
        if let Some(v) = partial.mode {
            cfg.mode = v;
        }
        if let Some(v) = partial.alpha {
            cfg.alpha_min = v;
            cfg.alpha_max = v;
            cfg.alpha_steps = 1;
        }
        if let Some(v) = partial.alpha_min {
            cfg.alpha_min = v;
        }
        if let Some(v) = partial.alpha_max {
            cfg.alpha_max = v;
        }
        if let Some(v) = partial.alpha_steps {
            cfg.alpha_steps = v;
        }
        if let Some(v) = partial.tau_max {
            cfg.tau_max = v;
        }
        if let Some(v) = partial.tau_steps {
            cfg.tau_steps = v;
        }
        if let Some(v) = partial.nu_e {
            cfg.nu_e = v;
        }
        if let Some(v) = partial.chain_n {
            cfg.chain_n = v;
        }
        if let Some(v) = partial.extrema_eps {
            cfg.extrema_eps = v;
        }
        if let Some(v) = &partial.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = partial.strict {
            cfg.strict = v;
        }
        if let Some(v) = partial.threads {
            cfg.threads = Some(v);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: &str| Err(ConfigError::Invalid(msg.to_string()));
        if !self.alpha_min.is_finite() || self.alpha_min <= 0.0 {
            return fail("alpha-min must be a positive finite number");
        }
        if !self.alpha_max.is_finite() || self.alpha_max < self.alpha_min {
            return fail("alpha-max must be finite and at least alpha-min");
        }
        if self.alpha_steps == 0 {
            return fail("alpha-steps must be at least 1");
        }
        if self.alpha_steps == 1 && self.alpha_min != self.alpha_max {
            return fail("a one-point alpha grid needs alpha-min = alpha-max");
        }
        if self.alpha_steps > 1 && self.alpha_min == self.alpha_max {
            return fail("a multi-point alpha grid needs alpha-min < alpha-max");
        }
        if !self.tau_max.is_finite() || self.tau_max <= 0.0 {
            return fail("tau-max must be a positive finite number");
        }
        if self.tau_steps < 2 {
            return fail("tau-steps must be at least 2");
        }
        if self.nu_e == 0 {
            return fail("nu-e must be at least 1");
        }
        if self.chain_n < 8 || !self.chain_n.is_multiple_of(2) {
            return fail("chain-n must be even and at least 8");
        }
        if !self.extrema_eps.is_finite() || self.extrema_eps <= 0.0 {
            return fail("extrema-eps must be a positive finite number");
        }
        if self.threads == Some(0) {
            return fail("threads must be at least 1");
        }
        Ok(())
    }

    /// Inclusive scaled-field grid with `alpha_steps` points.
    pub fn alpha_grid(&self) -> Vec<f64> {
        linspace(self.alpha_min, self.alpha_max, self.alpha_steps)
    }

    /// Inclusive scaled-time grid `[0, tau_max]` with `tau_steps` points.
    pub fn tau_grid(&self) -> Vec<f64> {
        linspace(0.0, self.tau_max, self.tau_steps)
    }
}
