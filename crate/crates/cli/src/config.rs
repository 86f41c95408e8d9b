//! Run configuration: built-in defaults, optional flat key = value config
//! file, and command-line flags, merged in that order of increasing
//! precedence.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use sturmwell::potential::PotentialSpec;

/// Outcome classification for the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Usage or configuration problem; exit code 2.
    Config(String),
    /// Solver or verification failure; exit code 1.
    Failure(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Failure(m) => write!(f, "{m}"),
        }
    }
}

impl From<sturmwell::Error> for CliError {
    fn from(e: sturmwell::Error) -> Self {
        match e {
            sturmwell::Error::InvalidParameter(_)
            | sturmwell::Error::Precondition(_)
            | sturmwell::Error::Parse(_)
            | sturmwell::Error::Io(_) => CliError::Config(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Zero,
    Harmonic,
    SquareWell,
    DoubleWell,
    Piecewise,
}

impl PotentialKind {
    pub fn name(self) -> &'static str {
        match self {
            PotentialKind::Zero => "zero",
            PotentialKind::Harmonic => "harmonic",
            PotentialKind::SquareWell => "square-well",
            PotentialKind::DoubleWell => "double-well",
            PotentialKind::Piecewise => "piecewise",
        }
    }

    fn parse(s: &str) -> CliResult<Self> {
        match s {
            "zero" => Ok(PotentialKind::Zero),
            "harmonic" => Ok(PotentialKind::Harmonic),
            "square-well" => Ok(PotentialKind::SquareWell),
            "double-well" => Ok(PotentialKind::DoubleWell),
            "piecewise" => Ok(PotentialKind::Piecewise),
            other => Err(config_err(format!(
                "unknown potential '{other}' (expected zero, harmonic, square-well, double-well, or piecewise)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Options shared by every subcommand. All optional so that presence can be
/// distinguished from defaults when merging with a config file.
#[derive(Debug, Clone, Args)]
pub struct CommonOpts {
    /// Base potential: zero, harmonic, square-well, double-well, piecewise
    #[arg(long, value_enum)]
    pub potential: Option<PotentialKind>,

    /// Harmonic stiffness k in V = k x^2
    #[arg(long)]
    pub k_stiffness: Option<f64>,

    /// Square-well depth V0 (> 0)
    #[arg(long)]
    pub v0: Option<f64>,

    /// Square-well half-width b (> 0)
    #[arg(long)]
    pub b: Option<f64>,

    /// Double-well quartic coefficient in V = c4 x^4 - c2 x^2
    #[arg(long)]
    pub c4: Option<f64>,

    /// Double-well quadratic coefficient in V = c4 x^4 - c2 x^2
    #[arg(long)]
    pub c2: Option<f64>,

    /// CSV file (x, V) for the piecewise-linear potential
    #[arg(long)]
    pub pw_file: Option<String>,

    /// Wall half-width a (> 0)
    #[arg(long)]
    pub a: Option<f64>,

    /// Grid points (odd); for sweep this is the point count at a_max
    #[arg(long)]
    pub n_points: Option<usize>,

    /// Number of lowest states to solve
    #[arg(short, long)]
    pub k: Option<usize>,

    /// Smallest sweep half-width
    #[arg(long)]
    pub a_min: Option<f64>,

    /// Largest sweep half-width
    #[arg(long)]
    pub a_max: Option<f64>,

    /// Number of (geometric) sweep half-widths
    #[arg(long)]
    pub a_count: Option<usize>,

    /// Number of branches tracked by the sweep
    #[arg(long)]
    pub n_max: Option<usize>,

    /// Seed for randomized verification energies
    #[arg(long)]
    pub seed: Option<u64>,

    /// Scale factor on the residual tolerances of verify
    #[arg(long)]
    pub tolerance: Option<f64>,

    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output path (default: standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Worker threads for sweep solves (0 = all cores)
    #[arg(long)]
    pub workers: Option<usize>,

    /// Flat key = value config file (flags take precedence)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential: Option<PotentialKind>,
    pub k_stiffness: f64,
    pub v0: f64,
    pub b: f64,
    pub c4: f64,
    pub c2: f64,
    pub pw_file: Option<String>,
    pub a: f64,
    pub n_points: usize,
    pub k: usize,
    pub a_min: f64,
    pub a_max: f64,
    pub a_count: usize,
    pub n_max: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            potential: None,
            k_stiffness: 1.0,
            v0: 4.0,
            b: 1.0,
            c4: 1.0,
            c2: 5.0,
            pw_file: None,
            a: 8.0,
            n_points: sturmwell::grid::DEFAULT_N_POINTS,
            k: 5,
            a_min: 1.5,
            a_max: 30.0,
            a_count: 40,
            n_max: 3,
            seed: 42,
            tolerance: 1.0,
            format: Format::Csv,
            out: None,
            workers: 0,
        }
    }
}

impl RunConfig {
    /// Defaults, then the config file (if given), then explicit flags.
    pub fn resolve(opts: &CommonOpts) -> CliResult<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &opts.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_err(format!("cannot read config file {}: {e}", path.display())))?;
            cfg.apply_file(&text)?;
        }
        cfg.apply_flags(opts);
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str) -> CliResult<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("config line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            self.apply_key(key, value)
                .map_err(|e| config_err(format!("config line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    fn apply_key(&mut self, key: &str, value: &str) -> CliResult<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
            value
                .parse()
                .map_err(|_| config_err(format!("invalid value '{value}' for {key}")))
        }
        match key {
            "potential" => self.potential = Some(PotentialKind::parse(value)?),
            "k_stiffness" => self.k_stiffness = num(key, value)?,
            "v0" => self.v0 = num(key, value)?,
            "b" => self.b = num(key, value)?,
            "c4" => self.c4 = num(key, value)?,
            "c2" => self.c2 = num(key, value)?,
            "pw_file" => self.pw_file = Some(value.to_string()),
            "a" => self.a = num(key, value)?,
            "n_points" => self.n_points = num(key, value)?,
            "k" => self.k = num(key, value)?,
            "a_min" => self.a_min = num(key, value)?,
            "a_max" => self.a_max = num(key, value)?,
            "a_count" => self.a_count = num(key, value)?,
            "n_max" => self.n_max = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "tolerance" => self.tolerance = num(key, value)?,
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    other => return Err(config_err(format!("unknown format '{other}'"))),
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "workers" => self.workers = num(key, value)?,
            other => return Err(config_err(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    fn apply_flags(&mut self, o: &CommonOpts) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = o.$field.clone() { self.$field = v.into(); })*
            };
        }
        if let Some(p) = o.potential {
            self.potential = Some(p);
        }
        if let Some(f) = &o.pw_file {
            self.pw_file = Some(f.clone());
        }
        if let Some(p) = &o.out {
            self.out = Some(p.clone());
        }
        take!(k_stiffness, v0, b, c4, c2, a, n_points, k, a_min, a_max, a_count, n_max, seed, tolerance, format, workers);
    }

    fn validate(&self) -> CliResult<()> {
        if !(self.tolerance >= 0.0) {
            return Err(config_err("tolerance must be >= 0"));
        }
        if self.k < 1 {
            return Err(config_err("k must be >= 1"));
        }
        Ok(())
    }

    /// Build the base potential; errors map to exit code 2.
    pub fn build_potential(&self) -> CliResult<PotentialSpec<f64>> {
        let kind = self
            .potential
            .ok_or_else(|| config_err("no potential selected (use --potential)"))?;
        let spec = match kind {
            PotentialKind::Zero => PotentialSpec::Zero,
            PotentialKind::Harmonic => PotentialSpec::harmonic(self.k_stiffness)?,
            PotentialKind::SquareWell => PotentialSpec::square_well(self.v0, self.b)?,
            PotentialKind::DoubleWell => PotentialSpec::double_well(self.c4, self.c2)?,
            PotentialKind::Piecewise => {
                let path = self
                    .pw_file
                    .as_ref()
                    .ok_or_else(|| config_err("piecewise potential needs --pw-file"))?;
                PotentialSpec::piecewise_from_csv(path)?
            }
        };
        Ok(spec)
    }

    /// Potential-specific parameters for the effective-config echo.
    pub fn potential_params(&self) -> Vec<(&'static str, String)> {
        match self.potential {
            Some(PotentialKind::Harmonic) => vec![("k_stiffness", self.k_stiffness.to_string())],
            Some(PotentialKind::SquareWell) => {
                vec![("v0", self.v0.to_string()), ("b", self.b.to_string())]
            }
            Some(PotentialKind::DoubleWell) => {
                vec![("c4", self.c4.to_string()), ("c2", self.c2.to_string())]
            }
            Some(PotentialKind::Piecewise) => vec![(
                "pw_file",
                self.pw_file.clone().unwrap_or_default(),
            )],
            _ => vec![],
        }
    }
}
