//! Command-line flags, the optional `key = value` configuration file, and the
//! resolved [`RunConfig`].

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use unimodal_core::asymptotics::TermSource;
use unimodal_core::Family;

pub const DEFAULT_PRECISION: u32 = 192;
pub const MIN_PRECISION: u32 = 64;
pub const DEFAULT_TRUNC: usize = 500;
pub const DEFAULT_M_MAX: i64 = 10;
pub const PRECISION_ENV: &str = "UNIMODAL_PRECISION_BITS";

#[derive(Debug, Parser)]
#[command(name = "unimodal", version, about = "Rank statistics of unimodal sequences: exact counts, asymptotics and checks")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact rank counts `(n, m, count)` from the generating functions.
    Exact,
    /// Asymptotic values `(n, m, ln asym)` from a Bessel expansion.
    Asymptotic,
    /// Exact counts against the asymptotic expansion, in log space.
    Compare,
    /// Run a verification suite; exits non-zero on any failure.
    Verify { suite: Suite },
    /// Numeric checks of the analytic kernels.
    Kernels { check: KernelCheck },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Symmetry,
    Oracle,
    Inequalities,
    Kernels,
    Coefficients,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelCheck {
    /// Partial theta expansion against the direct sum.
    PartialTheta,
    /// The sinh/cosh moment integrals against their limits.
    Moments,
    /// Wright's contour integral against the Bessel value.
    Wright,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Terms {
    /// The three-term tables as published.
    Corollary,
    /// The published theorem sum at order `--N`.
    Theorem,
    /// Coefficients pushed through the Wright formula from the near-pole expansion.
    Wright,
}

impl From<Terms> for TermSource {
    fn from(t: Terms) -> Self {
        match t {
            Terms::Corollary => TermSource::Corollary,
            Terms::Theorem => TermSource::Theorem,
            Terms::Wright => TermSource::Wright,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// Flags as given; `None` means "not on the command line".
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// u, w, v or nu. Verification suites default to all four.
    #[arg(long, global = true, value_parser = parse_family)]
    pub family: Option<Family>,
    /// Ranks `-m_max..=m_max` for tables, `0..=m_max` for pair scans [default: 10].
    #[arg(long, global = true)]
    pub m_max: Option<i64>,
    #[arg(long, global = true)]
    pub n_min: Option<u64>,
    #[arg(long, global = true)]
    pub n_max: Option<u64>,
    /// Explicit comma-separated weights; overrides --n-min/--n-max.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n_list: Option<Vec<u64>>,
    /// Series truncation order; also the largest admissible n [default: 500].
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Working precision in bits, at least 64 [default: 192].
    #[arg(long, global = true, env = PRECISION_ENV)]
    pub precision_bits: Option<u32>,
    /// Source of asymptotic coefficients [default: corollary].
    #[arg(long, global = true, value_enum)]
    pub terms: Option<Terms>,
    /// Expansion order for --terms theorem or wright.
    #[arg(long = "N", global = true)]
    pub big_n: Option<u32>,
    /// Output format [default: csv].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// `key = value` file supplying defaults for any of the flags above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: unimodal_core::Error| e.to_string())
}

fn parse_value<T: ValueEnum>(key: &str, v: &str) -> Result<T> {
    T::from_str(v, true).map_err(|e| anyhow!("config key '{key}': {e}"))
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e| anyhow!("config key '{key}': {e}"))
}

/// Reads a configuration file of `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<Options> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Options> {
    let mut seen = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {}: expected key = value", lineno + 1))?;
        seen.insert(k.trim().trim_start_matches("--").to_string(), v.trim().to_string());
    }
    let mut o = Options::default();
    for (k, v) in &seen {
        match k.as_str() {
            "family" => o.family = Some(parse_family(v).map_err(|e| anyhow!("config key 'family': {e}"))?),
            "m-max" => o.m_max = Some(parse_num(k, v)?),
            "n-min" => o.n_min = Some(parse_num(k, v)?),
            "n-max" => o.n_max = Some(parse_num(k, v)?),
            "n-list" => {
                o.n_list = Some(v.split(',').map(|x| parse_num(k, x.trim())).collect::<Result<_>>()?)
            }
            "trunc" => o.trunc = Some(parse_num(k, v)?),
            "precision-bits" => o.precision_bits = Some(parse_num(k, v)?),
            "terms" => o.terms = Some(parse_value(k, v)?),
            "N" => o.big_n = Some(parse_num(k, v)?),
            "format" => o.format = Some(parse_value(k, v)?),
            "out" => o.out = Some(PathBuf::from(v)),
            "threads" => o.threads = Some(parse_num(k, v)?),
            other => bail!("unknown config key '{other}'"),
        }
    }
    Ok(o)
}

/// Settings after merging flags, environment, configuration file and defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: Option<Family>,
    pub m_max: i64,
    pub n_min: Option<u64>,
    pub n_max: Option<u64>,
    pub n_list: Option<Vec<u64>>,
    pub trunc: usize,
    pub precision: u32,
    pub terms: Terms,
    pub big_n: Option<u32>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RunConfig {
    /// Flags (and the precision environment variable) win over the file.
    pub fn resolve(flags: Options) -> Result<Self> {
        let file = match &flags.config {
            Some(p) => read_config_file(p)?,
            None => Options::default(),
        };
        let cfg = RunConfig {
            family: flags.family.or(file.family),
            m_max: flags.m_max.or(file.m_max).unwrap_or(DEFAULT_M_MAX),
            n_min: flags.n_min.or(file.n_min),
            n_max: flags.n_max.or(file.n_max),
            n_list: flags.n_list.or(file.n_list),
            trunc: flags.trunc.or(file.trunc).unwrap_or(DEFAULT_TRUNC),
            precision: flags.precision_bits.or(file.precision_bits).unwrap_or(DEFAULT_PRECISION),
            terms: flags.terms.or(file.terms).unwrap_or(Terms::Corollary),
            big_n: flags.big_n.or(file.big_n),
            format: flags.format.or(file.format).unwrap_or(Format::Csv),
            out: flags.out.or(file.out),
            threads: flags.threads.or(file.threads),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.precision < MIN_PRECISION {
            bail!("precision must be at least {MIN_PRECISION} bits, got {}", self.precision);
        }
        if self.m_max < 0 {
            bail!("--m-max must be non-negative, got {}", self.m_max);
        }
        if self.threads == Some(0) {
            bail!("--threads must be positive");
        }
        if let Some(list) = &self.n_list {
            if list.is_empty() {
                bail!("--n-list is empty");
            }
        }
        Ok(())
    }

    /// The single family of a table command, `u` when unset.
    pub fn family_or_u(&self) -> Family {
        self.family.unwrap_or(Family::U)
    }

    pub fn families(&self) -> Vec<Family> {
        match self.family {
            Some(f) => vec![f],
            None => Family::ALL.to_vec(),
        }
    }

    /// The requested weights, sorted and deduplicated, defaulting to
    /// `default_min..=trunc`; every weight must lie within the truncation.
    pub fn weights(&self, default_min: u64) -> Result<Vec<u64>> {
        let mut ns = match &self.n_list {
            Some(list) => list.clone(),
            None => {
                let lo = self.n_min.unwrap_or(default_min);
                let hi = self.n_max.unwrap_or(self.trunc as u64);
                if lo > hi {
                    bail!("empty n-range {lo}..={hi}");
                }
                (lo..=hi).collect()
            }
        };
        ns.sort_unstable();
        ns.dedup();
        if let Some(&top) = ns.last() {
            if top > self.trunc as u64 {
                bail!("n = {top} exceeds the truncation order {} (raise --trunc)", self.trunc);
            }
        }
        Ok(ns)
    }

    pub fn ranks(&self) -> Vec<i64> {
        (-self.m_max..=self.m_max).collect()
    }
}
