//! Synthetic populations, dataset loaders and JSON report files.
//!
//! File formats are UTF-8 and newline-delimited. A universe file holds one
//! identifier per line. A singletons file holds one item per line. A
//! sequences file holds one comma-separated record per line; order within a
//! record is significant. Every item is validated against the universe and
//! failures carry the 1-based line number.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal, Zipf};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::domain::Universe;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SyntheticDistribution {
    Gaussian { mean: f64, std: f64 },
    Exponential { rate: f64 },
    Uniform,
    /// Item `i` has weight `1 / (i + 1)^exponent`.
    Zipf { exponent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub distribution: SyntheticDistribution,
    pub n: usize,
    pub universe_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedPopulation {
    pub items: Vec<usize>,
    /// Samples that fell outside `[0, universe_size)` before clamping.
    pub clamped: usize,
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!("{name} must be positive, got {value}")))
    }
}

enum Sampler {
    Continuous(Box<dyn Fn(&mut dyn rand::RngCore) -> f64>),
    Index(Box<dyn Fn(&mut dyn rand::RngCore) -> usize>),
}

impl SyntheticDistribution {
    fn sampler(&self, universe_size: usize) -> Result<Sampler> {
        Ok(match *self {
            Self::Gaussian { mean, std } => {
                if !mean.is_finite() {
                    return Err(Error::InvalidDistribution(format!("mean {mean}")));
                }
                positive("std", std)?;
                let d = Normal::new(mean, std).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
                Sampler::Continuous(Box::new(move |r| d.sample(r)))
            }
            Self::Exponential { rate } => {
                positive("rate", rate)?;
                let d = Exp::new(rate).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
                Sampler::Continuous(Box::new(move |r| d.sample(r)))
            }
            Self::Uniform => Sampler::Index(Box::new(move |r| r.random_range(0..universe_size))),
            Self::Zipf { exponent } => {
                positive("exponent", exponent)?;
                let d = Zipf::new(universe_size as f64, exponent)
                    .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
                // Zipf yields ranks 1..=n
                Sampler::Index(Box::new(move |r| d.sample(r) as usize - 1))
            }
        })
    }
}

/// Draws `spec.n` items. Continuous samples are rounded to the nearest
/// integer and clamped into the universe.
pub fn generate_population<R: Rng>(spec: &SyntheticSpec, rng: &mut R) -> Result<GeneratedPopulation> {
    if spec.n == 0 {
        return Err(Error::InvalidParameter("population size must be at least 1".into()));
    }
    if spec.universe_size < 2 {
        return Err(Error::UniverseTooSmall(spec.universe_size));
    }
    let top = spec.universe_size - 1;
    let mut clamped = 0;
    let items = match spec.distribution.sampler(spec.universe_size)? {
        Sampler::Index(f) => (0..spec.n).map(|_| f(rng)).collect(),
        Sampler::Continuous(f) => (0..spec.n)
            .map(|_| {
                let x = f(rng).round();
                if x < 0.0 {
                    clamped += 1;
                    0
                } else if x > top as f64 {
                    clamped += 1;
                    top
                } else {
                    x as usize
                }
            })
            .collect(),
    };
    Ok(GeneratedPopulation { items, clamped })
}

/// Synthetic sequence dataset: lengths uniform in `[min_len, max_len]`,
/// elements drawn independently from Zipf(`exponent`) over the universe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub count: usize,
    pub universe_size: usize,
    pub exponent: f64,
    pub min_len: usize,
    pub max_len: usize,
}

pub fn generate_sequences<R: Rng>(spec: &SequenceSpec, rng: &mut R) -> Result<Vec<Vec<usize>>> {
    if spec.count == 0 || spec.min_len > spec.max_len {
        return Err(Error::InvalidParameter(format!(
            "count {} with lengths [{}, {}]",
            spec.count, spec.min_len, spec.max_len
        )));
    }
    let items = SyntheticSpec {
        distribution: SyntheticDistribution::Zipf { exponent: spec.exponent },
        n: 1,
        universe_size: spec.universe_size,
    };
    let Sampler::Index(draw) = items.distribution.sampler(spec.universe_size)? else {
        unreachable!("zipf is an index sampler")
    };
    if spec.universe_size < 2 {
        return Err(Error::UniverseTooSmall(spec.universe_size));
    }
    Ok((0..spec.count)
        .map(|_| {
            let len = rng.random_range(spec.min_len..=spec.max_len);
            (0..len).map(|_| draw(rng)).collect()
        })
        .collect())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_error(source: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: source.to_string(),
        line,
        message: message.into(),
    }
}

fn lookup(universe: &Universe, source: &str, line: usize, item: &str) -> Result<usize> {
    if item.is_empty() {
        return Err(parse_error(source, line, "empty item"));
    }
    universe
        .index_of(item)
        .ok_or_else(|| parse_error(source, line, format!("unknown item `{item}`")))
}

fn non_empty(text: &str, source: &str) -> Result<()> {
    if text.trim().is_empty() {
        return Err(Error::Empty(source.to_string()));
    }
    Ok(())
}

pub fn load_universe(path: impl AsRef<Path>) -> Result<Universe> {
    let path = path.as_ref();
    let text = read(path)?;
    non_empty(&text, &path.display().to_string())?;
    Universe::parse(&text)
}

/// One item per line; blank lines are rejected.
pub fn parse_singletons(text: &str, universe: &Universe, source: &str) -> Result<Vec<usize>> {
    non_empty(text, source)?;
    text.lines()
        .enumerate()
        .map(|(i, line)| lookup(universe, source, i + 1, line.trim()))
        .collect()
}

/// Comma-separated items per line; blank lines and empty fields are
/// rejected.
pub fn parse_sequences(text: &str, universe: &Universe, source: &str) -> Result<Vec<Vec<usize>>> {
    non_empty(text, source)?;
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            if line.trim().is_empty() {
                return Err(parse_error(source, i + 1, "blank line"));
            }
            line.split(',')
                .map(|item| lookup(universe, source, i + 1, item.trim()))
                .collect()
        })
        .collect()
}

pub fn load_singletons(path: impl AsRef<Path>, universe: &Universe) -> Result<Vec<usize>> {
    let path = path.as_ref();
    parse_singletons(&read(path)?, universe, &path.display().to_string())
}

pub fn load_sequences(path: impl AsRef<Path>, universe: &Universe) -> Result<Vec<Vec<usize>>> {
    let path = path.as_ref();
    parse_sequences(&read(path)?, universe, &path.display().to_string())
}

/// Pretty JSON with a trailing newline. Field order follows declaration
/// order; maps keep insertion order.
pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)
        .map_err(|e| Error::InvalidParameter(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_report<T: Serialize>(report: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(report)?).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn read_report<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })
}
