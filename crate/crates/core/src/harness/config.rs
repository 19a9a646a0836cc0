//! Flat TOML configuration for sweeps and single searches.
//!
//! Every key is optional. Unknown keys are rejected so typos do not silently
//! fall back to defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coarse::MacroResult;
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::search::{
    gradient_search, greedy_search, spectral_search, GradConfig, GreedyConfig, NodeOrder,
    OpticsConfig, SpectralConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    Spectral,
    Gradient,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Greedy, Algorithm::Spectral, Algorithm::Gradient];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Spectral => "spectral",
            Algorithm::Gradient => "gradient",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}; expected greedy, spectral or gradient")))
    }
}

/// Tuning knobs for the three searches, one flat key each.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSettings {
    pub greedy_min_gain: f64,
    /// Visit seeds in a shuffled order drawn from this seed instead of by id.
    pub greedy_order_seed: Option<u64>,
    pub spectral_min_samples: usize,
    pub spectral_epsilon_grid: usize,
    pub spectral_max_eps: f64,
    pub spectral_zero_tol: f64,
    pub gradient_learning_rate: f64,
    pub gradient_momentum: f64,
    pub gradient_max_iter: usize,
    pub gradient_restarts: usize,
    pub gradient_init_scale: f64,
    pub gradient_converge_tol: f64,
    pub gradient_mass_tol: f64,
    pub gradient_seed: u64,
}

impl Default for SearchSettings {
    fn default() -> Self {
        let g = GreedyConfig::default();
        let s = SpectralConfig::default();
        let d = GradConfig::default();
        Self {
            greedy_min_gain: g.min_gain,
            greedy_order_seed: None,
            spectral_min_samples: s.optics.min_samples,
            spectral_epsilon_grid: s.optics.epsilon_grid,
            spectral_max_eps: s.optics.max_eps,
            spectral_zero_tol: s.zero_tol,
            gradient_learning_rate: d.learning_rate,
            gradient_momentum: d.momentum,
            gradient_max_iter: d.max_iter,
            gradient_restarts: d.restarts,
            gradient_init_scale: d.init_scale,
            gradient_converge_tol: d.converge_tol,
            gradient_mass_tol: d.mass_tol,
            gradient_seed: d.seed,
        }
    }
}

impl SearchSettings {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(config_err)?;
        let s: Self = table.try_into().map_err(config_err)?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn greedy(&self) -> GreedyConfig {
        GreedyConfig {
            min_gain: self.greedy_min_gain,
            node_order: self.greedy_order_seed.map_or(NodeOrder::AscendingId, NodeOrder::Random),
        }
    }

    pub fn spectral(&self) -> SpectralConfig {
        SpectralConfig {
            optics: OpticsConfig {
                min_samples: self.spectral_min_samples,
                epsilon_grid: self.spectral_epsilon_grid,
                max_eps: self.spectral_max_eps,
            },
            zero_tol: self.spectral_zero_tol,
        }
    }

    pub fn gradient(&self) -> GradConfig {
        GradConfig {
            learning_rate: self.gradient_learning_rate,
            momentum: self.gradient_momentum,
            max_iter: self.gradient_max_iter,
            restarts: self.gradient_restarts,
            init_scale: self.gradient_init_scale,
            converge_tol: self.gradient_converge_tol,
            mass_tol: self.gradient_mass_tol,
            seed: self.gradient_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.greedy_min_gain >= 0.0) {
            return Err(Error::Config("greedy_min_gain must be nonnegative".into()));
        }
        self.spectral().optics.validate()?;
        if !(self.spectral_zero_tol >= 0.0) {
            return Err(Error::Config("spectral_zero_tol must be nonnegative".into()));
        }
        self.gradient().validate()
    }

    /// Runs one search on `net`.
    pub fn run(&self, algorithm: Algorithm, net: &Network) -> Result<MacroResult> {
        match algorithm {
            Algorithm::Greedy => greedy_search(net, &self.greedy()),
            Algorithm::Spectral => spectral_search(net, &self.spectral()),
            Algorithm::Gradient => gradient_search(net, &self.gradient()),
        }
    }
}

/// A preferential-attachment sweep: `samples` networks per `alpha`, each
/// searched by every listed algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub alpha_values: Vec<f64>,
    pub n: usize,
    pub m: usize,
    pub samples: usize,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Worker threads. Keep at 1 when comparing runtimes.
    pub workers: usize,
    /// Search keys share the same flat namespace in the file.
    #[serde(skip)]
    pub search: SearchSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            alpha_values: (1..=12).map(|k| 0.25 * k as f64).collect(),
            n: 150,
            m: 1,
            samples: 40,
            algorithms: Algorithm::ALL.to_vec(),
            seed: 0,
            output_dir: PathBuf::from("results"),
            workers: 1,
            search: SearchSettings::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(config_err)?;
        let own = toml::Table::try_from(ExperimentConfig::default()).map_err(config_err)?;
        let (mine, rest): (toml::Table, toml::Table) =
            table.into_iter().partition(|(k, _)| own.contains_key(k));
        let mut cfg: Self = mine.try_into().map_err(config_err)?;
        cfg.search = rest.try_into().map_err(config_err)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        let mut table = toml::Table::try_from(self).map_err(config_err)?;
        table.extend(toml::Table::try_from(self.search).map_err(config_err)?);
        toml::to_string(&table).map_err(config_err)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_values.is_empty() {
            return Err(Error::Config("alpha_values must not be empty".into()));
        }
        if let Some(a) = self.alpha_values.iter().find(|a| !a.is_finite()) {
            return Err(Error::Config(format!("alpha {a} is not finite")));
        }
        if self.samples < 1 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.m < 1 || self.n < self.m + 1 {
            return Err(Error::Config(format!(
                "need m >= 1 and n >= m + 1 (n = {}, m = {})",
                self.n, self.m
            )));
        }
        if self.workers < 1 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        self.search.validate()
    }
}

fn config_err(e: impl fmt::Display) -> Error {
    Error::Config(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = ExperimentConfig::from_toml_str("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.alpha_values.len(), 12);
        assert_eq!(cfg.alpha_values[11], 3.0);
    }

    #[test]
    fn flat_keys() {
        let cfg = ExperimentConfig::from_toml_str(
            "alpha_values = [0.5, 2.0]\nsamples = 3\nalgorithms = [\"spectral\"]\n\
             gradient_restarts = 2\nspectral_epsilon_grid = 10\n",
        )
        .unwrap();
        assert_eq!(cfg.alpha_values, vec![0.5, 2.0]);
        assert_eq!(cfg.algorithms, vec![Algorithm::Spectral]);
        assert_eq!(cfg.search.gradient().restarts, 2);
        assert_eq!(cfg.search.spectral().optics.epsilon_grid, 10);
    }

    #[test]
    fn round_trip() {
        let mut cfg = ExperimentConfig::default();
        cfg.search.greedy_order_seed = Some(4);
        cfg.alpha_values = vec![1.0, 1.5];
        let back = ExperimentConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "alpha_values = []",
            "samples = 0",
            "n = 1",
            "workers = 0",
            "algorithms = [\"annealing\"]",
            "sampels = 4",
            "gradient_momentum = 1.5",
            "spectral_min_samples = 1",
            "n = \"many\"",
        ] {
            assert!(ExperimentConfig::from_toml_str(text).is_err(), "{text}");
        }
        assert!(SearchSettings::from_toml_str("alpha_values = [1.0]").is_err());
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("Greedy".parse::<Algorithm>().is_err());
    }
}
