//! Runtime configuration: enumeration bounds, numeric tolerances, RNG seed.
//!
//! A [`Config`] can be loaded from a JSON file; absent fields keep their
//! defaults, so a config file may override any subset. Resolution order is
//! explicit path first (e.g. a `--config` flag), then the `CUBICFEYN_CONFIG`
//! environment variable, then built-in defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable consulted when no explicit config path is given.
pub const CONFIG_ENV_VAR: &str = "CUBICFEYN_CONFIG";

/// Hard upper bound on the loop order; `max_loop_order` may not exceed it.
pub const LOOP_ORDER_HARD_CAP: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Largest loop order m accepted by graph enumeration and series expansion.
    pub max_loop_order: usize,
    /// |det Q| below this floor is treated as a degenerate quadratic form.
    pub det_floor: f64,
    /// Tolerance for symmetry / antisymmetry checks on input tensors.
    pub symmetry_tol: f64,
    /// Relative tolerance for series consistency checks.
    pub series_rel_tol: f64,
    /// Relative tolerance for quadrature cross-checks.
    pub quad_rel_tol: f64,
    /// Tolerance for integer-valued link invariants.
    pub link_tol: f64,
    /// Seed for every randomized check; fixed so runs are reproducible.
    pub rng_seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_loop_order: 4,
            det_floor: 1e-10,
            symmetry_tol: 1e-12,
            series_rel_tol: 1e-10,
            quad_rel_tol: 1e-8,
            link_tol: 1e-3,
            rng_seed: 0x00C0_FFEE,
        }
    }
}

impl Config {
    /// Reads a config file, applying defaults for absent fields.
    pub fn from_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let cfg: Config = serde_json::from_str(&text).map_err(|source| Error::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Resolves the active config: `explicit` path, else `CUBICFEYN_CONFIG`,
    /// else defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Config> {
        if let Some(path) = explicit {
            return Config::from_file(path);
        }
        if let Ok(env_path) = std::env::var(CONFIG_ENV_VAR) {
            if !env_path.is_empty() {
                return Config::from_file(Path::new(&env_path));
            }
        }
        Ok(Config::default())
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_loop_order == 0 || self.max_loop_order > LOOP_ORDER_HARD_CAP {
            return Err(Error::InvalidConfig(format!(
                "max_loop_order must be in 1..={LOOP_ORDER_HARD_CAP}, got {}",
                self.max_loop_order
            )));
        }
        let tolerances = [
            ("det_floor", self.det_floor),
            ("symmetry_tol", self.symmetry_tol),
            ("series_rel_tol", self.series_rel_tol),
            ("quad_rel_tol", self.quad_rel_tol),
            ("link_tol", self.link_tol),
        ];
        for (name, value) in tolerances {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be a positive finite number, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Largest index-list length accepted by pairing enumeration (6 per loop).
    pub fn max_pairing_degree(&self) -> usize {
        6 * self.max_loop_order
    }
}
