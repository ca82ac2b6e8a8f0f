//! Tunable tolerances and search budgets.

use serde::{Deserialize, Serialize};

/// Numerical tolerances. All matrix residuals are Frobenius-norm distances.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    /// Group membership residual bound.
    pub membership: f64,
    /// Residual bound for accepting a conjugacy witness.
    pub witness: f64,
    /// Relative singular-value threshold for rank decisions.
    pub rank_rel: f64,
    /// Eigenvalue-multiset matching distance above which spectra certify
    /// non-conjugacy.
    pub spectral_gap: f64,
    /// Residual bound for `Z_σ(T)` / `N_σ(T)` membership and torus
    /// membership tests.
    pub subgroup: f64,
    /// Residual bound for the cocycle norm condition.
    pub cocycle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            membership: 1e-9,
            witness: 1e-7,
            rank_rel: 1e-8,
            spectral_gap: 1e-4,
            subgroup: 1e-7,
            cocycle: 1e-8,
        }
    }
}

/// Multi-start search budgets.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Search {
    /// Restarts for the σ-conjugacy decider.
    pub restarts: usize,
    /// Restarts for the Weyl-generator search.
    pub budget: usize,
    /// Iteration cap per descent run.
    pub max_iters: usize,
}

impl Default for Search {
    fn default() -> Self {
        Search {
            restarts: 64,
            budget: 64,
            max_iters: 500,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Config {
    pub tolerances: Tolerances,
    pub search: Search,
    pub seed: u64,
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Config {
            seed,
            ..Config::default()
        }
    }
}
