//! Run configuration shared by every subcommand.

use std::collections::BTreeSet;
use std::path::Path;

use clap::ValueEnum;
use econe_core::enhanced_cone::DEFAULT_CENSUS_BUDGET;
use econe_core::ff_linalg::is_prime;
use econe_core::pi::FitConfig;
use econe_core::resolution::{DatumFault, ValidateOptions, DEFAULT_NODE_BUDGET};
use econe_core::Field;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Limits, sample fields, budgets and seed for a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub bipartitions_n: usize,
    pub linalg_samples: usize,
    pub roundtrip_n: usize,
    pub invariance_n: usize,
    pub invariance_samples: usize,
    /// `(n, q)` pairs whose census must total `q^{n²}`.
    pub census: Vec<(usize, u64)>,
    pub slice_n: usize,
    pub resolution_n: usize,
    pub resolution_q: Vec<u64>,
    pub pi_n: usize,
    pub probe_n: usize,
    pub fit_primes: Vec<u64>,
    pub holdout: Vec<u64>,
    /// Prime sets compared when the degree bound is at most 2.
    pub independence_small: (Vec<u64>, Vec<u64>),
    /// Prime sets compared otherwise.
    pub independence_large: (Vec<u64>, Vec<u64>),
    pub conjugates: usize,
    pub node_budget: u64,
    pub census_budget: u64,
    pub seed: u64,
    pub format: Format,
    /// Deliberately corrupted resolution datum.
    pub fault: Option<DatumFault>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            bipartitions_n: 6,
            linalg_samples: 40,
            roundtrip_n: 6,
            invariance_n: 4,
            invariance_samples: 20,
            census: vec![(2, 2), (2, 3), (3, 2), (3, 3)],
            slice_n: 6,
            resolution_n: 4,
            resolution_q: vec![2, 3, 5],
            pi_n: 3,
            probe_n: 3,
            fit_primes: vec![2, 3, 5, 7, 11, 13],
            holdout: vec![17, 4, 9],
            independence_small: (vec![2, 3, 5], vec![7, 11, 13]),
            independence_large: (vec![2, 3, 5, 7, 11, 13], vec![17, 19, 23, 29, 31, 37]),
            conjugates: 5,
            node_budget: DEFAULT_NODE_BUDGET,
            census_budget: DEFAULT_CENSUS_BUDGET,
            seed: DEFAULT_SEED,
            format: Format::Json,
            fault: None,
        }
    }
}

fn distinct(label: &str, xs: &[u64]) -> Result<(), CliError> {
    let set: BTreeSet<_> = xs.iter().collect();
    if set.len() != xs.len() {
        return Err(CliError::BadArgs(format!("{label} contains repeated values")));
    }
    Ok(())
}

fn primes(label: &str, xs: &[u64]) -> Result<(), CliError> {
    distinct(label, xs)?;
    match xs.iter().find(|&&p| !is_prime(p)) {
        Some(p) => Err(CliError::BadArgs(format!("{label}: {p} is not prime"))),
        None => supported(label, xs),
    }
}

fn supported(label: &str, xs: &[u64]) -> Result<(), CliError> {
    for &q in xs {
        Field::of_order(q).map_err(|e| CliError::BadArgs(format!("{label}: {e}")))?;
    }
    Ok(())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::BadArgs(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        primes("fit primes", &self.fit_primes)?;
        distinct("holdout", &self.holdout)?;
        supported("holdout", &self.holdout)?;
        if let Some(q) = self.holdout.iter().find(|q| self.fit_primes.contains(q)) {
            return Err(CliError::BadArgs(format!("{q} is both a fit prime and a holdout field")));
        }
        distinct("resolution fields", &self.resolution_q)?;
        supported("resolution fields", &self.resolution_q)?;
        for (a, b) in [&self.independence_small, &self.independence_large] {
            primes("independence primes", a)?;
            primes("independence primes", b)?;
            if a.iter().any(|p| b.contains(p)) {
                return Err(CliError::BadArgs("independence prime sets must be disjoint".into()));
            }
        }
        for &(_, q) in &self.census {
            supported("census", &[q])?;
        }
        if self.node_budget == 0 || self.census_budget == 0 {
            return Err(CliError::BadArgs("budgets must be positive".into()));
        }
        Ok(())
    }

    /// Every suite limit capped at `n`.
    pub fn capped(mut self, n: usize) -> Self {
        for limit in [
            &mut self.bipartitions_n,
            &mut self.roundtrip_n,
            &mut self.invariance_n,
            &mut self.slice_n,
            &mut self.resolution_n,
            &mut self.pi_n,
            &mut self.probe_n,
        ] {
            *limit = (*limit).min(n);
        }
        self.census.retain(|&(m, _)| m <= n);
        if self.census.is_empty() {
            self.census = vec![(n, 2), (n, 3)];
        }
        self
    }

    pub fn fit_config(&self) -> FitConfig {
        FitConfig {
            fit_primes: self.fit_primes.clone(),
            holdout: self.holdout.clone(),
            seed: self.seed,
            conjugates: self.conjugates,
            node_budget: self.node_budget,
            extend_primes: true,
        }
    }

    pub fn validate_options(&self) -> ValidateOptions {
        ValidateOptions {
            seed: self.seed,
            conjugates: self.conjugates,
            node_budget: self.node_budget,
            census_budget: self.census_budget,
            fault: self.fault,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.seed, 0xC0FFEE);
    }

    #[test]
    fn rejects_bad_primes_and_budgets() {
        let bad = [
            RunConfig { fit_primes: vec![2, 4], ..Default::default() },
            RunConfig { fit_primes: vec![2, 3, 2], ..Default::default() },
            RunConfig { holdout: vec![6], ..Default::default() },
            RunConfig { holdout: vec![3], ..Default::default() },
            RunConfig { node_budget: 0, ..Default::default() },
            RunConfig { independence_small: (vec![2, 3], vec![3, 5]), ..Default::default() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(CliError::BadArgs(_))), "{cfg:?}");
        }
    }

    #[test]
    fn capping() {
        let cfg = RunConfig::default().capped(1);
        assert_eq!((cfg.slice_n, cfg.pi_n, cfg.resolution_n), (1, 1, 1));
        assert_eq!(cfg.census, vec![(1, 2), (1, 3)]);
        let cfg = RunConfig::default().capped(2);
        assert_eq!(cfg.census, vec![(2, 2), (2, 3)]);
    }

    #[test]
    fn json_roundtrip_with_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"seed": 7, "fault": "shift-v-step"}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.fault, Some(DatumFault::ShiftVStep));
        assert_eq!(cfg.fit_primes, RunConfig::default().fit_primes);
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(serde_json::from_str::<RunConfig>(r#"{"sead": 7}"#).is_err());
    }
}
