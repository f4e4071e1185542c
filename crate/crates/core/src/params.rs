//! Simulation parameters and the scenario switch.

use std::fmt;
use std::str::FromStr;

use crate::bits::BITS;
use crate::error::SimError;

/// Which of the three scenarios a run executes.
///
/// - `Baseline`: random characteristics, no gendered preferences.
/// - `Gendered`: gender-driven occupation choice by workers and gender
///   preference by firms, set in the initial conditions.
/// - `Tipping`: baseline initial conditions plus a disutility cost in the
///   payoff of men matched into women-labelled occupations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Baseline,
    Gendered,
    Tipping,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Baseline => "baseline",
            Scenario::Gendered => "gendered",
            Scenario::Tipping => "tipping",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "baseline" => Ok(Scenario::Baseline),
            "gendered" => Ok(Scenario::Gendered),
            "tipping" => Ok(Scenario::Tipping),
            other => Err(SimError::config(format!(
                "unknown scenario '{other}' (expected baseline|gendered|tipping)"
            ))),
        }
    }
}

/// Core model parameters. Defaults are the reference configuration:
/// 1000 workers, 30 firms, H0 = 5, C0 = 200, cw = 1, cf = 4.5, theta = 0.5,
/// 1000 steps averaged over 100 replications.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub n_workers: usize,
    pub n_firms: usize,
    pub k: usize,
    /// Initial happiness H0 of every worker (and of replacements).
    pub h0: f64,
    /// Initial capital C0 of every firm.
    pub c0: f64,
    /// Worker cost of living per step.
    pub cw: f64,
    /// Firm cost of running business per step.
    pub cf: f64,
    /// Minimum overlap for a match, in [0, 1].
    pub theta: f64,
    /// Time horizon T of one run.
    pub steps: usize,
    /// Monte Carlo replications R.
    pub runs: usize,
    pub seed: u64,
    pub scenario: Scenario,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            n_workers: 1000,
            n_firms: 30,
            k: BITS,
            h0: 5.0,
            c0: 200.0,
            cw: 1.0,
            cf: 4.5,
            theta: 0.5,
            steps: 1000,
            runs: 100,
            seed: 1,
            scenario: Scenario::Baseline,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.n_workers == 0 || self.n_workers % 2 != 0 {
            return Err(SimError::config(format!(
                "n_workers must be even and positive for an exact 50/50 gender split, got {}",
                self.n_workers
            )));
        }
        if self.n_firms == 0 {
            return Err(SimError::config("n_firms must be positive"));
        }
        if self.k != BITS {
            return Err(SimError::config(format!(
                "k must be {BITS}, got {}",
                self.k
            )));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(SimError::config(format!(
                "theta must be in [0, 1], got {}",
                self.theta
            )));
        }
        if self.cw <= 0.0 {
            return Err(SimError::config(format!("cw must be > 0, got {}", self.cw)));
        }
        if self.cf <= 0.0 {
            return Err(SimError::config(format!("cf must be > 0, got {}", self.cf)));
        }
        if self.steps == 0 {
            return Err(SimError::config("steps must be >= 1"));
        }
        if self.runs == 0 {
            return Err(SimError::config("runs must be >= 1"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Params::default().validate().unwrap();
    }

    #[test]
    fn odd_worker_count_rejected() {
        let p = Params {
            n_workers: 999,
            ..Params::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn theta_out_of_range_rejected() {
        let p = Params {
            theta: 1.5,
            ..Params::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn scenario_parses() {
        assert_eq!("baseline".parse::<Scenario>().unwrap(), Scenario::Baseline);
        assert_eq!("gendered".parse::<Scenario>().unwrap(), Scenario::Gendered);
        assert_eq!("tipping".parse::<Scenario>().unwrap(), Scenario::Tipping);
        assert!("other".parse::<Scenario>().is_err());
    }
}
