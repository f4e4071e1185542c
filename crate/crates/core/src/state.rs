//! Full market state of one simulation run.

use crate::agents::{Firm, Occupation, Worker, WorkerId, MAN};
use crate::rng::Rng;

/// The complete, exclusively-owned state of one run.
///
/// Invariants maintained by the dynamics:
/// - the worker count equals `n_workers` at the end of every step;
/// - the multiset of gender bits never changes (replacement preserves gender);
/// - `occ_labels[occ]` equals bit 1 of every living firm in `occ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketState {
    pub workers: Vec<Worker>,
    pub firms: Vec<Firm>,
    /// Gender over-representation label per occupation, indexed by
    /// `Occupation::index` (0 = women, 1 = men).
    pub occ_labels: [u8; 2],
    /// Step counter, incremented at the end of each step.
    pub t: u64,
    pub rng: Rng,
    next_worker_id: u64,
}

impl MarketState {
    pub fn new(workers: Vec<Worker>, firms: Vec<Firm>, occ_labels: [u8; 2], rng: Rng) -> Self {
        let next_worker_id = workers.iter().map(|w| w.id.0 + 1).max().unwrap_or(0);
        MarketState {
            workers,
            firms,
            occ_labels,
            t: 0,
            rng,
            next_worker_id,
        }
    }

    pub fn label_of(&self, occ: Occupation) -> u8 {
        self.occ_labels[occ.index()]
    }

    pub fn fresh_worker_id(&mut self) -> WorkerId {
        let id = WorkerId(self.next_worker_id);
        self.next_worker_id += 1;
        id
    }

    pub fn alive_firm_count(&self) -> usize {
        self.firms.iter().filter(|f| f.alive).count()
    }

    /// (women, men) counts over the living population.
    pub fn gender_counts(&self) -> (usize, usize) {
        let men = self.workers.iter().filter(|w| w.gender() == MAN).count();
        (self.workers.len() - men, men)
    }

    /// Worker indices in ascending id order; the canonical processing order
    /// for matching and replacement. Replacements receive fresh (larger) ids,
    /// so the backing vec is not id-sorted after the first replacement.
    pub fn id_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.workers.len()).collect();
        order.sort_by_key(|&i| self.workers[i].id);
        order
    }
}
