//! Per-step assignment of workers to firms by maximal overlap.
//!
//! Each worker independently picks the most similar living firm, subject to
//! the threshold theta. Firms have unlimited capacity and passively accept
//! every best-matching worker, so there is no worker-worker competition;
//! workers are still processed in ascending id order so that tie-break draws
//! come off the rng stream in a fixed sequence.

use crate::agents::{Firm, FirmId, Worker, WorkerId};
use crate::bits::{matching_bits, BITS};
use crate::rng::Rng;
use crate::state::MarketState;

/// Outcome of one worker's matching attempt.
///
/// If `firm_id` is present then `q >= theta`; if absent then `q == 0` and no
/// living firm reached the threshold (or none were left).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchResult {
    pub worker_id: WorkerId,
    pub firm_id: Option<FirmId>,
    pub q: f64,
}

impl MatchResult {
    pub fn is_matched(&self) -> bool {
        self.firm_id.is_some()
    }
}

/// Match one worker against the given living firms.
///
/// Let M be the maximal overlap. If M < theta the worker stays unmatched and
/// no rng draw is made. Otherwise the firm is drawn uniformly from the argmax
/// set with exactly one rng draw (also when that set has a single element, so
/// the stream consumed per matched worker is fixed).
///
/// An empty firm slice yields an unmatched result; that signals market
/// collapse, not a failure.
pub fn match_worker(
    worker: &Worker,
    firms: &[&Firm],
    theta: f64,
    rng: &mut Rng,
) -> MatchResult {
    let mut best: u32 = 0;
    let mut argmax: Vec<FirmId> = Vec::new();
    for firm in firms {
        let c = matching_bits(worker.bits, firm.bits);
        if c > best || argmax.is_empty() {
            best = c;
            argmax.clear();
            argmax.push(firm.id);
        } else if c == best {
            argmax.push(firm.id);
        }
    }

    let q = f64::from(best) / BITS as f64;
    if argmax.is_empty() || q < theta {
        return MatchResult {
            worker_id: worker.id,
            firm_id: None,
            q: 0.0,
        };
    }

    let pick = argmax[rng.index(argmax.len())];
    MatchResult {
        worker_id: worker.id,
        firm_id: Some(pick),
        q,
    }
}

/// Match every worker, in ascending id order. One result per worker; a firm
/// may appear in many results.
pub fn match_all(state: &mut MarketState, theta: f64) -> Vec<MatchResult> {
    let order = state.id_order();
    let alive: Vec<&Firm> = state.firms.iter().filter(|f| f.alive).collect();
    let workers = &state.workers;
    let rng = &mut state.rng;
    order
        .iter()
        .map(|&i| match_worker(&workers[i], &alive, theta, rng))
        .collect()
}
