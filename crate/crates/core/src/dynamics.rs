//! One full time step: payoffs, disutility, worker replacement, firm exit,
//! and occupation-label recomputation.
//!
//! Phase order within a step is fixed:
//!
//! 1. match every worker (ascending id order);
//! 2. worker payoffs H <- H + q - cw, minus dw in the tipping scenario;
//! 3. firm payoffs C <- C + sum(q over supplied workers) - cf;
//! 4. replace workers with H < 0 (same gender and occupation preference,
//!    fresh abstract traits, H = H0, fresh id);
//! 5. remove firms with C < 0 (they never return);
//! 6. recompute occupation over-representation labels;
//! 7. advance t.
//!
//! A firm therefore earns from the workers it supplied in the same step it
//! pays cf, and label flips never retroactively change the step's dw. Exits
//! use strictly-below-zero: a balance of exactly 0 survives.

use crate::agents::{Firm, FirmId, Occupation, Worker, WorkerId, GENDER_BIT, MAN, OCC_BIT};
use crate::bits::BITS;
use crate::matching::{match_all, MatchResult};
use crate::params::{Params, Scenario};
use crate::rng::Rng;
use crate::state::MarketState;

/// What happened during one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub matches: Vec<MatchResult>,
    /// Ids of workers whose happiness fell below zero and who were replaced.
    pub replaced_worker_ids: Vec<WorkerId>,
    /// Ids of firms whose capital fell below zero this step.
    pub dead_firm_ids: Vec<FirmId>,
    /// Occupations whose over-representation label flipped this step.
    pub labels_flipped: Vec<Occupation>,
}

/// Disutility dw of a matched worker: |g - o| / k for men, 0 for women,
/// where o is the gender label of the matched occupation. With k = 10 the
/// value is exactly 0.1 for a man in a women-labelled occupation and 0
/// whenever gender and label correspond.
pub fn disutility(worker: &Worker, matched_occ_label: u8) -> f64 {
    if worker.gender() == MAN {
        f64::from(worker.gender().abs_diff(matched_occ_label)) / BITS as f64
    } else {
        0.0
    }
}

/// New happiness for a worker given this step's match.
///
/// `matched_label` is the gender label of the matched firm's occupation
/// (None when unmatched). Unmatched workers contribute q = 0 and dw = 0, so
/// their happiness falls by exactly cw.
pub fn worker_payoff(
    worker: &Worker,
    m: &MatchResult,
    matched_label: Option<u8>,
    cw: f64,
    tipping: bool,
) -> f64 {
    debug_assert_eq!(worker.id, m.worker_id);
    debug_assert_eq!(m.is_matched(), matched_label.is_some());
    let dw = match (tipping, matched_label) {
        (true, Some(label)) => disutility(worker, label),
        _ => 0.0,
    };
    worker.happiness + m.q - dw - cw
}

/// New capital for a firm: previous value plus the overlap of every worker it
/// supplied this step, minus the running cost cf. A firm with zero matched
/// workers loses exactly cf.
pub fn firm_payoff(firm: &Firm, matches: &[MatchResult], cf: f64) -> f64 {
    let supplied: f64 = matches
        .iter()
        .filter(|m| m.firm_id == Some(firm.id))
        .map(|m| m.q)
        .sum();
    firm.capital + supplied - cf
}

/// Build the replacement for a worker whose happiness fell below zero: same
/// gender and occupation-preference bits (and preference flag), bits 2-9
/// freshly random (eight rng draws), happiness reset to h0, fresh id.
pub fn replace_worker(old: &Worker, h0: f64, id: WorkerId, rng: &mut Rng) -> Worker {
    debug_assert!(old.happiness < 0.0);
    let mut bits = old.bits;
    for i in 2..BITS {
        bits.set(i, rng.next_bit());
    }
    Worker {
        id,
        bits,
        happiness: h0,
        has_gendered_preference: old.has_gendered_preference,
    }
}

/// Recompute the gender over-representation label of each occupation from
/// this step's matches and return the occupations that flipped.
///
/// An occupation flips when the strict majority gender among its matched,
/// still-living workers differs from the current label; ties and occupations
/// without matches keep their label. On a flip, bit 1 of every living firm in
/// the occupation is updated, and every worker with a gendered preference has
/// bit 1 re-pointed at its own gender so the preference follows the label.
pub fn recompute_occupation_labels(
    state: &mut MarketState,
    matches: &[MatchResult],
) -> Vec<Occupation> {
    let gender_of: std::collections::HashMap<WorkerId, u8> = state
        .workers
        .iter()
        .map(|w| (w.id, w.gender()))
        .collect();

    // men / women matched per occupation; workers replaced earlier in the
    // step are no longer part of the living population and do not count
    let mut men = [0u64; 2];
    let mut women = [0u64; 2];
    for m in matches {
        let Some(fid) = m.firm_id else { continue };
        let Some(&g) = gender_of.get(&m.worker_id) else {
            continue;
        };
        let occ = state.firms[fid.0 as usize].occupation.index();
        if g == MAN {
            men[occ] += 1;
        } else {
            women[occ] += 1;
        }
    }

    let mut flipped = Vec::new();
    for occ in Occupation::ALL {
        let i = occ.index();
        let majority = match men[i].cmp(&women[i]) {
            std::cmp::Ordering::Greater => Some(1u8),
            std::cmp::Ordering::Less => Some(0u8),
            std::cmp::Ordering::Equal => None,
        };
        if let Some(label) = majority {
            if label != state.occ_labels[i] {
                state.occ_labels[i] = label;
                for firm in state.firms.iter_mut().filter(|f| f.alive) {
                    if firm.occupation == occ {
                        firm.bits.set(OCC_BIT, label);
                    }
                }
                flipped.push(occ);
            }
        }
    }

    if !flipped.is_empty() {
        for worker in state
            .workers
            .iter_mut()
            .filter(|w| w.has_gendered_preference)
        {
            let g = worker.bits.get(GENDER_BIT);
            worker.bits.set(OCC_BIT, g);
        }
    }

    flipped
}

fn matched_label(m: &MatchResult, firms: &[Firm], occ_labels: [u8; 2]) -> Option<u8> {
    m.firm_id
        .map(|fid| occ_labels[firms[fid.0 as usize].occupation.index()])
}

/// Execute one full step in the fixed phase order above.
///
/// A market with no living firms is degenerate but legal: every worker is
/// simply unmatched.
pub fn step(state: &mut MarketState, params: &Params) -> StepOutcome {
    let tipping = params.scenario == Scenario::Tipping;

    // (1) matching
    let matches = match_all(state, params.theta);
    let order = state.id_order();
    debug_assert_eq!(order.len(), matches.len());

    // (2) worker payoffs, in the same ascending-id order as the matches
    for (&i, m) in order.iter().zip(&matches) {
        let label = matched_label(m, &state.firms, state.occ_labels);
        let w = &mut state.workers[i];
        w.happiness = worker_payoff(w, m, label, params.cw, tipping);
    }

    // (3) firm payoffs
    for firm in state.firms.iter_mut().filter(|f| f.alive) {
        firm.capital = firm_payoff(firm, &matches, params.cf);
    }

    // (4) worker replacement, ascending id order
    let mut replaced = Vec::new();
    for &i in &order {
        if state.workers[i].happiness < 0.0 {
            let id = state.fresh_worker_id();
            let old = &state.workers[i];
            replaced.push(old.id);
            state.workers[i] = replace_worker(old, params.h0, id, &mut state.rng);
        }
    }

    // (5) firm exit
    let mut dead = Vec::new();
    for firm in state.firms.iter_mut().filter(|f| f.alive) {
        if firm.capital < 0.0 {
            firm.alive = false;
            dead.push(firm.id);
        }
    }

    // (6) occupation labels
    let flipped = recompute_occupation_labels(state, &matches);

    // (7) advance time
    state.t += 1;

    StepOutcome {
        matches,
        replaced_worker_ids: replaced,
        dead_firm_ids: dead,
        labels_flipped: flipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::FirmId;
    use crate::scenario;

    fn worker(id: u64, bits: &str, happiness: f64) -> Worker {
        Worker {
            id: WorkerId(id),
            bits: bits.parse().unwrap(),
            happiness,
            has_gendered_preference: false,
        }
    }

    fn firm(id: u32, bits: &str, capital: f64, occupation: Occupation) -> Firm {
        Firm {
            id: FirmId(id),
            bits: bits.parse().unwrap(),
            capital,
            occupation,
            alive: true,
        }
    }

    fn m(worker_id: u64, firm_id: Option<u32>, q: f64) -> MatchResult {
        MatchResult {
            worker_id: WorkerId(worker_id),
            firm_id: firm_id.map(FirmId),
            q,
        }
    }

    #[test]
    fn disutility_values() {
        let man = worker(0, "1000000000", 5.0);
        let woman = worker(1, "0000000000", 5.0);
        assert_eq!(disutility(&man, 0), 0.1);
        assert_eq!(disutility(&man, 1), 0.0);
        assert_eq!(disutility(&woman, 0), 0.0);
        assert_eq!(disutility(&woman, 1), 0.0);
    }

    #[test]
    fn worker_payoff_baseline() {
        let w = worker(0, "1000000000", 5.0);
        assert_eq!(
            worker_payoff(&w, &m(0, Some(0), 0.8), Some(0), 1.0, false),
            4.8
        );
    }

    #[test]
    fn worker_payoff_tipping_man_in_women_labelled_occupation() {
        // 5 + 0.8 - 0.1 - 1 = 4.7
        let w = worker(0, "1000000000", 5.0);
        assert_eq!(
            worker_payoff(&w, &m(0, Some(0), 0.8), Some(0), 1.0, true),
            4.7
        );
    }

    #[test]
    fn worker_payoff_unmatched() {
        let w = worker(0, "1000000000", 3.0);
        assert_eq!(worker_payoff(&w, &m(0, None, 0.0), None, 1.0, false), 2.0);
        assert_eq!(worker_payoff(&w, &m(0, None, 0.0), None, 1.0, true), 2.0);
    }

    #[test]
    fn tipping_flag_is_the_only_disutility_gate() {
        // a man matched into a women-labelled occupation pays dw only when
        // the tipping switch is on
        let w = worker(0, "1000000000", 5.0);
        let matched = m(0, Some(0), 0.8);
        let base = worker_payoff(&w, &matched, Some(0), 1.0, false);
        let tip = worker_payoff(&w, &matched, Some(0), 1.0, true);
        assert_eq!(base, 4.8);
        assert_eq!(base - tip, disutility(&w, 0));
    }

    #[test]
    fn firm_payoff_sums_supplied_overlaps() {
        let f = firm(0, "0000000000", 200.0, Occupation::A);
        let matches: Vec<MatchResult> = (0..10).map(|i| m(i, Some(0), 0.6)).collect();
        assert!((firm_payoff(&f, &matches, 4.5) - 201.5).abs() < 1e-12);
    }

    #[test]
    fn firm_payoff_zero_matches_loses_cf() {
        let f = firm(0, "0000000000", 200.0, Occupation::A);
        assert_eq!(firm_payoff(&f, &[], 4.5), 195.5);
        let other = vec![m(0, Some(1), 0.9)];
        assert_eq!(firm_payoff(&f, &other, 4.5), 195.5);
    }

    #[test]
    fn firm_payoff_can_cross_zero() {
        let f = firm(0, "0000000000", 1.0, Occupation::A);
        let matches = vec![m(0, Some(0), 0.5)];
        assert_eq!(firm_payoff(&f, &matches, 4.5), -3.0);
    }

    #[test]
    fn replacement_preserves_gender_and_preference() {
        let mut rng = Rng::from_seed(8);
        let mut old = worker(3, "1100000000", -0.2);
        old.has_gendered_preference = true;
        let new = replace_worker(&old, 5.0, WorkerId(100), &mut rng);
        assert_eq!(new.id, WorkerId(100));
        assert_eq!(new.bits.get(GENDER_BIT), old.bits.get(GENDER_BIT));
        assert_eq!(new.bits.get(OCC_BIT), old.bits.get(OCC_BIT));
        assert!(new.has_gendered_preference);
        assert_eq!(new.happiness, 5.0);
    }

    #[test]
    fn replacement_consumes_eight_draws() {
        let mut a = Rng::from_seed(8);
        let mut b = Rng::from_seed(8);
        let old = worker(3, "1100000000", -0.2);
        let _ = replace_worker(&old, 5.0, WorkerId(100), &mut a);
        for _ in 0..8 {
            b.next_u64();
        }
        assert_eq!(a, b);
    }

    fn two_occupation_state(men_in_a: usize, women_in_a: usize) -> (MarketState, Vec<MatchResult>) {
        // one firm per occupation; the requested gender mix matched into A
        let firms = vec![
            firm(0, "0000000000", 200.0, Occupation::A),
            firm(1, "0100000000", 200.0, Occupation::B),
        ];
        let mut workers = Vec::new();
        let mut matches = Vec::new();
        for i in 0..(men_in_a + women_in_a) {
            let g = if i < men_in_a { "1000000000" } else { "0000000000" };
            workers.push(worker(i as u64, g, 5.0));
            matches.push(m(i as u64, Some(0), 0.6));
        }
        let state = MarketState::new(workers, firms, [0, 1], Rng::from_seed(1));
        (state, matches)
    }

    #[test]
    fn strict_majority_flips_label_and_firm_bits() {
        let (mut state, matches) = two_occupation_state(60, 40);
        let flipped = recompute_occupation_labels(&mut state, &matches);
        assert_eq!(flipped, vec![Occupation::A]);
        assert_eq!(state.occ_labels, [1, 1]);
        assert_eq!(state.firms[0].bits.get(OCC_BIT), 1);
    }

    #[test]
    fn tie_keeps_label() {
        let (mut state, matches) = two_occupation_state(50, 50);
        let flipped = recompute_occupation_labels(&mut state, &matches);
        assert!(flipped.is_empty());
        assert_eq!(state.occ_labels, [0, 1]);
    }

    #[test]
    fn empty_occupation_keeps_label() {
        let (mut state, _) = two_occupation_state(1, 0);
        let flipped = recompute_occupation_labels(&mut state, &[]);
        assert!(flipped.is_empty());
        assert_eq!(state.occ_labels, [0, 1]);
    }

    #[test]
    fn gendered_preferences_follow_the_flip() {
        let (mut state, matches) = two_occupation_state(60, 40);
        for w in &mut state.workers {
            w.has_gendered_preference = true;
            // scramble the preference bit so the update is observable
            w.bits.set(OCC_BIT, 1 - w.bits.get(GENDER_BIT));
        }
        recompute_occupation_labels(&mut state, &matches);
        for w in &state.workers {
            assert_eq!(w.bits.get(OCC_BIT), w.bits.get(GENDER_BIT));
        }
    }

    fn fresh_baseline(seed: u64) -> (MarketState, Params) {
        let params = Params {
            n_workers: 100,
            n_firms: 10,
            seed,
            ..Params::default()
        };
        let state = scenario::init_baseline(&params, Rng::from_seed(seed)).unwrap();
        (state, params)
    }

    #[test]
    fn one_step_preserves_counts_and_caps_happiness() {
        let (mut state, params) = fresh_baseline(21);
        let genders_before = state.gender_counts();
        step(&mut state, &params);
        assert_eq!(state.workers.len(), params.n_workers);
        assert_eq!(state.gender_counts(), genders_before);
        // with cw = 1 and q <= 1 nobody can rise above H0
        assert!(state.workers.iter().all(|w| w.happiness <= params.h0));
        assert_eq!(state.t, 1);
    }

    #[test]
    fn firm_gains_when_supplied_overlap_exceeds_cf() {
        let workers: Vec<Worker> = (0..5).map(|i| worker(i, "0000000000", 5.0)).collect();
        let firms = vec![firm(0, "0000000000", 200.0, Occupation::A)];
        let mut state = MarketState::new(workers, firms, [0, 1], Rng::from_seed(1));
        let params = Params::default();
        step(&mut state, &params);
        // five workers at q = 1.0 -> 200 + 5.0 - 4.5 = 200.5
        assert!((state.firms[0].capital - 200.5).abs() < 1e-12);
    }

    #[test]
    fn zero_match_firm_loses_exactly_cf_per_step() {
        let workers = vec![worker(0, "0000000000", 5.0)];
        let firms = vec![
            firm(0, "0000000000", 200.0, Occupation::A),
            firm(1, "1111111111", 200.0, Occupation::B),
        ];
        let mut state = MarketState::new(workers, firms, [0, 1], Rng::from_seed(1));
        let params = Params::default();
        step(&mut state, &params);
        assert_eq!(state.firms[1].capital, 200.0 - params.cf);
    }

    #[test]
    fn dead_firms_stay_dead_and_unmatched() {
        let workers = vec![worker(0, "0000000000", 5.0)];
        let firms = vec![
            firm(0, "0000000000", 1.0, Occupation::A),
            firm(1, "0000000001", 200.0, Occupation::B),
        ];
        let mut state = MarketState::new(workers, firms, [0, 1], Rng::from_seed(1));
        let params = Params::default();
        // firm 0 wins the match (overlap 1.0) but 1 + 1 - 4.5 < 0
        let outcome = step(&mut state, &params);
        assert_eq!(outcome.dead_firm_ids, vec![FirmId(0)]);
        assert!(!state.firms[0].alive);
        let capital_after_death = state.firms[0].capital;

        let outcome = step(&mut state, &params);
        assert!(outcome.matches.iter().all(|m| m.firm_id != Some(FirmId(0))));
        assert_eq!(state.firms[0].capital, capital_after_death);
    }

    #[test]
    fn all_firms_dead_is_legal() {
        let workers = vec![worker(0, "0000000000", 5.0)];
        let mut firms = vec![firm(0, "0000000000", 1.0, Occupation::A)];
        firms[0].alive = false;
        let mut state = MarketState::new(workers, firms, [0, 1], Rng::from_seed(1));
        let params = Params::default();
        let outcome = step(&mut state, &params);
        assert!(outcome.matches.iter().all(|m| !m.is_matched()));
        assert_eq!(state.workers.len(), 1);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let (mut a, params) = fresh_baseline(33);
        let mut b = a.clone();
        for _ in 0..20 {
            assert_eq!(step(&mut a, &params), step(&mut b, &params));
        }
        assert_eq!(a, b);
    }

    #[test]
    fn replacement_removes_exactly_the_negative_workers() {
        let (mut state, params) = fresh_baseline(55);
        let mut saw_replacement = false;
        for _ in 0..40 {
            let ids_before: std::collections::HashSet<WorkerId> =
                state.workers.iter().map(|w| w.id).collect();
            let outcome = step(&mut state, &params);
            let ids_after: std::collections::HashSet<WorkerId> =
                state.workers.iter().map(|w| w.id).collect();

            // everyone left standing is non-negative; the replaced ids are
            // gone and exactly that many fresh ids appeared
            assert!(state.workers.iter().all(|w| w.happiness >= 0.0));
            for id in &outcome.replaced_worker_ids {
                assert!(ids_before.contains(id) && !ids_after.contains(id));
            }
            let fresh = ids_after.difference(&ids_before).count();
            assert_eq!(fresh, outcome.replaced_worker_ids.len());
            saw_replacement |= fresh > 0;
        }
        assert!(saw_replacement, "40 steps should trigger replacements");
    }
}
