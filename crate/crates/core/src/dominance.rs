//! Strong dominance between dynamic signals.
//!
//! `η` strongly dominates `η̂` (weakly higher value in every extended dynamic
//! decision problem, whatever the auxiliary signal) exactly when, in every
//! period, each cell of `η` either reveals the state or sits inside a cell
//! of `η̂`. This module decides that criterion, produces the chain
//! certificate behind the sufficiency direction, lifts `η̂`-strategies to
//! `η`-strategies that do at least as well, and searches for explicit
//! counterexample problems when the criterion fails.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decision::{self, profiles, AdaptedStrategy, ExtendedDecisionProblem, Utility};
use crate::dynamic::{self, build_history_tree, DynamicSignal};
use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::rational::Rational;
use crate::signal::{self, Cell, Clause, Placement, Prior, RorReport, Signal};

/// Reveal-or-refine verdict for one period (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodVerdict {
    pub period: usize,
    #[serde(flatten)]
    pub report: RorReport,
}

/// First period and cell at which reveal-or-refine fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FirstFailure {
    pub period: usize,
    pub cell: String,
    pub overlapped: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    pub verdict: bool,
    pub per_period: Vec<PeriodVerdict>,
    pub first_failure: Option<FirstFailure>,
}

/// Period-wise reveal-or-refine of `eta` against `eta_hat`.
pub fn dynamic_reveal_or_refine(eta: &DynamicSignal, eta_hat: &DynamicSignal) -> Result<DominanceReport> {
    eta.ensure_compatible(eta_hat)?;
    let mut per_period = Vec::with_capacity(eta.horizon());
    let mut first_failure = None;
    for (t, (a, b)) in eta.periods().iter().zip(eta_hat.periods()).enumerate() {
        let report = signal::reveal_or_refines(a, b)?;
        if first_failure.is_none() {
            if let Some(v) = report.first_failure() {
                if let Clause::Fail { overlapped } = &v.clause {
                    first_failure = Some(FirstFailure {
                        period: t + 1,
                        cell: v.cell.clone(),
                        overlapped: overlapped.clone(),
                    });
                }
            }
        }
        per_period.push(PeriodVerdict { period: t + 1, report });
    }
    Ok(DominanceReport { verdict: first_failure.is_none(), per_period, first_failure })
}

/// Strong dominance over all extended dynamic decision problems.
pub fn strongly_dominates(eta: &DynamicSignal, eta_hat: &DynamicSignal) -> Result<bool> {
    Ok(dynamic_reveal_or_refine(eta, eta_hat)?.verdict)
}

/// Strong dominance restricted to additively separable problems. The
/// criterion is the same as for the full class.
pub fn strongly_dominates_as(eta: &DynamicSignal, eta_hat: &DynamicSignal) -> Result<bool> {
    Ok(dynamic_reveal_or_refine(eta, eta_hat)?.verdict)
}

/// Sufficient condition for plain (no auxiliary information) dominance.
/// `false` means no conclusion: plain dominance can hold without it.
pub fn dominates_sufficient(eta: &DynamicSignal, eta_hat: &DynamicSignal) -> Result<bool> {
    Ok(dynamic_reveal_or_refine(eta, eta_hat)?.verdict)
}

/// One positive-probability chain `s¹ ⊇ … ⊇ sᵀ` of the dominant signal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainEntry {
    pub cells: Vec<String>,
    /// First period (1-based) whose cell reveals the state; `None` for never.
    pub reveal_time: Option<usize>,
    pub revealed_state: Option<String>,
    /// Cell of the dominated signal containing `s^t`, for every `t` before
    /// the reveal time.
    pub containers: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainCertificate {
    pub chains: Vec<ChainEntry>,
}

/// Builds, for every chain of `eta`'s history tree, the reveal time and the
/// containing cells of `eta_hat` before it.
pub fn verify_chain_certificate(
    eta: &DynamicSignal,
    eta_hat: &DynamicSignal,
    prior: &Prior,
) -> Result<ChainCertificate> {
    let report = dynamic_reveal_or_refine(eta, eta_hat)?;
    if !report.verdict {
        return Err(Error::Precondition(
            "the dominant signal does not dynamically reveal-or-refine the other".into(),
        ));
    }
    let tree = build_history_tree(eta, prior)?;
    let last = tree.horizon() - 1;
    let mut chains = Vec::new();
    for n in 0..tree.level(last).len() {
        let nodes = tree.ancestry(last, n);
        let mut entry = ChainEntry {
            cells: Vec::with_capacity(nodes.len()),
            reveal_time: None,
            revealed_state: None,
            containers: Vec::new(),
        };
        for (t, &m) in nodes.iter().enumerate() {
            let node = &tree.level(t)[m];
            entry.cells.push(node.id.clone());
            if entry.reveal_time.is_some() {
                continue;
            }
            let cell = &eta.period(t).cells()[node.cell];
            if cell.is_revealing() {
                entry.reveal_time = Some(t + 1);
                entry.revealed_state = cell.revealed_state().map(|k| eta.states().label(k).to_string());
                continue;
            }
            match eta_hat.period(t).place(cell) {
                Placement::Inside(k) => entry.containers.push(eta_hat.period(t).cells()[k].id().to_string()),
                Placement::Straddles(_) => {
                    return Err(Error::Precondition(format!(
                        "chain certificate broken at period {} cell {:?}",
                        t + 1,
                        node.id
                    )))
                }
            }
        }
        chains.push(entry);
    }
    Ok(ChainCertificate { chains })
}

/// Lifts a strategy for `eta_hat ∨ ρ` to one for `eta ∨ ρ`.
///
/// Along each chain of `eta`, until the state is revealed, the lifted
/// strategy copies the action `hat_strategy` plays at the containing cell
/// of `eta_hat` joined with the same `ρ` realization. From the reveal
/// period on it plays the continuation that is best for the revealed state
/// given the actions already taken.
pub fn lift_strategy(
    eta: &DynamicSignal,
    eta_hat: &DynamicSignal,
    problem: &ExtendedDecisionProblem,
    prior: &Prior,
    hat_strategy: &AdaptedStrategy,
) -> Result<AdaptedStrategy> {
    if !dynamic_reveal_or_refine(eta, eta_hat)?.verdict {
        return Err(Error::Precondition("lifting needs dynamic reveal-or-refine".into()));
    }
    let (joined, parents) = dynamic::dynamic_join_indexed(eta, problem.aux())?;
    let (joined_hat, hat_parents) = dynamic::dynamic_join_indexed(eta_hat, problem.aux())?;
    let tree = build_history_tree(&joined, prior)?;
    let counts = problem.action_counts();
    let horizon = counts.len();

    let hat_id = |t: usize, s_hat: usize, z: usize| -> Option<&str> {
        hat_parents[t]
            .iter()
            .position(|&p| p == (s_hat, z))
            .map(|k| joined_hat.period(t).cells()[k].id())
    };

    let mut strategy = AdaptedStrategy::new(horizon);
    // (level, node, actions so far, committed full profile once revealed)
    let mut stack: Vec<(usize, usize, Vec<usize>, Option<Vec<usize>>)> =
        (0..tree.level(0).len()).map(|n| (0, n, Vec::new(), None)).collect();
    while let Some((t, n, prefix, plan)) = stack.pop() {
        let node = &tree.level(t)[n];
        let (s, z) = parents[t][node.cell];
        let eta_cell = &eta.period(t).cells()[s];
        let plan = match plan {
            Some(p) => Some(p),
            None => eta_cell.revealed_state().map(|state| {
                best_continuation(problem.utility(), &counts, &prefix, state)
            }),
        };
        let action = match &plan {
            Some(p) => p[t],
            None => match eta_hat.period(t).place(eta_cell) {
                Placement::Inside(s_hat) => {
                    let id = hat_id(t, s_hat, z).ok_or_else(|| {
                        Error::Precondition(format!("no joined cell for period {} container", t + 1))
                    })?;
                    hat_strategy.action(t, id)
                }
                Placement::Straddles(_) => {
                    return Err(Error::Precondition(format!(
                        "cell {:?} of period {} neither reveals nor refines",
                        eta_cell.id(),
                        t + 1
                    )))
                }
            },
        };
        strategy.set(t, node.id.clone(), action);
        let mut next = prefix;
        next.push(action);
        for &c in &node.children {
            stack.push((t + 1, c, next.clone(), plan.clone()));
        }
    }
    Ok(strategy)
}

/// Full profile extending `prefix` that maximizes `u(·, state)`; the first
/// maximizer in profile order wins.
fn best_continuation(utility: &Utility, counts: &[usize], prefix: &[usize], state: usize) -> Vec<usize> {
    let rest = &counts[prefix.len()..];
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for cont in profiles(rest) {
        let mut full = prefix.to_vec();
        full.extend(cont);
        let v = utility.eval(counts, &full, state);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, full));
        }
    }
    best.expect("nonempty action sets").1
}

/// How a counterexample was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    GuidedSwap,
    RandomSearch,
}

/// An extended problem in which the dominated signal is strictly more
/// valuable than the would-be dominant one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub problem: ExtendedDecisionProblem,
    /// Period (1-based) whose action alone carries payoff.
    pub period: usize,
    pub w_dominant: Rational,
    pub w_dominated: Rational,
    pub construction: Construction,
    /// Candidates evaluated, this one included.
    pub candidates: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FalsifyOutcome {
    Found(Box<Counterexample>),
    /// Search exhausted. This is not evidence of dominance.
    NotFound { candidates: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FalsifyConfig {
    pub seed: u64,
    /// Maximum number of `(ρ, D)` candidates, the guided one included.
    pub budget: u64,
}

impl Default for FalsifyConfig {
    fn default() -> Self {
        FalsifyConfig { seed: 0, budget: 10_000 }
    }
}

/// Searches for a problem where `eta_hat` is strictly more valuable than
/// `eta`. Requires that `eta` fails dynamic reveal-or-refine against
/// `eta_hat`.
///
/// Candidates only reward the action in the first failing period. The
/// guided candidate comes first: its auxiliary signal labels each
/// (state, `η̂`-cell) piece so that `η̂ ∨ ρ` pins down the state while two
/// pieces of the failing cell, in different states and different `η̂`
/// cells, share a label; paired with guessing the state it leaves `η ∨ ρ`
/// uncertain. If that ever fails, seeded random candidates follow.
pub fn falsify(
    eta: &DynamicSignal,
    eta_hat: &DynamicSignal,
    prior: &Prior,
    cfg: FalsifyConfig,
) -> Result<FalsifyOutcome> {
    let report = dynamic_reveal_or_refine(eta, eta_hat)?;
    eta.states().ensure_same(prior.states())?;
    let failure = match report.first_failure {
        Some(f) => f,
        None => {
            return Err(Error::Precondition(
                "reveal-or-refine holds in every period; no counterexample exists".into(),
            ))
        }
    };
    let t = failure.period - 1;
    let states = eta.states().clone();
    let n = states.len();
    let fine = eta.period(t);
    let coarse = eta_hat.period(t);
    let cell = fine.cell(&failure.cell)?;

    let mut tried = 0u64;
    let check = |aux_signal: Signal, problem_of: &dyn Fn(DynamicSignal) -> Result<ExtendedDecisionProblem>|
     -> Result<Option<(ExtendedDecisionProblem, Rational, Rational)>> {
        let aux = aux_from(&aux_signal, t, eta.horizon());
        let problem = problem_of(aux)?;
        let w = decision::value(eta, &problem, prior)?.value;
        let w_hat = decision::value(eta_hat, &problem, prior)?.value;
        Ok((w_hat > w).then_some((problem, w, w_hat)))
    };
    let guess = |aux: DynamicSignal| {
        let labels = states.labels().iter().map(|s| format!("guess_{s}")).collect();
        ExtendedDecisionProblem::single_period(t, aux, labels, |a, s| {
            if a == s {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    };

    if cfg.budget > 0 {
        if let Some(rho) = swap_signal(cell, coarse) {
            tried += 1;
            if let Some((problem, w, w_hat)) = check(rho, &guess)? {
                return Ok(FalsifyOutcome::Found(Box::new(Counterexample {
                    problem,
                    period: t + 1,
                    w_dominant: w,
                    w_dominated: w_hat,
                    construction: Construction::GuidedSwap,
                    candidates: tried,
                })));
            }
        }
    }

    let atoms = signal::join(fine, coarse)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    while tried < cfg.budget {
        tried += 1;
        let rho = random_aux(&atoms, &mut rng);
        let family = rng.gen_range(0..3);
        let found = match family {
            0 => check(rho, &guess)?,
            1 => {
                let labels: Vec<String> = coarse.cells().iter().map(|c| format!("guess_{}", c.id())).collect();
                let payoff = |a: usize, s: usize| coarse.cells()[a].measure(s);
                check(rho, &|aux| ExtendedDecisionProblem::single_period(t, aux, labels.clone(), payoff))?
            }
            _ => {
                let k = rng.gen_range(2..=3);
                let table: Vec<Vec<Rational>> =
                    (0..k).map(|_| (0..n).map(|_| Rational::from_integer(rng.gen_range(0..=2))).collect()).collect();
                let labels: Vec<String> = (0..k).map(|a| format!("act{}", a + 1)).collect();
                check(rho, &|aux| {
                    ExtendedDecisionProblem::single_period(t, aux, labels.clone(), |a, s| table[a][s].clone())
                })?
            }
        };
        if let Some((problem, w, w_hat)) = found {
            return Ok(FalsifyOutcome::Found(Box::new(Counterexample {
                problem,
                period: t + 1,
                w_dominant: w,
                w_dominated: w_hat,
                construction: Construction::RandomSearch,
                candidates: tried,
            })));
        }
    }
    Ok(FalsifyOutcome::NotFound { candidates: tried })
}

/// Trivial before `period` (0-based), `signal` from then on.
fn aux_from(signal: &Signal, period: usize, horizon: usize) -> DynamicSignal {
    let trivial = Signal::trivial(signal.states());
    let periods = (0..horizon).map(|t| if t < period { trivial.clone() } else { signal.clone() }).collect();
    DynamicSignal::from_periods(signal.states().clone(), periods)
}

/// The guided auxiliary signal for a failing cell: piece `(θ_i, ŝ_k)` gets
/// label `(i + shift_k) mod |Θ|`. Shifts are chosen so that a piece of the
/// failing cell in `(θ_a, ŝ_c)` and one in `(θ_b, ŝ_d)` with `a ≠ b`,
/// `c ≠ d` share label 0. Within each `ŝ_k` labels are distinct across
/// states, so `η̂ ∨ ρ` reveals the state.
fn swap_signal(cell: &Cell, coarse: &Signal) -> Option<Signal> {
    let n = coarse.states().len();
    let hits = |state: usize, k: usize| cell.section(state).overlaps(coarse.cells()[k].section(state));
    let m = coarse.len();
    let mut pick = None;
    'search: for a in 0..n {
        for c in 0..m {
            if !hits(a, c) {
                continue;
            }
            for b in 0..n {
                for d in 0..m {
                    if a != b && c != d && hits(b, d) {
                        pick = Some((a, c, b, d));
                        break 'search;
                    }
                }
            }
        }
    }
    let (a, c, b, d) = pick?;
    let mut shift = vec![0usize; m];
    shift[c] = (n - a) % n;
    shift[d] = (n - b) % n;

    // Group pieces by label; number the labels by first appearance scanning
    // states, then cells.
    let mut order: Vec<usize> = Vec::new();
    let mut sections: Vec<Vec<IntervalSet>> = Vec::new();
    for state in 0..n {
        for (k, hat) in coarse.cells().iter().enumerate() {
            let label = (state + shift[k]) % n;
            let slot = match order.iter().position(|&l| l == label) {
                Some(p) => p,
                None => {
                    order.push(label);
                    sections.push(vec![IntervalSet::empty(); n]);
                    order.len() - 1
                }
            };
            sections[slot][state] = sections[slot][state].union(hat.section(state));
        }
    }
    let cells = sections.into_iter().enumerate().map(|(i, s)| Cell::new(format!("r{}", i + 1), s)).collect();
    Signal::from_cells(coarse.states().clone(), cells).ok()
}

/// Random auxiliary signal with at most four cells, built from the pieces
/// of `atoms` (optionally split at interval midpoints).
fn random_aux(atoms: &Signal, rng: &mut ChaCha8Rng) -> Signal {
    let n = atoms.states().len();
    let labels = rng.gen_range(2..=4);
    let mut sections = vec![vec![IntervalSet::empty(); n]; labels];
    let mut pieces: Vec<(usize, Rational, Rational)> = Vec::new();
    for c in atoms.cells() {
        for state in 0..n {
            for (lo, hi) in c.section(state).intervals() {
                if rng.gen_bool(0.5) {
                    let mid = lo.midpoint(hi);
                    pieces.push((state, lo.clone(), mid.clone()));
                    pieces.push((state, mid, hi.clone()));
                } else {
                    pieces.push((state, lo.clone(), hi.clone()));
                }
            }
        }
    }
    pieces.shuffle(rng);
    for (state, lo, hi) in pieces {
        let l = rng.gen_range(0..labels);
        sections[l][state] = sections[l][state].union(&IntervalSet::interval(lo, hi));
    }
    let cells = sections.into_iter().enumerate().map(|(i, s)| Cell::new(format!("r{}", i + 1), s)).collect();
    Signal::from_cells(atoms.states().clone(), cells).expect("sections match the state space")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::r;

    fn pair_over(t: usize, a: &Signal, b: &Signal) -> (DynamicSignal, DynamicSignal) {
        (DynamicSignal::constant(a, t), DynamicSignal::constant(b, t))
    }

    #[test]
    fn example_one_vs_coarse() {
        let ex = fixtures::example1();
        let coarse = DynamicSignal::constant(ex.period(0), 2);
        let rep = dynamic_reveal_or_refine(&ex, &coarse).unwrap();
        assert!(rep.verdict);
        assert!(rep.per_period.iter().all(|p| p.report.holds));
        assert!(strongly_dominates(&ex, &ex).unwrap());
        assert!(strongly_dominates(&ex, &coarse).unwrap());
        assert!(strongly_dominates_as(&ex, &coarse).unwrap());
        assert!(dominates_sufficient(&ex, &coarse).unwrap());
        // The reverse fails at period 2: l straddles lH and lL.
        let back = dynamic_reveal_or_refine(&coarse, &ex).unwrap();
        assert_eq!(
            back.first_failure,
            Some(FirstFailure { period: 2, cell: "l".into(), overlapped: vec!["lH".into(), "lL".into()] })
        );
    }

    #[test]
    fn blackwell_lift_fails_in_period_one() {
        let (eta, half) = fixtures::blackwell_pair();
        let (a, b) = pair_over(2, &eta, &half);
        let rep = dynamic_reveal_or_refine(&a, &b).unwrap();
        assert!(!rep.verdict);
        let f = rep.first_failure.unwrap();
        assert_eq!((f.period, f.cell.as_str()), (1, "s1"));
        assert!(!strongly_dominates(&a, &b).unwrap());
    }

    #[test]
    fn trivial_vs_revealing() {
        let ss = fixtures::two_states();
        let (a, b) = pair_over(1, &Signal::trivial(&ss), &Signal::fully_revealing(&ss));
        assert!(!strongly_dominates(&a, &b).unwrap());
        assert!(strongly_dominates(&b, &a).unwrap());
        assert!(dominates_sufficient(&b, &a).unwrap());
    }

    #[test]
    fn converse_failure_is_incomparable() {
        let (s1, s2) = fixtures::converse_failure_pair();
        let (a, b) = pair_over(1, &s1, &s2);
        assert!(!dominates_sufficient(&a, &b).unwrap());
        assert!(!dominates_sufficient(&b, &a).unwrap());
    }

    #[test]
    fn chain_certificate_of_example_one() {
        let ex = fixtures::example1();
        let coarse = DynamicSignal::constant(ex.period(0), 2);
        let cert = verify_chain_certificate(&ex, &coarse, &Prior::uniform(ex.states())).unwrap();
        let find = |leaf: &str| cert.chains.iter().find(|c| c.cells.last().unwrap() == leaf).unwrap();
        let lh = find("lH");
        assert_eq!(lh.cells, vec!["l", "lH"]);
        assert_eq!(lh.reveal_time, Some(2));
        assert_eq!(lh.revealed_state.as_deref(), Some("L"));
        assert_eq!(lh.containers, vec!["l"]);
        let hh = find("hH");
        assert_eq!(hh.reveal_time, None);
        assert_eq!(hh.containers, vec!["h", "h"]);
        let ll = find("lL");
        assert_eq!(ll.reveal_time, None);
        assert_eq!(ll.containers, vec!["l", "l"]);

        let ss = fixtures::two_states();
        let full = DynamicSignal::constant(&Signal::fully_revealing(&ss), 3);
        let cert = verify_chain_certificate(&full, &DynamicSignal::trivial(&ss, 3), &Prior::uniform(&ss)).unwrap();
        assert!(cert.chains.iter().all(|c| c.reveal_time == Some(1) && c.containers.is_empty()));

        assert!(matches!(
            verify_chain_certificate(&coarse, &ex, &Prior::uniform(&ss)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn falsify_trivial_vs_revealing() {
        let ss = fixtures::two_states();
        let (a, b) = pair_over(1, &Signal::trivial(&ss), &Signal::fully_revealing(&ss));
        match falsify(&a, &b, &Prior::uniform(&ss), FalsifyConfig::default()).unwrap() {
            FalsifyOutcome::Found(cx) => {
                assert_eq!(cx.w_dominant, r(1, 2));
                assert_eq!(cx.w_dominated, r(1, 1));
                assert_eq!(cx.construction, Construction::GuidedSwap);
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn falsify_blackwell_pair() {
        let (eta, half) = fixtures::blackwell_pair();
        let (a, b) = pair_over(1, &eta, &half);
        let prior = Prior::uniform(a.states());
        let cx = match falsify(&a, &b, &prior, FalsifyConfig::default()).unwrap() {
            FalsifyOutcome::Found(cx) => cx,
            other => panic!("expected a counterexample, got {other:?}"),
        };
        assert_eq!(cx.w_dominant, r(3, 4));
        assert_eq!(cx.w_dominated, r(1, 1));
        assert_eq!(cx.construction, Construction::GuidedSwap);
        // The guided auxiliary signal is exactly the swap signal.
        assert!(cx.problem.aux().period(0).equivalent(&fixtures::blackwell_swap_signal()));
        assert_eq!(cx.problem.aux().period(0).cells()[0], fixtures::blackwell_swap_signal().cells()[0]);
    }

    #[test]
    fn falsify_refuses_dominant_pairs() {
        let ex = fixtures::example1();
        let coarse = DynamicSignal::constant(ex.period(0), 2);
        let prior = Prior::uniform(ex.states());
        assert!(matches!(
            falsify(&ex, &coarse, &prior, FalsifyConfig::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn falsify_later_period() {
        let ex = fixtures::example1();
        let coarse = DynamicSignal::constant(ex.period(0), 2);
        let prior = Prior::new(ex.states().clone(), vec![r(2, 5), r(3, 5)]).unwrap();
        match falsify(&coarse, &ex, &prior, FalsifyConfig::default()).unwrap() {
            FalsifyOutcome::Found(cx) => {
                assert_eq!(cx.period, 2);
                assert!(cx.w_dominated > cx.w_dominant);
                assert_eq!(decision::value(&coarse, &cx.problem, &prior).unwrap().value, cx.w_dominant);
                assert_eq!(decision::value(&ex, &cx.problem, &prior).unwrap().value, cx.w_dominated);
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn zero_budget_tries_nothing() {
        let ss = fixtures::two_states();
        let (a, b) = pair_over(1, &Signal::trivial(&ss), &Signal::fully_revealing(&ss));
        let out = falsify(&a, &b, &Prior::uniform(&ss), FalsifyConfig { seed: 1, budget: 0 }).unwrap();
        assert_eq!(out, FalsifyOutcome::NotFound { candidates: 0 });
    }

    #[test]
    fn random_aux_is_a_partition() {
        let (eta, half) = fixtures::blackwell_pair();
        let atoms = signal::join(&eta, &half).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = random_aux(&atoms, &mut rng);
            assert!(signal::validate(&s).is_ok());
            assert!(s.len() <= 4);
        }
    }

    #[test]
    fn lifted_strategy_on_example_one() {
        let ex = fixtures::example1();
        let coarse = DynamicSignal::constant(ex.period(0), 2);
        let ss = ex.states().clone();
        let prior = Prior::uniform(&ss);
        let labels = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let u = Utility::general_from_fn(&[2, 2], 2, |p, s| {
            if p[0] == s && p[1] == s {
                r(1, 1)
            } else {
                r(0, 1)
            }
        });
        let problem =
            ExtendedDecisionProblem::plain(ss, vec![labels(&["L", "H"]), labels(&["L", "H"])], u).unwrap();
        let hat = decision::value(&coarse, &problem, &prior).unwrap();
        let lifted = lift_strategy(&ex, &coarse, &problem, &prior, &hat.strategy).unwrap();
        let lifted_value = decision::expected_utility(&ex, &problem, &prior, &lifted).unwrap();
        assert!(lifted_value >= hat.value);
        assert!(decision::value(&ex, &problem, &prior).unwrap().value >= lifted_value);
    }
}
