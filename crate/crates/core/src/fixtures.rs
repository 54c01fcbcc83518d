//! Bundled instances: the two-period worked example, the pair that is
//! Blackwell-ranked but not strongly ranked, and the pair witnessing that
//! plain dominance does not imply reveal-or-refine.
//!
//! All fixtures use the state space `["L", "H"]`.

use crate::dynamic::DynamicSignal;
use crate::interval::IntervalSet;
use crate::rational::{r, Rational};
use crate::signal::{Cell, Signal, StateSpace};

pub fn two_states() -> StateSpace {
    StateSpace::new(["L", "H"]).expect("static labels")
}

/// `(lo, hi)` pairs as quarters, e.g. `q(1, 3)` is `[1/4, 3/4)`.
fn q(lo: i64, hi: i64) -> IntervalSet {
    IntervalSet::interval(r(lo, 4), r(hi, 4))
}

fn cell(id: &str, low: IntervalSet, high: IntervalSet) -> Cell {
    Cell::new(id, vec![low, high])
}

fn signal(cells: Vec<Cell>) -> Signal {
    Signal::new(two_states(), cells).expect("fixture is a partition")
}

/// The worked two-period example.
///
/// Period 1: `h = (L,[0,1/4)) ∪ (H,[0,3/4))`, `l` the complement.
/// Period 2: `hH = h`, `lH = (L,[1/4,3/4))`, `lL = (L,[3/4,1)) ∪ (H,[3/4,1))`.
pub fn example1() -> DynamicSignal {
    let eta1 = signal(vec![cell("h", q(0, 1), q(0, 3)), cell("l", q(1, 4), q(3, 4))]);
    let eta2 = signal(vec![
        cell("hH", q(0, 1), q(0, 3)),
        cell("lH", q(1, 3), IntervalSet::empty()),
        cell("lL", q(3, 4), q(3, 4)),
    ]);
    DynamicSignal::new(two_states(), vec![eta1, eta2]).expect("fixture is a filtration")
}

/// `(η, η̂)` where `η = {s1 = (L,[0,3/4)) ∪ (H,[0,1/4)), s2}` and `η̂` splits
/// `[0,1)` at `1/2` in both states (cells `lo`, `hi`). `η`'s experiment
/// Blackwell-dominates the uninformative `η̂`, yet `η` does not
/// reveal-or-refine `η̂`.
pub fn blackwell_pair() -> (Signal, Signal) {
    let eta = signal(vec![cell("s1", q(0, 3), q(0, 1)), cell("s2", q(3, 4), q(1, 4))]);
    (eta, split_at_half())
}

/// `{lo = [0,1/2), hi = [1/2,1)}` in both states.
pub fn split_at_half() -> Signal {
    signal(vec![cell("lo", q(0, 2), q(0, 2)), cell("hi", q(2, 4), q(2, 4))])
}

/// Auxiliary signal `{r1 = (L,[0,1/2)) ∪ (H,[1/2,1)), r2}` that makes the
/// split-at-1/2 signal fully revealing.
pub fn blackwell_swap_signal() -> Signal {
    signal(vec![cell("r1", q(0, 2), q(2, 4)), cell("r2", q(2, 4), q(0, 2))])
}

/// `(σ₁, σ₂)`: σ₁ splits at 1/2, σ₂ groups `[0,1/4) ∪ [1/2,3/4)` against the
/// rest, in both states. Both are uninformative, so every plain decision
/// problem values them equally, while neither reveal-or-refines the other.
pub fn converse_failure_pair() -> (Signal, Signal) {
    let a = IntervalSet::from_intervals([(r(0, 1), r(1, 4)), (r(1, 2), r(3, 4))]);
    let b = IntervalSet::from_intervals([(r(1, 4), r(1, 2)), (r(3, 4), r(1, 1))]);
    let sigma2 = signal(vec![cell("c", a.clone(), a), cell("d", b.clone(), b)]);
    (split_at_half(), sigma2)
}

/// The guess-the-state payoff used throughout the examples: 1 for a correct
/// guess, 0 otherwise.
pub fn guess_payoff(guess: usize, state: usize) -> Rational {
    if guess == state {
        Rational::one()
    } else {
        Rational::zero()
    }
}
