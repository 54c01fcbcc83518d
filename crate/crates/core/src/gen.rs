//! Seeded random signals, dynamic signals and decision problems.
//!
//! A [`Generator`] is fully determined by its config and a draw index, so a
//! corpus can be regenerated item by item. Breakpoints are rationals whose
//! denominators never exceed `denominator_bound`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decision::{ExtendedDecisionProblem, Utility};
use crate::dynamic::{dynamic_join, DynamicSignal};
use crate::interval::IntervalSet;
use crate::rational::Rational;
use crate::signal::{Cell, Signal, StateSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_states: usize,
    pub max_periods: usize,
    pub max_cells_per_period: usize,
    pub max_actions_per_period: usize,
    pub denominator_bound: u32,
    /// Chance of a separable utility when the general table is small enough.
    pub as_probability: f64,
    /// Largest `|A_1| ⋯ |A_T| · |Θ|` drawn as a general table.
    pub general_table_cap: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_states: 3,
            max_periods: 3,
            max_cells_per_period: 4,
            max_actions_per_period: 3,
            denominator_bound: 16,
            as_probability: 0.5,
            general_table_cap: 256,
        }
    }
}

impl GenConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

impl Generator {
    /// Same as `for_draw(cfg, 0)`.
    pub fn new(cfg: &GenConfig) -> Self {
        Self::for_draw(cfg, 0)
    }

    pub fn for_draw(cfg: &GenConfig, index: u64) -> Self {
        assert!(
            cfg.max_states >= 1
                && cfg.max_periods >= 1
                && cfg.max_cells_per_period >= 1
                && cfg.max_actions_per_period >= 1
                && cfg.denominator_bound >= 1,
            "generator bounds must be positive"
        );
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(index);
        Generator { cfg: cfg.clone(), rng }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Between 2 and `max_states` states (1 if that is the bound), labeled
    /// `w1, w2, …`.
    pub fn states(&mut self) -> StateSpace {
        let n = if self.cfg.max_states == 1 { 1 } else { self.rng.gen_range(2..=self.cfg.max_states) };
        StateSpace::new((1..=n).map(|i| format!("w{i}"))).expect("generated labels are distinct")
    }

    pub fn horizon(&mut self) -> usize {
        self.rng.gen_range(1..=self.cfg.max_periods)
    }

    fn grid_point(&mut self) -> Option<Rational> {
        let bound = self.cfg.denominator_bound as i64;
        if bound < 2 {
            return None;
        }
        let d = self.rng.gen_range(2..=bound);
        Some(Rational::new(self.rng.gen_range(1..d), d))
    }

    /// A grid point strictly inside `(lo, hi)`, if a few tries find one.
    fn grid_point_in(&mut self, lo: &Rational, hi: &Rational) -> Option<Rational> {
        let bound = self.cfg.denominator_bound as i64;
        for _ in 0..8 {
            if bound < 2 {
                return None;
            }
            let d = self.rng.gen_range(2..=bound);
            let dr = Rational::from_integer(d);
            // numerators n with lo < n/d < hi
            let first = (lo * &dr).floor_int() + 1;
            let last = (hi * &dr).ceil_int() - 1;
            if first <= last {
                return Some(Rational::new(self.rng.gen_range(first..=last), d));
            }
        }
        None
    }

    /// Per state, cut `[0,1)` at random grid points and hand the pieces to
    /// at most `max_cells_per_period` cells. Cells null in every state are
    /// dropped; a single surviving cell gives the trivial signal.
    pub fn signal_on(&mut self, states: &StateSpace) -> Signal {
        let k = self.rng.gen_range(1..=self.cfg.max_cells_per_period);
        if k == 1 {
            return Signal::trivial(states);
        }
        let mut sections = vec![vec![IntervalSet::empty(); states.len()]; k];
        for s in 0..states.len() {
            let want = self.rng.gen_range(1..=k + 1);
            let mut cuts: Vec<Rational> = Vec::new();
            for _ in 0..4 * want {
                if cuts.len() + 1 >= want {
                    break;
                }
                if let Some(p) = self.grid_point() {
                    if !cuts.contains(&p) {
                        cuts.push(p);
                    }
                }
            }
            cuts.sort();
            let mut bounds = vec![Rational::zero()];
            bounds.extend(cuts);
            bounds.push(Rational::one());
            // the first k pieces go to distinct cells
            let mut order: Vec<usize> = (0..k).collect();
            order.shuffle(&mut self.rng);
            for (i, w) in bounds.windows(2).enumerate() {
                let c = if i < k { order[i] } else { self.rng.gen_range(0..k) };
                let piece = IntervalSet::interval(w[0].clone(), w[1].clone());
                sections[c][s] = sections[c][s].union(&piece);
            }
        }
        let cells: Vec<Cell> = sections
            .into_iter()
            .map(|sec| Cell::new(String::new(), sec))
            .filter(|c| !c.is_null())
            .enumerate()
            .map(|(i, c)| Cell::new(format!("c{}", i + 1), c.sections().to_vec()))
            .collect();
        if cells.len() == 1 {
            return Signal::trivial(states);
        }
        Signal::new(states.clone(), cells).expect("generated cells partition the space")
    }

    /// Splits some cells of `signal` in two, keeping the total number of
    /// cells within `max_cells_per_period`. Children of `c` are `c.1` and
    /// `c.2`; unsplit cells keep their id.
    pub fn split(&mut self, signal: &Signal) -> Signal {
        let mut count = signal.len();
        let mut out = Vec::with_capacity(signal.len() * 2);
        for cell in signal.cells() {
            if count >= self.cfg.max_cells_per_period || !self.rng.gen_bool(0.5) {
                out.push(cell.clone());
                continue;
            }
            let n = cell.sections().len();
            let mut a = vec![IntervalSet::empty(); n];
            let mut b = vec![IntervalSet::empty(); n];
            for (s, sec) in cell.sections().iter().enumerate() {
                for (lo, hi) in sec.intervals() {
                    let choice = self.rng.gen_range(0..3);
                    let cut = if choice == 2 { self.grid_point_in(lo, hi) } else { None };
                    match (choice, cut) {
                        (_, Some(m)) => {
                            let left = IntervalSet::interval(lo.clone(), m.clone());
                            let right = IntervalSet::interval(m, hi.clone());
                            let (x, y) = if self.rng.gen_bool(0.5) { (left, right) } else { (right, left) };
                            a[s] = a[s].union(&x);
                            b[s] = b[s].union(&y);
                        }
                        (0, None) => a[s] = a[s].union(&IntervalSet::interval(lo.clone(), hi.clone())),
                        _ => b[s] = b[s].union(&IntervalSet::interval(lo.clone(), hi.clone())),
                    }
                }
            }
            let (a, b) = (Cell::new(format!("{}.1", cell.id()), a), Cell::new(format!("{}.2", cell.id()), b));
            if a.is_null() || b.is_null() {
                out.push(cell.clone());
            } else {
                out.push(a);
                out.push(b);
                count += 1;
            }
        }
        Signal::new(signal.states().clone(), out).expect("splitting keeps a partition")
    }

    /// A filtration of the given horizon built by progressive splitting.
    pub fn dynamic_on(&mut self, states: &StateSpace, horizon: usize) -> DynamicSignal {
        let first = self.signal_on(states);
        self.extend(first, horizon)
    }

    fn extend(&mut self, first: Signal, horizon: usize) -> DynamicSignal {
        let mut periods = vec![first];
        while periods.len() < horizon {
            let next = self.split(periods.last().expect("nonempty"));
            periods.push(next);
        }
        DynamicSignal::new(periods[0].states().clone(), periods).expect("splitting yields a filtration")
    }

    /// A utility entry `p/q` with `q ≤ 4` and `|p/q| ≤ denominator_bound`.
    pub fn utility_value(&mut self) -> Rational {
        let bound = self.cfg.denominator_bound as i64;
        let q = self.rng.gen_range(1..=4);
        Rational::new(self.rng.gen_range(-bound * q..=bound * q), q)
    }

    /// A problem with the given horizon and states; the utility is separable
    /// with probability `as_probability`, and always when the general table
    /// would exceed `general_table_cap`.
    pub fn problem(&mut self, horizon: usize, states: &StateSpace) -> ExtendedDecisionProblem {
        self.problem_with(horizon, states, None)
    }

    /// As [`Generator::problem`], with `separable` forcing the utility kind.
    pub fn problem_with(
        &mut self,
        horizon: usize,
        states: &StateSpace,
        separable: Option<bool>,
    ) -> ExtendedDecisionProblem {
        let counts: Vec<usize> =
            (0..horizon).map(|_| self.rng.gen_range(1..=self.cfg.max_actions_per_period)).collect();
        let table = counts.iter().product::<usize>().saturating_mul(states.len());
        let separable = match separable {
            Some(x) => x,
            None => table > self.cfg.general_table_cap || self.rng.gen_bool(self.cfg.as_probability),
        };
        let utility = if separable {
            Utility::separable_from_fn(&counts, states.len(), |_, _, _| self.utility_value())
        } else {
            Utility::general_from_fn(&counts, states.len(), |_, _| self.utility_value())
        };
        let aux = self.dynamic_on(states, horizon);
        let actions = counts.iter().map(|&c| (1..=c).map(|a| format!("a{a}")).collect()).collect();
        ExtendedDecisionProblem::new(states.clone(), actions, utility, aux).expect("generated problem is well formed")
    }

    /// A pair `(η, η̂)` for which dynamic reveal-or-refine holds by
    /// construction: `η` copies `η̂` up to a random period, from then on
    /// optionally exposes a random set of states, and is finally joined with
    /// an independent filtration.
    pub fn ror_pair(&mut self, states: &StateSpace, horizon: usize) -> (DynamicSignal, DynamicSignal) {
        let hat = self.dynamic_on(states, horizon);
        let base = if self.rng.gen_bool(2.0 / 3.0) {
            let from = self.rng.gen_range(0..horizon);
            let mut exposed: Vec<usize> = (0..states.len()).filter(|_| self.rng.gen_bool(0.5)).collect();
            if exposed.is_empty() {
                exposed.push(self.rng.gen_range(0..states.len()));
            }
            expose_states(&hat, from, &exposed)
        } else {
            hat.clone()
        };
        let extra = if self.rng.gen_bool(0.5) {
            self.dynamic_on(states, horizon)
        } else {
            DynamicSignal::trivial(states, horizon)
        };
        let eta = dynamic_join(&base, &extra).expect("same states and horizon");
        (eta, hat)
    }

    /// Two independent filtrations on the same states and horizon.
    pub fn pair(&mut self, states: &StateSpace, horizon: usize) -> (DynamicSignal, DynamicSignal) {
        (self.dynamic_on(states, horizon), self.dynamic_on(states, horizon))
    }
}

/// From period `from` (0-based) on, every state in `exposed` is revealed
/// inside its period-`from - 1` cell, while the remaining states follow
/// `ds`.
pub fn expose_states(ds: &DynamicSignal, from: usize, exposed: &[usize]) -> DynamicSignal {
    let states = ds.states();
    let n = states.len();
    let before = if from == 0 { Signal::trivial(states) } else { ds.period(from - 1).clone() };
    let restrict = |cell: &Cell, keep: &dyn Fn(usize) -> bool, id: String| {
        let sections =
            (0..n).map(|s| if keep(s) { cell.section(s).clone() } else { IntervalSet::empty() }).collect();
        Cell::new(id, sections)
    };
    let mut revealed = Vec::new();
    for &s in exposed {
        for cell in before.cells() {
            revealed.push(restrict(cell, &|k| k == s, format!("{}!{}", cell.id(), states.label(s))));
        }
    }
    let periods = ds
        .periods()
        .iter()
        .enumerate()
        .map(|(t, p)| {
            if t < from {
                return p.clone();
            }
            let mut cells = revealed.clone();
            cells.extend(p.cells().iter().map(|c| restrict(c, &|k| !exposed.contains(&k), c.id().to_string())));
            Signal::from_cells(states.clone(), cells).expect("sections match the state space")
        })
        .collect();
    DynamicSignal::new(states.clone(), periods).expect("exposing states keeps a filtration")
}

/// Draw 0 of `cfg`: states, then one signal on them.
pub fn gen_signal(cfg: &GenConfig) -> Signal {
    let mut g = Generator::new(cfg);
    let states = g.states();
    g.signal_on(&states)
}

/// Draw 0 of `cfg`. Its first period is exactly [`gen_signal`]`(cfg)`.
pub fn gen_dynamic_signal(cfg: &GenConfig) -> DynamicSignal {
    let mut g = Generator::new(cfg);
    let states = g.states();
    let first = g.signal_on(&states);
    let horizon = g.horizon();
    g.extend(first, horizon)
}

/// Draw 0 of `cfg`.
pub fn gen_problem(cfg: &GenConfig, horizon: usize, states: &StateSpace) -> ExtendedDecisionProblem {
    Generator::new(cfg).problem(horizon, states)
}
