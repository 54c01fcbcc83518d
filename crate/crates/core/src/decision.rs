//! Extended dynamic decision problems and the exact value of a dynamic
//! signal.
//!
//! The agent observes `η ∨ ρ` period by period, where `ρ` is the problem's
//! auxiliary dynamic signal, and picks one action per period with an adapted
//! deterministic strategy. [`value`] solves the problem exactly by backward
//! induction over the history tree of `η ∨ ρ`. Because a general utility
//! couples periods, the induction state is the pair (node, actions chosen so
//! far). [`value_as`] is the fast path for additively separable utilities
//! and [`value_bruteforce`] enumerates every adapted strategy as an oracle.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dynamic::{self, build_history_tree, DynamicSignal, HistoryTree};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::signal::{Prior, StateSpace};

/// Payoff over full action profiles and states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Utility {
    /// `table[profile][state]`, profiles in mixed-radix order with period 1
    /// most significant.
    General { table: Vec<Vec<Rational>> },
    /// `periods[t][action][state]`; `u(a, θ) = Σ_t u_t(a_t, θ)`.
    Separable { periods: Vec<Vec<Vec<Rational>>> },
}

impl Utility {
    /// Tabulates `f(profile, state)` over every profile.
    pub fn general_from_fn<F>(action_counts: &[usize], states: usize, mut f: F) -> Utility
    where
        F: FnMut(&[usize], usize) -> Rational,
    {
        let table = profiles(action_counts)
            .map(|p| (0..states).map(|s| f(&p, s)).collect())
            .collect();
        Utility::General { table }
    }

    /// Tabulates `f(period, action, state)`.
    pub fn separable_from_fn<F>(action_counts: &[usize], states: usize, mut f: F) -> Utility
    where
        F: FnMut(usize, usize, usize) -> Rational,
    {
        let periods = action_counts
            .iter()
            .enumerate()
            .map(|(t, &n)| (0..n).map(|a| (0..states).map(|s| f(t, a, s)).collect()).collect())
            .collect();
        Utility::Separable { periods }
    }

    pub fn is_separable(&self) -> bool {
        matches!(self, Utility::Separable { .. })
    }

    /// `u(profile, state)`.
    pub fn eval(&self, action_counts: &[usize], profile: &[usize], state: usize) -> Rational {
        match self {
            Utility::General { table } => table[profile_index(action_counts, profile)][state].clone(),
            Utility::Separable { periods } => {
                periods.iter().zip(profile).map(|(u, &a)| u[a][state].clone()).sum()
            }
        }
    }

    /// The same utility written as a full table.
    pub fn to_general(&self, action_counts: &[usize], states: usize) -> Utility {
        match self {
            Utility::General { .. } => self.clone(),
            Utility::Separable { .. } => {
                Utility::general_from_fn(action_counts, states, |p, s| self.eval(action_counts, p, s))
            }
        }
    }

    /// `scale · u + shift` with `scale > 0`. For separable utilities the shift
    /// is added to the first period only, so the total shifts by exactly
    /// `shift`.
    pub fn affine(&self, scale: &Rational, shift: &Rational) -> Utility {
        let map = |x: &Rational| x * scale;
        match self {
            Utility::General { table } => Utility::General {
                table: table.iter().map(|row| row.iter().map(|x| map(x) + shift).collect()).collect(),
            },
            Utility::Separable { periods } => Utility::Separable {
                periods: periods
                    .iter()
                    .enumerate()
                    .map(|(t, u)| {
                        u.iter()
                            .map(|row| {
                                row.iter()
                                    .map(|x| if t == 0 { map(x) + shift } else { map(x) })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect(),
            },
        }
    }
}

/// Mixed-radix index of a full profile.
pub fn profile_index(action_counts: &[usize], profile: &[usize]) -> usize {
    action_counts.iter().zip(profile).fold(0, |acc, (&n, &a)| acc * n + a)
}

/// Every profile in mixed-radix order.
pub fn profiles(action_counts: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = action_counts.iter().product();
    (0..total).map(move |mut idx| {
        let mut p = vec![0; action_counts.len()];
        for t in (0..action_counts.len()).rev() {
            p[t] = idx % action_counts[t];
            idx /= action_counts[t];
        }
        p
    })
}

/// `D = (u, A, ρ)` over a fixed state space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedDecisionProblem {
    states: StateSpace,
    actions: Vec<Vec<String>>,
    utility: Utility,
    aux: DynamicSignal,
}

impl ExtendedDecisionProblem {
    pub fn new(
        states: StateSpace,
        actions: Vec<Vec<String>>,
        utility: Utility,
        aux: DynamicSignal,
    ) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::Schema("problem has no periods".into()));
        }
        for (t, a) in actions.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::Schema(format!("period {} has no actions", t + 1)));
            }
            for (i, x) in a.iter().enumerate() {
                if a[..i].contains(x) {
                    return Err(Error::Schema(format!("period {} repeats action {x:?}", t + 1)));
                }
            }
        }
        let counts: Vec<usize> = actions.iter().map(Vec::len).collect();
        let n = states.len();
        match &utility {
            Utility::General { table } => {
                let expected: usize = counts.iter().product();
                if table.len() != expected || table.iter().any(|row| row.len() != n) {
                    return Err(Error::Schema(format!(
                        "utility table must have {expected} profiles × {n} states"
                    )));
                }
            }
            Utility::Separable { periods } => {
                let ok = periods.len() == counts.len()
                    && periods
                        .iter()
                        .zip(&counts)
                        .all(|(u, &c)| u.len() == c && u.iter().all(|row| row.len() == n));
                if !ok {
                    return Err(Error::Schema("separable utility shape does not match actions".into()));
                }
            }
        }
        states.ensure_same(aux.states())?;
        if aux.horizon() != actions.len() {
            return Err(Error::HorizonMismatch { left: actions.len(), right: aux.horizon() });
        }
        dynamic::validate_dynamic(&aux)?;
        Ok(ExtendedDecisionProblem { states, actions, utility, aux })
    }

    /// Problem with no auxiliary information (trivial `ρ`).
    pub fn plain(states: StateSpace, actions: Vec<Vec<String>>, utility: Utility) -> Result<Self> {
        let aux = DynamicSignal::trivial(&states, actions.len());
        Self::new(states, actions, utility, aux)
    }

    /// A problem where only the action in `period` (0-based) matters:
    /// every other period offers the single action `wait`.
    pub fn single_period<F>(
        period: usize,
        aux: DynamicSignal,
        labels: Vec<String>,
        mut payoff: F,
    ) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Rational,
    {
        let states = aux.states().clone();
        let horizon = aux.horizon();
        let actions: Vec<Vec<String>> = (0..horizon)
            .map(|t| if t == period { labels.clone() } else { vec!["wait".to_string()] })
            .collect();
        let counts: Vec<usize> = actions.iter().map(Vec::len).collect();
        let utility = Utility::separable_from_fn(&counts, states.len(), |t, a, s| {
            if t == period {
                payoff(a, s)
            } else {
                Rational::zero()
            }
        });
        Self::new(states, actions, utility, aux)
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn actions(&self) -> &[Vec<String>] {
        &self.actions
    }

    pub fn action_counts(&self) -> Vec<usize> {
        self.actions.iter().map(Vec::len).collect()
    }

    pub fn utility(&self) -> &Utility {
        &self.utility
    }

    pub fn aux(&self) -> &DynamicSignal {
        &self.aux
    }

    pub fn horizon(&self) -> usize {
        self.actions.len()
    }

    pub fn with_aux(&self, aux: DynamicSignal) -> Result<Self> {
        Self::new(self.states.clone(), self.actions.clone(), self.utility.clone(), aux)
    }

    pub fn with_utility(&self, utility: Utility) -> Result<Self> {
        Self::new(self.states.clone(), self.actions.clone(), utility, self.aux.clone())
    }

    fn check(&self, eta: &DynamicSignal, prior: &Prior) -> Result<()> {
        eta.ensure_compatible(&self.aux)?;
        eta.states().ensure_same(prior.states())
    }
}

/// Per period, the action index played at each realization of `η ∨ ρ`
/// (keyed by join-cell id). Missing entries play the first action; they
/// only arise at zero-probability histories.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdaptedStrategy {
    periods: Vec<BTreeMap<String, usize>>,
}

impl AdaptedStrategy {
    pub fn new(horizon: usize) -> Self {
        AdaptedStrategy { periods: vec![BTreeMap::new(); horizon] }
    }

    pub fn set(&mut self, period: usize, cell: impl Into<String>, action: usize) {
        self.periods[period].insert(cell.into(), action);
    }

    pub fn action(&self, period: usize, cell: &str) -> usize {
        self.periods[period].get(cell).copied().unwrap_or(0)
    }

    pub fn periods(&self) -> &[BTreeMap<String, usize>] {
        &self.periods
    }

    /// Action labels instead of indices.
    pub fn labeled(&self, problem: &ExtendedDecisionProblem) -> Vec<BTreeMap<String, String>> {
        self.periods
            .iter()
            .enumerate()
            .map(|(t, m)| m.iter().map(|(k, &a)| (k.clone(), problem.actions[t][a].clone())).collect())
            .collect()
    }
}

/// `W` together with a strategy attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueResult {
    pub value: Rational,
    pub strategy: AdaptedStrategy,
}

/// Serializable view of a [`ValueResult`].
#[derive(Clone, Debug, Serialize)]
pub struct ValueReport {
    pub value: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_decimal: Option<String>,
    pub strategy: Vec<BTreeMap<String, String>>,
}

impl ValueResult {
    pub fn report(&self, problem: &ExtendedDecisionProblem, decimal: bool) -> ValueReport {
        ValueReport {
            value: self.value.clone(),
            value_decimal: decimal.then(|| self.value.to_decimal_string()),
            strategy: self.strategy.labeled(problem),
        }
    }
}

/// Keeps the first maximizer.
fn argmax<I: Iterator<Item = Rational>>(values: I) -> (usize, Rational) {
    let mut best: Option<(usize, Rational)> = None;
    for (a, v) in values.enumerate() {
        match &best {
            Some((_, b)) if v <= *b => {}
            _ => best = Some((a, v)),
        }
    }
    best.expect("action sets are nonempty")
}

fn joined_tree(
    eta: &DynamicSignal,
    problem: &ExtendedDecisionProblem,
    prior: &Prior,
) -> Result<HistoryTree> {
    problem.check(eta, prior)?;
    let joined = dynamic::dynamic_join(eta, &problem.aux)?;
    build_history_tree(&joined, prior)
}

/// `W(η)`: the exact maximum over adapted deterministic strategies of
/// expected utility when observing `η ∨ ρ`. Ties go to the earlier action.
pub fn value(eta: &DynamicSignal, problem: &ExtendedDecisionProblem, prior: &Prior) -> Result<ValueResult> {
    let tree = joined_tree(eta, problem, prior)?;
    Ok(solve_tree(&tree, problem))
}

/// Backward induction on a history tree; the table of node `n` on level `t`
/// is indexed by the mixed-radix prefix of actions from periods before `t`.
pub(crate) fn solve_tree(tree: &HistoryTree, problem: &ExtendedDecisionProblem) -> ValueResult {
    let counts = problem.action_counts();
    let horizon = tree.horizon();
    let mut prefixes = vec![1usize; horizon];
    for t in 1..horizon {
        prefixes[t] = prefixes[t - 1] * counts[t - 1];
    }

    let mut values: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); horizon];
    let mut choices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); horizon];
    for t in (0..horizon).rev() {
        let mut level_values = Vec::with_capacity(tree.level(t).len());
        let mut level_choices = Vec::with_capacity(tree.level(t).len());
        for node in tree.level(t) {
            let mut vs = Vec::with_capacity(prefixes[t]);
            let mut cs = Vec::with_capacity(prefixes[t]);
            for p in 0..prefixes[t] {
                let (a, v) = if t + 1 == horizon {
                    argmax((0..counts[t]).map(|a| {
                        let idx = p * counts[t] + a;
                        node.joint
                            .iter()
                            .enumerate()
                            .filter(|(_, w)| !w.is_zero())
                            .map(|(s, w)| w * utility_at(problem, &counts, idx, s))
                            .sum()
                    }))
                } else {
                    let next = &values[t + 1];
                    argmax((0..counts[t]).map(|a| {
                        let q = p * counts[t] + a;
                        node.children.iter().map(|&c| &next[c][q]).sum()
                    }))
                };
                vs.push(v);
                cs.push(a);
            }
            level_values.push(vs);
            level_choices.push(cs);
        }
        values[t] = level_values;
        choices[t] = level_choices;
    }

    let total: Rational = values[0].iter().map(|v| &v[0]).sum();
    let mut strategy = AdaptedStrategy::new(horizon);
    let mut stack: Vec<(usize, usize, usize)> = (0..tree.level(0).len()).map(|n| (0, n, 0)).collect();
    while let Some((t, n, p)) = stack.pop() {
        let a = choices[t][n][p];
        let node = &tree.level(t)[n];
        strategy.set(t, node.id.clone(), a);
        for &c in &node.children {
            stack.push((t + 1, c, p * counts[t] + a));
        }
    }
    ValueResult { value: total, strategy }
}

fn utility_at(problem: &ExtendedDecisionProblem, counts: &[usize], idx: usize, state: usize) -> Rational {
    match &problem.utility {
        Utility::General { table } => table[idx][state].clone(),
        Utility::Separable { .. } => {
            let p = profiles(counts).nth(idx).expect("index in range");
            problem.utility.eval(counts, &p, state)
        }
    }
}

/// Fast path for additively separable utilities: each node independently
/// maximizes its conditional expected period payoff.
pub fn value_as(eta: &DynamicSignal, problem: &ExtendedDecisionProblem, prior: &Prior) -> Result<ValueResult> {
    let periods = match &problem.utility {
        Utility::Separable { periods } => periods,
        Utility::General { .. } => {
            return Err(Error::Precondition("value_as needs an additively separable utility".into()))
        }
    };
    let tree = joined_tree(eta, problem, prior)?;
    let mut total = Rational::zero();
    let mut strategy = AdaptedStrategy::new(tree.horizon());
    for (t, level) in tree.levels().iter().enumerate() {
        for node in level {
            let (a, v) = argmax(periods[t].iter().map(|row| {
                node.joint.iter().zip(row).filter(|(w, _)| !w.is_zero()).map(|(w, u)| w * u).sum()
            }));
            total += v;
            strategy.set(t, node.id.clone(), a);
        }
    }
    Ok(ValueResult { value: total, strategy })
}

/// `W̃(η)`: value with no auxiliary information.
pub fn value_nonrobust(
    eta: &DynamicSignal,
    utility: &Utility,
    actions: &[Vec<String>],
    prior: &Prior,
) -> Result<ValueResult> {
    let problem = ExtendedDecisionProblem::plain(eta.states().clone(), actions.to_vec(), utility.clone())?;
    value(eta, &problem, prior)
}

/// Exhaustive oracle over every adapted deterministic strategy.
///
/// Works from the induced experiment of `η ∨ ρ` rather than the history
/// tree: decision points are the realized cells of each period, and a
/// strategy assigns an action to each. Fails when the number of strategies
/// exceeds `budget`.
pub fn value_bruteforce(
    eta: &DynamicSignal,
    problem: &ExtendedDecisionProblem,
    prior: &Prior,
    budget: u64,
) -> Result<ValueResult> {
    problem.check(eta, prior)?;
    let joined = dynamic::dynamic_join(eta, &problem.aux)?;
    let experiment = dynamic::to_experiment(&joined)?;
    let counts = problem.action_counts();
    let horizon = counts.len();

    // Paths with positive probability, each with its per-state joint weight.
    let rows: Vec<(&[String], Vec<Rational>)> = experiment
        .rows()
        .iter()
        .map(|row| {
            let w: Vec<Rational> = row.probs.iter().zip(prior.weights()).map(|(p, m)| p * m).collect();
            (row.path.as_slice(), w)
        })
        .filter(|(_, w)| w.iter().any(Rational::is_positive))
        .collect();

    // Decision points per period, in first-appearance order.
    let mut points: Vec<Vec<&str>> = vec![Vec::new(); horizon];
    for (path, _) in &rows {
        for (t, id) in path.iter().enumerate() {
            if !points[t].contains(&id.as_str()) {
                points[t].push(id);
            }
        }
    }
    let slots: Vec<(usize, usize)> =
        points.iter().enumerate().flat_map(|(t, ps)| (0..ps.len()).map(move |k| (t, k))).collect();
    let mut needed: u128 = 1;
    for &(t, _) in &slots {
        needed = needed.saturating_mul(counts[t] as u128);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed: format!("more than {budget}"), budget });
        }
    }

    // Row payoff for every full profile.
    let all_profiles: Vec<Vec<usize>> = profiles(&counts).collect();
    let row_payoff: Vec<Vec<Rational>> = rows
        .iter()
        .map(|(_, w)| {
            all_profiles
                .iter()
                .map(|p| {
                    w.iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(s, x)| x * problem.utility.eval(&counts, p, s))
                        .sum()
                })
                .collect()
        })
        .collect();
    // Slot of each path position.
    let row_slots: Vec<Vec<usize>> = rows
        .iter()
        .map(|(path, _)| {
            path.iter()
                .enumerate()
                .map(|(t, id)| {
                    let k = points[t].iter().position(|p| *p == id.as_str()).expect("collected above");
                    slots.iter().position(|&s| s == (t, k)).expect("slot exists")
                })
                .collect()
        })
        .collect();

    let mut assign = vec![0usize; slots.len()];
    let mut best: Option<(Rational, Vec<usize>)> = None;
    loop {
        let total: Rational = row_slots
            .iter()
            .zip(&row_payoff)
            .map(|(rs, payoff)| {
                let idx = rs.iter().enumerate().fold(0, |acc, (t, &s)| acc * counts[t] + assign[s]);
                payoff[idx].clone()
            })
            .sum();
        if best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, assign.clone()));
        }
        let mut i = slots.len();
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            assign[i] += 1;
            if assign[i] < counts[slots[i].0] {
                break false;
            }
            assign[i] = 0;
        };
        if done {
            break;
        }
    }
    let (value, assign) = best.expect("at least one strategy");
    let mut strategy = AdaptedStrategy::new(horizon);
    for (i, &(t, k)) in slots.iter().enumerate() {
        strategy.set(t, points[t][k], assign[i]);
    }
    Ok(ValueResult { value, strategy })
}

/// Expected utility of `strategy` when observing `η ∨ ρ`.
pub fn expected_utility(
    eta: &DynamicSignal,
    problem: &ExtendedDecisionProblem,
    prior: &Prior,
    strategy: &AdaptedStrategy,
) -> Result<Rational> {
    let tree = joined_tree(eta, problem, prior)?;
    let counts = problem.action_counts();
    let last = tree.horizon() - 1;
    let mut total = Rational::zero();
    for (n, leaf) in tree.level(last).iter().enumerate() {
        let chain = tree.ancestry(last, n);
        let profile: Vec<usize> = chain
            .iter()
            .enumerate()
            .map(|(t, &m)| strategy.action(t, &tree.level(t)[m].id))
            .collect();
        for (s, w) in leaf.joint.iter().enumerate() {
            if !w.is_zero() {
                total += w * problem.utility.eval(&counts, &profile, s);
            }
        }
    }
    Ok(total)
}
