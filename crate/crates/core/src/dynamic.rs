//! Dynamic signals (filtrations of partitions), their period-wise joins,
//! history trees and induced dynamic experiments.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::signal::{self, Placement, Prior, Signal, StateSpace, Violation};

/// A finite sequence of signals, each refining its predecessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicSignal {
    states: StateSpace,
    periods: Vec<Signal>,
}

impl DynamicSignal {
    /// Unchecked constructor; see [`validate_dynamic`].
    pub fn from_periods(states: StateSpace, periods: Vec<Signal>) -> Self {
        DynamicSignal { states, periods }
    }

    /// Checked constructor.
    pub fn new(states: StateSpace, periods: Vec<Signal>) -> Result<Self> {
        let ds = Self::from_periods(states, periods);
        validate_dynamic(&ds)?;
        Ok(ds)
    }

    pub fn trivial(states: &StateSpace, horizon: usize) -> Self {
        Self::constant(&Signal::trivial(states), horizon)
    }

    /// The same signal in every period.
    pub fn constant(signal: &Signal, horizon: usize) -> Self {
        DynamicSignal { states: signal.states().clone(), periods: vec![signal.clone(); horizon] }
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn periods(&self) -> &[Signal] {
        &self.periods
    }

    /// Signal observed in `period` (0-based).
    pub fn period(&self, period: usize) -> &Signal {
        &self.periods[period]
    }

    pub fn horizon(&self) -> usize {
        self.periods.len()
    }

    pub(crate) fn ensure_compatible(&self, other: &DynamicSignal) -> Result<()> {
        self.states.ensure_same(&other.states)?;
        if self.horizon() != other.horizon() {
            return Err(Error::HorizonMismatch { left: self.horizon(), right: other.horizon() });
        }
        Ok(())
    }

    /// Same partitions period by period, ignoring ids.
    pub fn equivalent(&self, other: &DynamicSignal) -> bool {
        self.horizon() == other.horizon()
            && self.periods.iter().zip(&other.periods).all(|(a, b)| a.equivalent(b))
    }
}

/// Checks every period and the filtration property. Periods in violations
/// are 1-based.
pub fn validate_dynamic(ds: &DynamicSignal) -> Result<(), Violation> {
    if ds.periods.is_empty() {
        return Err(Violation::EmptyHorizon);
    }
    for (t, p) in ds.periods.iter().enumerate() {
        if p.states() != &ds.states {
            return Err(Violation::PeriodStateSpace { period: t + 1 });
        }
        signal::validate(p)
            .map_err(|v| Violation::InPeriod { period: t + 1, violation: Box::new(v) })?;
        if t > 0 {
            if let signal::Refinement::Fails(w) =
                signal::refines(p, &ds.periods[t - 1]).expect("state spaces checked")
            {
                return Err(Violation::NotRefining {
                    period: t + 1,
                    cell: w.cell,
                    overlapped: w.overlapped,
                });
            }
        }
    }
    Ok(())
}

/// Period-wise join. Horizons must match.
pub fn dynamic_join(a: &DynamicSignal, b: &DynamicSignal) -> Result<DynamicSignal> {
    Ok(dynamic_join_indexed(a, b)?.0)
}

/// [`dynamic_join`] plus, per period, the parent indices of every join cell.
pub fn dynamic_join_indexed(
    a: &DynamicSignal,
    b: &DynamicSignal,
) -> Result<(DynamicSignal, Vec<Vec<(usize, usize)>>)> {
    a.ensure_compatible(b)?;
    let mut periods = Vec::with_capacity(a.horizon());
    let mut parents = Vec::with_capacity(a.horizon());
    for (x, y) in a.periods.iter().zip(&b.periods) {
        let (j, p) = signal::join_indexed(x, y)?;
        periods.push(j);
        parents.push(p);
    }
    Ok((DynamicSignal { states: a.states.clone(), periods }, parents))
}

/// For every period and cell, the index of its containing cell one period
/// earlier (`None` in the first period).
pub(crate) fn parent_links(ds: &DynamicSignal) -> Result<Vec<Vec<Option<usize>>>> {
    let mut links = Vec::with_capacity(ds.horizon());
    for (t, p) in ds.periods.iter().enumerate() {
        if t == 0 {
            links.push(vec![None; p.len()]);
            continue;
        }
        let prev = &ds.periods[t - 1];
        let mut level = Vec::with_capacity(p.len());
        for c in p.cells() {
            match prev.place(c) {
                Placement::Inside(k) => level.push(Some(k)),
                Placement::Straddles(hits) => {
                    return Err(Violation::NotRefining {
                        period: t + 1,
                        cell: c.id().to_string(),
                        overlapped: hits.iter().take(2).map(|&k| prev.cells()[k].id().to_string()).collect(),
                    }
                    .into())
                }
            }
        }
        links.push(level);
    }
    Ok(links)
}

/// A node of a [`HistoryTree`]: one positive-probability cell of a period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryNode {
    /// Index of the cell in its period's signal.
    pub cell: usize,
    pub id: String,
    /// Index of the parent node on the previous level.
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Per-state measure of the cell's sections.
    pub measures: Vec<Rational>,
    /// Per-state joint weight `μ(θ) · measure`.
    pub joint: Vec<Rational>,
}

impl HistoryNode {
    /// Unconditional probability of reaching this node.
    pub fn probability(&self) -> Rational {
        self.joint.iter().sum()
    }
}

/// The chains `s¹ ⊇ s² ⊇ … ⊇ sᵀ` of a dynamic signal, restricted to cells
/// with positive probability under the prior.
#[derive(Clone, Debug)]
pub struct HistoryTree {
    states: StateSpace,
    levels: Vec<Vec<HistoryNode>>,
    /// `node_of[t][cell]` is the node index of a cell, if it was kept.
    node_of: Vec<Vec<Option<usize>>>,
}

impl HistoryTree {
    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn levels(&self) -> &[Vec<HistoryNode>] {
        &self.levels
    }

    pub fn level(&self, t: usize) -> &[HistoryNode] {
        &self.levels[t]
    }

    pub fn horizon(&self) -> usize {
        self.levels.len()
    }

    /// Node index of cell `cell` of period `t`, if it has positive probability.
    pub fn node_of_cell(&self, t: usize, cell: usize) -> Option<usize> {
        self.node_of[t][cell]
    }

    /// Node indices from the root level down to `(t, node)`.
    pub fn ancestry(&self, t: usize, node: usize) -> Vec<usize> {
        let mut path = vec![node];
        let mut cur = node;
        for level in (1..=t).rev() {
            cur = self.levels[level][cur].parent.expect("non-root node has a parent");
            path.push(cur);
        }
        path.reverse();
        path
    }
}

/// Builds the history tree of `ds` under `prior`, pruning cells of zero
/// prior probability.
pub fn build_history_tree(ds: &DynamicSignal, prior: &Prior) -> Result<HistoryTree> {
    ds.states.ensure_same(prior.states())?;
    if ds.horizon() == 0 {
        return Err(Violation::EmptyHorizon.into());
    }
    let links = parent_links(ds)?;
    let mut levels: Vec<Vec<HistoryNode>> = Vec::with_capacity(ds.horizon());
    let mut node_of: Vec<Vec<Option<usize>>> = Vec::with_capacity(ds.horizon());
    for (t, p) in ds.periods.iter().enumerate() {
        let mut level = Vec::new();
        let mut index = vec![None; p.len()];
        for (k, c) in p.cells().iter().enumerate() {
            let measures = c.measures();
            let joint: Vec<Rational> =
                measures.iter().zip(prior.weights()).map(|(m, w)| m * w).collect();
            if joint.iter().all(Rational::is_zero) {
                continue;
            }
            let parent = match links[t][k] {
                None => None,
                Some(pk) => match node_of[t - 1][pk] {
                    Some(pn) => Some(pn),
                    None => continue,
                },
            };
            index[k] = Some(level.len());
            level.push(HistoryNode {
                cell: k,
                id: c.id().to_string(),
                parent,
                children: Vec::new(),
                measures,
                joint,
            });
        }
        if t > 0 {
            for (n, node) in level.iter().enumerate() {
                let pn = node.parent.expect("non-root node has a parent");
                levels[t - 1][pn].children.push(n);
            }
        }
        levels.push(level);
        node_of.push(index);
    }
    Ok(HistoryTree { states: ds.states.clone(), levels, node_of })
}

/// One row of a dynamic experiment: a realization path and its probability
/// under each state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentRow {
    pub path: Vec<String>,
    pub probs: Vec<Rational>,
}

/// The state-conditional distribution over realization paths.
///
/// Only nested paths are stored; every other path has probability zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicExperiment {
    states: StateSpace,
    alphabet: Vec<Vec<String>>,
    rows: Vec<ExperimentRow>,
    index: HashMap<Vec<String>, usize>,
}

/// Flat `(path, state, probability)` entry used for export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentEntry {
    pub path: Vec<String>,
    pub state: String,
    pub p: Rational,
}

impl DynamicExperiment {
    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    /// Realization alphabet `S_t` (cell ids) per period.
    pub fn alphabet(&self) -> &[Vec<String>] {
        &self.alphabet
    }

    /// Nested terminal paths in tree order.
    pub fn rows(&self) -> &[ExperimentRow] {
        &self.rows
    }

    /// `π(path | state)`; zero for non-nested or unknown paths.
    pub fn prob<S: AsRef<str>>(&self, path: &[S], state: &str) -> Result<Rational> {
        let k = self.states.index(state)?;
        let key: Vec<String> = path.iter().map(|s| s.as_ref().to_string()).collect();
        Ok(self.index.get(&key).map(|&i| self.rows[i].probs[k].clone()).unwrap_or_else(Rational::zero))
    }

    /// Number of paths in `×_t S_t`.
    pub fn product_size(&self) -> u128 {
        self.alphabet.iter().map(|a| a.len() as u128).product()
    }

    /// Every path in `×_t S_t` (lexicographic in alphabet order) for every
    /// state, zeros included.
    pub fn full_table(&self) -> Vec<ExperimentEntry> {
        let mut out = Vec::new();
        let sizes: Vec<usize> = self.alphabet.iter().map(Vec::len).collect();
        if sizes.contains(&0) {
            return out;
        }
        let mut digits = vec![0usize; sizes.len()];
        loop {
            let path: Vec<String> =
                digits.iter().enumerate().map(|(t, &d)| self.alphabet[t][d].clone()).collect();
            let row = self.index.get(&path).map(|&i| &self.rows[i]);
            for (k, state) in self.states.labels().iter().enumerate() {
                let p = row.map(|r| r.probs[k].clone()).unwrap_or_else(Rational::zero);
                out.push(ExperimentEntry { path: path.clone(), state: state.clone(), p });
            }
            let mut t = sizes.len();
            loop {
                if t == 0 {
                    return out;
                }
                t -= 1;
                digits[t] += 1;
                if digits[t] < sizes[t] {
                    break;
                }
                digits[t] = 0;
            }
        }
    }

    /// Nested paths only.
    pub fn nested_table(&self) -> Vec<ExperimentEntry> {
        let mut out = Vec::new();
        for row in &self.rows {
            for (k, state) in self.states.labels().iter().enumerate() {
                out.push(ExperimentEntry {
                    path: row.path.clone(),
                    state: state.clone(),
                    p: row.probs[k].clone(),
                });
            }
        }
        out
    }
}

/// The dynamic experiment induced by `ds`: path `(s₁, …, s_T)` has
/// probability `λ(s_T's θ-section)` when the cells are nested.
pub fn to_experiment(ds: &DynamicSignal) -> Result<DynamicExperiment> {
    if ds.horizon() == 0 {
        return Err(Violation::EmptyHorizon.into());
    }
    let links = parent_links(ds)?;
    let last = ds.horizon() - 1;
    let mut rows = Vec::new();
    for (k, c) in ds.periods[last].cells().iter().enumerate() {
        let mut path = vec![c.id().to_string()];
        let mut cur = k;
        for t in (1..=last).rev() {
            cur = links[t][cur].expect("non-root cell has a parent");
            path.push(ds.periods[t - 1].cells()[cur].id().to_string());
        }
        path.reverse();
        rows.push(ExperimentRow { path, probs: c.measures() });
    }
    let index = rows.iter().enumerate().map(|(i, r)| (r.path.clone(), i)).collect();
    let alphabet = ds
        .periods
        .iter()
        .map(|p| p.cells().iter().map(|c| c.id().to_string()).collect())
        .collect();
    Ok(DynamicExperiment { states: ds.states.clone(), alphabet, rows, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::r;

    #[test]
    fn validate_examples() {
        let ex = fixtures::example1();
        assert_eq!(validate_dynamic(&ex), Ok(()));
        let ss = ex.states().clone();
        assert_eq!(validate_dynamic(&DynamicSignal::trivial(&ss, 2)), Ok(()));
        let reversed = DynamicSignal::from_periods(ss, vec![ex.period(1).clone(), ex.period(0).clone()]);
        match validate_dynamic(&reversed) {
            Err(Violation::NotRefining { period, cell, .. }) => {
                assert_eq!(period, 2);
                assert_eq!(cell, "l");
            }
            other => panic!("expected a refinement violation, got {other:?}"),
        }
        let empty = DynamicSignal::from_periods(ex.states().clone(), vec![]);
        assert_eq!(validate_dynamic(&empty), Err(Violation::EmptyHorizon));
    }

    #[test]
    fn join_examples() {
        let ex = fixtures::example1();
        let ss = ex.states().clone();
        assert!(dynamic_join(&ex, &DynamicSignal::trivial(&ss, 2)).unwrap().equivalent(&ex));
        assert!(dynamic_join(&ex, &ex).unwrap().equivalent(&ex));

        let (eta, _) = fixtures::blackwell_pair();
        let rho = fixtures::blackwell_swap_signal();
        let j = dynamic_join(&DynamicSignal::constant(&eta, 2), &DynamicSignal::constant(&rho, 2)).unwrap();
        assert!(j.periods().iter().all(|p| p.len() == 4));
        assert_eq!(validate_dynamic(&j), Ok(()));

        assert!(matches!(
            dynamic_join(&ex, &DynamicSignal::trivial(&ss, 3)),
            Err(Error::HorizonMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn history_tree_of_example_one() {
        let ex = fixtures::example1();
        let prior = Prior::uniform(ex.states());
        let tree = build_history_tree(&ex, &prior).unwrap();
        let roots: Vec<&str> = tree.level(0).iter().map(|n| n.id.as_str()).collect();
        assert_eq!(roots, ["h", "l"]);
        let kids = |id: &str| -> Vec<&str> {
            let n = tree.level(0).iter().find(|n| n.id == id).unwrap();
            n.children.iter().map(|&c| tree.level(1)[c].id.as_str()).collect()
        };
        assert_eq!(kids("h"), ["hH"]);
        assert_eq!(kids("l"), ["lH", "lL"]);
        let l = &tree.level(0)[1];
        assert_eq!(l.measures[0], r(3, 4));
        let child_sum: Rational = l.children.iter().map(|&c| tree.level(1)[c].measures[0].clone()).sum();
        assert_eq!(child_sum, r(1, 2) + r(1, 4));
        let total: Rational = tree.level(0).iter().map(HistoryNode::probability).sum();
        assert_eq!(total, r(1, 1));
    }

    #[test]
    fn trivial_tree_is_a_chain() {
        let ss = StateSpace::new(["a", "b", "c"]).unwrap();
        let tree = build_history_tree(&DynamicSignal::trivial(&ss, 4), &Prior::uniform(&ss)).unwrap();
        assert_eq!(tree.horizon(), 4);
        assert!(tree.levels().iter().all(|l| l.len() == 1));
        assert_eq!(tree.ancestry(3, 0), vec![0, 0, 0, 0]);
    }

    #[test]
    fn experiment_of_example_one() {
        let e = to_experiment(&fixtures::example1()).unwrap();
        let p = |a: &str, b: &str, s: &str| e.prob(&[a, b], s).unwrap();
        assert_eq!(p("h", "hH", "L"), r(1, 4));
        assert_eq!(p("h", "hH", "H"), r(3, 4));
        assert_eq!(p("l", "lH", "L"), r(1, 2));
        assert_eq!(p("l", "lH", "H"), r(0, 1));
        assert_eq!(p("l", "lL", "L"), r(1, 4));
        assert_eq!(p("l", "lL", "H"), r(1, 4));
        assert_eq!(p("h", "lL", "L"), r(0, 1));
        assert_eq!(p("h", "lH", "H"), r(0, 1));
        assert_eq!(e.full_table().len(), 2 * 3 * 2);
        for s in ["L", "H"] {
            let k = e.states().index(s).unwrap();
            let total: Rational = e.rows().iter().map(|row| row.probs[k].clone()).sum();
            assert_eq!(total, r(1, 1));
        }
    }

    #[test]
    fn trivial_experiment() {
        let ss = StateSpace::new(["a", "b"]).unwrap();
        let e = to_experiment(&DynamicSignal::trivial(&ss, 3)).unwrap();
        assert_eq!(e.rows().len(), 1);
        assert!(e.rows()[0].probs.iter().all(|p| *p == r(1, 1)));
    }
}
