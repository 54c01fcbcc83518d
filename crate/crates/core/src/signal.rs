//! Static signals: finite partitions of `Θ × [0, 1)`.
//!
//! A [`Signal`] stores, for every cell, one [`IntervalSet`] per state (the
//! cell's θ-section). The conditional probability of a realization given a
//! state is the Lebesgue measure of that section, so a signal is a valid
//! partition exactly when, state by state, its sections tile `[0, 1)`.
//!
//! Cells are identified modulo null sets: zero-length pieces vanish during
//! canonicalization and cells with no positive-measure section are dropped.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::rational::Rational;

/// Identifier of the single cell of a trivial (uninformative) signal.
pub const TRIVIAL_CELL: &str = "*";

/// Ordered, finite, duplicate-free set of state labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSpace(Arc<[String]>);

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Schema("state space is empty".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() {
                return Err(Error::Schema("state label is empty".into()));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::Schema(format!("duplicate state label {l:?}")));
            }
        }
        Ok(StateSpace(labels.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.0[idx]
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownState(label.to_string()))
    }

    pub(crate) fn ensure_same(&self, other: &StateSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::StateSpaceMismatch {
                left: self.labels().to_vec(),
                right: other.labels().to_vec(),
            })
        }
    }
}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Full-support prior over a [`StateSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prior {
    states: StateSpace,
    weights: Vec<Rational>,
}

impl Prior {
    pub fn new(states: StateSpace, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != states.len() {
            return Err(Error::Schema(format!(
                "prior has {} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        if let Some(k) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::Schema(format!(
                "prior weight of {:?} must be strictly positive",
                states.label(k)
            )));
        }
        let total: Rational = weights.iter().sum();
        if total != Rational::one() {
            return Err(Error::Schema(format!("prior weights sum to {total}, not 1")));
        }
        Ok(Prior { states, weights })
    }

    pub fn uniform(states: &StateSpace) -> Self {
        let n = states.len() as i64;
        Prior { states: states.clone(), weights: vec![Rational::new(1, n); states.len()] }
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, state: usize) -> &Rational {
        &self.weights[state]
    }
}

/// One realization of a signal: a measurable subset of `Θ × [0, 1)` stored
/// as one section per state.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    id: String,
    sections: Vec<IntervalSet>,
}

impl Cell {
    pub fn new(id: impl Into<String>, sections: Vec<IntervalSet>) -> Self {
        Cell { id: id.into(), sections }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn sections(&self) -> &[IntervalSet] {
        &self.sections
    }

    pub fn section(&self, state: usize) -> &IntervalSet {
        &self.sections[state]
    }

    /// `P(s | θ)`.
    pub fn measure(&self, state: usize) -> Rational {
        self.sections[state].measure()
    }

    pub fn measures(&self) -> Vec<Rational> {
        self.sections.iter().map(IntervalSet::measure).collect()
    }

    pub fn is_null(&self) -> bool {
        self.sections.iter().all(IntervalSet::is_empty)
    }

    /// States on which the cell has positive measure.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.sections.iter().enumerate().filter(|(_, s)| !s.is_empty()).map(|(k, _)| k)
    }

    /// Positive probability under at most one state.
    pub fn is_revealing(&self) -> bool {
        self.support().nth(1).is_none()
    }

    /// The state a revealing cell pins down.
    pub fn revealed_state(&self) -> Option<usize> {
        let mut it = self.support();
        match (it.next(), it.next()) {
            (Some(k), None) => Some(k),
            _ => None,
        }
    }

    pub fn intersect(&self, other: &Cell, id: String) -> Cell {
        let sections =
            self.sections.iter().zip(&other.sections).map(|(a, b)| a.intersection(b)).collect();
        Cell { id, sections }
    }

    /// Subset modulo null sets.
    pub fn is_subset(&self, other: &Cell) -> bool {
        self.sections.iter().zip(&other.sections).all(|(a, b)| a.is_subset(b))
    }

    pub fn overlaps(&self, other: &Cell) -> bool {
        self.sections.iter().zip(&other.sections).any(|(a, b)| a.overlaps(b))
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}", self.id, self.sections)
    }
}

/// A finite labeled partition of `Θ × [0, 1)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Signal {
    states: StateSpace,
    cells: Vec<Cell>,
}

/// Why an object fails its structural invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    DuplicateCellId { cell: String },
    SectionCount { cell: String, expected: usize, found: usize },
    Gap { state: String, interval: String },
    Overlap { state: String, interval: String, cells: [String; 2] },
    EmptyHorizon,
    PeriodStateSpace { period: usize },
    NotRefining { period: usize, cell: String, overlapped: Vec<String> },
    InPeriod { period: usize, violation: Box<Violation> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateCellId { cell } => write!(f, "duplicate cell id {cell:?}"),
            Violation::SectionCount { cell, expected, found } => {
                write!(f, "cell {cell:?} has {found} sections, expected {expected}")
            }
            Violation::Gap { state, interval } => {
                write!(f, "state {state:?}: {interval} is covered by no cell")
            }
            Violation::Overlap { state, interval, cells } => write!(
                f,
                "state {state:?}: {interval} is covered by both {:?} and {:?}",
                cells[0], cells[1]
            ),
            Violation::EmptyHorizon => write!(f, "dynamic signal has no periods"),
            Violation::PeriodStateSpace { period } => {
                write!(f, "period {period} uses a different state space")
            }
            Violation::NotRefining { period, cell, overlapped } => write!(
                f,
                "period {period} does not refine period {}: cell {cell:?} meets {overlapped:?}",
                period - 1
            ),
            Violation::InPeriod { period, violation } => write!(f, "period {period}: {violation}"),
        }
    }
}

/// How a cell sits relative to a (coarser) signal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Contained (mod null) in the cell with this index.
    Inside(usize),
    /// Meets several cells with positive measure (indices in signal order).
    Straddles(Vec<usize>),
}

/// Failure witness for [`refines`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefineWitness {
    pub cell: String,
    pub overlapped: Vec<String>,
}

impl Signal {
    /// Builds a signal without checking the partition property. Null cells
    /// are dropped. Use [`validate`] or [`Signal::new`] for checked input.
    pub fn from_cells(states: StateSpace, cells: Vec<Cell>) -> Result<Self> {
        for c in &cells {
            if c.sections.len() != states.len() {
                return Err(Violation::SectionCount {
                    cell: c.id.clone(),
                    expected: states.len(),
                    found: c.sections.len(),
                }
                .into());
            }
        }
        let cells = cells.into_iter().filter(|c| !c.is_null()).collect();
        Ok(Signal { states, cells })
    }

    /// Checked constructor.
    pub fn new(states: StateSpace, cells: Vec<Cell>) -> Result<Self> {
        let s = Self::from_cells(states, cells)?;
        validate(&s)?;
        Ok(s)
    }

    /// The uninformative signal: one cell covering everything.
    pub fn trivial(states: &StateSpace) -> Self {
        let cell = Cell::new(TRIVIAL_CELL, vec![IntervalSet::unit(); states.len()]);
        Signal { states: states.clone(), cells: vec![cell] }
    }

    /// One cell per state, labeled by the state.
    pub fn fully_revealing(states: &StateSpace) -> Self {
        let cells = (0..states.len())
            .map(|k| {
                let mut sections = vec![IntervalSet::empty(); states.len()];
                sections[k] = IntervalSet::unit();
                Cell::new(states.label(k), sections)
            })
            .collect();
        Signal { states: states.clone(), cells }
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_index(&self, id: &str) -> Result<usize> {
        self.cells.iter().position(|c| c.id == id).ok_or_else(|| Error::UnknownCell(id.into()))
    }

    pub fn cell(&self, id: &str) -> Result<&Cell> {
        Ok(&self.cells[self.cell_index(id)?])
    }

    /// Where `cell` sits relative to this signal.
    pub fn place(&self, cell: &Cell) -> Placement {
        let hits: Vec<usize> =
            self.cells.iter().enumerate().filter(|(_, c)| cell.overlaps(c)).map(|(k, _)| k).collect();
        match hits.as_slice() {
            [k] if cell.is_subset(&self.cells[*k]) => Placement::Inside(*k),
            _ => Placement::Straddles(hits),
        }
    }

    /// Same partition, ignoring cell ids.
    pub fn equivalent(&self, other: &Signal) -> bool {
        if self.states != other.states || self.cells.len() != other.cells.len() {
            return false;
        }
        let key = |s: &Signal| {
            let mut v: Vec<&[IntervalSet]> = s.cells.iter().map(|c| c.sections.as_slice()).collect();
            v.sort();
            v.into_iter().map(|x| x.to_vec()).collect::<Vec<_>>()
        };
        key(self) == key(other)
    }

    /// Copy of the signal with new cell ids.
    pub fn relabeled<F: FnMut(usize, &Cell) -> String>(&self, mut f: F) -> Signal {
        let cells = self
            .cells
            .iter()
            .enumerate()
            .map(|(k, c)| Cell { id: f(k, c), sections: c.sections.clone() })
            .collect();
        Signal { states: self.states.clone(), cells }
    }
}

impl fmt::Debug for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Signal").field("states", &self.states).field("cells", &self.cells).finish()
    }
}

/// Checks that the cells partition `[0, 1)` state by state and that ids are
/// distinct. Reports the first problem: by cell order for ids, then by state
/// order and left endpoint for gaps and overlaps.
pub fn validate(signal: &Signal) -> Result<(), Violation> {
    let mut seen = HashSet::new();
    for c in &signal.cells {
        if !seen.insert(c.id.as_str()) {
            return Err(Violation::DuplicateCellId { cell: c.id.clone() });
        }
    }
    for state in 0..signal.states.len() {
        let mut pieces: Vec<(&Rational, &Rational, usize)> = signal
            .cells
            .iter()
            .enumerate()
            .flat_map(|(k, c)| c.sections[state].intervals().iter().map(move |(lo, hi)| (lo, hi, k)))
            .collect();
        pieces.sort();
        let label = signal.states.label(state).to_string();
        let mut cur = Rational::zero();
        let mut owner: Option<usize> = None;
        for (lo, hi, k) in pieces {
            if *lo > cur {
                return Err(Violation::Gap {
                    state: label,
                    interval: IntervalSet::interval(cur, lo.clone()).to_string(),
                });
            }
            if *lo < cur {
                let prev = owner.expect("overlap implies an earlier piece");
                let end = std::cmp::min(&cur, hi).clone();
                let (first, second) = (prev.min(k), prev.max(k));
                return Err(Violation::Overlap {
                    state: label,
                    interval: IntervalSet::interval(lo.clone(), end).to_string(),
                    cells: [signal.cells[first].id.clone(), signal.cells[second].id.clone()],
                });
            }
            cur = hi.clone();
            owner = Some(k);
        }
        if cur < Rational::one() {
            return Err(Violation::Gap {
                state: label,
                interval: IntervalSet::interval(cur, Rational::one()).to_string(),
            });
        }
    }
    Ok(())
}

/// `P(s | θ)`: measure of the cell's θ-section.
pub fn cell_probability(signal: &Signal, cell: &str, state: &str) -> Result<Rational> {
    let state = signal.states.index(state)?;
    Ok(signal.cell(cell)?.measure(state))
}

/// Outcome of [`refines`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refinement {
    Holds,
    Fails(RefineWitness),
}

impl Refinement {
    pub fn holds(&self) -> bool {
        matches!(self, Refinement::Holds)
    }
}

/// Does every cell of `fine` sit (mod null) inside one cell of `coarse`?
/// On failure the witness is the first offending cell of `fine` with the
/// first two `coarse` cells it meets.
pub fn refines(fine: &Signal, coarse: &Signal) -> Result<Refinement> {
    fine.states.ensure_same(&coarse.states)?;
    for c in &fine.cells {
        if let Placement::Straddles(hits) = coarse.place(c) {
            return Ok(Refinement::Fails(RefineWitness {
                cell: c.id.clone(),
                overlapped: hits.iter().take(2).map(|&k| coarse.cells[k].id.clone()).collect(),
            }));
        }
    }
    Ok(Refinement::Holds)
}

/// Id of the join cell built from `a` and `b`.
pub fn join_id(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Coarsest common refinement. Cells are the positive-measure pairwise
/// intersections in `(a, b)` order, with ids `(a-id,b-id)`.
pub fn join(a: &Signal, b: &Signal) -> Result<Signal> {
    Ok(join_indexed(a, b)?.0)
}

/// [`join`] together with the parent indices `(in a, in b)` of every cell.
pub fn join_indexed(a: &Signal, b: &Signal) -> Result<(Signal, Vec<(usize, usize)>)> {
    a.states.ensure_same(&b.states)?;
    let mut cells = Vec::new();
    let mut parents = Vec::new();
    for (i, ca) in a.cells.iter().enumerate() {
        for (j, cb) in b.cells.iter().enumerate() {
            let c = ca.intersect(cb, join_id(&ca.id, &cb.id));
            if !c.is_null() {
                cells.push(c);
                parents.push((i, j));
            }
        }
    }
    Ok((Signal { states: a.states.clone(), cells }, parents))
}

pub fn is_revealing(signal: &Signal, cell: &str) -> Result<bool> {
    Ok(signal.cell(cell)?.is_revealing())
}

/// Which clause of reveal-or-refine a cell satisfied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum Clause {
    /// Contained in this cell of the compared signal.
    Refine { container: String },
    /// Positive probability under at most one state.
    Reveal { state: Option<String> },
    /// Neither: non-revealing and meets these compared cells.
    Fail { overlapped: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellVerdict {
    pub cell: String,
    #[serde(flatten)]
    pub clause: Clause,
}

impl fmt::Display for CellVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.clause {
            Clause::Refine { container } if *container == self.cell => {
                write!(f, "{}: refine (self)", self.cell)
            }
            Clause::Refine { container } => write!(f, "{}: refine (inside {container})", self.cell),
            Clause::Reveal { state: Some(s) } => write!(f, "{}: reveal ({s})", self.cell),
            Clause::Reveal { state: None } => write!(f, "{}: reveal", self.cell),
            Clause::Fail { overlapped } => {
                write!(f, "{}: FAIL (meets {})", self.cell, overlapped.join(", "))
            }
        }
    }
}

/// Per-cell reveal-or-refine verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RorReport {
    pub holds: bool,
    pub cells: Vec<CellVerdict>,
}

impl RorReport {
    pub fn first_failure(&self) -> Option<&CellVerdict> {
        self.cells.iter().find(|v| matches!(v.clause, Clause::Fail { .. }))
    }
}

/// Does `a` reveal-or-refine `b`? Every cell of `a` must sit inside a cell
/// of `b` or have positive probability under at most one state. The refine
/// clause is tried first.
pub fn reveal_or_refines(a: &Signal, b: &Signal) -> Result<RorReport> {
    a.states.ensure_same(&b.states)?;
    let cells: Vec<CellVerdict> = a
        .cells
        .iter()
        .map(|c| {
            let clause = match b.place(c) {
                Placement::Inside(k) => Clause::Refine { container: b.cells[k].id.clone() },
                Placement::Straddles(_) if c.is_revealing() => Clause::Reveal {
                    state: c.revealed_state().map(|k| a.states.label(k).to_string()),
                },
                Placement::Straddles(hits) => Clause::Fail {
                    overlapped: hits.iter().map(|&k| b.cells[k].id.clone()).collect(),
                },
            };
            CellVerdict { cell: c.id.clone(), clause }
        })
        .collect();
    let holds = cells.iter().all(|v| !matches!(v.clause, Clause::Fail { .. }));
    Ok(RorReport { holds, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::r;

    fn two_states() -> StateSpace {
        StateSpace::new(["L", "H"]).unwrap()
    }

    #[test]
    fn example_one_first_period_validates() {
        let eta = fixtures::example1();
        assert_eq!(validate(&eta.periods()[0]), Ok(()));
        assert_eq!(validate(&Signal::trivial(&two_states())), Ok(()));
    }

    #[test]
    fn overlap_is_reported() {
        let ss = two_states();
        let q = |a, b| IntervalSet::interval(r(a, 4), r(b, 4));
        let s = Signal::from_cells(
            ss,
            vec![
                Cell::new("a", vec![q(0, 4), q(0, 4)]),
                Cell::new("b", vec![q(0, 1), IntervalSet::empty()]),
            ],
        )
        .unwrap();
        assert_eq!(
            validate(&s),
            Err(Violation::Overlap {
                state: "L".into(),
                interval: "[0, 1/4)".into(),
                cells: ["a".into(), "b".into()],
            })
        );
    }

    #[test]
    fn gap_and_duplicate_are_reported() {
        let ss = two_states();
        let half = IntervalSet::interval(r(0, 1), r(1, 2));
        let s = Signal::from_cells(ss.clone(), vec![Cell::new("a", vec![half.clone(), IntervalSet::unit()])])
            .unwrap();
        assert_eq!(validate(&s), Err(Violation::Gap { state: "L".into(), interval: "[1/2, 1)".into() }));
        let d = Signal::from_cells(
            ss,
            vec![Cell::new("a", vec![IntervalSet::unit(), IntervalSet::unit()]), Cell::new("a", vec![
                IntervalSet::empty(),
                half,
            ])],
        )
        .unwrap();
        assert_eq!(validate(&d), Err(Violation::DuplicateCellId { cell: "a".into() }));
    }

    #[test]
    fn null_cells_are_dropped() {
        let ss = two_states();
        let s = Signal::from_cells(
            ss,
            vec![
                Cell::new("a", vec![IntervalSet::unit(), IntervalSet::unit()]),
                Cell::new("ghost", vec![IntervalSet::empty(), IntervalSet::empty()]),
            ],
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        assert!(validate(&s).is_ok());
    }

    #[test]
    fn probabilities_of_example_one() {
        let ex = fixtures::example1();
        let eta1 = ex.period(0);
        assert_eq!(cell_probability(eta1, "h", "L").unwrap(), r(1, 4));
        assert_eq!(cell_probability(eta1, "h", "H").unwrap(), r(3, 4));
        let t = Signal::trivial(&two_states());
        assert_eq!(cell_probability(&t, TRIVIAL_CELL, "H").unwrap(), r(1, 1));
        let (eta, _) = fixtures::blackwell_pair();
        assert_eq!(cell_probability(&eta, "s1", "L").unwrap(), r(3, 4));
        assert!(matches!(cell_probability(eta1, "zz", "L"), Err(Error::UnknownCell(_))));
        assert!(matches!(cell_probability(eta1, "h", "M"), Err(Error::UnknownState(_))));
    }

    #[test]
    fn refinement_examples() {
        let ex = fixtures::example1();
        let (eta1, eta2) = (&ex.periods()[0], &ex.periods()[1]);
        assert!(refines(eta2, eta1).unwrap().holds());
        assert!(refines(eta1, &Signal::trivial(&two_states())).unwrap().holds());
        let (_, half) = fixtures::blackwell_pair();
        match refines(&half, eta1).unwrap() {
            Refinement::Fails(w) => {
                assert_eq!(w.cell, "lo");
                assert_eq!(w.overlapped, vec!["h".to_string(), "l".to_string()]);
            }
            Refinement::Holds => panic!("split-at-1/2 does not refine η₁"),
        }
        let other = StateSpace::new(["a", "b", "c"]).unwrap();
        assert!(matches!(
            refines(eta1, &Signal::trivial(&other)),
            Err(Error::StateSpaceMismatch { .. })
        ));
    }

    #[test]
    fn join_examples() {
        let ss = two_states();
        let ex = fixtures::example1();
        let (eta1, eta2) = (&ex.periods()[0], &ex.periods()[1]);
        assert!(join(eta1, &Signal::trivial(&ss)).unwrap().equivalent(eta1));
        assert!(join(eta1, eta2).unwrap().equivalent(eta2));

        let (eta, _) = fixtures::blackwell_pair();
        let rho = fixtures::blackwell_swap_signal();
        let j = join(&eta, &rho).unwrap();
        assert_eq!(j.len(), 4);
        let c = j.cell("(s1,r1)").unwrap();
        assert_eq!(c.section(0), &IntervalSet::interval(r(0, 1), r(1, 2)));
        assert!(c.section(1).is_empty());
        let mixed = j.cell("(s1,r2)").unwrap();
        assert_eq!(mixed.section(0), &IntervalSet::interval(r(1, 2), r(3, 4)));
        assert_eq!(mixed.section(1), &IntervalSet::interval(r(0, 1), r(1, 4)));
        assert!(validate(&j).is_ok());
    }

    #[test]
    fn revealing_cells() {
        let ex = fixtures::example1();
        let eta2 = &ex.periods()[1];
        assert!(is_revealing(eta2, "lH").unwrap());
        assert!(!is_revealing(&ex.periods()[0], "h").unwrap());
        assert!(!is_revealing(&Signal::trivial(&two_states()), TRIVIAL_CELL).unwrap());
        assert!(is_revealing(eta2, "nope").is_err());
    }

    #[test]
    fn reveal_or_refine_examples() {
        let ex = fixtures::example1();
        let eta2 = &ex.periods()[1];
        let self_report = reveal_or_refines(eta2, eta2).unwrap();
        assert!(self_report.holds);
        assert!(self_report.cells.iter().all(|v| v.to_string().ends_with("refine (self)")));

        let ss = two_states();
        let full = Signal::fully_revealing(&ss);
        let rep = reveal_or_refines(&full, eta2).unwrap();
        assert!(rep.holds);
        assert!(rep.cells.iter().all(|v| matches!(v.clause, Clause::Reveal { .. })));

        let (eta, half) = fixtures::blackwell_pair();
        let rep = reveal_or_refines(&eta, &half).unwrap();
        assert!(!rep.holds);
        let w = rep.first_failure().unwrap();
        assert_eq!(w.cell, "s1");
        assert_eq!(w.clause, Clause::Fail { overlapped: vec!["lo".into(), "hi".into()] });
    }
}
