//! JSON documents for signals, dynamic signals, problems, priors and
//! experiments.
//!
//! Rationals are always strings (`"3/4"`, `"1"`). Sections map state labels
//! to lists of `[lo, hi]` pairs read as half-open intervals; an absent state
//! means an empty section.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::decision::{profiles, ExtendedDecisionProblem, Utility};
use crate::dominance::{Construction, Counterexample};
use crate::dynamic::{DynamicExperiment, DynamicSignal, ExperimentEntry};
use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::rational::Rational;
use crate::signal::{Cell, Prior, Signal, StateSpace};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellDoc {
    pub id: String,
    pub sections: BTreeMap<String, Vec<[Rational; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalDoc {
    pub states: Vec<String>,
    pub cells: Vec<CellDoc>,
}

/// A period is written as a bare cell list; `{"cells": [...]}` is also read.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PeriodDoc {
    Cells(Vec<CellDoc>),
    Wrapped { cells: Vec<CellDoc> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicDoc {
    pub states: Vec<String>,
    pub periods: Vec<PeriodDoc>,
}

fn cell_doc(states: &StateSpace, cell: &Cell) -> CellDoc {
    let sections = cell
        .sections()
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_empty())
        .map(|(k, s)| {
            let pieces = s.intervals().iter().map(|(lo, hi)| [lo.clone(), hi.clone()]).collect();
            (states.label(k).to_string(), pieces)
        })
        .collect();
    CellDoc { id: cell.id().to_string(), sections }
}

fn cell_from_doc(states: &StateSpace, doc: &CellDoc) -> Result<Cell> {
    let mut sections = vec![IntervalSet::empty(); states.len()];
    for (label, pieces) in &doc.sections {
        let k = states.index(label)?;
        sections[k] = IntervalSet::try_from_intervals(pieces.iter().map(|[lo, hi]| (lo.clone(), hi.clone())))?;
    }
    Ok(Cell::new(doc.id.clone(), sections))
}

pub fn signal_to_doc(signal: &Signal) -> SignalDoc {
    SignalDoc {
        states: signal.states().labels().to_vec(),
        cells: signal.cells().iter().map(|c| cell_doc(signal.states(), c)).collect(),
    }
}

/// Parses without checking the partition property (see [`crate::signal::validate`]).
pub fn signal_from_doc(doc: &SignalDoc) -> Result<Signal> {
    let states = StateSpace::new(doc.states.clone())?;
    let cells = doc.cells.iter().map(|c| cell_from_doc(&states, c)).collect::<Result<_>>()?;
    Signal::from_cells(states, cells)
}

pub fn dynamic_to_doc(ds: &DynamicSignal) -> DynamicDoc {
    DynamicDoc {
        states: ds.states().labels().to_vec(),
        periods: ds
            .periods()
            .iter()
            .map(|p| PeriodDoc::Cells(p.cells().iter().map(|c| cell_doc(ds.states(), c)).collect()))
            .collect(),
    }
}

/// Parses without checking the filtration property (see
/// [`crate::dynamic::validate_dynamic`]).
pub fn dynamic_from_doc(doc: &DynamicDoc) -> Result<DynamicSignal> {
    let states = StateSpace::new(doc.states.clone())?;
    let periods = doc
        .periods
        .iter()
        .map(|p| {
            let cells = match p {
                PeriodDoc::Cells(c) | PeriodDoc::Wrapped { cells: c } => c,
            };
            let cells = cells.iter().map(|c| cell_from_doc(&states, c)).collect::<Result<_>>()?;
            Signal::from_cells(states.clone(), cells)
        })
        .collect::<Result<_>>()?;
    Ok(DynamicSignal::from_periods(states, periods))
}

/// Either kind of signal document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Static(Signal),
    Dynamic(DynamicSignal),
}

impl Document {
    pub fn states(&self) -> &StateSpace {
        match self {
            Document::Static(s) => s.states(),
            Document::Dynamic(d) => d.states(),
        }
    }

    /// A static signal is read as a one-period dynamic signal.
    pub fn into_dynamic(self) -> DynamicSignal {
        match self {
            Document::Static(s) => DynamicSignal::constant(&s, 1),
            Document::Dynamic(d) => d,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Document::Static(s) => serde_json::to_value(signal_to_doc(s)),
            Document::Dynamic(d) => serde_json::to_value(dynamic_to_doc(d)),
        }
        .expect("documents serialize")
    }
}

/// Dispatches on the presence of `periods` or `cells`.
pub fn parse_document(value: &Value) -> Result<Document> {
    let obj = value.as_object().ok_or_else(|| Error::Schema("expected a JSON object".into()))?;
    if obj.contains_key("periods") {
        let doc: DynamicDoc = serde_json::from_value(value.clone())?;
        Ok(Document::Dynamic(dynamic_from_doc(&doc)?))
    } else if obj.contains_key("cells") {
        let doc: SignalDoc = serde_json::from_value(value.clone())?;
        Ok(Document::Static(signal_from_doc(&doc)?))
    } else {
        Err(Error::Schema("expected a signal (\"cells\") or dynamic signal (\"periods\")".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UtilityEntry {
    pub profile: Vec<String>,
    pub state: String,
    pub u: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum UtilityDoc {
    General { entries: Vec<UtilityEntry> },
    As { periods: Vec<BTreeMap<String, BTreeMap<String, Rational>>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<String>>,
    pub actions: Vec<Vec<String>>,
    pub utility: UtilityDoc,
    #[serde(default)]
    pub aux: Option<DynamicDoc>,
}

pub fn problem_to_doc(problem: &ExtendedDecisionProblem) -> ProblemDoc {
    let states = problem.states();
    let actions = problem.actions();
    let counts = problem.action_counts();
    let utility = match problem.utility() {
        Utility::General { table } => UtilityDoc::General {
            entries: profiles(&counts)
                .zip(table)
                .flat_map(|(p, row)| {
                    let labels: Vec<String> = p.iter().enumerate().map(|(t, &a)| actions[t][a].clone()).collect();
                    row.iter().enumerate().map(move |(s, u)| UtilityEntry {
                        profile: labels.clone(),
                        state: states.label(s).to_string(),
                        u: u.clone(),
                    })
                })
                .collect(),
        },
        Utility::Separable { periods } => UtilityDoc::As {
            periods: periods
                .iter()
                .enumerate()
                .map(|(t, rows)| {
                    rows.iter()
                        .enumerate()
                        .map(|(a, row)| {
                            let by_state =
                                row.iter().enumerate().map(|(s, u)| (states.label(s).to_string(), u.clone())).collect();
                            (actions[t][a].clone(), by_state)
                        })
                        .collect()
                })
                .collect(),
        },
    };
    ProblemDoc {
        states: Some(states.labels().to_vec()),
        actions: actions.to_vec(),
        utility,
        aux: Some(dynamic_to_doc(problem.aux())),
    }
}

/// Builds a problem. The state space comes from the document's `states`,
/// else `context`, else the auxiliary signal. A `null` auxiliary signal is
/// the trivial one.
pub fn problem_from_doc(doc: &ProblemDoc, context: Option<&StateSpace>) -> Result<ExtendedDecisionProblem> {
    let aux = doc.aux.as_ref().map(dynamic_from_doc).transpose()?;
    let states = match (&doc.states, context, &aux) {
        (Some(s), _, _) => StateSpace::new(s.clone())?,
        (None, Some(c), _) => c.clone(),
        (None, None, Some(a)) => a.states().clone(),
        (None, None, None) => return Err(Error::Schema("problem does not determine its states".into())),
    };
    if let Some(c) = context {
        states.ensure_same(c)?;
    }
    let aux = aux.unwrap_or_else(|| DynamicSignal::trivial(&states, doc.actions.len()));
    let counts: Vec<usize> = doc.actions.iter().map(Vec::len).collect();
    let action_index = |t: usize, label: &str| -> Result<usize> {
        doc.actions
            .get(t)
            .and_then(|a| a.iter().position(|x| x == label))
            .ok_or_else(|| Error::Schema(format!("unknown action {label:?} in period {}", t + 1)))
    };
    let utility = match &doc.utility {
        UtilityDoc::General { entries } => {
            let total: usize = counts.iter().product();
            let mut table: Vec<Vec<Option<Rational>>> = vec![vec![None; states.len()]; total];
            for e in entries {
                if e.profile.len() != counts.len() {
                    return Err(Error::Schema(format!("profile {:?} has the wrong length", e.profile)));
                }
                let idx = e
                    .profile
                    .iter()
                    .enumerate()
                    .try_fold(0usize, |acc, (t, l)| Ok::<_, Error>(acc * counts[t] + action_index(t, l)?))?;
                let s = states.index(&e.state)?;
                if table[idx][s].replace(e.u.clone()).is_some() {
                    return Err(Error::Schema(format!("duplicate utility for {:?} at {:?}", e.profile, e.state)));
                }
            }
            let table = table
                .into_iter()
                .zip(profiles(&counts))
                .map(|(row, p)| {
                    row.into_iter()
                        .enumerate()
                        .map(|(s, u)| {
                            u.ok_or_else(|| {
                                let labels: Vec<&str> =
                                    p.iter().enumerate().map(|(t, &a)| doc.actions[t][a].as_str()).collect();
                                Error::Schema(format!("missing utility for {labels:?} at {:?}", states.label(s)))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Utility::General { table }
        }
        UtilityDoc::As { periods } => {
            if periods.len() != counts.len() {
                return Err(Error::Schema("separable utility needs one table per period".into()));
            }
            let mut out = Vec::with_capacity(periods.len());
            for (t, per) in periods.iter().enumerate() {
                let mut rows = vec![vec![None; states.len()]; counts[t]];
                for (label, by_state) in per {
                    let a = action_index(t, label)?;
                    for (state, u) in by_state {
                        rows[a][states.index(state)?] = Some(u.clone());
                    }
                }
                let rows = rows
                    .into_iter()
                    .enumerate()
                    .map(|(a, row)| {
                        row.into_iter()
                            .enumerate()
                            .map(|(s, u)| {
                                u.ok_or_else(|| {
                                    Error::Schema(format!(
                                        "missing utility for {:?} at {:?} in period {}",
                                        doc.actions[t][a],
                                        states.label(s),
                                        t + 1
                                    ))
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push(rows);
            }
            Utility::Separable { periods: out }
        }
    };
    ExtendedDecisionProblem::new(states, doc.actions.clone(), utility, aux)
}

pub fn prior_to_doc(prior: &Prior) -> BTreeMap<String, Rational> {
    prior
        .states()
        .labels()
        .iter()
        .cloned()
        .zip(prior.weights().iter().cloned())
        .collect()
}

/// `"uniform"` or a JSON map from state label to rational string.
pub fn parse_prior(text: &str, states: &StateSpace) -> Result<Prior> {
    let text = text.trim();
    if text == "uniform" {
        return Ok(Prior::uniform(states));
    }
    let map: BTreeMap<String, Rational> = serde_json::from_str(text)?;
    for k in map.keys() {
        states.index(k)?;
    }
    let weights = states
        .labels()
        .iter()
        .map(|s| map.get(s).cloned().ok_or_else(|| Error::Schema(format!("prior misses state {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Prior::new(states.clone(), weights)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentDoc {
    pub states: Vec<String>,
    pub alphabet: Vec<Vec<String>>,
    /// `true` when every path of the product alphabet is listed.
    pub complete: bool,
    pub table: Vec<ExperimentRowDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRowDoc {
    pub path: Vec<String>,
    pub state: String,
    pub p: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_decimal: Option<String>,
}

/// Full product table up to `max_rows` rows, nested paths only beyond.
pub fn experiment_to_doc(e: &DynamicExperiment, max_rows: u128, decimal: bool) -> ExperimentDoc {
    let complete = e.product_size() * e.states().len() as u128 <= max_rows;
    let entries: Vec<ExperimentEntry> = if complete { e.full_table() } else { e.nested_table() };
    ExperimentDoc {
        states: e.states().labels().to_vec(),
        alphabet: e.alphabet().to_vec(),
        complete,
        table: entries
            .into_iter()
            .map(|x| ExperimentRowDoc {
                p_decimal: decimal.then(|| x.p.to_decimal_string()),
                path: x.path,
                state: x.state,
                p: x.p,
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleDoc {
    pub construction: Construction,
    pub period: usize,
    pub w_dominant: Rational,
    pub w_dominated: Rational,
    pub candidates: u64,
    pub problem: ProblemDoc,
}

pub fn counterexample_to_doc(cx: &Counterexample) -> CounterexampleDoc {
    CounterexampleDoc {
        construction: cx.construction,
        period: cx.period,
        w_dominant: cx.w_dominant.clone(),
        w_dominated: cx.w_dominated.clone(),
        candidates: cx.candidates,
        problem: problem_to_doc(&cx.problem),
    }
}
