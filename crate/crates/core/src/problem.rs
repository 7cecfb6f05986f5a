//! A set-valued map bundled with the metadata needed to present and design it.

use serde::{Deserialize, Serialize};

use crate::builders::{build_nscd, NetworkSpec};
use crate::engine::TieBreak;
use crate::setmap::SetValuedMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Map,
    Network,
    LinearProgram,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub kind: ProblemKind,
    pub map: SetValuedMap,
    /// One label per decision coordinate.
    pub labels: Vec<String>,
    /// Linear objective offered as the cost tie-break, if the model has one.
    pub cost: Option<Vec<f64>>,
    /// Whether the sum of the decision is a meaningful summary (e.g. total capacity).
    pub report_total: bool,
}

impl Problem {
    pub fn from_map(map: SetValuedMap) -> Self {
        let labels = (1..=map.n()).map(|i| format!("x{i}")).collect();
        Self {
            kind: ProblemKind::Map,
            map,
            labels,
            cost: None,
            report_total: false,
        }
    }

    pub fn from_lp(map: SetValuedMap, cost: Vec<f64>) -> Self {
        Self {
            kind: ProblemKind::LinearProgram,
            cost: Some(cost),
            ..Self::from_map(map)
        }
    }

    pub fn from_network(spec: &NetworkSpec) -> crate::Result<Self> {
        Ok(Self {
            kind: ProblemKind::Network,
            map: build_nscd(spec)?,
            labels: spec.supply_names(),
            cost: Some(spec.establishment_costs()),
            report_total: true,
        })
    }

    /// `TieBreak::Linear(cost)` when requested and available.
    pub fn tiebreak(&self, use_cost: bool) -> TieBreak {
        match (&self.cost, use_cost) {
            (Some(c), true) => TieBreak::Linear(c.clone()),
            _ => TieBreak::None,
        }
    }
}
