//! Value function, fixed-point stopping test and qualified candidates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{Simplex, SolveOutcome, DEFAULT_TOL};
use crate::poly::{minimal_faces, projections_equal, FaceRep, PRepPolyhedron, Projection, ProjectionOptions};
use crate::setmap::{ConeSummary, SetValuedMap, EQUALITY_TOL};

/// Linear objective used to pick one decision among all admissible ones.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum TieBreak {
    /// Whatever feasible point the solver reaches first.
    #[default]
    None,
    /// Minimize `c·x`.
    Linear(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignConfig {
    pub projection: ProjectionOptions,
    /// Slack allowed when testing whether a chosen point is an available option.
    pub membership_tol: f64,
    /// Tolerance of the test whether a selected point lies on a minimal face.
    pub face_tol: f64,
    /// Snapping radius towards qualified candidates, as a fraction of the
    /// optimal value's bounding-box diagonal.
    pub candidate_snap: f64,
    pub tiebreak: TieBreak,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            projection: ProjectionOptions::default(),
            membership_tol: 1e-6,
            face_tol: 1e-6,
            candidate_snap: 1e-3,
            tiebreak: TieBreak::None,
        }
    }
}

/// `v_F(Y)` together with its projected descriptions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueFunctionResult {
    pub selected: Vec<Vec<f64>>,
    pub prep: PRepPolyhedron,
    pub projection: Projection,
}

impl ValueFunctionResult {
    pub fn is_empty(&self) -> bool {
        self.projection.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum StopOutcome {
    Found(Vec<f64>),
    NotYet,
}

impl StopOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, StopOutcome::Found(_))
    }

    pub fn optimizer(&self) -> Option<&[f64]> {
        match self {
            StopOutcome::Found(x) => Some(x),
            StopOutcome::NotYet => None,
        }
    }
}

/// A map prepared for optimizer design: recession data and optimal value are
/// computed once.
#[derive(Clone, Debug)]
pub struct Designer {
    map: SetValuedMap,
    config: DesignConfig,
    cones: ConeSummary,
    optimal_value: Projection,
}

impl Designer {
    /// Fails only if the graph is empty or a projection fails; maps without
    /// optimizers are accepted here and refused by [`Designer::stop_test`].
    pub fn new(map: SetValuedMap, config: DesignConfig) -> Result<Self> {
        map.ensure_nonempty(config.projection.tol)?;
        let cones = map.cone_summary(&config.projection)?;
        let optimal_value = map.optimal_value(&config.projection)?;
        Ok(Self {
            map,
            config,
            cones,
            optimal_value,
        })
    }

    pub fn map(&self) -> &SetValuedMap {
        &self.map
    }

    pub fn config(&self) -> &DesignConfig {
        &self.config
    }

    pub fn cones(&self) -> &ConeSummary {
        &self.cones
    }

    pub fn optimizers_exist(&self) -> bool {
        self.cones.optimizers_exist
    }

    pub fn optimal_value(&self) -> &Projection {
        &self.optimal_value
    }

    fn check_point(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.map.q() {
            return Err(Error::DimensionMismatch {
                expected: self.map.q(),
                found: y.len(),
            });
        }
        Ok(())
    }

    /// P-representation of `v_F(Y) = F(⋂ F⁻¹(yⁱ))`: columns `y`, then the shared
    /// `x`, then one copy of the graph's auxiliary variables per constraint.
    pub fn value_function_prep(&self, selected: &[Vec<f64>]) -> Result<PRepPolyhedron> {
        for y in selected {
            self.check_point(y)?;
        }
        let (n, q, aux) = (self.map.n(), self.map.q(), self.map.aux_dim());
        let graph = self.map.graph();
        let width = q + n + (selected.len() + 1) * aux;
        let x_cols = (0..n).map(|i| Some(q + i));
        let free: Vec<Option<usize>> = x_cols.clone().chain((0..q).map(Some)).collect();
        let fixed: Vec<Option<usize>> = x_cols.chain((0..q).map(|_| None)).collect();
        let mut rows = graph.embed_rows(width, &free, &vec![0.0; n + q], q + n);
        for (i, y) in selected.iter().enumerate() {
            let mut values = vec![0.0; n];
            values.extend_from_slice(y);
            rows.extend(graph.embed_rows(width, &fixed, &values, q + n + (i + 1) * aux));
        }
        PRepPolyhedron::new(q, width - q, rows)
    }

    pub fn value_function(&self, selected: &[Vec<f64>]) -> Result<ValueFunctionResult> {
        let prep = self.value_function_prep(selected)?;
        let projection = if selected.is_empty() {
            self.optimal_value.clone()
        } else {
            prep.project(&self.config.projection)?
        };
        Ok(ValueFunctionResult {
            selected: selected.to_vec(),
            prep,
            projection,
        })
    }

    /// `⋂ F⁻¹(vⁱ)` as a P-representation over `x`.
    pub fn common_preimage(&self, points: &[Vec<f64>]) -> Result<PRepPolyhedron> {
        let (n, q, aux) = (self.map.n(), self.map.q(), self.map.aux_dim());
        let width = n + points.len() * aux;
        let fixed: Vec<Option<usize>> = (0..n).map(Some).chain((0..q).map(|_| None)).collect();
        let mut rows = Vec::new();
        for (i, v) in points.iter().enumerate() {
            self.check_point(v)?;
            let mut values = vec![0.0; n];
            values.extend_from_slice(v);
            rows.extend(self.map.graph().embed_rows(width, &fixed, &values, n + i * aux));
        }
        PRepPolyhedron::new(n, width - n, rows)
    }

    /// Finds `x` with `F(x) ⊇ v_F(Y)`, which then holds with equality.
    pub fn stop_test(&self, vfr: &ValueFunctionResult) -> Result<StopOutcome> {
        if !self.optimizers_exist() {
            return Err(Error::NoOptimizers);
        }
        if vfr.is_empty() {
            return Err(Error::EmptyInput("options set is empty".into()));
        }
        let faces = minimal_faces(&vfr.projection, self.config.face_tol)?;
        let points: Vec<Vec<f64>> = faces.into_iter().map(|f| f.point).collect();
        let m = self.common_preimage(&points)?;
        self.pick_point(&m)
    }

    fn pick_point(&self, m: &PRepPolyhedron) -> Result<StopOutcome> {
        let n = self.map.n();
        let tol = self.config.projection.tol;
        let Some(mut simplex) = Simplex::new(m.num_cols(), m.constraints(), tol)? else {
            return Ok(StopOutcome::NotYet);
        };
        if let TieBreak::Linear(c) = &self.config.tiebreak {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
            let mut objective = c.clone();
            objective.resize(m.num_cols(), 0.0);
            if let SolveOutcome::Optimal { point, .. } = simplex.minimize(&objective)? {
                return Ok(StopOutcome::Found(point[..n].to_vec()));
            }
        }
        Ok(StopOutcome::Found(simplex.current_point()[..n].to_vec()))
    }

    /// Minimal faces of `v_F(Y)` not met by any selected point.
    pub fn qualified_candidates(&self, vfr: &ValueFunctionResult) -> Result<Vec<FaceRep>> {
        if vfr.is_empty() {
            return Ok(Vec::new());
        }
        let faces = minimal_faces(&vfr.projection, self.config.face_tol)?;
        Ok(faces
            .into_iter()
            .filter(|f| !vfr.selected.iter().any(|y| f.meets(y, self.config.face_tol)))
            .collect())
    }

    /// Whether `y` is an available option, i.e. lies in `v_F(Y)`.
    pub fn is_option(&self, vfr: &ValueFunctionResult, y: &[f64]) -> Result<bool> {
        self.check_point(y)?;
        if vfr.projection.hrep.satisfies(y, self.config.membership_tol) {
            return Ok(true);
        }
        vfr.prep.contains(y, self.config.membership_tol)
    }

    /// L1-closest option to `y` and its distance; `None` when `v_F(Y)` is empty.
    pub fn nearest_option(&self, vfr: &ValueFunctionResult, y: &[f64]) -> Result<Option<(Vec<f64>, f64)>> {
        self.check_point(y)?;
        vfr.prep.nearest_l1(y, DEFAULT_TOL)
    }

    /// `x` is an optimizer iff the minimal faces of `F(x)` generate it as a fixed point.
    pub fn optimizer_test(&self, x: &[f64]) -> Result<bool> {
        let value = self.map.value_at(x)?;
        if value.is_empty(self.config.projection.tol)? {
            return Ok(false);
        }
        let fx = value.project(&self.config.projection)?;
        let points: Vec<Vec<f64>> = minimal_faces(&fx, self.config.face_tol)?
            .into_iter()
            .map(|f| f.point)
            .collect();
        let vfr = self.value_function(&points)?;
        Ok(projections_equal(&vfr.projection, &fx, EQUALITY_TOL))
    }
}
