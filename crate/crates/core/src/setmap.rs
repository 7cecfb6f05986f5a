//! Polyhedral convex set-valued maps `F: R^n ⇉ R^q` given by their graph.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::DEFAULT_TOL;
use crate::poly::{projections_equal, PRepPolyhedron, Projection, ProjectionOptions};

/// Tolerance used when comparing cones and option sets.
pub const EQUALITY_TOL: f64 = 1e-6;

/// `F(x) = {y | (x, y) ∈ gr F}` with `gr F` P-represented over `(x, y)`;
/// the graph's auxiliary variables are internal (e.g. second-stage decisions).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetValuedMap {
    n: usize,
    q: usize,
    graph: PRepPolyhedron,
}

/// Recession data deciding whether optimizers exist.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeSummary {
    /// `G(0)`, the common recession cone of all nonempty values.
    pub g_zero: PRepPolyhedron,
    /// The natural ordering cone `K`.
    pub natural_cone: PRepPolyhedron,
    pub g_zero_projection: Projection,
    pub natural_cone_projection: Projection,
    pub optimizers_exist: bool,
}

impl SetValuedMap {
    /// Checks the column layout only; see [`SetValuedMap::ensure_nonempty`].
    pub fn new(n: usize, q: usize, graph: PRepPolyhedron) -> Result<Self> {
        if graph.ambient_dim() != n + q {
            return Err(Error::DimensionMismatch {
                expected: n + q,
                found: graph.ambient_dim(),
            });
        }
        if q == 0 {
            return Err(Error::Representation("objective dimension must be positive".into()));
        }
        Ok(Self { n, q, graph })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn graph(&self) -> &PRepPolyhedron {
        &self.graph
    }

    pub fn aux_dim(&self) -> usize {
        self.graph.aux_dim()
    }

    pub fn ensure_nonempty(&self, tol: f64) -> Result<()> {
        if self.graph.is_empty(tol)? {
            Err(Error::EmptyGraph)
        } else {
            Ok(())
        }
    }

    /// `F(x)` as a P-representation in objective space; may be empty.
    pub fn value_at(&self, x: &[f64]) -> Result<PRepPolyhedron> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        self.graph.fix_coordinates(&(0..self.n).collect::<Vec<_>>(), x)
    }

    /// `F⁻¹(y) = {x | y ∈ F(x)}` as a P-representation in decision space.
    pub fn preimage(&self, y: &[f64]) -> Result<PRepPolyhedron> {
        if y.len() != self.q {
            return Err(Error::DimensionMismatch {
                expected: self.q,
                found: y.len(),
            });
        }
        self.graph
            .fix_coordinates(&(self.n..self.n + self.q).collect::<Vec<_>>(), y)
    }

    /// The optimal value `⋃_x F(x)` before projection.
    pub fn optimal_value_prep(&self) -> PRepPolyhedron {
        self.graph
            .project_out(&(0..self.n).collect::<Vec<_>>())
            .expect("decision coordinates are in range")
    }

    pub fn optimal_value(&self, options: &ProjectionOptions) -> Result<Projection> {
        self.optimal_value_prep().project(options)
    }

    /// The recession function `G`, whose graph is the recession cone of `gr F`.
    pub fn recession_map(&self) -> SetValuedMap {
        SetValuedMap {
            n: self.n,
            q: self.q,
            graph: self.graph.recession(),
        }
    }

    /// `K = {y | ∃x: y ∈ G(x), 0 ∈ G(x)}` as a P-representation over `y`
    /// with auxiliary `(x, w, w')`.
    pub fn natural_cone(&self) -> PRepPolyhedron {
        let g = self.graph.recession();
        let (n, q, aux) = (self.n, self.q, self.aux_dim());
        let width = q + n + 2 * aux;
        let first: Vec<Option<usize>> = (0..n).map(|i| Some(q + i)).chain((0..q).map(Some)).collect();
        let second: Vec<Option<usize>> = (0..n).map(|i| Some(q + i)).chain((0..q).map(|_| None)).collect();
        let zeros = vec![0.0; n + q];
        let mut rows = g.embed_rows(width, &first, &zeros, q + n);
        rows.extend(g.embed_rows(width, &second, &zeros, q + n + aux));
        PRepPolyhedron::new(q, n + 2 * aux, rows).expect("consistent widths")
    }

    /// Computes `G(0)`, `K` and decides `G(0) = K`.
    pub fn cone_summary(&self, options: &ProjectionOptions) -> Result<ConeSummary> {
        let g_zero = self.recession_map().value_at(&vec![0.0; self.n])?;
        let natural_cone = self.natural_cone();
        let g_zero_projection = g_zero.project(options)?;
        let natural_cone_projection = natural_cone.project(options)?;
        let optimizers_exist =
            projections_equal(&g_zero_projection, &natural_cone_projection, EQUALITY_TOL);
        Ok(ConeSummary {
            g_zero,
            natural_cone,
            g_zero_projection,
            natural_cone_projection,
            optimizers_exist,
        })
    }

    /// Whether `F(x) ≠ ∅`.
    pub fn in_domain(&self, x: &[f64]) -> Result<bool> {
        Ok(!self.value_at(x)?.is_empty(DEFAULT_TOL)?)
    }
}
