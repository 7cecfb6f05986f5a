//! Constructors turning concrete problems into [`SetValuedMap`]s.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{Constraint, Sense, DEFAULT_TOL};
use crate::poly::{PRepPolyhedron, VRepPolyhedron};
use crate::setmap::SetValuedMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupplyNode {
    pub name: String,
    /// Cost per unit of established capacity.
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemandNode {
    pub name: String,
    pub demand: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub tail: String,
    pub head: String,
    pub cost: f64,
    pub capacity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// Arc utilisation threshold.
    pub tau: f64,
    /// Supply utilisation threshold.
    pub mu: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

/// Two-stage supply capacity design network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub supplies: Vec<SupplyNode>,
    pub demands: Vec<DemandNode>,
    pub arcs: Vec<Arc>,
    pub params: NetworkParams,
}

enum NodeRef {
    Supply(usize),
    Demand(usize),
}

impl NetworkSpec {
    /// The four-plant, two-district electricity network.
    pub fn power_grid_example() -> Self {
        let supplies = [("P1", 10.0), ("P2", 11.0), ("P3", 8.0), ("P4", 9.0)]
            .iter()
            .map(|(n, a)| SupplyNode { name: n.to_string(), cost: *a })
            .collect();
        let demands = [("N", 50.0), ("S", 40.0)]
            .iter()
            .map(|(n, b)| DemandNode { name: n.to_string(), demand: *b })
            .collect();
        let arcs = [
            ("P1", "N", 1.0, 24.0),
            ("P1", "S", 1.0, 12.0),
            ("P2", "N", 2.0, 13.0),
            ("P2", "S", 3.0, 18.0),
            ("P3", "N", 2.0, 15.0),
            ("P3", "S", 2.0, 26.0),
            ("P4", "N", 3.0, 17.0),
            ("P4", "S", 2.0, 23.0),
            ("S", "N", 6.0, 8.0),
        ]
        .iter()
        .map(|(t, h, c, u)| Arc {
            tail: t.to_string(),
            head: h.to_string(),
            cost: *c,
            capacity: *u,
        })
        .collect();
        Self {
            supplies,
            demands,
            arcs,
            params: NetworkParams {
                tau: 0.8,
                mu: 0.9,
                gamma1: 1.0,
                gamma2: 3.0,
            },
        }
    }

    /// Establishment costs `a_v`, the linear tie-break used when choosing capacities.
    pub fn establishment_costs(&self) -> Vec<f64> {
        self.supplies.iter().map(|s| s.cost).collect()
    }

    pub fn supply_names(&self) -> Vec<String> {
        self.supplies.iter().map(|s| s.name.clone()).collect()
    }

    fn node_index(&self) -> Result<HashMap<&str, NodeRef>> {
        let mut idx = HashMap::new();
        for (i, s) in self.supplies.iter().enumerate() {
            if idx.insert(s.name.as_str(), NodeRef::Supply(i)).is_some() {
                return Err(Error::InvalidModel(format!("duplicate node '{}'", s.name)));
            }
        }
        for (i, d) in self.demands.iter().enumerate() {
            if idx.insert(d.name.as_str(), NodeRef::Demand(i)).is_some() {
                return Err(Error::InvalidModel(format!("duplicate node '{}'", d.name)));
            }
        }
        Ok(idx)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidModel(m));
        if self.supplies.is_empty() {
            return bad("at least one supply node is required".into());
        }
        let idx = self.node_index()?;
        for s in &self.supplies {
            if !s.cost.is_finite() {
                return bad(format!("supply '{}' has a non-finite cost", s.name));
            }
        }
        for d in &self.demands {
            if !(d.demand.is_finite() && d.demand > 0.0) {
                return bad(format!("demand at '{}' must be positive", d.name));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for a in &self.arcs {
            for end in [&a.tail, &a.head] {
                if !idx.contains_key(end.as_str()) {
                    return bad(format!("arc references unknown node '{end}'"));
                }
            }
            if a.tail == a.head {
                return bad(format!("self-loop at '{}'", a.tail));
            }
            if !seen.insert((a.tail.as_str(), a.head.as_str())) {
                return bad(format!("parallel arc {} -> {}", a.tail, a.head));
            }
            if !(a.cost.is_finite() && a.cost >= 0.0) {
                return bad(format!("arc {} -> {} needs a nonnegative cost", a.tail, a.head));
            }
            if !(a.capacity.is_finite() && a.capacity >= 0.0) {
                return bad(format!("arc {} -> {} needs a nonnegative capacity", a.tail, a.head));
            }
        }
        let p = &self.params;
        if !(p.tau > 0.0 && p.tau < 1.0) {
            return bad("tau must lie strictly between 0 and 1".into());
        }
        if !(p.mu > 0.0 && p.mu < 1.0) {
            return bad("mu must lie strictly between 0 and 1".into());
        }
        if !(p.gamma1 >= 0.0 && p.gamma2 >= 0.0 && p.gamma1.is_finite() && p.gamma2.is_finite()) {
            return bad("weights gamma1, gamma2 must be nonnegative".into());
        }
        Ok(())
    }
}

/// Capacity design map `F(z) = {y | ∃ flows: y ≥ (total cost, instability)}`.
///
/// Columns: `z` (one per supply node), `y₁, y₂`, then flows `x_e`, arc
/// excesses `s_e` and supply excesses `t_v`.
pub fn build_nscd(spec: &NetworkSpec) -> Result<SetValuedMap> {
    spec.validate()?;
    let idx = spec.node_index()?;
    let ns = spec.supplies.len();
    let m = spec.arcs.len();
    let (n, q) = (ns, 2);
    let col_y = n;
    let col_x = n + q;
    let col_s = col_x + m;
    let col_t = col_s + m;
    let width = col_t + ns;
    let p = &spec.params;

    // Outflow minus inflow, per node, as a row over the flow columns.
    let mut supply_out = vec![vec![0.0; width]; ns];
    let mut demand_in = vec![vec![0.0; width]; spec.demands.len()];
    for (e, a) in spec.arcs.iter().enumerate() {
        match idx[a.tail.as_str()] {
            NodeRef::Supply(i) => supply_out[i][col_x + e] += 1.0,
            NodeRef::Demand(i) => demand_in[i][col_x + e] -= 1.0,
        }
        match idx[a.head.as_str()] {
            NodeRef::Supply(i) => supply_out[i][col_x + e] -= 1.0,
            NodeRef::Demand(i) => demand_in[i][col_x + e] += 1.0,
        }
    }

    let unit = |j: usize| {
        let mut r = vec![0.0; width];
        r[j] = 1.0;
        r
    };
    let mut rows = Vec::new();
    for (e, a) in spec.arcs.iter().enumerate() {
        rows.push(Constraint::ge(unit(col_x + e), 0.0));
        rows.push(Constraint::le(unit(col_x + e), a.capacity));
        let mut r = unit(col_s + e);
        r[col_x + e] = -1.0;
        rows.push(Constraint::ge(r, -p.tau * a.capacity));
        rows.push(Constraint::ge(unit(col_s + e), 0.0));
    }
    for (i, d) in spec.demands.iter().enumerate() {
        rows.push(Constraint::eq(demand_in[i].clone(), d.demand));
    }
    for v in 0..ns {
        rows.push(Constraint::ge(supply_out[v].clone(), 0.0));
        let mut r = supply_out[v].clone();
        r[v] = -1.0;
        rows.push(Constraint::le(r, 0.0));
        let mut r: Vec<f64> = supply_out[v].iter().map(|c| -c).collect();
        r[col_t + v] = 1.0;
        r[v] = p.mu;
        rows.push(Constraint::ge(r, 0.0));
        rows.push(Constraint::ge(unit(col_t + v), 0.0));
        rows.push(Constraint::ge(unit(v), 0.0));
    }
    let mut cost = unit(col_y);
    for (e, a) in spec.arcs.iter().enumerate() {
        cost[col_x + e] = -a.cost;
    }
    for (v, s) in spec.supplies.iter().enumerate() {
        cost[v] = -s.cost;
    }
    rows.push(Constraint::ge(cost, 0.0));
    let mut instab = unit(col_y + 1);
    for e in 0..m {
        instab[col_s + e] = -p.gamma1;
    }
    for v in 0..ns {
        instab[col_t + v] = -p.gamma2;
    }
    rows.push(Constraint::ge(instab, 0.0));

    let graph = PRepPolyhedron::new(n + q, width - n - q, rows)?;
    SetValuedMap::new(n, q, graph)
}

/// Embeds `min/max c·x s.t. Ax ≥ b` as `F(x) = {c·x} + R₊` on the feasible set
/// (for `max`, the objective is negated). Fails if the feasible set is empty.
pub fn build_from_lp(c: &[f64], a: &[Vec<f64>], b: &[f64], sense: Sense) -> Result<SetValuedMap> {
    let n = c.len();
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let sign = match sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut rows = Vec::with_capacity(a.len() + 1);
    for (ai, bi) in a.iter().zip(b) {
        if ai.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: ai.len(),
            });
        }
        let mut r = ai.clone();
        r.push(0.0);
        rows.push(Constraint::ge(r, *bi));
    }
    let mut r: Vec<f64> = c.iter().map(|ci| -sign * ci).collect();
    r.push(1.0);
    rows.push(Constraint::ge(r, 0.0));
    let graph = PRepPolyhedron::new(n + 1, 0, rows)?;
    let map = SetValuedMap::new(n, 1, graph)?;
    map.ensure_nonempty(DEFAULT_TOL)?;
    Ok(map)
}

/// Map whose graph is `conv(points) + cone(rays) + span(lines)` over `(x, y)`.
pub fn build_from_graph_vrep(
    n: usize,
    q: usize,
    points: Vec<Vec<f64>>,
    rays: Vec<Vec<f64>>,
    lines: Vec<Vec<f64>>,
) -> Result<SetValuedMap> {
    if points.is_empty() {
        return Err(Error::EmptyInput("graph needs at least one point".into()));
    }
    let v = VRepPolyhedron::new(n + q, points, rays, lines)?;
    SetValuedMap::new(n, q, v.to_hrep().to_prep())
}

/// The three-set instance: `F(eⁱ) = Aᵢ` extended linearly over the simplex.
pub fn three_set_example() -> SetValuedMap {
    build_from_graph_vrep(
        3,
        2,
        vec![
            vec![1.0, 0.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 1.05, 0.05],
            vec![0.0, 0.0, 1.0, 0.05, 1.05],
        ],
        vec![vec![0.0, 0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 0.0, 1.0]],
        vec![],
    )
    .expect("fixed data is consistent")
}

/// `F(x) = {y | y ≥ -x}` on `R`, a map without optimizers.
pub fn unbounded_shift_example() -> SetValuedMap {
    let graph = PRepPolyhedron::new(2, 0, vec![Constraint::ge(vec![1.0, 1.0], 0.0)])
        .expect("fixed data is consistent");
    SetValuedMap::new(1, 1, graph).expect("fixed data is consistent")
}
