//! Models, random samplers and property checks shared by the integration tests.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use setlp::builders::{
    build_from_lp, build_nscd, three_set_example, Arc, DemandNode, NetworkParams, NetworkSpec, SupplyNode,
};
use setlp::engine::{DesignConfig, Designer, TieBreak};
use setlp::linalg::dot;
use setlp::lp::{solve, Constraint, LinearProgram, Sense, SolveOutcome};
use setlp::poly::{
    projections_equal, vrep_within_prep, Projection, ProjectionOptions, ProjectionStrategy, VRepPolyhedron,
};

pub const TOL: f64 = 1e-6;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn designer(map: setlp::setmap::SetValuedMap, tiebreak: TieBreak) -> Designer {
    Designer::new(
        map,
        DesignConfig {
            tiebreak,
            ..DesignConfig::default()
        },
    )
    .expect("model is well formed")
}

pub fn three_sets() -> Designer {
    designer(three_set_example(), TieBreak::None)
}

/// `min x1 + 2 x2` over `x1 + x2 ≥ 1, x1 - x2 ≥ -2, x1 ≤ 4, x2 ≥ 0`.
pub fn lp_data() -> (Vec<f64>, Vec<Vec<f64>>, Vec<f64>) {
    (
        vec![1.0, 2.0],
        vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 0.0], vec![0.0, 1.0]],
        vec![1.0, -2.0, -4.0, 0.0],
    )
}

pub fn lp_embedding() -> Designer {
    let (c, a, b) = lp_data();
    designer(build_from_lp(&c, &a, &b, Sense::Minimize).unwrap(), TieBreak::Linear(c))
}

pub fn power_grid() -> Designer {
    let spec = NetworkSpec::power_grid_example();
    designer(build_nscd(&spec).unwrap(), TieBreak::Linear(spec.establishment_costs()))
}

/// Two plants feeding one district: small enough for Fourier-Motzkin.
pub fn small_network_spec() -> NetworkSpec {
    NetworkSpec {
        supplies: vec![
            SupplyNode {
                name: "A".into(),
                cost: 2.0,
            },
            SupplyNode {
                name: "B".into(),
                cost: 3.0,
            },
        ],
        demands: vec![DemandNode {
            name: "D".into(),
            demand: 10.0,
        }],
        arcs: vec![
            Arc {
                tail: "A".into(),
                head: "D".into(),
                cost: 1.0,
                capacity: 8.0,
            },
            Arc {
                tail: "B".into(),
                head: "D".into(),
                cost: 2.0,
                capacity: 8.0,
            },
        ],
        params: NetworkParams {
            tau: 0.8,
            mu: 0.9,
            gamma1: 1.0,
            gamma2: 3.0,
        },
    }
}

pub fn small_network() -> Designer {
    let spec = small_network_spec();
    designer(build_nscd(&spec).unwrap(), TieBreak::Linear(spec.establishment_costs()))
}

pub fn project_with(p: &setlp::poly::PRepPolyhedron, s: ProjectionStrategy) -> Projection {
    p.project(&ProjectionOptions::with_strategy(s)).expect("projection succeeds")
}

/// A random point `(x, y)` of the graph: a convex combination of LP optima
/// for random objectives.
pub fn graph_point(d: &Designer, rng: &mut StdRng) -> Vec<f64> {
    let map = d.map();
    let (n, q) = (map.n(), map.q());
    let g = map.graph();
    let k = rng.gen_range(1..=3);
    let mut acc = vec![0.0; n + q];
    let mut weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    for w in weights {
        let mut objective = vec![0.0; g.num_cols()];
        for v in objective.iter_mut().take(n) {
            *v = rng.gen_range(-1.0..1.0);
        }
        for v in objective.iter_mut().skip(n).take(q) {
            *v = rng.gen_range(0.1..1.0);
        }
        let mut outcome = solve(&LinearProgram::minimize(objective.clone(), g.constraints().to_vec()), 1e-9).unwrap();
        if !matches!(outcome, SolveOutcome::Optimal { .. }) {
            objective.iter_mut().take(n).for_each(|v| *v = v.abs());
            outcome = solve(&LinearProgram::minimize(objective, g.constraints().to_vec()), 1e-9).unwrap();
        }
        let p = outcome.point().expect("bounded objective").to_vec();
        for (a, v) in acc.iter_mut().zip(&p) {
            *a += w * v;
        }
    }
    acc
}

pub fn split(d: &Designer, g: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = d.map().n();
    (g[..n].to_vec(), g[n..].to_vec())
}

/// A random decision in the domain.
pub fn domain_point(d: &Designer, rng: &mut StdRng) -> Vec<f64> {
    let g = graph_point(d, rng);
    split(d, &g).0
}

/// `k` random points of `F(x)`: minimizers of positive weightings, pushed
/// along the common recession cone.
pub fn value_points(d: &Designer, x: &[f64], k: usize, rng: &mut StdRng) -> Vec<Vec<f64>> {
    let q = d.map().q();
    let value = d.map().value_at(x).unwrap();
    let cone = &d.cones().g_zero_projection.vrep;
    let mut out = Vec::new();
    while out.len() < k {
        let mut objective = vec![0.0; value.num_cols()];
        for v in objective.iter_mut().take(q) {
            *v = rng.gen_range(0.05..1.0);
        }
        let outcome = solve(&LinearProgram::minimize(objective, value.constraints().to_vec()), 1e-9).unwrap();
        let mut y = outcome.point().expect("x lies in the domain")[..q].to_vec();
        for r in &cone.rays {
            if rng.gen_bool(0.5) {
                let t = rng.gen_range(0.0..2.0);
                y.iter_mut().zip(r).for_each(|(a, b)| *a += t * b);
            }
        }
        for l in &cone.lines {
            let t = rng.gen_range(-2.0..2.0);
            y.iter_mut().zip(l).for_each(|(a, b)| *a += t * b);
        }
        out.push(y);
    }
    out
}

fn scale_of(d: &Designer) -> f64 {
    let v = &d.optimal_value().vrep.points;
    1.0 + v.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// A selection `Y` drawn from a single value `F(x)`.
pub fn attainable_selection(d: &Designer, rng: &mut StdRng, max: usize) -> Vec<Vec<f64>> {
    let x = domain_point(d, rng);
    let k = rng.gen_range(1..=max);
    value_points(d, &x, k, rng)
}

pub type Check = Result<(), String>;

/// `Y₁ ⊆ Y₂` implies `v_F(Y₂) ⊆ v_F(Y₁)`.
pub fn prop_monotone(d: &Designer, rng: &mut StdRng) -> Check {
    let mut big = attainable_selection(d, rng, 3);
    if rng.gen_bool(0.3) {
        let extra = attainable_selection(d, rng, 1);
        big.extend(extra);
    }
    let k = rng.gen_range(0..big.len());
    let small = big[..k].to_vec();
    let vb = d.value_function(&big).map_err(|e| e.to_string())?;
    let vs = d.value_function(&small).map_err(|e| e.to_string())?;
    if vrep_within_prep(&vb.projection.vrep, &vs.prep, TOL).map_err(|e| e.to_string())? {
        Ok(())
    } else {
        Err(format!("v_F({big:?}) not inside v_F({small:?})"))
    }
}

/// Every selected point is still an option.
pub fn prop_selection_inside(d: &Designer, rng: &mut StdRng) -> Check {
    let ys = attainable_selection(d, rng, 3);
    let v = d.value_function(&ys).map_err(|e| e.to_string())?;
    if v.is_empty() {
        return Err(format!("v_F({ys:?}) is empty"));
    }
    for y in &ys {
        let lifted = v.prep.contains(y, TOL).map_err(|e| e.to_string())?;
        if !lifted || !v.projection.hrep.satisfies(y, TOL) {
            return Err(format!("{y:?} missing from v_F({ys:?})"));
        }
    }
    Ok(())
}

fn recession_projection(p: &Projection) -> Projection {
    let v = VRepPolyhedron::new(p.dim(), vec![vec![0.0; p.dim()]], p.vrep.rays.clone(), p.vrep.lines.clone())
        .expect("generators of a valid projection");
    Projection::from_vrep(&v)
}

/// The recession cone of every nonempty `v_F(Y)` is `K`.
pub fn prop_recession_is_k(d: &Designer, rng: &mut StdRng) -> Check {
    let ys = attainable_selection(d, rng, 3);
    let v = d.value_function(&ys).map_err(|e| e.to_string())?;
    let rec = recession_projection(&v.projection);
    if projections_equal(&rec, &d.cones().natural_cone_projection, TOL) {
        Ok(())
    } else {
        Err(format!("0+ v_F({ys:?}) = {:?}", rec.vrep))
    }
}

/// `y ∈ F(x)` iff `x ∈ F⁻¹(y)` iff `(x, y) ∈ gr F`.
pub fn prop_duality(d: &Designer, rng: &mut StdRng) -> Check {
    let g = graph_point(d, rng);
    let (mut x, mut y) = split(d, &g);
    let size = [0.0, 0.01, 0.5, 3.0][rng.gen_range(0..4)] * scale_of(d).sqrt();
    x.iter_mut().for_each(|v| *v += rng.gen_range(-size..=size));
    y.iter_mut().for_each(|v| *v += rng.gen_range(-size..=size));
    let map = d.map();
    let a = map.value_at(&x).unwrap().contains(&y, 1e-9).unwrap();
    let b = map.preimage(&y).unwrap().contains(&x, 1e-9).unwrap();
    let joint: Vec<f64> = x.iter().chain(&y).copied().collect();
    let c = map.graph().contains(&joint, 1e-9).unwrap();
    if a == b && b == c {
        Ok(())
    } else {
        Err(format!("x={x:?} y={y:?}: value {a}, preimage {b}, graph {c}"))
    }
}

/// Every nonempty value recedes along `G(0)`.
pub fn prop_recession_uniform(d: &Designer, rng: &mut StdRng) -> Check {
    let x = domain_point(d, rng);
    let fx = d
        .map()
        .value_at(&x)
        .unwrap()
        .project(&d.config().projection)
        .map_err(|e| e.to_string())?;
    if fx.is_empty() {
        return Err(format!("F({x:?}) is empty"));
    }
    let rec = recession_projection(&fx);
    if projections_equal(&rec, &d.cones().g_zero_projection, TOL) {
        Ok(())
    } else {
        Err(format!("0+ F({x:?}) = {:?}", rec.vrep))
    }
}

/// Fourier-Motzkin and the LP hull agree on `v_F(Y)`.
pub fn prop_projection_routes_agree(d: &Designer, rng: &mut StdRng) -> Check {
    let ys = if rng.gen_bool(0.2) {
        Vec::new()
    } else {
        attainable_selection(d, rng, 2)
    };
    let prep = d.value_function_prep(&ys).map_err(|e| e.to_string())?;
    let fm = project_with(&prep, ProjectionStrategy::FourierMotzkin);
    let hull = project_with(&prep, ProjectionStrategy::LpHull);
    if projections_equal(&fm, &hull, TOL) {
        Ok(())
    } else {
        Err(format!("Y={ys:?}: FM {:?} vs hull {:?}", fm.vrep, hull.vrep))
    }
}

/// The projection's support function matches the lifted LP in random directions.
pub fn prop_support_matches_lift(d: &Designer, rng: &mut StdRng) -> Check {
    let ys = attainable_selection(d, rng, 2);
    let v = d.value_function(&ys).map_err(|e| e.to_string())?;
    let q = d.map().q();
    for _ in 0..4 {
        let w: Vec<f64> = (0..q).map(|_| rng.gen_range(-0.3..1.0)).collect();
        let mut objective = w.clone();
        objective.resize(v.prep.num_cols(), 0.0);
        let lifted = solve(&LinearProgram::minimize(objective, v.prep.constraints().to_vec()), 1e-9).unwrap();
        let p = &v.projection.vrep;
        let unbounded = p.rays.iter().any(|r| dot(&w, r) < -1e-9) || p.lines.iter().any(|l| dot(&w, l).abs() > 1e-9);
        match lifted {
            SolveOutcome::Unbounded { .. } if unbounded => {}
            SolveOutcome::Optimal { value, .. } if !unbounded => {
                let best = p.points.iter().map(|y| dot(&w, y)).fold(f64::INFINITY, f64::min);
                if (best - value).abs() > TOL * (1.0 + value.abs()) {
                    return Err(format!("w={w:?}: vertices give {best}, LP gives {value}"));
                }
            }
            other => return Err(format!("w={w:?}: unbounded={unbounded} vs LP {other:?}")),
        }
    }
    Ok(())
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for k in col..n {
                        a[r][k] -= f * a[col][k];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of `{x | rows}` (all rows `≥`), by trying every square active set.
pub fn brute_force_vertices(num_vars: usize, rows: &[Constraint]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for_each_subset(rows.len(), num_vars, |s| {
        let a: Vec<Vec<f64>> = s.iter().map(|&i| rows[i].coeffs.clone()).collect();
        let b: Vec<f64> = s.iter().map(|&i| rows[i].rhs).collect();
        if let Some(x) = gauss_solve(a, b) {
            if rows.iter().all(|c| c.violation(&x) <= 1e-7 * (1.0 + c.rhs.abs()))
                && !out.iter().any(|o| o.iter().zip(&x).all(|(p, q)| (p - q).abs() < 1e-7))
            {
                out.push(x);
            }
        }
    });
    out
}

/// Closed-form membership `y ∈ F(x)` for the three-set map, with the margin
/// by which it holds (negative when it fails).
pub fn three_sets_margin(x: &[f64], y: &[f64]) -> f64 {
    let sum: f64 = x.iter().sum();
    let simplex = x.iter().fold((sum - 1.0).abs(), |m, v| m.max(-v));
    if simplex > 1e-12 {
        return -simplex;
    }
    let (l1, l2, l3) = (x[0], x[1], x[2]);
    // y ≥ l1 (1,0) + l2 (0,1) + l3 ((1.05,0.05) + t (-1,1)) for some t ∈ [0,1]
    let a = y[0] - l1 - 1.05 * l3;
    let b = y[1] - l2 - 0.05 * l3;
    if l3 <= 0.0 {
        return a.min(b);
    }
    // need t with -a ≤ l3 t ≤ b, 0 ≤ t ≤ 1
    let lo = (-a).max(0.0);
    let hi = b.min(l3);
    hi - lo
}

/// `min ‖x - target‖∞` over the ambient coordinates of `p`.
pub fn linf_distance(p: &setlp::poly::PRepPolyhedron, target: &[f64]) -> f64 {
    let n = p.ambient_dim();
    let width = p.num_cols() + 1;
    let t = width - 1;
    let mut rows: Vec<Constraint> = p
        .constraints()
        .iter()
        .map(|c| {
            let mut a = c.coeffs.clone();
            a.push(0.0);
            Constraint::new(a, c.rel, c.rhs)
        })
        .collect();
    for i in 0..n {
        let mut up = vec![0.0; width];
        up[t] = 1.0;
        up[i] = -1.0;
        rows.push(Constraint::ge(up, -target[i]));
        let mut down = vec![0.0; width];
        down[t] = 1.0;
        down[i] = 1.0;
        rows.push(Constraint::ge(down, target[i]));
    }
    let mut objective = vec![0.0; width];
    objective[t] = 1.0;
    match solve(&LinearProgram::minimize(objective, rows), 1e-9).unwrap() {
        SolveOutcome::Optimal { value, .. } => value,
        _ => f64::INFINITY,
    }
}

pub fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn close(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.len() == b.len()
        && sorted(a.to_vec())
            .iter()
            .zip(&sorted(b.to_vec()))
            .all(|(p, q)| p.iter().zip(q).all(|(x, y)| (x - y).abs() <= tol))
}
