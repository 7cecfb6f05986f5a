//! Double description for small cones `{x : a_i·x ≥ 0, e_j·x = 0}`.
//!
//! Only ever used in low dimension (objective space plus one homogenizing
//! coordinate), where the incremental algorithm with the combinatorial
//! adjacency test is cheap and stable enough in floating point.

use crate::linalg::{dot, normalized};

const EPS: f64 = 1e-9;

#[derive(Clone, Debug, Default)]
pub(crate) struct ConeGenerators {
    pub lines: Vec<Vec<f64>>,
    pub rays: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet(vec![0; bits.div_ceil(64).max(1)])
    }

    fn filled(bits: usize, upto: usize) -> Self {
        let mut s = Self::new(bits);
        for k in 0..upto {
            s.set(k);
        }
        s
    }

    fn set(&mut self, k: usize) {
        self.0[k / 64] |= 1 << (k % 64);
    }

    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Vec<f64>,
    zero: BitSet,
}

/// Generators of `{x ∈ R^dim : a·x ≥ 0 for a in ineqs, e·x = 0 for e in eqs}`.
pub(crate) fn cone_generators(dim: usize, ineqs: &[Vec<f64>], eqs: &[Vec<f64>]) -> ConeGenerators {
    let rows: Vec<(&Vec<f64>, bool)> = eqs
        .iter()
        .map(|e| (e, true))
        .chain(ineqs.iter().map(|a| (a, false)))
        .collect();
    let total = rows.len();

    let mut lines: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, (row, is_eq)) in rows.into_iter().enumerate() {
        let Some(a) = normalized(row, 1e-300) else {
            for r in rays.iter_mut() {
                r.zero.set(k);
            }
            continue;
        };

        // a lineality direction not orthogonal to the row leaves the lineality space
        let pick = lines
            .iter()
            .enumerate()
            .map(|(i, l)| (i, dot(&a, l)))
            .filter(|(_, s)| s.abs() > EPS)
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()));
        if let Some((idx, s)) = pick {
            let mut l0 = lines.remove(idx);
            let mut s = s;
            if s < 0.0 {
                l0.iter_mut().for_each(|v| *v = -*v);
                s = -s;
            }
            for l in lines.iter_mut() {
                let f = dot(&a, l) / s;
                for (li, l0i) in l.iter_mut().zip(&l0) {
                    *li -= f * l0i;
                }
                if let Some(u) = normalized(l, 1e-300) {
                    *l = u;
                }
            }
            for r in rays.iter_mut() {
                let f = dot(&a, &r.v) / s;
                for (ri, l0i) in r.v.iter_mut().zip(&l0) {
                    *ri -= f * l0i;
                }
                if let Some(u) = normalized(&r.v, 1e-300) {
                    r.v = u;
                }
                r.zero.set(k);
            }
            if !is_eq {
                rays.push(Ray {
                    v: normalized(&l0, 1e-300).unwrap_or(l0),
                    zero: BitSet::filled(total, k),
                });
            }
            continue;
        }

        let vals: Vec<f64> = rays.iter().map(|r| dot(&a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > EPS).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < -EPS).collect();
        let effective = dim - lines.len();

        let mut created: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zero.and(&rays[n].zero);
                if common.count() + 2 < effective {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(i, r)| i != p && i != n && common.is_subset(&r.zero));
                if blocked {
                    continue;
                }
                let v: Vec<f64> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(vn, vp)| vals[p] * vn - vals[n] * vp)
                    .collect();
                if let Some(u) = normalized(&v, 1e-14) {
                    let mut zero = common;
                    zero.set(k);
                    created.push(Ray { v: u, zero });
                }
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].abs() <= EPS {
                r.zero.set(k);
                next.push(r);
            } else if vals[i] > EPS && !is_eq {
                next.push(r);
            }
        }
        next.extend(created);
        rays = next;
    }

    let mut out_rays: Vec<Vec<f64>> = Vec::new();
    for r in rays {
        if !out_rays
            .iter()
            .any(|o| o.iter().zip(&r.v).all(|(x, y)| (x - y).abs() <= 1e-9))
        {
            out_rays.push(r.v);
        }
    }
    ConeGenerators {
        lines,
        rays: out_rays,
    }
}
