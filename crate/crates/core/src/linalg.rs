//! Small dense vector helpers shared by the geometry modules.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|v| v * s).collect()
}

/// Returns `a / |a|`, or `None` for (numerically) zero vectors.
pub fn normalized(a: &[f64], eps: f64) -> Option<Vec<f64>> {
    let n = norm(a);
    if n <= eps {
        None
    } else {
        Some(scaled(a, 1.0 / n))
    }
}

/// Orthonormal basis of `span(vectors)` by modified Gram-Schmidt.
pub fn orthonormal_basis(vectors: &[Vec<f64>], eps: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let scale = norm(v).max(1.0);
        if let Some(u) = normalized(&w, eps * scale) {
            basis.push(u);
        }
    }
    basis
}

/// Removes the components of `v` along an orthonormal `basis`.
pub fn reject(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut w = v.to_vec();
    for b in basis {
        let c = dot(&w, b);
        for (wi, bi) in w.iter_mut().zip(b) {
            *wi -= c * bi;
        }
    }
    w
}

pub fn approx_eq_vec(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len()
        && a
            .iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_schmidt_drops_dependent_vectors() {
        let b = orthonormal_basis(&[vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0], vec![0.0, 1.0, 0.0]], 1e-9);
        assert_eq!(b.len(), 2);
        assert!(dot(&b[0], &b[1]).abs() < 1e-12);
    }

    #[test]
    fn reject_removes_span_component() {
        let basis = orthonormal_basis(&[vec![0.0, 1.0]], 1e-9);
        assert_eq!(reject(&[3.0, 4.0], &basis), vec![3.0, 0.0]);
    }
}
