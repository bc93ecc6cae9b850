//! Lagrange basis functions on the reference triangle (0,0), (1,0), (0,1).
//!
//! Node ordering: the three corners first, then for P2 the edge midpoints
//! (0-1), (1-2), (2-0). Barycentric coordinates are
//! `λ₀ = 1 - x - y`, `λ₁ = x`, `λ₂ = y`.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_LOCAL_DOFS: usize = 6;

/// Basis values and derivatives at one reference point.
#[derive(Debug, Clone)]
pub struct BasisEval<T> {
    /// Number of local shape functions (3 for P1, 6 for P2).
    pub n: usize,
    pub values: [T; MAX_LOCAL_DOFS],
    /// Reference-coordinate gradients.
    pub gradients: [[T; 2]; MAX_LOCAL_DOFS],
    /// Reference-coordinate second derivatives `[d_xx, d_xy; d_yx, d_yy]`.
    /// Identically zero for P1.
    pub second_derivatives: [[[T; 2]; 2]; MAX_LOCAL_DOFS],
}

/// Number of local shape functions for a polynomial degree.
pub fn local_dofs(degree: usize) -> Result<usize> {
    match degree {
        1 => Ok(3),
        2 => Ok(6),
        d => Err(Error::invalid(format!(
            "unsupported element degree {d} (supported: 1, 2)"
        ))),
    }
}

/// Evaluate the P1 or P2 Lagrange basis at a reference point.
pub fn reference_basis<T: Real>(degree: usize, point: [T; 2]) -> Result<BasisEval<T>> {
    let n = local_dofs(degree)?;
    let [x, y] = point;
    let one = T::one();
    let zero = T::zero();
    let l = [one - x - y, x, y];
    // Barycentric gradients are constant.
    let dl = [[-one, -one], [one, zero], [zero, one]];

    let mut eval = BasisEval {
        n,
        values: [zero; MAX_LOCAL_DOFS],
        gradients: [[zero; 2]; MAX_LOCAL_DOFS],
        second_derivatives: [[[zero; 2]; 2]; MAX_LOCAL_DOFS],
    };

    if degree == 1 {
        for k in 0..3 {
            eval.values[k] = l[k];
            eval.gradients[k] = dl[k];
        }
        return Ok(eval);
    }

    let two = T::of(2.0);
    let four = T::of(4.0);
    // Vertex functions λ(2λ - 1).
    for k in 0..3 {
        eval.values[k] = l[k] * (two * l[k] - one);
        for d in 0..2 {
            eval.gradients[k][d] = (four * l[k] - one) * dl[k][d];
        }
        for r in 0..2 {
            for c in 0..2 {
                eval.second_derivatives[k][r][c] = four * dl[k][r] * dl[k][c];
            }
        }
    }
    // Edge functions 4 λ_a λ_b on edges (0,1), (1,2), (2,0).
    for (k, (a, b)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
        let k = k + 3;
        eval.values[k] = four * l[a] * l[b];
        for d in 0..2 {
            eval.gradients[k][d] = four * (l[a] * dl[b][d] + l[b] * dl[a][d]);
        }
        for r in 0..2 {
            for c in 0..2 {
                eval.second_derivatives[k][r][c] =
                    four * (dl[a][r] * dl[b][c] + dl[b][r] * dl[a][c]);
            }
        }
    }
    Ok(eval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const NODES_P1: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    const NODES_P2: [[f64; 2]; 6] = [
        [0.0, 0.0],
        [1.0, 0.0],
        [0.0, 1.0],
        [0.5, 0.0],
        [0.5, 0.5],
        [0.0, 0.5],
    ];

    #[test]
    fn p1_lagrange_property() {
        for (k, node) in NODES_P1.iter().enumerate() {
            let e = reference_basis::<f64>(1, *node).unwrap();
            for j in 0..3 {
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((e.values[j] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn p2_lagrange_property() {
        for (k, node) in NODES_P2.iter().enumerate() {
            let e = reference_basis::<f64>(2, *node).unwrap();
            for j in 0..6 {
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((e.values[j] - want).abs() < 1e-14, "node {k} fn {j}");
            }
        }
    }

    #[test]
    fn p2_barycenter_values() {
        let third = 1.0 / 3.0;
        let e = reference_basis::<f64>(2, [third, third]).unwrap();
        for k in 0..3 {
            assert!((e.values[k] + 1.0 / 9.0).abs() < 1e-15, "vertex {k}");
        }
        for k in 3..6 {
            assert!((e.values[k] - 4.0 / 9.0).abs() < 1e-15, "edge {k}");
        }
    }

    #[test]
    fn p1_second_derivatives_vanish() {
        let e = reference_basis::<f64>(1, [0.3, 0.2]).unwrap();
        for k in 0..3 {
            for r in 0..2 {
                for c in 0..2 {
                    assert_eq!(e.second_derivatives[k][r][c], 0.0);
                }
            }
        }
    }

    #[test]
    fn unsupported_degree_rejected() {
        assert!(reference_basis::<f64>(0, [0.0, 0.0]).is_err());
        assert!(reference_basis::<f64>(3, [0.0, 0.0]).is_err());
    }

    #[test]
    fn p2_gradients_match_finite_differences() {
        let pt = [0.27, 0.41];
        let h = 1e-6;
        let e = reference_basis::<f64>(2, pt).unwrap();
        for k in 0..6 {
            for d in 0..2 {
                let mut lo = pt;
                let mut hi = pt;
                lo[d] -= h;
                hi[d] += h;
                let flo = reference_basis::<f64>(2, lo).unwrap().values[k];
                let fhi = reference_basis::<f64>(2, hi).unwrap().values[k];
                let fd = (fhi - flo) / (2.0 * h);
                assert!(
                    (e.gradients[k][d] - fd).abs() < 1e-8,
                    "fn {k} dir {d}: {} vs {}",
                    e.gradients[k][d],
                    fd
                );
            }
        }
    }

    proptest! {
        #[test]
        fn partition_of_unity(a in 0.0f64..1.0, b in 0.0f64..1.0, degree in 1usize..=2) {
            // Map the square sample into the triangle.
            let (x, y) = if a + b <= 1.0 { (a, b) } else { (1.0 - a, 1.0 - b) };
            let e = reference_basis::<f64>(degree, [x, y]).unwrap();
            let sum: f64 = e.values[..e.n].iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-13);
            // Gradients of a partition of unity sum to zero.
            for d in 0..2 {
                let gsum: f64 = e.gradients[..e.n].iter().map(|g| g[d]).sum();
                prop_assert!(gsum.abs() < 1e-13);
            }
        }
    }
}
