//! Global assembly of bilinear forms and load vectors, Dirichlet
//! imposition, and pointwise field evaluation.
//!
//! Quadrature exactness follows one convention throughout: degree `2p` for
//! matrices, `2p+2` for load vectors, `2p+3` for error norms, with `p` the
//! element degree.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sparse::CsrMatrix;

use super::basis::{reference_basis, BasisEval, MAX_LOCAL_DOFS};
use super::quadrature::{quadrature_rule, QuadratureRule};
use super::space::{FEField, FESpace};

/// Affine map data for one triangle.
#[derive(Debug, Clone)]
pub struct ElementGeometry<T> {
    p0: [T; 2],
    jac: [[T; 2]; 2],
    inv_j: [[T; 2]; 2],
    /// Jacobian determinant = 2 · area (positive for CCW triangles).
    pub det: T,
    /// Longest edge of the triangle.
    pub h_k: T,
}

impl<T: Real> ElementGeometry<T> {
    pub fn new(v: [[T; 2]; 3]) -> Self {
        let jac = [
            [v[1][0] - v[0][0], v[2][0] - v[0][0]],
            [v[1][1] - v[0][1], v[2][1] - v[0][1]],
        ];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let inv_j = [
            [jac[1][1] / det, -jac[0][1] / det],
            [-jac[1][0] / det, jac[0][0] / det],
        ];
        let edge = |a: [T; 2], b: [T; 2]| {
            let dx = b[0] - a[0];
            let dy = b[1] - a[1];
            (dx * dx + dy * dy).sqrt()
        };
        let h_k = edge(v[0], v[1]).max(edge(v[1], v[2])).max(edge(v[2], v[0]));
        Self {
            p0: v[0],
            jac,
            inv_j,
            det,
            h_k,
        }
    }

    /// Map a reference point to physical coordinates.
    pub fn map(&self, r: [T; 2]) -> [T; 2] {
        [
            self.p0[0] + self.jac[0][0] * r[0] + self.jac[0][1] * r[1],
            self.p0[1] + self.jac[1][0] * r[0] + self.jac[1][1] * r[1],
        ]
    }

    /// Physical gradient from a reference gradient: `J⁻ᵀ ∇̂φ`.
    pub fn phys_grad(&self, g: [T; 2]) -> [T; 2] {
        [
            self.inv_j[0][0] * g[0] + self.inv_j[1][0] * g[1],
            self.inv_j[0][1] * g[0] + self.inv_j[1][1] * g[1],
        ]
    }

    /// Physical Laplacian from a reference Hessian: `tr(J⁻ᵀ Ĥ J⁻¹)`.
    pub fn phys_laplacian(&self, h: [[T; 2]; 2]) -> T {
        let mut lap = T::zero();
        for i in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    lap += self.inv_j[k][i] * h[k][l] * self.inv_j[l][i];
                }
            }
        }
        lap
    }
}

/// Basis evaluations frozen at the points of a quadrature rule.
#[derive(Debug, Clone)]
pub struct BasisAtQuadrature<T> {
    pub rule: QuadratureRule<T>,
    pub evals: Vec<BasisEval<T>>,
}

impl<T: Real> BasisAtQuadrature<T> {
    pub fn new(degree: usize, rule_degree: usize) -> Result<Self> {
        let rule = quadrature_rule(rule_degree)?;
        let evals = rule
            .points
            .iter()
            .map(|&p| reference_basis(degree, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rule, evals })
    }
}

/// Matrix quadrature degree `2p`.
pub fn matrix_rule_degree(p: usize) -> usize {
    2 * p
}

/// Load-vector quadrature degree `2p+2`.
pub fn load_rule_degree(p: usize) -> usize {
    2 * p + 2
}

/// Error-norm quadrature degree `2p+3`.
pub fn error_rule_degree(p: usize) -> usize {
    2 * p + 3
}

fn scatter<T: Real>(a: &mut CsrMatrix<T>, dofs: &[usize], local: &[[T; MAX_LOCAL_DOFS]]) {
    for (li, &gi) in dofs.iter().enumerate() {
        for (lj, &gj) in dofs.iter().enumerate() {
            a.add_at(gi, gj, local[li][lj]);
        }
    }
}

/// Assemble `μ(∇u,∇w) + (b·∇u, w) + σ_eff(u, w)` over the whole space,
/// before boundary conditions.
///
/// `b` constant makes the conservative advection form `(∇·(b u), w)` equal
/// to `(b·∇u, w)`.
pub fn assemble_operator<T: Real>(
    space: &FESpace<T>,
    mu: T,
    b: [T; 2],
    sigma_eff: T,
) -> Result<CsrMatrix<T>> {
    if mu < T::zero() {
        return Err(Error::invalid("assemble_operator requires mu >= 0"));
    }
    let basis = BasisAtQuadrature::new(space.degree(), matrix_rule_degree(space.degree()))?;
    let mut a = CsrMatrix::zeros_on(space.pattern());
    let nl = space.n_local();
    let mesh = space.mesh();
    let mut grads = [[T::zero(); 2]; MAX_LOCAL_DOFS];
    for cell in 0..space.n_cells() {
        let geo = ElementGeometry::new(mesh.triangle_vertices(cell));
        let mut local = [[T::zero(); MAX_LOCAL_DOFS]; MAX_LOCAL_DOFS];
        for (q, eval) in basis.evals.iter().enumerate() {
            let w = basis.rule.weights[q] * geo.det;
            for k in 0..nl {
                grads[k] = geo.phys_grad(eval.gradients[k]);
            }
            for i in 0..nl {
                let vi = eval.values[i];
                for j in 0..nl {
                    let diff = mu * (grads[j][0] * grads[i][0] + grads[j][1] * grads[i][1]);
                    let adv = (b[0] * grads[j][0] + b[1] * grads[j][1]) * vi;
                    let react = sigma_eff * eval.values[j] * vi;
                    local[i][j] += w * (diff + adv + react);
                }
            }
        }
        scatter(&mut a, space.cell_dofs(cell), &local);
    }
    Ok(a)
}

/// Assemble the filter system matrix `(u,w) + δ² (a ∇u, ∇w)` with the
/// indicator `a` interpolated from nodal values through the FE basis
/// (`a ≡ 1` when `indicator` is `None`).
pub fn assemble_filter_matrix<T: Real>(
    space: &FESpace<T>,
    delta: T,
    indicator: Option<&FEField<T>>,
) -> Result<CsrMatrix<T>> {
    if let Some(a) = indicator {
        if a.values().len() != space.n_dofs() {
            return Err(Error::DimensionMismatch(
                "indicator field does not match space".into(),
            ));
        }
    }
    let basis = BasisAtQuadrature::new(space.degree(), matrix_rule_degree(space.degree()))?;
    let mut m = CsrMatrix::zeros_on(space.pattern());
    let nl = space.n_local();
    let mesh = space.mesh();
    let d2 = delta * delta;
    let mut grads = [[T::zero(); 2]; MAX_LOCAL_DOFS];
    for cell in 0..space.n_cells() {
        let geo = ElementGeometry::new(mesh.triangle_vertices(cell));
        let dofs = space.cell_dofs(cell);
        let mut local = [[T::zero(); MAX_LOCAL_DOFS]; MAX_LOCAL_DOFS];
        for (q, eval) in basis.evals.iter().enumerate() {
            let w = basis.rule.weights[q] * geo.det;
            let a_q = match indicator {
                Some(a) => {
                    let vals = a.values();
                    (0..nl).map(|k| vals[dofs[k]] * eval.values[k]).sum()
                }
                None => T::one(),
            };
            for k in 0..nl {
                grads[k] = geo.phys_grad(eval.gradients[k]);
            }
            for i in 0..nl {
                for j in 0..nl {
                    let mass = eval.values[j] * eval.values[i];
                    let stiff = grads[j][0] * grads[i][0] + grads[j][1] * grads[i][1];
                    local[i][j] += w * (mass + d2 * a_q * stiff);
                }
            }
        }
        scatter(&mut m, dofs, &local);
    }
    Ok(m)
}

/// Assemble the load vector `(g, φ_i)` with a rule of the given exactness.
pub fn assemble_load<T: Real>(
    space: &FESpace<T>,
    g: impl Fn(T, T) -> T,
    quad_degree: usize,
) -> Result<Vec<T>> {
    let basis = BasisAtQuadrature::new(space.degree(), quad_degree)?;
    let mut out = vec![T::zero(); space.n_dofs()];
    let nl = space.n_local();
    let mesh = space.mesh();
    for cell in 0..space.n_cells() {
        let geo = ElementGeometry::new(mesh.triangle_vertices(cell));
        let dofs = space.cell_dofs(cell);
        for (q, eval) in basis.evals.iter().enumerate() {
            let [x, y] = geo.map(basis.rule.points[q]);
            let gw = g(x, y) * basis.rule.weights[q] * geo.det;
            for i in 0..nl {
                out[dofs[i]] += gw * eval.values[i];
            }
        }
    }
    Ok(out)
}

/// A system matrix with Dirichlet rows/columns eliminated symmetrically.
///
/// Eliminated column coefficients are kept so that per-step right-hand sides
/// can receive the boundary lift without reassembling the matrix.
#[derive(Debug, Clone)]
pub struct ConstrainedSystem<T> {
    matrix: CsrMatrix<T>,
    dirichlet_dofs: Vec<usize>,
    /// (row, index into `dirichlet_dofs`, eliminated coefficient).
    lift: Vec<(usize, usize, T)>,
}

impl<T: Real> ConstrainedSystem<T> {
    pub fn new(mut matrix: CsrMatrix<T>, dofs: &[usize]) -> Result<Self> {
        let n = matrix.nrows();
        let mut slot = vec![usize::MAX; n];
        for (k, &d) in dofs.iter().enumerate() {
            if d >= n {
                return Err(Error::invalid(format!(
                    "dirichlet dof {d} out of range for {n} dofs"
                )));
            }
            slot[d] = k;
        }
        let mut lift = Vec::new();
        for i in 0..n {
            let start = matrix.pattern().row_offsets[i];
            let end = matrix.pattern().row_offsets[i + 1];
            if slot[i] != usize::MAX {
                // Constrained row becomes an identity row.
                for pos in start..end {
                    let j = matrix.pattern().col_indices[pos];
                    matrix.values_mut()[pos] = if j == i { T::one() } else { T::zero() };
                }
            } else {
                // Eliminate constrained columns, remembering the lift.
                for pos in start..end {
                    let j = matrix.pattern().col_indices[pos];
                    if slot[j] != usize::MAX {
                        let v = matrix.values()[pos];
                        if v != T::zero() {
                            lift.push((i, slot[j], v));
                        }
                        matrix.values_mut()[pos] = T::zero();
                    }
                }
            }
        }
        Ok(Self {
            matrix,
            dirichlet_dofs: dofs.to_vec(),
            lift,
        })
    }

    pub fn matrix(&self) -> &CsrMatrix<T> {
        &self.matrix
    }

    /// Apply boundary values to a right-hand side: lift for unconstrained
    /// rows, prescribed values on constrained rows. `values[k]` belongs to
    /// `dirichlet_dofs[k]`.
    pub fn constrain_rhs(&self, rhs: &mut [T], values: &[T]) {
        debug_assert_eq!(values.len(), self.dirichlet_dofs.len());
        for &(row, k, a) in &self.lift {
            rhs[row] -= a * values[k];
        }
        for (k, &d) in self.dirichlet_dofs.iter().enumerate() {
            rhs[d] = values[k];
        }
    }
}

/// One-shot Dirichlet imposition: identity rows, symmetric column
/// elimination, boundary values moved into the right-hand side.
pub fn apply_dirichlet<T: Real>(
    matrix: CsrMatrix<T>,
    rhs: &mut [T],
    dofs: &[usize],
    values: &[T],
) -> Result<CsrMatrix<T>> {
    if dofs.len() != values.len() {
        return Err(Error::invalid(
            "apply_dirichlet: dofs and values lengths differ",
        ));
    }
    let sys = ConstrainedSystem::new(matrix, dofs)?;
    sys.constrain_rhs(rhs, values);
    Ok(sys.matrix)
}

/// Evaluate a field at a point of the closed unit square.
pub fn evaluate_at<T: Real>(field: &FEField<T>, x: T, y: T) -> T {
    let space = field.space();
    let mesh = space.mesh();
    let n = mesh.n;
    let nf = T::of_usize(n);
    let clamp = |v: T| v.max(T::zero()).min(nf - T::of(1e-12).max(T::epsilon()));
    let xs = clamp(x * nf);
    let ys = clamp(y * nf);
    let i = xs.floor().as_f64() as usize;
    let j = ys.floor().as_f64() as usize;
    let s = xs - T::of_usize(i);
    let t = ys - T::of_usize(j);
    // Sub-square (i, j) holds triangles 2(j·n+i) (lower, t <= s) and +1.
    let (cell, rx, ry) = if t <= s {
        (2 * (j * n + i), s - t, t)
    } else {
        (2 * (j * n + i) + 1, s, t - s)
    };
    let eval = reference_basis(space.degree(), [rx, ry]).expect("degree validated");
    let dofs = space.cell_dofs(cell);
    let vals = field.values();
    (0..space.n_local())
        .map(|k| vals[dofs[k]] * eval.values[k])
        .sum()
}
