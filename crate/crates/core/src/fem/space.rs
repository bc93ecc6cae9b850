//! Lagrange finite element spaces over the structured mesh, and coefficient
//! vectors over their degrees of freedom.
//!
//! P1 degrees of freedom coincide with mesh vertices. P2 adds edge midpoints;
//! on the structured mesh these fill out the full `(2n+1)²` lattice (the
//! diagonal midpoint is the sub-square center), so dofs are numbered
//! lexicographically on that lattice, consistent with the vertex numbering.

use crate::error::{Error, Result};
use crate::mesh::StructuredTriMesh;
use crate::scalar::Real;
use crate::sparse::SparsityPattern;
use std::sync::{Arc, OnceLock};

use super::basis::local_dofs;

/// P1 or P2 Lagrange space on a structured triangulation.
#[derive(Debug)]
pub struct FESpace<T> {
    mesh: StructuredTriMesh<T>,
    degree: usize,
    dof_coords: Vec<[T; 2]>,
    /// Per-cell dof indices, `local_dofs(degree)` entries per cell.
    cell_dofs: Vec<usize>,
    n_local: usize,
    /// Sorted indices of dofs on the Dirichlet boundary (here all of ∂Ω).
    dirichlet_dofs: Vec<usize>,
    boundary_dof_flags: Vec<bool>,
    pattern: OnceLock<Arc<SparsityPattern>>,
}

impl<T: Real> FESpace<T> {
    pub fn new(mesh: StructuredTriMesh<T>, degree: usize) -> Result<Arc<Self>> {
        let n_local = local_dofs(degree)?;
        let n = mesh.n;
        let (dof_coords, cell_dofs, boundary_dof_flags) = match degree {
            1 => {
                let coords = mesh.vertices.clone();
                let cells = mesh.triangles.iter().flatten().copied().collect();
                (coords, cells, mesh.boundary_vertex_flags.clone())
            }
            2 => {
                // Fine lattice of size (2n+1)²; vertex (i,j) sits at (2i,2j).
                let m = 2 * n + 1;
                let denom = T::of_usize(2 * n);
                let mut coords = Vec::with_capacity(m * m);
                let mut flags = Vec::with_capacity(m * m);
                for j in 0..m {
                    for i in 0..m {
                        coords.push([T::of_usize(i) / denom, T::of_usize(j) / denom]);
                        flags.push(i == 0 || i == m - 1 || j == 0 || j == m - 1);
                    }
                }
                let nv = n + 1;
                let fine = |v: usize| -> (usize, usize) { (2 * (v % nv), 2 * (v / nv)) };
                let mut cells = Vec::with_capacity(mesh.triangles.len() * 6);
                for t in &mesh.triangles {
                    let corners = [fine(t[0]), fine(t[1]), fine(t[2])];
                    for (i, j) in corners {
                        cells.push(j * m + i);
                    }
                    // Midpoints of edges (0,1), (1,2), (2,0) on the fine lattice.
                    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                        let i = (corners[a].0 + corners[b].0) / 2;
                        let j = (corners[a].1 + corners[b].1) / 2;
                        cells.push(j * m + i);
                    }
                }
                (coords, cells, flags)
            }
            _ => unreachable!(),
        };
        let dirichlet_dofs = boundary_dof_flags
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        Ok(Arc::new(Self {
            mesh,
            degree,
            dof_coords,
            cell_dofs,
            n_local,
            dirichlet_dofs,
            boundary_dof_flags,
            pattern: OnceLock::new(),
        }))
    }

    pub fn mesh(&self) -> &StructuredTriMesh<T> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_dofs(&self) -> usize {
        self.dof_coords.len()
    }

    pub fn n_cells(&self) -> usize {
        self.mesh.n_triangles()
    }

    /// Local dof count per cell (3 for P1, 6 for P2).
    pub fn n_local(&self) -> usize {
        self.n_local
    }

    pub fn dof_coords(&self) -> &[[T; 2]] {
        &self.dof_coords
    }

    pub fn cell_dofs(&self, cell: usize) -> &[usize] {
        let s = cell * self.n_local;
        &self.cell_dofs[s..s + self.n_local]
    }

    pub fn dirichlet_dofs(&self) -> &[usize] {
        &self.dirichlet_dofs
    }

    pub fn is_boundary_dof(&self, dof: usize) -> bool {
        self.boundary_dof_flags[dof]
    }

    /// Shared CSR sparsity pattern of the element connectivity, built once.
    pub fn pattern(&self) -> Arc<SparsityPattern> {
        self.pattern
            .get_or_init(|| {
                let n = self.n_dofs();
                let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
                for cell in 0..self.n_cells() {
                    let dofs = self.cell_dofs(cell);
                    for &i in dofs {
                        rows[i].extend_from_slice(dofs);
                    }
                }
                for row in &mut rows {
                    row.sort_unstable();
                    row.dedup();
                }
                Arc::new(SparsityPattern::from_rows(&rows))
            })
            .clone()
    }

    /// Values of a dof vector at mesh vertices only (used for P2 export).
    pub fn vertex_values(&self, values: &[T]) -> Vec<T> {
        match self.degree {
            1 => values.to_vec(),
            _ => {
                let n = self.mesh.n;
                let m = 2 * n + 1;
                let mut out = Vec::with_capacity((n + 1) * (n + 1));
                for j in 0..=n {
                    for i in 0..=n {
                        out.push(values[2 * j * m + 2 * i]);
                    }
                }
                out
            }
        }
    }
}

/// Coefficient vector over the dofs of an [`FESpace`].
#[derive(Debug, Clone)]
pub struct FEField<T> {
    space: Arc<FESpace<T>>,
    values: Vec<T>,
}

impl<T: Real> FEField<T> {
    pub fn new(space: Arc<FESpace<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != space.n_dofs() {
            return Err(Error::DimensionMismatch(format!(
                "field has {} values but space has {} dofs",
                values.len(),
                space.n_dofs()
            )));
        }
        Ok(Self { space, values })
    }

    pub fn zeros(space: Arc<FESpace<T>>) -> Self {
        let n = space.n_dofs();
        Self {
            space,
            values: vec![T::zero(); n],
        }
    }

    pub fn space(&self) -> &Arc<FESpace<T>> {
        &self.space
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// True if `other` lives on the same space object.
    pub fn same_space(&self, other: &FEField<T>) -> bool {
        Arc::ptr_eq(&self.space, &other.space)
    }
}

/// Nodal interpolant: evaluate `g` at every dof coordinate.
pub fn interpolate<T: Real>(space: &Arc<FESpace<T>>, g: impl Fn(T, T) -> T) -> FEField<T> {
    let values = space.dof_coords().iter().map(|&[x, y]| g(x, y)).collect();
    FEField {
        space: space.clone(),
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::assembly::evaluate_at;

    fn space(n: usize, degree: usize) -> Arc<FESpace<f64>> {
        FESpace::new(StructuredTriMesh::new(n).unwrap(), degree).unwrap()
    }

    #[test]
    fn dof_counts() {
        assert_eq!(space(4, 1).n_dofs(), 25);
        assert_eq!(space(4, 2).n_dofs(), 81);
        assert_eq!(space(25, 2).n_dofs(), 51 * 51);
    }

    #[test]
    fn every_dof_used_and_dirichlet_on_boundary() {
        for degree in [1, 2] {
            let s = space(3, degree);
            let mut used = vec![false; s.n_dofs()];
            for c in 0..s.n_cells() {
                for &d in s.cell_dofs(c) {
                    used[d] = true;
                }
            }
            assert!(used.iter().all(|&u| u));
            for &d in s.dirichlet_dofs() {
                let [x, y] = s.dof_coords()[d];
                assert!(x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0);
            }
            // And conversely: every geometric boundary dof is flagged.
            let n_geom = s
                .dof_coords()
                .iter()
                .filter(|&&[x, y]| x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0)
                .count();
            assert_eq!(n_geom, s.dirichlet_dofs().len());
        }
    }

    #[test]
    fn interpolate_constant() {
        let s = space(5, 2);
        let f = interpolate(&s, |_, _| 3.25);
        assert!(f.values().iter().all(|&v| v == 3.25));
    }

    #[test]
    fn p1_reproduces_linears_pointwise() {
        let s = space(4, 1);
        let g = |x: f64, y: f64| 2.0 * x - 0.5 * y + 0.25;
        let f = interpolate(&s, g);
        for (x, y) in [(0.13, 0.57), (0.99, 0.01), (0.5, 0.5)] {
            let v = evaluate_at(&f, x, y);
            assert!((v - g(x, y)).abs() < 1e-13, "({x},{y}): {v}");
        }
    }

    #[test]
    fn p2_reproduces_quadratics_pointwise() {
        let s = space(3, 2);
        let g = |x: f64, y: f64| x * x - 2.0 * x * y + 3.0 * y * y + x - y + 0.5;
        let f = interpolate(&s, g);
        for (x, y) in [(0.2, 0.7), (0.88, 0.05), (1.0 / 3.0, 1.0 / 3.0)] {
            let v = evaluate_at(&f, x, y);
            assert!((v - g(x, y)).abs() < 1e-12, "({x},{y}): {v}");
        }
    }

    #[test]
    fn vertex_values_extracts_coarse_lattice() {
        let s = space(2, 2);
        let f = interpolate(&s, |x, y| x + 10.0 * y);
        let vv = s.vertex_values(f.values());
        assert_eq!(vv.len(), 9);
        assert!((vv[0] - 0.0).abs() < 1e-15);
        assert!((vv[1] - 0.5).abs() < 1e-15);
        assert!((vv[8] - 11.0).abs() < 1e-15);
    }

    #[test]
    fn field_length_checked() {
        let s = space(2, 1);
        assert!(FEField::new(s, vec![0.0; 5]).is_err());
    }
}
