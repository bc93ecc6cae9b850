//! Structured triangulations of the unit square.
//!
//! The square `(0,1)²` is divided into `n × n` sub-squares, each split into
//! two triangles along the diagonal from its lower-left to its upper-right
//! corner. Vertices are numbered lexicographically: vertex `(i/n, j/n)` has
//! index `j·(n+1) + i`, which keeps degree-of-freedom numbering reproducible.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform right-isosceles triangulation of `(0,1)²`.
///
/// Immutable after construction; safe to share read-only across threads.
#[derive(Debug, Clone)]
pub struct StructuredTriMesh<T> {
    /// Partitions per side.
    pub n: usize,
    /// Vertex coordinates, lexicographic by (row, column).
    pub vertices: Vec<[T; 2]>,
    /// Vertex-index triples, counter-clockwise.
    pub triangles: Vec<[usize; 3]>,
    /// True for vertices on `∂Ω`.
    pub boundary_vertex_flags: Vec<bool>,
    /// Longest edge, `√2/n`.
    pub h: T,
    /// Shortest edge, `1/n`.
    pub h_min: T,
}

impl<T: Real> StructuredTriMesh<T> {
    /// Build the structured mesh with `n` partitions per side.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("mesh requires n >= 1 partitions per side"));
        }
        let nv = n + 1;
        let nf = T::of_usize(n);
        let mut vertices = Vec::with_capacity(nv * nv);
        let mut boundary_vertex_flags = Vec::with_capacity(nv * nv);
        for j in 0..nv {
            for i in 0..nv {
                vertices.push([T::of_usize(i) / nf, T::of_usize(j) / nf]);
                boundary_vertex_flags.push(i == 0 || i == n || j == 0 || j == n);
            }
        }
        // Each sub-square (i,j) splits along the lower-left -> upper-right
        // diagonal into (ll, lr, ur) and (ll, ur, ul), both counter-clockwise.
        let mut triangles = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                let ll = j * nv + i;
                let lr = ll + 1;
                let ul = ll + nv;
                let ur = ul + 1;
                triangles.push([ll, lr, ur]);
                triangles.push([ll, ur, ul]);
            }
        }
        Ok(Self {
            n,
            vertices,
            triangles,
            boundary_vertex_flags,
            h: T::SQRT_2() / nf,
            h_min: T::one() / nf,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Corner coordinates of triangle `k`.
    pub fn triangle_vertices(&self, k: usize) -> [[T; 2]; 3] {
        let t = self.triangles[k];
        [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]]
    }

    /// Signed area of triangle `k` (positive for counter-clockwise order).
    pub fn signed_area(&self, k: usize) -> T {
        let [a, b, c] = self.triangle_vertices(k);
        let half = T::of(0.5);
        half * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }
}

/// Local Péclet number `‖b‖_∞ · h / (2μ)` with `h = √2/n`.
pub fn local_peclet<T: Real>(mesh: &StructuredTriMesh<T>, b_inf: T, mu: T) -> Result<T> {
    if mu <= T::zero() {
        return Err(Error::invalid("local_peclet requires mu > 0"));
    }
    Ok(b_inf * mesh.h / (T::of(2.0) * mu))
}
