//! Structured mesh descriptor for Cartesian (2D/3D) and cylindrical (r-theta-z)
//! coordinate boxes, plus the index arithmetic shared by every module.
//!
//! A mesh is always stored as a 3D box in coordinate space; 2D meshes use a
//! single slab of unit thickness along the third axis. Metric weighting
//! (`dv = r dr dtheta dz` in cylindrical coordinates) is applied by the
//! geometry module, never baked into the index layout.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordSystem {
    Cartesian2d,
    Cartesian3d,
    /// Axes are (r, theta, z). The radial extent must stay away from the axis.
    Cylindrical3d,
}

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("axis {axis}: need upper > lower and at least one cell (lower={lower}, upper={upper}, cells={cells})")]
    BadExtent { axis: usize, lower: f64, upper: f64, cells: usize },
    #[error("cylindrical mesh requires lower_r > 0 (got {0})")]
    AxisTouching(f64),
}

#[derive(Debug, Clone)]
pub struct Mesh {
    coord: CoordSystem,
    lower: [f64; 3],
    upper: [f64; 3],
    n: [usize; 3],
    spacing: [f64; 3],
}

impl Mesh {
    pub fn cartesian2d(lower: [f64; 2], upper: [f64; 2], cells: [usize; 2]) -> Result<Self, MeshError> {
        // The dummy third axis is a unit slab centered on z = 0, so 2D cell
        // centers carry z = 0 and areas equal volumes.
        Self::build(
            CoordSystem::Cartesian2d,
            [lower[0], lower[1], -0.5],
            [upper[0], upper[1], 0.5],
            [cells[0], cells[1], 1],
        )
    }

    /// Number of nodes carrying corner labels: the k = 0 plane for 2D meshes,
    /// the full node grid in 3D.
    pub fn n_active_nodes(&self) -> usize {
        if self.dim() == 2 {
            (self.n[0] + 1) * (self.n[1] + 1)
        } else {
            self.n_nodes()
        }
    }

    pub fn cartesian3d(lower: [f64; 3], upper: [f64; 3], cells: [usize; 3]) -> Result<Self, MeshError> {
        Self::build(CoordSystem::Cartesian3d, lower, upper, cells)
    }

    pub fn cylindrical3d(lower: [f64; 3], upper: [f64; 3], cells: [usize; 3]) -> Result<Self, MeshError> {
        if lower[0] <= 0.0 {
            return Err(MeshError::AxisTouching(lower[0]));
        }
        Self::build(CoordSystem::Cylindrical3d, lower, upper, cells)
    }

    fn build(coord: CoordSystem, lower: [f64; 3], upper: [f64; 3], n: [usize; 3]) -> Result<Self, MeshError> {
        let mut spacing = [0.0; 3];
        for k in 0..3 {
            if n[k] == 0 || upper[k] <= lower[k] {
                return Err(MeshError::BadExtent { axis: k, lower: lower[k], upper: upper[k], cells: n[k] });
            }
            spacing[k] = (upper[k] - lower[k]) / n[k] as f64;
        }
        Ok(Mesh { coord, lower, upper, n, spacing })
    }

    pub fn coord_system(&self) -> CoordSystem {
        self.coord
    }

    pub fn dim(&self) -> usize {
        match self.coord {
            CoordSystem::Cartesian2d => 2,
            _ => 3,
        }
    }

    pub fn is_cylindrical(&self) -> bool {
        self.coord == CoordSystem::Cylindrical3d
    }

    pub fn lower(&self) -> [f64; 3] {
        self.lower
    }

    pub fn upper(&self) -> [f64; 3] {
        self.upper
    }

    pub fn cells_per_axis(&self) -> [usize; 3] {
        self.n
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn min_spacing(&self) -> f64 {
        (0..self.dim()).map(|k| self.spacing[k]).fold(f64::INFINITY, f64::min)
    }

    pub fn n_cells(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn n_nodes(&self) -> usize {
        (self.n[0] + 1) * (self.n[1] + 1) * (self.n[2] + 1)
    }

    #[inline]
    pub fn cell_lin(&self, c: [usize; 3]) -> usize {
        (c[2] * self.n[1] + c[1]) * self.n[0] + c[0]
    }

    #[inline]
    pub fn cell_from_lin(&self, lin: usize) -> [usize; 3] {
        let i = lin % self.n[0];
        let j = (lin / self.n[0]) % self.n[1];
        let k = lin / (self.n[0] * self.n[1]);
        [i, j, k]
    }

    #[inline]
    pub fn node_lin(&self, v: [usize; 3]) -> usize {
        (v[2] * (self.n[1] + 1) + v[1]) * (self.n[0] + 1) + v[0]
    }

    #[inline]
    pub fn node_from_lin(&self, lin: usize) -> [usize; 3] {
        let sx = self.n[0] + 1;
        let sy = self.n[1] + 1;
        let i = lin % sx;
        let j = (lin / sx) % sy;
        let k = lin / (sx * sy);
        [i, j, k]
    }

    #[inline]
    pub fn node_pos(&self, v: [usize; 3]) -> [f64; 3] {
        [
            self.lower[0] + v[0] as f64 * self.spacing[0],
            self.lower[1] + v[1] as f64 * self.spacing[1],
            self.lower[2] + v[2] as f64 * self.spacing[2],
        ]
    }

    #[inline]
    pub fn cell_center(&self, c: [usize; 3]) -> [f64; 3] {
        [
            self.lower[0] + (c[0] as f64 + 0.5) * self.spacing[0],
            self.lower[1] + (c[1] as f64 + 0.5) * self.spacing[1],
            self.lower[2] + (c[2] as f64 + 0.5) * self.spacing[2],
        ]
    }

    /// Faces with normal along `axis` form a grid with one extra layer along
    /// that axis; `f[axis]` ranges over `0..=n[axis]`.
    #[inline]
    pub fn face_dims(&self, axis: usize) -> [usize; 3] {
        let mut d = self.n;
        d[axis] += 1;
        d
    }

    #[inline]
    pub fn face_lin(&self, axis: usize, f: [usize; 3]) -> usize {
        let d = self.face_dims(axis);
        (f[2] * d[1] + f[1]) * d[0] + f[0]
    }

    pub fn n_faces(&self, axis: usize) -> usize {
        let d = self.face_dims(axis);
        d[0] * d[1] * d[2]
    }

    pub fn in_bounds(&self, c: [i64; 3]) -> bool {
        (0..3).all(|k| c[k] >= 0 && (c[k] as usize) < self.n[k])
    }

    /// Iterate all cells in lexicographic order (i fastest).
    pub fn cells(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let n = self.n;
        (0..n[2]).flat_map(move |k| (0..n[1]).flat_map(move |j| (0..n[0]).map(move |i| [i, j, k])))
    }
}
