//! Metric weights for Cartesian and cylindrical coordinate boxes.
//!
//! All geometry is integrated over flat polygons in coordinate space; the
//! metric enters through scalar densities. In cylindrical coordinates (r,
//! theta, z) the volume element is `r dr dtheta dz`, the face elements are
//! `r dtheta dz`, `dr dz`, and `r dr dtheta`, and a flat coordinate-space
//! facet with unit coordinate normal `nh` has physical vector area density
//! `(r nh_r, nh_theta, r nh_z)` per unit coordinate area.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Cartesian,
    Cylindrical,
}

impl Metric {
    /// Volume density at coordinate point `q`.
    #[inline]
    pub fn volume_weight(self, q: [f64; 3]) -> f64 {
        match self {
            Metric::Cartesian => 1.0,
            Metric::Cylindrical => q[0],
        }
    }

    /// Surface density on a face with normal along `axis`.
    #[inline]
    pub fn face_weight(self, axis: usize, q: [f64; 3]) -> f64 {
        match self {
            Metric::Cartesian => 1.0,
            Metric::Cylindrical => {
                if axis == 1 {
                    1.0
                } else {
                    q[0]
                }
            }
        }
    }

    /// Componentwise scaling turning a unit coordinate-space normal into the
    /// physical vector-area density.
    #[inline]
    pub fn area_scale(self, q: [f64; 3]) -> [f64; 3] {
        match self {
            Metric::Cartesian => [1.0, 1.0, 1.0],
            Metric::Cylindrical => [q[0], 1.0, q[0]],
        }
    }

    /// Physical length per unit coordinate along `axis` at `q` (arc factor).
    #[inline]
    pub fn arc_factor(self, axis: usize, q: [f64; 3]) -> f64 {
        match self {
            Metric::Cartesian => 1.0,
            Metric::Cylindrical => {
                if axis == 1 {
                    q[0]
                } else {
                    1.0
                }
            }
        }
    }

    /// Flux density whose coordinate-space divergence equals `volume_weight`:
    /// integrating it over a closed region boundary yields the metric volume.
    /// Cartesian uses F = (x, y, z)/3; cylindrical uses F = (r^2, r theta, r z)/4.
    #[inline]
    pub fn volume_flux(self, q: [f64; 3], nhat: [f64; 3]) -> f64 {
        match self {
            Metric::Cartesian => (q[0] * nhat[0] + q[1] * nhat[1] + q[2] * nhat[2]) / 3.0,
            Metric::Cylindrical => {
                (q[0] * q[0] * nhat[0] + q[0] * q[1] * nhat[1] + q[0] * q[2] * nhat[2]) / 4.0
            }
        }
    }
}
