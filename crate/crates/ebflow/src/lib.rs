//! Sharp-interface embedded boundary method for two-phase incompressible flow.
//!
//! The crate combines four layers:
//!
//! * [`mesh`] / [`geometry`] — structured coordinate boxes (Cartesian 2D/3D,
//!   cylindrical r-theta-z) with cut-cell moments computed by divergence-theorem
//!   boundary integration;
//! * [`front`] — an explicit marker-polyline interface tracker in 2D plus
//!   analytic static surfaces for 3D elliptic tests;
//! * [`elliptic`] — a finite-volume discretization of the variable-coefficient
//!   elliptic interface problem `div(grad p / rho) = f` with prescribed jumps
//!   `[p] = J1` and `[(1/rho) dp/dn] = J2` across the interface;
//! * [`ns`] — projection-method time integration of the two-phase
//!   incompressible Navier-Stokes equations, with the pressure Poisson step
//!   solved as an elliptic interface problem whose jump carries the surface
//!   tension.
//!
//! [`harness`] wires these into reproducible scenario drivers (convergence
//! studies, droplet oscillation, static droplet balance); the `ebflow` binary
//! and the runnable examples are thin shells over it.

pub mod front;
pub mod geometry;
pub mod mesh;
