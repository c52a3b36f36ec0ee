//! Entropy-stable hybrid DGSEM / subcell finite-volume solver for the
//! resistive GLM-MHD equations on 1D interval and 2D curvilinear meshes.
//!
//! The solver blends a split-form discontinuous Galerkin spectral element
//! discretization with a native LGL subcell finite-volume method (first-order
//! or TVD-reconstructed) on an element-local basis, driven by a modal shock
//! indicator. Two-point fluxes are entropy conservative or entropy stable by
//! construction, including the non-conservative Powell and GLM terms.

pub mod dg;
pub mod error;
pub mod field;
pub mod fluxes;
pub mod fv;
pub mod mesh;
pub mod numerics;
pub mod physics;
pub mod rhs;
pub mod sampling;
