//! Numerical toolkit for volume-constrained perimeter min-max on flat tori.
//!
//! Sets are represented as indicator fields on a periodic grid ([`field::IndicatorField`]),
//! their boundaries as weighted atom clouds with unit normals ([`boundary::BoundaryVarifold`]).
//! On top of that sit:
//!
//! * the metric zoo: the flat (`L¹`) distance, the bounded-Lipschitz varifold
//!   distance evaluated exactly as a linear program, and their sum ([`metrics`]);
//! * penalized perimeter energies with first variation and shape gradients ([`energy`]);
//! * volume-preserving path constructions between sets: contraction to a point,
//!   collar carving, and the spliced fixed-volume connection ([`paths`], [`carve`]);
//! * a climbing string method over fixed-endpoint paths with penalty continuation
//!   ([`minmax`]);
//! * Jacobi-form stability tests and the quantitative stability exponent fit
//!   ([`stability`]).

pub mod boundary;
pub mod curvature;
pub mod error;
pub mod field;
pub mod grid;
pub mod sdf;

pub use error::{Error, Result};
pub use field::IndicatorField;
pub use grid::TorusGrid;
