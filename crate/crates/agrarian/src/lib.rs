//! Exact computer algebra for agrarian invariants of finitely presented groups.
//!
//! Everything here runs over exact rational arithmetic: the coefficient field
//! is ℚ(i), Laurent polynomials are sparse with arbitrary-precision
//! coefficients, and rational functions are compared by cross-multiplication.
//! On top of that sit twisted (Ore) polynomial rings with their Dieudonné
//! determinants, lattice polytopes with Minkowski arithmetic, Fox calculus on
//! group presentations, and the invariant layer: agrarian Betti numbers,
//! torsion, polytopes and norms, plus the fibration Betti-number formulas.

pub mod error;
pub mod scalar;
pub mod laurent;
pub mod ratfun;
pub mod matrix;
pub mod lp;
pub mod lattice;
pub mod polytope;
pub mod group;
pub mod skew;
pub mod complex;
pub mod norms;
pub mod tree;
pub mod fibration;

pub use error::{Error, Result};
pub use scalar::GaussianRational;
pub use laurent::{LaurentPoly, Monomial};
pub use ratfun::RatFun;
pub use matrix::Matrix;
pub use polytope::{IntegralPolytope, PolytopeElement};
pub use group::{AbelianizationMap, Character, GroupRingElement, Presentation, Representation, Word};
pub use complex::{BasedChainComplex, BettiProfile};
pub use norms::NormReport;
pub use tree::RootedTree;
