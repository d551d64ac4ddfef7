//! Exact continued-fraction expansions of the Thue–Morse partial products
//! `f_ℓ(z) = ∏_{h=0}^{ℓ} (1 − z^{−2^h})`, the ternary products
//! `∏ (1 + u z^{−3^h} + v z^{−2·3^h})`, and rational-approximation
//! experiments on their values at integer points.

pub mod analysis;
pub mod arith;
pub mod contfrac;
pub mod polynomial;
pub mod products3;
pub mod thuemorse;

pub use arith::{nu2, ExactRational, Valuation};
pub use contfrac::{ConvergentTable, GcfTerm, GeneralizedCf, RegularCf};
pub use polynomial::{Limits, Poly, PolyCf, RationalFunction};
