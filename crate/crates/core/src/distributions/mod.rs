//! Invariant generalized functions on tori and finite cyclic groups.

pub mod density;
pub mod fourier;
pub mod germ;
pub mod group;
pub mod json;
pub mod pairing;
pub mod series;
pub mod smooth;
pub mod trigpoly;

pub use density::{convolve, deconvolve_interval, Comb, GeneralizedDensity, Piece};
pub use fourier::{FourierDistribution, Part};
pub use germ::{compare_germs, glue, restrict_germ, Germ, GermBody, GermComparison, GlueReport, Taylor, DEFAULT_ORDER, DEFAULT_WINDOW};
pub use group::{GroupDescriptor, GroupElement, Weight};
pub use pairing::{pair, pair_density, PairValue, TestFunction};
pub use series::Series;
pub use smooth::SmoothFactor;
pub use trigpoly::TrigPolynomial;
