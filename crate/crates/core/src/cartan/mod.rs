//! A small Cartan-model computer algebra on explicit charts.

pub mod chart;
pub mod chern;
pub mod expr;
pub mod form;
pub mod integrate;
pub mod numeric;
pub mod par;
pub mod supermatrix;

pub use chart::{Chart, Coord, Domain};
pub use expr::{Atom, Expr};
pub use form::Form;
pub use par::{bump_independence, par_equals_one_certificate, par_form, ParCertificate, ParMode, ParResult};
pub use chern::{chern_transgression, lambda_factor, ChernFamily, CliffordSymbolData, FixedSetModel, LambdaFactor};
