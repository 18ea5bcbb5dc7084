//! Sensing coverage and dynamic ranging rate of mobile ISAC networks in
//! which static Poisson base stations are assisted by randomly moving
//! sensing vehicles (DRVs).
//!
//! The closed forms live in [`coverage`] and [`drr`]; [`montecarlo`]
//! checks them against a seeded simulation built from [`ppp`] and
//! [`mobility`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod coverage;
pub mod drr;
pub mod error;
pub mod harness;
pub mod mobility;
pub mod model;
pub mod montecarlo;
pub mod ppp;
pub mod shapes;
pub mod units;

pub use error::{Error, Result};
pub use model::{derive_params, power_ratio_w, DerivedParams, NetworkParams, RadioNodeParams};
pub use shapes::{BoundaryPolyline, Circle, Ellipse, Point2, SensingShape};
