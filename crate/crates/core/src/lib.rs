//! Exact statistical mechanics of log-repelling particles in the ring of
//! integers `o` of a non-archimedean local field with residue field size `q`.
//!
//! Every canonical partition function is a rational function of
//! `u = q^(-beta)` with rational coefficients; grand canonical quantities
//! are truncated power series in the fugacity `t` whose coefficients are
//! such rational functions. The [`mcoracle`] module provides an
//! independent importance-sampling check of the exact results.

pub mod canonical;
pub mod combinat;
pub mod cylinderprob;
pub mod error;
pub mod exactnum;
pub mod grandcanonical;
pub mod mcoracle;
pub mod multicomponent;
pub mod starring;
pub mod ultrametric;

pub use canonical::{CanonicalTable, OccupancyVector};
pub use cylinderprob::{CylinderEvent, CylinderGF, GcProbability};
pub use error::{Error, Result};
pub use exactnum::{BigInt, BigRational, RationalFunction, UPoly};
pub use grandcanonical::{GrandCanonicalSeries, OccupancyPmf};
pub use mcoracle::{Estimate, McConfig, PAdicSample};
pub use multicomponent::{ChargeProfile, MultiSeries, SpeciesCounts};
pub use starring::StarSeries;
pub use ultrametric::{Ball, BallDistance, BallFamily};
