//! Numerical laboratory for the Fourier dimension of measures on `[0, 1]^d`.
//!
//! * [`measure`]: symbolic measures closed under mixtures, affine images,
//!   convolutions and smooth windows.
//! * [`fourier`]: closed-form and factorized transforms, a Filon quadrature
//!   oracle, batch evaluation and Wiener averages.
//! * [`dimension`]: decay-exponent estimation, Riesz energies, lower-bound
//!   searches and stability experiments.
//! * [`constructions`]: digit-restricted sets, lacunary trigonometric
//!   densities, the middle-third Cantor measure.
//! * [`band`]: a finite model of the polar operator between measures and sets.
//! * [`experiments`]: the configuration-driven runner behind the `fdlab` binary.

pub mod band;
pub mod constructions;
pub mod dimension;
pub mod error;
pub mod experiments;
pub mod fourier;
pub mod measure;
pub mod numeric;
pub mod schedule;

pub use error::{Error, Result};
pub use fourier::{ft, ft_batch, ft_quadrature, ft_vec, oscillatory_integral, wiener_average, TransformSample};
pub use measure::{Measure, Window};
pub use schedule::FrequencySchedule;
