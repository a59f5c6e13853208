//! Complex evidence theory.
//!
//! Complex basic belief assignments ([`Cbba`]) over labeled frames, their
//! transformations (pignistic projection, fractal redistribution,
//! exponential negation, combination, joint frames), a family of belief
//! entropies centred on the fractal-based FCB entropy, and two applications:
//! an entropy-change classifier and a threshold-driven fusion engine.
//!
//! The math is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! cover the common case.
//!
//! ```
//! use cet_core::{entropy, transform, Cbba64, Frame};
//!
//! let x = Frame::new(["x1", "x2"]).unwrap();
//! let m = Cbba64::from_labeled(x, &[(&["x1"], 0.1, -0.1), (&["x1", "x2"], 0.9, 0.1)]).unwrap();
//! let bet = transform::cpbt(&m);
//! assert!((bet.get(0).re - 0.55).abs() < 1e-12);
//! assert!(entropy::fcb(&m).unwrap() > 0.0);
//! ```

pub mod entropy;
pub mod error;
pub mod frame;
pub mod io;
pub mod mass;
pub mod pipeline;
pub mod scalar;
pub mod transform;

pub use entropy::{EntropyValue, HModel, Method};
pub use error::{CetError, Result};
pub use frame::{FocalSet, Frame};
pub use mass::{Bba, Cbba, ComplexMass, RandomProfile, Violation};
pub use scalar::Real;
pub use transform::{Fcbba, NegationOptions, Pignistic};

pub type Cbba64 = Cbba<f64>;
pub type Cbba32 = Cbba<f32>;
pub type Bba64 = Bba<f64>;
pub type Bba32 = Bba<f32>;
pub type Fcbba64 = Fcbba<f64>;
pub type Fcbba32 = Fcbba<f32>;
pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
