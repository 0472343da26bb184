//! Accelerated Unruh-DeWitt detectors acting on twin-Fock atomic states.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`, which is what the command-line
//! front end and the test suite use.
//!
//! ```
//! use twinfock::{detector, twin_fock, metrology, DetectorParams, QuadratureConfig};
//!
//! let params = DetectorParams::new(1.0, 0.4, 0.5, 2.0, 1.0).unwrap();
//! let amps = detector::transition_amplitudes(&params, &QuadratureConfig::default()).unwrap();
//! let dist = twin_fock::dicke_distribution(100, &amps).unwrap();
//! let xi = twin_fock::squeezing_parameter(&dist).unwrap();
//! let sens = metrology::accelerated_sensitivity(&dist).unwrap();
//! assert!(xi > 0.0 && sens.series > 0.0);
//! ```

pub mod detector;
pub mod error;
pub mod metrology;
pub mod numerics;
pub mod oracle;
pub mod scalar;
pub mod twin_fock;
pub mod two_atom;

pub use error::{Error, Result};
pub use num_complex::{self, Complex};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use scalar::Real;

pub type DetectorParams = detector::DetectorParams<f64>;
pub type TransitionAmplitudes = detector::TransitionAmplitudes<f64>;
pub type TrajectoryPoint = detector::TrajectoryPoint<f64>;
pub type QuadratureConfig = numerics::QuadratureConfig<f64>;
pub type MomentumCutoff = numerics::MomentumCutoff<f64>;
pub type Matrix4c = numerics::Matrix4c<f64>;
pub type LogWeight = numerics::LogWeight<f64>;
pub type BipartiteInit = two_atom::BipartiteInit<f64>;
pub type DensityMatrix4 = two_atom::DensityMatrix4<f64>;
pub type DickeDistribution = twin_fock::DickeDistribution<f64>;
pub type JzMoments = twin_fock::JzMoments<f64>;
pub type SpinMoments = metrology::SpinMoments<f64>;
pub type InterferometerInput = metrology::InterferometerInput<f64>;
pub type PhaseSensitivity = metrology::PhaseSensitivity<f64>;

pub use detector::{Regime, Transition};
pub use two_atom::FieldTreatment;
