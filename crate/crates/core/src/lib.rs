//! Device-free people counting from RSSI fluctuations.
//!
//! People crossing the path between a transmitter and a receiver disturb the
//! received signal strength of consecutive packets. This crate turns packet
//! traces into movement detections ([`detect`]), pairs detections from two
//! receivers of one zone, extracts per-crossing features ([`features`]) and
//! classifies group size with Fisher linear discriminant analysis ([`lda`]).
//! [`synth`] generates labeled traces for testing and training, and
//! [`pipeline`] wires the stages together.

pub mod detect;
pub mod exec;
pub mod features;
pub mod lda;
pub mod pipeline;
pub mod stats;
pub mod synth;
pub mod trace;
pub mod truth;

pub use detect::{DetectionEvent, DetectorConfig, Method, WindowStats};
pub use exec::Execution;
pub use features::EventFeatureVector;
pub use lda::LdaModel;
pub use trace::{PacketSample, Trace};
pub use truth::GroundTruth;
