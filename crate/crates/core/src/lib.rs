//! Laughter and speech-laugh analysis toolkit.
//!
//! The crate covers the full path from an annotated corpus of child speech to
//! a speaker-independent classification report:
//!
//! * [`corpus`]: annotation vocabulary, manifest files, audio slicing and a
//!   synthetic corpus generator.
//! * [`dsp`]: 39 frame-level acoustic descriptors plus their regression
//!   contours (117 contours in total).
//! * [`functionals`]: 51 statistics applied to every contour.
//! * [`featureset`]: the resulting 5,967-dimensional static feature vector.
//! * [`cfs`]: correlation-based feature subset selection.
//! * [`svm`]: linear SVM trained by SMO, composed one-vs-one.
//! * [`harness`]: leave-one-speaker-out evaluation with training-set balancing.
//! * [`stats`]: nonparametric descriptive statistics over the annotations.

pub mod cfs;
pub mod corpus;
pub mod dsp;
pub mod featureset;
pub mod functionals;
pub mod harness;
pub mod stats;
pub mod svm;

pub use corpus::{Corpus, LaughterLabel, SegmentRef, SignalSegment};
pub use dsp::{ContourMatrix, FrameConfig};
pub use featureset::{FeatureVector, NUM_FEATURES};
pub use functionals::FunctionalVector;
