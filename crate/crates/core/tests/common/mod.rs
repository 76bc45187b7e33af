//! Oracles and fixtures shared by the integration tests and the acceptance
//! run. Each test target uses a different subset.
#![allow(dead_code)]

pub mod cfs;
pub mod dsp;
pub mod functionals;
pub mod pipeline;
pub mod stats;
pub mod svm;
