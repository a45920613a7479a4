pub mod calculus;
pub mod classify;
pub mod dimension;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod ratfun;
pub mod report;
pub mod settings;
pub mod synth;

pub use error::{Error, Result};
pub use settings::Settings;
