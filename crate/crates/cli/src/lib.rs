pub mod bench;
pub mod error;
pub mod pipeline;
pub mod problem;

pub use error::{CliError, CliResult};
