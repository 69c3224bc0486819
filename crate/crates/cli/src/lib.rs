//! Front end for the cell formation solver: instance files, result records,
//! matrix rendering and the `cfp` command.

pub mod commands;
pub mod instance;
pub mod record;
pub mod render;

pub use commands::{run, CommandOutput};
pub use instance::{parse_instance, InstanceFile, ParseError};
pub use record::ResultRecord;
pub use render::render_solution;

/// Bundled 5x7 instance file.
pub const SAMPLE_5X7: &str = include_str!("../data/sample_5x7.txt");
/// Bundled 8x12 instance file.
pub const SAMPLE_8X12: &str = include_str!("../data/sample_8x12.txt");
