//! Expression frontend for the transseries kernel: parser, elaboration,
//! and rendering. The `transs` binary wires these into a CLI.

pub mod elaborate;
pub mod parser;
pub mod render;

pub use elaborate::{collect_ratios, elaborate, Context};
pub use parser::{parse, Expr, ParseError};
pub use render::{render_monomial, render_series, render_with_bound, series_json};
