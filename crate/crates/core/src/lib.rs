//! Ramsey number upper bounds, two-colourings of complete graphs, and exact
//! small-case search.

pub mod bounds;
pub mod coloring;
pub mod config;
pub mod error;
pub mod field;
pub mod hp;
pub mod k2c;
pub mod report;
pub mod search;

pub use coloring::{BalancedView, Coloring, PatternGraph};
pub use config::Config;
pub use error::{Error, Result};
pub use hp::HpFloat;
pub use report::{CheckReport, Comparison, Verdict};
pub use k2c::{emit_k2c, parse_k2c};
pub use search::{paley, ramsey_number, search, verify_avoidance, SearchMode, SearchOutcome, SearchStatus};
