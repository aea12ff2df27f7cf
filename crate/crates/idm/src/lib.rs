//! Internal dictionary matching.
//!
//! Index a text `T` together with a dictionary whose patterns are fragments
//! of `T`, and answer `exists`, `report`, `report_distinct`, `count` and
//! approximate `count_distinct` queries on arbitrary fragments `T[i..j]`
//! in polylogarithmic time. A dynamic wrapper supports pattern insertions
//! and deletions with periodic epoch rebuilds.
//!
//! Positions are 1-based and inclusive throughout the public API.

pub mod error;
mod rmq;

pub mod count_distinct_approx;
pub mod count_queries;
pub mod dynamic_dictionary;
pub mod engine;
pub mod geometry2d;
pub mod internal_dictionary;
pub mod oracle;
pub mod recompression;
pub mod report_distinct;
pub mod text_core;

pub use engine::{EngineOptions, QueryEngine};
pub use error::{Error, Result};
pub use text_core::{Fragment, Run, Text, TextIndex};
