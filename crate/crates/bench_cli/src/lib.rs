//! Command-line front end: configuration, reproduction recipes, CSV/SVG/JSON
//! output and reference-value checks.

pub mod cli;
pub mod config;
mod error;
pub mod experiments;
pub mod golden;
pub mod output;
pub mod plot;
pub mod recipes;

pub use config::{ExperimentConfig, Initial};
pub use error::CliError;
pub use recipes::{run_recipe, write_report, RecipeContext, TableReport, RECIPES};
