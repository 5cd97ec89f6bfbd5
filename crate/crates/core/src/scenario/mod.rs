//! End-to-end verification scenarios, their JSON reports, tensor
//! documents and the command-line front end.

mod cli;
mod document;
mod report;
mod runner;

pub use cli::cli_dispatch;
pub use document::{dump_tensor, load_tensor, TensorDocument, INDEX_ORDER};
pub use report::{
    to_canonical_json, Check, Expect, Params, ScenarioReport, Status, SuiteReport, SCHEMA_VERSION,
};
pub use runner::{identities_report, run_all, run_scenario, ScenarioInput, SCENARIOS};
