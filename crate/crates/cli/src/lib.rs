//! Scenario runner, survey, search and selftest for `ivhs-core`.

pub mod lab;
pub mod scenario;
pub mod util;
pub mod run;
pub mod search;
pub mod selftest;
pub mod survey;
