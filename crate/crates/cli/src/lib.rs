//! Workbench shell around `reqlint-core`: a JSON-lines document store, the
//! project/labeling service, its HTTP API and the command-line interface.

pub mod api;
pub mod commands;
pub mod service;
pub mod store;
