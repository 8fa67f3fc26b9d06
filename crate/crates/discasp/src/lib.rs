//! Command-line tools, file formats and the movie chat service built on
//! `discasp-core`.

pub mod check;
pub mod cli;
pub mod dialog;
pub mod gen;
pub mod json;
pub mod kb;
pub mod service;
pub mod store;
