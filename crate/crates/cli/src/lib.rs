pub mod args;
pub mod commands;
pub mod corpus;
pub mod error;
pub mod report;
pub mod suites;
