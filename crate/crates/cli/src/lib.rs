pub mod commands;
pub mod error;
pub mod report;
pub mod resolve;
pub mod text;
