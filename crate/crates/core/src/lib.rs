pub mod config;
pub mod error;
pub mod linalg;
pub mod symbols;
pub mod mehler;
pub mod sharp;
pub mod norms;
pub mod oracles;
pub mod cli;

