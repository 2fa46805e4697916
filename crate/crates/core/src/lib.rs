pub mod syntax;
pub mod models;
pub mod prover;
pub mod nd;
pub mod corpus;
