pub mod rulekit;
pub mod segform;
pub mod server;
pub mod stems;
pub mod suffixes;
pub mod analyzer;
pub mod cli;
