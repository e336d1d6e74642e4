pub mod cli;
pub mod compose;
pub mod design;
pub mod error;
pub mod format;
pub mod harmonic;
pub mod planner;
pub mod regular;
pub mod sidon;
