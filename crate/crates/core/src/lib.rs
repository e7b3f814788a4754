pub mod ad41;
pub mod channel;
pub mod chi;
pub mod cli;
pub mod compute;
pub mod diamond;
pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod multicycle;
pub mod operators;
#[cfg(test)]
mod proptests;
pub mod recovery;
pub mod report;
pub mod spectator;
pub mod twirl;
pub mod verify;

pub use error::{Error, Result};
