pub mod affine;
pub mod cli;
pub mod error;
pub mod matching;
pub mod medial;
pub mod poset;
pub mod report;
pub mod verify;
