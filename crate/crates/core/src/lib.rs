//! Rotation systems, current graphs and the surgeries that turn derived
//! embeddings into minimum-genus embeddings of complete graphs.

pub mod current;
pub mod derived;
pub mod families;
pub mod parse;
pub mod pipelines;
pub mod surface;
