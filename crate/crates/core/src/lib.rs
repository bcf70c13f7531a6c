pub mod curvedb;
pub mod ecmodel;
pub mod freypipe;
pub mod localobs;
pub mod nt;
pub mod qrsolver;
pub mod symplectic;
