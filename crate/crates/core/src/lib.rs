pub mod analysis;
pub mod arith;
pub mod classifier;
pub mod eigenbasis;
pub mod error;
pub mod families;
pub mod field;
pub mod fixedlocus;
pub mod groebner;
pub mod poly;
pub mod table;
pub mod verify;
