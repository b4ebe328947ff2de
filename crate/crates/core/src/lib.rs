#![allow(clippy::needless_range_loop)]

pub mod bo;
pub mod characters;
pub mod cli;
pub mod covercount;
pub mod error;
pub mod exactq;
pub mod fitting;
pub mod linsolve;
pub mod partitions;
pub mod phipoly;
pub mod quasimod;
pub mod selftest;
