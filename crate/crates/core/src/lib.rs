//! Core of the enhanced BIM log toolkit.
//!
//! The crate is `no_std` (it needs `alloc`) and holds everything that is
//! pure computation: the geometric kernel, the text codec for log rows, the
//! in-memory building model, the replay engine, the reproducibility metrics
//! and the authoring-session simulator. File and stream handling live in the
//! `bimlog` companion crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod math;

pub mod codec;
pub mod diff;
pub mod geom;
pub mod model;
pub mod params;
pub mod replay;
pub mod sim;
pub mod units;
