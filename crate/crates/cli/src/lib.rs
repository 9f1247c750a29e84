//! File formats, multi-threaded search and the `netstrength` command line
//! on top of [`netstrength_core`].

pub mod commands;
pub mod formats;
pub mod parallel;
