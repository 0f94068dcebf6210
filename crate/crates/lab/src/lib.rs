//! File formats, parallel Monte Carlo and the command-line front end for
//! [`spacing_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod formats;
pub mod montecarlo;
