//! Simulation of pre- and post-selected quantum systems.
//!
//! * [`qcore`]: dense complex linear algebra for small systems.
//! * [`tsvf`]: ABL probabilities, elements of reality, weak values and a
//!   Born-rule Monte Carlo oracle.
//! * [`pointer`]: von Neumann pointer model across coupling strengths.
//! * [`worlds`]: counterfactual queries over recorded measurement histories.
//! * [`scenarios`]: the three-box setups, the spin raffle and the shutter toy.
//! * [`cli`]: the `tsvf-lab` command-line front end.

pub mod cli;
pub mod error;
pub mod pointer;
pub mod qcore;
pub mod scenarios;
pub mod tsvf;
pub mod worlds;

pub use error::{Error, Result};
