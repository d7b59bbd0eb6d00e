//! Exact and approximate partition functions for the permaspin model: an
//! Ising variant whose spins are permutations of `{1..k}` and whose bond
//! energy measures how far one spin is from sorting into its neighbour.
//!
//! - [`perm`]: permutations, statistics, pattern-avoiding spin sets
//! - [`gf`]: statistic generating functions and the double Eulerian closed form
//! - [`energy`]: Hamiltonian on simple graphs and the exhaustive oracle
//! - [`transfer`]: ring transfer matrices, closed-form spectra, cubic analysis
//! - [`lowtemp`]: low-temperature configuration-class sums
//! - [`meanfield`]: the mean-field `k = 3` model
//! - [`montecarlo`]: Metropolis sampling on arbitrary graphs

pub mod energy;
pub mod error;
pub mod gf;
pub mod lowtemp;
pub mod meanfield;
pub mod montecarlo;
pub mod perm;
pub mod transfer;

pub use energy::{
    boltzmann_probabilities, brute_force_z, hamiltonian, phi_pair, phi_single, Configuration,
    Graph, Method, ModelParams, PartitionReport,
};
pub use error::{Error, Result};
pub use gf::{cddes_closed_form, stat_gf, IntPolynomial};
pub use perm::{avoiders, enumerate, PermaspinSet, Permutation, StatisticKind};
