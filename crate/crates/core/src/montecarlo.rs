//! Single-site Metropolis sampling of permaspin configurations on any graph.
//!
//! Proposals draw a spin uniformly from the set; sites are visited in order,
//! one sweep being `n` updates. The generator is ChaCha8 seeded from a
//! 64-bit seed, so a fixed seed gives the same trajectory on every run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::energy::{Graph, ModelParams, PhiTable};
use crate::error::{Error, Result};
use crate::perm::PermaspinSet;

/// Sweeps between full energy recomputations.
pub const RECOMPUTE_EVERY: u64 = 64;
/// Number of batches for batch-means error bars.
pub const BATCHES: usize = 32;

/// Current spins (as indices into the set), cached energy and generator.
#[derive(Debug, Clone)]
pub struct ChainState {
    spins: Vec<usize>,
    energy: f64,
    rng_seed: u64,
    sweep_count: u64,
    rng: ChaCha8Rng,
}

impl ChainState {
    pub fn spins(&self) -> &[usize] {
        &self.spins
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn sweep_count(&self) -> u64 {
        self.sweep_count
    }

    /// Mixed-radix index of the configuration, vertex 0 most significant,
    /// matching the enumeration order of the exact oracle.
    pub fn config_index(&self, radix: usize) -> u64 {
        self.spins
            .iter()
            .fold(0u64, |acc, &s| acc * radix as u64 + s as u64)
    }
}

/// Sampler for one graph, spin set and parameter point.
///
/// `β = 0` is allowed here (every proposal is accepted).
#[derive(Debug, Clone)]
pub struct Metropolis {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    table: PhiTable,
    params: ModelParams,
}

impl Metropolis {
    pub fn new(g: &Graph, set: &PermaspinSet, p: &ModelParams) -> Result<Self> {
        if set.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "sampling needs at least two spins, got {}",
                set.len()
            )));
        }
        if !(p.beta >= 0.0 && p.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be nonnegative and finite, got {}",
                p.beta
            )));
        }
        if !p.j.is_finite() || !p.h.is_finite() {
            return Err(Error::InvalidParameter("J and H must be finite".into()));
        }
        Ok(Metropolis {
            adjacency: g.adjacency(),
            edges: g.edges().to_vec(),
            table: PhiTable::new(set, p.stat),
            params: *p,
        })
    }

    pub fn sites(&self) -> usize {
        self.adjacency.len()
    }

    pub fn set_size(&self) -> usize {
        self.table.size()
    }

    /// Chain started from spins drawn uniformly with the seeded generator.
    pub fn init(&self, seed: u64) -> ChainState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = self.set_size();
        let spins: Vec<usize> = (0..self.sites()).map(|_| rng.gen_range(0..m)).collect();
        self.init_from(spins, seed, rng)
    }

    /// Chain started from the given spins.
    pub fn init_with(&self, spins: Vec<usize>, seed: u64) -> Result<ChainState> {
        if spins.len() != self.sites() {
            return Err(Error::SizeMismatch {
                config: spins.len(),
                graph: self.sites(),
            });
        }
        if spins.iter().any(|&s| s >= self.set_size()) {
            return Err(Error::InvalidParameter("spin index out of range".into()));
        }
        Ok(self.init_from(spins, seed, ChaCha8Rng::seed_from_u64(seed)))
    }

    fn init_from(&self, spins: Vec<usize>, seed: u64, rng: ChaCha8Rng) -> ChainState {
        let energy = self.energy(&spins);
        ChainState {
            spins,
            energy,
            rng_seed: seed,
            sweep_count: 0,
            rng,
        }
    }

    /// Full Hamiltonian of a configuration.
    pub fn energy(&self, spins: &[usize]) -> f64 {
        let bond: f64 = self.edges.iter().map(|&(u, v)| self.table.pair(spins[u], spins[v])).sum();
        let field: f64 = spins.iter().map(|&s| self.table.single(s)).sum();
        -self.params.j * bond - self.params.h * field
    }

    /// Energy change from setting `site` to `proposal`, using only the
    /// incident edges and the site's field term.
    pub fn delta(&self, spins: &[usize], site: usize, proposal: usize) -> f64 {
        let old = spins[site];
        if old == proposal {
            return 0.0;
        }
        let bond: f64 = self.adjacency[site]
            .iter()
            .map(|&v| self.table.pair(proposal, spins[v]) - self.table.pair(old, spins[v]))
            .sum();
        let field = self.table.single(proposal) - self.table.single(old);
        -self.params.j * bond - self.params.h * field
    }

    /// One update at `site`; returns whether the proposal was accepted.
    pub fn update(&self, state: &mut ChainState, site: usize) -> bool {
        let proposal = state.rng.gen_range(0..self.set_size());
        let de = self.delta(&state.spins, site, proposal);
        let accept = de <= 0.0 || state.rng.gen::<f64>() < (-self.params.beta * de).exp();
        if accept {
            state.spins[site] = proposal;
            state.energy += de;
        }
        accept
    }

    /// `n` updates, one per site in order; returns the number accepted.
    pub fn sweep(&self, state: &mut ChainState) -> usize {
        self.sweep_observed(state, |_| {})
    }

    /// As [`Metropolis::sweep`], calling `observe` after every single-site
    /// update. Each update leaves the Boltzmann distribution invariant, so
    /// every intermediate state is a valid sample.
    pub fn sweep_observed(&self, state: &mut ChainState, mut observe: impl FnMut(&ChainState)) -> usize {
        let mut accepted = 0;
        for i in 0..self.sites() {
            accepted += usize::from(self.update(state, i));
            observe(state);
        }
        state.sweep_count += 1;
        if state.sweep_count % RECOMPUTE_EVERY == 0 {
            state.energy = self.energy(&state.spins);
        }
        accepted
    }

    /// Mean of `φ(π_i, id)` over sites.
    pub fn order_parameter(&self, spins: &[usize]) -> f64 {
        spins.iter().map(|&s| self.table.single(s)).sum::<f64>() / spins.len() as f64
    }
}

/// Advances a chain by one sweep.
pub fn metropolis_sweep(
    mut state: ChainState,
    g: &Graph,
    set: &PermaspinSet,
    p: &ModelParams,
) -> Result<ChainState> {
    Metropolis::new(g, set, p)?.sweep(&mut state);
    Ok(state)
}

/// Energy and order parameter after one sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub sweep: u64,
    pub energy: f64,
    pub order_parameter: f64,
}

/// Estimate with its batch-means standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

/// Mean of `xs` with the error bar from [`BATCHES`] consecutive batch means.
pub fn batch_means(xs: &[f64]) -> Estimate {
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let batches = BATCHES.min(n);
    if batches < 2 {
        return Estimate {
            mean,
            stderr: f64::NAN,
        };
    }
    let size = n / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| xs[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let centre = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - centre).powi(2)).sum::<f64>() / (batches - 1) as f64;
    Estimate {
        mean,
        stderr: (var / batches as f64).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub seed: u64,
    pub sweeps: u64,
    pub burn_in: u64,
    pub energy_per_site: Estimate,
    pub order_parameter: Estimate,
    pub acceptance_rate: f64,
}

fn check_sweeps(sweeps: u64, burn_in: u64) -> Result<()> {
    if sweeps <= burn_in {
        return Err(Error::InvalidParameter(format!(
            "sweeps ({sweeps}) must exceed burn-in ({burn_in})"
        )));
    }
    Ok(())
}

/// Runs `sweeps` sweeps from a random start and calls `record` after each
/// sweep past `burn_in`. Returns the overall acceptance rate.
pub fn run_chain(
    sampler: &Metropolis,
    sweeps: u64,
    burn_in: u64,
    seed: u64,
    mut record: impl FnMut(&ChainState),
) -> Result<f64> {
    check_sweeps(sweeps, burn_in)?;
    let mut state = sampler.init(seed);
    let mut accepted = 0u64;
    for _ in 0..sweeps {
        accepted += sampler.sweep(&mut state) as u64;
        if state.sweep_count > burn_in {
            record(&state);
        }
    }
    Ok(accepted as f64 / (sweeps as f64 * sampler.sites() as f64))
}

/// Per-sweep energy and order parameter after burn-in.
pub fn time_series(
    g: &Graph,
    set: &PermaspinSet,
    p: &ModelParams,
    sweeps: u64,
    burn_in: u64,
    seed: u64,
) -> Result<Vec<Sample>> {
    let sampler = Metropolis::new(g, set, p)?;
    let mut out = Vec::with_capacity((sweeps - burn_in.min(sweeps)) as usize);
    run_chain(&sampler, sweeps, burn_in, seed, |s| {
        out.push(Sample {
            sweep: s.sweep_count,
            energy: s.energy,
            order_parameter: sampler.order_parameter(&s.spins),
        })
    })?;
    Ok(out)
}

/// Mean energy per site and mean order parameter with batch-means errors.
pub fn sample_observables(
    g: &Graph,
    set: &PermaspinSet,
    p: &ModelParams,
    sweeps: u64,
    burn_in: u64,
    seed: u64,
) -> Result<McReport> {
    let sampler = Metropolis::new(g, set, p)?;
    let n = sampler.sites() as f64;
    let mut energies = Vec::new();
    let mut orders = Vec::new();
    let acceptance_rate = run_chain(&sampler, sweeps, burn_in, seed, |s| {
        energies.push(s.energy / n);
        orders.push(sampler.order_parameter(&s.spins));
    })?;
    Ok(McReport {
        seed,
        sweeps,
        burn_in,
        energy_per_site: batch_means(&energies),
        order_parameter: batch_means(&orders),
        acceptance_rate,
    })
}

/// Visit counts of every configuration index after burn-in, one count per
/// single-site update. The state space must have at most `cap` configurations.
pub fn config_histogram(
    g: &Graph,
    set: &PermaspinSet,
    p: &ModelParams,
    sweeps: u64,
    burn_in: u64,
    seed: u64,
    cap: u64,
) -> Result<Vec<u64>> {
    let sampler = Metropolis::new(g, set, p)?;
    let radix = sampler.set_size();
    let requested = (radix as f64).powi(sampler.sites() as i32);
    if requested > cap as f64 {
        return Err(Error::CapExceeded { requested, cap });
    }
    check_sweeps(sweeps, burn_in)?;
    let mut counts = vec![0u64; requested as usize];
    let mut state = sampler.init(seed);
    for _ in 0..burn_in {
        sampler.sweep(&mut state);
    }
    for _ in burn_in..sweeps {
        sampler.sweep_observed(&mut state, |s| counts[s.config_index(radix) as usize] += 1);
    }
    Ok(counts)
}

/// `½ Σ |p_i − q_i|` between normalised counts and a probability vector.
pub fn total_variation(counts: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    0.5 * counts
        .iter()
        .zip(probs)
        .map(|(&c, &q)| (c as f64 / total as f64 - q).abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::enumerate;

    fn ring3() -> (Graph, PermaspinSet) {
        (Graph::ring(3).unwrap(), enumerate(3).unwrap())
    }

    #[test]
    fn incremental_delta_matches_recompute() {
        let g = Graph::complete(5).unwrap();
        let set = enumerate(3).unwrap();
        let p = ModelParams::destat(0.9, 1.3, -0.4).unwrap();
        let s = Metropolis::new(&g, &set, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut spins: Vec<usize> = (0..5).map(|_| rng.gen_range(0..6)).collect();
        for _ in 0..500 {
            let site = rng.gen_range(0..5);
            let prop = rng.gen_range(0..6);
            let before = s.energy(&spins);
            let de = s.delta(&spins, site, prop);
            spins[site] = prop;
            assert!((s.energy(&spins) - before - de).abs() < 1e-10);
        }
    }

    #[test]
    fn same_spin_proposal_has_zero_delta() {
        let (g, set) = ring3();
        let p = ModelParams::destat(1.0, 1.0, 0.5).unwrap();
        let s = Metropolis::new(&g, &set, &p).unwrap();
        assert_eq!(s.delta(&[0, 3, 5], 1, 3), 0.0);
    }

    #[test]
    fn zero_beta_accepts_everything() {
        let (g, set) = ring3();
        let mut p = ModelParams::destat(1.0, 1.0, 0.5).unwrap();
        p.beta = 0.0;
        let s = Metropolis::new(&g, &set, &p).unwrap();
        let mut st = s.init(11);
        for _ in 0..200 {
            assert_eq!(s.sweep(&mut st), 3);
        }
    }

    #[test]
    fn cached_energy_tracks_hamiltonian() {
        let g = Graph::ring(7).unwrap();
        let set = enumerate(4).unwrap();
        let p = ModelParams::destat(0.6, 1.0, 0.3).unwrap();
        let s = Metropolis::new(&g, &set, &p).unwrap();
        let mut st = s.init(5);
        for _ in 0..(RECOMPUTE_EVERY * 3 + 5) {
            s.sweep(&mut st);
            assert!((st.energy() - s.energy(st.spins())).abs() < 1e-9);
        }
        assert_eq!(st.sweep_count(), RECOMPUTE_EVERY * 3 + 5);
        assert_eq!(st.rng_seed(), 5);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let (g, set) = ring3();
        let p = ModelParams::destat(1.0, 1.0, 0.0).unwrap();
        let a = time_series(&g, &set, &p, 300, 10, 42).unwrap();
        let b = time_series(&g, &set, &p, 300, 10, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 290);
        assert_eq!(a[0].sweep, 11);
        let c = time_series(&g, &set, &p, 300, 10, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_input() {
        let (g, set) = ring3();
        let p = ModelParams::destat(1.0, 1.0, 0.0).unwrap();
        assert!(sample_observables(&g, &set, &p, 10, 10, 1).is_err());
        let one = PermaspinSet::explicit(3, vec!["123".parse().unwrap()]).unwrap();
        assert!(Metropolis::new(&g, &one, &p).is_err());
    }

    #[test]
    fn batch_means_of_constant() {
        let e = batch_means(&[2.0; 100]);
        assert_eq!(e.mean, 2.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn config_index_order() {
        let (g, set) = ring3();
        let p = ModelParams::destat(1.0, 1.0, 0.0).unwrap();
        let s = Metropolis::new(&g, &set, &p).unwrap();
        let st = s.init_with(vec![1, 0, 5], 0).unwrap();
        assert_eq!(st.config_index(6), 36 + 5);
    }
}
