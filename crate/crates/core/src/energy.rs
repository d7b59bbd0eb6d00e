//! Interaction energy, the Hamiltonian on simple graphs, and the exhaustive
//! enumeration oracle.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{PermaspinSet, Permutation, StatisticKind};

/// Default upper bound on `|P|^n` for [`brute_force_z`].
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;
/// Upper bound on `|P|^n` when the full probability vector is materialised.
pub const PROBABILITY_CAP: u64 = 1_000_000;

const CHUNK: u64 = 1 << 15;

/// Inverse temperature, coupling, field and disorder statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub beta: f64,
    pub j: f64,
    pub h: f64,
    pub stat: StatisticKind,
}

impl ModelParams {
    pub fn new(beta: f64, j: f64, h: f64, stat: StatisticKind) -> Result<Self> {
        let p = ModelParams { beta, j, h, stat };
        p.validate()?;
        Ok(p)
    }

    /// Destat parameters, the model's default statistic.
    pub fn destat(beta: f64, j: f64, h: f64) -> Result<Self> {
        Self::new(beta, j, h, StatisticKind::Destat)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive and finite, got {}",
                self.beta
            )));
        }
        if !self.j.is_finite() || !self.h.is_finite() {
            return Err(Error::InvalidParameter("J and H must be finite".into()));
        }
        Ok(())
    }
}

/// `φ(α, β) = 1 − (2/s_max)·stat(α⁻¹β)`.
pub fn phi_pair(alpha: &Permutation, beta: &Permutation, stat: StatisticKind) -> Result<f64> {
    let tau = alpha.relative(beta)?;
    let s_max = stat.s_max(alpha.len());
    if s_max == 0 {
        // S_1: every pair is aligned.
        return Ok(1.0);
    }
    Ok(1.0 - 2.0 * stat.eval(&tau) as f64 / s_max as f64)
}

/// `φ(π) = φ(id, π)`: the field treated as a spin fixed at the identity.
pub fn phi_single(pi: &Permutation, stat: StatisticKind) -> f64 {
    phi_pair(&Permutation::identity(pi.len()), pi, stat).expect("equal lengths")
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Validates simplicity; edges are 0-based and stored with `u < v`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
            out.push(e);
        }
        Ok(Graph { n, edges: out })
    }

    /// Closed path `v_1 … v_n v_1`; needs `n ≥ 3` to be simple.
    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("a simple ring needs n >= 3, got {n}")));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("empty path".into()));
        }
        Graph::new(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("empty complete graph".into()));
        }
        Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    /// Parses a 1-based `u v` edge list. Blank lines and `#` comments are
    /// skipped. The vertex count is `n` when given, else the largest index.
    pub fn from_edge_list(text: &str, n: Option<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_vertex = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::InvalidGraph(format!("line {}: expected `u v`", lineno + 1));
            if parts.len() != 2 {
                return Err(bad());
            }
            let u: usize = parts[0].parse().map_err(|_| bad())?;
            let v: usize = parts[1].parse().map_err(|_| bad())?;
            if u == 0 || v == 0 {
                return Err(Error::InvalidGraph(format!(
                    "line {}: vertices are 1-based",
                    lineno + 1
                )));
            }
            max_vertex = max_vertex.max(u).max(v);
            edges.push((u - 1, v - 1));
        }
        let n = n.unwrap_or(max_vertex);
        Graph::new(n, edges)
    }

    /// Inverse of [`Graph::from_edge_list`].
    pub fn to_edge_list(&self) -> String {
        self.edges
            .iter()
            .map(|(u, v)| format!("{} {}\n", u + 1, v + 1))
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// The same graph with vertex `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }
}

/// One spin per vertex, each drawn from a [`PermaspinSet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    spins: Vec<Permutation>,
}

impl Configuration {
    pub fn new(spins: Vec<Permutation>, set: &PermaspinSet) -> Result<Self> {
        if let Some(bad) = spins.iter().find(|s| !set.contains(s)) {
            return Err(Error::SpinNotInSet(bad.to_string()));
        }
        Ok(Configuration { spins })
    }

    /// Spins taken by index into `set`.
    pub fn from_indices(indices: &[usize], set: &PermaspinSet) -> Self {
        Configuration {
            spins: indices.iter().map(|&i| set.members()[i].clone()).collect(),
        }
    }

    pub fn spins(&self) -> &[Permutation] {
        &self.spins
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }
}

/// `H(π⃗) = −J Σ_edges φ(π_i, π_j) − H Σ_vertices φ(π_i)`.
pub fn hamiltonian(g: &Graph, c: &Configuration, p: &ModelParams) -> Result<f64> {
    if c.len() != g.vertex_count() {
        return Err(Error::SizeMismatch {
            config: c.len(),
            graph: g.vertex_count(),
        });
    }
    let s = c.spins();
    let mut bond = 0.0;
    for &(u, v) in g.edges() {
        bond += phi_pair(&s[u], &s[v], p.stat)?;
    }
    let field: f64 = s.iter().map(|x| phi_single(x, p.stat)).sum();
    Ok(-p.j * bond - p.h * field)
}

/// `φ` values for every ordered pair of members of a spin set.
#[derive(Debug, Clone)]
pub struct PhiTable {
    size: usize,
    pair: Vec<f64>,
    single: Vec<f64>,
}

impl PhiTable {
    pub fn new(set: &PermaspinSet, stat: StatisticKind) -> Self {
        let m = set.members();
        let size = m.len();
        let mut pair = Vec::with_capacity(size * size);
        for a in m {
            for b in m {
                pair.push(phi_pair(a, b, stat).expect("members share length"));
            }
        }
        let single = m.iter().map(|x| phi_single(x, stat)).collect();
        PhiTable { size, pair, single }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pair(&self, a: usize, b: usize) -> f64 {
        self.pair[a * self.size + b]
    }

    pub fn single(&self, a: usize) -> f64 {
        self.single[a]
    }
}

/// How a partition function was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Trace,
    ClosedForm,
    BruteForce,
    MeanField,
    LowTemp,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Trace => "trace",
            Method::ClosedForm => "closed-form",
            Method::BruteForce => "brute-force",
            Method::MeanField => "mean-field",
            Method::LowTemp => "low-temp",
        })
    }
}

/// `Z`, `ln Z` and the finite-size free-energy density `−ln Z/(βn)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionReport {
    pub z: f64,
    pub ln_z: f64,
    pub free_energy_density: f64,
    pub sites: usize,
    pub method: Method,
}

impl PartitionReport {
    pub fn from_ln_z(ln_z: f64, sites: usize, beta: f64, method: Method) -> Self {
        PartitionReport {
            z: ln_z.exp(),
            ln_z,
            free_energy_density: -ln_z / (beta * sites as f64),
            sites,
            method,
        }
    }
}

/// Streams every configuration of `P^n` in lexicographic (mixed-radix,
/// vertex 0 most significant) order.
#[derive(Debug, Clone)]
pub struct Enumerator<'a> {
    graph: &'a Graph,
    table: PhiTable,
    params: ModelParams,
    total: u64,
}

impl<'a> Enumerator<'a> {
    pub fn new(g: &'a Graph, set: &PermaspinSet, p: &ModelParams, cap: u64) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let requested = (set.len() as f64).powi(g.vertex_count() as i32);
        if requested > cap as f64 {
            return Err(Error::CapExceeded { requested, cap });
        }
        Ok(Enumerator {
            graph: g,
            table: PhiTable::new(set, p.stat),
            params: *p,
            total: (set.len() as u64).pow(g.vertex_count() as u32),
        })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Energy of the configuration given as indices into the spin set.
    pub fn energy(&self, spins: &[usize]) -> f64 {
        let bond: f64 = self
            .graph
            .edges()
            .iter()
            .map(|&(u, v)| self.table.pair(spins[u], spins[v]))
            .sum();
        let field: f64 = spins.iter().map(|&s| self.table.single(s)).sum();
        -self.params.j * bond - self.params.h * field
    }

    /// Mixed-radix digits of configuration `index`.
    pub fn decode(&self, mut index: u64) -> Vec<usize> {
        let radix = self.table.size() as u64;
        let mut digits = vec![0; self.graph.vertex_count()];
        for d in digits.iter_mut().rev() {
            *d = (index % radix) as usize;
            index /= radix;
        }
        digits
    }

    /// Calls `f(spins, energy)` for configurations in `[start, end)`.
    pub fn for_each_in(&self, start: u64, end: u64, mut f: impl FnMut(&[usize], f64)) {
        if start >= end {
            return;
        }
        let radix = self.table.size();
        let mut digits = self.decode(start);
        for _ in start..end {
            let e = self.energy(&digits);
            f(&digits, e);
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < radix {
                    break;
                }
                *d = 0;
            }
        }
    }

    pub fn for_each(&self, f: impl FnMut(&[usize], f64)) {
        self.for_each_in(0, self.total, f)
    }

    /// `ln Σ exp(−βE)` over configurations accepted by `filter`, or `None`
    /// when no configuration is accepted.
    ///
    /// The range is cut into fixed chunks, each summed serially with its own
    /// log shift, and the chunk results are combined in index order, so the
    /// value does not depend on the worker count.
    pub fn ln_partial_sum(&self, filter: impl Fn(&[usize]) -> bool + Sync) -> Option<f64> {
        let beta = self.params.beta;
        let chunks = self.total.div_ceil(CHUNK);
        let parts: Vec<Option<(f64, f64)>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK;
                let end = (start + CHUNK).min(self.total);
                let mut energies = Vec::with_capacity((end - start) as usize);
                self.for_each_in(start, end, |s, e| {
                    if filter(s) {
                        energies.push(e);
                    }
                });
                let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
                if !e_min.is_finite() {
                    return None;
                }
                let sum: f64 = energies.iter().map(|e| (-beta * (e - e_min)).exp()).sum();
                Some((-beta * e_min, sum))
            })
            .collect();
        let parts: Vec<(f64, f64)> = parts.into_iter().flatten().collect();
        let shift = parts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        if !shift.is_finite() {
            return None;
        }
        let total: f64 = parts.iter().map(|&(s, v)| v * (s - shift).exp()).sum();
        Some(shift + total.ln())
    }
}

/// Exact `Z = Σ_{π⃗ ∈ P^n} exp(−βH(π⃗))` with the default cap.
pub fn brute_force_z(g: &Graph, set: &PermaspinSet, p: &ModelParams) -> Result<PartitionReport> {
    brute_force_z_with_cap(g, set, p, DEFAULT_ENUMERATION_CAP)
}

pub fn brute_force_z_with_cap(
    g: &Graph,
    set: &PermaspinSet,
    p: &ModelParams,
    cap: u64,
) -> Result<PartitionReport> {
    p.validate()?;
    let en = Enumerator::new(g, set, p, cap)?;
    let ln_z = en.ln_partial_sum(|_| true).expect("nonempty state space");
    Ok(PartitionReport::from_ln_z(
        ln_z,
        g.vertex_count(),
        p.beta,
        Method::BruteForce,
    ))
}

/// Boltzmann probability of every configuration, in enumeration order.
pub fn boltzmann_probabilities(g: &Graph, set: &PermaspinSet, p: &ModelParams) -> Result<Vec<f64>> {
    p.validate()?;
    let en = Enumerator::new(g, set, p, PROBABILITY_CAP)?;
    let mut energies = Vec::with_capacity(en.total() as usize);
    en.for_each(|_, e| energies.push(e));
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut w: Vec<f64> = energies
        .iter()
        .map(|e| (-p.beta * (e - e_min)).exp())
        .collect();
    let sum: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= sum);
    Ok(w)
}
