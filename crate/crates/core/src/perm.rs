//! Permutations, permutation statistics and pattern-defined spin sets.
//!
//! Permutations are stored 0-based internally and written in 1-based
//! one-line notation (`231` means 1 -> 2, 2 -> 3, 3 -> 1).

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `k` for which whole-group enumeration is allowed.
pub const MAX_ENUMERATE_K: usize = 10;

/// A bijection on `{1..k}` in one-line notation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    /// Builds a permutation from 1-based one-line notation.
    pub fn new(one_line: &[usize]) -> Result<Self> {
        let k = one_line.len();
        if k > u8::MAX as usize {
            return Err(Error::InvalidPermutation(format!("length {k} too large")));
        }
        let mut seen = vec![false; k];
        let mut images = Vec::with_capacity(k);
        for &v in one_line {
            if v == 0 || v > k || seen[v - 1] {
                return Err(Error::InvalidPermutation(format!("{one_line:?}")));
            }
            seen[v - 1] = true;
            images.push((v - 1) as u8);
        }
        Ok(Permutation { images })
    }

    pub fn identity(k: usize) -> Self {
        Permutation {
            images: (0..k as u8).collect(),
        }
    }

    /// The reversal `k (k-1) ... 1`.
    pub fn reversal(k: usize) -> Self {
        Permutation {
            images: (0..k as u8).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `π(i)` for 1-based `i`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `(σ ∘ τ)(i) = σ(τ(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&t| self.images[t as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u8;
        }
        Permutation { images }
    }

    /// `σ⁻¹ π`, the permutation that sorts `self` into `other`.
    pub fn relative(&self, other: &Permutation) -> Result<Permutation> {
        self.inverse().compose(other)
    }

    pub fn descents(&self) -> usize {
        self.images.windows(2).filter(|w| w[0] > w[1]).count()
    }

    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Classical containment: some subsequence is order-isomorphic to `pattern`.
    pub fn contains_pattern(&self, pattern: &Permutation) -> bool {
        let m = pattern.len();
        let k = self.len();
        if m > k {
            return false;
        }
        if m == 0 {
            return true;
        }
        let mut positions: Vec<usize> = (0..m).collect();
        loop {
            if order_isomorphic(positions.iter().map(|&p| self.images[p]), &pattern.images) {
                return true;
            }
            // next m-subset of 0..k in lexicographic order
            let mut i = m;
            while i > 0 && positions[i - 1] == k - m + i - 1 {
                i -= 1;
            }
            if i == 0 {
                return false;
            }
            positions[i - 1] += 1;
            for j in i..m {
                positions[j] = positions[j - 1] + 1;
            }
        }
    }

    fn next_lexicographic(&mut self) -> bool {
        let v = &mut self.images;
        let n = v.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

fn order_isomorphic(values: impl Iterator<Item = u8>, pattern: &[u8]) -> bool {
    let vals: Vec<u8> = values.collect();
    for a in 0..vals.len() {
        for b in a + 1..vals.len() {
            if (vals[a] < vals[b]) != (pattern[a] < pattern[b]) {
                return false;
            }
        }
    }
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for &v in &self.images {
                write!(f, "{}", v + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.one_line().iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts digit strings (`"231"`) or comma-separated images (`"2,3,1"`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let invalid = || Error::InvalidPermutation(s.to_string());
        let images: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| invalid()))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(invalid))
                .collect::<Result<_>>()?
        };
        if images.is_empty() {
            return Err(Error::InvalidPermutation(s.to_string()));
        }
        Permutation::new(&images)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Which permutation statistic measures disorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticKind {
    Des,
    Inv,
    /// `des(π) + des(π⁻¹)`, the double Eulerian statistic.
    Destat,
}

impl StatisticKind {
    pub fn eval(self, pi: &Permutation) -> usize {
        match self {
            StatisticKind::Des => pi.descents(),
            StatisticKind::Inv => pi.inversions(),
            StatisticKind::Destat => pi.descents() + pi.inverse().descents(),
        }
    }

    /// Largest value the statistic takes on `S_k`.
    pub fn s_max(self, k: usize) -> usize {
        let k1 = k.saturating_sub(1);
        match self {
            StatisticKind::Des => k1,
            StatisticKind::Inv => k * k1 / 2,
            StatisticKind::Destat => 2 * k1,
        }
    }

    /// Whether `stat(π) = stat(π⁻¹)` for every permutation.
    pub fn is_inverse_symmetric(self) -> bool {
        !matches!(self, StatisticKind::Des)
    }

    pub fn name(self) -> &'static str {
        match self {
            StatisticKind::Des => "des",
            StatisticKind::Inv => "inv",
            StatisticKind::Destat => "destat",
        }
    }
}

impl fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "des" => Ok(StatisticKind::Des),
            "inv" => Ok(StatisticKind::Inv),
            "destat" => Ok(StatisticKind::Destat),
            other => Err(Error::InvalidParameter(format!("unknown statistic {other:?}"))),
        }
    }
}

pub fn compose(sigma: &Permutation, tau: &Permutation) -> Result<Permutation> {
    sigma.compose(tau)
}

pub fn inverse(pi: &Permutation) -> Permutation {
    pi.inverse()
}

pub fn statistic(kind: StatisticKind, pi: &Permutation) -> usize {
    kind.eval(pi)
}

/// How a [`PermaspinSet`] was specified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetDefinition {
    Full,
    Explicit,
    Avoiding(Vec<Permutation>),
}

/// Lexicographically sorted set of allowed spins, all of length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermaspinSet {
    k: usize,
    members: Vec<Permutation>,
    definition: SetDefinition,
}

impl PermaspinSet {
    /// Sorts and deduplicates an explicit member list.
    pub fn explicit(k: usize, mut members: Vec<Permutation>) -> Result<Self> {
        if let Some(bad) = members.iter().find(|p| p.len() != k) {
            return Err(Error::LengthMismatch {
                left: k,
                right: bad.len(),
            });
        }
        if members.is_empty() {
            return Err(Error::EmptySet);
        }
        members.sort();
        members.dedup();
        Ok(PermaspinSet {
            k,
            members,
            definition: SetDefinition::Explicit,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Permutation] {
        &self.members
    }

    pub fn definition(&self) -> &SetDefinition {
        &self.definition
    }

    pub fn index_of(&self, pi: &Permutation) -> Option<usize> {
        self.members.binary_search(pi).ok()
    }

    pub fn contains(&self, pi: &Permutation) -> bool {
        self.index_of(pi).is_some()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.members.iter()
    }

    /// Short label such as `S3` or `S3(123,321)`.
    pub fn label(&self) -> String {
        match &self.definition {
            SetDefinition::Full => format!("S{}", self.k),
            SetDefinition::Avoiding(p) => {
                let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("S{}({})", self.k, parts.join(","))
            }
            SetDefinition::Explicit => {
                let parts: Vec<String> = self.members.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", parts.join(","))
            }
        }
    }
}

impl<'a> IntoIterator for &'a PermaspinSet {
    type Item = &'a Permutation;
    type IntoIter = std::slice::Iter<'a, Permutation>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// All of `S_k` in lexicographic order.
pub fn enumerate(k: usize) -> Result<PermaspinSet> {
    if !(1..=MAX_ENUMERATE_K).contains(&k) {
        return Err(Error::KOutOfRange {
            k,
            max: MAX_ENUMERATE_K,
        });
    }
    let mut members = Vec::with_capacity((1..=k).product());
    let mut current = Permutation::identity(k);
    loop {
        members.push(current.clone());
        if !current.next_lexicographic() {
            break;
        }
    }
    Ok(PermaspinSet {
        k,
        members,
        definition: SetDefinition::Full,
    })
}

/// `S_k(patterns)`: permutations of length `k` avoiding every pattern.
///
/// The result may be empty (any length-1 pattern is contained in everything).
pub fn avoiders(k: usize, patterns: &[Permutation]) -> Result<PermaspinSet> {
    if patterns.is_empty() {
        return Err(Error::EmptyPatterns);
    }
    if let Some(p) = patterns.iter().find(|p| p.len() > k) {
        return Err(Error::PatternTooLong {
            pattern: p.len(),
            k,
        });
    }
    let all = enumerate(k)?;
    let members = all
        .members
        .into_iter()
        .filter(|pi| patterns.iter().all(|tau| !pi.contains_pattern(tau)))
        .collect();
    Ok(PermaspinSet {
        k,
        members,
        definition: SetDefinition::Avoiding(patterns.to_vec()),
    })
}
