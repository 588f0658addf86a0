//! Permutations of `{0, …, n-1}` stored as image tables, with cycle
//! decomposition and cycle-type extraction.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermutationError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("point {point} is out of range for degree {degree}")]
    OutOfRange { point: usize, degree: usize },
    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),
    #[error("cannot parse {token:?}: {reason}")]
    Parse { token: String, reason: String },
}

/// A bijection of `{0, …, n-1}`; `images[x]` is the image of `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from its image table, rejecting anything that is
    /// not a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermutationError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n {
                return Err(PermutationError::OutOfRange { point: y, degree: n });
            }
            if seen[y] {
                return Err(PermutationError::RepeatedPoint(y));
            }
            seen[y] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of degree `n` from disjoint cycles. Points not
    /// mentioned are fixed.
    pub fn from_cycles<C: AsRef<[usize]>>(n: usize, cycles: &[C]) -> Result<Self, PermutationError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for (i, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(PermutationError::OutOfRange { point: x, degree: n });
                }
                if seen[x] {
                    return Err(PermutationError::RepeatedPoint(x));
                }
                seen[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermutationError> {
        if self.degree() != other.degree() {
            return Err(PermutationError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&y| self.images[y]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    /// True iff `p ∘ p` is the identity.
    pub fn is_involution(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(x, &y)| self.images[y] == x)
    }

    /// Canonical decomposition: each cycle starts at its minimum point and
    /// cycles are ordered by minimum point. Fixed points are included.
    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let n = self.degree();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            cycles.push(cycle);
        }
        CycleDecomposition { cycles }
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut visited = vec![false; n];
        let mut counts = BTreeMap::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                len += 1;
                x = self.images[x];
            }
            *counts.entry(len).or_insert(0) += 1;
        }
        CycleType { n, counts }
    }

    /// Parses cycle notation such as `"(1,2,3)(4,5,6)"`. With `one_based`,
    /// labels are shifted down by one on ingest. When `degree` is `None` it
    /// is inferred from the largest point mentioned. `"()"` and the empty
    /// string denote the identity.
    pub fn parse_cycles(
        text: &str,
        degree: Option<usize>,
        one_based: bool,
    ) -> Result<Permutation, PermutationError> {
        let cycles = parse_cycle_list(text, one_based)?;
        let inferred = cycles
            .iter()
            .flatten()
            .max()
            .map_or(0, |&m| m + 1);
        let n = match degree {
            Some(d) if d < inferred => {
                return Err(PermutationError::OutOfRange {
                    point: inferred - 1,
                    degree: d,
                })
            }
            Some(d) => d,
            None => inferred,
        };
        Permutation::from_cycles(n, &cycles)
    }

    /// Parses the image form, a JSON array of 0-based images.
    pub fn parse_images(text: &str) -> Result<Permutation, PermutationError> {
        let images: Vec<usize> =
            serde_json::from_str(text.trim()).map_err(|e| PermutationError::Parse {
                token: text.trim().to_string(),
                reason: e.to_string(),
            })?;
        Permutation::from_images(images)
    }

    /// Cycle notation omitting fixed points; the identity prints as `()`.
    pub fn to_cycle_string(&self, one_based: bool) -> String {
        let offset = usize::from(one_based);
        let mut out = String::new();
        for cycle in self.cycle_decomposition().cycles() {
            if cycle.len() < 2 {
                continue;
            }
            out.push('(');
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&(x + offset).to_string());
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({:?})", self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string(false))
    }
}

/// Free-function form of [`Permutation::compose`]: `x ↦ p(q(x))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermutationError> {
    p.compose(q)
}

fn parse_cycle_list(text: &str, one_based: bool) -> Result<Vec<Vec<usize>>, PermutationError> {
    let parse_err = |token: &str, reason: &str| PermutationError::Parse {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| parse_err(rest, "expected '('"))?;
        let close = open
            .find(')')
            .ok_or_else(|| parse_err(rest, "unterminated cycle"))?;
        let body = &open[..close];
        let mut cycle = Vec::new();
        if !body.trim().is_empty() {
            for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let v: usize = tok
                    .parse()
                    .map_err(|_| parse_err(tok, "not a non-negative integer"))?;
                let v = if one_based {
                    v.checked_sub(1)
                        .ok_or_else(|| parse_err(tok, "label 0 in one-based notation"))?
                } else {
                    v
                };
                cycle.push(v);
            }
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = open[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// Cycles of a permutation in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn into_cycles(self) -> Vec<Vec<usize>> {
        self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// Multiplicities `c_k` of cycle lengths. Only lengths with `c_k > 0` are
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    n: usize,
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    /// Builds a cycle type from `(length, multiplicity)` pairs. Zero lengths
    /// are rejected; zero multiplicities are dropped; repeated lengths add up.
    pub fn from_counts<I>(pairs: I) -> Result<Self, PermutationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut counts = BTreeMap::new();
        let mut n = 0usize;
        for (k, c) in pairs {
            if k == 0 {
                return Err(PermutationError::Parse {
                    token: format!("{k}:{c}"),
                    reason: "cycle length must be positive".into(),
                });
            }
            if c == 0 {
                continue;
            }
            *counts.entry(k).or_insert(0) += c;
            n += k * c;
        }
        Ok(CycleType { n, counts })
    }

    /// Parses `"k:c,k:c,..."`, e.g. `"1:4"` or `"3:2"`.
    pub fn parse(text: &str) -> Result<Self, PermutationError> {
        let mut pairs = Vec::new();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let err = || PermutationError::Parse {
                token: tok.to_string(),
                reason: "expected length:count".into(),
            };
            let (k, c) = tok.split_once(':').ok_or_else(err)?;
            let k: usize = k.trim().parse().map_err(|_| err())?;
            let c: usize = c.trim().parse().map_err(|_| err())?;
            pairs.push((k, c));
        }
        CycleType::from_counts(pairs)
    }

    pub(crate) fn from_map_unchecked(n: usize, counts: BTreeMap<usize, usize>) -> Self {
        debug_assert_eq!(counts.iter().map(|(k, c)| k * c).sum::<usize>(), n);
        CycleType { n, counts }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `c_k`, zero for absent lengths.
    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// `(k, c_k)` pairs with `c_k > 0`, ascending in `k`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    pub fn number_of_cycles(&self) -> usize {
        self.counts.values().sum()
    }

    /// The identity's cycle type `{1: n}`.
    pub fn identity(n: usize) -> Self {
        let mut counts = BTreeMap::new();
        if n > 0 {
            counts.insert(1, n);
        }
        CycleType { n, counts }
    }

    /// A representative permutation: cycles laid out consecutively, shortest
    /// lengths first.
    pub fn representative(&self) -> Permutation {
        let mut images = Vec::with_capacity(self.n);
        let mut start = 0;
        for (k, c) in self.iter() {
            for _ in 0..c {
                for i in 0..k {
                    images.push(start + (i + 1) % k);
                }
                start += k;
            }
        }
        Permutation::from_images_unchecked(images)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, c)| format!("{k}:{c}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Integer partitions of `n` in descending-lexicographic order, each as a
/// cycle type.
pub fn partitions(n: usize) -> Partitions {
    Partitions {
        parts: if n == 0 { Vec::new() } else { vec![n] },
        n,
        done: false,
    }
}

pub struct Partitions {
    parts: Vec<usize>,
    n: usize,
    done: bool,
}

impl Iterator for Partitions {
    type Item = CycleType;

    fn next(&mut self) -> Option<CycleType> {
        if self.done {
            return None;
        }
        let mut counts = BTreeMap::new();
        for &p in &self.parts {
            *counts.entry(p).or_insert(0) += 1;
        }
        let current = CycleType::from_map_unchecked(self.n, counts);

        // Strip trailing 1s, decrement the last part > 1, then refill greedily.
        let mut ones = 0;
        while self.parts.last() == Some(&1) {
            self.parts.pop();
            ones += 1;
        }
        match self.parts.pop() {
            None => self.done = true,
            Some(last) => {
                let part = last - 1;
                let mut remaining = ones + 1;
                self.parts.push(part);
                while remaining > 0 {
                    let take = remaining.min(part);
                    self.parts.push(take);
                    remaining -= take;
                }
            }
        }
        Some(current)
    }
}
