//! Constructive enumeration of all factorizations `σ = τ2 ∘ τ1` into two
//! involutions.
//!
//! Every factorization decomposes cycle-by-cycle: each cycle of `σ` is either
//! factored on its own (one of `k` rotations of a reflection) or exchanged
//! with another cycle of the same length (again `k` choices). The iterator
//! walks all partial matchings of equal-length cycles and all phase choices.
//!
//! Conventions fixing the enumeration order:
//! - a cycle `(p_0, …, p_{k-1})` is indexed from its minimum point in
//!   σ-order, and phase `t ∈ {1, …, k}` gives `τ2 = I_t`, `τ1 = I_{t-1}`
//!   with `I_t(p_x) = p_{(t-x) mod k}`;
//! - in an exchanged pair the cycle with the smaller minimum is `A`, and
//!   `J_t` swaps `a_x ↔ b_{(t-x) mod k}`;
//! - cycle lengths ascending; within a length, matchings in
//!   [`partial_matchings`] order, then phases ascending with the last unit
//!   varying fastest.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::permutation::{Permutation, PermutationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorizeError {
    #[error("{which} is not an involution")]
    NotInvolution { which: &'static str },
    #[error("tau2 ∘ tau1 does not equal the target permutation")]
    WrongProduct,
    #[error("cannot exchange cycles of lengths {0} and {1}")]
    UnequalCycles(usize, usize),
    #[error(transparent)]
    Permutation(#[from] PermutationError),
}

/// An ordered pair of involutions with `tau2 ∘ tau1 = σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvolutionPair {
    tau1: Permutation,
    tau2: Permutation,
}

impl InvolutionPair {
    /// Checks both involution properties and the product against `sigma`.
    pub fn new(
        tau1: Permutation,
        tau2: Permutation,
        sigma: &Permutation,
    ) -> Result<Self, FactorizeError> {
        if !tau1.is_involution() {
            return Err(FactorizeError::NotInvolution { which: "tau1" });
        }
        if !tau2.is_involution() {
            return Err(FactorizeError::NotInvolution { which: "tau2" });
        }
        if &tau2.compose(&tau1)? != sigma {
            return Err(FactorizeError::WrongProduct);
        }
        Ok(InvolutionPair { tau1, tau2 })
    }

    pub fn tau1(&self) -> &Permutation {
        &self.tau1
    }

    pub fn tau2(&self) -> &Permutation {
        &self.tau2
    }

    /// `tau2 ∘ tau1`.
    pub fn product(&self) -> Permutation {
        self.tau2.compose(&self.tau1).expect("equal degrees")
    }
}

/// The restriction of a factorization to a set of points: `tau1[i]` and
/// `tau2[i]` are the images of `points[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fragment {
    pub points: Vec<usize>,
    pub tau1: Vec<usize>,
    pub tau2: Vec<usize>,
}

impl Fragment {
    /// Extends the fragment by the identity to a pair of permutations of
    /// degree `n`, returned as `(tau1, tau2)`.
    pub fn embed(&self, n: usize) -> Result<(Permutation, Permutation), PermutationError> {
        let mut t1: Vec<usize> = (0..n).collect();
        let mut t2 = t1.clone();
        for (i, &p) in self.points.iter().enumerate() {
            if p >= n {
                return Err(PermutationError::OutOfRange { point: p, degree: n });
            }
            t1[p] = self.tau1[i];
            t2[p] = self.tau2[i];
        }
        Ok((Permutation::from_images(t1)?, Permutation::from_images(t2)?))
    }

    /// Embeds the fragment and validates it as a factorization of its own
    /// product.
    pub fn into_pair(&self, n: usize) -> Result<InvolutionPair, FactorizeError> {
        let (tau1, tau2) = self.embed(n)?;
        let sigma = tau2.compose(&tau1)?;
        InvolutionPair::new(tau1, tau2, &sigma)
    }
}

/// The `k` factorizations of a single cycle, phases `t = 1, …, k`.
pub fn lemma1_factors(cycle: &[usize]) -> Vec<Fragment> {
    let k = cycle.len();
    (1..=k)
        .map(|t| {
            let mut tau1 = Vec::with_capacity(k);
            let mut tau2 = Vec::with_capacity(k);
            for x in 0..k {
                tau2.push(cycle[reflect(t, x, k)]);
                tau1.push(cycle[reflect(t + k - 1, x, k)]);
            }
            Fragment {
                points: cycle.to_vec(),
                tau1,
                tau2,
            }
        })
        .collect()
}

/// The `k` factorizations exchanging two `k`-cycles, phases `t = 1, …, k`.
/// The fragment's points are `a_0, …, a_{k-1}, b_0, …, b_{k-1}`.
pub fn lemma3_factors(a: &[usize], b: &[usize]) -> Result<Vec<Fragment>, FactorizeError> {
    let k = a.len();
    if b.len() != k {
        return Err(FactorizeError::UnequalCycles(k, b.len()));
    }
    Ok((1..=k)
        .map(|t| {
            let mut points = Vec::with_capacity(2 * k);
            points.extend_from_slice(a);
            points.extend_from_slice(b);
            let mut tau1 = vec![0; 2 * k];
            let mut tau2 = vec![0; 2 * k];
            for x in 0..k {
                let y2 = reflect(t, x, k);
                let y1 = reflect(t + k - 1, x, k);
                tau2[x] = b[y2];
                tau2[k + y2] = a[x];
                tau1[x] = b[y1];
                tau1[k + y1] = a[x];
            }
            Fragment { points, tau1, tau2 }
        })
        .collect())
}

#[inline]
fn reflect(t: usize, x: usize, k: usize) -> usize {
    (t % k + k - x % k) % k
}

/// True iff both involutions map the point set of `o1` onto that of `o2`.
pub fn is_exchanging(pair: &InvolutionPair, o1: &[usize], o2: &[usize]) -> bool {
    if o1.len() != o2.len() {
        return false;
    }
    let mut target: Vec<usize> = o2.to_vec();
    target.sort_unstable();
    let image_matches = |tau: &Permutation| {
        let mut img: Vec<usize> = o1.iter().map(|&x| tau.apply(x)).collect();
        img.sort_unstable();
        img == target
    };
    image_matches(&pair.tau1) && image_matches(&pair.tau2)
}

/// Iterator over all partial matchings (sets of disjoint pairs) of
/// `{0, …, c-1}`, starting with the empty matching.
///
/// Order: the smallest unassigned element is first left single, then paired
/// with each larger unassigned element in increasing order.
pub fn partial_matchings(c: usize) -> PartialMatchings {
    PartialMatchings {
        c,
        stack: Vec::new(),
        used: vec![false; c],
        started: false,
        done: false,
    }
}

#[derive(Debug, Clone)]
pub struct PartialMatchings {
    c: usize,
    // (element, option): option 0 leaves it single, option r pairs it with
    // the r-th larger unused element.
    stack: Vec<(usize, usize, Option<usize>)>,
    used: Vec<bool>,
    started: bool,
    done: bool,
}

impl PartialMatchings {
    fn partner_for(&self, elem: usize, option: usize) -> Option<Option<usize>> {
        if option == 0 {
            return Some(None);
        }
        (elem + 1..self.c)
            .filter(|&y| !self.used[y])
            .nth(option - 1)
            .map(Some)
    }

    fn push(&mut self, elem: usize, option: usize, partner: Option<usize>) {
        self.used[elem] = true;
        if let Some(p) = partner {
            self.used[p] = true;
        }
        self.stack.push((elem, option, partner));
    }

    fn fill(&mut self) {
        while let Some(elem) = (0..self.c).find(|&x| !self.used[x]) {
            self.push(elem, 0, None);
        }
    }

    fn current(&self) -> Vec<(usize, usize)> {
        self.stack
            .iter()
            .filter_map(|&(e, _, p)| p.map(|p| (e, p)))
            .collect()
    }
}

impl Iterator for PartialMatchings {
    type Item = Vec<(usize, usize)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill();
            return Some(self.current());
        }
        while let Some((elem, option, partner)) = self.stack.pop() {
            self.used[elem] = false;
            if let Some(p) = partner {
                self.used[p] = false;
            }
            if let Some(next_partner) = self.partner_for(elem, option + 1) {
                self.push(elem, option + 1, next_partner);
                self.fill();
                return Some(self.current());
            }
        }
        self.done = true;
        None
    }
}

/// All cycles of one length, with the current matching and phases.
#[derive(Debug, Clone)]
struct LengthGroup {
    k: usize,
    cycles: Vec<Vec<usize>>,
    matchings: PartialMatchings,
    /// Units: a matched pair `(i, Some(j))` or a single cycle `(i, None)`,
    /// ordered by the smaller cycle index.
    units: Vec<(usize, Option<usize>)>,
    /// Phase per unit, in `1..=k`.
    phases: Vec<usize>,
}

impl LengthGroup {
    fn new(k: usize, cycles: Vec<Vec<usize>>) -> Self {
        let mut matchings = partial_matchings(cycles.len());
        let first = matchings.next().expect("empty matching always exists");
        let mut group = LengthGroup {
            k,
            cycles,
            matchings,
            units: Vec::new(),
            phases: Vec::new(),
        };
        group.set_matching(&first);
        group
    }

    fn set_matching(&mut self, matching: &[(usize, usize)]) {
        let mut partner = vec![None; self.cycles.len()];
        for &(i, j) in matching {
            partner[i] = Some(j);
            partner[j] = Some(i);
        }
        self.units = (0..self.cycles.len())
            .filter_map(|i| match partner[i] {
                Some(j) if j < i => None,
                p => Some((i, p)),
            })
            .collect();
        self.phases = vec![1; self.units.len()];
    }

    /// Steps to the next state; returns false (after resetting to the first
    /// state) when the group wraps around.
    fn advance(&mut self) -> bool {
        for phase in self.phases.iter_mut().rev() {
            if *phase < self.k {
                *phase += 1;
                return true;
            }
            *phase = 1;
        }
        match self.matchings.next() {
            Some(m) => {
                self.set_matching(&m);
                true
            }
            None => {
                self.matchings = partial_matchings(self.cycles.len());
                let first = self.matchings.next().expect("empty matching");
                self.set_matching(&first);
                false
            }
        }
    }

    fn write(&self, tau1: &mut [usize], tau2: &mut [usize]) {
        let k = self.k;
        for (&(i, partner), &t) in self.units.iter().zip(&self.phases) {
            let a = &self.cycles[i];
            match partner {
                None => {
                    for x in 0..k {
                        tau2[a[x]] = a[reflect(t, x, k)];
                        tau1[a[x]] = a[reflect(t + k - 1, x, k)];
                    }
                }
                Some(j) => {
                    let b = &self.cycles[j];
                    for x in 0..k {
                        let y2 = reflect(t, x, k);
                        let y1 = reflect(t + k - 1, x, k);
                        tau2[a[x]] = b[y2];
                        tau2[b[y2]] = a[x];
                        tau1[a[x]] = b[y1];
                        tau1[b[y1]] = a[x];
                    }
                }
            }
        }
    }

    /// Pairs `(i, j)` of exchanged cycle indices in the current state.
    fn exchanged(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.units
            .iter()
            .filter_map(|&(i, p)| p.map(|j| (i, j)))
    }
}

/// Lazy iterator over every factorization of `sigma`, each exactly once.
pub fn enumerate_factorizations(sigma: &Permutation) -> Factorizations {
    let mut by_length: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for cycle in sigma.cycle_decomposition().into_cycles() {
        by_length.entry(cycle.len()).or_default().push(cycle);
    }
    Factorizations {
        sigma: sigma.clone(),
        groups: by_length
            .into_iter()
            .map(|(k, cycles)| LengthGroup::new(k, cycles))
            .collect(),
        done: false,
    }
}

#[derive(Debug, Clone)]
pub struct Factorizations {
    sigma: Permutation,
    groups: Vec<LengthGroup>,
    done: bool,
}

impl Factorizations {
    /// Cycle pairs exchanged by the factorization `next` will return.
    fn peek_exchanged(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.groups
            .iter()
            .flat_map(|g| {
                g.exchanged()
                    .map(move |(i, j)| (g.cycles[i].clone(), g.cycles[j].clone()))
            })
            .collect()
    }

    /// Like `next`, but also reports which cycle pairs are exchanged.
    pub fn next_with_exchanges(&mut self) -> Option<(InvolutionPair, Vec<(Vec<usize>, Vec<usize>)>)> {
        if self.done {
            return None;
        }
        let exchanged = self.peek_exchanged();
        self.next().map(|pair| (pair, exchanged))
    }
}

impl Iterator for Factorizations {
    type Item = InvolutionPair;

    fn next(&mut self) -> Option<InvolutionPair> {
        if self.done {
            return None;
        }
        let n = self.sigma.degree();
        let mut tau1 = vec![0; n];
        let mut tau2 = vec![0; n];
        for g in &self.groups {
            g.write(&mut tau1, &mut tau2);
        }
        let pair = InvolutionPair::new(
            Permutation::from_images_unchecked(tau1),
            Permutation::from_images_unchecked(tau2),
            &self.sigma,
        )
        .expect("constructed factorization must compose to sigma");

        let mut carried = true;
        for g in self.groups.iter_mut().rev() {
            if g.advance() {
                carried = false;
                break;
            }
        }
        if carried {
            self.done = true;
        }
        Some(pair)
    }
}
