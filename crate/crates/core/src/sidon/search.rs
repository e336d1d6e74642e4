//! Exhaustive search for maximum Sidon-type sets.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::{check_modulus, check_strength, lower_bound_size, SidonSet};
use crate::error::{Error, Result};

/// Largest modulus the search accepts.
pub const MAX_SEARCH_MODULUS: u64 = 4096;

/// Limits on an exhaustive search. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            time_limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SidonSearchResult {
    pub modulus: u64,
    pub strength: u32,
    /// `s(n, t)` when `complete`, otherwise the best size found.
    pub max_cardinality: usize,
    /// Lexicographically smallest set of that size when `complete`.
    pub witness: SidonSet,
    pub nodes_explored: u64,
    pub matches_lower_bound: bool,
    /// False when the budget ran out; the result is then not certified.
    pub complete: bool,
}

/// Bitset over residues `0..64 * W`.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Bits<const W: usize>([u64; W]);

impl<const W: usize> Bits<W> {
    const EMPTY: Self = Bits([0; W]);

    #[inline]
    fn insert(&mut self, x: usize) {
        self.0[x >> 6] |= 1 << (x & 63);
    }

    #[inline]
    fn remove(&mut self, x: usize) {
        self.0[x >> 6] &= !(1 << (x & 63));
    }

    #[inline]
    fn contains(&self, x: usize) -> bool {
        self.0[x >> 6] >> (x & 63) & 1 == 1
    }

    #[inline]
    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of members `>= from`.
    #[inline]
    fn len_from(&self, from: usize) -> usize {
        let w = from >> 6;
        if w >= W {
            return 0;
        }
        let head = (self.0[w] & (!0u64 << (from & 63))).count_ones() as usize;
        head + self.0[w + 1..]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
    }

    /// Smallest member `>= from`.
    #[inline]
    fn next_from(&self, from: usize) -> Option<usize> {
        let mut w = from >> 6;
        if w >= W {
            return None;
        }
        let mut bits = self.0[w] & (!0u64 << (from & 63));
        loop {
            if bits != 0 {
                return Some(w * 64 + bits.trailing_zeros() as usize);
            }
            w += 1;
            if w >= W {
                return None;
            }
            bits = self.0[w];
        }
    }

    #[inline]
    fn first(&self) -> Option<usize> {
        self.next_from(0)
    }

    /// Clears every member `<= upto`.
    #[inline]
    fn clear_through(&mut self, upto: usize) {
        let w = upto >> 6;
        for word in &mut self.0[..w.min(W)] {
            *word = 0;
        }
        if w < W {
            let keep = if upto & 63 == 63 {
                0
            } else {
                !0u64 << ((upto & 63) + 1)
            };
            self.0[w] &= keep;
        }
    }

    #[inline]
    fn minus(mut self, other: &Self) -> Self {
        for (w, o) in self.0.iter_mut().zip(&other.0) {
            *w &= !o;
        }
        self
    }
}

/// Incremental forbidding of residues that would complete a vanishing
/// non-trivial signed sum.
///
/// With `S` chosen and `y ∉ S`, `S ∪ {y}` stays valid at strength 3 unless
/// `y, 2y` or `3y ≡ 0`, `y ≡ ±a`, `y ≡ ±(a + b)`, `y ≡ ±(a - b)` or
/// `2y ≡ ±a` for some `a, b ∈ S`. Adding `x` therefore forbids `x`, `-x`,
/// `±2x`, the halves of `±x` and `±(x ± a)` for the earlier `a`.
struct Forbidder {
    n: usize,
    t: u32,
    /// Solutions of `2y ≡ r`, at most two, `usize::MAX` when absent.
    halves: Vec<[usize; 2]>,
}

impl Forbidder {
    fn new(n: usize, t: u32) -> Self {
        let mut halves = vec![[usize::MAX; 2]; n];
        if t >= 3 {
            for y in 1..n {
                let slot = &mut halves[(2 * y) % n];
                if slot[0] == usize::MAX {
                    slot[0] = y;
                } else {
                    slot[1] = y;
                }
            }
        }
        Forbidder { n, t, halves }
    }

    /// Residues admissible as singletons.
    fn initial<const W: usize>(&self) -> Bits<W> {
        let n = self.n;
        let mut r = Bits::EMPTY;
        for y in 1..n {
            let ok = match self.t {
                1 => true,
                2 => (2 * y) % n != 0,
                _ => (2 * y) % n != 0 && (3 * y) % n != 0,
            };
            if ok {
                r.insert(y);
            }
        }
        r
    }

    #[inline]
    fn forbid<const W: usize>(&self, allowed: &mut Bits<W>, chosen: &[usize], x: usize) {
        let n = self.n;
        allowed.remove(x);
        if self.t < 2 {
            return;
        }
        let neg = |v: usize| if v == 0 { 0 } else { n - v };
        allowed.remove(neg(x));
        if self.t < 3 {
            return;
        }
        let two_x = (2 * x) % n;
        allowed.remove(two_x);
        allowed.remove(neg(two_x));
        for &y in self.halves[x].iter().chain(&self.halves[neg(x)]) {
            if y != usize::MAX {
                allowed.remove(y);
            }
        }
        for &a in chosen {
            let sum = if x + a >= n { x + a - n } else { x + a };
            let diff = if x >= a { x - a } else { x + n - a };
            allowed.remove(sum);
            allowed.remove(neg(sum));
            allowed.remove(diff);
            allowed.remove(neg(diff));
        }
    }

    /// Greedy partition of `allowed` into groups of pairwise conflicting
    /// residues (given `chosen`); at most one member of each group can join.
    /// Counting stops at `limit`.
    fn clique_cover<const W: usize>(
        &self,
        allowed: &Bits<W>,
        chosen: &[usize],
        limit: usize,
    ) -> usize {
        if self.t < 2 {
            return allowed.len().min(limit);
        }
        let mut uncovered = *allowed;
        let mut groups = 0;
        while let Some(y) = uncovered.first() {
            groups += 1;
            if groups >= limit {
                return groups;
            }
            uncovered.remove(y);
            let mut keep = uncovered;
            self.forbid(&mut keep, chosen, y);
            let mut rivals = uncovered.minus(&keep);
            let n = self.n;
            let seeds = [n - y, (2 * y) % n, n - (2 * y) % n];
            for z in seeds {
                if z < n && rivals.contains(z) {
                    uncovered.remove(z);
                    rivals.remove(z);
                    let mut keep = rivals;
                    self.forbid(&mut keep, chosen, z);
                    rivals = rivals.minus(&keep);
                }
            }
            while let Some(z) = rivals.first() {
                uncovered.remove(z);
                rivals.remove(z);
                let mut keep = rivals;
                self.forbid(&mut keep, chosen, z);
                rivals = rivals.minus(&keep);
            }
        }
        groups
    }
}

struct Search<'a, const W: usize> {
    forbidder: &'a Forbidder,
    budget: SearchBudget,
    started: Instant,
    nodes: u64,
    exhausted: bool,
    chosen: Vec<usize>,
    /// `doll[j]`: size of a largest valid set inside `{j, ..., n-1}`.
    doll: Vec<usize>,
    found: Option<Vec<usize>>,
}

impl<const W: usize> Search<'_, W> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if let Some(max) = self.budget.max_nodes {
            if self.nodes > max {
                self.exhausted = true;
            }
        }
        if let Some(limit) = self.budget.time_limit {
            if self.nodes.is_multiple_of(4096) && self.started.elapsed() > limit {
                self.exhausted = true;
            }
        }
        !self.exhausted
    }

    /// Depth-first search, smallest candidates first, for a set of size
    /// `target` extending `self.chosen` with members of `allowed`. Stops at
    /// the first hit, which is therefore lexicographically smallest.
    fn extend(&mut self, allowed: &Bits<W>, target: usize) -> bool {
        if !self.tick() {
            return false;
        }
        if self.chosen.len() == target {
            self.found = Some(self.chosen.clone());
            return true;
        }
        let need = target - self.chosen.len();
        if allowed.len() < need {
            return false;
        }
        if need > 1 && self.forbidder.clique_cover(allowed, &self.chosen, need) < need {
            return false;
        }
        let mut cursor = allowed.first();
        while let Some(y) = cursor {
            if self.doll[y] < need || allowed.len_from(y) < need {
                break;
            }
            let mut child = *allowed;
            child.clear_through(y);
            self.forbidder.forbid(&mut child, &self.chosen, y);
            self.chosen.push(y);
            let hit = self.extend(&child, target);
            self.chosen.pop();
            if hit || self.exhausted {
                return hit;
            }
            cursor = allowed.next_from(y + 1);
        }
        false
    }
}

struct Outcome {
    best: Vec<usize>,
    nodes: u64,
    complete: bool,
}

fn run_search<const W: usize>(n: usize, t: u32, budget: SearchBudget) -> Outcome {
    let forbidder = Forbidder::new(n, t);
    let base: Bits<W> = forbidder.initial();
    let mut search = Search::<W> {
        forbidder: &forbidder,
        budget,
        started: Instant::now(),
        nodes: 0,
        exhausted: false,
        chosen: Vec::new(),
        doll: vec![0; n + 1],
        found: None,
    };
    let mut best: Vec<usize> = Vec::new();

    for i in (1..n).rev() {
        let prev = search.doll[i + 1];
        search.doll[i] = prev;
        if !base.contains(i) {
            continue;
        }
        let mut allowed = base;
        allowed.clear_through(i);
        forbidder.forbid(&mut allowed, &[], i);
        search.chosen.clear();
        search.chosen.push(i);
        // Valid sets inside {i+1, ...} have at most `prev` elements, so the
        // entry for i is prev or prev + 1.
        let grew = search.extend(&allowed, prev + 1);
        if search.exhausted {
            break;
        }
        if grew {
            search.doll[i] = prev + 1;
            best = search.found.take().unwrap_or_default();
        }
    }

    if !search.exhausted {
        let target = search.doll[1];
        search.chosen.clear();
        if target > 0 && search.extend(&base, target) {
            best = search.found.take().unwrap_or_default();
        }
    }
    Outcome {
        best,
        nodes: search.nodes,
        complete: !search.exhausted,
    }
}

macro_rules! dispatch_width {
    ($n:expr, $f:ident($($arg:expr),*)) => {{
        match ($n).div_ceil(64) {
            0..=1 => $f::<1>($($arg),*),
            2 => $f::<2>($($arg),*),
            3..=4 => $f::<4>($($arg),*),
            5..=8 => $f::<8>($($arg),*),
            9..=16 => $f::<16>($($arg),*),
            17..=32 => $f::<32>($($arg),*),
            _ => $f::<64>($($arg),*),
        }
    }};
}

fn check_search_modulus(n: u64) -> Result<()> {
    check_modulus(n)?;
    if n > MAX_SEARCH_MODULUS {
        return Err(Error::Precondition(format!(
            "exhaustive search supports n <= {MAX_SEARCH_MODULUS}, got {n}"
        )));
    }
    Ok(())
}

/// Exact `s(n, t)` by exhaustive backtracking.
///
/// Candidates are added in increasing order; each addition forbids every
/// residue that would complete a vanishing non-trivial sum. Subtrees are cut
/// by two upper bounds on how many more elements fit: a greedy cover of the
/// remaining candidates by mutually conflicting groups, and a table of
/// optimal sizes for suffixes `{j, ..., n-1}`. The table is filled from
/// `j = n-1` down to `j = 1`, each entry by a search for one element more
/// than the previous entry. A final pass extracts the lexicographically
/// smallest optimal set.
///
/// When the budget runs out the best set seen so far is returned with
/// `complete = false`.
pub fn max_sidon_search(n: u64, t: u32, budget: SearchBudget) -> Result<SidonSearchResult> {
    check_search_modulus(n)?;
    check_strength(t)?;
    let nn = n as usize;
    let outcome = dispatch_width!(nn, run_search(nn, t, budget));
    let witness = SidonSet::new(outcome.best.iter().map(|&x| x as u64).collect(), n, t)?;
    let bound = lower_bound_size(n, t)?;
    Ok(SidonSearchResult {
        modulus: n,
        strength: t,
        max_cardinality: witness.len(),
        matches_lower_bound: outcome.complete && witness.len() == bound,
        witness,
        nodes_explored: outcome.nodes,
        complete: outcome.complete,
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn run_orbits<const W: usize>(n: usize, t: u32) -> usize {
    let forbidder = Forbidder::new(n, t);
    let base: Bits<W> = forbidder.initial();
    let mut best = 0usize;
    for g in (1..n).filter(|g| n.is_multiple_of(*g)) {
        if !base.contains(g) {
            continue;
        }
        let mut allowed: Bits<W> = Bits::EMPTY;
        for y in 1..n {
            if base.contains(y) && gcd(y as u64, n as u64) >= g as u64 {
                allowed.insert(y);
            }
        }
        forbidder.forbid(&mut allowed, &[], g);
        let mut chosen = vec![g];
        branch_and_bound(&forbidder, &allowed, &mut chosen, &mut best);
    }
    best
}

fn branch_and_bound<const W: usize>(
    forbidder: &Forbidder,
    allowed: &Bits<W>,
    chosen: &mut Vec<usize>,
    best: &mut usize,
) {
    *best = (*best).max(chosen.len());
    let mut cursor = allowed.first();
    while let Some(y) = cursor {
        if chosen.len() + allowed.len_from(y) <= *best {
            return;
        }
        let mut child = *allowed;
        child.clear_through(y);
        forbidder.forbid(&mut child, chosen, y);
        chosen.push(y);
        branch_and_bound(forbidder, &child, chosen, best);
        chosen.pop();
        cursor = allowed.next_from(y + 1);
    }
}

/// `s(n, t)` using dilation symmetry: multiplying by a unit maps any valid
/// set to one containing `g = gcd(x, n)` for its element `x` of smallest
/// such gcd, with every other element `y` having `gcd(y, n) >= g`. Only the
/// cardinality is returned, and only a plain count bound is used. This is
/// an independent cross-check of [`max_sidon_search`], not a certificate.
pub fn max_sidon_size_by_orbits(n: u64, t: u32) -> Result<usize> {
    check_search_modulus(n)?;
    check_strength(t)?;
    let nn = n as usize;
    Ok(dispatch_width!(nn, run_orbits(nn, t)))
}

/// One row of the comparison between exhaustive search and the explicit
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub n: u64,
    pub t: u32,
    pub bound: usize,
    pub exact: usize,
    pub equal: bool,
    pub complete: bool,
    pub witness: Vec<u64>,
    pub nodes: u64,
}

/// Runs [`max_sidon_search`] for every `2 <= n <= n_max` at strength `t` and
/// compares with [`lower_bound_size`]. Rows are computed in parallel and
/// returned in order of `n`.
pub fn bound_report(n_max: u64, t: u32, budget: SearchBudget) -> Result<Vec<BoundRow>> {
    check_search_modulus(n_max)?;
    check_strength(t)?;
    let mut rows: Vec<BoundRow> = (2..=n_max)
        .into_par_iter()
        .map(|n| {
            let r = max_sidon_search(n, t, budget)?;
            let bound = lower_bound_size(n, t)?;
            Ok(BoundRow {
                n,
                t,
                bound,
                exact: r.max_cardinality,
                equal: r.complete && r.max_cardinality == bound,
                complete: r.complete,
                witness: r.witness.elements().to_vec(),
                nodes: r.nodes_explored,
            })
        })
        .collect::<Result<_>>()?;
    rows.sort_by_key(|r| r.n);
    Ok(rows)
}

/// [`bound_report`] at strength 3.
pub fn conjecture_report(n_max: u64, budget: SearchBudget) -> Result<Vec<BoundRow>> {
    bound_report(n_max, 3, budget)
}
