//! Sidon-type sets in `Z_n`.
//!
//! A set `S` of nonzero residues has strength `t` when no non-trivial signed
//! sum `ε_1 x_1 + ... + ε_t x_t` (`ε_i ∈ {0, ±1}`, `x_i ∈ S`, repetition
//! allowed) vanishes mod `n`. A sum is trivial when all `ε_i` are zero or some
//! value occurs with both signs.
//!
//! For `t = 3` the non-trivial sums reduce to five families over
//! `a, b, c ∈ S`: `a`, `a + b`, `a - b` (`a != b`), `a + b - c`
//! (`c ∉ {a, b}`) and `a + b + c`.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

mod search;

pub use search::{
    bound_report, conjecture_report, max_sidon_search, max_sidon_size_by_orbits, BoundRow,
    SearchBudget, SidonSearchResult, MAX_SEARCH_MODULUS,
};

fn check_strength(t: u32) -> Result<()> {
    if (1..=3).contains(&t) {
        Ok(())
    } else {
        Err(Error::UnsupportedDegree(t))
    }
}

fn check_modulus(n: u64) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(Error::Modulus(n))
    }
}

/// A vanishing signed sum, kept as `(sign, value)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedSum {
    pub terms: Vec<(i8, u64)>,
}

impl SignedSum {
    fn new(terms: &[(i8, u64)]) -> Self {
        SignedSum {
            terms: terms.to_vec(),
        }
    }

    /// Integer value of the sum (before reduction mod `n`).
    pub fn value(&self) -> i128 {
        self.terms
            .iter()
            .map(|&(s, x)| i128::from(s) * i128::from(x))
            .sum()
    }
}

impl fmt::Display for SignedSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, &(sign, x)) in self.terms.iter().enumerate() {
            match (idx, sign < 0) {
                (0, true) => write!(f, "-{x}")?,
                (0, false) => write!(f, "{x}")?,
                (_, true) => write!(f, " - {x}")?,
                (_, false) => write!(f, " + {x}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SidonCheck {
    Holds,
    Violated(SignedSum),
}

impl SidonCheck {
    pub fn holds(&self) -> bool {
        matches!(self, SidonCheck::Holds)
    }

    pub fn witness(&self) -> Option<&SignedSum> {
        match self {
            SidonCheck::Holds => None,
            SidonCheck::Violated(w) => Some(w),
        }
    }
}

fn validate_elements(elements: &[u64], n: u64) -> Result<()> {
    check_modulus(n)?;
    let mut seen = std::collections::HashSet::with_capacity(elements.len());
    for &x in elements {
        if x == 0 || x >= n {
            return Err(Error::OutOfRange {
                element: x,
                modulus: n,
                max: n - 1,
            });
        }
        if !seen.insert(x) {
            return Err(Error::Duplicate(x));
        }
    }
    Ok(())
}

/// Checks the strength-`t` condition, returning the first vanishing
/// non-trivial sum found. Families are scanned as `a`, `a + b`, `a - b`,
/// `a + b - c`, `a + b + c`, each in lexicographic order of the sorted
/// elements.
pub fn is_sidon(elements: &[u64], n: u64, t: u32) -> Result<SidonCheck> {
    check_strength(t)?;
    validate_elements(elements, n)?;
    let mut xs = elements.to_vec();
    xs.sort_unstable();
    let n128 = u128::from(n);
    let zero = |v: u128| v.is_multiple_of(n128);
    let w = |terms: &[(i8, u64)]| Ok(SidonCheck::Violated(SignedSum::new(terms)));

    // a: impossible after range validation, kept for completeness.
    for &a in &xs {
        if zero(u128::from(a)) {
            return w(&[(1, a)]);
        }
    }
    if t < 2 {
        return Ok(SidonCheck::Holds);
    }
    for (i, &a) in xs.iter().enumerate() {
        for &b in &xs[i..] {
            if zero(u128::from(a) + u128::from(b)) {
                return w(&[(1, a), (1, b)]);
            }
        }
    }
    // a - b with a != b cannot vanish for distinct residues in [1, n-1].
    if t < 3 {
        return Ok(SidonCheck::Holds);
    }
    for (i, &a) in xs.iter().enumerate() {
        for &b in &xs[i..] {
            let s = u128::from(a) + u128::from(b);
            for &c in &xs {
                if c != a && c != b && zero(s + n128 - u128::from(c)) {
                    return w(&[(1, a), (1, b), (-1, c)]);
                }
            }
        }
    }
    for (i, &a) in xs.iter().enumerate() {
        for (j, &b) in xs.iter().enumerate().skip(i) {
            for &c in &xs[j..] {
                if zero(u128::from(a) + u128::from(b) + u128::from(c)) {
                    return w(&[(1, a), (1, b), (1, c)]);
                }
            }
        }
    }
    Ok(SidonCheck::Holds)
}

/// A set of residues certified Sidon-type of the given strength.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SidonSet {
    modulus: u64,
    strength: u32,
    elements: Vec<u64>,
}

impl SidonSet {
    /// Sorts the elements and checks the strength condition.
    pub fn new(mut elements: Vec<u64>, modulus: u64, strength: u32) -> Result<Self> {
        elements.sort_unstable();
        match is_sidon(&elements, modulus, strength)? {
            SidonCheck::Holds => Ok(SidonSet {
                modulus,
                strength,
                elements,
            }),
            SidonCheck::Violated(w) => Err(Error::NotSidon {
                modulus,
                strength,
                witness: w.to_string(),
            }),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn strength(&self) -> u32 {
        self.strength
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The first `k` elements, which form a Sidon-type set of the same
    /// strength.
    pub fn truncated(&self, k: usize) -> SidonSet {
        SidonSet {
            modulus: self.modulus,
            strength: self.strength,
            elements: self.elements[..k.min(self.len())].to_vec(),
        }
    }
}

impl fmt::Display for SidonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Smallest divisor of `n` congruent to 5 mod 6, if any.
pub fn smallest_divisor_5_mod_6(n: u64) -> Option<u64> {
    (5..=n).step_by(6).find(|p| n.is_multiple_of(*p))
}

/// Size of the explicit construction: `n - 1` for `t = 1`,
/// `⌊(n-1)/2⌋` for `t = 2`, and for `t = 3` `⌊n/4⌋` (`n` even),
/// `(p+1)n/(6p)` (`n` odd, `p` the smallest divisor `≡ 5 mod 6`) or
/// `⌊(n+1)/6⌋` (other odd `n`).
pub fn lower_bound_size(n: u64, t: u32) -> Result<usize> {
    check_modulus(n)?;
    check_strength(t)?;
    let size = match t {
        1 => n - 1,
        2 => (n - 1) / 2,
        _ if n.is_multiple_of(2) => n / 4,
        _ => match smallest_divisor_5_mod_6(n) {
            Some(p) => (p + 1) / 6 * (n / p),
            None => (n + 1) / 6,
        },
    };
    Ok(size as usize)
}

/// The explicit set realizing [`lower_bound_size`].
pub fn construct_bound_set(n: u64, t: u32) -> Result<SidonSet> {
    check_modulus(n)?;
    check_strength(t)?;
    let odd_below = |limit_num: u64, limit_den: u64| -> Vec<u64> {
        // odd x with x * den < num
        (1..n)
            .step_by(2)
            .filter(|&x| x * limit_den < limit_num)
            .collect()
    };
    let elements = match t {
        1 => (1..n).collect(),
        2 => (1..=(n - 1) / 2).collect(),
        _ if n.is_multiple_of(2) => odd_below(n, 2),
        _ => match smallest_divisor_5_mod_6(n) {
            Some(p) => {
                let q = (p - 5) / 6;
                let mut xs: Vec<u64> = (0..n / p)
                    .flat_map(|a| (0..=q).map(move |b| a * p + 2 * b + 1))
                    .collect();
                xs.sort_unstable();
                xs
            }
            None => odd_below(n, 3),
        },
    };
    let set = SidonSet::new(elements, n, t)?;
    debug_assert_eq!(set.len(), lower_bound_size(n, t)?);
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn holds(xs: &[u64], n: u64, t: u32) -> bool {
        is_sidon(xs, n, t).unwrap().holds()
    }

    #[test]
    fn is_sidon_examples() {
        assert!(holds(&[1, 3], 8, 3));
        assert!(holds(&[1, 3, 5], 12, 3));

        let r = is_sidon(&[1, 2], 6, 3).unwrap();
        let w = r.witness().unwrap();
        assert_eq!(w.to_string(), "1 + 1 - 2");
        assert_eq!(w.value(), 0);

        let r = is_sidon(&[2], 6, 3).unwrap();
        assert_eq!(r.witness().unwrap().to_string(), "2 + 2 + 2");
    }

    #[test]
    fn is_sidon_domain_errors() {
        assert!(matches!(
            is_sidon(&[0], 6, 3),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            is_sidon(&[6], 6, 3),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(is_sidon(&[1, 1], 6, 3), Err(Error::Duplicate(1))));
        assert!(matches!(
            is_sidon(&[1], 6, 4),
            Err(Error::UnsupportedDegree(4))
        ));
        assert!(matches!(is_sidon(&[], 1, 3), Err(Error::Modulus(1))));
    }

    #[test]
    fn strengths_one_and_two() {
        assert!(holds(&[1, 2, 3, 4, 5], 6, 1));
        assert!(!holds(&[1, 5], 6, 2));
        assert!(!holds(&[3], 6, 2));
        assert!(holds(&[1, 2], 6, 2));
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound_size(12, 3).unwrap(), 3);
        assert_eq!(lower_bound_size(25, 3).unwrap(), 5);
        assert_eq!(lower_bound_size(9, 3).unwrap(), 1);
        assert_eq!(lower_bound_size(11, 2).unwrap(), 5);
        assert_eq!(lower_bound_size(35, 3).unwrap(), 7);
        assert_eq!(lower_bound_size(2, 3).unwrap(), 0);
        assert_eq!(lower_bound_size(3, 3).unwrap(), 0);
    }

    #[test]
    fn constructions() {
        let e = |n, t| construct_bound_set(n, t).unwrap().elements().to_vec();
        assert_eq!(e(12, 3), [1, 3, 5]);
        assert_eq!(e(25, 3), [1, 6, 11, 16, 21]);
        assert_eq!(e(35, 3), [1, 6, 11, 16, 21, 26, 31]);
        assert_eq!(e(9, 3), [1]);
        assert_eq!(e(11, 3), [1, 3]);
        assert_eq!(e(15, 3), [1, 6, 11]);
        assert_eq!(e(7, 1), [1, 2, 3, 4, 5, 6]);
        assert_eq!(e(7, 2), [1, 2, 3]);
    }

    #[test]
    fn constructions_match_bound() {
        for n in 2..=500 {
            for t in 1..=3 {
                let s = construct_bound_set(n, t).unwrap();
                assert_eq!(s.len(), lower_bound_size(n, t).unwrap(), "n={n} t={t}");
            }
        }
    }
}
