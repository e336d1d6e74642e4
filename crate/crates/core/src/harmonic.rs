//! Explicit bases of homogeneous harmonic polynomials of degree 1, 2 and 3,
//! their column sums over a design matrix, and the two design checks built
//! on them.
//!
//! A finite set of unit vectors is a spherical `t`-design exactly when every
//! basis harmonic of degree `1..=t` sums to zero over the set. The bases are
//!
//! * degree 1: `x_i`
//! * degree 2: `x_i x_j` (`i < j`) then `x_i^2 - x_{i+1}^2`
//! * degree 3: `x_i x_j x_k` (`i < j < k`) then `x_i^3 - 3 x_i x_j^2` (`i != j`)
//!
//! [`moment_check`] is an independent route to the same verdict through raw
//! monomial sums.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::design::{Compensated, DesignMatrix};
use crate::error::{Error, Result};

/// One monomial with an exact integer coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub coefficient: i64,
    /// One exponent per coordinate, `d + 1` entries.
    pub exponents: Vec<u32>,
}

impl Term {
    fn new(coefficient: i64, rows: usize, factors: &[usize]) -> Self {
        let mut exponents = vec![0; rows];
        for &i in factors {
            exponents[i] += 1;
        }
        Term {
            coefficient,
            exponents,
        }
    }

    /// Variable indices with multiplicity, e.g. `x0 x1^2 -> [0, 1, 1]`.
    fn factors(&self) -> Vec<usize> {
        self.exponents
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarmonicPolynomial {
    dimension: usize,
    degree: u32,
    terms: Vec<Term>,
    #[serde(skip)]
    factors: Vec<Vec<usize>>,
}

impl HarmonicPolynomial {
    fn from_terms(dimension: usize, degree: u32, terms: Vec<Term>) -> Self {
        let factors = terms.iter().map(Term::factors).collect();
        HarmonicPolynomial {
            dimension,
            degree,
            terms,
            factors,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.exponents.iter().sum::<u32>() == self.degree)
    }

    /// The Laplacian, computed symbolically on exponent vectors. Zero
    /// coefficients are dropped, so a harmonic polynomial maps to an empty map.
    pub fn laplacian(&self) -> BTreeMap<Vec<u32>, i64> {
        let mut out: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for term in &self.terms {
            for (i, &e) in term.exponents.iter().enumerate() {
                if e >= 2 {
                    let mut exps = term.exponents.clone();
                    exps[i] -= 2;
                    *out.entry(exps).or_default() += term.coefficient * i64::from(e * (e - 1));
                }
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn is_harmonic(&self) -> bool {
        self.laplacian().is_empty()
    }

    /// Value at a single point.
    pub fn evaluate(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .zip(&self.factors)
            .map(|(t, f)| t.coefficient as f64 * monomial(point, f))
            .sum()
    }
}

impl fmt::Display for HarmonicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, term) in self.terms.iter().enumerate() {
            let c = term.coefficient;
            match (idx, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "{}", monomial_name(&term.exponents))?;
        }
        Ok(())
    }
}

fn monomial_name(exponents: &[u32]) -> String {
    let parts: Vec<String> = exponents
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{i}")
            } else {
                format!("x{i}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

/// Product of the selected coordinates. Factors are multiplied in order of
/// increasing magnitude so the value does not depend on how coordinates are
/// labelled.
#[inline]
fn monomial(point: &[f64], factors: &[usize]) -> f64 {
    let mut vals = [0.0f64; 3];
    let k = factors.len().min(3);
    for (slot, &i) in vals.iter_mut().zip(factors) {
        *slot = point[i];
    }
    let vals = &mut vals[..k];
    vals.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let mut p = vals.iter().product::<f64>();
    for &i in factors.iter().skip(3) {
        p *= point[i];
    }
    p
}

fn check_degree(s: u32) -> Result<()> {
    if (1..=3).contains(&s) {
        Ok(())
    } else {
        Err(Error::UnsupportedDegree(s))
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim Harm_{d+1}(s) = C(s+d, d) - C(s+d-2, d)`.
pub fn harm_dim(d: usize, s: u32) -> Result<u64> {
    if d == 0 {
        return Err(Error::Dimension(0));
    }
    check_degree(s)?;
    let (d, s) = (d as u64, u64::from(s));
    Ok(binomial(s + d, d) - binomial(s + d - 2, d))
}

/// The basis `Φ_s` of degree-`s` harmonics on `R^{d+1}`, monomial family
/// first, each family in lexicographic order of its index tuple.
pub fn phi_basis(d: usize, s: u32) -> Result<Vec<HarmonicPolynomial>> {
    if d == 0 {
        return Err(Error::Dimension(0));
    }
    check_degree(s)?;
    let rows = d + 1;
    let poly = |terms: Vec<Term>| HarmonicPolynomial::from_terms(d, s, terms);
    let mut out = Vec::new();
    match s {
        1 => {
            for i in 0..rows {
                out.push(poly(vec![Term::new(1, rows, &[i])]));
            }
        }
        2 => {
            for i in 0..rows {
                for j in i + 1..rows {
                    out.push(poly(vec![Term::new(1, rows, &[i, j])]));
                }
            }
            for i in 0..d {
                out.push(poly(vec![
                    Term::new(1, rows, &[i, i]),
                    Term::new(-1, rows, &[i + 1, i + 1]),
                ]));
            }
        }
        _ => {
            for i in 0..rows {
                for j in i + 1..rows {
                    for k in j + 1..rows {
                        out.push(poly(vec![Term::new(1, rows, &[i, j, k])]));
                    }
                }
            }
            for i in 0..rows {
                for j in (0..rows).filter(|&j| j != i) {
                    out.push(poly(vec![
                        Term::new(1, rows, &[i, i, i]),
                        Term::new(-3, rows, &[i, j, j]),
                    ]));
                }
            }
        }
    }
    Ok(out)
}

/// `f(U) = Σ_k f(u_k)`, accumulated over columns in index order with
/// compensated summation.
pub fn evaluate_sum(f: &HarmonicPolynomial, u: &DesignMatrix) -> Result<f64> {
    if f.dimension != u.dimension() {
        return Err(Error::Shape(format!(
            "polynomial in {} variables applied to points in R^{}",
            f.dimension + 1,
            u.rows()
        )));
    }
    Ok(column_sum(u, |col| f.evaluate(col)))
}

fn column_sum(u: &DesignMatrix, mut value: impl FnMut(&[f64]) -> f64) -> f64 {
    let mut col = vec![0.0; u.rows()];
    let mut acc = Compensated::default();
    for k in 0..u.size() {
        for (i, slot) in col.iter_mut().enumerate() {
            *slot = u.get(i, k);
        }
        acc.add(value(&col));
    }
    acc.total()
}

/// Outcome of a design check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub strength: u32,
    /// Largest absolute residual per checked degree.
    pub max_residual_by_degree: BTreeMap<u32, f64>,
    pub norm_max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// The polynomial (or monomial) with the largest residual overall.
    pub worst_polynomial: Option<String>,
    /// Every individual residual, in evaluation order.
    #[serde(skip)]
    pub residuals: Vec<f64>,
}

impl VerificationReport {
    pub fn max_residual(&self) -> f64 {
        self.max_residual_by_degree
            .values()
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn residual(&self, degree: u32) -> Option<f64> {
        self.max_residual_by_degree.get(&degree).copied()
    }

    fn assemble(
        strength: u32,
        tolerance: f64,
        norm_max_deviation: f64,
        checks: Vec<(u32, String, f64)>,
    ) -> Self {
        let mut by_degree: BTreeMap<u32, f64> = (1..=strength).map(|s| (s, 0.0)).collect();
        let mut worst: Option<(f64, String)> = None;
        let mut residuals = Vec::with_capacity(checks.len());
        for (degree, label, r) in checks {
            residuals.push(r);
            let slot = by_degree.entry(degree).or_default();
            // NaN compares false; treat it as the worst possible residual.
            if r > *slot || r.is_nan() {
                *slot = if r.is_nan() { f64::INFINITY } else { r };
            }
            let r = if r.is_nan() { f64::INFINITY } else { r };
            if worst.as_ref().is_none_or(|(w, _)| r > *w) {
                worst = Some((r, label));
            }
        }
        let passed = norm_max_deviation <= tolerance && by_degree.values().all(|&r| r <= tolerance);
        VerificationReport {
            strength,
            max_residual_by_degree: by_degree,
            norm_max_deviation,
            tolerance,
            passed,
            worst_polynomial: worst.map(|(_, label)| label),
            residuals,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "strength {}: {} (tolerance {:.3e})",
            self.strength,
            if self.passed { "PASSED" } else { "FAILED" },
            self.tolerance
        )?;
        writeln!(
            f,
            "  column norm deviation: {:.3e}",
            self.norm_max_deviation
        )?;
        for (degree, r) in &self.max_residual_by_degree {
            writeln!(f, "  degree {degree} max residual: {r:.3e}")?;
        }
        if let Some(w) = &self.worst_polynomial {
            write!(f, "  worst: {w}")?;
        }
        Ok(())
    }
}

/// Checks unit column norms and `|f(U)| <= tolerance` for every `f` in
/// `Φ_1 ∪ ... ∪ Φ_t`.
pub fn verify_design(u: &DesignMatrix, t: u32, tolerance: f64) -> Result<VerificationReport> {
    check_degree(t)?;
    let mut basis = Vec::new();
    for s in 1..=t {
        basis.extend(phi_basis(u.dimension(), s)?);
    }
    let checks: Vec<(u32, String, f64)> = basis
        .par_iter()
        .map(|f| {
            let r = column_sum(u, |col| f.evaluate(col)).abs();
            (f.degree(), f.to_string(), r)
        })
        .collect();
    Ok(VerificationReport::assemble(
        t,
        tolerance,
        u.norm_max_deviation(),
        checks,
    ))
}

/// All monomials of degree `1..=t` as sorted index tuples.
fn monomials(rows: usize, t: u32) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..rows {
        out.push(vec![i]);
    }
    if t >= 2 {
        for i in 0..rows {
            for j in i..rows {
                out.push(vec![i, j]);
            }
        }
    }
    if t >= 3 {
        for i in 0..rows {
            for j in i..rows {
                for k in j..rows {
                    out.push(vec![i, j, k]);
                }
            }
        }
    }
    out
}

/// Sphere-moment check: degree-1 and degree-3 monomial sums vanish, mixed
/// degree-2 sums vanish and `Σ_k u_ik^2 = n / (d+1)` for every `i`.
pub fn moment_check(u: &DesignMatrix, t: u32, tolerance: f64) -> Result<VerificationReport> {
    check_degree(t)?;
    let rows = u.rows();
    let diagonal = u.size() as f64 / rows as f64;
    let checks: Vec<(u32, String, f64)> = monomials(rows, t)
        .par_iter()
        .map(|factors| {
            let sum = column_sum(u, |col| monomial(col, factors));
            let expected = if factors.len() == 2 && factors[0] == factors[1] {
                diagonal
            } else {
                0.0
            };
            let mut exps = vec![0u32; rows];
            for &i in factors {
                exps[i] += 1;
            }
            let label = monomial_name(&exps);
            let label = if expected == 0.0 {
                label
            } else {
                format!("{label} - n/(d+1)")
            };
            (factors.len() as u32, label, (sum - expected).abs())
        })
        .collect();
    Ok(VerificationReport::assemble(
        t,
        tolerance,
        u.norm_max_deviation(),
        checks,
    ))
}
