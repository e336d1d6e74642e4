//! Which sizes of 3-designs exist on `S^d`, and how to build them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compose::{double_antipodal, lift_3_3, merge_6_1, merge_6_3, octahedron};
use crate::design::{default_tolerance, DesignMatrix};
use crate::error::{Error, Result};
use crate::harmonic::verify_design;
use crate::regular::build_regular;
use crate::sidon::{
    construct_bound_set, lower_bound_size, max_sidon_search, SearchBudget, SidonSet,
};

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// The lower bound `N_d(t) = C(⌊t/2⌋+d, d) + C(⌊(t-1)/2⌋+d, d)` on the size
/// of a `t`-design on `S^d`.
pub fn dgs_bound(d: usize, t: u32) -> u128 {
    let d = d as u64;
    let t = u64::from(t);
    binomial(t / 2 + d, d) + binomial(t.saturating_sub(1) / 2 + d, d)
}

/// Conjectured smallest size above which every `n` admits a 3-design on
/// `S^d`: 10 for `d = 2`, 14 for `d = 4`, otherwise the largest even integer
/// not exceeding `5d/2 + 3`.
pub fn conjectured_m_prime(d: usize) -> usize {
    match d {
        2 => 10,
        4 => 14,
        _ => {
            let x = (5 * d + 6) / 2;
            x - x % 2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    ProvenInfeasible,
    Constructible,
    Open,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::ProvenInfeasible => "infeasible",
            Status::Constructible => "constructible",
            Status::Open => "open",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub status: Status,
    pub reason: String,
}

/// Odd `(d, n)` above the threshold that no construction reaches.
const EXCEPTIONS: [(usize, usize); 2] = [(2, 9), (4, 13)];

/// Status of 3-designs of size `n` on `S^d`.
pub fn classify(d: usize, n: usize) -> Feasibility {
    let bound = 2 * d + 2;
    let (status, reason) = if n < bound {
        (
            Status::ProvenInfeasible,
            format!("below N_{d}(3) = {bound}"),
        )
    } else if n.is_multiple_of(2) {
        (Status::Constructible, format!("even n >= {bound}"))
    } else if 2 * n >= 5 * (d + 1) && !EXCEPTIONS.contains(&(d, n)) {
        (
            Status::Constructible,
            format!("odd n >= 5(d+1)/2 = {}", 5.0 * (d + 1) as f64 / 2.0),
        )
    } else {
        let mut reason = format!(
            "open; no construction known, conjectured threshold M'_{d}(3) = {}",
            conjectured_m_prime(d)
        );
        if (d, n) == (2, 7) {
            reason.push_str("; nonexistence of a 7-point 3-design on S^2 has been reported");
        }
        (Status::Open, reason)
    };
    Feasibility { status, reason }
}

/// A construction plan for one design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipe {
    Octahedron {
        d: usize,
    },
    Regular {
        set: SidonSet,
        strength: u32,
    },
    Lift33 {
        base: Box<Recipe>,
    },
    Merge61 {
        d1: usize,
        d2: usize,
        a: Box<Recipe>,
        c: Box<Recipe>,
    },
    Merge63 {
        d1: usize,
        d2: usize,
        a: Box<Recipe>,
        c: Box<Recipe>,
    },
    Double {
        base: Box<Recipe>,
    },
}

impl Recipe {
    pub fn dimension(&self) -> usize {
        match self {
            Recipe::Octahedron { d } => *d,
            Recipe::Regular { set, .. } => 2 * set.len() - 1,
            Recipe::Lift33 { base } => base.dimension() + 1,
            Recipe::Merge61 { d1, d2, .. } => d1 + d2 - 1,
            Recipe::Merge63 { d1, d2, .. } => d1 + d2,
            Recipe::Double { base } => base.dimension(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Recipe::Octahedron { d } => 2 * d + 2,
            Recipe::Regular { set, .. } => set.modulus() as usize,
            Recipe::Lift33 { base } | Recipe::Double { base } => 2 * base.size(),
            Recipe::Merge61 { a, c, .. } => a.size() + c.size(),
            Recipe::Merge63 { a, c, .. } => 2 * a.size() + c.size(),
        }
    }

    /// Builds the design. Every construction re-checks its own
    /// preconditions.
    pub fn execute(&self) -> Result<DesignMatrix> {
        let u = match self {
            Recipe::Octahedron { d } => octahedron(*d)?,
            Recipe::Regular { set, strength } => build_regular(set, *strength)?,
            Recipe::Lift33 { base } => lift_3_3(&base.execute()?)?,
            Recipe::Double { base } => double_antipodal(&base.execute()?)?,
            Recipe::Merge61 { d1, d2, a, c } => merge_6_1(&a.execute()?, &c.execute()?, *d1, *d2)?,
            Recipe::Merge63 { d1, d2, a, c } => merge_6_3(&a.execute()?, &c.execute()?, *d1, *d2)?,
        };
        Ok(u.with_provenance(self.to_string()))
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Octahedron { d } => write!(f, "octahedron(d={d})"),
            Recipe::Regular { set, strength } => {
                write!(f, "regular(S={set} mod {}, t={strength})", set.modulus())
            }
            Recipe::Lift33 { base } => write!(f, "lift33[{base}]"),
            Recipe::Double { base } => write!(f, "double[{base}]"),
            Recipe::Merge61 { d1, d2, a, c } => write!(
                f,
                "merge61(d1={d1}, d2={d2}, n1={}, n2={})[A={a}; C={c}]",
                a.size(),
                c.size()
            ),
            Recipe::Merge63 { d1, d2, a, c } => write!(
                f,
                "merge63(d1={d1}, d2={d2}, n1={}, n2={})[A={a}; C={c}]",
                a.size(),
                c.size()
            ),
        }
    }
}

fn regular(elements: Vec<u64>, n: usize, strength: u32) -> Result<Recipe> {
    Ok(Recipe::Regular {
        set: SidonSet::new(elements, n as u64, strength)?,
        strength,
    })
}

/// `{1, 3, ..., d}` mod `n`, strength 3, for odd `d` and even `n >= 2d + 2`.
fn odd_regular(d: usize, n: usize) -> Result<Recipe> {
    regular((1..=d as u64).step_by(2).collect(), n, 3)
}

/// `{1, ..., e}` mod `n`, strength 2, for `n > 2e`.
fn initial_regular(e: usize, n: usize) -> Result<Recipe> {
    regular((1..=e as u64).collect(), n, 2)
}

fn pentagon() -> Result<Recipe> {
    regular(vec![1], 5, 3)
}

/// Picks a construction for a constructible `(d, n)`; the first matching
/// rule wins.
pub fn plan(d: usize, n: usize) -> Result<Recipe> {
    let feasibility = classify(d, n);
    if d == 0 {
        return Err(Error::Dimension(0));
    }
    if feasibility.status != Status::Constructible {
        return Err(Error::NotConstructible {
            d,
            n,
            reason: feasibility.reason,
        });
    }
    let odd_d = d % 2 == 1;
    let recipe = if n == 2 * d + 2 {
        Recipe::Octahedron { d }
    } else if n.is_multiple_of(2) && odd_d {
        odd_regular(d, n)?
    } else if n.is_multiple_of(2) {
        Recipe::Lift33 {
            base: Box::new(initial_regular(d / 2, n / 2)?),
        }
    } else if odd_d && lower_bound_size(n as u64, 3)? >= d.div_ceil(2) {
        let set = construct_bound_set(n as u64, 3)?.truncated(d.div_ceil(2));
        Recipe::Regular { set, strength: 3 }
    } else if odd_d && n >= 2 * d + 7 {
        Recipe::Merge61 {
            d1: 2,
            d2: d - 1,
            a: Box::new(odd_regular(d, n - 5)?),
            c: Box::new(pentagon()?),
        }
    } else if n >= 2 * d + 7 {
        Recipe::Merge63 {
            d1: 2,
            d2: d - 2,
            a: Box::new(initial_regular(d / 2, (n - 5) / 2)?),
            c: Box::new(pentagon()?),
        }
    } else {
        return Err(Error::Internal(format!(
            "({d}, {n}) is classified constructible but no rule applies"
        )));
    };
    debug_assert_eq!((recipe.dimension(), recipe.size()), (d, n));
    Ok(recipe)
}

/// Plans, builds and verifies a 3-design of size `n` on `S^d`.
pub fn build(d: usize, n: usize) -> Result<DesignMatrix> {
    let recipe = plan(d, n)?;
    let u = recipe.execute()?;
    if (u.dimension(), u.size()) != (d, n) {
        return Err(Error::Internal(format!(
            "{recipe} produced {} points on S^{}",
            u.size(),
            u.dimension()
        )));
    }
    let report = verify_design(&u, 3, default_tolerance(n))?;
    if !report.passed {
        return Err(Error::Internal(format!(
            "{recipe} failed verification: {report}"
        )));
    }
    Ok(u)
}

/// Sizes of 3-designs on `S^d` for one dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub d: usize,
    #[serde(rename = "N")]
    pub bound: usize,
    /// E.g. `"6, 8, ≥ 10"`.
    pub sizes: String,
    #[serde(skip)]
    pub constructible: Vec<usize>,
    #[serde(skip)]
    pub threshold: usize,
}

/// Constructible sizes for `1 <= d <= d_max`, scanning `n <= 3d + 10`.
pub fn results_table(d_max: usize) -> Vec<TableRow> {
    (1..=d_max)
        .map(|d| {
            let bound = 2 * d + 2;
            let scan: Vec<usize> = (bound..=3 * d + 10).collect();
            let threshold = scan
                .iter()
                .rev()
                .find(|&&n| classify(d, n).status != Status::Constructible)
                .map_or(bound, |n| n + 1);
            let listed: Vec<usize> = scan
                .iter()
                .copied()
                .filter(|&n| n < threshold && classify(d, n).status == Status::Constructible)
                .collect();
            let mut parts: Vec<String> = listed.iter().map(usize::to_string).collect();
            parts.push(format!("≥ {threshold}"));
            let constructible = scan
                .into_iter()
                .filter(|&n| classify(d, n).status == Status::Constructible)
                .collect();
            TableRow {
                d,
                bound,
                sizes: parts.join(", "),
                constructible,
                threshold,
            }
        })
        .collect()
}

/// [`results_table`], building and verifying every constructible entry.
pub fn results_table_checked(d_max: usize) -> Result<Vec<TableRow>> {
    let rows = results_table(d_max);
    for row in &rows {
        for &n in &row.constructible {
            build(row.d, n)?;
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub d: usize,
    pub n: usize,
    /// `s(n, 3)`, or the best found if the search was cut short.
    pub sidon_max: usize,
    /// `(d + 1) / 2`, the set size a regular design would need.
    pub needed: usize,
    /// True when a regular design of this size is ruled out.
    pub excluded: bool,
    pub complete: bool,
}

/// For odd `d <= d_max` and odd `n` with `2d + 2 <= n < 5(d+1)/2`, confirms
/// by exhaustive search that no Sidon-type set of strength 3 mod `n` has
/// `(d+1)/2` elements, so no regular 3-design of that size exists.
pub fn regular_nonexistence_scan(d_max: usize, budget: SearchBudget) -> Result<Vec<ScanRow>> {
    if d_max < 3 || d_max.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "d_max must be odd and at least 3, got {d_max}"
        )));
    }
    let mut cache = std::collections::BTreeMap::new();
    let mut rows = Vec::new();
    for d in (3..=d_max).step_by(2) {
        for n in (2 * d + 2..)
            .filter(|n| n % 2 == 1)
            .take_while(|n| 2 * n < 5 * (d + 1))
        {
            if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(n) {
                let r = max_sidon_search(n as u64, 3, budget)?;
                e.insert((r.max_cardinality, r.complete));
            }
            let (sidon_max, complete) = cache[&n];
            let needed = d.div_ceil(2);
            rows.push(ScanRow {
                d,
                n,
                sidon_max,
                needed,
                excluded: complete && sidon_max < needed,
                complete,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(dgs_bound(2, 3), 6);
        assert_eq!(dgs_bound(23, 11), 196_560);
        for d in 1..30 {
            assert_eq!(dgs_bound(d, 1), 2);
            assert_eq!(dgs_bound(d, 3), 2 * d as u128 + 2);
        }
        assert_eq!(dgs_bound(1, 5), 6);
    }

    #[test]
    fn m_prime() {
        assert_eq!(conjectured_m_prime(3), 10);
        assert_eq!(conjectured_m_prime(2), 10);
        assert_eq!(conjectured_m_prime(5), 14);
        assert_eq!(conjectured_m_prime(4), 14);
        assert_eq!(conjectured_m_prime(9), 24);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(3, 7).status, Status::ProvenInfeasible);
        assert_eq!(classify(2, 9).status, Status::Open);
        assert_eq!(classify(5, 15).status, Status::Constructible);
        assert_eq!(classify(9, 23).status, Status::Open);
        assert_eq!(classify(9, 25).status, Status::Constructible);
        assert!(classify(2, 7).reason.contains("reported"));
        assert!(classify(3, 6).reason.contains("below N_3(3) = 8"));
        for n in 4..40 {
            assert_eq!(classify(1, n).status, Status::Constructible);
        }
    }

    #[test]
    fn plan_examples() {
        assert_eq!(plan(4, 10).unwrap(), Recipe::Octahedron { d: 4 });
        match plan(3, 11).unwrap() {
            Recipe::Regular { set, strength: 3 } => assert_eq!(set.elements(), [1, 3]),
            r => panic!("{r}"),
        }
        match plan(7, 21).unwrap() {
            Recipe::Merge61 { d1: 2, d2: 6, a, c } => assert_eq!((a.size(), c.size()), (16, 5)),
            r => panic!("{r}"),
        }
        match plan(6, 19).unwrap() {
            Recipe::Merge63 { d1: 2, d2: 4, a, c } => assert_eq!((a.size(), c.size()), (7, 5)),
            r => panic!("{r}"),
        }
        assert!(matches!(plan(2, 9), Err(Error::NotConstructible { .. })));
        assert!(matches!(plan(3, 6), Err(Error::NotConstructible { .. })));
    }

    #[test]
    fn build_examples() {
        let u = build(2, 8).unwrap();
        assert!(u
            .provenance()
            .unwrap()
            .starts_with("lift33[regular(S={1} mod 4"));
        let u = build(5, 15).unwrap();
        assert_eq!(u.provenance(), Some("regular(S={1,6,11} mod 15, t=3)"));
        let u = build(1, 4).unwrap();
        assert_eq!((u.dimension(), u.size()), (1, 4));
        let u = build(2, 11).unwrap();
        assert!(u.provenance().unwrap().starts_with("merge63(d1=2, d2=0"));
    }

    #[test]
    fn table_rows() {
        let rows = results_table(9);
        let sizes: Vec<&str> = rows.iter().map(|r| r.sizes.as_str()).collect();
        assert_eq!(sizes[0], "≥ 4");
        assert_eq!(sizes[1], "6, 8, ≥ 10");
        assert_eq!(sizes[4], "12, ≥ 14");
        assert_eq!(sizes[7], "18, 20, ≥ 22");
        assert_eq!(sizes[8], "20, 22, ≥ 24");
        assert_eq!(rows[8].bound, 20);
    }

    #[test]
    fn small_scan() {
        let rows = regular_nonexistence_scan(7, SearchBudget::unlimited()).unwrap();
        assert!(rows.iter().all(|r| r.excluded));
        let row = |d, n| {
            rows.iter()
                .find(|r| (r.d, r.n) == (d, n))
                .unwrap()
                .sidon_max
        };
        assert_eq!(row(3, 9), 1);
        assert_eq!(row(5, 13), 2);
        assert!(regular_nonexistence_scan(4, SearchBudget::unlimited()).is_err());
    }
}
