//! Block-matrix constructions of 3-designs from smaller designs.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::design::{default_tolerance, DesignMatrix};
use crate::error::{Error, Result};
use crate::harmonic::verify_design;

/// Slack for the "regular" block-norm check, in machine epsilons.
const BLOCK_NORM_EPS: f64 = 8.0;

/// Squared coefficients of a block construction. `beta_sq` is absent for the
/// lift, `delta_sq` for the two-block merge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeCoefficients {
    pub alpha_sq: f64,
    pub beta_sq: Option<f64>,
    pub delta_sq: Option<f64>,
}

impl MergeCoefficients {
    pub fn alpha(&self) -> f64 {
        self.alpha_sq.sqrt()
    }

    pub fn beta(&self) -> f64 {
        self.beta_sq.unwrap_or(0.0).sqrt()
    }

    pub fn delta(&self) -> f64 {
        self.delta_sq.unwrap_or(0.0).sqrt()
    }
}

fn ratio(num: i128, den: i128) -> f64 {
    num as f64 / den as f64
}

/// `α² = d/(d+1)`, `δ² = 1/(d+1)`.
pub fn lift_coefficients(d: usize) -> MergeCoefficients {
    let d = d as i128;
    MergeCoefficients {
        alpha_sq: ratio(d, d + 1),
        beta_sq: None,
        delta_sq: Some(ratio(1, d + 1)),
    }
}

/// `α² = 1 - d₂n₂/(d₁n₁)`, `β² = 1 + n₂/n₁`; infeasible when `d₁n₁ < d₂n₂`.
pub fn merge61_coefficients(
    d1: usize,
    d2: usize,
    n1: usize,
    n2: usize,
) -> Result<MergeCoefficients> {
    let (d1, d2, n1, n2) = (d1 as i128, d2 as i128, n1 as i128, n2 as i128);
    if n1 == 0 || d1 == 0 {
        return Err(Error::Precondition("d1 and n1 must be positive".into()));
    }
    if d1 * n1 < d2 * n2 {
        return Err(Error::Infeasible(format!(
            "d1*n1 = {} < d2*n2 = {}",
            d1 * n1,
            d2 * n2
        )));
    }
    Ok(MergeCoefficients {
        alpha_sq: ratio(d1 * n1 - d2 * n2, d1 * n1),
        beta_sq: Some(ratio(n1 + n2, n1)),
        delta_sq: None,
    })
}

/// With `d = d₁ + d₂`:
/// `α² = d/(d+1) (1 - (d₂+1)n₂/(2d₁n₁))`, `β² = d/(d+1) (1 + n₂/(2n₁))`,
/// `δ² = 1/(d+1) (1 + n₂/(2n₁))`; infeasible when `2d₁n₁ < (d₂+1)n₂`.
pub fn merge63_coefficients(
    d1: usize,
    d2: usize,
    n1: usize,
    n2: usize,
) -> Result<MergeCoefficients> {
    let (d1, d2, n1, n2) = (d1 as i128, d2 as i128, n1 as i128, n2 as i128);
    if n1 == 0 || d1 == 0 {
        return Err(Error::Precondition("d1 and n1 must be positive".into()));
    }
    if 2 * d1 * n1 < (d2 + 1) * n2 {
        return Err(Error::Infeasible(format!(
            "2*d1*n1 = {} < (d2+1)*n2 = {}",
            2 * d1 * n1,
            (d2 + 1) * n2
        )));
    }
    let d = d1 + d2;
    Ok(MergeCoefficients {
        alpha_sq: ratio(d * (2 * d1 * n1 - (d2 + 1) * n2), (d + 1) * 2 * d1 * n1),
        beta_sq: Some(ratio(d * (2 * n1 + n2), (d + 1) * 2 * n1)),
        delta_sq: Some(ratio(2 * n1 + n2, (d + 1) * 2 * n1)),
    })
}

/// `(I -I)`: the `2d+2` points `±e_i`, positive copies first.
pub fn octahedron(d: usize) -> Result<DesignMatrix> {
    if d == 0 {
        return Err(Error::Dimension(0));
    }
    let rows = d + 1;
    let n = 2 * rows;
    let mut entries = vec![0.0; rows * n];
    for i in 0..rows {
        entries[i * n + i] = 1.0;
        entries[i * n + rows + i] = -1.0;
    }
    Ok(DesignMatrix::new(d, n, 3, entries)?.with_provenance(format!("octahedron d={d}")))
}

/// The regular `n`-gon on `S^1`, points `(cos 2πk/n, sin 2πk/n)`, `k = 0..n`.
/// Claimed strength is `min(3, n - 1)`.
pub fn polygon(n: usize) -> Result<DesignMatrix> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "a polygon needs at least 2 vertices, got {n}"
        )));
    }
    let (mut c, mut s) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for k in 0..n {
        let (sin, cos) = (TAU * k as f64 / n as f64).sin_cos();
        c.push(cos);
        s.push(sin);
    }
    let mut entries = c;
    entries.extend(s);
    let t = (n as u32 - 1).min(3);
    Ok(DesignMatrix::new(1, n, t, entries)?.with_provenance(format!("polygon n={n}")))
}

fn require_design(u: &DesignMatrix, t: u32, what: &str) -> Result<()> {
    let report = verify_design(u, t, default_tolerance(u.size()))?;
    if report.passed {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{what} is not a {t}-design (max residual {:.3e})",
            report.max_residual()
        )))
    }
}

/// Checks that every column of `a` has squared norm `top / a.rows()` over
/// its first `top` rows.
fn require_block_regular(a: &DesignMatrix, top: usize) -> Result<()> {
    let target = top as f64 / a.rows() as f64;
    let tol = BLOCK_NORM_EPS * f64::EPSILON;
    for k in 0..a.size() {
        let sq: f64 = (0..top).map(|i| a.get(i, k).powi(2)).sum();
        if (sq - target).abs() > tol {
            return Err(Error::Precondition(format!(
                "column {k} has top-block squared norm {sq} instead of {target}"
            )));
        }
    }
    Ok(())
}

fn provenance(u: &DesignMatrix) -> &str {
    u.provenance().unwrap_or("external")
}

/// `(A -A)` for a design `A` of even strength `t`, claimed strength `t + 1`.
pub fn double_antipodal(a: &DesignMatrix) -> Result<DesignMatrix> {
    let t = a.strength();
    if !t.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "doubling needs even strength, got {t}"
        )));
    }
    require_design(a, t, "A")?;
    let n = a.size();
    let mut entries = Vec::with_capacity(2 * a.entries().len());
    for i in 0..a.rows() {
        let row = a.row(i);
        entries.extend_from_slice(row);
        entries.extend(row.iter().map(|v| -v));
    }
    Ok(DesignMatrix::new(a.dimension(), 2 * n, t + 1, entries)?
        .with_provenance(format!("double({})", provenance(a))))
}

/// `(αA -αA; δJ -δJ)` on `S^d` from a 2-design `A` on `S^{d-1}`.
pub fn lift_3_3(a: &DesignMatrix) -> Result<DesignMatrix> {
    require_design(a, 2, "A")?;
    let d = a.dimension() + 1;
    let co = lift_coefficients(d);
    let (alpha, delta) = (co.alpha(), co.delta());
    let n1 = a.size();
    let mut entries = Vec::with_capacity((d + 1) * 2 * n1);
    for i in 0..a.rows() {
        let row = a.row(i);
        entries.extend(row.iter().map(|v| alpha * v));
        entries.extend(row.iter().map(|v| -alpha * v));
    }
    entries.extend(std::iter::repeat_n(delta, n1));
    entries.extend(std::iter::repeat_n(-delta, n1));
    Ok(DesignMatrix::new(d, 2 * n1, 3, entries)?
        .with_provenance(format!("lift({})", provenance(a))))
}

fn check_even(name: &str, v: usize, allow_zero: bool) -> Result<()> {
    if !v.is_multiple_of(2) || (v == 0 && !allow_zero) {
        return Err(Error::Precondition(format!(
            "{name} must be an even {} integer, got {v}",
            if allow_zero {
                "non-negative"
            } else {
                "positive"
            }
        )));
    }
    Ok(())
}

/// `(αA₁ C; βA₂ 0)` on `S^d`, `d = d₁ + d₂ - 1`, where `A` is a 3-design on
/// `S^d` with top-block squared column norms `d₁/(d+1)` split into its top
/// `d₁` rows `A₁` and bottom `d₂` rows `A₂`, and `C` is a 3-design on
/// `S^{d₁-1}`.
pub fn merge_6_1(a: &DesignMatrix, c: &DesignMatrix, d1: usize, d2: usize) -> Result<DesignMatrix> {
    check_even("d1", d1, false)?;
    check_even("d2", d2, false)?;
    let d = d1 + d2 - 1;
    if a.dimension() != d {
        return Err(Error::Precondition(format!(
            "A must live on S^{d}, got S^{}",
            a.dimension()
        )));
    }
    if c.dimension() + 1 != d1 {
        return Err(Error::Precondition(format!(
            "C must live on S^{}, got S^{}",
            d1 - 1,
            c.dimension()
        )));
    }
    let (n1, n2) = (a.size(), c.size());
    let co = merge61_coefficients(d1, d2, n1, n2)?;
    require_block_regular(a, d1)?;
    require_design(a, 3, "A")?;
    require_design(c, 3, "C")?;
    let (alpha, beta) = (co.alpha(), co.beta());
    let mut entries = Vec::with_capacity((d + 1) * (n1 + n2));
    for i in 0..d1 {
        entries.extend(a.row(i).iter().map(|v| alpha * v));
        entries.extend_from_slice(c.row(i));
    }
    for i in d1..d + 1 {
        entries.extend(a.row(i).iter().map(|v| beta * v));
        entries.extend(std::iter::repeat_n(0.0, n2));
    }
    Ok(
        DesignMatrix::new(d, n1 + n2, 3, entries)?.with_provenance(format!(
            "merge2(d1={d1}, d2={d2}; A={}; C={})",
            provenance(a),
            provenance(c)
        )),
    )
}

/// `(αA₁ -αA₁ C; βA₂ -βA₂ 0; δJ -δJ 0)` on `S^d`, `d = d₁ + d₂`, where `A`
/// is a 2-design on `S^{d-1}` with top-block squared column norms `d₁/d`
/// and `C` is a 3-design on `S^{d₁-1}`. `d₂ = 0` leaves the middle block
/// empty.
pub fn merge_6_3(a: &DesignMatrix, c: &DesignMatrix, d1: usize, d2: usize) -> Result<DesignMatrix> {
    check_even("d1", d1, false)?;
    check_even("d2", d2, true)?;
    let d = d1 + d2;
    if a.dimension() + 1 != d {
        return Err(Error::Precondition(format!(
            "A must live on S^{}, got S^{}",
            d - 1,
            a.dimension()
        )));
    }
    if c.dimension() + 1 != d1 {
        return Err(Error::Precondition(format!(
            "C must live on S^{}, got S^{}",
            d1 - 1,
            c.dimension()
        )));
    }
    let (n1, n2) = (a.size(), c.size());
    let co = merge63_coefficients(d1, d2, n1, n2)?;
    require_block_regular(a, d1)?;
    require_design(a, 2, "A")?;
    require_design(c, 3, "C")?;
    let (alpha, beta, delta) = (co.alpha(), co.beta(), co.delta());
    let n = 2 * n1 + n2;
    let mut entries = Vec::with_capacity((d + 1) * n);
    for i in 0..d {
        let scale = if i < d1 { alpha } else { beta };
        let row = a.row(i);
        entries.extend(row.iter().map(|v| scale * v));
        entries.extend(row.iter().map(|v| -scale * v));
        if i < d1 {
            entries.extend_from_slice(c.row(i));
        } else {
            entries.extend(std::iter::repeat_n(0.0, n2));
        }
    }
    entries.extend(std::iter::repeat_n(delta, n1));
    entries.extend(std::iter::repeat_n(-delta, n1));
    entries.extend(std::iter::repeat_n(0.0, n2));
    Ok(
        DesignMatrix::new(d, n, 3, entries)?.with_provenance(format!(
            "merge3(d1={d1}, d2={d2}; A={}; C={})",
            provenance(a),
            provenance(c)
        )),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regular::build_regular;
    use crate::sidon::SidonSet;

    fn regular(xs: &[u64], n: u64, t: u32) -> DesignMatrix {
        build_regular(&SidonSet::new(xs.to_vec(), n, t).unwrap(), t).unwrap()
    }

    fn passes(u: &DesignMatrix) -> bool {
        verify_design(u, u.strength(), default_tolerance(u.size()))
            .unwrap()
            .passed
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn octahedron_layout() {
        let u = octahedron(1).unwrap();
        let cols: Vec<_> = u.columns().collect();
        assert_eq!(
            cols,
            [
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![-1.0, 0.0],
                vec![0.0, -1.0]
            ]
        );
        let u = octahedron(4).unwrap();
        assert_eq!(u.size(), 10);
        let r = verify_design(&u, 3, 0.0).unwrap();
        assert!(r.passed);
        assert_eq!(r.max_residual(), 0.0);
        assert!(octahedron(0).is_err());
    }

    #[test]
    fn doubling() {
        for (a, n) in [
            (polygon(3).unwrap(), 6),
            (polygon(4).unwrap().with_strength(2), 8),
        ] {
            let u = double_antipodal(&a).unwrap();
            assert_eq!((u.size(), u.strength()), (n, 3));
            assert!(passes(&u));
        }
        let u = double_antipodal(&regular(&[1], 5, 2)).unwrap();
        assert_eq!(u.size(), 10);
        assert!(passes(&u));
        assert!(double_antipodal(&octahedron(2).unwrap()).is_err());
    }

    #[test]
    fn doubling_rejects_a_false_claim() {
        let fake = octahedron(2).unwrap().with_strength(2);
        let mut e = fake.entries().to_vec();
        e[0] = 0.8;
        e[fake.size()] = 0.6;
        let bad = DesignMatrix::new(2, 6, 2, e).unwrap();
        assert!(matches!(
            double_antipodal(&bad),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn lifts() {
        let co = lift_coefficients(2);
        assert!(close(co.alpha_sq, 2.0 / 3.0) && close(co.delta_sq.unwrap(), 1.0 / 3.0));
        for (a, d, n) in [
            (regular(&[1], 4, 2), 2, 8),
            (regular(&[1], 5, 2), 2, 10),
            (regular(&[1, 2], 7, 2), 4, 14),
        ] {
            let u = lift_3_3(&a).unwrap();
            assert_eq!((u.dimension(), u.size()), (d, n));
            assert!(passes(&u));
            assert!(u.norm_max_deviation() <= 8.0 * f64::EPSILON);
        }
    }

    #[test]
    fn two_block_merges() {
        let co = merge61_coefficients(2, 2, 8, 5).unwrap();
        assert!(close(co.alpha_sq, 3.0 / 8.0) && close(co.beta_sq.unwrap(), 13.0 / 8.0));
        let u = merge_6_1(&regular(&[1, 3], 8, 3), &regular(&[1], 5, 3), 2, 2).unwrap();
        assert_eq!((u.dimension(), u.size()), (3, 13));
        assert!(passes(&u));

        let co = merge61_coefficients(2, 4, 12, 5).unwrap();
        assert!(close(co.alpha_sq, 1.0 / 6.0) && close(co.beta_sq.unwrap(), 17.0 / 12.0));
        let u = merge_6_1(&regular(&[1, 3, 5], 12, 3), &polygon(5).unwrap(), 2, 4).unwrap();
        assert_eq!((u.dimension(), u.size()), (5, 17));
        assert!(passes(&u));
    }

    #[test]
    fn two_block_infeasible() {
        assert!(matches!(
            merge61_coefficients(2, 2, 4, 5),
            Err(Error::Infeasible(_))
        ));
        let a = octahedron(3).unwrap().with_strength(3);
        // The octahedron is a 3-design but not block regular.
        assert!(matches!(
            merge_6_1(&a, &polygon(5).unwrap(), 2, 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn three_block_merges() {
        let co = merge63_coefficients(2, 2, 5, 5).unwrap();
        assert!(close(co.alpha_sq, 0.2));
        assert!(close(co.beta_sq.unwrap(), 1.2));
        assert!(close(co.delta_sq.unwrap(), 0.3));
        let u = merge_6_3(&regular(&[1, 2], 5, 2), &polygon(5).unwrap(), 2, 2).unwrap();
        assert_eq!((u.dimension(), u.size()), (4, 15));
        assert!(passes(&u));

        let co = merge63_coefficients(2, 0, 3, 5).unwrap();
        assert!(close(co.alpha_sq, 7.0 / 18.0) && close(co.delta_sq.unwrap(), 11.0 / 18.0));
        let u = merge_6_3(&regular(&[1], 3, 2), &polygon(5).unwrap(), 2, 0).unwrap();
        assert_eq!((u.dimension(), u.size()), (2, 11));
        assert!(passes(&u));

        assert!(matches!(
            merge63_coefficients(2, 2, 2, 5),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn dimension_mismatches() {
        let a = regular(&[1, 3], 8, 3);
        let c = polygon(5).unwrap();
        assert!(merge_6_1(&a, &c, 2, 4).is_err());
        assert!(merge_6_1(&a, &c, 3, 1).is_err());
        assert!(merge_6_3(&a, &c, 2, 4).is_err());
        assert!(merge_6_3(&a, &c, 2, 2).is_ok());
    }

    #[test]
    fn polygons() {
        for n in 2..12 {
            let p = polygon(n).unwrap();
            assert!(passes(&p), "n={n}");
        }
        assert!(polygon(1).is_err());
    }
}
