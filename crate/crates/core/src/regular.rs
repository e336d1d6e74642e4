//! Regular designs: rows `sin(2πkm/n)`, `cos(2πkm/n)` for each element `m`
//! of a Sidon-type set, scaled to unit columns.

use std::f64::consts::TAU;

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::sidon::SidonSet;

/// `(sin, cos)` of `2π r / n` for `0 <= r < n`, exact at multiples of a
/// quarter turn.
fn sin_cos_turn(r: u64, n: u64) -> (f64, f64) {
    if (4 * r).is_multiple_of(n) {
        return match 4 * r / n {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        };
    }
    (TAU * r as f64 / n as f64).sin_cos()
}

/// The rows `s(m)` and `c(m)`: entry `k - 1` is `sin(2πkm/n)` resp.
/// `cos(2πkm/n)` for `k = 1..=n`. The product `km` is reduced mod `n`
/// before the angle is formed.
pub fn trig_rows(m: u64, n: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || m.is_multiple_of(n) {
        return Err(Error::DegenerateFrequency { m, n });
    }
    let m = m % n;
    let mut s = Vec::with_capacity(n as usize);
    let mut c = Vec::with_capacity(n as usize);
    for k in 1..=n {
        let r = ((u128::from(k) * u128::from(m)) % u128::from(n)) as u64;
        let (sin, cos) = sin_cos_turn(r, n);
        s.push(sin);
        c.push(cos);
    }
    Ok((s, c))
}

/// A Sidon-type set together with the strength requested of the regular
/// design built from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularRecipe {
    set: SidonSet,
    strength: u32,
}

impl RegularRecipe {
    pub fn new(set: SidonSet, strength: u32) -> Result<Self> {
        if !(1..=3).contains(&strength) {
            return Err(Error::UnsupportedDegree(strength));
        }
        if set.strength() < strength {
            return Err(Error::Precondition(format!(
                "set {set} has strength {} but strength {strength} was requested",
                set.strength()
            )));
        }
        if set.is_empty() {
            return Err(Error::Precondition(
                "regular designs need a nonempty set".into(),
            ));
        }
        Ok(RegularRecipe { set, strength })
    }

    pub fn set(&self) -> &SidonSet {
        &self.set
    }

    pub fn strength(&self) -> u32 {
        self.strength
    }

    pub fn modulus(&self) -> u64 {
        self.set.modulus()
    }

    /// `d = 2e - 1` for a set of `e` elements.
    pub fn dimension(&self) -> usize {
        2 * self.set.len() - 1
    }

    pub fn build(&self) -> Result<DesignMatrix> {
        let n = self.modulus();
        let e = self.set.len();
        let scale = (1.0 / e as f64).sqrt();
        let mut entries = Vec::with_capacity(2 * e * n as usize);
        for &m in self.set.elements() {
            let (s, c) = trig_rows(m, n)?;
            entries.extend(s.iter().map(|v| scale * v));
            entries.extend(c.iter().map(|v| scale * v));
        }
        Ok(
            DesignMatrix::new(self.dimension(), n as usize, self.strength, entries)?
                .with_provenance(format!(
                    "regular S={} mod {n}, strength {}",
                    self.set, self.strength
                )),
        )
    }
}

/// `M(S) = sqrt(2/(d+1)) * A(S)` with `A(S)` the `2e x n` matrix of rows
/// `s(m_1), c(m_1), ..., s(m_e), c(m_e)`. A spherical `s`-design on
/// `S^{2e-1}` whenever `S` has strength at least `s`.
pub fn build_regular(set: &SidonSet, strength: u32) -> Result<DesignMatrix> {
    RegularRecipe::new(set.clone(), strength)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::default_tolerance;
    use crate::harmonic::verify_design;

    fn set(xs: &[u64], n: u64, t: u32) -> SidonSet {
        SidonSet::new(xs.to_vec(), n, t).unwrap()
    }

    #[test]
    fn quarter_turn_rows() {
        let (s, c) = trig_rows(1, 4).unwrap();
        assert_eq!(s, [1.0, 0.0, -1.0, 0.0]);
        assert_eq!(c, [0.0, -1.0, 0.0, 1.0]);
        let (s, c) = trig_rows(2, 4).unwrap();
        assert_eq!(s, [0.0; 4]);
        assert_eq!(c, [-1.0, 1.0, -1.0, 1.0]);
    }

    #[test]
    fn sixty_degrees() {
        let (s, c) = trig_rows(1, 6).unwrap();
        assert!((s[0] - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((c[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_frequency() {
        assert!(matches!(
            trig_rows(0, 5),
            Err(Error::DegenerateFrequency { .. })
        ));
        assert!(matches!(
            trig_rows(10, 5),
            Err(Error::DegenerateFrequency { .. })
        ));
    }

    #[test]
    fn reduction_keeps_large_products_accurate() {
        let n = 10_007;
        let (s, c) = trig_rows(9_999, n).unwrap();
        for (k, (sv, cv)) in s.iter().zip(&c).enumerate() {
            assert!(
                (sv * sv + cv * cv - 1.0).abs() < 4.0 * f64::EPSILON,
                "k={k}"
            );
        }
        // k = n gives angle 0 exactly.
        assert_eq!((s[n as usize - 1], c[n as usize - 1]), (0.0, 1.0));
    }

    #[test]
    fn pentagon() {
        let u = build_regular(&set(&[1], 5, 3), 3).unwrap();
        assert_eq!((u.dimension(), u.size()), (1, 5));
        assert!(verify_design(&u, 3, 1e-9).unwrap().passed);
    }

    #[test]
    fn eight_points_on_s3() {
        let u = build_regular(&set(&[1, 3], 8, 3), 3).unwrap();
        assert_eq!((u.dimension(), u.size()), (3, 8));
        assert!((u.get(0, 1) - 0.5f64.sqrt()).abs() < 1e-16);
        assert!(verify_design(&u, 3, default_tolerance(8)).unwrap().passed);
    }

    #[test]
    fn strength_two_set_gives_exactly_a_two_design() {
        let s = set(&[1, 2], 7, 2);
        let u = build_regular(&s, 2).unwrap();
        assert_eq!((u.dimension(), u.size()), (3, 7));
        assert!(verify_design(&u, 2, default_tolerance(7)).unwrap().passed);
        let r = verify_design(&u, 3, default_tolerance(7)).unwrap();
        assert!(!r.passed);
        assert!(r.residual(3).unwrap() > 0.1);
    }

    #[test]
    fn strength_mismatch_is_rejected() {
        let s = set(&[1, 2], 7, 2);
        assert!(matches!(build_regular(&s, 3), Err(Error::Precondition(_))));
        assert!(matches!(
            build_regular(&set(&[], 7, 3), 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn columns_are_unit_to_a_few_ulps() {
        let u = build_regular(&set(&[1, 3, 5, 7], 16, 3), 3).unwrap();
        assert!(u.norm_max_deviation() <= 4.0 * f64::EPSILON);
    }
}
