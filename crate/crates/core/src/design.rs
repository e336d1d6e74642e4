//! Point sets on `S^d` stored as `(d+1) x n` matrices whose columns are the
//! points.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted deviation of a column's squared norm from 1.
pub const NORM_TOL: f64 = 1e-6;

/// Default verification tolerance for a design of `n` points: `1e-9 * max(1, n)`.
pub fn default_tolerance(n: usize) -> f64 {
    1e-9 * (n.max(1) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignMatrix {
    dimension: usize,
    size: usize,
    strength: u32,
    /// Row-major, `(dimension + 1) * size` values.
    entries: Vec<f64>,
    provenance: Option<String>,
}

impl DesignMatrix {
    /// Builds a design from row-major entries. Rejects non-finite entries and
    /// columns whose squared norm is further than [`NORM_TOL`] from 1.
    pub fn new(dimension: usize, size: usize, strength: u32, entries: Vec<f64>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Dimension(0));
        }
        if !(1..=3).contains(&strength) {
            return Err(Error::UnsupportedDegree(strength));
        }
        if size == 0 {
            return Err(Error::Shape("a design needs at least one point".into()));
        }
        let rows = dimension + 1;
        if entries.len() != rows * size {
            return Err(Error::Shape(format!(
                "expected {rows} x {size} = {} entries, got {}",
                rows * size,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / size,
                col: pos % size,
                value: entries[pos],
            });
        }
        let matrix = DesignMatrix {
            dimension,
            size,
            strength,
            entries,
            provenance: None,
        };
        for col in 0..size {
            let norm_sq = matrix.column_norm_sq(col);
            if (norm_sq - 1.0).abs() > NORM_TOL {
                return Err(Error::NotUnit { col, norm_sq });
            }
        }
        Ok(matrix)
    }

    /// Builds a design from its rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>], strength: u32) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Dimension(rows.len().saturating_sub(1)));
        }
        let size = rows[0].len();
        if let Some(bad) = rows.iter().find(|r| r.len() != size) {
            return Err(Error::Shape(format!(
                "ragged rows: {} vs {} columns",
                bad.len(),
                size
            )));
        }
        let entries = rows.iter().flatten().copied().collect();
        DesignMatrix::new(rows.len() - 1, size, strength, entries)
    }

    /// Builds a design from its points (columns).
    pub fn from_columns(columns: &[Vec<f64>], strength: u32) -> Result<Self> {
        let size = columns.len();
        if size == 0 {
            return Err(Error::Shape("a design needs at least one point".into()));
        }
        let rows = columns[0].len();
        if rows < 2 {
            return Err(Error::Dimension(rows.saturating_sub(1)));
        }
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::Shape(format!(
                "ragged points: {} vs {} coordinates",
                bad.len(),
                rows
            )));
        }
        let mut entries = vec![0.0; rows * size];
        for (k, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                entries[i * size + k] = v;
            }
        }
        DesignMatrix::new(rows - 1, size, strength, entries)
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }

    pub fn with_strength(mut self, strength: u32) -> Self {
        self.strength = strength;
        self
    }

    /// `d`, the dimension of the sphere `S^d`.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of coordinates per point, `d + 1`.
    pub fn rows(&self) -> usize {
        self.dimension + 1
    }

    /// Number of points `n`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Claimed strength.
    pub fn strength(&self) -> u32 {
        self.strength
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.size + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.size..(row + 1) * self.size]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows()).map(|i| self.get(i, col)).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.size).map(move |k| self.column(k))
    }

    pub fn column_norm_sq(&self, col: usize) -> f64 {
        (0..self.rows()).map(|i| self.get(i, col).powi(2)).sum()
    }

    /// Largest `|‖u_k‖² - 1|` over all columns.
    pub fn norm_max_deviation(&self) -> f64 {
        (0..self.size)
            .map(|k| (self.column_norm_sq(k) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Applies a signed permutation to the coordinates: output row `i` is
    /// `signs[i] * input row perm[i]`.
    pub fn signed_permutation(&self, perm: &[usize], signs: &[f64]) -> Result<Self> {
        let rows = self.rows();
        if perm.len() != rows || signs.len() != rows {
            return Err(Error::Shape(format!(
                "permutation of length {} for {rows} rows",
                perm.len()
            )));
        }
        let mut seen = vec![false; rows];
        for &p in perm {
            if p >= rows || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Shape("not a permutation".into()));
            }
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for (i, &p) in perm.iter().enumerate() {
            entries.extend(self.row(p).iter().map(|v| signs[i] * v));
        }
        let mut out = DesignMatrix::new(self.dimension, self.size, self.strength, entries)?;
        out.provenance = self.provenance.clone();
        Ok(out)
    }
}

impl fmt::Display for DesignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} points on S^{} (claimed strength {})",
            self.size, self.dimension, self.strength
        )?;
        for k in 0..self.size {
            let coords: Vec<String> = self.column(k).iter().map(|v| format!("{v:+.6}")).collect();
            writeln!(f, "  {}", coords.join(" "))?;
        }
        Ok(())
    }
}

/// Compensated running sum (Kahan-Babuška/Neumaier).
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    #[inline]
    pub(crate) fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.carry += (self.sum - t) + value;
        } else {
            self.carry += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(self) -> f64 {
        self.sum + self.carry
    }
}
