use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Which quantity a [`SpaceTimeField`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Observable {
    /// Connected `⟨S^x_R S^x_0⟩` after a global quench.
    Gx,
    /// Connected `⟨S^z_R S^z_0⟩` after a global quench.
    Gz,
    /// `1/2 - ⟨S^z_R⟩` after a local spin flip.
    SzLocal,
    /// Smaller eigenvalue of the block density matrix.
    Lambda2,
    /// Rényi entropy of the given order.
    Renyi(f64),
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Gx => write!(f, "Gx"),
            Observable::Gz => write!(f, "Gz"),
            Observable::SzLocal => write!(f, "Sz_local"),
            Observable::Lambda2 => write!(f, "lambda2"),
            Observable::Renyi(n) => write!(f, "renyi({n})"),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Gx" => Ok(Observable::Gx),
            "Gz" => Ok(Observable::Gz),
            "Sz_local" => Ok(Observable::SzLocal),
            "lambda2" => Ok(Observable::Lambda2),
            _ => s
                .strip_prefix("renyi(")
                .and_then(|rest| rest.strip_suffix(')'))
                .and_then(|n| n.parse::<f64>().ok())
                .map(Observable::Renyi)
                .ok_or_else(|| Error::InvalidField(format!("unknown observable `{s}`"))),
        }
    }
}

/// An observable sampled on a distance × time grid.
///
/// `values` has shape `(t_grid.len(), r_grid.len())`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField<T> {
    pub observable: Observable,
    pub r_grid: Vec<usize>,
    pub t_grid: Vec<T>,
    pub values: Array2<T>,
    pub meta: BTreeMap<String, String>,
}

impl<T: Real> SpaceTimeField<T> {
    /// Checks shape, finiteness and grid ordering.
    pub fn new(observable: Observable, r_grid: Vec<usize>, t_grid: Vec<T>, values: Array2<T>) -> Result<Self> {
        let field = SpaceTimeField { observable, r_grid, t_grid, values, meta: BTreeMap::new() };
        field.validate()?;
        Ok(field)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.dim() != (self.t_grid.len(), self.r_grid.len()) {
            return Err(Error::InvalidField(format!(
                "values have shape {:?}, grids imply ({}, {})",
                self.values.dim(),
                self.t_grid.len(),
                self.r_grid.len()
            )));
        }
        if self.r_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidField("distances must be strictly increasing".into()));
        }
        if self.t_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidField("times must be strictly increasing".into()));
        }
        if let Some(bad) = self.values.iter().position(|v| !v.is_finite()) {
            let (it, ir) = (bad / self.r_grid.len(), bad % self.r_grid.len());
            return Err(Error::InvalidField(format!("non-finite value at R = {}, t index {it}", self.r_grid[ir])));
        }
        Ok(())
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    /// Time series at the `ir`-th distance.
    pub fn column(&self, ir: usize) -> ArrayView1<'_, T> {
        self.values.column(ir)
    }

    /// Profile at the `it`-th time.
    pub fn row(&self, it: usize) -> ArrayView1<'_, T> {
        self.values.row(it)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Same grids and metadata, values transformed elementwise.
    pub fn map(&self, observable: Observable, f: impl Fn(T) -> T) -> Self {
        SpaceTimeField {
            observable,
            r_grid: self.r_grid.clone(),
            t_grid: self.t_grid.clone(),
            values: self.values.mapv(f),
            meta: self.meta.clone(),
        }
    }

    /// Keeps the distances for which `keep` is true.
    pub fn select_distances(&self, keep: impl Fn(usize) -> bool) -> Self {
        let idx: Vec<usize> = (0..self.r_grid.len()).filter(|&i| keep(self.r_grid[i])).collect();
        let values = self.values.select(ndarray::Axis(1), &idx);
        SpaceTimeField {
            observable: self.observable,
            r_grid: idx.iter().map(|&i| self.r_grid[i]).collect(),
            t_grid: self.t_grid.clone(),
            values,
            meta: self.meta.clone(),
        }
    }
}

/// Stacks equally long rows (one per time) into a `(t, R)` matrix.
pub(crate) fn stack_rows<T: Real>(rows: Vec<Vec<T>>, n_r: usize) -> Array2<T> {
    let n_t = rows.len();
    let flat: Vec<T> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((n_t, n_r), flat).expect("rows have the grid length")
}

/// Uniform times `0, dt, 2dt, …` up to and including `t_max`.
pub fn time_grid<T: Real>(t_max: T, dt: T) -> Result<Vec<T>> {
    if !(dt > T::zero() && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
    }
    if !(t_max >= T::zero() && t_max.is_finite()) {
        return Err(Error::invalid("t_max", format!("must be non-negative, got {t_max}")));
    }
    let steps = (t_max / dt + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
    Ok((0..=steps).map(|i| T::from_usize_lossy(i) * dt).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observable_names_round_trip() {
        for obs in [Observable::Gx, Observable::Gz, Observable::SzLocal, Observable::Lambda2, Observable::Renyi(0.5)] {
            assert_eq!(obs.to_string().parse::<Observable>().unwrap(), obs);
        }
        assert!("Gy".parse::<Observable>().is_err());
    }

    #[test]
    fn time_grid_includes_endpoint() {
        let t = time_grid(350.0f64, 0.1).unwrap();
        assert_eq!(t.len(), 3501);
        assert!((t[3500] - 350.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        let v = Array2::<f64>::zeros((2, 3));
        assert!(SpaceTimeField::new(Observable::Gx, vec![0, 1], vec![0.0, 1.0], v.clone()).is_err());
        let mut w = Array2::<f64>::zeros((2, 2));
        w[[1, 1]] = f64::NAN;
        assert!(SpaceTimeField::new(Observable::Gx, vec![0, 1], vec![0.0, 1.0], w).is_err());
        assert!(SpaceTimeField::new(Observable::Gx, vec![1, 1], vec![0.0, 1.0], Array2::zeros((2, 2))).is_err());
    }
}
