//! Candidate-solution vectors.

use std::ops::Index;

use crate::error::{Error, Result};

/// A point in the decision space: `D` finite real coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionVector {
    coords: Vec<f64>,
}

impl PositionVector {
    /// Build from raw coordinates, rejecting NaN/infinite entries.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("position coordinate {bad}")));
        }
        Ok(PositionVector { coords })
    }

    pub fn zeros(dimension: usize) -> Self {
        PositionVector {
            coords: vec![0.0; dimension],
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.coords.iter()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }

    /// Euclidean distance to another point of the same dimension.
    pub fn distance(&self, other: &PositionVector) -> f64 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Componentwise difference `self - other` as a raw delta.
    pub fn delta_to(&self, other: &PositionVector) -> Vec<f64> {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a - b)
            .collect()
    }
}

impl Index<usize> for PositionVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl TryFrom<Vec<f64>> for PositionVector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        PositionVector::new(coords)
    }
}

impl TryFrom<&[f64]> for PositionVector {
    type Error = Error;

    fn try_from(coords: &[f64]) -> Result<Self> {
        PositionVector::new(coords.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(PositionVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(PositionVector::new(vec![f64::INFINITY]).is_err());
        assert!(PositionVector::new(vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn distance_and_delta() {
        let a = PositionVector::new(vec![0.0, 3.0]).unwrap();
        let b = PositionVector::new(vec![4.0, 0.0]).unwrap();
        assert_eq!(a.distance(&b), 5.0);
        assert_eq!(a.delta_to(&b), vec![-4.0, 3.0]);
    }
}
