use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_list, is_zero_or_one, Scalar};

/// A point of the unit box `0 <= x <= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionVector {
    values: Vec<Scalar>,
    binary: bool,
}

impl SolutionVector {
    pub fn new(values: Vec<Scalar>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.is_negative() || **v > Scalar::one()) {
            return Err(Error::Precondition(format!("entry {v} outside [0, 1]")));
        }
        let binary = values.iter().all(is_zero_or_one);
        Ok(SolutionVector { values, binary })
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        SolutionVector {
            values: bits
                .iter()
                .map(|&b| if b { Scalar::one() } else { Scalar::zero() })
                .collect(),
            binary: true,
        }
    }

    pub fn from_support(n: usize, support: &[usize]) -> Self {
        let mut bits = vec![false; n];
        for &j in support {
            bits[j] = true;
        }
        Self::from_bits(&bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_bits(&vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn value(&self, j: usize) -> &Scalar {
        &self.values[j]
    }

    pub fn is_binary(&self) -> bool {
        self.binary
    }

    /// Columns with a nonzero entry, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&j| !self.values[j].is_zero()).collect()
    }

    pub fn bits(&self) -> Option<Vec<bool>> {
        self.binary.then(|| self.values.iter().map(|v| v.is_one()).collect())
    }

    pub fn dot(&self, c: &[Scalar]) -> Scalar {
        self.values
            .iter()
            .zip(c)
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, c)| x * c)
            .sum()
    }

    /// `self - other`, failing if the result leaves the box.
    pub fn checked_sub(&self, other: &SolutionVector) -> Result<SolutionVector> {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        SolutionVector::new(values)
    }

    /// Componentwise sum of binary vectors; `None` if supports overlap.
    pub fn disjoint_sum<'a, I>(n: usize, parts: I) -> Option<SolutionVector>
    where
        I: IntoIterator<Item = &'a SolutionVector>,
    {
        let mut bits = vec![false; n];
        for p in parts {
            for j in p.support() {
                if bits[j] || !p.values[j].is_one() {
                    return None;
                }
                bits[j] = true;
            }
        }
        Some(Self::from_bits(&bits))
    }
}

impl fmt::Display for SolutionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", format_list(&self.values))
    }
}
