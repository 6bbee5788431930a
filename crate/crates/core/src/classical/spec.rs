use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rational::{self, ExactRational};

/// An open baker's map: `D` Markov rectangles `[x_i, x_{i+1}) x [0,1)`, of which
/// those listed in `keep` are retained and the rest form the hole.
#[derive(Debug, Clone, PartialEq)]
pub struct BakerSpec {
    partition: Vec<BigRational>,
    keep: Vec<usize>,
    lengths: Vec<BigRational>,
    lengths_f64: Vec<f64>,
    partition_f64: Vec<f64>,
}

impl BakerSpec {
    /// Validates a raw partition `0 = x_0 < ... < x_D = 1` and a kept-rectangle set.
    pub fn new(partition: Vec<BigRational>, keep: &[usize]) -> Result<Self> {
        if partition.len() < 2
            || !partition[0].is_zero()
            || !partition[partition.len() - 1].is_one()
        {
            // A non-monotone interior is reported before endpoint problems when both occur.
            if let Some(index) = first_non_increase(&partition) {
                return Err(Error::NonMonotonePartition { index });
            }
            return Err(Error::EndpointMismatch);
        }
        if let Some(index) = first_non_increase(&partition) {
            return Err(Error::NonMonotonePartition { index });
        }
        let d = partition.len() - 1;
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&index) = keep.iter().find(|&&i| i >= d) {
            return Err(Error::KeepIndexOutOfRange { index, rectangles: d });
        }
        if keep.is_empty() || keep.len() == d {
            return Err(Error::EmptyOrFullKeepSet { rectangles: d });
        }
        let lengths: Vec<BigRational> = partition.windows(2).map(|w| &w[1] - &w[0]).collect();
        let lengths_f64 = lengths.iter().map(rational::to_f64).collect();
        let partition_f64 = partition.iter().map(rational::to_f64).collect();
        Ok(Self { partition, keep, lengths, lengths_f64, partition_f64 })
    }

    /// The symmetric `D`-baker with `x_i = i/D`.
    pub fn symmetric(d: usize, keep: &[usize]) -> Result<Self> {
        if d == 0 {
            return Err(Error::EndpointMismatch);
        }
        let partition = (0..=d)
            .map(|i| BigRational::new(BigInt::from(i), BigInt::from(d)))
            .collect();
        Self::new(partition, keep)
    }

    pub fn rectangles(&self) -> usize {
        self.lengths.len()
    }

    pub fn partition(&self) -> &[BigRational] {
        &self.partition
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    pub fn is_kept(&self, i: usize) -> bool {
        self.keep.binary_search(&i).is_ok()
    }

    pub fn lengths(&self) -> &[BigRational] {
        &self.lengths
    }

    pub fn partition_f64(&self) -> &[f64] {
        &self.partition_f64
    }

    pub fn lengths_f64(&self) -> &[f64] {
        &self.lengths_f64
    }

    pub fn kept_lengths_f64(&self) -> impl Iterator<Item = f64> + '_ {
        self.keep.iter().map(|&i| self.lengths_f64[i])
    }

    /// Exact total width `Σ_{i∈keep} ℓ_i` of the kept rectangles.
    pub fn kept_mass(&self) -> BigRational {
        self.keep.iter().fold(BigRational::zero(), |acc, &i| acc + &self.lengths[i])
    }

    /// True iff every rectangle has width `1/D`.
    pub fn symmetric_widths(&self) -> bool {
        let target = BigRational::new(BigInt::one(), BigInt::from(self.rectangles()));
        self.lengths.iter().all(|l| *l == target)
    }

    /// True iff partition and keep set are both invariant under `i ↦ D-1-i`.
    pub fn reflection_symmetric(&self) -> bool {
        let d = self.rectangles();
        (0..d).all(|i| self.lengths[i] == self.lengths[d - 1 - i] && self.is_kept(i) == self.is_kept(d - 1 - i))
    }

    /// Index of the rectangle containing `x`, using `[x_i, x_{i+1})` membership.
    pub fn rectangle_of(&self, x: f64) -> usize {
        self.partition_f64.partition_point(|&p| p <= x).saturating_sub(1).min(self.rectangles() - 1)
    }

    pub fn rectangle_of_exact(&self, x: &BigRational) -> usize {
        // partition_point finds the first x_i > x; the rectangle starts one before it.
        self.partition.partition_point(|p| p <= x).saturating_sub(1).min(self.rectangles() - 1)
    }

    /// Short stable digest of the partition and keep set.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical_string().as_bytes());
        hex::encode(&h.finalize()[..8])
    }

    pub fn canonical_string(&self) -> String {
        let parts: Vec<String> = self.partition.iter().map(rational::display).collect();
        let keep: Vec<String> = self.keep.iter().map(|i| i.to_string()).collect();
        format!("partition={};keep={}", parts.join(","), keep.join(","))
    }

    pub fn summary(&self) -> SpecSummary {
        SpecSummary {
            rectangles: self.rectangles(),
            partition: self.partition.iter().map(|r| ExactRational(r.clone())).collect(),
            keep: self.keep.clone(),
            hash: self.hash(),
        }
    }
}

fn first_non_increase(p: &[BigRational]) -> Option<usize> {
    p.windows(2).position(|w| w[1] <= w[0]).map(|i| i + 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecSummary {
    pub rectangles: usize,
    pub partition: Vec<ExactRational>,
    pub keep: Vec<usize>,
    pub hash: String,
}
