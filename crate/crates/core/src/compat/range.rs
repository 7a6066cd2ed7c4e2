//! Ranges `ran M = { M(X) : X subset of outcomes }` and coexistence checks.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::povm::{for_each_subset_sum, subset_indices, DiscretePovm};
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

/// Distinct range elements with one generating subset each.
#[derive(Debug, Clone)]
pub struct RangeSet<T: Scalar> {
    pub elements: Vec<ComplexMatrix<T>>,
    /// Bitmask of outcome indices generating each element (first in Gray-code order).
    pub witnesses: Vec<u64>,
    dedup: T,
    bucket_width: T,
    buckets: HashMap<i64, Vec<usize>>,
}

impl<T: Scalar> RangeSet<T> {
    fn new(dim: usize, dedup: T) -> Self {
        // |A - B|_max <= tol implies |tr A - tr B| <= d tol
        let bucket_width = (dedup * T::of_usize(dim.max(1)) * T::of(2.0)).max(T::epsilon());
        Self { elements: Vec::new(), witnesses: Vec::new(), dedup, bucket_width, buckets: HashMap::new() }
    }

    fn bucket(&self, e: &ComplexMatrix<T>) -> i64 {
        (e.trace_re() / self.bucket_width).floor().to_i64().unwrap_or(i64::MAX)
    }

    /// Index of an element within the dedup tolerance of `e`.
    pub fn find(&self, e: &ComplexMatrix<T>) -> Option<usize> {
        let b = self.bucket(e);
        for key in [b - 1, b, b + 1] {
            if let Some(ids) = self.buckets.get(&key) {
                for &id in ids {
                    if self.elements[id].max_abs_diff(e) <= self.dedup {
                        return Some(id);
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, mask: u64, e: &ComplexMatrix<T>) {
        if self.find(e).is_some() {
            return;
        }
        let id = self.elements.len();
        let b = self.bucket(e);
        self.elements.push(e.clone());
        self.witnesses.push(mask);
        self.buckets.entry(b).or_default().push(id);
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &ComplexMatrix<T>) -> bool {
        self.find(e).is_some()
    }

    pub fn witness_indices(&self, id: usize) -> Vec<usize> {
        subset_indices(self.witnesses[id])
    }
}

fn check_cap<T: Scalar>(m: &DiscretePovm<T>, tol: &Tolerances) -> Result<()> {
    if m.len() > tol.range_cap {
        return Err(Error::TooManyOutcomes { n: m.len(), cap: tol.range_cap });
    }
    Ok(())
}

/// All distinct subset sums of `m`, deduplicated at `tol.range` in max-norm.
pub fn range_enumerate<T: Scalar>(m: &DiscretePovm<T>, tol: &Tolerances) -> Result<RangeSet<T>> {
    check_cap(m, tol)?;
    let mut set = RangeSet::new(m.dim(), T::of(tol.range));
    for_each_subset_sum(m.effects(), m.dim(), |mask, e| set.insert(mask, e));
    Ok(set)
}

/// Outcome of `ran A subset ran B`.
#[derive(Debug, Clone)]
pub struct RangeInclusion {
    pub included: bool,
    /// For every element of `ran A`: its generating subset of `A` and, when
    /// present, a subset of `B` with the same effect.
    pub witnesses: Vec<(Vec<usize>, Option<Vec<usize>>)>,
}

impl RangeInclusion {
    /// Elements of `ran A` with no match in `ran B`.
    pub fn missing(&self) -> Vec<&[usize]> {
        self.witnesses.iter().filter(|(_, b)| b.is_none()).map(|(a, _)| a.as_slice()).collect()
    }
}

pub fn range_included<T: Scalar>(
    a: &DiscretePovm<T>,
    b: &DiscretePovm<T>,
    tol: &Tolerances,
) -> Result<RangeInclusion> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { expected: a.dim(), found: b.dim() });
    }
    let ra = range_enumerate(a, tol)?;
    let rb = range_enumerate(b, tol)?;
    let witnesses: Vec<_> = ra
        .elements
        .iter()
        .enumerate()
        .map(|(id, e)| (ra.witness_indices(id), rb.find(e).map(|k| rb.witness_indices(k))))
        .collect();
    let included = witnesses.iter().all(|(_, w)| w.is_some());
    Ok(RangeInclusion { included, witnesses })
}

#[derive(Debug, Clone)]
pub struct CoexistenceReport {
    pub coexistent: bool,
    pub first: RangeInclusion,
    pub second: RangeInclusion,
}

/// Both ranges lie inside the range of the supplied witness `mbar`.
pub fn coexistent_with<T: Scalar>(
    m: &DiscretePovm<T>,
    mp: &DiscretePovm<T>,
    mbar: &DiscretePovm<T>,
    tol: &Tolerances,
) -> Result<CoexistenceReport> {
    let first = range_included(m, mbar, tol)?;
    let second = range_included(mp, mbar, tol)?;
    Ok(CoexistenceReport { coexistent: first.included && second.included, first, second })
}
