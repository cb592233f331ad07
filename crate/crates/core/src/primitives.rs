//! Data-parallel building blocks used by the ancestry tree.
//!
//! All index arguments and results are **1-based**: index `1` refers to the
//! first element of an array. Every operation is a pure function of its
//! inputs, and each per-element work item is independent of the others, so
//! the serial loops below could be swapped for parallel kernels without
//! changing any contract.

use std::ops::Add;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimitiveError {
    #[error("index {index} at position {position} is outside 1..={bound}")]
    IndexOutOfRange {
        position: usize,
        index: usize,
        bound: usize,
    },
    #[error("index {index} at position {position} was already written (duplicate scatter target)")]
    DuplicateIndex { position: usize, index: usize },
    #[error("length mismatch: {what} has {actual} elements, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("needle at position {position} exceeds every haystack value")]
    NoQualifyingPosition { position: usize },
}

fn check_index(position: usize, index: usize, bound: usize) -> Result<usize, PrimitiveError> {
    if index == 0 || index > bound {
        Err(PrimitiveError::IndexOutOfRange {
            position: position + 1,
            index,
            bound,
        })
    } else {
        Ok(index - 1)
    }
}

/// `result[i] = source[indices[i]]`.
pub fn gather<V: Clone>(source: &[V], indices: &[usize]) -> Result<Vec<V>, PrimitiveError> {
    indices
        .iter()
        .enumerate()
        .map(|(pos, &idx)| check_index(pos, idx, source.len()).map(|i| source[i].clone()))
        .collect()
}

/// Returns a copy of `target` with `target[indices[i]] = source[i]`.
///
/// Indices must be pairwise distinct; a repeated index is reported as
/// [`PrimitiveError::DuplicateIndex`] instead of silently keeping one write.
pub fn scatter<V: Clone>(
    source: &[V],
    indices: &[usize],
    target: &[V],
) -> Result<Vec<V>, PrimitiveError> {
    let mut out = target.to_vec();
    scatter_into(source, indices, &mut out)?;
    Ok(out)
}

/// In-place form of [`scatter`]. On error `target` is left untouched.
pub fn scatter_into<V: Clone>(
    source: &[V],
    indices: &[usize],
    target: &mut [V],
) -> Result<(), PrimitiveError> {
    if source.len() != indices.len() {
        return Err(PrimitiveError::LengthMismatch {
            what: "scatter indices",
            expected: source.len(),
            actual: indices.len(),
        });
    }
    validate_distinct(indices, target.len())?;
    for (value, &idx) in source.iter().zip(indices) {
        target[idx - 1] = value.clone();
    }
    Ok(())
}

fn validate_distinct(indices: &[usize], bound: usize) -> Result<(), PrimitiveError> {
    // Fast path: strictly increasing indices are distinct.
    let mut increasing = true;
    let mut prev = 0usize;
    for (pos, &idx) in indices.iter().enumerate() {
        check_index(pos, idx, bound)?;
        if idx <= prev {
            increasing = false;
        }
        prev = idx;
    }
    if increasing {
        return Ok(());
    }
    let mut seen = vec![false; bound];
    for (pos, &idx) in indices.iter().enumerate() {
        if std::mem::replace(&mut seen[idx - 1], true) {
            return Err(PrimitiveError::DuplicateIndex {
                position: pos + 1,
                index: idx,
            });
        }
    }
    Ok(())
}

/// Inclusive prefix sum of `f` applied to each element:
/// `result[i] = f(source[1]) + ... + f(source[i])`.
pub fn transform_prefix_sum<V, T, F>(source: &[V], f: F) -> Vec<T>
where
    T: Copy + Default + Add<Output = T>,
    F: Fn(&V) -> T,
{
    let mut out = Vec::with_capacity(source.len());
    transform_prefix_sum_into(source, f, &mut out);
    out
}

/// Writes the transformed prefix sum into `out`, reusing its allocation.
pub fn transform_prefix_sum_into<V, T, F>(source: &[V], f: F, out: &mut Vec<T>)
where
    T: Copy + Default + Add<Output = T>,
    F: Fn(&V) -> T,
{
    out.clear();
    let mut acc = T::default();
    out.extend(source.iter().map(|v| {
        acc = acc + f(v);
        acc
    }));
}

/// For each needle, the smallest 1-based `j` with `needle <= haystack[j]`.
///
/// `haystack` must be nondecreasing. Sorted needles are resolved in one
/// merge pass, O(P + N); otherwise each needle gets its own binary search.
pub fn lower_bound<T: Ord>(haystack: &[T], needles: &[T]) -> Result<Vec<usize>, PrimitiveError> {
    if needles.windows(2).all(|w| w[0] <= w[1]) {
        let mut out = Vec::with_capacity(needles.len());
        let mut j = 0;
        for (pos, needle) in needles.iter().enumerate() {
            while j < haystack.len() && haystack[j] < *needle {
                j += 1;
            }
            if j == haystack.len() {
                return Err(PrimitiveError::NoQualifyingPosition { position: pos + 1 });
            }
            out.push(j + 1);
        }
        return Ok(out);
    }
    needles
        .iter()
        .enumerate()
        .map(|(pos, needle)| {
            let j = haystack.partition_point(|h| h < needle);
            if j == haystack.len() {
                Err(PrimitiveError::NoQualifyingPosition { position: pos + 1 })
            } else {
                Ok(j + 1)
            }
        })
        .collect()
}

/// Linear-scan reference for [`lower_bound`]; same contract, O(P) per needle.
pub fn lower_bound_linear<T: Ord>(
    haystack: &[T],
    needles: &[T],
) -> Result<Vec<usize>, PrimitiveError> {
    needles
        .iter()
        .enumerate()
        .map(|(pos, needle)| {
            haystack
                .iter()
                .position(|h| needle <= h)
                .map(|j| j + 1)
                .ok_or(PrimitiveError::NoQualifyingPosition { position: pos + 1 })
        })
        .collect()
}
