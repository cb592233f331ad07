//! JSON snapshot of an [`AncestryStore`].
//!
//! Layout:
//!
//! ```json
//! {
//!   "capacity": 12,
//!   "current_time": 3,
//!   "slots": [{"index": 1, "state": ..., "parent": 0, "offspring": 2, "generation": 0}, ...],
//!   "leaves": [4, 7, 9]
//! }
//! ```
//!
//! Only occupied slots are listed. Indices are 1-based; `parent` is 0 for
//! roots. Leaves carry offspring 0.

use serde::{Deserialize, Serialize};

use super::{AncestryStore, TreeError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotRecord<S> {
    pub index: usize,
    pub state: S,
    pub parent: usize,
    pub offspring: usize,
    pub generation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeSnapshot<S> {
    pub capacity: usize,
    pub current_time: usize,
    pub slots: Vec<SlotRecord<S>>,
    pub leaves: Vec<usize>,
}

impl<S: Clone> AncestryStore<S> {
    pub fn snapshot(&self) -> TreeSnapshot<S> {
        let (states, parents, offspring, generation) = self.raw_parts();
        let slots = self
            .occupied()
            .into_iter()
            .enumerate()
            .filter(|(_, occ)| *occ)
            .map(|(i, _)| SlotRecord {
                index: i + 1,
                state: states[i].clone().expect("occupied slot holds a state"),
                parent: parents[i],
                offspring: offspring[i],
                generation: generation[i],
            })
            .collect();
        TreeSnapshot {
            capacity: self.capacity(),
            current_time: self.current_time(),
            slots,
            leaves: self.leaves().to_vec(),
        }
    }

    /// Rebuilds a store from a snapshot and validates it.
    pub fn from_snapshot(snapshot: TreeSnapshot<S>) -> Result<Self, TreeError> {
        let m = snapshot.capacity;
        if snapshot.leaves.is_empty() {
            return Err(TreeError::Empty);
        }
        let mut states = vec![None; m];
        let mut parents = vec![0; m];
        let mut offspring = vec![0; m];
        let mut generation = vec![0; m];
        for rec in snapshot.slots {
            if rec.index == 0 || rec.index > m {
                return Err(TreeError::Invariant(format!(
                    "snapshot slot {} outside 1..={m}",
                    rec.index
                )));
            }
            let i = rec.index - 1;
            states[i] = Some(rec.state);
            parents[i] = rec.parent;
            offspring[i] = rec.offspring;
            generation[i] = rec.generation;
        }
        let store = Self::from_raw_parts(
            states,
            parents,
            offspring,
            generation,
            snapshot.leaves,
            snapshot.current_time,
        );
        store.validate()?;
        Ok(store)
    }
}

impl<S: Clone + Serialize> AncestryStore<S> {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(&self.snapshot())
    }
}
