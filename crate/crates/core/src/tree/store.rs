use serde::{Deserialize, Serialize};

use crate::primitives::{gather, lower_bound, scatter_into, transform_prefix_sum_into};

use super::{TreeError, TreeStats};

/// How the slot buffer is sized and grown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CapacityPolicy {
    /// Initial capacity as a multiple of the generation size N.
    pub initial_multiple: usize,
    /// Growth step as a fraction of the current capacity; never less than N.
    pub growth_fraction: f64,
}

impl Default for CapacityPolicy {
    fn default() -> Self {
        Self {
            initial_multiple: 3,
            growth_fraction: 0.5,
        }
    }
}

impl CapacityPolicy {
    pub fn initial_capacity(&self, particles: usize) -> usize {
        self.initial_multiple.max(1) * particles
    }

    pub fn grown_capacity(&self, current: usize, particles: usize) -> usize {
        let step = (current as f64 * self.growth_fraction).ceil() as usize;
        current + step.max(particles)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    AwaitingPrune,
    Pruned,
}

/// Slot-based ancestry tree.
///
/// Slots are addressed 1-based; a parent link of `0` means "empty or root".
/// A slot is occupied iff it is a current leaf or has at least one child.
/// Freed slots are not cleared: occupancy is derived from the leaf set and
/// the offspring counts.
#[derive(Debug, Clone)]
pub struct AncestryStore<S> {
    states: Vec<Option<S>>,
    parents: Vec<usize>,
    offspring: Vec<usize>,
    generation: Vec<usize>,
    leaves: Vec<usize>,
    current_time: usize,
    phase: Phase,
    policy: CapacityPolicy,
    enlargements: usize,
    zeros: Vec<usize>,
}

impl<S: Clone> AncestryStore<S> {
    /// Initializes the tree with the first generation, using the default
    /// capacity policy.
    pub fn new(initial_states: Vec<S>) -> Result<Self, TreeError> {
        Self::with_policy(initial_states, CapacityPolicy::default())
    }

    pub fn with_policy(initial_states: Vec<S>, policy: CapacityPolicy) -> Result<Self, TreeError> {
        let capacity = policy.initial_capacity(initial_states.len());
        let mut store = Self::init(initial_states, capacity)?;
        store.policy = policy;
        Ok(store)
    }

    /// Places the `N` initial states as roots in slots `1..=N` of a buffer
    /// with `capacity` slots.
    pub fn init(initial_states: Vec<S>, capacity: usize) -> Result<Self, TreeError> {
        let n = initial_states.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if capacity < n {
            return Err(TreeError::CapacityTooSmall {
                capacity,
                particles: n,
            });
        }
        let mut states: Vec<Option<S>> = initial_states.into_iter().map(Some).collect();
        states.resize(capacity, None);
        Ok(Self {
            states,
            parents: vec![0; capacity],
            offspring: vec![0; capacity],
            generation: vec![0; capacity],
            leaves: (1..=n).collect(),
            current_time: 0,
            phase: Phase::AwaitingPrune,
            policy: CapacityPolicy::default(),
            enlargements: 0,
            zeros: Vec::new(),
        })
    }

    pub fn particles(&self) -> usize {
        self.leaves.len()
    }

    pub fn capacity(&self) -> usize {
        self.parents.len()
    }

    pub fn current_time(&self) -> usize {
        self.current_time
    }

    /// 1-based slot numbers of the current generation, in particle order.
    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    pub fn enlargements(&self) -> usize {
        self.enlargements
    }

    pub fn policy(&self) -> CapacityPolicy {
        self.policy
    }

    /// States of the current generation, in particle order.
    pub fn leaf_states(&self) -> impl Iterator<Item = &S> + '_ {
        self.leaves
            .iter()
            .map(move |&slot| self.states[slot - 1].as_ref().expect("leaf slot holds a state"))
    }

    /// Sets the offspring counts of the current leaves and releases every
    /// node left without descendants.
    pub fn prune(&mut self, new_offspring: &[usize]) -> Result<(), TreeError> {
        if self.phase != Phase::AwaitingPrune {
            return Err(TreeError::OutOfOrder {
                called: "prune",
                expected: "insert",
            });
        }
        let n = self.particles();
        if new_offspring.len() != n {
            return Err(TreeError::LengthMismatch {
                what: "offspring counts",
                expected: n,
                actual: new_offspring.len(),
            });
        }
        let total: usize = new_offspring.iter().sum();
        if total != n {
            return Err(TreeError::OffspringSum {
                expected: n,
                actual: total,
            });
        }

        scatter_into(new_offspring, &self.leaves, &mut self.offspring)?;
        for &leaf in &self.leaves {
            let mut j = leaf;
            while j > 0 && self.offspring[j - 1] == 0 {
                j = self.parents[j - 1];
                if j > 0 {
                    self.offspring[j - 1] -= 1;
                }
            }
        }
        self.phase = Phase::Pruned;
        Ok(())
    }

    /// Stores a new generation. `ancestors[k]` is the 1-based rank of the
    /// parent of `new_states[k]` among the current leaves.
    pub fn insert(&mut self, new_states: Vec<S>, ancestors: &[usize]) -> Result<(), TreeError> {
        if self.phase != Phase::Pruned {
            return Err(TreeError::OutOfOrder {
                called: "insert",
                expected: "prune",
            });
        }
        let n = self.particles();
        if new_states.len() != n {
            return Err(TreeError::LengthMismatch {
                what: "new states",
                expected: n,
                actual: new_states.len(),
            });
        }
        if ancestors.len() != n {
            return Err(TreeError::LengthMismatch {
                what: "ancestors",
                expected: n,
                actual: ancestors.len(),
            });
        }
        let parent_slots = gather(&self.leaves, ancestors)?;
        self.check_ancestors_match_offspring(ancestors)?;

        let new_leaves = loop {
            transform_prefix_sum_into(&self.offspring, |&o| usize::from(o == 0), &mut self.zeros);
            if self.zeros.last().copied().unwrap_or(0) >= n {
                break lower_bound(&self.zeros, &(1..=n).collect::<Vec<_>>())?;
            }
            self.enlarge()?;
        };

        scatter_into(&parent_slots, &new_leaves, &mut self.parents)?;
        let t = self.current_time + 1;
        for (state, &slot) in new_states.into_iter().zip(&new_leaves) {
            self.states[slot - 1] = Some(state);
            self.generation[slot - 1] = t;
            self.offspring[slot - 1] = 0;
        }
        self.leaves = new_leaves;
        self.current_time = t;
        self.phase = Phase::AwaitingPrune;
        Ok(())
    }

    fn check_ancestors_match_offspring(&self, ancestors: &[usize]) -> Result<(), TreeError> {
        let mut counts = vec![0usize; self.particles()];
        for &a in ancestors {
            counts[a - 1] += 1;
        }
        for (rank, (&c, &slot)) in counts.iter().zip(&self.leaves).enumerate() {
            if c != self.offspring[slot - 1] {
                return Err(TreeError::InconsistentAncestors { rank: rank + 1 });
            }
        }
        Ok(())
    }

    /// Grows the slot buffer according to the capacity policy. Existing
    /// slots keep their indices; new slots are empty.
    pub fn enlarge(&mut self) -> Result<(), TreeError> {
        let current = self.capacity();
        let requested = self.policy.grown_capacity(current, self.particles());
        let extra = requested - current;
        let alloc_err = |_| TreeError::Allocation { requested };
        self.states.try_reserve_exact(extra).map_err(alloc_err)?;
        self.parents.try_reserve_exact(extra).map_err(alloc_err)?;
        self.offspring.try_reserve_exact(extra).map_err(alloc_err)?;
        self.generation.try_reserve_exact(extra).map_err(alloc_err)?;
        self.states.resize(requested, None);
        self.parents.resize(requested, 0);
        self.offspring.resize(requested, 0);
        self.generation.resize(requested, 0);
        self.enlargements += 1;
        Ok(())
    }

    /// The full path `(x_0, ..., x_t)` ending at the leaf of rank `leaf_rank`.
    pub fn extract_path(&self, leaf_rank: usize) -> Result<Vec<S>, TreeError> {
        let n = self.particles();
        if leaf_rank == 0 || leaf_rank > n {
            return Err(TreeError::LeafRank {
                rank: leaf_rank,
                particles: n,
            });
        }
        let mut path = Vec::with_capacity(self.current_time + 1);
        let mut slot = self.leaves[leaf_rank - 1];
        let mut expected_gen = self.current_time;
        loop {
            let idx = slot - 1;
            if self.generation[idx] != expected_gen {
                return Err(TreeError::Invariant(format!(
                    "slot {slot} has generation {} on the path, expected {expected_gen}",
                    self.generation[idx]
                )));
            }
            let state = self.states[idx].as_ref().ok_or_else(|| {
                TreeError::Invariant(format!("slot {slot} on a path holds no state"))
            })?;
            path.push(state.clone());
            let parent = self.parents[idx];
            if expected_gen == 0 {
                if parent != 0 {
                    return Err(TreeError::Invariant(format!(
                        "root slot {slot} has parent {parent}"
                    )));
                }
                break;
            }
            if parent == 0 || parent > self.capacity() {
                return Err(TreeError::Invariant(format!(
                    "slot {slot} at generation {expected_gen} has broken parent link {parent}"
                )));
            }
            slot = parent;
            expected_gen -= 1;
        }
        path.reverse();
        Ok(path)
    }

    /// Occupancy mask over all slots: current leaves and slots with children.
    pub fn occupied(&self) -> Vec<bool> {
        let mut occ: Vec<bool> = self.offspring.iter().map(|&o| o > 0).collect();
        for &leaf in &self.leaves {
            occ[leaf - 1] = true;
        }
        occ
    }

    /// Number of stored nodes.
    pub fn node_count(&self) -> usize {
        self.occupied().iter().filter(|&&o| o).count()
    }

    pub fn stats(&self) -> TreeStats {
        let mut survivors = vec![0usize; self.current_time + 1];
        for (idx, occ) in self.occupied().into_iter().enumerate() {
            if occ {
                survivors[self.generation[idx]] += 1;
            }
        }
        TreeStats::from_survivors(survivors, self.particles())
    }

    /// Walks the whole buffer and checks every structural invariant.
    pub fn validate(&self) -> Result<(), TreeError> {
        let bad = |msg: String| Err(TreeError::Invariant(msg));
        let m = self.capacity();
        if self.states.len() != m || self.offspring.len() != m || self.generation.len() != m {
            return bad("slot arrays have different lengths".into());
        }
        let occ = self.occupied();
        let mut is_leaf = vec![false; m];
        for &leaf in &self.leaves {
            if leaf == 0 || leaf > m {
                return bad(format!("leaf slot {leaf} outside 1..={m}"));
            }
            if std::mem::replace(&mut is_leaf[leaf - 1], true) {
                return bad(format!("leaf slot {leaf} listed twice"));
            }
            if self.generation[leaf - 1] != self.current_time {
                return bad(format!("leaf slot {leaf} is not in the latest generation"));
            }
            if self.phase == Phase::AwaitingPrune && self.offspring[leaf - 1] != 0 {
                return bad(format!("leaf slot {leaf} has offspring before pruning"));
            }
        }
        let mut children = vec![0usize; m];
        for i in 0..m {
            if !occ[i] {
                continue;
            }
            if self.states[i].is_none() {
                return bad(format!("occupied slot {} holds no state", i + 1));
            }
            let parent = self.parents[i];
            if self.generation[i] == 0 {
                if parent != 0 {
                    return bad(format!("root slot {} has parent {parent}", i + 1));
                }
                continue;
            }
            if parent == 0 || parent > m {
                return bad(format!("slot {} has invalid parent {parent}", i + 1));
            }
            if !occ[parent - 1] {
                return bad(format!("slot {} points at unoccupied parent {parent}", i + 1));
            }
            if self.generation[parent - 1] + 1 != self.generation[i] {
                return bad(format!("slot {} and parent {parent} are not one generation apart", i + 1));
            }
            children[parent - 1] += 1;
        }
        for i in 0..m {
            if occ[i] && !is_leaf[i] && self.offspring[i] != children[i] {
                return bad(format!(
                    "slot {} records {} offspring but has {} children",
                    i + 1,
                    self.offspring[i],
                    children[i]
                ));
            }
        }
        Ok(())
    }

    pub(crate) fn raw_parts(&self) -> (&[Option<S>], &[usize], &[usize], &[usize]) {
        (&self.states, &self.parents, &self.offspring, &self.generation)
    }

    pub(crate) fn from_raw_parts(
        states: Vec<Option<S>>,
        parents: Vec<usize>,
        offspring: Vec<usize>,
        generation: Vec<usize>,
        leaves: Vec<usize>,
        current_time: usize,
    ) -> Self {
        Self {
            states,
            parents,
            offspring,
            generation,
            leaves,
            current_time,
            phase: Phase::AwaitingPrune,
            policy: CapacityPolicy::default(),
            enlargements: 0,
            zeros: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store(states: &[char], capacity: usize) -> AncestryStore<char> {
        AncestryStore::init(states.to_vec(), capacity).unwrap()
    }

    #[test]
    fn init_places_roots_as_leaves() {
        let s = store(&['a', 'b', 'c'], 8);
        assert_eq!(s.leaves(), &[1, 2, 3]);
        assert_eq!(s.capacity(), 8);
        let (_, parents, offspring, _) = s.raw_parts();
        assert!(parents.iter().all(|&p| p == 0));
        assert!(offspring.iter().all(|&o| o == 0));
        s.validate().unwrap();

        let single = store(&['z'], 1);
        assert_eq!(single.leaves(), &[1]);
        assert_eq!(single.extract_path(1).unwrap(), vec!['z']);
    }

    #[test]
    fn init_rejects_small_capacity() {
        assert!(matches!(
            AncestryStore::init(vec!['a', 'b', 'c'], 2),
            Err(TreeError::CapacityTooSmall { .. })
        ));
        assert!(matches!(AncestryStore::<u8>::init(vec![], 4), Err(TreeError::Empty)));
    }

    #[test]
    fn prune_sets_counts_and_frees_childless_root() {
        let mut s = store(&['a', 'b'], 4);
        s.prune(&[2, 0]).unwrap();
        let (_, _, offspring, _) = s.raw_parts();
        assert_eq!(offspring[0], 2);
        assert_eq!(offspring[1], 0);
    }

    #[test]
    fn prune_releases_whole_branch_up_to_mrca() {
        // gen0: slot1 'r'; gen1: two children of r; gen2: one child each.
        let mut s = store(&['r', 'x'], 12);
        s.prune(&[2, 0]).unwrap();
        s.insert(vec!['a', 'b'], &[1, 1]).unwrap();
        s.prune(&[1, 1]).unwrap();
        s.insert(vec!['c', 'd'], &[1, 2]).unwrap();
        s.validate().unwrap();
        assert_eq!(s.node_count(), 5);
        // Only the first leaf reproduces: the second branch (b, d) goes, and r
        // keeps exactly one child.
        s.prune(&[2, 0]).unwrap();
        let root = 1;
        let (_, _, offspring, _) = s.raw_parts();
        assert_eq!(offspring[root - 1], 1);
        s.insert(vec!['e', 'f'], &[1, 1]).unwrap();
        s.validate().unwrap();
        let stats = s.stats();
        assert_eq!(stats.survivors_per_generation, vec![1, 1, 1, 2]);
        assert_eq!(s.extract_path(2).unwrap(), vec!['r', 'a', 'c', 'f']);
    }

    #[test]
    fn prune_validates_counts() {
        let mut s = store(&['a', 'b'], 4);
        assert!(matches!(s.prune(&[1]), Err(TreeError::LengthMismatch { .. })));
        assert!(matches!(s.prune(&[1, 2]), Err(TreeError::OffspringSum { .. })));
    }

    #[test]
    fn insert_fills_first_free_slots() {
        let mut s = store(&['a', 'b'], 4);
        s.prune(&[1, 1]).unwrap();
        s.insert(vec!['c', 'd'], &[1, 2]).unwrap();
        assert_eq!(s.leaves(), &[3, 4]);
        let (_, parents, _, generation) = s.raw_parts();
        assert_eq!(&parents[2..4], &[1, 2]);
        assert_eq!(&generation[2..4], &[1, 1]);
        s.validate().unwrap();
    }

    #[test]
    fn total_coalescence_shares_one_parent() {
        let mut s = AncestryStore::init(vec![0u32, 1, 2, 3], 12).unwrap();
        s.prune(&[4, 0, 0, 0]).unwrap();
        s.insert(vec![10, 11, 12, 13], &[1, 1, 1, 1]).unwrap();
        let (_, parents, _, _) = s.raw_parts();
        for &leaf in s.leaves() {
            assert_eq!(parents[leaf - 1], 1);
        }
        s.validate().unwrap();
    }

    #[test]
    fn out_of_order_calls_are_errors() {
        let mut s = store(&['a', 'b'], 4);
        assert!(matches!(
            s.insert(vec!['c', 'd'], &[1, 2]),
            Err(TreeError::OutOfOrder { called: "insert", .. })
        ));
        s.prune(&[1, 1]).unwrap();
        assert!(matches!(
            s.prune(&[1, 1]),
            Err(TreeError::OutOfOrder { called: "prune", .. })
        ));
    }

    #[test]
    fn insert_rejects_ancestors_that_disagree_with_prune() {
        let mut s = store(&['a', 'b'], 6);
        s.prune(&[2, 0]).unwrap();
        assert!(matches!(
            s.insert(vec!['c', 'd'], &[1, 2]),
            Err(TreeError::InconsistentAncestors { .. })
        ));
        assert!(matches!(
            s.insert(vec!['c', 'd'], &[1, 3]),
            Err(TreeError::Primitive(_))
        ));
    }

    #[test]
    fn enlarge_appends_empty_slots() {
        let mut s = store(&['a', 'b'], 4);
        s.prune(&[1, 1]).unwrap();
        s.insert(vec!['c', 'd'], &[1, 2]).unwrap();
        let before = s.clone();
        s.enlarge().unwrap();
        assert_eq!(s.capacity(), 6);
        let (st, pa, of, ge) = s.raw_parts();
        let (st0, pa0, of0, ge0) = before.raw_parts();
        assert_eq!(&st[..4], st0);
        assert_eq!(&pa[..4], pa0);
        assert_eq!(&of[..4], of0);
        assert_eq!(&ge[..4], ge0);
        assert!(pa[4..].iter().all(|&p| p == 0));
        assert!(of[4..].iter().all(|&o| o == 0));
        s.validate().unwrap();
    }

    #[test]
    fn enlarge_from_two_n_to_three_n() {
        let mut s = AncestryStore::with_policy(
            vec![1u8, 2, 3, 4],
            CapacityPolicy {
                initial_multiple: 2,
                growth_fraction: 0.5,
            },
        )
        .unwrap();
        assert_eq!(s.capacity(), 8);
        s.enlarge().unwrap();
        assert_eq!(s.capacity(), 12);
        assert_eq!(s.node_count(), 4);
    }

    #[test]
    fn insert_enlarges_when_full() {
        let mut s = store(&['a', 'b'], 2);
        s.prune(&[1, 1]).unwrap();
        s.insert(vec!['c', 'd'], &[1, 2]).unwrap();
        assert!(s.capacity() >= 4);
        assert_eq!(s.enlargements(), 1);
        s.validate().unwrap();
        assert_eq!(s.extract_path(2).unwrap(), vec!['b', 'd']);
    }

    #[test]
    fn full_buffer_refills_reclaimed_slots() {
        // capacity 4, N=2; total coalescence each step frees exactly N slots.
        let mut s = store(&['a', 'b'], 4);
        s.prune(&[1, 1]).unwrap();
        s.insert(vec!['c', 'd'], &[1, 2]).unwrap();
        assert_eq!(s.node_count(), 4);
        s.prune(&[2, 0]).unwrap();
        s.insert(vec!['e', 'f'], &[1, 1]).unwrap();
        // b and d released, e and f fill their slots
        assert_eq!(s.capacity(), 4);
        assert_eq!(s.node_count(), 4);
        assert_eq!(s.leaves(), &[2, 4]);
        s.validate().unwrap();
    }

    #[test]
    fn extract_path_reports_bad_rank() {
        let s = store(&['a'], 2);
        assert!(matches!(s.extract_path(0), Err(TreeError::LeafRank { .. })));
        assert!(matches!(s.extract_path(2), Err(TreeError::LeafRank { .. })));
    }

    #[test]
    fn extract_path_detects_broken_chain() {
        let mut s = store(&['a', 'b'], 4);
        s.prune(&[1, 1]).unwrap();
        s.insert(vec!['c', 'd'], &[1, 2]).unwrap();
        s.parents[2] = 0;
        assert!(matches!(s.extract_path(1), Err(TreeError::Invariant(_))));
        assert!(s.validate().is_err());
    }
}
