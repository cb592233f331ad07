use serde::{Deserialize, Serialize};

/// Size and shape summary of an ancestry tree at its latest generation `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeStats {
    /// Total stored nodes, `n_T`.
    pub node_count: usize,
    /// Latest generation with a single surviving ancestor, `c_T` (0 if none).
    pub coalescence_time: usize,
    /// `d_T = T - c_T`.
    pub distance_to_mrca: usize,
    /// Nodes from generation `c_T` onwards, `m_T = n_T - c_T`.
    pub crown_size: usize,
    /// `(n_T - T) / N`.
    pub adjusted_nodes: f64,
    /// Distinct generation-`s` ancestors of the leaves, for `s = 0..=T`.
    pub survivors_per_generation: Vec<usize>,
}

impl TreeStats {
    /// Builds the summary from per-generation survivor counts.
    ///
    /// Survivor counts are nondecreasing in `s`, so the generations with a
    /// single survivor form a prefix `0..=c_T`.
    pub fn from_survivors(survivors_per_generation: Vec<usize>, particles: usize) -> Self {
        let time = survivors_per_generation.len().saturating_sub(1);
        let node_count: usize = survivors_per_generation.iter().sum();
        let coalescence_time = survivors_per_generation
            .iter()
            .take_while(|&&u| u == 1)
            .count()
            .saturating_sub(1);
        Self {
            node_count,
            coalescence_time,
            distance_to_mrca: time - coalescence_time,
            crown_size: node_count - coalescence_time,
            adjusted_nodes: (node_count as f64 - time as f64) / particles as f64,
            survivors_per_generation,
        }
    }

    pub fn time(&self) -> usize {
        self.survivors_per_generation.len().saturating_sub(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_steps_taken() {
        let s = TreeStats::from_survivors(vec![5], 5);
        assert_eq!(s.node_count, 5);
        assert_eq!(s.coalescence_time, 0);
        assert_eq!(s.distance_to_mrca, 0);
        assert_eq!(s.adjusted_nodes, 1.0);
    }

    #[test]
    fn single_particle_chain() {
        let t = 7;
        let s = TreeStats::from_survivors(vec![1; t + 1], 1);
        assert_eq!(s.node_count, t + 1);
        assert_eq!(s.coalescence_time, t);
        assert_eq!(s.distance_to_mrca, 0);
        assert_eq!(s.crown_size, 1);
        assert_eq!(s.adjusted_nodes, 1.0);
    }

    #[test]
    fn trunk_then_crown() {
        let s = TreeStats::from_survivors(vec![1, 1, 1, 2, 3, 4], 4);
        assert_eq!(s.node_count, 12);
        assert_eq!(s.coalescence_time, 2);
        assert_eq!(s.distance_to_mrca, 3);
        assert_eq!(s.crown_size, 10);
        assert_eq!(s.adjusted_nodes, (12.0 - 5.0) / 4.0);
    }

    #[test]
    fn no_full_coalescence_uses_zero() {
        let s = TreeStats::from_survivors(vec![2, 3, 3], 3);
        assert_eq!(s.coalescence_time, 0);
        assert_eq!(s.distance_to_mrca, 2);
    }
}
