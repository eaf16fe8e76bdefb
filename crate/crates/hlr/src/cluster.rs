//! Binary cluster trees over consecutive index sets.
//!
//! A cluster tree of depth `p` partitions `{0..n}` into `2^p` consecutive
//! (possibly empty) leaf index sets. Only the leaf-level cumulative
//! endpoints are stored; interior levels are reconstructed by pairwise
//! merging, so there is a single source of truth for the partition.

use crate::{Error, Result};

/// A completely balanced binary partition of `0..n` into consecutive index
/// sets, stored as the vector of leaf-level cumulative endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterTree {
    n: usize,
    depth: usize,
    /// `levels[l]` holds the `2^l` cumulative endpoints of level `l`;
    /// `levels[depth]` is the leaf endpoint vector.
    levels: Vec<Vec<usize>>,
}

impl ClusterTree {
    /// Balanced tree over `0..n`: each set splits into a first half of
    /// `ceil(m/2)` indices until every set has cardinality at most `nmin`.
    /// All leaves end up at the same depth.
    pub fn default_cluster(n: usize, nmin: usize) -> ClusterTree {
        assert!(n >= 1, "index count must be positive");
        assert!(nmin >= 1, "minimal block size must be positive");
        let mut depth = 0;
        let mut sizes = vec![n];
        while sizes.iter().any(|&m| m > nmin) {
            sizes = sizes
                .iter()
                .flat_map(|&m| {
                    let first = m.div_ceil(2);
                    [first, m - first]
                })
                .collect();
            depth += 1;
        }
        let endpoints = cumulative(&sizes);
        ClusterTree::assemble(n, depth, endpoints)
    }

    /// Balanced ceiling-split tree of a fixed depth, regardless of block
    /// sizes. Splitting a singleton yields an empty second child.
    pub fn with_depth(n: usize, depth: usize) -> ClusterTree {
        assert!(n >= 1, "index count must be positive");
        let mut sizes = vec![n];
        for _ in 0..depth {
            sizes = sizes
                .iter()
                .flat_map(|&m| {
                    let first = m.div_ceil(2);
                    [first, m - first]
                })
                .collect();
        }
        ClusterTree::assemble(n, depth, cumulative(&sizes))
    }

    /// Tree with the given leaf endpoint vector. The sequence must be
    /// nondecreasing, have power-of-two length, and end at the total index
    /// count. Equal consecutive endpoints encode empty leaves.
    pub fn from_endpoints(c: &[usize]) -> Result<ClusterTree> {
        if c.is_empty() || !c.len().is_power_of_two() {
            return Err(Error::InvalidCluster(format!(
                "endpoint count {} is not a power of two",
                c.len()
            )));
        }
        if c.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidCluster(
                "endpoints must be nondecreasing".into(),
            ));
        }
        let n = *c.last().unwrap();
        if n == 0 {
            return Err(Error::InvalidCluster("total index count is zero".into()));
        }
        let depth = c.len().trailing_zeros() as usize;
        Ok(ClusterTree::assemble(n, depth, c.to_vec()))
    }

    /// Row and column trees of equal depth for an `m x n` matrix: both sets
    /// are split simultaneously until each block is at most `nmin`, so the
    /// smaller set keeps splitting (possibly into empty leaves) until the
    /// larger one is done.
    pub fn pair(m: usize, n: usize, nmin: usize) -> (ClusterTree, ClusterTree) {
        let depth = ClusterTree::default_cluster(m, nmin)
            .depth()
            .max(ClusterTree::default_cluster(n, nmin).depth());
        (
            ClusterTree::with_depth(m, depth),
            ClusterTree::with_depth(n, depth),
        )
    }

    fn assemble(n: usize, depth: usize, leaf_endpoints: Vec<usize>) -> ClusterTree {
        debug_assert_eq!(leaf_endpoints.len(), 1 << depth);
        debug_assert_eq!(*leaf_endpoints.last().unwrap(), n);
        let mut levels = vec![leaf_endpoints];
        while levels.last().unwrap().len() > 1 {
            let prev = levels.last().unwrap();
            let merged: Vec<usize> = prev.chunks(2).map(|pair| pair[1]).collect();
            levels.push(merged);
        }
        levels.reverse();
        ClusterTree { n, depth, levels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn leaf_count(&self) -> usize {
        1 << self.depth
    }

    /// Leaf-level cumulative endpoints (the vector `c`).
    pub fn leaf_endpoints(&self) -> &[usize] {
        &self.levels[self.depth]
    }

    /// Cumulative endpoints of the `2^level` nodes at the given level.
    pub fn endpoints_at_level(&self, level: usize) -> &[usize] {
        &self.levels[level]
    }

    /// Half-open index range of node `idx` at `level`.
    pub fn range(&self, level: usize, idx: usize) -> std::ops::Range<usize> {
        let eps = &self.levels[level];
        let start = if idx == 0 { 0 } else { eps[idx - 1] };
        start..eps[idx]
    }

    /// Size of node `idx` at `level`.
    pub fn node_size(&self, level: usize, idx: usize) -> usize {
        let r = self.range(level, idx);
        r.end - r.start
    }

    /// True iff both trees have equal depth and equal leaf endpoints.
    pub fn compatible(&self, other: &ClusterTree) -> bool {
        self.depth == other.depth && self.leaf_endpoints() == other.leaf_endpoints()
    }

    /// Tree describing one child half of this tree (levels below node
    /// `(1, child)`), used by recursions that descend into diagonal blocks.
    pub fn subtree(&self, child: usize) -> ClusterTree {
        assert!(self.depth >= 1 && child < 2);
        let half = 1 << (self.depth - 1);
        let leaves = self.leaf_endpoints();
        let offset = if child == 0 { 0 } else { leaves[half - 1] };
        let slice = &leaves[child * half..(child + 1) * half];
        let shifted: Vec<usize> = slice.iter().map(|&e| e - offset).collect();
        let n = *shifted.last().unwrap();
        // Subtrees of nonempty matrices always have n >= 1 except when a
        // whole half is empty; keep a zero-size tree usable in that case.
        ClusterTree::assemble(n, self.depth - 1, shifted)
    }

    /// Tree one level coarser, merging leaf pairs.
    pub fn coarsen(&self) -> ClusterTree {
        assert!(self.depth >= 1, "cannot coarsen a depth-0 tree");
        ClusterTree::assemble(
            self.n,
            self.depth - 1,
            self.levels[self.depth - 1].clone(),
        )
    }
}

fn cumulative(sizes: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .iter()
        .map(|&s| {
            acc += s;
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Reference recursion: materialize the index sets of every node.
    fn reference_split(n: usize, depth: usize) -> Vec<Vec<(usize, usize)>> {
        let mut levels = vec![vec![(0usize, n)]];
        for _ in 0..depth {
            let next = levels
                .last()
                .unwrap()
                .iter()
                .flat_map(|&(a, b)| {
                    let m = b - a;
                    let first = m.div_ceil(2);
                    [(a, a + first), (a + first, b)]
                })
                .collect();
            levels.push(next);
        }
        levels
    }

    #[test]
    fn default_cluster_unit_leaves() {
        let t = ClusterTree::default_cluster(8, 1);
        assert_eq!(t.depth(), 3);
        assert_eq!(t.leaf_endpoints(), &[1, 2, 3, 4, 5, 6, 7, 8]);
    }

    #[test]
    fn default_cluster_small_n_is_single_leaf() {
        let t = ClusterTree::default_cluster(5, 8);
        assert_eq!(t.depth(), 0);
        assert_eq!(t.leaf_endpoints(), &[5]);
    }

    #[test]
    fn default_cluster_matches_hand_simulation() {
        let t = ClusterTree::default_cluster(1000, 256);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.leaf_endpoints(), &[250, 500, 750, 1000]);
    }

    #[test]
    fn from_endpoints_accepts_empty_leaf() {
        let t = ClusterTree::from_endpoints(&[2, 4, 8, 8]).unwrap();
        assert_eq!(t.depth(), 2);
        assert_eq!(t.node_size(2, 3), 0);
        assert_eq!(t.endpoints_at_level(1), &[4, 8]);
    }

    #[test]
    fn from_endpoints_depth_zero() {
        let t = ClusterTree::from_endpoints(&[8]).unwrap();
        assert_eq!(t.depth(), 0);
        assert_eq!(t.n(), 8);
    }

    #[test]
    fn from_endpoints_rejects_decreasing() {
        assert!(ClusterTree::from_endpoints(&[4, 2, 8, 8]).is_err());
    }

    #[test]
    fn from_endpoints_rejects_non_power_of_two() {
        assert!(ClusterTree::from_endpoints(&[2, 4, 8]).is_err());
    }

    #[test]
    fn compatibility() {
        let a = ClusterTree::default_cluster(8, 1);
        let b = ClusterTree::default_cluster(8, 1);
        assert!(a.compatible(&b));
        let c = ClusterTree::from_endpoints(&[2, 4, 8, 8]).unwrap();
        let d = ClusterTree::from_endpoints(&[1, 2, 3, 8]).unwrap();
        assert!(!c.compatible(&d));
        // Equal n but different depth.
        let e = ClusterTree::default_cluster(8, 2);
        assert!(!e.compatible(&a));
    }

    #[test]
    fn pair_trees_share_depth() {
        let (r, c) = ClusterTree::pair(100, 7, 8);
        assert_eq!(r.depth(), c.depth());
        assert_eq!(r.n(), 100);
        assert_eq!(c.n(), 7);
        // The small tree necessarily contains empty leaves.
        assert!(c.leaf_endpoints().windows(2).any(|w| w[0] == w[1]));
    }

    #[test]
    fn subtree_matches_child_ranges() {
        let t = ClusterTree::default_cluster(10, 2);
        let left = t.subtree(0);
        let right = t.subtree(1);
        assert_eq!(left.n() + right.n(), 10);
        assert_eq!(left.depth(), t.depth() - 1);
        let split = t.range(1, 0).end;
        for i in 0..left.leaf_count() {
            let sub = left.range(left.depth(), i);
            let full = t.range(t.depth(), i);
            assert_eq!(sub.start, full.start);
            assert_eq!(sub.end, full.end);
        }
        for i in 0..right.leaf_count() {
            let sub = right.range(right.depth(), i);
            let full = t.range(t.depth(), right.leaf_count() + i);
            assert_eq!(sub.start + split, full.start);
            assert_eq!(sub.end + split, full.end);
        }
    }

    proptest! {
        /// Ceiling split: within each parent the children differ by at most
        /// one index, matching the reference recursion at every level.
        #[test]
        fn default_cluster_matches_reference(n in 1usize..3000, nmin in 1usize..400) {
            let t = ClusterTree::default_cluster(n, nmin);
            let reference = reference_split(n, t.depth());
            for level in 0..=t.depth() {
                for (idx, &(a, b)) in reference[level].iter().enumerate() {
                    let r = t.range(level, idx);
                    prop_assert_eq!(r.start, a);
                    prop_assert_eq!(r.end, b);
                }
            }
            // Stopping rule: all leaves within nmin, and depth is minimal.
            let leaf_sizes: Vec<usize> =
                (0..t.leaf_count()).map(|i| t.node_size(t.depth(), i)).collect();
            prop_assert!(leaf_sizes.iter().all(|&s| s <= nmin));
            if t.depth() > 0 {
                let coarser = reference_split(n, t.depth() - 1);
                prop_assert!(coarser[t.depth() - 1].iter().any(|&(a, b)| b - a > nmin));
            }
        }

        /// Pairwise-max reconstruction yields a valid partition of every
        /// stored tree at every level.
        #[test]
        fn level_endpoints_are_consistent(raw in proptest::collection::vec(0usize..50, 1..32)) {
            // Build a nondecreasing endpoint vector of power-of-two length.
            let len = raw.len().next_power_of_two();
            let mut c: Vec<usize> = raw.clone();
            c.resize(len, 0);
            let mut acc = 1usize; // ensure final endpoint >= 1
            for e in c.iter_mut() {
                acc += *e;
                *e = acc;
            }
            let t = ClusterTree::from_endpoints(&c).unwrap();
            for level in (1..=t.depth()).rev() {
                let fine = t.endpoints_at_level(level);
                let coarse = t.endpoints_at_level(level - 1);
                for (i, &e) in coarse.iter().enumerate() {
                    prop_assert_eq!(e, fine[2 * i + 1]);
                    prop_assert!(fine[2 * i] <= e);
                }
            }
        }
    }
}
