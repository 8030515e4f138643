//! Run parameters shared by the distribution-sweeping solvers.

use std::error::Error;
use std::fmt;

/// How the branching factor K is chosen at each recursion level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KRule {
    /// Parallel level: K = P. Sequential levels: K = max(2, min(M/B, ceil(n/M))).
    Paper,
    /// The same K at every level.
    Fixed(usize),
}

/// How slab boundaries are computed at each level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionMode {
    /// Evenly spaced boundaries over the level's x-extent. Avoids an extra
    /// sort; depth degrades only with extreme coordinate spread.
    UniformSpace,
    /// Boundaries at every ceil(n/K)-th x value, so child slabs hold equal
    /// object counts. Requires an x-sort per level.
    EqualCount,
}

/// Backing store for the per-slab highest-spanning-segment state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanStore {
    /// Segment tree over the K slabs: O(log K) per update/query.
    Tree,
    /// Flat K-array updated slab by slab: O(K) per spanning update. Only
    /// useful as a diagnostic foil for the tree; not exposed on the CLI.
    Array,
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    /// Base-case / cache-size parameter, in objects.
    pub m: usize,
    /// Block-size parameter, in objects. Enters only the K rule and metrics.
    pub b: usize,
    /// Number of parallel workers.
    pub p: usize,
    pub k_rule: KRule,
    /// Generator seed carried alongside the run for provenance.
    pub seed: u64,
    pub partition_mode: PartitionMode,
    /// Parallel cross-check mode: seed each worker's tree from the prefix
    /// matrix and repeat the sweep instead of patching answers during
    /// compaction.
    pub two_sweep: bool,
    pub span_store: SpanStore,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            m: 1 << 21,
            b: 2,
            p: 1,
            k_rule: KRule::Paper,
            seed: 0,
            partition_mode: PartitionMode::UniformSpace,
            two_sweep: false,
            span_store: SpanStore::Tree,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.b == 0 {
            return Err(ConfigError("B must be positive".into()));
        }
        if self.m < 2 * self.b {
            return Err(ConfigError(format!(
                "M must be at least 2B (M = {}, B = {})",
                self.m, self.b
            )));
        }
        if self.p == 0 {
            return Err(ConfigError("P must be at least 1".into()));
        }
        if let KRule::Fixed(k) = self.k_rule {
            if k < 2 {
                return Err(ConfigError(format!("fixed K must be at least 2 (got {k})")));
            }
        }
        Ok(())
    }

    /// Branching factor for a sequential level over `n` objects.
    pub(crate) fn sequential_k(&self, n: usize) -> usize {
        match self.k_rule {
            KRule::Fixed(k) => k,
            KRule::Paper => (self.m / self.b).min(n.div_ceil(self.m)).max(2),
        }
    }

    /// Branching factor for the one parallel level.
    pub(crate) fn parallel_k(&self) -> usize {
        match self.k_rule {
            KRule::Fixed(k) => k,
            KRule::Paper => self.p,
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid run config: {}", self.0)
    }
}

impl Error for ConfigError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        assert!(RunConfig::default().validate().is_ok());
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut c = RunConfig::default();
        c.m = 3;
        c.b = 2;
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.p = 0;
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.k_rule = KRule::Fixed(1);
        assert!(c.validate().is_err());
    }

    #[test]
    fn paper_rule_k_values() {
        let c = RunConfig {
            m: 1024,
            b: 2,
            ..RunConfig::default()
        };
        // n/M dominates below M^2/B.
        assert_eq!(c.sequential_k(8192), 8);
        // M/B caps.
        assert_eq!(c.sequential_k(1 << 24), 512);
        // Never below 2.
        assert_eq!(c.sequential_k(10), 2);
    }
}
