//! Truncation and construction options.

/// Low-rank truncation method used when compressing dense blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Compression {
    /// Truncated singular value decomposition (optimal, the default).
    #[default]
    Svd,
    /// Householder QR with column pivoting (cheaper, may overshoot the rank).
    Qr,
}

/// Global options shared by all constructors and arithmetic operations.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Relative truncation tolerance for low-rank approximation.
    pub threshold: f64,
    /// Minimal diagonal block size; recursion stops at this cardinality.
    pub block_size: usize,
    /// Compression kernel used on dense blocks.
    pub compression: Compression,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            threshold: 1e-12,
            block_size: 256,
            compression: Compression::Svd,
        }
    }
}

impl Options {
    pub fn with_threshold(mut self, eps: f64) -> Self {
        assert!(eps > 0.0, "threshold must be positive");
        self.threshold = eps;
        self
    }

    pub fn with_block_size(mut self, nmin: usize) -> Self {
        assert!(nmin >= 1, "block size must be at least 1");
        self.block_size = nmin;
        self
    }

    pub fn with_compression(mut self, method: Compression) -> Self {
        self.compression = method;
        self
    }
}
