/// Resource caps shared by every enumerating construction. Exceeding a cap
/// is reported as [`Error::Resource`](crate::Error::Resource), never by
/// silently truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Objects in any explicitly built groupoid.
    pub max_objects: usize,
    /// Candidate assignments tried by homomorphism, cocycle and functor
    /// enumeration.
    pub max_candidates: u64,
    /// Order of any group built from tables or products.
    pub max_group_order: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_objects: 100_000,
            max_candidates: 10_000_000,
            max_group_order: 4096,
        }
    }
}

impl std::fmt::Display for Budget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "objects<={}, candidates<={}, group order<={}",
            self.max_objects, self.max_candidates, self.max_group_order
        )
    }
}
