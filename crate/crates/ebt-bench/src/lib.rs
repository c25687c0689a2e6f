//! Shared helpers for the benchmark suite: reproducible random matrices.

use ebt_core::IntMatrix;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A dense random integer matrix with entries uniform in `[-bound, bound]`,
/// reproducible from the seed.
pub fn random_matrix(rows: usize, cols: usize, bound: i64, seed: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    IntMatrix::from_fn(rows, cols, |_, _| {
        BigInt::from(rng.gen_range(-bound..=bound))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = random_matrix(4, 4, 10, 7);
        let b = random_matrix(4, 4, 10, 7);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
