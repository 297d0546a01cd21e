//! Deterministic sampling: every sample gets its own generator seeded with
//! `base seed + sample index`, so samples can be drawn in any order or in
//! parallel and still reproduce.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactlin::Field;
use crate::laurent::CharacterPoint;

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index))
}

/// `count` characters of `(k^*)^n`, uniform over `F_p^*` coordinates or small
/// nonzero rationals.
pub fn sample_characters(field: Field, n: usize, count: usize, seed: u64) -> Vec<CharacterPoint> {
    (0..count as u64).map(|i| CharacterPoint::random(field, n, &mut rng_for(seed, i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let f = Field::default_prime();
        assert_eq!(sample_characters(f, 4, 5, 9), sample_characters(f, 4, 5, 9));
        assert_ne!(sample_characters(f, 4, 5, 9), sample_characters(f, 4, 5, 10));
        // sample i of seed s equals sample i-1 of seed s+1
        assert_eq!(sample_characters(f, 4, 3, 9)[1..], sample_characters(f, 4, 2, 10)[..]);
    }
}
