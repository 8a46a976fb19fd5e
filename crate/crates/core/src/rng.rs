//! Seeded randomness for "general position" choices.
//!
//! Every random draw in the library comes from a `ChaCha8Rng` seeded from an explicit `u64`;
//! independent sub-streams are derived with [`sub_seed`] so that results do not depend on
//! the order in which draws are consumed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{rat, GRat, Rat};

/// Splitmix64 mixing of a seed with a stream tag.
pub fn sub_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sub_seed(seed, tag))
}

/// Stream tags, so that unrelated draws never share a stream.
pub mod tags {
    pub const COORDINATE_CHANGE: u64 = 1;
    pub const QUERY_POINT: u64 = 2;
    pub const BASE_COMBINATION: u64 = 3;
    pub const SAMPLING: u64 = 4;
    pub const SOURCE: u64 = 5;
    pub const FIBER: u64 = 6;
    pub const PROJECTION: u64 = 7;
}

pub fn random_int<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    rng.random_range(-bound..=bound)
}

pub fn random_rat_point<R: Rng>(rng: &mut R, bound: i64) -> [Rat; 3] {
    loop {
        let p = [random_int(rng, bound), random_int(rng, bound), random_int(rng, bound)];
        if p.iter().any(|&c| c != 0) {
            return p.map(rat);
        }
    }
}

pub fn random_grat_point<R: Rng>(rng: &mut R, bound: i64) -> [GRat; 3] {
    random_rat_point(rng, bound).map(GRat::real)
}

/// Random integer matrix with non-zero determinant.
pub fn random_invertible<R: Rng>(rng: &mut R, bound: i64) -> [[i64; 3]; 3] {
    loop {
        let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| random_int(rng, bound)));
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det != 0 {
            return m;
        }
    }
}
