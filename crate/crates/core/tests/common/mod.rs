#![allow(dead_code)]

use caustics::cli::parse::parse_curve;
use caustics::euclid::Curve;
use caustics::poly::{rat, MPoly, Rat};
use rand::SeedableRng;

pub fn curve(text: &str) -> Curve {
    Curve::new(parse_curve(text).unwrap()).unwrap()
}

pub fn circle() -> Curve {
    curve("x0^2 + x1^2 - x2^2")
}

pub fn conic() -> Curve {
    curve("x0^2 + 2*x1^2 - x2^2")
}

pub fn fermat_cubic() -> Curve {
    curve("x0^3 + x1^3 + x2^3")
}

pub fn point(a: i64, b: i64, c: i64) -> [Rat; 3] {
    [rat(a), rat(b), rat(c)]
}

/// A seeded random form; not checked for smoothness.
pub fn random_curve(degree: u32, seed: u64) -> Curve {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    Curve::new(MPoly::random(degree, &mut rng, 5)).unwrap()
}

pub fn exceptional_json() -> &'static str {
    r#"{"b00": "1", "b01": "t", "b11": "t^3"}"#
}

pub fn veronese_json() -> &'static str {
    r#"{"b00": "1", "b01": "t", "b02": "t^2", "b11": "t^2", "b12": "t^3", "b22": "t^4"}"#
}

pub fn kernel_line_json() -> &'static str {
    r#"{"b00": "1", "b01": "t"}"#
}
