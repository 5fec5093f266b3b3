//! Brute-force reference computations shared by the integration tests.
//! None of these call the library routine they are used to check.

#![allow(dead_code)]

use hypercover::{CoverFamily, CubePoint, PointSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

pub fn seed() -> u64 {
    std::env::var("HYPERCOVER_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Independent stream per test section.
pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn point(n: usize, bits: u64) -> CubePoint {
    CubePoint::new(n, bits).unwrap()
}

/// Number of planes (with multiplicity) through each point, by direct
/// evaluation of every plane at every point.
pub fn brute_counts(f: &CoverFamily) -> Vec<u32> {
    let n = f.dim();
    (0..1u64 << n)
        .map(|x| {
            f.entries()
                .iter()
                .filter(|e| {
                    let dot: i128 = (0..n)
                        .filter(|&i| (x >> i) & 1 == 1)
                        .map(|i| e.plane.normal()[i] as i128)
                        .sum();
                    dot == e.plane.offset() as i128
                })
                .map(|e| e.mult)
                .sum::<u32>()
        })
        .collect()
}

pub fn brute_cover_ok(f: &CoverFamily, s: &PointSet, t: u32, l: u32) -> bool {
    let counts = brute_counts(f);
    counts.iter().enumerate().all(|(x, &c)| {
        if s.contains(&point(f.dim(), x as u64)) {
            c == l
        } else {
            c >= t
        }
    })
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// Minimum `|I|` over all `(v, I)` by trying every subset of coordinates.
pub fn brute_index_complexity(s: &PointSet) -> usize {
    let n = s.dim();
    let pts: Vec<u64> = s.iter().map(|p| p.bits()).collect();
    (0u64..1 << n)
        .filter(|&mask| {
            pts.iter()
                .any(|&v| pts.iter().all(|&u| u == v || (u ^ v) & mask != 0))
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .expect("the full index set always separates")
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}
