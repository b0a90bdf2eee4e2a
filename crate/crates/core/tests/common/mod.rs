#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smallest achievable max |a_i - b_pi(i)| over permutations `pi`, by DP over
/// subsets of `b`. Fine for the degrees used here (at most 12).
pub fn bottleneck_matching(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let m = a.len();
    let mut dp = vec![f64::INFINITY; 1 << m];
    dp[0] = 0.0;
    for mask in 0..(1usize << m) {
        if dp[mask].is_infinite() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == m {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if mask & (1 << j) == 0 {
                let cand = dp[mask].max((a[i] - bj).norm());
                let next = mask | (1 << j);
                if cand < dp[next] {
                    dp[next] = cand;
                }
            }
        }
    }
    dp[(1 << m) - 1]
}

/// `count` points uniform in the closed unit disk.
pub fn disk_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            let r = rng.random::<f64>().sqrt();
            Complex64::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
