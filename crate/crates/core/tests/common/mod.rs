#![allow(dead_code)]

use bprod_core::genus::{GenusSymbol, JordanComponent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TABLE: [&str; 15] = bprod_core::classify::REFERENCE_SIMPLE;

pub fn table() -> Vec<GenusSymbol> {
    TABLE.iter().map(|s| s.parse().unwrap()).collect()
}

/// Deterministic sample of existing square-free genus symbols with |D| ≤ bound.
pub fn random_symbols(count: usize, bound: u128, primes: &[u32], seed: u64) -> Vec<GenusSymbol> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<GenusSymbol> = Vec::new();
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        assert!(tries < 100_000, "sampler is stuck");
        let mut comps = Vec::new();
        let mut order = 1u128;
        for &p in primes {
            if !rng.gen_bool(0.5) {
                continue;
            }
            let step = if p == 2 { 2 } else { 1 };
            let rank = step * rng.gen_range(1..=3u32);
            order *= (p as u128).pow(rank);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            comps.push(JordanComponent::new(p, rank, sign));
        }
        if comps.is_empty() || order > bound {
            continue;
        }
        let start = 2 * rng.gen_range(2..=10u32);
        let found = (0..8)
            .map(|i| start + 2 * i)
            .filter_map(|n| GenusSymbol::new(n, comps.clone()).ok())
            .find(|g| g.exists());
        if let Some(g) = found {
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}
