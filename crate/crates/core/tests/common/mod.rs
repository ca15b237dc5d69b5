#![allow(dead_code)]

use halfflow::MultiflowInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn k13() -> MultiflowInstance {
    MultiflowInstance::parse(include_str!("../fixtures/k13.json")).unwrap()
}

pub fn triangle() -> MultiflowInstance {
    MultiflowInstance::parse(include_str!("../fixtures/triangle.json")).unwrap()
}

pub fn fixture_path(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// A random instance with `k` terminals, `free` nonterminals and about
/// `edges` edges, none of them joining two terminals.
pub fn random_instance(rng: &mut ChaCha8Rng, k: usize, free: usize, edges: usize, max_cap: i64) -> MultiflowInstance {
    let n = k + free;
    let names: Vec<String> = (0..n).map(|v| if v < k { format!("s{v}") } else { format!("v{}", v - k) }).collect();
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if u >= k || v >= k {
                pairs.push((u, v));
            }
        }
    }
    let mut chosen = Vec::new();
    while chosen.len() < edges && !pairs.is_empty() {
        let idx = rng.gen_range(0..pairs.len());
        chosen.push(pairs.swap_remove(idx));
    }
    let capacity = (0..n).map(|v| if v < k { 0 } else { rng.gen_range(0..=max_cap) }).collect();
    MultiflowInstance::new(names, chosen, (0..k).collect(), capacity).unwrap()
}

/// Random instances within the acceptance size limits.
pub fn random_batch(seed: u64, count: usize, max_free: usize) -> Vec<MultiflowInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(2..=5);
            let free = rng.gen_range(1..=max_free.min(12 - k));
            let max_edges = 20.min(k * free + free * (free - 1) / 2);
            let edges = rng.gen_range(1..=max_edges);
            random_instance(&mut rng, k, free, edges, 4)
        })
        .collect()
}
