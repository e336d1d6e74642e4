use std::time::Instant;

use spherical_designs::sidon::{lower_bound_size, max_sidon_search, SearchBudget};

fn main() {
    let from: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2);
    let to: u64 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(60);
    let total = Instant::now();
    for n in from..=to {
        let start = Instant::now();
        let r = max_sidon_search(n, 3, SearchBudget::unlimited()).unwrap();
        println!(
            "n={n:4} s={:3} bound={:3} nodes={:>12} {:>8.3}s",
            r.max_cardinality,
            lower_bound_size(n, 3).unwrap(),
            r.nodes_explored,
            start.elapsed().as_secs_f64()
        );
    }
    println!("total {:.2}s", total.elapsed().as_secs_f64());
}
