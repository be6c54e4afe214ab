//! Runs the exact oracle over a parameter grid and prints one line per instance.

use std::time::Instant;

use cwcode::oracle::{max_code_exact, word_count};
use cwcode::{johnson_bound, CodeParams};

fn main() {
    let limit: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);
    let total = Instant::now();
    for q in 2..=4u32 {
        for w in 1..=4usize {
            for d in 2..=2 * w {
                for n in w..=8 {
                    let p = CodeParams::new(q, n, d, w).unwrap();
                    if word_count(&p).unwrap() > 5000 {
                        continue;
                    }
                    let start = Instant::now();
                    let r = max_code_exact(&p, limit).unwrap();
                    println!(
                        "{p} A>={} exact={} nodes={} floor={} ms={}",
                        r.value,
                        r.exhausted,
                        r.nodes_explored,
                        johnson_bound(&p).floor_value,
                        start.elapsed().as_millis()
                    );
                }
            }
        }
    }
    eprintln!("total {:?}", total.elapsed());
}
