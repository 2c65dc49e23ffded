//! Lower-bounding the entropy-constrained capacity.
//!
//! The feasible set (power at most one, entropy at most h) is reverse
//! convex, so only lower bounds are certified: each is the mutual
//! information of an explicit feasible input found by multi-start
//! projected gradient ascent with the entropy pinned to the boundary.
//!
//! ```bash
//! cargo run -p entcap --example capacity_lower_bound
//! ```

use entcap::capacity::{
    baseline_three_moment, estimate_capacity, sanity_bounds, OptimizationConfig,
};
use entcap::channel::capacity;

const LN_2: f64 = std::f64::consts::LN_2;

fn main() {
    // One bit of input entropy at high snr: the bound approaches 1 bit.
    let h = 1.0 * LN_2;
    let cfg = OptimizationConfig {
        support_size: 2,
        restarts: 2,
        ..OptimizationConfig::for_entropy(h)
    };
    let est = estimate_capacity(h, 100.0, &cfg).unwrap();
    println!(
        "h = 1 bit, snr = 100: C_H >= {:.6} bits (C = {:.4} bits)",
        est.lower_bound_nats / LN_2,
        capacity(100.0).unwrap() / LN_2
    );
    println!("  sanity: {:?}", sanity_bounds(&est).unwrap().pass);
    println!("  best input atoms {:?}", est.best_input.atoms());

    // Low snr, low entropy: the optimizer must at least match the
    // constructive three-moment baseline it is seeded with.
    let h = 0.4 * LN_2;
    let snr = 0.01;
    let (_, baseline_info) = baseline_three_moment(h, snr).unwrap();
    let cfg = OptimizationConfig {
        restarts: 1,
        max_iterations: 25,
        ..OptimizationConfig::for_entropy(h)
    };
    let est = estimate_capacity(h, snr, &cfg).unwrap();
    println!("\nh = 0.4 bits, snr = 0.01:");
    println!("  three-moment baseline: {:.10} nats", baseline_info);
    println!("  optimized bound:       {:.10} nats", est.lower_bound_nats);
    println!("  capacity:              {:.10} nats", capacity(snr).unwrap());

    // Tiny budget: the bound carries almost the whole budget.
    let h = 0.01 * LN_2;
    let cfg = OptimizationConfig {
        restarts: 2,
        max_iterations: 30,
        ..OptimizationConfig::for_entropy(h)
    };
    let est = estimate_capacity(h, 1.0, &cfg).unwrap();
    println!(
        "\nh = 0.01 bits, snr = 1: C_H >= {:.6} bits ({:.1}% of the budget)",
        est.lower_bound_nats / LN_2,
        100.0 * est.lower_bound_nats / h
    );
}
