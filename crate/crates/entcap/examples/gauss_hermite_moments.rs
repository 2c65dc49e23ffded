//! Gauss-Hermite quadrature distributions.
//!
//! The m-point rule is the unique m-atom distribution matching the
//! standard normal moments through order 2m-1. Its entropy grows like
//! (1/2) log m, so matching ever more moments costs unbounded entropy.
//!
//! ```bash
//! cargo run -p entcap --example gauss_hermite_moments
//! ```

use entcap::atomic::gauss_hermite;

fn gaussian_moment(n: usize) -> f64 {
    if n % 2 == 1 {
        0.0
    } else {
        (1..n).step_by(2).map(|j| j as f64).product()
    }
}

fn main() {
    for m in [1usize, 2, 3, 5] {
        let dist = gauss_hermite(m).unwrap();
        println!("m = {m}");
        println!("  atoms   {:?}", dist.atoms());
        println!("  weights {:?}", dist.weights());
        let moments = dist.moments(2 * m);
        let matched = (0..2 * m)
            .all(|n| (moments.values()[n] - gaussian_moment(n)).abs() < 1e-8);
        println!(
            "  matches Gaussian moments through order {}: {matched}",
            2 * m - 1
        );
        println!(
            "  moment {} is {:.4} vs Gaussian {:.4}",
            2 * m,
            moments.values()[2 * m],
            gaussian_moment(2 * m)
        );
    }

    println!("\nentropy growth against (1/2) ln m:");
    for m in [4usize, 16, 64, 256, 1024] {
        let h = gauss_hermite(m).unwrap().entropy_nats();
        println!(
            "  m = {m:5}: H = {h:.4} nats, ratio to (1/2) ln m = {:.3}",
            h / (0.5 * (m as f64).ln())
        );
    }
}
