//! The dominant-atom decomposition of low-entropy variables.
//!
//! Any distribution whose heaviest atom carries more than half the mass
//! splits as "anchor with probability 1 - eps, tail draw otherwise", and
//! the entropy splits exactly: H(X) = h2(eps) + eps * H(tail).
//!
//! ```bash
//! cargo run -p entcap --example decompose_compose
//! ```

use entcap::atomic::{binary_entropy, gauss_hermite, AtomicDistribution};
use entcap::low_entropy::{compose, decompose, Decomposition};

fn main() {
    // The 3-point Gauss-Hermite distribution is itself a composition:
    // anchor 0 with mass 2/3, tail +-sqrt(3) with mass 1/3.
    let gh3 = gauss_hermite(3).unwrap();
    let dec = decompose(&gh3).unwrap();
    println!("GH(3) decomposition:");
    println!("  anchor    {}", dec.anchor());
    println!("  tail mass {}", dec.tail_mass());
    println!("  tail      {:?} / {:?}", dec.tail().atoms(), dec.tail().weights());

    let h = gh3.entropy(2.0);
    let identity = binary_entropy(dec.tail_mass(), 2.0).unwrap()
        + dec.tail_mass() * dec.tail().entropy(2.0);
    println!("  H(X) = {h:.10} bits");
    println!("  h2(eps) + eps H(tail) = {identity:.10} bits");

    // Composing back reproduces the distribution to machine rounding.
    let back = compose(&dec);
    let max_dev = back
        .atoms()
        .iter()
        .chain(back.weights())
        .zip(gh3.atoms().iter().chain(gh3.weights()))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    println!("  compose(decompose(X)) deviates from X by at most {max_dev:.1e}");

    // Building low-entropy variables directly: a heavy anchor at zero
    // with a light, far-out tail.
    let tail = AtomicDistribution::new(vec![-6.0, 6.0], vec![0.5, 0.5]).unwrap();
    let skewed = compose(&Decomposition::new(0.0, 0.05, tail).unwrap());
    println!("\nanchor 0, tail mass 0.05, tail at +-6:");
    println!("  atoms   {:?}", skewed.atoms());
    println!("  weights {:?}", skewed.weights());
    println!("  entropy {:.4} bits", skewed.entropy(2.0));
    println!("  variance {:.4}", skewed.variance());

    // The hypothesis matters: with no dominant atom there is no
    // decomposition.
    let fair = AtomicDistribution::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
    match decompose(&fair) {
        Ok(_) => println!("\nfair coin decomposed?!"),
        Err(e) => println!("\nfair coin: {e}"),
    }
}
