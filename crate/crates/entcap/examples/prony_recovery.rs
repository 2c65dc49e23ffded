//! Recovering an atomic distribution from its moments.
//!
//! A distribution with d atoms is pinned down by its first 2d-1 moments;
//! the recovery solves the Hankel system for the orthogonal polynomial,
//! takes its roots as atom positions, and solves a Vandermonde system for
//! the weights.
//!
//! ```bash
//! cargo run -p entcap --example prony_recovery
//! ```

use entcap::atomic::AtomicDistribution;
use entcap::moments::MomentSequence;

fn main() {
    // Forward: moments of a two-atom distribution.
    let original =
        AtomicDistribution::new(vec![-1.0, 2.0], vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
    let moments = original.moments(3);
    println!("atoms   {:?}", original.atoms());
    println!("weights {:?}", original.weights());
    println!("moments {:?}", moments.values());

    // Backward: the moments alone reproduce the distribution.
    let recovered = AtomicDistribution::from_moments(&moments, 1e-9).unwrap();
    println!("recovered atoms   {:?}", recovered.atoms());
    println!("recovered weights {:?}", recovered.weights());

    // A rank-deficient case: hand over five moments of the same two-atom
    // distribution (as if three atoms were possible); the recovery detects
    // the smaller support.
    let over = original.moments(5);
    let recovered = AtomicDistribution::from_moments(&over, 1e-9).unwrap();
    println!(
        "\nfrom 5 moments: {} atoms at {:?}",
        recovered.len(),
        recovered.atoms()
    );

    // Infeasible moments have no representing distribution.
    let bad = MomentSequence::new(vec![1.0, 0.0, -1.0]).unwrap();
    match AtomicDistribution::from_moments(&bad, 1e-9) {
        Ok(_) => println!("unexpected recovery"),
        Err(e) => println!("\n(1, 0, -1) fails as expected: {e}"),
    }

    // Larger roundtrip: six atoms, eleven moments.
    let six = AtomicDistribution::new(
        vec![-4.0, -2.5, -0.5, 1.0, 2.0, 4.5],
        vec![0.1, 0.2, 0.25, 0.15, 0.2, 0.1],
    )
    .unwrap();
    let recovered = AtomicDistribution::from_moments(&six.moments(11), 1e-7).unwrap();
    let max_atom_err = six
        .atoms()
        .iter()
        .zip(recovered.atoms())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    println!("\nsix-atom roundtrip: max atom error {max_atom_err:.2e}");
}
