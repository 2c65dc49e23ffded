//! Hankel matrices and the truncated moment problem.
//!
//! Builds Hankel matrices from moment sequences, checks positive
//! semidefiniteness, and decides whether a truncated sequence admits a
//! representing distribution — printing the witness extension when it does.
//!
//! ```bash
//! cargo run -p entcap --example hankel_feasibility
//! ```

use entcap::moments::{Feasibility, MomentSequence};

fn main() {
    // Standard normal moments 1, 0, 1, 0, 3: the order-2 Hankel matrix is
    // positive definite, as it must be for a continuous distribution.
    let gaussian = MomentSequence::new(vec![1.0, 0.0, 1.0, 0.0, 3.0]).unwrap();
    let hankel = gaussian.hankel(2).unwrap();
    println!("Gaussian moment prefix (1, 0, 1, 0, 3):");
    for i in 0..hankel.size() {
        let row: Vec<f64> = (0..hankel.size()).map(|j| hankel.entry(i, j)).collect();
        println!("  {row:?}");
    }
    println!("  verdict: {:?}", hankel.psd_check(hankel.default_tolerance()));
    println!("  leading minors: {:?}", hankel.leading_minors());

    // A fair +-1 coin: the same machinery detects the singular (boundary)
    // case — the distribution has only two atoms.
    let coin = MomentSequence::new(vec![1.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
    let hankel = coin.hankel(2).unwrap();
    println!("\nFair-coin prefix (1, 0, 1, 0, 1):");
    println!("  verdict: {:?}", hankel.psd_check(hankel.default_tolerance()));
    println!("  leading minors: {:?}", hankel.leading_minors());

    // Truncated feasibility: can (1, 0, 1, 0) be completed to the moments
    // of a real distribution? Yes - any fourth moment >= 1 works, and the
    // witness is the minimal (two-atom) completion.
    let prefix = MomentSequence::new(vec![1.0, 0.0, 1.0, 0.0]).unwrap();
    match prefix.truncated_feasible(1e-10).unwrap() {
        Feasibility::Feasible { extension } => {
            println!("\n(1, 0, 1, 0) is feasible with witness s4 = {:?}", extension)
        }
        Feasibility::Infeasible { reason } => println!("\ninfeasible: {reason}"),
    }

    // Negative variance: no distribution exists.
    let bad = MomentSequence::new(vec![1.0, 0.0, -1.0]).unwrap();
    match bad.truncated_feasible(1e-10).unwrap() {
        Feasibility::Feasible { .. } => println!("(1, 0, -1) feasible?!"),
        Feasibility::Infeasible { reason } => {
            println!("(1, 0, -1) is infeasible: {reason}")
        }
    }

    // Centering: moments of X - E[X] via the binomial re-expansion.
    let shifted = MomentSequence::new(vec![1.0, 1.0, 2.0]).unwrap();
    println!(
        "\ncentering (1, 1, 2) -> {:?}",
        shifted.centered().unwrap().values()
    );
}
