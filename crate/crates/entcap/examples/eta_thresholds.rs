//! Critical tail mass and entropy thresholds.
//!
//! For every continuous target there is a tail-mass threshold below which
//! no dominant-atom variable matches four target moments; its binary
//! entropy is the entropy threshold for four-moment matching. Symmetric
//! targets have a closed form; general targets go through the certified
//! numerical sweep.
//!
//! ```bash
//! cargo run -p entcap --example eta_thresholds
//! ```

use entcap::low_entropy::{critical_tail_mass, TargetMoments};

fn main() {
    let targets = [
        ("standard normal", TargetMoments::standard_normal()),
        (
            "uniform on [-sqrt(3), sqrt(3)]",
            TargetMoments::new(vec![0.0, 1.0, 0.0, 9.0 / 5.0], true).unwrap(),
        ),
        (
            "unit-variance Laplace",
            TargetMoments::new(vec![0.0, 1.0, 0.0, 6.0], true).unwrap(),
        ),
        (
            "centered exponential",
            TargetMoments::new(vec![0.0, 1.0, 2.0, 9.0], false).unwrap(),
        ),
    ];

    println!("{:<32} {:>10} {:>16} {:>22}", "target", "eta", "threshold", "method");
    for (name, target) in targets {
        let t = critical_tail_mass(&target).unwrap();
        println!(
            "{name:<32} {:>10.6} {:>11.6} bits {:>22}",
            t.value,
            t.entropy_threshold_bits,
            format!("{:?}", t.method)
        );
    }

    // The Gaussian threshold in fractions: eta = 1/3 since m4 = 3 m2^2.
    let gaussian = critical_tail_mass(&TargetMoments::standard_normal()).unwrap();
    println!(
        "\nGaussian: eta = {:.12} (= 1/3), h2(eta) = {:.6} bits",
        gaussian.value, gaussian.entropy_threshold_bits
    );

    // Below that entropy, four Gaussian moments are unmatchable; at or
    // above it, the 3-point Gauss-Hermite distribution already matches
    // five moments with entropy h2(1/3) + 1/3 bits.
    let gh3 = entcap::atomic::gauss_hermite(3).unwrap();
    println!(
        "GH(3): five Gaussian moments at H = {:.6} bits (threshold + 1/3)",
        gh3.entropy(2.0)
    );
}
