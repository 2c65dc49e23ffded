//! AWGN mutual information, MMSE, and the I-MMSE identities.
//!
//! For an atomic input the channel output density is a Gaussian mixture;
//! mutual information and MMSE come from per-atom Gauss-Hermite averaging
//! with node-doubling convergence checks. The integral identities tie the
//! two quantities (and the input entropy) together and cross-validate the
//! numerics.
//!
//! ```bash
//! cargo run -p entcap --example awgn_information
//! ```

use entcap::atomic::{gauss_hermite, AtomicDistribution};
use entcap::channel::{
    capacity, capacity_gap, entropy_via_mmse, i_mmse_check, ChannelPoint, IntegrationSpec,
};

const LN_2: f64 = std::f64::consts::LN_2;

fn main() {
    let spec = IntegrationSpec::default();
    let binary = AtomicDistribution::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();

    println!("binary +-1 input:");
    println!("{:>8} {:>12} {:>12} {:>12}", "snr", "I (bits)", "mmse", "C (bits)");
    for snr in [0.1, 1.0, 10.0, 400.0] {
        let pt = ChannelPoint::new(binary.clone(), snr).unwrap();
        println!(
            "{snr:>8} {:>12.6} {:>12.6} {:>12.6}",
            pt.mutual_information(&spec).unwrap() / LN_2,
            pt.mmse(&spec).unwrap(),
            capacity(snr).unwrap() / LN_2
        );
    }
    println!("(information saturates at H(X) = 1 bit as the noise vanishes)");

    // I-MMSE: I(X, snr) = 1/2 * integral of mmse over [0, snr]. The two
    // sides come from independent numerics.
    println!("\nI-MMSE identity residuals:");
    for (name, input, snr) in [
        ("binary, snr 1", binary.clone(), 1.0),
        ("GH(3), snr 0.5", gauss_hermite(3).unwrap(), 0.5),
    ] {
        let residual = i_mmse_check(&input, snr, &spec).unwrap();
        println!("  {name}: {residual:+.3e} nats");
    }

    // Entropy from the MMSE integral: H(X) = 1/2 * integral over [0, inf).
    let est = entropy_via_mmse(&binary, 1e4, &spec).unwrap();
    println!(
        "\nentropy via mmse integral: {:.6} nats (H = {:.6}; truncation <= {:.1e})",
        est.value_nats,
        binary.entropy_nats(),
        est.truncation_bound_nats.unwrap_or(f64::NAN)
    );

    // Non-Gaussianity: the capacity gap of a standardized input. The more
    // Gaussian moments the input matches, the smaller the gap at low snr.
    println!("\ncapacity gaps at snr = 0.1:");
    for m in [2usize, 3, 5] {
        let gap = capacity_gap(&gauss_hermite(m).unwrap(), 0.1, &spec).unwrap();
        println!("  GH({m}) ({} moments matched): {gap:.3e} nats", 2 * m - 1);
    }
}
