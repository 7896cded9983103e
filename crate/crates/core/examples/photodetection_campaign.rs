//! Monte-Carlo campaign of heralded conversion cycles with a finite-efficiency
//! screen, with and without the clocked abort gate.
//!
//! ```text
//! cargo run --release --example photodetection_campaign [trials]
//! ```

use modent::protocol::{ConversionConfig, ConversionProtocol};

fn main() -> modent::Result<()> {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    for gate in [true, false] {
        let mut config = ConversionConfig::default();
        config.ancilla.eta = 0.9;
        config.abort_gate = gate;
        let protocol = ConversionProtocol::new(config)?;
        let campaign = protocol.run_campaign(trials, 7)?;
        let s = &campaign.stats;
        println!("abort gate {}", if gate { "on" } else { "off" });
        println!("  landed {:.4}  delivered {:.4} (expected {:.4})  aborted {:.4}",
            s.landing_rate, s.delivered_rate, config.expected_delivered_rate(), s.abort_rate);
        println!("  fidelity mean {:.8} min {:.8}", s.mean_fidelity.unwrap_or(f64::NAN), s.min_fidelity.unwrap_or(f64::NAN));
        println!("  particle entropy mean {:.3e}", s.mean_entropy.unwrap_or(f64::NAN));
    }
    Ok(())
}
