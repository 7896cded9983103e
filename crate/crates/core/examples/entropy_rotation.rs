//! Mode entanglement of one photon pair under a beam-splitter rotation of
//! the two modes.
//!
//! ```text
//! cargo run --example entropy_rotation
//! ```

use std::f64::consts::FRAC_PI_2;

use modent::polarization::{mode_rotation_entropy_scan, rotate_modes, two_mode_single_pair, MODE_A, MODE_B};

fn main() -> modent::Result<()> {
    let scan = mode_rotation_entropy_scan(0.0, FRAC_PI_2, 17)?;
    println!("{:>8} {:>12} {:>12}", "phi", "S_vN", "S_2");
    for row in scan.rows() {
        println!("{:>8.4} {:>12.8} {:>12.8}", row[0], row[1], row[2]);
    }

    let rotated = rotate_modes(&two_mode_single_pair(), MODE_A, MODE_B, FRAC_PI_2 / 4.0)?;
    println!("\nFock amplitudes at phi = pi/8:");
    for n in 0..3 {
        for m in 0..3 {
            let a = rotated.amplitude(&[n, m])?;
            if a.norm() > 1e-12 {
                println!("  |{n},{m}>  {:+.6}", a.re);
            }
        }
    }
    Ok(())
}
