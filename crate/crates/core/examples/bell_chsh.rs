//! CHSH sum for the polarization pair as the analyzer separation varies.
//!
//! ```text
//! cargo run --example bell_chsh
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

use modent::polarization::{chsh_scan, chsh_sum, correlation, AnalyzerSettings, ChshSettings};

fn main() -> modent::Result<()> {
    let best = chsh_sum(ChshSettings { theta: FRAC_PI_8 });
    println!("S(pi/8) = {best:.12}  (2*sqrt(2) = {:.12})", 2.0 * 2f64.sqrt());
    println!("E(0, pi/8) = {:.12}", correlation(AnalyzerSettings::new(0.0, FRAC_PI_8)));

    let scan = chsh_scan(0.0, FRAC_PI_2, 9)?;
    println!("\n{:>8} {:>10} {:>8}", "theta", "S", "entropy");
    for row in scan.rows() {
        let flag = if row[1].abs() > 2.0 { "  violates" } else { "" };
        println!("{:>8.4} {:>10.6} {:>8.4}{flag}", row[0], row[1], row[2]);
    }
    Ok(())
}
