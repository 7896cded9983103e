//! Quartic anharmonic oscillator: spectrum, overlap with the harmonic
//! levels and narrowing of the ground state.
//!
//! ```text
//! cargo run --example anharmonic_oscillator [lambda]
//! ```

use modent::oscillator::{build_model, first_order_energy, mode_overlap};

fn main() -> modent::Result<()> {
    let lambda: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.04);
    let model = build_model(lambda, 64)?;
    println!("lambda = {lambda}, truncation = {}", model.truncation());
    println!("{:>3} {:>14} {:>14} {:>10} {:>10}", "n", "E_n", "first order", "s_n", "<x^2>");
    for n in 0..6 {
        println!(
            "{n:>3} {:>14.10} {:>14.10} {:>10.6} {:>10.6}",
            model.energy(n)?,
            first_order_energy(n, lambda),
            mode_overlap(&model, n)?,
            model.position_variance(n)?,
        );
    }
    Ok(())
}
