//! Momentum-entangled atom pair through two Bragg stations.
//!
//! ```text
//! cargo run --example bragg_interferometer
//! ```

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use modent::interferometer::{
    bragg_output, joint_probabilities, momentum_chsh, momentum_chsh_scan, BraggPhases, STATION_A,
};
use modent::state::entanglement_entropy;

fn main() -> modent::Result<()> {
    let phases = BraggPhases::new(FRAC_PI_4, 0.0);
    let p = joint_probabilities(phases);
    println!("phases (pi/4, 0): P++ {:.4} P+- {:.4} P-+ {:.4} P-- {:.4}",
        p.plus_plus, p.plus_minus, p.minus_plus, p.minus_minus);
    println!("output entropy: {:.6} bit", entanglement_entropy(&bragg_output(phases), STATION_A)?);
    println!("S(pi/8) = {:.10}", momentum_chsh(FRAC_PI_8));

    let scan = momentum_chsh_scan(0.0, FRAC_PI_4, 5)?;
    println!("\n{:>10} {:>10}", "vartheta", "S");
    for row in scan.rows() {
        println!("{:>10.4} {:>10.6}", row[0], row[1]);
    }
    Ok(())
}
