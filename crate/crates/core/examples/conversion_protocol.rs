//! Mode-to-particle conversion: particle entropy of the delivered pair as a
//! function of the anharmonicity and the level assignment.
//!
//! ```text
//! cargo run --example conversion_protocol
//! ```

use modent::oscillator::{adiabatic_check, build_model, AdiabaticBudget, ModeAssignment, DEFAULT_RATIO_THRESHOLD};
use modent::protocol::{assemble_final_state, particle_entanglement_entropy};
use modent::C64;

fn main() -> modent::Result<()> {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let assignment = ModeAssignment::default();
    println!("{:>8} {:>12} {:>8} {:>8}", "lambda", "S [bit]", "r1", "r2");
    for lambda in [0.0, 0.005, 0.01, 0.02, 0.05, 0.1, 0.5, 2.0] {
        let model = build_model(lambda, 48)?;
        let state = assemble_final_state(h, h, &model, &assignment)?;
        let s = particle_entanglement_entropy(&state)?;
        let timing = if lambda > 0.0 {
            let report = adiabatic_check(&AdiabaticBudget::for_modes(&model, &assignment, 1e4, DEFAULT_RATIO_THRESHOLD)?);
            format!("{:>8.2} {:>8.2}{}", report.r1, report.r2, if report.pass { "" } else { "  too fast" })
        } else {
            String::new()
        };
        println!("{lambda:>8} {s:>12.3e} {timing}");
    }

    println!("\nlevel pairs at lambda = 0.5:");
    let model = build_model(0.5, 48)?;
    for (a, b) in [(0, 1), (1, 2), (0, 2), (2, 3)] {
        let state = assemble_final_state(h, h, &model, &ModeAssignment::new(a, b)?)?;
        println!("  ({a},{b})  S = {:.6}", particle_entanglement_entropy(&state)?);
    }
    Ok(())
}
