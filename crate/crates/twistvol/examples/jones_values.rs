//! Evaluate the colored Jones polynomial at its root of unity for a few
//! small colors and print the exact-looking values alongside the growth
//! number v_N = 2 pi log|J_N| / N.
//!
//! Run with: cargo run --release --example jones_values

use std::f64::consts::TAU;
use twistvol::jones::{colored_jones, TwistKnotSpec};

fn main() {
    for p in [2, 3, -2] {
        let spec = TwistKnotSpec::new(p).unwrap();
        println!("twist parameter p = {p} (sum depth {}):", spec.dimension());
        for n in 1..=6 {
            let j = colored_jones(&spec, n).unwrap();
            let v = TAU * j.log_abs / n as f64;
            println!(
                "  N = {n}:  J_N = {:+.9} {:+.9} i   |J_N| = {:12.6}   v_N = {:.9}",
                j.value.re,
                j.value.im,
                j.value.norm(),
                v
            );
        }
        println!();
    }
    println!("note: J_2 has |J_2| = 4|p| - 1 (the knot determinant), and the");
    println!("mirror p -> -p conjugates every value, so |J_N| and v_N agree.");
}
