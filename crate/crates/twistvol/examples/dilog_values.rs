//! Sample the dilogarithm and the Clausen function: special values,
//! the duplication identity, and the circle values that build
//! hyperbolic volumes.
//!
//! Run with: cargo run --release --example dilog_values

use num_complex::Complex64;
use std::f64::consts::PI;
use twistvol::dilog::{clausen, li2, li2_circle, Branch};

fn main() {
    let z6 = PI * PI / 6.0;
    println!("Li2(1)  = pi^2/6        = {z6:.15}");
    println!("Li2(-1) = -pi^2/12      = {:.15}", li2_principal(-1.0));
    println!("Li2(1/2) = pi^2/12 - ln(2)^2/2 = {:.15}", li2_principal(0.5));
    println!(
        "          closed form          = {:.15}",
        z6 / 2.0 - 2f64.ln().powi(2) / 2.0
    );
    println!();

    let z = Complex64::new(0.3, 0.4);
    let lhs = li2(z, Branch::Principal).unwrap().value + li2(-z, Branch::Principal).unwrap().value;
    let rhs = li2(z * z, Branch::Principal).unwrap().value.scale(0.5);
    println!("duplication at z = 0.3 + 0.4i:");
    println!("  Li2(z) + Li2(-z) = {:+.15} {:+.15} i", lhs.re, lhs.im);
    println!("  Li2(z^2) / 2     = {:+.15} {:+.15} i", rhs.re, rhs.im);
    println!();

    println!("Clausen function (ideal tetrahedra have volume Cl2-built):");
    println!("  Cl2(pi/3)   = {:.15}  (the maximum; regular ideal tetrahedron)", clausen(PI / 3.0));
    println!("  Cl2(pi/2)   = {:.15}  (Catalan's constant)", clausen(PI / 2.0));
    println!("  2 Cl2(pi/3) = {:.15}  (volume of the figure-eight complement)", 2.0 * clausen(PI / 3.0));
    println!();

    println!("circle values Li2(exp(2 pi i n/N)) for N = 12:");
    for n in [1i64, 3, 6] {
        let w = li2_circle(n, 12);
        println!("  n = {n}:  {:+.12} {:+.12} i   (Im = Cl2(2 pi {n}/12))", w.re, w.im);
    }
}

fn li2_principal(x: f64) -> f64 {
    li2(Complex64::new(x, 0.0), Branch::Principal).unwrap().value.re
}
