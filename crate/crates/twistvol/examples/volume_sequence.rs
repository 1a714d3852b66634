//! Growth of v_N = 2 pi log|J_N| / N along increasing colors, with the
//! fitted large-N limit. The sequence converges slowly (the correction
//! is O(log N / N)), which is why the limit is extrapolated through the
//! model v_N ~ v + c1 log(N)/N + c2/N rather than read off the last row.
//!
//! Run with: cargo run --release --example volume_sequence

use twistvol::jones::{extrapolate_limit, volume_sequence, TwistKnotSpec};

fn main() {
    let spec = TwistKnotSpec::new(2).unwrap();
    let colors = [25, 50, 75, 100, 125, 150, 175, 200];
    println!("p = 2, v_N along N = {colors:?}:");
    let mut points = Vec::new();
    for (n, v) in volume_sequence(&spec, &colors) {
        let v = v.unwrap();
        println!("  N = {n:4}   v_N = {v:.12}");
        points.push((n, v));
    }
    let (limit, rms) = extrapolate_limit(&points).unwrap();
    println!("fitted limit: {limit:.12}   (rms residual {rms:.3e})");
    println!("for comparison, the critical value of the potential is 3.163963228883...");
    println!("and the census volume closest to the fitted limit is 2.828122088331...");
}
