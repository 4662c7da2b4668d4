//! The family of curves y_z(x) bounding the violating region in the
//! (x, y) = (cos θ_b, cos θ_c) square, one curve per z = cos²φ.
//!
//! At z = 0 the region collapses onto the line y = 1; at z = 1 it fills the
//! whole half above the diagonal y = x. Pipe the output to a plotting tool,
//! or use the `bellvol boundary` subcommand for the CSV form.
//!
//! Run with: cargo run --example boundary_family

use bellvol::analytic::{area_closed, y_boundary};

fn main() {
    let z_values = [0.05, 0.25, 0.5, 0.75, 1.0];

    print!("{:>6}", "x");
    for z in z_values {
        print!("  y(z={z:<4})");
    }
    println!();

    for i in 0..=10 {
        let x = -1.0 + 0.2 * i as f64;
        print!("{x:>6.2}");
        for z in z_values {
            print!("  {:>8.4}", y_boundary(x, z).unwrap());
        }
        println!();
    }

    println!();
    println!("enclosed area between each curve and y = 1:");
    for z in z_values {
        println!("  A({z}) = {:.12}", area_closed(z).unwrap());
    }
}
