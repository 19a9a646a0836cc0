//! A rank-deficient walk cannot tell some input distributions apart. The
//! witness search finds one explicitly.

use netscale::metrics::{degenerate_witness, kernel_dimension, WitnessOutcome, DEFAULT_KERNEL_TOL};
use netscale::netgen::star;

fn main() -> netscale::error::Result<()> {
    let net = star(6)?.normalize();
    println!("kernel dimension of star(6): {}", kernel_dimension(&net, DEFAULT_KERNEL_TOL)?);

    let x = vec![1.0 / 6.0; 6];
    match degenerate_witness(&net, &x, 1)? {
        WitnessOutcome::Found(w) => {
            let step = |p: &[f64]| -> Vec<f64> {
                (0..net.len()).map(|j| (0..net.len()).map(|i| p[i] * net.weight(i, j)).sum()).collect()
            };
            println!("x        {:?}", x);
            println!("w        {:?}", w.w);
            println!("x W      {:?}", step(&x));
            println!("w W      {:?}", step(&w.w));
        }
        other => println!("no witness: {other:?}"),
    }
    Ok(())
}
