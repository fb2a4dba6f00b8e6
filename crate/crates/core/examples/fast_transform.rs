//! The fast mixed-radix transform against the naive character sums.

use std::time::Instant;

use vilenkin::{Complex64, GeneratorSequence, GridFunction, VilenkinSystem};

fn main() -> vilenkin::Result<()> {
    let g = GeneratorSequence::new(vec![2, 3, 5, 2, 4])?;
    let system = VilenkinSystem::new(g.clone());
    let f = GridFunction::from_fn(g.clone(), |i| {
        Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())
    });

    let fast = system.forward(&f)?;
    let naive = system.forward_naive(&f)?;
    let deviation = fast
        .coeffs()
        .iter()
        .zip(naive.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let back = system.inverse(&fast)?;
    println!(
        "order {}: fast vs naive {deviation:.2e}, round trip {:.2e}",
        g.order(),
        back.max_abs_diff(&f)?
    );
    println!(
        "Parseval: energy {:.12} vs |f|_2^2 {:.12}",
        fast.energy(),
        f.lp_power(2.0)?
    );

    let big = VilenkinSystem::new(GeneratorSequence::walsh(16));
    let h = GridFunction::from_fn(big.generator().clone(), |i| {
        Complex64::new((i % 7) as f64, 0.0)
    });
    let start = Instant::now();
    let spectrum = big.forward(&h)?;
    println!(
        "Walsh depth 16: {} points in {:.2} ms, mean coefficient {:.6}",
        big.order(),
        start.elapsed().as_secs_f64() * 1e3,
        spectrum.coeff(0).re
    );
    Ok(())
}
