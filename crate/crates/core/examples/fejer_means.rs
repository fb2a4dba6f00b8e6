//! Partial sums and Fejér means of a step function, and `E_n f = S_{M_n} f`.

use vilenkin::hardy::conditional_expectation;
use vilenkin::{Complex64, GeneratorSequence, GridFunction, VilenkinSystem};

fn main() -> vilenkin::Result<()> {
    let g = GeneratorSequence::walsh(10);
    let system = VilenkinSystem::new(g.clone());
    let cyl = g.cylinder_at(300, 4)?;
    let f = GridFunction::indicator(g.clone(), &cyl, 1.0).sub(&GridFunction::constant(
        g.clone(),
        Complex64::new(cyl.measure(), 0.0),
    ))?;

    for n in [4, 16, 17, 40, 100, 1024] {
        let s = system.partial_sum(&f, n)?;
        let sigma = system.fejer_mean(&f, n)?;
        println!(
            "n = {n:4}: |S_n f - f|_1 = {:.6}, |sigma_n f - f|_1 = {:.6}",
            s.sub(&f)?.lp_quasinorm(1.0)?,
            sigma.sub(&f)?.lp_quasinorm(1.0)?
        );
    }
    let e = conditional_expectation(&f, 3)?;
    let s = system.partial_sum(&f, g.scale(3))?;
    println!("E_3 f vs S_8 f: {:.2e}", e.max_abs_diff(&s)?);
    Ok(())
}
