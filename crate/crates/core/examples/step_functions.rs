//! Step functions on the depth-N grid: integrals, `L_p` and weak-`L_p` quasi-norms.

use vilenkin::{Complex64, GeneratorSequence, GridFunction};

fn main() -> vilenkin::Result<()> {
    let g = GeneratorSequence::constant(3, 5)?;
    let cyl = g.cylinder_at(7, 2)?;
    let spike = GridFunction::indicator(g.clone(), &cyl, 1.0 / cyl.measure());
    println!(
        "indicator of I_2 scaled to mass one: integral {}",
        spike.integrate()
    );
    for p in [0.5, 1.0, 2.0] {
        println!(
            "  p = {p}: |f|_p = {:.6}, weak |f|_p^p = {:.6}",
            spike.lp_quasinorm(p)?,
            spike.weak_lp(p)?
        );
    }

    let ramp = GridFunction::from_fn(g.clone(), |i| {
        Complex64::new(i as f64 / g.order() as f64, 0.0)
    });
    let deeper = GeneratorSequence::constant(3, 7)?;
    let fine = ramp.refine(&deeper)?;
    println!(
        "ramp: |f|_1/2 = {:.6} on depth 5, {:.6} after refining to depth 7",
        ramp.lp_quasinorm(0.5)?,
        fine.lp_quasinorm(0.5)?
    );
    Ok(())
}
