//! Dirichlet and Fejér kernels and the Lebesgue constants `L_n = |D_n|_1`.

use vilenkin::{GeneratorSequence, VilenkinSystem};

fn main() -> vilenkin::Result<()> {
    for g in [
        GeneratorSequence::walsh(6),
        GeneratorSequence::constant(3, 4)?,
    ] {
        let system = VilenkinSystem::new(g.clone());
        println!("radices {:?}", g.radices());
        for n in [1, 3, 5, 11, 21, 43] {
            let d = system.dirichlet(n)?;
            let k = system.fejer_kernel(n)?;
            println!(
                "  n = {n:2}: L_n = {:.6}, |K_n|_1 = {:.6}, D_n(0) = {}",
                system.lebesgue_constant(n)?,
                k.lp_quasinorm(1.0)?,
                d.value(0).re
            );
        }
        let m = g.scale(3);
        println!(
            "  D_M3 = M3 on I_3: D(0) = {}, L = {:.6}",
            system.dirichlet(m)?.value(0).re,
            system.lebesgue_constant(m)?
        );
    }
    Ok(())
}
