//! Martingales, maximal functions, `H_p` quasi-norms and atomic decompositions.

use vilenkin::hardy::{
    assemble_martingale, is_p_atom, Atom, AtomicDecomposition, FiniteMartingale,
};
use vilenkin::{GeneratorSequence, GridFunction};

fn main() -> vilenkin::Result<()> {
    let g = GeneratorSequence::constant(3, 6)?;
    let p = 0.5;
    let mut decomposition = AtomicDecomposition::new(g.clone());
    for (index, rank, coefficient) in [(0, 2, 1.0), (40, 3, 0.5), (400, 4, 0.25)] {
        let support = g.cylinder_at(index, rank)?;
        // Mean-zero and bounded by μ(I)^{-1/p}: a child cell minus the parent average.
        let child = g.cylinder_at(index, rank + 1)?;
        let bound = support.measure().powf(-1.0 / p);
        let a = GridFunction::indicator(g.clone(), &child, bound).sub(&GridFunction::indicator(
            g.clone(),
            &support,
            bound / 3.0,
        ))?;
        let diag = is_p_atom(&a, &support, p)?;
        println!(
            "rank {rank}: atom {}, sup {:.1} <= bound {:.1}, mean {:.1e}",
            diag.is_atom(),
            diag.sup,
            diag.bound,
            diag.mean.norm()
        );
        decomposition.push(coefficient, Atom::new(a, support, p)?)?;
    }

    let f = decomposition.sum();
    let m = assemble_martingale(&decomposition);
    let generated = FiniteMartingale::generated(&f);
    println!("martingale defect {:.2e}", m.martingale_defect());
    println!(
        "|f|_H(1/2) = {:.6} <= (sum mu^p)^(1/p) = {:.6}",
        generated.hardy_quasinorm(p)?,
        decomposition.coefficient_norm(p)?
    );
    println!("|f*|_inf = {:.4}", m.maximal_function().sup_norm());
    Ok(())
}
