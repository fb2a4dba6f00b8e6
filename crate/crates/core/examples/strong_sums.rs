//! The four strong-sum modes on a smooth function and on a random one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vilenkin::hardy::{strong_sum_curve, StrongSumMode};
use vilenkin::{Complex64, GeneratorSequence, GridFunction, VilenkinSystem};

fn main() -> vilenkin::Result<()> {
    let g = GeneratorSequence::constant(3, 6)?;
    let system = VilenkinSystem::new(g.clone());
    let smooth = system.synthesize(|j| {
        if j < 9 {
            Complex64::new(1.0 / (j + 1) as f64, 0.0)
        } else {
            Complex64::default()
        }
    });
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let noisy = GridFunction::from_fn(g.clone(), |_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0));

    for (name, f) in [("smooth", &smooth), ("random", &noisy)] {
        println!("{name}:");
        for mode in [
            StrongSumMode::FejerPlain,
            StrongSumMode::FejerWeighted,
            StrongSumMode::Simon,
            StrongSumMode::Gat,
        ] {
            let curve = strong_sum_curve(&system, f, g.order(), 0.5, mode, None)?;
            let at = |n: usize| curve.value(n).map(|v| format!("{v:.5}"));
            println!(
                "  {:15} n=9: {}  n=81: {}  n=729: {}",
                mode.name(),
                at(9)?,
                at(81)?,
                at(729)?
            );
        }
    }
    Ok(())
}
