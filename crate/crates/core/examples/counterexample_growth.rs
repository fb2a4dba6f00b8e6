//! The divergence construction: atoms, the closed-form spectrum and `T(2M_{α_k})`.

use vilenkin::hardy::{strong_sum_curve, Counterexample, Phi, StrongSumMode};
use vilenkin::{GeneratorSequence, VilenkinSystem};

fn main() -> vilenkin::Result<()> {
    let system = VilenkinSystem::new(GeneratorSequence::walsh(11));
    let ce = Counterexample::new(system, Phi::one(), (4..=10).collect())?;
    println!(
        "lambda = {:?}",
        ce.lambdas()
            .iter()
            .map(|l| format!("{l:.4}"))
            .collect::<Vec<_>>()
    );

    let direct = ce.system().forward(ce.function())?;
    let closed = ce.closed_form_spectrum();
    let dev = direct
        .coeffs()
        .iter()
        .zip(closed.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("closed-form spectrum deviation {dev:.2e}");

    let top = 2 * ce.scale(ce.len() - 1);
    let curve = strong_sum_curve(
        ce.system(),
        ce.function(),
        top,
        0.5,
        StrongSumMode::FejerPlain,
        None,
    )?;
    for k in 0..ce.len() {
        let n = 2 * ce.scale(k);
        println!(
            "alpha = {:2}: T({n:4}) = {:.6}, proxy {:.6}",
            ce.alphas()[k],
            curve.value(n)?,
            ce.growth_proxy(k)
        );
    }

    let split = ce.sigma_split(ce.scale(3) + 5)?;
    println!("split at n = M_7 + 5: {}", split.csv_row());
    Ok(())
}
