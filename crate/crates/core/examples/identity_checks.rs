//! Running the kernel identity and inequality sweeps and summarizing them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vilenkin::identities::IdentityChecker;
use vilenkin::GeneratorSequence;

fn main() -> vilenkin::Result<()> {
    let checker = IdentityChecker::new(GeneratorSequence::cycle(&[2, 3, 4], 6)?);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut reports = checker.identity_sweep()?;
    reports.extend(checker.inequality_sweep(5)?);
    reports.extend(checker.tail_sweep()?);
    reports.extend(checker.lemma5_sweep(16, &mut rng)?);

    let mut names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    for name in names {
        let group: Vec<_> = reports.iter().filter(|r| r.name == name).collect();
        let failed = group.iter().filter(|r| !r.passed).count();
        println!("{name:22} {:5} checks, {failed} failed", group.len());
    }
    println!("first row: {}", reports[0].csv_row());
    Ok(())
}
