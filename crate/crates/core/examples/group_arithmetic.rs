//! Mixed-radix digits, group operations and cylinders on a `cycle(2,3,4)` group.

use vilenkin::GeneratorSequence;

fn main() -> vilenkin::Result<()> {
    let g = GeneratorSequence::cycle(&[2, 3, 4], 6)?;
    println!(
        "radices {:?}, scales {:?}, order {}",
        g.radices(),
        g.scales(),
        g.order()
    );

    let n = 437;
    let digits = g.to_digits(n)?;
    println!(
        "{n} has digits {:?}, variation v(n) = {}",
        digits.digits(),
        digits.variation()
    );
    println!("nonzero blocks of {n}: {:?}", g.nonzero_blocks(n)?);

    let x = g.index_point(n)?;
    let y = g.point(vec![1, 2, 3, 0, 1, 2])?;
    let sum = g.add(&x, &y)?;
    let back = g.sub(&sum, &y)?;
    println!("x = {:?}, y = {:?}", x.digits(), y.digits());
    println!(
        "x + y = {:?}, (x + y) - y = {:?}",
        sum.digits(),
        back.digits()
    );

    for rank in [0, 2, 4] {
        let cyl = g.cylinder(&x, rank)?;
        println!(
            "I_{rank}(x): {} points, measure {:.6}, first indices {:?}",
            cyl.len(),
            cyl.measure(),
            cyl.indices().take(4).collect::<Vec<_>>()
        );
    }
    Ok(())
}
