//! Restriction and prolongation of single unknown classes between an 8x8
//! and a 4x4 grid.

use fracmg::grid::{build_grid, Extents, UnknownClass};
use fracmg::transfer::{InterfaceTransfer, TransferPair};

pub fn run_example() -> fracmg::Result<()> {
    let fine = build_grid(Extents::unit_slab(), 8)?;
    let pair = TransferPair::new(&fine, InterfaceTransfer::Line)?;

    let ug: Vec<f64> = (0..9).map(|j| j as f64).collect();
    println!("fracture flux      {ug:?}");
    println!(
        "  restricted       {:?}",
        pair.restrict_class(UnknownClass::FractureU, &ug)?
    );
    let pg = [1.0, 5.0, -2.0, 4.0, 0.0, 0.0, 2.0, 2.0];
    println!("fracture pressure  {pg:?}");
    println!(
        "  restricted       {:?}",
        pair.restrict_class(UnknownClass::FractureP, &pg)?
    );

    let mut impulse = vec![0.0; 5];
    impulse[2] = 1.0;
    println!(
        "coarse flux impulse prolongs to {:?}",
        pair.prolong_class(UnknownClass::FractureU, &impulse)?
    );

    for class in UnknownClass::ALL {
        let r = pair.restriction_matrix(class);
        let ones = pair.restrict_class(class, &vec![1.0; r.ncols()])?;
        let dev = ones.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        println!(
            "{class:?}: {} -> {} values, constants kept to {dev:.1e}",
            r.ncols(),
            r.nrows()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fracmg::Result<()> {
    run_example()
}
