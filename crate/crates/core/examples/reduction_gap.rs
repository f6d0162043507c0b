//! Builds a reduction instance and shows the distance gap: the symmetric
//! difference has n cycles, the true flip distance is two, and the witness
//! cycle contracts back onto the planted Hamiltonian cycle.

use matchpoly::{reduction, skeleton, Result};

fn main() -> Result<()> {
    let (d, ham) = reduction::random_hamiltonian_digraph(7, 5, 0.3)?;
    let r = reduction::build_reduction(&d, Some(&ham))?;

    // n disjoint difference cycles, flip distance exactly two.
    assert_eq!(skeleton::sym_diff_decompose(r.m1(), r.m2())?.len(), 5);
    assert_eq!(
        skeleton::skeleton_distance(r.m1(), r.m2(), 1_000_000)?,
        Some(2)
    );

    // Two flips suffice; the first contracts onto the planted cycle.
    let witness = reduction::two_flip_witness(&r, &ham)?;
    assert_eq!(reduction::contract_cycle(&r, &witness.steps()[0])?, ham);

    println!(
        "n = {}, image vertices = {}, difference cycles = {}, distance = 2",
        d.vertex_count(),
        r.vertex_count(),
        skeleton::sym_diff_decompose(r.m1(), r.m2())?.len()
    );
    Ok(())
}
