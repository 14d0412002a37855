//! Root subgroups of the diagonal torus and their weights on A^2/mu_d.
use affauto::roots::{
    character_of, enumerate_root_subgroups, is_multiplicity_free, verify_conjugation_law,
    weight_set_quotient, TorusLattice,
};

fn main() -> affauto::Result<()> {
    for u in enumerate_root_subgroups(2, None, 3) {
        let chi = character_of(&u, TorusLattice::Full { n: 2 })?;
        println!(
            "{:<12} character {chi}  conjugation law holds: {}",
            u.derivation().to_string(),
            verify_conjugation_law(&u)?
        );
    }
    for d in [2, 3, 4, 5] {
        let w = weight_set_quotient(d, 2, 12)?;
        println!("d = {d}: weights {w:?}, multiplicity free: {}", is_multiplicity_free(&w));
    }
    Ok(())
}
