//! Degree semigroups generated by arithmetic progressions.
use affauto::quotient::{recognize_asdn, semigroup_closure, semigroup_saturate};

fn main() -> affauto::Result<()> {
    let gens = [(3, 2), (5, 1)];
    let s = semigroup_closure(&gens, 120)?;
    println!(
        "closure of {gens:?}: first members {:?}, gcd {}, conductor {}",
        &s.members[..10.min(s.members.len())],
        s.gcd,
        s.conductor
    );
    println!("recognized as {{0}} ∪ dN_(>=s): {:?}", recognize_asdn(&s));

    let sat = semigroup_saturate(&[(4, 2), (6, 1)], 200)?;
    println!("saturation of 4:2, 6:1 -> d = {}, s = {}", sat.d, sat.s);
    Ok(())
}
