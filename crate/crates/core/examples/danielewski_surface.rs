//! Automorphisms of the quadric xz + y^2 = 1.
//! The polynomial P of J(alpha, P) is written in a single variable x1.
use affauto::danielewski::{
    conjugation_identity_check, jt_auto, sl2t_quotient, tau_commutes, weight_set_surface,
};
use affauto::poly::Polynomial;
use num_rational::BigRational;

fn main() -> affauto::Result<()> {
    let p = Polynomial::parse("x1^2", 1)?;
    let j = jt_auto(&BigRational::from_integer(2.into()), &p)?;
    println!("J(2, z^2) = {}", j.map);
    println!("commutes with tau: {}", tau_commutes(&j)?);

    let odd = jt_auto(&BigRational::from_integer(1.into()), &Polynomial::parse("x1^3", 1)?)?;
    println!("J(1, z^3) commutes with tau: {}", tau_commutes(&odd)?);
    println!("conjugation identity for z^3: {}", conjugation_identity_check(&Polynomial::parse("x1^3", 1)?)?);

    println!("weights up to 7: {:?}", weight_set_surface(false, 7)?);
    println!("tau-commuting weights up to 7: {:?}", weight_set_surface(true, 7)?);

    let one = BigRational::from_integer(1.into());
    let zero = BigRational::from_integer(0.into());
    let (pt, img) = sl2t_quotient(&[[one.clone(), one.clone()], [zero, one]])?;
    println!("SL2/T image of [[1,1],[0,1]]: {:?} -> ({}, {}, {})", pt.map(|c| c.to_string()), img.x, img.y, img.z);
    Ok(())
}
