//! Local nilpotency, exponentials and kernels of derivations.
use affauto::lnd::{exp_action, is_locally_nilpotent, kernel_basis_up_to_degree, modify, Derivation};
use affauto::poly::Polynomial;

fn main() -> affauto::Result<()> {
    let d = Derivation::parse(&["x2", "x3", "0"], 3)?;
    println!("D = {d}");
    println!("verdict: {:?}", is_locally_nilpotent(&d, 32));

    let t = Polynomial::var(4, 3);
    println!("exp(tD) = {}", exp_action(&d, &t)?);

    let ker = kernel_basis_up_to_degree(&d, 2);
    println!("ker D up to degree 2:");
    for k in &ker {
        println!("  {k}");
    }

    let f = Polynomial::parse("x3", 3)?;
    println!("x3 * D = {}", modify(&f, &d)?);

    let not_nilpotent = Derivation::parse(&["x1", "0"], 2)?;
    println!("x1*d/dx1: {:?}", is_locally_nilpotent(&not_nilpotent, 32));
    Ok(())
}
