//! Exact parsing, printing and d-th roots of multivariate polynomials.
use affauto::poly::Polynomial;

fn main() -> affauto::Result<()> {
    let p = Polynomial::parse("(2*x1 - x2^2 + 1/3)^3", 2)?;
    println!("p       = {p}");
    let r = p.dth_root(3)?;
    println!("cbrt(p) = {r}");

    let q = Polynomial::parse("4*x1^2 + 1", 1)?;
    match q.dth_root(2) {
        Ok(s) => println!("sqrt(q) = {s}"),
        Err(e) => println!("sqrt(q): {e}"),
    }
    Ok(())
}
