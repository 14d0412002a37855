//! Pushes an equivariant automorphism down to A^n/mu_d and lifts it back.
use affauto::endo::{Automorphism, PolyMap};
use affauto::equilift::{descend, is_mu_d_equivariant, lift};

fn main() -> affauto::Result<()> {
    let d = 3;
    let f = PolyMap::parse(&["x1 + x2^4", "x2"], 2)?;
    println!("f = {f}, mu_{d}-equivariant: {}", is_mu_d_equivariant(&f, d));

    let a = Automorphism::from_plane_map(f.clone())?;
    let q = descend(&a, d)?;
    for (m, img) in q.images().iter().rev() {
        println!("  {m} -> {img}");
    }

    let l = lift(&q)?;
    println!("lift = {}", l.map);
    println!("lifts differ by {} scalar(s)", l.ambiguity.len());
    assert_eq!(l.map, f);
    Ok(())
}
