//! Writes a plane automorphism as an alternating word of affine and
//! triangular letters, then evaluates the word back.
use affauto::endo::{invert, PolyMap};
use affauto::plane::{equivariant_decompose, jvdk_decompose};

fn main() -> affauto::Result<()> {
    let f = PolyMap::parse(&["x1 + (x2 + x1^3)^2", "x2 + x1^3"], 2)?;
    println!("f = {f}");
    let word = jvdk_decompose(&f)?;
    for (i, l) in word.letters.iter().enumerate() {
        let kind = if l.is_affine() { "affine" } else { "triangular" };
        println!("  {}: {kind:<10} {}", i + 1, l.to_map());
    }
    assert_eq!(word.eval(), f);
    println!("f^-1 = {}", invert(&f, None)?);

    // An automorphism commuting with x -> -x decomposes into letters that
    // also commute with it.
    let g = PolyMap::parse(&["x1 + x2^3", "x2"], 2)?;
    let w = equivariant_decompose(&g, 2)?;
    println!("mu_2-equivariant word for {g}: {} letter(s)", w.len());
    Ok(())
}
