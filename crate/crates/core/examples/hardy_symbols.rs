//! Classifies adjoints of polynomial multipliers on the Hardy space and checks
//! the kernel eigenvector relation at one point.

use opdyn::symbol::{classify_adjoint, eigen_check, PolySymbol};
use opdyn::Complex64;

fn main() -> opdyn::Result<()> {
    for text in ["[0, 0.5]", "[2, 1]", "[0.8, 1]", "[[0, 1]]", "[2]"] {
        let phi: PolySymbol = text.parse()?;
        let v = classify_adjoint(&phi)?;
        println!("{text:<10} {}", v.class);
        if let Some(c) = &v.certificate {
            println!("           {c:?}");
        }
    }
    let phi: PolySymbol = "[0.8, 1]".parse()?;
    let e = eigen_check(&phi, Complex64::new(0.5, 0.5), 400)?;
    println!("eigen residual at 0.5+0.5i: {:.3e} (within bound: {})", e.residual, e.within_bound);
    Ok(())
}
