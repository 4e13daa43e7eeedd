//! Arithmetic and polynomial patterns inside a hitting set.

use opdyn::orbits::{default_k_max, find_ap, find_poly_pattern, HittingSet, IntPolynomial};

fn main() -> opdyn::Result<()> {
    // multiples of 7 plus a sprinkle of squares
    let members = (1..=20_000u64).filter(|n| n % 7 == 0 || ((*n as f64).sqrt().fract() == 0.0));
    let h = HittingSet::from_indices(20_000, members)?;
    for m in 3..=6 {
        match find_ap(&h, m, 1, default_k_max(h.n_max(), m, 1))? {
            Some(w) => println!("m = {m}: a = {}, k = {}, members {:?}", w.a, w.k, w.members()),
            None => println!("m = {m}: none"),
        }
    }
    let polys = [IntPolynomial::from_monomial(&[0, 7])?, IntPolynomial::from_monomial(&[7, 7])?];
    let found = find_poly_pattern(&h, &polys, 200)?;
    println!("a, a + 7k^2, a + 7k + 7k^2: {found:?}");
    Ok(())
}
