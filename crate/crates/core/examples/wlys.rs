//! Weighted Lê-Yomdin admissibility of an explicit germ in three variables.
use singcalc::wlys::{
    smallest_admissible_k, wdecompose, wlys_admissibility, Clause, DeclaredPoint, TrivarPoly, Vertex, WeightVector,
};

pub fn run() -> singcalc::Result<()> {
    let w = WeightVector::new(2, 2, 3)?;
    let cone = [(0, 2, 4, 1), (5, 0, 2, -1), (0, 8, 0, 1), (9, 0, 0, 1)];
    let points = [DeclaredPoint::new([0, 0, 1], Clause::Ii), DeclaredPoint::new([1, 0, 0], Clause::Iii)];

    let mut with_z6 = cone.to_vec();
    with_z6.push((0, 0, 6, 1));
    for terms in [with_z6, cone.to_vec()] {
        let f = TrivarPoly::from_i64(&terms);
        let dec = wdecompose(&f, w)?;
        let r = wlys_admissibility(&f, w, &points)?;
        println!("F = {f}");
        println!("  d = {}, k = {:?}, admissible: {}", dec.d, dec.k, r.admissible);
        for fail in &r.failures {
            println!("  {} ({:?}): {}", fail.point, fail.clause, fail.reason);
        }
    }
    println!("smallest k avoiding [1:0:0] and [0:0:1]: {}", smallest_admissible_k(w, 16, &[Vertex::X, Vertex::Z])?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("WLYS example");
}
