//! Cyclic quotient singularities: normal forms, Hirzebruch-Jung chains and
//! weighted blow-ups.
use singcalc::quotient::{
    continued_fraction, hj_resolve, normalize_type, suspension_normalize, tridiagonal_det, wblowup2, wblowup3_smooth,
    QuotientType,
};
use singcalc::rational::{fmt_q, Q};

pub fn run() -> singcalc::Result<()> {
    let t = normalize_type(&QuotientType::new(vec![7], vec![vec![2, 3]])?);
    println!("1/7(2,3) is {t}");

    let chain = hj_resolve(7, 5)?;
    println!("1/7(1,5) resolves by the chain {:?}", chain.self_intersections());
    println!("7/5 = {:?}, determinant {}", continued_fraction(&Q::new(7.into(), 5.into()))?, tridiagonal_det(&chain.b));

    let b = wblowup2(1, 2, 3)?;
    println!("(2,3)-blow-up of a smooth point: E^2 = {}", fmt_q(&b.exc_self_int));
    for (label, q) in &b.sing_points {
        println!("  {label}: {q}");
    }

    for (k, a, b) in [(4, 1, 1), (6, 2, 3), (4, 2, 2)] {
        let parts: Vec<String> = suspension_normalize(k, a, b).iter().map(ToString::to_string).collect();
        println!("normalization of z^{k} = u^{a} v^{b}: {}", parts.join(", "));
    }
    for (label, q) in wblowup3_smooth(1, 2, 3)? {
        println!("P(1,2,3) chart {label}: {q}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("quotient example");
}
