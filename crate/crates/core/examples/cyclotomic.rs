//! Products of binomials `t^m - 1`: the basis every monodromy lives in.
use singcalc::CycloProduct;

pub fn run() -> singcalc::Result<()> {
    // Δ of the cusp: (t^6-1)(t-1)/((t^2-1)(t^3-1)) = t^2 - t + 1
    let cusp = CycloProduct::from_pairs([(6, 1), (1, 1), (2, -1), (3, -1)]);
    println!("cusp: {cusp} = {}", cusp.expand()?);
    println!("cyclotomic factors: {:?}", cusp.to_divisor().mult);

    for k in 1..=3 {
        let p = cusp.power_char(k)?;
        println!("eigenvalues raised to the power {k}: {} = {}", p, p.expand()?);
    }

    let a4 = CycloProduct::from_pairs([(10, 1), (1, 1), (2, -1), (5, -1)]);
    println!("gcd(cusp, A4) = {}", cusp.gcd(&a4)?);
    println!("cusp^2 / cusp = {}", cusp.pow(2).div(&cusp));
    println!("(t^2-1)/(t^3-1) is a polynomial: {}", CycloProduct::from_pairs([(2, 1), (3, -1)]).is_polynomial());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("cyclotomic example");
}
