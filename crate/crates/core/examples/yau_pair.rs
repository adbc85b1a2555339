//! Two superisolated surfaces with the same Milnor number and monodromy
//! characteristic polynomial but different Jordan structure.
use singcalc::zeta::{yau_pair_report, LYSInput, PointData, YauInput};
use singcalc::CycloProduct;

pub fn run() -> singcalc::Result<()> {
    let cusp = CycloProduct::from_pairs([(6, 1), (1, 1), (2, -1), (3, -1)]);
    let point = PointData { id: None, mu_p: 2, r_p: 1, delta_p_charpoly: cusp.clone(), jordan1_p: None };
    let lys = LYSInput { d: 6, k: 1, points: vec![point; 6] };
    // Six cusps on a conic versus six cusps in general position.
    let on_conic = YauInput { lys: lys.clone(), alexander: cusp, delta_cmb_k: None };
    let general = YauInput { lys, alexander: CycloProduct::one(), delta_cmb_k: None };
    let r = yau_pair_report(&on_conic, &general)?;
    println!("mu = {:?}, same Delta: {}", r.mu, r.same_charpoly);
    println!("Alexander polynomials differ: {}", r.alexander_differs);
    println!("{}", r.conclusion);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("Yau pair example");
}
