//! A superisolated surface whose tangent cone is a sextic with E8, E7 and A4
//! points, and its Lê-Yomdin deformations.
use singcalc::curve::{qhs_test, suspension_flags, CurveSpec};
use singcalc::zeta::char_poly_lys;

const SEXTIC: &str = r#"{
    "d": 6,
    "components": [{"id": "C", "degree": 6}],
    "singular_points": [
        {"id": "E8", "mu_p": 8, "r_p": 1, "germ": [{"i": 0, "j": 3, "c": "1"}, {"i": 5, "j": 0, "c": "1"}]},
        {"id": "E7", "mu_p": 7, "r_p": 2, "local_type": "E7"},
        {"id": "A4", "mu_p": 4, "r_p": 1, "local_type": "A4"}
    ]
}"#;

pub fn run() -> singcalc::Result<()> {
    let spec: CurveSpec = serde_json::from_str(SEXTIC)?;
    println!("genera: {:?}", spec.genera()?);
    for k in 1..=3 {
        let lys = spec.to_lys(k)?;
        let delta = char_poly_lys(&lys)?;
        println!("k = {k}: mu = {}, Delta = {delta}", lys.milnor_number());
    }
    let qhs = qhs_test(&spec, 1, &suspension_flags(&spec))?;
    println!("link is a QHS: {} {:?}", qhs.is_qhs, qhs.reasons);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("superisolated example");
}
