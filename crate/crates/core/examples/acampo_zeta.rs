//! Zeta function of the monodromy from a resolution graph given by hand.
use singcalc::qres::SmoothResolutionGraph;
use singcalc::zeta::{acampo_zeta, zeta_to_char};

pub fn run() -> singcalc::Result<()> {
    // Minimal embedded resolution of y^2 = x^5: a chain 2 - 4 - 10 - 5 plus the strict transform.
    let graph: SmoothResolutionGraph = serde_json::from_str(
        r#"{
        "vertices": [
            {"id": 0, "kind": "exceptional", "multiplicity": 2, "self_int": -2, "genus": 0},
            {"id": 1, "kind": "exceptional", "multiplicity": 4, "self_int": -3, "genus": 0},
            {"id": 2, "kind": "exceptional", "multiplicity": 10, "self_int": -1, "genus": 0},
            {"id": 3, "kind": "exceptional", "multiplicity": 5, "self_int": -2, "genus": 0},
            {"id": 4, "kind": "strict", "multiplicity": 1, "genus": 0}
        ],
        "edges": [[0, 1], [1, 2], [2, 3], [2, 4]]
    }"#,
    )?;
    let graph = graph.with_derived_chi()?;
    graph.check_projection_formula()?;
    let zeta = acampo_zeta(&graph);
    let delta = zeta_to_char(&zeta, 1)?;
    println!("zeta = {zeta}");
    println!("Delta = {} = {}, mu = {}", delta, delta.expand()?, delta.degree());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("A'Campo example");
}
