//! Link of a superisolated singularity from the dual graph of its tangent
//! cone, for a smooth cubic and for a conic plus a tangent line.
use singcalc::curve::{link_graph_adjust, surface_intersections, CombVertex, Combinatorics};
use singcalc::rational::fmt_q;

pub fn run() -> singcalc::Result<()> {
    let cubic =
        Combinatorics { vertices: vec![CombVertex { id: 0, self_int: 9, marked: true, genus: 1 }], edges: vec![] };
    let link = link_graph_adjust(&cubic, 3, &[3])?;
    println!("smooth cubic: link vertex e = {}, genus {}", link.vertices[0].self_int, link.vertices[0].genus);

    // Conic and tangent line: blow up twice at the tangency point.
    let tangent = Combinatorics {
        vertices: vec![
            CombVertex { id: 0, self_int: 2, marked: true, genus: 0 },
            CombVertex { id: 1, self_int: -1, marked: true, genus: 0 },
            CombVertex { id: 2, self_int: -1, marked: false, genus: 0 },
            CombVertex { id: 3, self_int: -2, marked: false, genus: 0 },
        ],
        edges: vec![(0, 2), (1, 2), (2, 3)],
    };
    let link = link_graph_adjust(&tangent, 3, &[2, 1])?;
    print!("{}", link.to_dot());

    let (vhat, vhat_k) = surface_intersections(3, 2, &[2, 1])?;
    let vhat: Vec<Vec<String>> = vhat.iter().map(|row| row.iter().map(fmt_q).collect()).collect();
    println!("intersections on the quotient model: {vhat:?}, scaled: {vhat_k:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("link graph example");
}
