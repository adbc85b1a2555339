//! Embedded Q-resolution of plane curve germs, then Milnor number and
//! monodromy read off the smoothed graph.
use singcalc::poly::BivarPoly;
use singcalc::qres::local_pipeline;

pub fn run() -> singcalc::Result<()> {
    let germs = [
        ("cusp", BivarPoly::from_i64(&[(0, 2, 1), (3, 0, -1)])),
        ("E8", BivarPoly::from_i64(&[(0, 3, 1), (5, 0, 1)])),
        ("tacnode", BivarPoly::from_i64(&[(0, 2, 1), (4, 0, -1)])),
        ("x^2 y + y^4", BivarPoly::from_i64(&[(2, 1, 1), (0, 4, 1)])),
    ];
    for (name, f) in germs {
        let p = local_pipeline(&f)?;
        let inv = &p.invariants;
        println!("{name}: mu = {}, r = {}, Delta = {}", inv.mu, inv.r, inv.delta.expand()?);
        println!(
            "  {} weighted blow-ups, {} exceptional curves after smoothing",
            p.qgraph.blowups,
            p.smooth.exceptional().count()
        );
    }
    let cusp = local_pipeline(&BivarPoly::from_i64(&[(0, 2, 1), (3, 0, -1)]))?;
    print!("{}", cusp.smooth.to_dot());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("local germ example");
}
