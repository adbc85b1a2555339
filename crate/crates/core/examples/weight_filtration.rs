//! Weight filtration of a nilpotent endomorphism and the graded pieces of a
//! quasi-unipotent monodromy.
use singcalc::linalg::RationalMatrix;
use singcalc::weight::{graded_monodromy, jordan_blocks, weight_filtration};

pub fn run() -> singcalc::Result<()> {
    // Blocks of sizes 3 and 1, with the chains mixed: e4 maps into e1 too.
    let n = RationalMatrix::from_i64(&[&[0, 1, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]])?;
    println!("Jordan blocks: {:?}", jordan_blocks(&n)?);
    let wf = weight_filtration(&n, 0)?;
    for step in wf.steps() {
        println!("W_{}: dim {}", step.level, step.basis.len());
    }
    println!("graded dims: {:?}", wf.graded_dims());

    // h = -1 on a 2-block and a primitive cube root of unity on a 1-block pair.
    let h = RationalMatrix::from_i64(&[&[-1, 1, 0, 0], &[0, -1, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, -1]])?;
    let g = graded_monodromy(&h, None)?;
    println!("m = {}, Delta = {}", g.m, g.charpoly);
    for (k, d) in &g.delta {
        println!("Delta^[{k}] = {d}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("weight filtration example");
}
