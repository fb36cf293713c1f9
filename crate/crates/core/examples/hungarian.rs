//! The assignment solver on its own, in both senses.

use donsa::assignment::{hungarian_solve, objective, Matrix, Sense};

pub fn run_example() -> donsa::Result<(f64, f64)> {
    let m = Matrix::from_rows(&[
        vec![7.0, 5.0, 9.0, 1.0],
        vec![2.0, 8.0, 6.0, 3.0],
        vec![4.0, 4.0, 8.0, 7.0],
        vec![6.0, 1.0, 3.0, 5.0],
    ])?;
    let best = hungarian_solve(&m, Sense::Maximize)?;
    let cheapest = hungarian_solve(&m, Sense::Minimize)?;
    let (hi, lo) = (objective(&m, &best), objective(&m, &cheapest));
    println!("max {hi} with rows -> cols {best:?}");
    println!("min {lo} with rows -> cols {cheapest:?}");
    Ok((hi, lo))
}

fn main() -> donsa::Result<()> {
    run_example().map(|_| ())
}
