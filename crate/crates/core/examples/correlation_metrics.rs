//! Computes SRCC and PLCC for a few prediction patterns against the same
//! ground truth.
//!
//! ```text
//! cargo run --example correlation_metrics
//! ```

use jndmix::{plcc, rank_with_ties, srcc};

fn main() -> jndmix::Result<()> {
    let gt = [12.0, 25.0, 31.0, 47.0, 55.0, 68.0, 74.0, 90.0];
    let cases: [(&str, Vec<f64>); 4] = [
        ("identical", gt.to_vec()),
        ("monotone, nonlinear", gt.iter().map(|v: &f64| v.powf(2.5)).collect()),
        ("one swap", vec![12.0, 31.0, 25.0, 47.0, 55.0, 68.0, 74.0, 90.0]),
        ("reversed", gt.iter().rev().copied().collect()),
    ];
    println!("{:<22}{:>10}{:>10}", "prediction", "SRCC", "PLCC");
    for (name, pred) in &cases {
        println!("{name:<22}{:>10.6}{:>10.6}", srcc(pred, &gt)?, plcc(pred, &gt)?);
    }

    let tied = [3.0, 1.0, 3.0, 2.0, 3.0];
    println!("\nranks of {tied:?}: {:?}", rank_with_ties(&tied));

    match srcc(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]) {
        Err(e) => println!("constant predictions: {e}"),
        Ok(v) => println!("unexpected value {v}"),
    }
    Ok(())
}
