//! Direction of change with learned costs, and how the single three-way
//! alignment compares with two separate pairwise alignments.
//!
//!     cargo run --example direction_of_change

use std::sync::Arc;

use dialectometry::pipeline::induction_pairs;
use dialectometry::corpus::PairedTriple;
use dialectometry::synth::mixed_triples;
use dialectometry::{align3, double_2d_delta, induce, ConstraintPolicy, CostModel, PmiOptions, SegmentTable};

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = SegmentTable::builtin();
    let triples: Vec<PairedTriple> = mixed_triples(300, 11, &table)
        .into_iter()
        .map(|(older, newer, standard)| PairedTriple {
            location: older.location.clone(),
            word: older.word.clone(),
            older,
            newer,
            standard,
        })
        .collect();
    let pmi = induce(&induction_pairs(&triples)?, &CostModel::binary(ConstraintPolicy::PHONETIC), &PmiOptions::default())?;
    let cm = CostModel::learned(Arc::new(pmi), ConstraintPolicy::PHONETIC);

    let mut three_way = Vec::new();
    let mut pairwise = Vec::new();
    for t in &triples {
        let al = align3(&t.older, &t.newer, &t.standard, &cm)?;
        three_way.push(al.div - al.conv);
        pairwise.push(double_2d_delta(&t.older, &t.newer, &t.standard, &cm)?);
    }
    let example = &triples[0];
    println!("{} {}:", example.location, example.word);
    print!("{}", align3(&example.older, &example.newer, &example.standard, &cm)?);
    println!("\n{} triples; r(div - conv, double pairwise delta) = {:.4}", triples.len(), pearson(&three_way, &pairwise));
    Ok(())
}
