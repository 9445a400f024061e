//! How close do the candidate codes get to the entropy of the goal
//! distribution?
//!
//! cargo run --example prefix_code_entropy

use std::collections::BTreeMap;

use formicode::coding::{
    anchor_encode, code_stats, kraft_sum, optimal_prefix_lengths, unitary_encode, AnchorScheme,
    MessageDistribution,
};

fn main() -> formicode::Result<()> {
    let cases = [
        ("uniform over 30", MessageDistribution::uniform(1..=30)?),
        (
            "anchors 10, 20 at 1/3",
            MessageDistribution::anchored(30, &[10, 20], 1.0 / 3.0)?,
        ),
    ];
    let scheme = AnchorScheme::new(vec![10, 20])?;
    for (name, dist) in cases {
        let huffman = optimal_prefix_lengths(&dist)?;
        let optimal = code_stats(&huffman.lengths, &dist)?;
        let unitary: BTreeMap<u32, f64> = dist
            .support()
            .map(|i| Ok((i, unitary_encode(i)?.length())))
            .collect::<formicode::Result<_>>()?;
        let anchor: BTreeMap<u32, f64> = dist
            .support()
            .map(|i| Ok((i, anchor_encode(i, &scheme)?.length())))
            .collect::<formicode::Result<_>>()?;
        println!("{name}: H = {:.4} bits", optimal.entropy_bits);
        println!(
            "  optimal prefix  E[L] = {:.4} (Kraft sum {})",
            optimal.expected_length_bits,
            kraft_sum(huffman.lengths.values())
        );
        println!(
            "  unitary         E[L] = {:.4} symbols",
            code_stats(&unitary, &dist)?.expected_length_bits
        );
        println!(
            "  anchor offset   E[L] = {:.4} symbols",
            code_stats(&anchor, &dist)?.expected_length_bits
        );
    }
    Ok(())
}
