//! Balls in Cayley graphs and the hole construction around the identity.

use subset_factor::cayley::{
    ball, construct_tilde, is_connected_subset, tilde_condition_two_sided, tilde_divisors,
    GeneratingSet,
};
use subset_factor::factor::{classify_factor_with, ClassifyOptions};
use subset_factor::notation::{format_subset, group_from_spec};

fn main() -> subset_factor::Result<()> {
    for spec in ["C12", "D7", "C5xC5", "D9", "A4"] {
        let g = group_from_spec(spec)?;
        let gens = GeneratingSet::standard(&g)?;
        let b = ball(&g, &gens, 2);
        println!(
            "{spec}: |ball_2| = {}  {}",
            b.members.len(),
            format_subset(&g, &b.members)
        );
        for d in tilde_divisors(&g, &gens) {
            let Some(at) = construct_tilde(&g, &gens, d) else {
                continue;
            };
            let mut a = at.clone();
            a.remove(g.identity());
            let class = classify_factor_with(&g, &a, ClassifyOptions::exhaustive())?.classification;
            println!(
                "    d = {d:>2}: connected {}  two-sided condition {}  A classifies as {class:?}",
                is_connected_subset(&g, &gens, &at)?,
                tilde_condition_two_sided(&g, &at)?
            );
        }
    }
    Ok(())
}
