//! Classifies a few subsets and prints complements or the reason none exists.

use subset_factor::factor::{all_complements, classify_factor};
use subset_factor::notation::{format_subset, group_from_spec, parse_subset};
use subset_factor::subset::{verify_direct_factorization, Side};

fn main() -> subset_factor::Result<()> {
    let cases = [
        ("C4", "1,a"),
        ("S3", "1,b"),
        ("S3", "1,a"),
        ("C9", "1,a,a^3"),
        ("D4", "1,b,a*b"),
        ("C2xC2xC2", "1,b,a*b,a*c"),
    ];
    for (spec, words) in cases {
        let g = group_from_spec(spec)?;
        let a = parse_subset(&g, words)?;
        let r = classify_factor(&g, &a)?;
        println!(
            "{spec}: A = {}  ->  {:?}",
            format_subset(&g, &a),
            r.classification
        );
        if let Some(b) = &r.left_complement {
            assert!(verify_direct_factorization(&g, &a, b));
            println!("    G = A·B with B = {}", format_subset(&g, b));
        }
        if let Some(b) = &r.right_complement {
            println!("    G = B·A with B = {}", format_subset(&g, b));
        }
        if let Some(ev) = &r.evidence {
            println!("    evidence: {:?}", ev.kind);
        }
    }

    let g = group_from_spec("C8")?;
    let a = parse_subset(&g, "1,a")?;
    let all = all_complements(&g, &a, Side::Left, 1000)?;
    println!(
        "\nC8 {{1,a}} has {} left complements, e.g. {}",
        all.len(),
        format_subset(&g, &all[0])
    );
    Ok(())
}
