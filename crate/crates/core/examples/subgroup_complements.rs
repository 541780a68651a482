//! Moves complements between a subgroup and the whole group.

use subset_factor::factor::{
    extend_complement, find_left_complement, find_same_complement, restrict_complement,
};
use subset_factor::group::{right_transversal, Subgroup};
use subset_factor::notation::{format_subset, group_from_spec, parse_subset};

fn main() -> subset_factor::Result<()> {
    let g = group_from_spec("C12")?;
    let h = Subgroup::new(&g, parse_subset(&g, "1,a^2,a^4,a^6,a^8,a^10")?)?;
    let a = parse_subset(&g, "1,a^2")?;

    let b = find_left_complement(&g, &a)?.expect("factor");
    println!("G = A·B with B = {}", format_subset(&g, &b));
    let c = restrict_complement(&g, &h, &a, &b)?;
    println!("H = A·C with C = {}", format_subset(&g, &c));
    let x = right_transversal(&g, &h);
    let back = extend_complement(&g, &h, &a, &c, &x)?;
    println!(
        "extended by {} gives {}",
        format_subset(&g, x.reps()),
        format_subset(&g, &back)
    );

    let s3 = group_from_spec("S3")?;
    let a = parse_subset(&s3, "1,b")?;
    if let Some(b) = find_same_complement(&s3, &a)? {
        println!("S3: A·B = B·A = G with B = {}", format_subset(&s3, &b));
    }
    Ok(())
}
