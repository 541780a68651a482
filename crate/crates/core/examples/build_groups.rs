//! Builds groups from specs, permutations and a raw Cayley table.

use subset_factor::group::{close_permutations, validate_table, GroupFile};
use subset_factor::notation::{format_subset, group_from_spec};
use subset_factor::perm::Perm;
use subset_factor::subset::Subset;

fn main() -> subset_factor::Result<()> {
    for spec in [
        "C6",
        "C2xC2xC2",
        "D5",
        "Q8",
        "A4",
        "sd(7,3,2)",
        "perm:[(1,2,3,4);(1,2)]",
    ] {
        let g = group_from_spec(spec)?;
        println!(
            "{spec:<24} order {:>3}  abelian {:<5}  cyclic {}",
            g.order(),
            g.is_abelian(),
            g.is_cyclic()
        );
    }

    let gens = [Perm::parse("(1,2,3)")?, Perm::parse("(1,2)")?];
    let s3 = close_permutations(&gens, 1000)?.with_name("S3");
    println!(
        "\n{}: {}",
        s3.name(),
        format_subset(&s3, &Subset::full(s3.order()))
    );

    let klein = validate_table(&[
        vec![0, 1, 2, 3],
        vec![1, 0, 3, 2],
        vec![2, 3, 0, 1],
        vec![3, 2, 1, 0],
    ])?;
    println!(
        "table group of order {} is abelian: {}",
        klein.order(),
        klein.is_abelian()
    );

    let file = GroupFile::from_group(&group_from_spec("C3")?);
    println!("{}", serde_json::to_string(&file).expect("serializable"));
    Ok(())
}
