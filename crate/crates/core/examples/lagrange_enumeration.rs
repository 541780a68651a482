//! Counts Lagrange subsets up to each canonical symmetry level.

use subset_factor::cfs::enumerate_lagrange_subsets;
use subset_factor::notation::{format_subset, group_from_spec};
use subset_factor::subset::CanonLevel;

fn main() -> subset_factor::Result<()> {
    for (spec, d) in [("C8", 4), ("D4", 4), ("C3xC3", 3), ("A4", 4)] {
        let g = group_from_spec(spec)?;
        print!("{spec} size {d}:");
        for level in [
            CanonLevel::L0,
            CanonLevel::L1,
            CanonLevel::L2,
            CanonLevel::L3,
        ] {
            print!(
                "  {level:?} {}",
                enumerate_lagrange_subsets(&g, d, level)?.count()
            );
        }
        println!();
    }
    let g = group_from_spec("C8")?;
    for a in enumerate_lagrange_subsets(&g, 4, CanonLevel::L3)? {
        println!("  {}", format_subset(&g, &a));
    }
    Ok(())
}
