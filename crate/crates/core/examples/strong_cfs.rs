//! Decides the strong CFS property for the small groups and prints a
//! non-factor witness where it fails.

use subset_factor::cfs::{decide_strong_cfs, StrongCfsOptions, SMALL_GROUP_SPECS};
use subset_factor::notation::{format_subset, group_from_spec};

fn main() -> subset_factor::Result<()> {
    for spec in SMALL_GROUP_SPECS {
        let g = group_from_spec(spec)?;
        let r = decide_strong_cfs(&g, StrongCfsOptions::default())?;
        let witness = r
            .witness
            .as_ref()
            .map(|w| format_subset(&g, w))
            .unwrap_or_default();
        println!(
            "{spec:<10} {:>3}  {:<5}  examined {:>6}  {witness}",
            g.order(),
            if r.holds { "holds" } else { "fails" },
            r.subsets_examined
        );
    }
    Ok(())
}
