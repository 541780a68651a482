//! Finds left and right factors of every divisor size.

use subset_factor::cfs::{decide_cfs, DEFAULT_CFS_CAP};
use subset_factor::notation::{format_subset, group_from_spec};

fn main() -> subset_factor::Result<()> {
    for spec in ["C12", "A4", "D6", "Q8", "sd(3,4,2)"] {
        let g = group_from_spec(spec)?;
        let r = decide_cfs(&g, DEFAULT_CFS_CAP)?;
        println!("{spec}: holds = {}", r.holds);
        for (d, f) in &r.per_divisor {
            if let Some(l) = &f.left {
                println!("  {d:>2}  {:?}  {}", l.route, format_subset(&g, &l.factor));
            }
        }
    }
    Ok(())
}
