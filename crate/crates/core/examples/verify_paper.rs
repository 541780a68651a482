fn main() {
    let start = std::time::Instant::now();
    let report = subset_factor::catalog::verify_paper();
    for item in &report.items {
        println!(
            "{:>4} {:<32} {} {}",
            item.part,
            item.locus,
            if item.passed { "ok  " } else { "FAIL" },
            item.detail
        );
    }
    println!("passed: {} ({:?})", report.passed, start.elapsed());
}
