//! Every oracle suite with the default grids.

use polar_ekr::verify::{run_suites, VerifyConfig};

fn main() -> polar_ekr::Result<()> {
    let results = run_suites(&VerifyConfig::default(), &[])?;
    for r in &results {
        println!("{} {:>2} {:<35} {:>6} checks {:>6} ms  {}", if r.passed { "ok  " } else { "FAIL" }, r.id, r.name, r.checked, r.millis, r.detail);
    }
    if results.iter().any(|r| !r.passed) {
        std::process::exit(1);
    }
    Ok(())
}
