//! Eigenmatrix of the scheme and an exact check of the predicted spectrum.

use polar_ekr::geometry::build_graph;
use polar_ekr::spectra::{eig_table, scheme_spectrum, verify_spectrum};
use polar_ekr::{Family, PolarParams};

fn main() -> polar_ekr::Result<()> {
    let p = PolarParams::new(Family::HyperbolicQPlus, 3, 3)?;
    let s = scheme_spectrum(&p)?;
    s.check_orthogonality()?;
    println!("{} eigenmatrix P:", p.notation());
    for row in &s.p {
        println!("  {}", row.iter().map(|x| format!("{x:>5}")).collect::<String>());
    }
    println!("multiplicities {:?}", s.multiplicities.iter().map(|m| m.to_string()).collect::<Vec<_>>());
    for a in 0..p.d() {
        let t = eig_table(&p, a)?;
        println!("a = {a}: min {} at {:?}, valency {}", t.lambda_min(), t.argmin, t.valency());
    }

    let g = build_graph(&p)?;
    for t in 0..=p.d() {
        let c = verify_spectrum(&g, t)?;
        println!("t = {t}: annihilated {}", c.passed());
    }
    Ok(())
}
