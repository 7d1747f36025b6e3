//! Generator counts for every family, checked against enumeration where it is cheap.

use polar_ekr::geometry::enumerate_generators_capped;
use polar_ekr::qcore::{count_codim, gauss, num_generators};
use polar_ekr::{Family, PolarParams};

fn main() -> polar_ekr::Result<()> {
    println!("[4 2]_2 = {}", gauss(4, 2, 2)?);
    let families = [
        Family::HyperbolicQPlus,
        Family::ParabolicQ,
        Family::Symplectic,
        Family::EllipticQMinus,
        Family::HermitianOddDim,
        Family::HermitianEvenDim,
    ];
    for f in families {
        for q in [2u64, 3, 4] {
            let Ok(p) = PolarParams::new(f, q, 2) else { continue };
            let n = num_generators(&p);
            let listed = enumerate_generators_capped(&p, 2000).map(|v| v.len().to_string());
            let profile: Vec<String> = (0..=2).map(|s| count_codim(&p, s).unwrap().to_string()).collect();
            println!(
                "{:<10} n = {:<6} enumerated = {:<8} codim profile {}",
                p.notation(),
                n,
                listed.unwrap_or_else(|_| "-".into()),
                profile.join(" ")
            );
        }
    }
    Ok(())
}
