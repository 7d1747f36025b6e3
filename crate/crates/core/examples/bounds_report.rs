//! Bound report for a small grid: Hoffman, closed form, LP, example sizes and stability data.

use polar_ekr::bounds::{bound_report, rat_string};
use polar_ekr::{Family, PolarParams};

fn main() -> polar_ekr::Result<()> {
    for d in [4usize, 8, 16] {
        let p = PolarParams::new(Family::Symplectic, 3, d)?;
        for t in [1, 2, 3] {
            let r = bound_report(&p, t, d <= 8)?;
            println!(
                "{} t={t}: hoffman {} explicit {:.4e} lp {} example {} threshold {} stable {:?}",
                r.notation,
                r.hoffman.as_ref().map(rat_string).unwrap_or_default(),
                r.explicit_bound.unwrap_or(f64::NAN),
                r.lp_bound.as_ref().map(rat_string).unwrap_or("-".into()),
                r.example_size_exact,
                r.threshold_ok,
                r.stability_ok,
            );
        }
    }
    let r = bound_report(&PolarParams::new(Family::EllipticQMinus, 4, 5)?, 2, true)?;
    println!("{}", serde_json::to_string_pretty(&r).unwrap());
    Ok(())
}
