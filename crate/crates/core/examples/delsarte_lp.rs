//! The exact simplex solver on a toy problem, then the Delsarte LP next to the Hoffman bound.

use polar_ekr::bounds::{hoffman_bound, rat_string};
use polar_ekr::lp::{delsarte_lp, delsarte_problem, simplex_solve, LPProblem, Relation};
use polar_ekr::{ExactRat, Family, PolarParams};

fn r(n: i64) -> ExactRat {
    ExactRat::from_integer(n.into())
}

fn main() -> polar_ekr::Result<()> {
    // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
    let mut toy = LPProblem::new(vec![r(3), r(2)]);
    toy.add(vec![r(1), r(1)], Relation::Le, r(4))
        .add(vec![r(1), r(3)], Relation::Le, r(6))
        .add(vec![r(1), r(0)], Relation::Le, r(3));
    let res = simplex_solve(&toy)?;
    let x: Vec<String> = res.solution.iter().map(rat_string).collect();
    println!("toy: {:?} value {} at ({})", res.status, res.value, x.join(", "));

    let p = PolarParams::new(Family::Symplectic, 2, 3)?;
    print!("{}", delsarte_problem(&p, 1)?.to_text());
    for q in [2u64, 3] {
        let p = PolarParams::new(Family::Symplectic, q, 3)?;
        for t in 1..p.d() {
            let lp = delsarte_lp(&p, t)?;
            println!(
                "{} t={t}: lp {} hoffman {} ({} pivots)",
                p.notation(),
                rat_string(&lp.value),
                rat_string(&hoffman_bound(&p, t)?),
                lp.iterations
            );
        }
    }
    Ok(())
}
