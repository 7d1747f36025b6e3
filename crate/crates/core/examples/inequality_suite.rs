//! Run the numeric inequality checks on a reduced grid and list the tallies.

use polar_ekr::bounds::{inequality_suite, InequalityGrid};

fn main() {
    let grid = InequalityGrid { max_d: 20, x_points: 501, ..InequalityGrid::default() };
    for c in inequality_suite(&grid) {
        println!("{:<5} {:>6} instances, {} violations", c.lemma, c.instances, c.violations.len());
        for v in c.violations.iter().take(3) {
            println!("      {v}");
        }
    }
}
