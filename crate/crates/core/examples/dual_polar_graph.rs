//! Build the dual polar graph of W(5,2), save it to a cache and inspect it.

use polar_ekr::geometry::{build_graph, load_or_build, DEFAULT_CAP};
use polar_ekr::{Family, PolarParams};

fn main() -> polar_ekr::Result<()> {
    let p = PolarParams::new(Family::Symplectic, 2, 3)?;
    let g = build_graph(&p)?;
    g.check_invariants()?;
    println!("{}: {} generators, profile of vertex 0: {:?}", p.notation(), g.n(), g.profile(0));

    let dir = std::env::temp_dir().join("polar-ekr-example-cache");
    let again = load_or_build(Some(&dir), &p, DEFAULT_CAP)?;
    assert_eq!(again.codim_bytes(), g.codim_bytes());
    println!("cached under {}", dir.display());

    // two generators meeting in a single point span a point pencil
    let j = (0..g.n()).find(|&j| g.codim(0, j) == p.d() - 1).expect("some pair meets in a point");
    let point = g.common_meet(&[0, j]);
    let pencil = g.point_pencil(&point)?;
    println!("pencil through the point shared by vertices 0 and {j}: {} generators", pencil.len());
    assert!(g.is_ekr_set(&pencil, p.d() - 1));
    Ok(())
}
