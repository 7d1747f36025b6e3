//! Exact maximum EKR sets, their shape, and the maximal-set lemmas on a small graph.

use polar_ekr::bounds::hoffman_floor;
use polar_ekr::geometry::build_graph;
use polar_ekr::search::{
    check_lemma_3_1, check_lemma_3_2, classify_witness, enumerate_maximal, max_ekr, EKRInstance, DEFAULT_BUDGET,
};
use polar_ekr::{Family, PolarParams};

fn main() -> polar_ekr::Result<()> {
    for (f, q, d) in [(Family::Symplectic, 2, 2), (Family::HyperbolicQPlus, 2, 3), (Family::Symplectic, 2, 3)] {
        let p = PolarParams::new(f, q, d)?;
        let g = build_graph(&p)?;
        for t in 1..d {
            let r = max_ekr(&EKRInstance::new(&g, t), DEFAULT_BUDGET);
            println!(
                "{} t={t}: size {} optimal {} hoffman floor {} shape {} ({} nodes, {} ms)",
                p.notation(),
                r.size,
                r.optimal,
                hoffman_floor(&p, t)?,
                classify_witness(&g, t, &r.witness).tag(),
                r.nodes_explored,
                r.millis
            );
        }
    }

    let g = build_graph(&PolarParams::new(Family::Symplectic, 2, 2)?)?;
    let all = enumerate_maximal(&EKRInstance::new(&g, 1), 10_000);
    let mut sizes: Vec<usize> = all.sets.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    sizes.dedup();
    println!("W(3,2) t=1: {} maximal sets, sizes {sizes:?}", all.sets.len());
    println!("lemma 3.1 ok: {}", check_lemma_3_1(&g, 1, 10_000).passed());
    println!("lemma 3.2 ok: {}", check_lemma_3_2(&g, 10_000).passed());
    Ok(())
}
