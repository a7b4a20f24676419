use rollgait_core::search::{derive_seed, is_inverted_pendulum, pareto_front, random_design, score_design, SearchConstraints};
use rayon::prelude::*;

fn main() {
    let c = SearchConstraints::default();
    // Score the same 2000 designs at both grids.
    let designs: Vec<_> = (0..2000u64)
        .into_par_iter()
        .filter_map(|i| random_design(derive_seed(c.master_seed, i), &c).ok())
        .collect();
    println!("{} designs", designs.len());
    for grid in [(360usize, 28usize), (720, 56)] {
        let scored: Vec<_> = designs
            .par_iter()
            .map(|d| rollgait_core::search::ScoredDesign {
                design: d.clone(),
                score: score_design(d, grid),
                seed: 0,
            })
            .collect();
        let front = pareto_front(&scored).unwrap();
        let ip_front = front.iter().take(10).filter(|s| is_inverted_pendulum(&s.design)).count();
        let n10 = front.len().min(10);
        // correlation proxy: mean |y_G| of the 50 lowest-J2 vs all
        let mut by_j2 = scored.clone();
        by_j2.sort_by(|a, b| a.score.j2.partial_cmp(&b.score.j2).unwrap());
        let low50: f64 = by_j2.iter().take(50).map(|s| s.design.body.com_offset.y.abs()).sum::<f64>() / 50.0;
        let all: f64 = scored.iter().map(|s| s.design.body.com_offset.y.abs()).sum::<f64>() / scored.len() as f64;
        let ip50 = by_j2.iter().take(50).filter(|s| is_inverted_pendulum(&s.design)).count();
        println!(
            "grid {grid:?}: front={} ip(front10)={ip_front}/{n10} mean|y_G| low50={:.4} all={:.4} ip(low50)={ip50}/50 J2min={:.2}",
            front.len(), low50, all, by_j2[0].score.j2
        );
        for s in front.iter().take(6) {
            println!("   J1={:.4} J2={:.4} yG={:+.4} ip={}", s.score.j1, s.score.j2, s.design.body.com_offset.y, is_inverted_pendulum(&s.design));
        }
    }
}
