//! Randomized brute-force design search.
//!
//! Draws CoM and joint placements uniformly within constraint windows,
//! generates a leg per sample, scores each feasible design by (J1, J2) on a
//! fixed statics grid, and supports radius binning and Pareto extraction
//! over the scored population.

use crate::error::{Error, Result};
use crate::fixtures::{leg_rate_limit, LEG_MASS};
use crate::geometry::{generate_leg_with, BodyParams, GenConfig, RobotDesign};
use crate::statics::{build_moment_field, eval_j1, eval_j2};
use crate::vec2::Vec2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Windows for the randomized parameters, plus scoring configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConstraints {
    pub body_width: f64,
    pub body_height: f64,
    pub mass: f64,
    /// CoM forward-offset window (m).
    pub com_y_range: (f64, f64),
    /// CoM vertical-offset window (m).
    pub com_z_range: (f64, f64),
    /// Front joint forward-offset window (m).
    pub joint_y_range: (f64, f64),
    /// Front joint vertical-offset window (m).
    pub joint_z_range: (f64, f64),
    /// Maximum-leg-radius bin edges (m), ascending.
    pub bin_edges: Vec<f64>,
    pub samples: usize,
    pub master_seed: u64,
    /// Statics grid used for scoring (θ samples, Δφ samples).
    pub grid: (usize, usize),
    pub gen: GenConfig,
}

impl Default for SearchConstraints {
    fn default() -> Self {
        // Nominal 60 mm body; joints on the upper half of the body near the
        // corners, CoM within the central 60% of the body.
        let w = 0.060;
        let h = 0.060;
        SearchConstraints {
            body_width: w,
            body_height: h,
            mass: 0.373,
            com_y_range: (-0.3 * w, 0.3 * w),
            com_z_range: (-0.3 * h, 0.3 * h),
            joint_y_range: (0.25 * w / 2.0, w / 2.0),
            joint_z_range: (0.0, h / 2.0),
            bin_edges: vec![0.06, 0.09, 0.12, 0.15],
            samples: 2000,
            master_seed: 7,
            grid: (360, 28),
            gen: GenConfig::default(),
        }
    }
}

impl SearchConstraints {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidParams("sample count must be ≥ 1".into()));
        }
        let ok_range = |r: (f64, f64)| r.1 >= r.0;
        if !(ok_range(self.com_y_range)
            && ok_range(self.com_z_range)
            && ok_range(self.joint_y_range)
            && ok_range(self.joint_z_range))
        {
            return Err(Error::InvalidParams("constraint ranges must be ordered".into()));
        }
        if self.com_y_range.0.abs().max(self.com_y_range.1.abs()) >= self.body_width / 2.0
            || self.com_z_range.0.abs().max(self.com_z_range.1.abs()) >= self.body_height / 2.0
        {
            return Err(Error::InvalidParams("CoM window must stay inside the body".into()));
        }
        if self.joint_y_range.1 > self.body_width / 2.0 || self.joint_z_range.1 > self.body_height / 2.0
        {
            return Err(Error::InvalidParams("joint window must stay on the body".into()));
        }
        if !self.bin_edges.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidParams("bin edges must be ascending".into()));
        }
        Ok(())
    }
}

/// Rolling objectives plus the radius grouping key.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignScore {
    /// Cumulative best-case moment arm over a revolution (m·rad); more
    /// negative rolls better.
    pub j1: f64,
    /// Cumulative leg rotation tracking the idealized schedule (rad).
    pub j2: f64,
    pub max_leg_radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScoredDesign {
    pub design: RobotDesign,
    pub score: DesignScore,
    /// Per-sample seed, sufficient to regenerate the design.
    pub seed: u64,
}

/// Per-sample seed derivation (splitmix64 of master + golden-ratio stride),
/// so parallel and serial runs agree sample-for-sample.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draw one design: CoM and joint uniform in their windows, leg generated
/// from a derived seed. Deterministic per seed.
pub fn random_design(rng_seed: u64, constraints: &SearchConstraints) -> Result<RobotDesign> {
    constraints.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let draw = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| {
        if hi > lo {
            rng.gen_range(lo..hi)
        } else {
            lo
        }
    };
    let com = Vec2::new(
        draw(&mut rng, constraints.com_y_range),
        draw(&mut rng, constraints.com_z_range),
    );
    let joint = Vec2::new(
        draw(&mut rng, constraints.joint_y_range),
        draw(&mut rng, constraints.joint_z_range),
    );
    let m = constraints.mass;
    let body = BodyParams::new(
        constraints.body_width,
        constraints.body_height,
        com,
        joint,
        m,
        m * (constraints.body_width.powi(2) + constraints.body_height.powi(2)) / 12.0,
    )?;
    let leg_seed: u64 = rng.gen();
    let front = generate_leg_with(leg_seed, &body, &constraints.gen)?;
    RobotDesign::new(body, front, LEG_MASS, leg_rate_limit())
}

pub fn score_design(design: &RobotDesign, grid: (usize, usize)) -> DesignScore {
    let field = build_moment_field(design, grid.0, grid.1);
    DesignScore {
        j1: eval_j1(&field),
        j2: eval_j2(&field),
        max_leg_radius: design.max_leg_radius(),
    }
}

/// Generate and score every sample. Samples run in parallel; output order is
/// by sample index, so results are a pure function of the constraints.
/// Individual failures are dropped unless they exceed half the request, which
/// trips the circuit breaker.
pub fn run_search(constraints: &SearchConstraints) -> Result<Vec<ScoredDesign>> {
    constraints.validate()?;
    let results: Vec<Option<ScoredDesign>> = (0..constraints.samples as u64)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(constraints.master_seed, i);
            let design = random_design(seed, constraints).ok()?;
            let score = score_design(&design, constraints.grid);
            Some(ScoredDesign {
                design,
                score,
                seed,
            })
        })
        .collect();
    let failed = results.iter().filter(|r| r.is_none()).count();
    if failed * 2 > constraints.samples {
        return Err(Error::SearchCircuitBreaker {
            failed,
            requested: constraints.samples,
        });
    }
    Ok(results.into_iter().flatten().collect())
}

/// Designs not dominated in (J1 minimized, J2 minimized), sorted by J2
/// ascending.
pub fn pareto_front(scored: &[ScoredDesign]) -> Result<Vec<ScoredDesign>> {
    if scored.is_empty() {
        return Err(Error::InvalidParams("empty design list".into()));
    }
    let mut front: Vec<ScoredDesign> = scored
        .iter()
        .filter(|a| !scored.iter().any(|b| dominates(&b.score, &a.score)))
        .cloned()
        .collect();
    front.sort_by(|a, b| {
        (a.score.j2, a.score.j1)
            .partial_cmp(&(b.score.j2, b.score.j1))
            .unwrap()
    });
    Ok(front)
}

pub fn dominates(a: &DesignScore, b: &DesignScore) -> bool {
    a.j1 <= b.j1 && a.j2 <= b.j2 && (a.j1 < b.j1 || a.j2 < b.j2)
}

/// The documented inverted-pendulum-class predicate: leg tip starting above
/// the body, joints above body mid-height, CoM within w/6 of the centerline.
pub fn is_inverted_pendulum(design: &RobotDesign) -> bool {
    let h = design.body.height;
    let w = design.body.width;
    let tip_above = design
        .front_leg
        .keypoints
        .first()
        .map(|a| a.z > h / 2.0)
        .unwrap_or(false);
    tip_above && design.body.joint_offset.z > 0.0 && design.body.com_offset.y.abs() < w / 6.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BinnedDesigns {
    pub edges: Vec<f64>,
    /// `bins[0]` holds designs below the first edge, `bins[k]` those in
    /// `[edges[k-1], edges[k])`, and the last bin everything above.
    pub bins: Vec<Vec<ScoredDesign>>,
}

/// Partition by maximum leg radius. Out-of-range designs land in the first
/// and last (overflow) bins.
pub fn bin_by_max_radius(scored: &[ScoredDesign], bin_edges: &[f64]) -> Result<BinnedDesigns> {
    if !bin_edges.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::InvalidParams("bin edges must be ascending".into()));
    }
    let mut bins: Vec<Vec<ScoredDesign>> = vec![Vec::new(); bin_edges.len() + 1];
    for s in scored {
        let r = s.score.max_leg_radius;
        let k = bin_edges.partition_point(|&e| e <= r);
        bins[k].push(s.clone());
    }
    Ok(BinnedDesigns {
        edges: bin_edges.to_vec(),
        bins,
    })
}

/// Lower envelope of J1 versus J2: per J2 bin, the minimum J1.
/// Returns (bin center, min J1) for nonempty bins.
pub fn lower_envelope(scored: &[ScoredDesign], j2_bin_width: f64) -> Vec<(f64, f64)> {
    let mut bins: std::collections::BTreeMap<i64, f64> = std::collections::BTreeMap::new();
    for s in scored {
        let k = (s.score.j2 / j2_bin_width).floor() as i64;
        let e = bins.entry(k).or_insert(f64::INFINITY);
        *e = e.min(s.score.j1);
    }
    bins.into_iter()
        .map(|(k, j1)| ((k as f64 + 0.5) * j2_bin_width, j1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tiny() -> SearchConstraints {
        SearchConstraints {
            samples: 4,
            grid: (64, 16),
            ..SearchConstraints::default()
        }
    }

    #[test]
    fn random_design_deterministic() {
        let c = tiny();
        let a = random_design(123, &c).unwrap();
        let b = random_design(123, &c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_width_com_range_centers_every_design() {
        let c = SearchConstraints {
            com_y_range: (0.0, 0.0),
            com_z_range: (0.0, 0.0),
            ..tiny()
        };
        for seed in [1u64, 2, 3] {
            let d = random_design(seed, &c).unwrap();
            assert_eq!(d.body.com_offset, Vec2::ZERO);
        }
    }

    #[test]
    fn feasibility_rate_over_a_thousand_samples() {
        let c = SearchConstraints::default();
        let ok = (0..1000u64)
            .into_par_iter()
            .filter(|&i| random_design(derive_seed(c.master_seed, i), &c).is_ok())
            .count();
        assert!(ok >= 900, "feasible {ok}/1000");
    }

    #[test]
    fn single_sample_search_matches_composition() {
        let c = SearchConstraints {
            samples: 1,
            ..tiny()
        };
        let out = run_search(&c).unwrap();
        assert_eq!(out.len(), 1);
        let seed = derive_seed(c.master_seed, 0);
        assert_eq!(out[0].seed, seed);
        let d = random_design(seed, &c).unwrap();
        assert_eq!(out[0].design, d);
        let s = score_design(&d, c.grid);
        assert_eq!(out[0].score, s);
    }

    #[test]
    fn search_deterministic() {
        let c = tiny();
        let a = run_search(&c).unwrap();
        let b = run_search(&c).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.seed, y.seed);
            assert_eq!(x.score, y.score);
        }
    }

    fn fake_scored(j1: f64, j2: f64) -> ScoredDesign {
        ScoredDesign {
            design: crate::fixtures::circle_design(0.07),
            score: DesignScore {
                j1,
                j2,
                max_leg_radius: 0.05,
            },
            seed: 0,
        }
    }

    #[test]
    fn pareto_trivial_cases() {
        let single = vec![fake_scored(-1.0, 2.0)];
        assert_eq!(pareto_front(&single).unwrap().len(), 1);

        let pair = vec![fake_scored(-1.0, 2.0), fake_scored(-0.5, 3.0)];
        let front = pareto_front(&pair).unwrap();
        assert_eq!(front.len(), 1);
        assert_eq!(front[0].score.j1, -1.0);

        assert!(pareto_front(&[]).is_err());
    }

    proptest! {
        #[test]
        fn pareto_matches_quadratic_oracle(
            points in proptest::collection::vec((-5.0f64..0.0, 0.0f64..10.0), 1..200)
        ) {
            let scored: Vec<ScoredDesign> =
                points.iter().map(|&(j1, j2)| fake_scored(j1, j2)).collect();
            let front = pareto_front(&scored).unwrap();
            // O(n²) domination oracle.
            let oracle: Vec<&ScoredDesign> = scored
                .iter()
                .filter(|a| !scored.iter().any(|b| dominates(&b.score, &a.score)))
                .collect();
            prop_assert_eq!(front.len(), oracle.len());
            for f in &front {
                prop_assert!(!scored.iter().any(|b| dominates(&b.score, &f.score)));
            }
            // Sorted by J2 ascending.
            for w in front.windows(2) {
                prop_assert!(w[0].score.j2 <= w[1].score.j2);
            }
        }
    }

    #[test]
    fn bins_partition_input() {
        let scored: Vec<ScoredDesign> = (0..20)
            .map(|i| {
                let mut s = fake_scored(-1.0, 2.0);
                s.score.max_leg_radius = 0.03 + 0.01 * i as f64;
                s
            })
            .collect();
        let edges = [0.06, 0.12, 0.18];
        let binned = bin_by_max_radius(&scored, &edges).unwrap();
        assert_eq!(binned.bins.len(), 4);
        let total: usize = binned.bins.iter().map(|b| b.len()).sum();
        assert_eq!(total, scored.len());
    }

    #[test]
    fn constant_radius_designs_fill_one_bin() {
        let scored: Vec<ScoredDesign> = (0..5)
            .map(|_| {
                let mut s = fake_scored(-1.0, 2.0);
                s.score.max_leg_radius = 0.050;
                s
            })
            .collect();
        let binned = bin_by_max_radius(&scored, &[0.0, 0.06, 0.12]).unwrap();
        assert_eq!(binned.bins[1].len(), 5);
        assert!(binned.bins[0].is_empty() && binned.bins[2].is_empty() && binned.bins[3].is_empty());
    }

    #[test]
    fn scale_property_through_pipeline() {
        // Scaling all constraint lengths scales J1 and leaves J2 unchanged.
        let c = SearchConstraints {
            samples: 2,
            grid: (120, 16),
            ..SearchConstraints::default()
        };
        let base = run_search(&c).unwrap();
        let s = 2.0;
        for b in &base {
            let scaled = b.design.scaled(s);
            let sc = score_design(&scaled, c.grid);
            assert!((sc.j1 - s * b.score.j1).abs() <= 1e-6 * b.score.j1.abs().max(1e-9));
            assert!((sc.j2 - b.score.j2).abs() <= 1e-9);
            assert!((sc.max_leg_radius - s * b.score.max_leg_radius).abs() < 1e-12);
        }
    }
}
