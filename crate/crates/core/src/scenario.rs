//! Seeded instance generators: the 30-zone benchmark network and small
//! random instances sized for brute-force cross-checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{CostCoefficients, ProblemInstance, ZoneCategory, ZoneSpec};

pub const DEFAULT_SEED: u64 = 1;

pub const BENCH_E_SF_MWH: f64 = 5e5;
pub const BENCH_C_DELTA: f64 = 500.0;
pub const BENCH_HORIZON_DAYS: u32 = 30;
pub const BENCH_P_AVG_MW: (u32, u32) = (500, 1000);
pub const BENCH_INDUSTRIAL: usize = 6;
pub const BENCH_RESIDENTIAL: usize = 21;
pub const BENCH_COMMERCIAL: usize = 3;

/// Coefficient ranges and outage boxes of one zone category. Durations
/// are in slots (15 minutes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CategoryParams {
    pub a1: (u32, u32),
    pub a2: (u32, u32),
    pub a3: (u32, u32),
    pub k_max: u32,
    pub d_min_slots: u32,
    pub d_max_slots: u32,
}

pub fn category_params(category: ZoneCategory) -> CategoryParams {
    match category {
        ZoneCategory::Industrial => {
            CategoryParams { a1: (50, 150), a2: (20, 70), a3: (70, 120), k_max: 50, d_min_slots: 8, d_max_slots: 16 }
        }
        ZoneCategory::Residential => {
            CategoryParams { a1: (50, 150), a2: (70, 120), a3: (20, 70), k_max: 200, d_min_slots: 2, d_max_slots: 8 }
        }
        ZoneCategory::Commercial => {
            CategoryParams { a1: (500, 600), a2: (70, 120), a3: (70, 120), k_max: 20, d_min_slots: 1, d_max_slots: 2 }
        }
    }
}

/// Zone categories in id order: industrial first, then residential, then
/// commercial.
pub fn bench_categories() -> Vec<ZoneCategory> {
    let mut cats = vec![ZoneCategory::Industrial; BENCH_INDUSTRIAL];
    cats.extend(std::iter::repeat_n(ZoneCategory::Residential, BENCH_RESIDENTIAL));
    cats.extend(std::iter::repeat_n(ZoneCategory::Commercial, BENCH_COMMERCIAL));
    cats
}

/// The 30-zone benchmark network. Average powers and cost coefficients are
/// drawn as integers, uniformly from their ranges.
pub fn bench_instance(seed: u64) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zones = bench_categories()
        .into_iter()
        .enumerate()
        .map(|(i, category)| {
            let params = category_params(category);
            let mut draw = |(lo, hi): (u32, u32)| f64::from(rng.gen_range(lo..=hi));
            let p_avg = draw(BENCH_P_AVG_MW);
            let coeffs = CostCoefficients::new(draw(params.a1), draw(params.a2), draw(params.a3));
            ZoneSpec {
                id: i + 1,
                category,
                p_avg,
                coeffs,
                k_max: params.k_max,
                d_min_slots: params.d_min_slots,
                d_max_slots: params.d_max_slots,
            }
        })
        .collect();
    ProblemInstance::new(zones, BENCH_E_SF_MWH, BENCH_C_DELTA, BENCH_HORIZON_DAYS)
        .expect("benchmark parameters are valid")
}

/// Random instance with 1 to 3 zones, `k_max <= 6` and duration boxes
/// within `[1, 6]` slots. All data are integers so every cost and energy is
/// an exact multiple of 1/4. About one instance in ten has a shortfall
/// above the maximum sheddable energy.
pub fn small_instance(seed: u64) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5a11);
    let n = rng.gen_range(1..=3);
    let zones: Vec<ZoneSpec> = (1..=n)
        .map(|id| {
            let d_min = rng.gen_range(1..=6);
            let d_max = rng.gen_range(d_min..=6);
            let category = match rng.gen_range(0..3) {
                0 => ZoneCategory::Industrial,
                1 => ZoneCategory::Residential,
                _ => ZoneCategory::Commercial,
            };
            ZoneSpec {
                id,
                category,
                p_avg: f64::from(rng.gen_range(10u32..=100)),
                coeffs: CostCoefficients::new(
                    f64::from(rng.gen_range(0u32..=20)),
                    f64::from(rng.gen_range(0u32..=20)),
                    f64::from(rng.gen_range(0u32..=20)),
                ),
                k_max: rng.gen_range(0..=6),
                d_min_slots: d_min,
                d_max_slots: d_max,
            }
        })
        .collect();
    let max_shed: f64 = zones.iter().map(ZoneSpec::max_shed_mwh).sum();
    let e_sf = (max_shed * rng.gen_range(0.0..1.1)).round();
    let c_delta = if rng.gen_bool(0.3) { 1e6 } else { f64::from(rng.gen_range(0u32..=60)) };
    ProblemInstance::new(zones, e_sf, c_delta, 1).expect("generated instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bench_shape() {
        let inst = bench_instance(DEFAULT_SEED);
        assert_eq!(inst.num_zones(), 30);
        let cats = bench_categories();
        for (z, c) in inst.zones().iter().zip(&cats) {
            assert_eq!(z.category, *c);
            let p = category_params(*c);
            assert!((500.0..=1000.0).contains(&z.p_avg));
            assert!((p.a1.0 as f64..=p.a1.1 as f64).contains(&z.coeffs.a1));
            assert!((p.a2.0 as f64..=p.a2.1 as f64).contains(&z.coeffs.a2));
            assert!((p.a3.0 as f64..=p.a3.1 as f64).contains(&z.coeffs.a3));
            assert_eq!(z.p_avg.fract(), 0.0);
        }
        assert_eq!(cats.iter().filter(|c| **c == ZoneCategory::Residential).count(), 21);
        assert_eq!(inst.e_sf, 5e5);
        assert_eq!(inst.c_delta, 500.0);
        assert_eq!(inst.horizon_slots(), 30 * 96);
    }

    #[test]
    fn category_boxes_in_slots() {
        // 2-4 h industrial, 0.5-2 h residential, 0.25-0.5 h commercial
        let ind = category_params(ZoneCategory::Industrial);
        assert_eq!((ind.d_min_slots, ind.d_max_slots, ind.k_max), (8, 16, 50));
        let res = category_params(ZoneCategory::Residential);
        assert_eq!((res.d_min_slots, res.d_max_slots, res.k_max), (2, 8, 200));
        let com = category_params(ZoneCategory::Commercial);
        assert_eq!((com.d_min_slots, com.d_max_slots, com.k_max), (1, 2, 20));
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(bench_instance(7), bench_instance(7));
        assert_ne!(bench_instance(7), bench_instance(8));
        assert_eq!(small_instance(3), small_instance(3));
    }

    #[test]
    fn small_instances_respect_limits() {
        for seed in 0..200 {
            let inst = small_instance(seed);
            assert!((1..=3).contains(&inst.num_zones()));
            for z in inst.zones() {
                assert!(z.k_max <= 6 && z.d_min_slots >= 1 && z.d_max_slots <= 6);
            }
        }
    }
}
