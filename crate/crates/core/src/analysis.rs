//! Post-run measurements: external absolute fitness against shuffled copies,
//! rank tables with reference-census ranks, ash-per-area ratios, shuffle
//! experiments, and Pearson correlations with two-tailed Student t-tests.

use crate::arena::{self, ArenaError, MatchParams};
use crate::census::{self, CensusLimits, CensusReport};
use crate::genome::Seed;
use crate::rle::seed_digest;
use crate::rng::{RngFactory, StreamKind};
use crate::stats::student_t_two_tailed;
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("correlation is undefined: {side} values have zero variance")]
    ZeroVariance { side: &'static str },
    #[error(transparent)]
    Arena(#[from] ArenaError),
}

/// External absolute fitness: win fraction against size- and density-matched
/// shuffled copies of the seed itself.
#[derive(Clone, Debug)]
pub struct AbsFitnessResult {
    pub seed_digest: String,
    pub n_opponents: usize,
    pub games_played: usize,
    pub win_fraction: f64,
}

/// Plays a colour-swapped pair against `n_opponents` shuffled copies.
/// Shuffling preserves area and density, so any edge comes from structure.
pub fn absolute_fitness(
    seed: &Seed,
    n_opponents: usize,
    match_params: &MatchParams,
    rngf: &RngFactory,
    task: u64,
) -> Result<AbsFitnessResult, AnalysisError> {
    assert!(n_opponents >= 1, "need at least one opponent");
    let credits: Vec<f64> = (0..n_opponents)
        .into_par_iter()
        .map(|i| {
            let mut rng = rngf.stream(StreamKind::Absolute, (task << 16) | i as u64);
            let opponent = seed.shuffle(&mut rng);
            debug_assert_eq!(opponent.area(), seed.area());
            debug_assert_eq!(opponent.ones(), seed.ones());
            let games = arena::play_pair(seed, &opponent, match_params, &mut rng)?;
            Ok(arena::pair_credit(&games))
        })
        .collect::<Result<_, ArenaError>>()?;
    let games_played = 2 * n_opponents;
    let win_fraction = credits.iter().sum::<f64>() / games_played as f64;
    Ok(AbsFitnessResult {
        seed_digest: seed_digest(seed),
        n_opponents,
        games_played,
        win_fraction,
    })
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, AnalysisError> {
    assert_eq!(xs.len(), ys.len(), "paired samples must have equal length");
    let n = xs.len();
    if n < 3 {
        return Err(AnalysisError::TooFewSamples { min: 3, got: n });
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(AnalysisError::ZeroVariance { side: "x" });
    }
    if syy == 0.0 {
        return Err(AnalysisError::ZeroVariance { side: "y" });
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Two-tailed Student t-test of a Pearson correlation.
#[derive(Clone, Copy, Debug)]
pub struct CorrelationResult {
    pub r: f64,
    pub n: usize,
    pub t_statistic: f64,
    pub p_value: f64,
    /// Set when |r| = 1 and the t statistic diverges.
    pub degenerate: bool,
}

/// t = r·sqrt((n−2)/(1−r²)); p from Student's t with n−2 degrees of freedom.
pub fn t_test_r(r: f64, n: usize) -> CorrelationResult {
    assert!(n >= 3, "need n >= 3");
    assert!((-1.0..=1.0).contains(&r), "correlation out of range");
    let dof = (n - 2) as f64;
    if r.abs() >= 1.0 {
        return CorrelationResult {
            r,
            n,
            t_statistic: f64::INFINITY * r.signum(),
            p_value: 0.0,
            degenerate: true,
        };
    }
    let t = r * (dof / (1.0 - r * r)).sqrt();
    CorrelationResult {
        r,
        n,
        t_statistic: t,
        p_value: student_t_two_tailed(t, dof),
        degenerate: false,
    }
}

/// Ashes produced per unit of seed area.
pub fn ashes_per_area(total_ashes: f64, total_area: f64) -> f64 {
    assert!(total_area > 0.0, "area must be positive");
    total_ashes / total_area
}

/// One row of a rank table.
#[derive(Clone, Debug)]
pub struct RankRow {
    pub rank: usize,
    pub display_name: String,
    pub canonical_code: String,
    pub count: u64,
    /// The type's rank in the public reference census, when named.
    pub reference_rank: Option<u32>,
}

/// Aggregated type frequencies across many censuses, most frequent first.
#[derive(Clone, Debug, Default)]
pub struct RankTable {
    pub rows: Vec<RankRow>,
    pub total_types: usize,
    pub total_freq: u64,
    pub num_seeds: usize,
    /// total_freq / num_seeds; NaN when there are no seeds.
    pub freq_per_seed: f64,
}

/// Ranks ash types by decreasing aggregate frequency (ties by display name)
/// and joins each with its reference rank.
pub fn rank_table(reports: &[CensusReport]) -> RankTable {
    let mut counts: BTreeMap<census::AshType, u64> = BTreeMap::new();
    for report in reports {
        for (ty, &n) in &report.counts {
            *counts.entry(ty.clone()).or_insert(0) += n as u64;
        }
    }
    let mut entries: Vec<(census::AshType, u64)> = counts.into_iter().collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.display_name().cmp(&b.0.display_name())));

    let total_freq: u64 = entries.iter().map(|(_, n)| n).sum();
    let rows: Vec<RankRow> = entries
        .into_iter()
        .enumerate()
        .map(|(i, (ty, count))| RankRow {
            rank: i + 1,
            display_name: ty.display_name(),
            reference_rank: ty.name().and_then(census::reference_rank),
            canonical_code: ty.code().to_owned(),
            count,
        })
        .collect();
    RankTable {
        total_types: rows.len(),
        total_freq,
        num_seeds: reports.len(),
        freq_per_seed: total_freq as f64 / reports.len() as f64,
        rows,
    }
}

/// Per-seed outcome of the shuffle experiment.
#[derive(Clone, Debug)]
pub struct ShufflePair {
    pub seed_digest: String,
    pub intact_productivity: u32,
    pub intact_diversity: u32,
    pub shuffled_productivity: u32,
    pub shuffled_diversity: u32,
}

impl ShufflePair {
    /// shuffled/intact productivity; None when the intact census is empty.
    pub fn productivity_ratio(&self) -> Option<f64> {
        (self.intact_productivity > 0)
            .then(|| self.shuffled_productivity as f64 / self.intact_productivity as f64)
    }
}

/// Paired intact-vs-shuffled census statistics.
#[derive(Clone, Debug)]
pub struct ShuffleStats {
    pub pairs: Vec<ShufflePair>,
    /// Seeds whose intact or shuffled census failed to stabilize.
    pub unstabilized: usize,
    pub mean_intact_productivity: f64,
    pub mean_shuffled_productivity: f64,
    pub mean_intact_diversity: f64,
    pub mean_shuffled_diversity: f64,
    /// Ratio of the productivity means; NaN when the intact mean is zero.
    pub productivity_ratio: f64,
    /// Ratio of the diversity means; NaN when the intact mean is zero.
    pub diversity_ratio: f64,
}

impl ShuffleStats {
    /// Median of the per-seed shuffled/intact productivity ratios, skipping
    /// pairs with an empty intact census.
    pub fn median_productivity_ratio(&self) -> Option<f64> {
        let mut ratios: Vec<f64> =
            self.pairs.iter().filter_map(ShufflePair::productivity_ratio).collect();
        if ratios.is_empty() {
            return None;
        }
        ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mid = ratios.len() / 2;
        Some(if ratios.len() % 2 == 1 {
            ratios[mid]
        } else {
            (ratios[mid - 1] + ratios[mid]) / 2.0
        })
    }
}

/// For each seed, censuses the intact seed and one shuffled copy. Seeds whose
/// census fails to stabilize are excluded and counted.
pub fn shuffle_experiment(
    seeds: &[Seed],
    limits: &CensusLimits,
    rngf: &RngFactory,
) -> ShuffleStats {
    let outcomes: Vec<Option<ShufflePair>> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, seed)| {
            let mut rng = rngf.stream(StreamKind::Task, 0x5E << 40 | i as u64);
            let shuffled = seed.shuffle(&mut rng);
            debug_assert_eq!(shuffled.area(), seed.area());
            debug_assert_eq!(shuffled.ones(), seed.ones());
            let intact = census::census(seed, limits).ok()?;
            let shuffled = census::census(&shuffled, limits).ok()?;
            Some(ShufflePair {
                seed_digest: intact.seed_digest.clone(),
                intact_productivity: intact.num_objects(),
                intact_diversity: intact.num_types(),
                shuffled_productivity: shuffled.num_objects(),
                shuffled_diversity: shuffled.num_types(),
            })
        })
        .collect();

    let unstabilized = outcomes.iter().filter(|o| o.is_none()).count();
    let pairs: Vec<ShufflePair> = outcomes.into_iter().flatten().collect();
    let mean = |f: fn(&ShufflePair) -> u32| -> f64 {
        if pairs.is_empty() {
            return f64::NAN;
        }
        pairs.iter().map(|p| f(p) as f64).sum::<f64>() / pairs.len() as f64
    };
    let mi = mean(|p| p.intact_productivity);
    let ms = mean(|p| p.shuffled_productivity);
    let di = mean(|p| p.intact_diversity);
    let ds = mean(|p| p.shuffled_diversity);
    ShuffleStats {
        unstabilized,
        mean_intact_productivity: mi,
        mean_shuffled_productivity: ms,
        mean_intact_diversity: di,
        mean_shuffled_diversity: ds,
        productivity_ratio: ms / mi,
        diversity_ratio: ds / di,
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::NAMED_ASH;

    #[test]
    fn absolute_fitness_of_all_zero_seed_is_exactly_half() {
        // Shuffles of an all-dead seed are identical to it; every game is a
        // 0-0 tie, so the win fraction is exactly 0.5.
        let zero = Seed::zeros(5, 5).unwrap();
        let rngf = RngFactory::new(3);
        let res =
            absolute_fitness(&zero, 10, &MatchParams::default(), &rngf, 0).unwrap();
        assert_eq!(res.win_fraction, 0.5);
        assert_eq!(res.games_played, 20);
    }

    #[test]
    fn absolute_fitness_of_random_seeds_averages_half() {
        // Any single random seed can genuinely beat (or lose to) its own
        // shuffles, so the 0.5 expectation only shows up averaged over fresh
        // random seeds.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let rngf = RngFactory::new(4);
        let params = MatchParams::default();
        let n_seeds = 60;
        let mut total = 0.0;
        for i in 0..n_seeds {
            let seed = Seed::random(5, 5, 0.4, &mut rng).unwrap();
            total += absolute_fitness(&seed, 10, &params, &rngf, i).unwrap().win_fraction;
        }
        let mean = total / n_seeds as f64;
        assert!((mean - 0.5).abs() < 0.07, "mean win fraction {mean}");
    }

    #[test]
    fn pearson_exact_cases() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.to_vec();
        assert!((pearson(&xs, &ys).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_hand_computed_value() {
        // xs = (1,2,3,4), ys = (2,4,5,9): covariance arithmetic by hand gives
        // r = 11 / sqrt(5 * 26).
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [2.0, 4.0, 5.0, 9.0];
        let expected = 11.0 / (5.0f64 * 26.0).sqrt();
        assert!((pearson(&xs, &ys).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn pearson_error_cases() {
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0, 2.0]),
            Err(AnalysisError::TooFewSamples { .. })
        ));
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(AnalysisError::ZeroVariance { side: "x" })
        ));
    }

    #[test]
    fn pearson_is_invariant_under_positive_affine_maps() {
        let xs = [1.0, 2.5, 3.0, 4.7, 5.1];
        let ys = [2.0, 1.0, 4.0, 3.5, 5.0];
        let base = pearson(&xs, &ys).unwrap();
        let scaled: Vec<f64> = xs.iter().map(|x| 3.0 * x + 7.0).collect();
        assert!((pearson(&scaled, &ys).unwrap() - base).abs() < 1e-12);
        let negated: Vec<f64> = xs.iter().map(|x| -2.0 * x).collect();
        assert!((pearson(&negated, &ys).unwrap() + base).abs() < 1e-12);
    }

    #[test]
    fn t_test_zero_correlation_gives_p_one() {
        let res = t_test_r(0.0, 48);
        assert_eq!(res.p_value, 1.0);
        assert_eq!(res.t_statistic, 0.0);
        assert!(!res.degenerate);
    }

    #[test]
    fn t_test_degenerate_correlation() {
        let res = t_test_r(1.0, 10);
        assert!(res.degenerate);
        assert_eq!(res.p_value, 0.0);
    }

    #[test]
    fn t_test_is_monotone_in_r() {
        let mut last = 1.0;
        for r in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let p = t_test_r(r, 48).p_value;
            assert!(p < last, "p({r}) = {p}");
            last = p;
        }
    }

    #[test]
    fn ashes_per_area_cases() {
        assert!((ashes_per_area(73.1, 94.1) - 0.78).abs() < 0.01);
        assert!((ashes_per_area(21.8, 256.0) - 0.09).abs() < 0.005);
        assert_eq!(ashes_per_area(0.0, 100.0), 0.0);
    }

    fn report_of(pairs: &[(&str, u32)]) -> CensusReport {
        let mut counts = BTreeMap::new();
        for &(name, n) in pairs {
            let ty = NAMED_ASH.iter().find(|e| e.name == name).unwrap().ash_type();
            counts.insert(ty, n);
        }
        CensusReport::from_counts(counts, "test".into())
    }

    #[test]
    fn rank_table_orders_by_frequency() {
        let report = report_of(&[("block", 6), ("blinker", 5), ("pond", 2)]);
        let table = rank_table(&[report]);
        let names: Vec<&str> = table.rows.iter().map(|r| r.display_name.as_str()).collect();
        assert_eq!(names, ["block", "blinker", "pond"]);
        assert_eq!(table.rows[0].reference_rank, Some(1));
        assert_eq!(table.rows[2].reference_rank, Some(9));
        assert_eq!(table.total_freq, 13);
        assert_eq!(table.total_types, 3);
        assert_eq!(table.num_seeds, 1);
    }

    #[test]
    fn rank_table_totals() {
        let a = report_of(&[("block", 3), ("glider", 1)]);
        let b = report_of(&[("block", 2), ("beehive", 4)]);
        let table = rank_table(&[a, b]);
        assert_eq!(table.total_freq, 10);
        assert_eq!(table.total_types, 3);
        assert_eq!(table.num_seeds, 2);
        assert!((table.freq_per_seed - 5.0).abs() < 1e-12);
        let total_from_rows: u64 = table.rows.iter().map(|r| r.count).sum();
        assert_eq!(total_from_rows, table.total_freq);
    }

    #[test]
    fn rank_table_empty_input() {
        let table = rank_table(&[]);
        assert!(table.rows.is_empty());
        assert_eq!(table.total_freq, 0);
        assert_eq!(table.num_seeds, 0);
        assert!(table.freq_per_seed.is_nan());
    }

    #[test]
    fn shuffle_experiment_degenerate_all_zero_seeds() {
        let seeds = vec![Seed::zeros(4, 4).unwrap(), Seed::zeros(3, 5).unwrap()];
        let stats =
            shuffle_experiment(&seeds, &CensusLimits::default(), &RngFactory::new(5));
        assert_eq!(stats.unstabilized, 0);
        assert_eq!(stats.mean_intact_productivity, 0.0);
        assert_eq!(stats.mean_shuffled_productivity, 0.0);
        assert!(stats.productivity_ratio.is_nan());
        assert_eq!(stats.median_productivity_ratio(), None);
    }
}
