//! Steady-state evolutionary loop.
//!
//! The population stays at a constant size. Each birth selects parents by
//! tournament, builds a child through the enabled reproduction layers,
//! evaluates the child with a colour-swapped pair of Immigration Games
//! against every current member, inserts it and removes the least-fit
//! member. Fitness is the fraction of games won, ties counting ½, so the
//! population mean is exactly 0.5 at all times.
//!
//! Bookkeeping is incremental by default: the credit a member holds against
//! the departed member is dropped and its credit against the new child added,
//! which reproduces full re-evaluation up to Monte Carlo noise at a fraction
//! of the cost. Full per-birth re-evaluation is available behind
//! [`FitnessMode::Full`] for validation on small populations.
//!
//! Every stochastic choice draws from a stream derived from the master seed
//! (see [`crate::rng`]), so runs replay bit-exactly, including under rayon.

use crate::arena::{self, ArenaError, MatchParams};
use crate::genome::{CutAxis, GenomeError, Seed};
use crate::rle::seed_digest;
use crate::rng::{RngFactory, StreamKind};
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvoError {
    #[error("invalid parameter {key}: {reason}")]
    InvalidParam { key: &'static str, reason: String },
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error(transparent)]
    Genome(#[from] GenomeError),
}

fn invalid(key: &'static str, reason: impl Into<String>) -> EvoError {
    EvoError::InvalidParam { key, reason: reason.into() }
}

/// How member fitness is maintained across births.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitnessMode {
    /// Update records against the departed member and the new child only.
    Incremental,
    /// Re-play every pairing after each birth (validation mode).
    Full,
}

/// Seed-level reproduction parameters.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GenomeParams {
    pub init_rows: usize,
    pub init_cols: usize,
    pub init_density: f64,
    pub p_flip: f64,
    pub p_grow: f64,
    pub fuse_gap: usize,
    pub crossover_axis: CutAxis,
}

impl Default for GenomeParams {
    fn default() -> Self {
        Self {
            init_rows: 5,
            init_cols: 5,
            init_density: 0.375,
            p_flip: 0.01,
            p_grow: 0.5,
            fuse_gap: 1,
            crossover_axis: CutAxis::Row,
        }
    }
}

/// Full configuration of one evolutionary run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvoParams {
    pub pop_size: usize,
    pub generations: u32,
    pub tournament_size: usize,
    pub elite_k: usize,
    /// Layer 2: genome resizing before bit flips.
    pub layer2: bool,
    /// Layer 3: crossover.
    pub layer3: bool,
    /// Layer 4: symbiotic fusion.
    pub layer4: bool,
    /// Probability of taking the crossover path when layer 3 is enabled.
    pub p_sexual: f64,
    /// Probability of taking the fusion path when layer 4 is enabled.
    pub p_fusion: f64,
    pub fitness_mode: FitnessMode,
    pub match_params: MatchParams,
    pub genome: GenomeParams,
    pub rng_seed: u64,
}

impl Default for EvoParams {
    fn default() -> Self {
        Self {
            pop_size: 200,
            generations: 100,
            tournament_size: 2,
            elite_k: 50,
            layer2: true,
            layer3: true,
            layer4: true,
            p_sexual: 0.5,
            p_fusion: 0.1,
            fitness_mode: FitnessMode::Incremental,
            match_params: MatchParams::default(),
            genome: GenomeParams::default(),
            rng_seed: 0,
        }
    }
}

impl EvoParams {
    pub fn validate(&self) -> Result<(), EvoError> {
        if self.pop_size < 2 {
            return Err(invalid("pop_size", "population must have at least 2 members"));
        }
        if self.pop_size > 4096 {
            return Err(invalid("pop_size", "populations above 4096 are not supported"));
        }
        if self.generations == 0 {
            return Err(invalid("generations", "must be at least 1"));
        }
        if self.tournament_size < 2 || self.tournament_size > self.pop_size {
            return Err(invalid("tournament_size", "must be in 2..=pop_size"));
        }
        if self.elite_k == 0 || self.elite_k > self.pop_size {
            return Err(invalid("elite_k", "must be in 1..=pop_size"));
        }
        for (key, p) in
            [("p_sexual", self.p_sexual), ("p_fusion", self.p_fusion), ("p_flip", self.genome.p_flip), ("p_grow", self.genome.p_grow), ("init_density", self.genome.init_density)]
        {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(key, format!("{p} is outside [0, 1]")));
            }
        }
        if self.genome.init_rows == 0 || self.genome.init_cols == 0 {
            return Err(invalid("init_rows", "initial seed dimensions must be at least 1x1"));
        }
        if self.match_params.space_factor <= 0.0 {
            return Err(invalid("space_factor", "must be positive"));
        }
        if self.match_params.time_factor <= 0.0 {
            return Err(invalid("time_factor", "must be positive"));
        }
        Ok(())
    }
}

/// Games each member's fitness is measured over: two per opponent, counting
/// every member (itself included) as an opponent.
pub fn games_per_member(pop_size: usize) -> usize {
    2 * pop_size
}

#[derive(Clone, Debug)]
pub struct Member {
    pub seed: Seed,
    /// Unique id: initial members take 0..pop_size, later children
    /// pop_size + birth index.
    pub id: u64,
}

/// Constant-size population with the pairwise win-credit matrix.
///
/// `credit[i * n + j]` holds member i's win credit over its 2 games against
/// member j; the diagonal is the self-competition credit, exactly 1.0 (each
/// self-game awards ½ because the member holds both colours).
#[derive(Clone, Debug)]
pub struct Population {
    members: Vec<Member>,
    credit: Vec<f64>,
}

impl Population {
    fn new(members: Vec<Member>, credit: Vec<f64>) -> Self {
        debug_assert_eq!(credit.len(), members.len() * members.len());
        Self { members, credit }
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn seed(&self, i: usize) -> &Seed {
        &self.members[i].seed
    }

    /// Relative fitness of member `i`: win credit over its 2·pop games.
    pub fn fitness(&self, i: usize) -> f64 {
        let n = self.members.len();
        let row: f64 = self.credit[i * n..(i + 1) * n].iter().sum();
        row / games_per_member(n) as f64
    }

    pub fn fitness_vector(&self) -> Vec<f64> {
        (0..self.members.len()).map(|i| self.fitness(i)).collect()
    }

    /// Population mean fitness. Computed as one division over the whole
    /// credit matrix so the tie-½ conservation law (credits per pair sum to
    /// 2) makes this exactly 0.5, with no per-row rounding.
    pub fn mean_fitness(&self) -> f64 {
        let total: f64 = self.credit.iter().sum();
        total / (games_per_member(self.members.len()) * self.members.len()) as f64
    }

    /// Indices of the top-k members by fitness, ties broken by slot order.
    pub fn elite_indices(&self, k: usize) -> Vec<usize> {
        let fitness = self.fitness_vector();
        let mut idx: Vec<usize> = (0..self.members.len()).collect();
        idx.sort_by(|&a, &b| {
            fitness[b].partial_cmp(&fitness[a]).unwrap().then(a.cmp(&b))
        });
        idx.truncate(k);
        idx
    }

    #[cfg(test)]
    pub(crate) fn with_credit(members: Vec<Member>, credit: Vec<f64>) -> Self {
        Self::new(members, credit)
    }
}

/// Draws `tournament_size` members without replacement and returns the index
/// of the fittest; ties are broken uniformly at random.
pub fn tournament_select(pop: &Population, tournament_size: usize, rng: &mut impl Rng) -> usize {
    let n = pop.size();
    let k = tournament_size.min(n);
    let contenders = sample(rng, n, k);
    let mut best: Vec<usize> = Vec::with_capacity(4);
    let mut best_fitness = f64::NEG_INFINITY;
    for i in contenders {
        let f = pop.fitness(i);
        if f > best_fitness {
            best_fitness = f;
            best.clear();
            best.push(i);
        } else if f == best_fitness {
            best.push(i);
        }
    }
    best[rng.gen_range(0..best.len())]
}

/// Builds one child through the enabled layers: fusion bypasses mutation,
/// crossover children pass through the mutation layers, and the asexual path
/// is resize (layer 2) plus bit flips (layer 1).
pub fn breed(pop: &Population, params: &EvoParams, rng: &mut impl Rng) -> Result<Seed, EvoError> {
    let g = &params.genome;
    if params.layer4 && rng.gen_bool(params.p_fusion) {
        let a = tournament_select(pop, params.tournament_size, rng);
        let b = tournament_select(pop, params.tournament_size, rng);
        return Ok(Seed::fuse(pop.seed(a), pop.seed(b), g.fuse_gap));
    }
    let mut child = if params.layer3 && rng.gen_bool(params.p_sexual) {
        let a = tournament_select(pop, params.tournament_size, rng);
        let b = tournament_select(pop, params.tournament_size, rng);
        Seed::crossover(pop.seed(a), pop.seed(b), g.crossover_axis, rng)
    } else {
        let a = tournament_select(pop, params.tournament_size, rng);
        pop.seed(a).clone()
    };
    if params.layer2 {
        child = child.mutate_resize(g.p_grow, rng)?;
    }
    Ok(child.mutate_flip(g.p_flip, rng)?)
}

/// Plays every unordered pair once (colour-swapped) and fills the credit
/// matrix; `event` salts the rng streams so repeated evaluations differ.
fn evaluate_full(
    seeds: &[Seed],
    match_params: &MatchParams,
    rngf: &RngFactory,
    event: u64,
) -> Result<Vec<f64>, ArenaError> {
    let n = seeds.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let credits: Vec<((usize, usize), f64)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let pair_idx = (i * n + j) as u64;
            let mut rng = rngf.stream(StreamKind::FullEval, (event << 28) | pair_idx);
            let games = arena::play_pair(&seeds[i], &seeds[j], match_params, &mut rng)?;
            Ok(((i, j), arena::pair_credit(&games)))
        })
        .collect::<Result<_, ArenaError>>()?;
    let mut credit = vec![0.0; n * n];
    for ((i, j), c) in credits {
        credit[i * n + j] = c;
        credit[j * n + i] = 2.0 - c;
    }
    for i in 0..n {
        credit[i * n + i] = 1.0;
    }
    Ok(credit)
}

/// Full round-robin evaluation of a population: every member plays two games
/// against every member (including itself); returns the fitness vector.
pub fn relative_fitness(pop: &mut Population, params: &EvoParams) -> Result<Vec<f64>, EvoError> {
    let rngf = RngFactory::new(params.rng_seed);
    let seeds: Vec<Seed> = pop.members.iter().map(|m| m.seed.clone()).collect();
    pop.credit = evaluate_full(&seeds, &params.match_params, &rngf, 0)?;
    Ok(pop.fitness_vector())
}

/// Child evaluation: 2 games against every current member. Returns
/// (child's credit vs each member, each member's credit vs the child).
fn evaluate_child(
    child: &Seed,
    members: &[Member],
    match_params: &MatchParams,
    rngf: &RngFactory,
    birth: u64,
) -> Result<(Vec<f64>, Vec<f64>), ArenaError> {
    let results: Vec<f64> = members
        .par_iter()
        .enumerate()
        .map(|(m, member)| {
            let mut rng = rngf.stream(StreamKind::EvalGame, (birth << 12) | m as u64);
            let games = arena::play_pair(child, &member.seed, match_params, &mut rng)?;
            Ok(arena::pair_credit(&games))
        })
        .collect::<Result<_, ArenaError>>()?;
    let vs_child: Vec<f64> = results.iter().map(|c| 2.0 - c).collect();
    Ok((results, vs_child))
}

/// Victim of the replace-worst rule over the provisional pop+1 records: the
/// child is removed only when strictly least fit; ties among members are
/// broken uniformly.
fn pick_victim(member_scores: &[f64], child_score: f64, rng: &mut impl Rng) -> Option<usize> {
    let min_member = member_scores.iter().copied().fold(f64::INFINITY, f64::min);
    if child_score < min_member {
        return None; // the child itself is discarded
    }
    let tied: Vec<usize> = (0..member_scores.len())
        .filter(|&i| member_scores[i] == min_member)
        .collect();
    Some(tied[rng.gen_range(0..tied.len())])
}

#[derive(Clone, Debug, Serialize)]
pub struct EliteRecord {
    pub digest: String,
    pub fitness: f64,
    #[serde(skip)]
    pub seed: Seed,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationSnapshot {
    pub generation: u32,
    pub elites: Vec<EliteRecord>,
    pub fitness_mean: f64,
    pub fitness_min: f64,
    pub fitness_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BirthRecord {
    pub birth: u64,
    pub generation: u32,
    pub child_digest: String,
    /// Fraction of its 2·pop evaluation games the child won.
    pub relative_fitness: f64,
    /// Whether the child entered the population.
    pub inserted: bool,
}

/// Streaming hooks for run persistence; see `rundir`.
pub trait RunObserver {
    fn on_birth(&mut self, _record: &BirthRecord) {}
    fn on_generation(&mut self, _snapshot: &GenerationSnapshot) {}
}

/// Observer that ignores everything.
pub struct NullObserver;

impl RunObserver for NullObserver {}

/// Complete record of one run; config + rng seed replay it bit-exactly.
#[derive(Clone, Debug)]
pub struct RunLog {
    pub params: EvoParams,
    pub births: Vec<BirthRecord>,
    pub generations: Vec<GenerationSnapshot>,
    pub final_population: Population,
}

fn snapshot(pop: &Population, generation: u32, elite_k: usize) -> GenerationSnapshot {
    let fitness = pop.fitness_vector();
    let elites = pop
        .elite_indices(elite_k)
        .into_iter()
        .map(|i| EliteRecord {
            digest: seed_digest(pop.seed(i)),
            fitness: fitness[i],
            seed: pop.seed(i).clone(),
        })
        .collect();
    let min = fitness.iter().copied().fold(f64::INFINITY, f64::min);
    let max = fitness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    GenerationSnapshot {
        generation,
        elites,
        fitness_mean: pop.mean_fitness(),
        fitness_min: min,
        fitness_max: max,
    }
}

/// Runs the steady-state loop for `generations × pop_size` births.
pub fn evolve(params: &EvoParams, observer: &mut dyn RunObserver) -> Result<RunLog, EvoError> {
    params.validate()?;
    let rngf = RngFactory::new(params.rng_seed);
    let n = params.pop_size;

    let members: Vec<Member> = (0..n)
        .map(|i| {
            let mut rng = rngf.stream(StreamKind::Init, i as u64);
            Ok(Member {
                seed: Seed::random(
                    params.genome.init_rows,
                    params.genome.init_cols,
                    params.genome.init_density,
                    &mut rng,
                )?,
                id: i as u64,
            })
        })
        .collect::<Result<_, EvoError>>()?;
    let seeds: Vec<Seed> = members.iter().map(|m| m.seed.clone()).collect();
    let credit = evaluate_full(&seeds, &params.match_params, &rngf, 0)?;
    let mut pop = Population::new(members, credit);

    let mut log = RunLog {
        params: params.clone(),
        births: Vec::new(),
        generations: Vec::new(),
        final_population: pop.clone(),
    };
    let gen0 = snapshot(&pop, 0, params.elite_k);
    observer.on_generation(&gen0);
    log.generations.push(gen0);

    let total_births = params.generations as u64 * n as u64;
    for birth in 0..total_births {
        let mut breed_rng = rngf.stream(StreamKind::Breed, birth);
        let child = breed(&pop, params, &mut breed_rng)?;
        let (child_vs, vs_child) =
            evaluate_child(&child, &pop.members, &params.match_params, &rngf, birth)?;

        let child_total: f64 = child_vs.iter().sum();
        let relative_fitness = child_total / games_per_member(n) as f64;

        // Provisional records as if the child had joined a pop+1 population.
        let denom = games_per_member(n + 1) as f64;
        let member_scores: Vec<f64> = (0..n)
            .map(|i| {
                let row: f64 = pop.credit[i * n..(i + 1) * n].iter().sum();
                (row + vs_child[i]) / denom
            })
            .collect();
        let child_score = (child_total + 1.0) / denom;

        let mut replace_rng = rngf.stream(StreamKind::Replace, birth);
        let victim = pick_victim(&member_scores, child_score, &mut replace_rng);

        let record = BirthRecord {
            birth,
            generation: (birth / n as u64) as u32 + 1,
            child_digest: seed_digest(&child),
            relative_fitness,
            inserted: victim.is_some(),
        };

        if let Some(k) = victim {
            for j in 0..n {
                if j != k {
                    pop.credit[k * n + j] = child_vs[j];
                    pop.credit[j * n + k] = vs_child[j];
                }
            }
            pop.credit[k * n + k] = 1.0;
            pop.members[k] = Member { seed: child, id: n as u64 + birth };

            if params.fitness_mode == FitnessMode::Full {
                let seeds: Vec<Seed> = pop.members.iter().map(|m| m.seed.clone()).collect();
                pop.credit = evaluate_full(&seeds, &params.match_params, &rngf, birth + 1)?;
            }
        }

        observer.on_birth(&record);
        log.births.push(record);

        if (birth + 1) % n as u64 == 0 {
            let generation = ((birth + 1) / n as u64) as u32;
            let snap = snapshot(&pop, generation, params.elite_k);
            observer.on_generation(&snap);
            log.generations.push(snap);
        }
    }

    log.final_population = pop;
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn desk_params(pop: usize, generations: u32) -> EvoParams {
        EvoParams {
            pop_size: pop,
            generations,
            elite_k: 5.min(pop),
            rng_seed: 11,
            ..EvoParams::default()
        }
    }

    fn uniform_pop(n: usize, fitness: &[f64]) -> Population {
        // Builds a population whose row sums give the requested fitness.
        let seed = Seed::from_art("oo\noo").unwrap();
        let members =
            (0..n).map(|i| Member { seed: seed.clone(), id: i as u64 }).collect();
        let mut credit = vec![0.0; n * n];
        for i in 0..n {
            let per_cell = fitness[i] * games_per_member(n) as f64 / n as f64;
            for j in 0..n {
                credit[i * n + j] = per_cell;
            }
        }
        Population::with_credit(members, credit)
    }

    #[test]
    fn tournament_picks_the_fitter_of_two() {
        let pop = uniform_pop(2, &[0.9, 0.1]);
        let mut r = rng(1);
        for _ in 0..50 {
            assert_eq!(tournament_select(&pop, 2, &mut r), 0);
        }
    }

    #[test]
    fn tournament_of_full_population_returns_global_best() {
        let pop = uniform_pop(6, &[0.2, 0.4, 0.9, 0.1, 0.5, 0.3]);
        let mut r = rng(2);
        for _ in 0..20 {
            assert_eq!(tournament_select(&pop, 6, &mut r), 2);
        }
    }

    #[test]
    fn tournament_is_uniform_on_equal_fitness() {
        // Chi-square over 10,000 draws from a 10-member equal-fitness
        // population; 99.9% critical value for 9 dof is 27.88.
        let pop = uniform_pop(10, &[0.5; 10]);
        let mut counts = [0u32; 10];
        let mut r = rng(3);
        for _ in 0..10_000 {
            counts[tournament_select(&pop, 2, &mut r)] += 1;
        }
        let expected = 1_000.0;
        let chi2: f64 =
            counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 27.88, "chi2 = {chi2}, counts {counts:?}");
    }

    #[test]
    fn breed_layer1_only_keeps_dimensions() {
        let pop = uniform_pop(4, &[0.5; 4]);
        let params = EvoParams {
            pop_size: 4,
            layer2: false,
            layer3: false,
            layer4: false,
            p_sexual: 0.0,
            p_fusion: 0.0,
            ..desk_params(4, 1)
        };
        let mut r = rng(4);
        for _ in 0..20 {
            let child = breed(&pop, &params, &mut r).unwrap();
            assert_eq!((child.rows(), child.cols()), (2, 2));
        }
    }

    #[test]
    fn breed_fusion_grows_area() {
        let pop = uniform_pop(4, &[0.5; 4]);
        let params =
            EvoParams { pop_size: 4, p_fusion: 1.0, ..desk_params(4, 1) };
        let child = breed(&pop, &params, &mut rng(5)).unwrap();
        assert!(child.area() >= 2 * pop.seed(0).area());
    }

    #[test]
    fn breed_crossover_uses_a_frame_parent() {
        let pop = uniform_pop(4, &[0.5; 4]);
        let params = EvoParams {
            pop_size: 4,
            layer2: false,
            p_fusion: 0.0,
            p_sexual: 1.0,
            genome: GenomeParams { p_flip: 0.0, ..GenomeParams::default() },
            ..desk_params(4, 1)
        };
        let child = breed(&pop, &params, &mut rng(6)).unwrap();
        assert_eq!((child.rows(), child.cols()), (2, 2));
    }

    #[test]
    fn pick_victim_rules() {
        let mut r = rng(7);
        // Child strictly worst: discarded.
        assert_eq!(pick_victim(&[0.4, 0.5], 0.3, &mut r), None);
        // Tie with the minimum member: a member goes, never the child.
        assert_eq!(pick_victim(&[0.4, 0.5], 0.4, &mut r), Some(0));
        // Unique minimum member.
        assert_eq!(pick_victim(&[0.5, 0.2, 0.4], 0.9, &mut r), Some(1));
        // Tied members: uniform choice between them.
        let mut seen = [false; 2];
        for _ in 0..100 {
            match pick_victim(&[0.2, 0.2, 0.4], 0.9, &mut r) {
                Some(0) => seen[0] = true,
                Some(1) => seen[1] = true,
                other => panic!("unexpected victim {other:?}"),
            }
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn identical_seeds_have_fitness_near_half() {
        let params = EvoParams { pop_size: 20, ..desk_params(20, 1) };
        let seed = Seed::random(5, 5, 0.4, &mut rng(8)).unwrap();
        let members: Vec<Member> =
            (0..20).map(|i| Member { seed: seed.clone(), id: i as u64 }).collect();
        let mut pop = Population::new(members, vec![0.0; 400]);
        let fitness = relative_fitness(&mut pop, &params).unwrap();
        assert_eq!(pop.mean_fitness(), 0.5, "tie-half scoring keeps the mean exact");
        // Per-member fitness rides on 40 games (SE ~0.08); 0.25 is ~3 sigma.
        for f in fitness {
            assert!((f - 0.5).abs() < 0.25, "fitness {f}");
        }
    }

    #[test]
    fn games_per_member_matches_protocol() {
        assert_eq!(games_per_member(200), 400);
        assert_eq!(games_per_member(20), 40);
    }

    #[test]
    fn evolve_desk_run_invariants() {
        let params = desk_params(8, 2);
        let log = evolve(&params, &mut NullObserver).unwrap();
        assert_eq!(log.births.len(), 16);
        assert_eq!(log.generations.len(), 3); // generation 0 plus 2
        for snap in &log.generations {
            assert_eq!(snap.elites.len(), 5);
            assert_eq!(snap.fitness_mean, 0.5, "generation {}", snap.generation);
        }
        assert_eq!(log.final_population.size(), 8);
        assert_eq!(log.final_population.mean_fitness(), 0.5);
    }

    #[test]
    fn evolve_is_deterministic() {
        let params = desk_params(6, 1);
        let a = evolve(&params, &mut NullObserver).unwrap();
        let b = evolve(&params, &mut NullObserver).unwrap();
        let digests = |log: &RunLog| -> Vec<String> {
            log.births.iter().map(|r| r.child_digest.clone()).collect()
        };
        assert_eq!(digests(&a), digests(&b));
        let elite = |log: &RunLog| -> Vec<(String, String)> {
            log.generations
                .iter()
                .flat_map(|g| {
                    g.elites.iter().map(|e| (e.digest.clone(), format!("{:.9}", e.fitness)))
                })
                .collect()
        };
        assert_eq!(elite(&a), elite(&b));
    }

    #[test]
    fn validation_names_the_bad_key() {
        let mut params = desk_params(8, 1);
        params.elite_k = 9;
        match evolve(&params, &mut NullObserver) {
            Err(EvoError::InvalidParam { key, .. }) => assert_eq!(key, "elite_k"),
            other => panic!("expected InvalidParam, got {other:?}"),
        }
    }
}
