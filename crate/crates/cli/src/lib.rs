//! Command implementations behind the `seedlife` binary.
//!
//! Subcommands: `evolve` runs the steady-state loop into a run directory,
//! `census` classifies the ash of one pattern, `compete` plays one
//! colour-swapped pair of Immigration Games, `shuffle-test` compares intact
//! vs shuffled productivity, `analyze` turns a run directory into CSV tables,
//! and `soup` censuses batches of random soups.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use seedlife::analysis::{self, ShuffleStats};
use seedlife::arena::{self, MatchParams};
use seedlife::census::{self, CensusLimits, CensusReport};
use seedlife::config::{Config, RNG_SEED_ENV};
use seedlife::evolution::{evolve, RunObserver};
use seedlife::genome::Seed;
use seedlife::rle;
use seedlife::rng::RngFactory;
use seedlife::rundir::{CensusCache, RunReader, RunWriter};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "seedlife",
    about = "Evolve seed patterns in the Immigration Game and census their ash",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Run the steady-state evolutionary loop into a run directory.
    Evolve(EvolveArgs),
    /// Census the ash of a single RLE pattern.
    Census(CensusArgs),
    /// Play one colour-swapped pair of Immigration Games between two patterns.
    Compete(CompeteArgs),
    /// Census seeds intact and shuffled, and compare productivity.
    ShuffleTest(ShuffleTestArgs),
    /// Analyze a finished run directory into CSV tables.
    Analyze(AnalyzeArgs),
    /// Census random soups and print a rank table.
    Soup(SoupArgs),
}

#[derive(Args)]
pub struct EvolveArgs {
    /// TOML configuration file; defaults apply for missing keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output run directory (created, must not already hold a run).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct CensusArgs {
    /// Pattern file in two-state RLE.
    pub pattern: PathBuf,
    /// Generation budget for stabilization.
    #[arg(long)]
    pub gmax: Option<u64>,
    /// Also write the per-type counts as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct CompeteArgs {
    /// Red player in game 1 (colours swap in game 2).
    pub a: PathBuf,
    /// Blue player in game 1.
    pub b: PathBuf,
    /// RNG seed for placements and orientations.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct ShuffleTestArgs {
    /// A run directory (final-generation elites) or RLE files.
    pub inputs: Vec<PathBuf>,
    /// RNG seed for the shuffles.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Generation budget per census.
    #[arg(long)]
    pub gmax: Option<u64>,
    /// Write per-seed pairs as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Run directory produced by `evolve`.
    pub dir: PathBuf,
    /// Output directory for the CSV tables.
    #[arg(long)]
    pub out: PathBuf,
    /// Shuffled opponents per elite for absolute fitness.
    #[arg(long, default_value_t = 50)]
    pub opponents: usize,
}

#[derive(Args)]
pub struct SoupArgs {
    /// Number of random soups.
    #[arg(long, default_value_t = 1000)]
    pub count: u64,
    /// Soup side length.
    #[arg(long, default_value_t = 16)]
    pub size: usize,
    /// Live-cell probability per cell.
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    /// RNG seed for soup generation.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the full rank table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Evolve(args) => cmd_evolve(args),
        Command::Census(args) => cmd_census(args),
        Command::Compete(args) => cmd_compete(args),
        Command::ShuffleTest(args) => cmd_shuffle_test(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Soup(args) => cmd_soup(args),
    }
}

/// Seed precedence: --seed flag, then SEEDLIFE_RNG_SEED, then 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(RNG_SEED_ENV) {
        Ok(value) => value
            .parse()
            .with_context(|| format!("{RNG_SEED_ENV}={value} is not an unsigned integer")),
        Err(_) => Ok(0),
    }
}

fn load_seed_file(path: &Path) -> Result<Seed> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    rle::parse_rle(&text).with_context(|| format!("cannot parse {}", path.display()))
}

struct ProgressObserver {
    inner: RunWriter,
}

impl RunObserver for ProgressObserver {
    fn on_birth(&mut self, record: &seedlife::evolution::BirthRecord) {
        self.inner.on_birth(record);
    }

    fn on_generation(&mut self, snapshot: &seedlife::evolution::GenerationSnapshot) {
        self.inner.on_generation(snapshot);
        println!(
            "generation {:4}  fitness mean {:.3}  min {:.3}  max {:.3}",
            snapshot.generation,
            snapshot.fitness_mean,
            snapshot.fitness_min,
            snapshot.fitness_max
        );
    }
}

fn cmd_evolve(args: EvolveArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = config.apply_env_override()? {
        println!("rng seed overridden from {RNG_SEED_ENV}: {seed}");
    }
    if args.out.join("manifest.toml").exists() {
        bail!("{} already holds a run", args.out.display());
    }
    println!(
        "evolving pop {} for {} generations (rng seed {})",
        config.evolution.pop_size, config.evolution.generations, config.evolution.rng_seed
    );
    let writer = RunWriter::create(&args.out, &config)?;
    let mut observer = ProgressObserver { inner: writer };
    let log = evolve(&config.evo_params(), &mut observer)?;
    observer.inner.finish()?;
    println!(
        "done: {} births, run directory {}",
        log.births.len(),
        args.out.display()
    );
    Ok(())
}

fn report_lines(report: &CensusReport) -> Vec<(String, String, u32)> {
    report
        .counts
        .iter()
        .map(|(ty, &n)| (ty.display_name(), ty.code().to_owned(), n))
        .collect()
}

fn cmd_census(args: CensusArgs) -> Result<()> {
    let seed = load_seed_file(&args.pattern)?;
    let mut limits = CensusLimits::default();
    if let Some(gmax) = args.gmax {
        limits.g_max = gmax;
    }
    let stab = census::stabilize(&seed, &limits)
        .with_context(|| format!("{} did not stabilize", args.pattern.display()))?;
    let objects = census::extract_objects(&stab, &limits);
    let report = census::census(&seed, &limits)?;

    println!(
        "{}: stabilized at generation {} with period {}",
        args.pattern.display(),
        stab.stabilization_generation,
        stab.period
    );
    let escaped = objects.iter().filter(|o| o.is_escaped()).count();
    println!(
        "objects {} (escaped spaceships {}), types {}",
        report.num_objects(),
        escaped,
        report.num_types()
    );
    let mut rows = report_lines(&report);
    rows.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
    for (name, code, count) in &rows {
        println!("{count:6}  {name}  [{code}]");
    }

    if let Some(csv_path) = &args.csv {
        let mut writer = csv::Writer::from_path(csv_path)?;
        writer.write_record(["type", "code", "count"])?;
        for (name, code, count) in &rows {
            writer.write_record([name.as_str(), code.as_str(), &count.to_string()])?;
        }
        writer.flush()?;
        println!("wrote {}", csv_path.display());
    }
    Ok(())
}

fn cmd_compete(args: CompeteArgs) -> Result<()> {
    let a = load_seed_file(&args.a)?;
    let b = load_seed_file(&args.b)?;
    let seed = resolve_seed(args.seed)?;
    let mut rng = RngFactory::new(seed).stream(seedlife::rng::StreamKind::Task, 0);
    let params = MatchParams::default();
    let (game1, game2) = arena::play_pair(&a, &b, &params, &mut rng)?;
    println!("rng seed {seed}");
    println!(
        "game 1: {} red {:3} vs blue {:3} {} -> {:?}",
        args.a.display(),
        game1.red_growth,
        game1.blue_growth,
        args.b.display(),
        game1.outcome
    );
    println!(
        "game 2: {} red {:3} vs blue {:3} {} -> {:?}",
        args.b.display(),
        game2.red_growth,
        game2.blue_growth,
        args.a.display(),
        game2.outcome
    );
    let credit = arena::pair_credit(&(game1, game2));
    println!("pair credit: {} {:.1} / {} {:.1}", args.a.display(), credit, args.b.display(), 2.0 - credit);
    Ok(())
}

fn collect_shuffle_inputs(inputs: &[PathBuf]) -> Result<Vec<Seed>> {
    if inputs.is_empty() {
        bail!("shuffle-test needs a run directory or RLE files");
    }
    if inputs.len() == 1 && inputs[0].is_dir() {
        let reader = RunReader::open(&inputs[0])?;
        let generation = reader.last_generation()?;
        let elites = reader.elites(generation)?;
        println!(
            "using {} elite seeds from generation {} of {}",
            elites.len(),
            generation,
            inputs[0].display()
        );
        return Ok(elites);
    }
    inputs.iter().map(|p| load_seed_file(p)).collect()
}

fn print_shuffle_stats(stats: &ShuffleStats) {
    println!(
        "seeds {} (unstabilized censuses excluded: {})",
        stats.pairs.len(),
        stats.unstabilized
    );
    println!(
        "productivity: intact mean {:.2}, shuffled mean {:.2}, ratio {:.3}",
        stats.mean_intact_productivity, stats.mean_shuffled_productivity, stats.productivity_ratio
    );
    println!(
        "diversity:    intact mean {:.2}, shuffled mean {:.2}, ratio {:.3}",
        stats.mean_intact_diversity, stats.mean_shuffled_diversity, stats.diversity_ratio
    );
    match stats.median_productivity_ratio() {
        Some(m) => println!("median per-seed productivity ratio {m:.3}"),
        None => println!("median per-seed productivity ratio undefined (no nonzero intact census)"),
    }
}

fn cmd_shuffle_test(args: ShuffleTestArgs) -> Result<()> {
    let seeds = collect_shuffle_inputs(&args.inputs)?;
    let rng_seed = resolve_seed(args.seed)?;
    let mut limits = CensusLimits::default();
    if let Some(gmax) = args.gmax {
        limits.g_max = gmax;
    }
    println!("rng seed {rng_seed}");
    let stats = analysis::shuffle_experiment(&seeds, &limits, &RngFactory::new(rng_seed));
    print_shuffle_stats(&stats);

    if let Some(csv_path) = &args.csv {
        let mut writer = csv::Writer::from_path(csv_path)?;
        writer.write_record([
            "digest",
            "intact_productivity",
            "intact_diversity",
            "shuffled_productivity",
            "shuffled_diversity",
        ])?;
        for pair in &stats.pairs {
            writer.write_record([
                pair.seed_digest.as_str(),
                &pair.intact_productivity.to_string(),
                &pair.intact_diversity.to_string(),
                &pair.shuffled_productivity.to_string(),
                &pair.shuffled_diversity.to_string(),
            ])?;
        }
        writer.flush()?;
        println!("wrote {}", csv_path.display());
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let reader = RunReader::open(&args.dir)?;
    let config = reader.config()?;
    let generation = reader.last_generation()?;
    let elites = reader.elites(generation)?;
    println!(
        "analyzing {} elites of generation {} from {}",
        elites.len(),
        generation,
        args.dir.display()
    );
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;

    let limits = config.census_limits();
    let match_params = config.match_params();
    let rngf = RngFactory::new(config.evolution.rng_seed);

    let cache_path = args.dir.join("census.csv");
    let mut cache = CensusCache::load(&cache_path)?;

    struct EliteRow {
        rank: usize,
        digest: String,
        area: f64,
        abs_fitness: f64,
        productivity: Option<f64>,
        diversity: Option<f64>,
    }

    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for (i, seed) in elites.iter().enumerate() {
        let digest = rle::seed_digest(seed);
        let cached = cache.get(&digest).map(|c| (c.num_objects, c.num_types));
        let counts = match cached {
            Some((objects, types)) => Some((objects, types)),
            None => match census::census(seed, &limits) {
                Ok(report) => {
                    cache.insert_report(&report);
                    let pair = (report.num_objects(), report.num_types());
                    reports.push(report);
                    Some(pair)
                }
                Err(_) => None,
            },
        };
        let abs =
            analysis::absolute_fitness(seed, args.opponents, &match_params, &rngf, i as u64)?;
        rows.push(EliteRow {
            rank: i + 1,
            digest,
            area: seed.area() as f64,
            abs_fitness: abs.win_fraction,
            productivity: counts.map(|(o, _)| o as f64),
            diversity: counts.map(|(_, t)| t as f64),
        });
    }
    cache.save(&cache_path)?;

    let elites_path = args.out.join("elites.csv");
    let mut writer = csv::Writer::from_path(&elites_path)?;
    writer.write_record([
        "generation",
        "rank",
        "digest",
        "area",
        "abs_fitness",
        "productivity",
        "diversity",
    ])?;
    for row in &rows {
        writer.write_record([
            generation.to_string(),
            row.rank.to_string(),
            row.digest.clone(),
            format!("{}", row.area),
            format!("{:.6}", row.abs_fitness),
            row.productivity.map_or("unstabilized".into(), |v| v.to_string()),
            row.diversity.map_or("unstabilized".into(), |v| v.to_string()),
        ])?;
    }
    writer.flush()?;

    // Correlation summary over elites with complete censuses.
    let complete: Vec<&EliteRow> =
        rows.iter().filter(|r| r.productivity.is_some()).collect();
    let fitness: Vec<f64> = complete.iter().map(|r| r.abs_fitness).collect();
    let correlations_path = args.out.join("correlations.csv");
    let mut writer = csv::Writer::from_path(&correlations_path)?;
    writer.write_record(["attributes", "correlation", "p_value", "significant"])?;
    let attribute_sets: [(&str, Vec<f64>); 3] = [
        ("fitness and area", complete.iter().map(|r| r.area).collect()),
        ("fitness and productivity", complete.iter().map(|r| r.productivity.unwrap()).collect()),
        ("fitness and diversity", complete.iter().map(|r| r.diversity.unwrap()).collect()),
    ];
    for (label, values) in attribute_sets {
        match analysis::pearson(&fitness, &values) {
            Ok(r) => {
                let test = analysis::t_test_r(r, fitness.len());
                writer.write_record([
                    label,
                    &format!("{r:.4}"),
                    &format!("{:.3e}", test.p_value),
                    if test.p_value < 0.05 { "yes" } else { "no" },
                ])?;
                println!("{label}: r = {r:.3}, p = {:.3e}", test.p_value);
            }
            Err(e) => {
                writer.write_record([label, "undefined", "", ""])?;
                println!("{label}: {e}");
            }
        }
    }
    writer.flush()?;

    // Rank table across the elite censuses.
    let table = analysis::rank_table(&reports);
    let ranks_path = args.out.join("ranks.csv");
    let mut writer = csv::Writer::from_path(&ranks_path)?;
    writer.write_record(["rank", "type", "code", "count", "reference_rank"])?;
    for row in &table.rows {
        writer.write_record([
            row.rank.to_string(),
            row.display_name.clone(),
            row.canonical_code.clone(),
            row.count.to_string(),
            row.reference_rank.map_or(String::new(), |r| r.to_string()),
        ])?;
    }
    writer.flush()?;

    println!(
        "wrote {}, {} and {}",
        elites_path.display(),
        correlations_path.display(),
        ranks_path.display()
    );
    Ok(())
}

fn cmd_soup(args: SoupArgs) -> Result<()> {
    if args.size == 0 {
        bail!("soup size must be at least 1");
    }
    if !(0.0..=1.0).contains(&args.density) {
        bail!("density must lie in [0, 1]");
    }
    let rng_seed = resolve_seed(args.seed)?;
    println!(
        "censusing {} random {}x{} soups at density {} (rng seed {})",
        args.count, args.size, args.size, args.density, rng_seed
    );
    let limits = CensusLimits::default();
    let rngf = RngFactory::new(rng_seed);

    use seedlife::rng::StreamKind;
    use std::sync::atomic::{AtomicU64, Ordering};
    let done = AtomicU64::new(0);
    let reports: Vec<Result<CensusReport, census::CensusError>> = (0..args.count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rngf.stream(StreamKind::Task, i);
            let soup = Seed::random(args.size, args.size, args.density, &mut rng)
                .expect("validated dimensions");
            let out = census::census(&soup, &limits);
            let n = done.fetch_add(1, Ordering::Relaxed) + 1;
            if n % 200 == 0 {
                eprintln!("  {n}/{} soups", args.count);
            }
            out
        })
        .collect();

    let ok: Vec<CensusReport> = reports
        .iter()
        .filter_map(|r| r.as_ref().ok().cloned())
        .collect();
    let unstabilized = reports.len() - ok.len();
    let total: u64 = ok.iter().map(|r| r.num_objects() as u64).sum();
    let mean = total as f64 / ok.len().max(1) as f64;
    println!(
        "mean ashes per soup {:.2} over {} soups ({} unstabilized)",
        mean,
        ok.len(),
        unstabilized
    );
    println!(
        "ashes per unit area {:.3}",
        analysis::ashes_per_area(mean, (args.size * args.size) as f64)
    );

    let table = analysis::rank_table(&ok);
    println!("rank  count     type (reference rank)");
    for row in table.rows.iter().take(20) {
        let reference = row
            .reference_rank
            .map_or(String::new(), |r| format!(" ({r})"));
        println!("{:4}  {:8}  {}{}", row.rank, row.count, row.display_name, reference);
    }
    println!(
        "total types {}, total freq {}, freq/seeds {:.2}",
        table.total_types, table.total_freq, table.freq_per_seed
    );

    if let Some(csv_path) = &args.csv {
        let mut writer = csv::Writer::from_path(csv_path)?;
        writer.write_record(["rank", "type", "code", "count", "reference_rank"])?;
        for row in &table.rows {
            writer.write_record([
                row.rank.to_string(),
                row.display_name.clone(),
                row.canonical_code.clone(),
                row.count.to_string(),
                row.reference_rank.map_or(String::new(), |r| r.to_string()),
            ])?;
        }
        writer.flush()?;
        println!("wrote {}", csv_path.display());
    }
    Ok(())
}
