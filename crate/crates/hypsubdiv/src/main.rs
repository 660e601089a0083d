//! Batch front-end over the library: group loading, geodesic and hull
//! queries, tree export, subdivision, certification, homology, and norm
//! benchmarking. Output is JSON on stdout, with exact integers and rationals
//! rendered as strings whenever they may exceed 64 bits.
//!
//! Exit codes: 0 success, 1 certification failure (a report was produced and
//! some certificate or baseline comparison failed), 2 input or internal
//! error (a machine-readable error envelope is printed instead of a report).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypsubdiv::approx::build_correspondence;
use hypsubdiv::chain::{chain_to_json, sobolev_norm, Chain};
use hypsubdiv::error::{Error, Result};
use hypsubdiv::group::{build_context, GroupContext, GroupElement, GroupPresentation};
use hypsubdiv::homology::{homology, homology_to_json, rips_basis};
use hypsubdiv::ratio::{format_rational, parse_rational, rat_u};
use hypsubdiv::report::{
    bench_report, canonical_to_string, certify_report, presentation_fingerprint, sha256_hex,
    BenchRow, RunManifest,
};
use hypsubdiv::subdivision::{Certificate, SubdivisionMap};
use hypsubdiv::words;

#[derive(Parser)]
#[command(name = "hypsubdiv", version, about = "certified subdivision machinery for word-hyperbolic groups", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Group source shared by every subcommand. Either a built-in preset or a
/// presentation file; `--radius` overrides the ball radius of either.
#[derive(Args)]
struct GroupArgs {
    /// built-in presentation: f2, z, or genus2
    #[arg(long, conflicts_with = "group")]
    preset: Option<String>,
    /// path to a presentation JSON file
    #[arg(long)]
    group: Option<PathBuf>,
    /// Cayley ball radius override
    #[arg(long)]
    radius: Option<u32>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the resolved presentation, ball data, and fingerprint
    Group {
        #[command(flatten)]
        source: GroupArgs,
        /// accepted for symmetry; the summary is always printed
        #[arg(long)]
        info: bool,
    },
    /// Canonical geodesic between two elements
    Geodesic {
        #[command(flatten)]
        source: GroupArgs,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Geodesic hull of a tuple
    Hull {
        #[command(flatten)]
        source: GroupArgs,
        /// comma-separated words; "e", "1", or an empty token denote the identity
        #[arg(long)]
        tuple: String,
    },
    /// Approximation tree and measured correspondence for a tuple's hull
    Tree {
        #[command(flatten)]
        source: GroupArgs,
        #[arg(long)]
        tuple: String,
        /// also write the JSON to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the subdivision map to one simplex
    Subdivide {
        #[command(flatten)]
        source: GroupArgs,
        /// comma-separated vertex words
        #[arg(long)]
        simplex: String,
        /// simplex dimension; defaults to vertex count minus one
        #[arg(long)]
        dim: Option<usize>,
        /// also write the JSON to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the subdivision map over a seeded corpus and emit a report
    Certify {
        #[command(flatten)]
        source: GroupArgs,
        /// comma-separated dimensions to certify
        #[arg(long, default_value = "1,2,3")]
        dims: String,
        /// simplices per dimension
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// corpus word-length cap; defaults to min(4, ball_radius / 3)
        #[arg(long)]
        max_word: Option<u32>,
        /// JSON file with an array of word tuples to certify instead of walks
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// also write the report to this path
        #[arg(long)]
        report: Option<PathBuf>,
        /// compare the report byte-for-byte against this file; mismatch exits 1
        #[arg(long)]
        baseline: Option<PathBuf>,
    },
    /// Integral homology of a Rips complex over a ball or a metric-space file.
    /// For a group source, --radius is the vertex-ball radius (default 2).
    Homology {
        #[command(flatten)]
        source: GroupArgs,
        /// JSON file {"matrix": [[rational strings]]} instead of a group ball
        #[arg(long, conflicts_with_all = ["preset", "group"])]
        metric_space: Option<PathBuf>,
        /// Rips radius (exact rational)
        #[arg(long, default_value = "1")]
        rips_radius: String,
        /// largest homology degree to compute
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        /// reduced homology (augmented complex)
        #[arg(long)]
        augmented: bool,
        /// refuse balls with more points than this
        #[arg(long, default_value_t = 2000)]
        max_points: usize,
        /// also write the report to this path
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Norm-growth table: per-diameter mean and max output norms and ratios
    BenchNorm {
        #[command(flatten)]
        source: GroupArgs,
        /// subdivision degree to benchmark
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// largest input diameter to sample
        #[arg(long, default_value_t = 20)]
        max_diameter: u32,
        /// samples per diameter (dim 1) or total samples (dim >= 2)
        #[arg(long, default_value_t = 25)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// also write the table to this path
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            let envelope = serde_json::json!({
                "error": { "kind": e.kind(), "message": e.to_string() }
            });
            println!("{}", canonical_to_string(&envelope).trim_end());
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Group { source, info: _ } => cmd_group(&source),
        Cmd::Geodesic { source, from, to } => cmd_geodesic(&source, &from, &to),
        Cmd::Hull { source, tuple } => cmd_hull(&source, &tuple),
        Cmd::Tree { source, tuple, out } => cmd_tree(&source, &tuple, out.as_deref()),
        Cmd::Subdivide { source, simplex, dim, out } => {
            cmd_subdivide(&source, &simplex, dim, out.as_deref())
        }
        Cmd::Certify { source, dims, count, seed, max_word, corpus, report, baseline } => {
            cmd_certify(&source, &dims, count, seed, max_word, corpus.as_deref(), report.as_deref(), baseline.as_deref())
        }
        Cmd::Homology { source, metric_space, rips_radius, max_dim, augmented, max_points, report } => {
            cmd_homology(&source, metric_space.as_deref(), &rips_radius, max_dim, augmented, max_points, report.as_deref())
        }
        Cmd::BenchNorm { source, dim, max_diameter, count, seed, report } => {
            cmd_bench_norm(&source, dim, max_diameter, count, seed, report.as_deref())
        }
    }
}

/// Resolve `GroupArgs` to a labeled context. Preset defaults: f2 ball radius
/// 14, z radius 20, genus2 radius 6; files keep their own radius. The
/// defaults are the largest balls the certification schedule needs through
/// dimension 3 at the default corpus parameters.
fn load_group(source: &GroupArgs) -> Result<(String, GroupContext)> {
    if let Some(path) = &source.group {
        let text = std::fs::read_to_string(path)?;
        let mut presentation = GroupPresentation::from_json(&text)?;
        if let Some(r) = source.radius {
            presentation.ball_radius = r;
        }
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "file".to_string());
        return Ok((label, build_context(presentation)?));
    }
    let preset = source.preset.as_deref().unwrap_or("f2");
    match preset {
        "f2" => Ok(("f2".to_string(), GroupContext::free_group(&['a', 'b'], source.radius.unwrap_or(14))?)),
        "z" => Ok(("z".to_string(), GroupContext::free_group(&['a'], source.radius.unwrap_or(20))?)),
        "genus2" => Ok(("genus2".to_string(), GroupContext::genus2(source.radius.unwrap_or(6))?)),
        other => Err(Error::InvalidInput {
            reason: format!("unknown preset {other:?}; expected f2, z, or genus2"),
        }),
    }
}

/// Parse one vertex token. "e", "1", and the empty token denote the identity
/// unless the letter is an actual generator of the group.
fn parse_vertex(ctx: &GroupContext, token: &str) -> Result<GroupElement> {
    let t = token.trim();
    let generators = &ctx.presentation().generators;
    if t.is_empty() {
        return Ok(ctx.identity());
    }
    if (t == "e" && !generators.contains(&'e')) || (t == "1" && !generators.contains(&'1')) {
        return Ok(ctx.identity());
    }
    ctx.parse_element(t)
}

fn parse_tuple(ctx: &GroupContext, text: &str) -> Result<Vec<GroupElement>> {
    let tuple: Vec<GroupElement> = text
        .split(',')
        .map(|t| parse_vertex(ctx, t))
        .collect::<Result<_>>()?;
    if tuple.is_empty() {
        return Err(Error::EmptyTuple);
    }
    Ok(tuple)
}

fn print_and_save(value: &serde_json::Value, out: Option<&std::path::Path>) -> Result<()> {
    let text = canonical_to_string(value);
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, &text)?;
    }
    Ok(())
}

fn cmd_group(source: &GroupArgs) -> Result<ExitCode> {
    let (label, ctx) = load_group(source)?;
    let p = ctx.presentation();
    let relators: Vec<String> = p
        .relators
        .iter()
        .map(|r| words::format_word(r, &p.generators))
        .collect();
    let spheres: Vec<String> = ctx.sphere_sizes().iter().map(|s| s.to_string()).collect();
    let value = serde_json::json!({
        "label": label,
        "generators": p.generators.iter().collect::<String>(),
        "relators": relators,
        "backend": if p.relators.is_empty() { "free" } else { "dehn" },
        "ball_radius": ctx.ball_radius(),
        "ball_size": ctx.ball_size().to_string(),
        "sphere_sizes": spheres,
        "delta": format_rational(ctx.delta()),
        "fingerprint": presentation_fingerprint(p),
    });
    print_and_save(&value, None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_geodesic(source: &GroupArgs, from: &str, to: &str) -> Result<ExitCode> {
    let (_, ctx) = load_group(source)?;
    let x = parse_vertex(&ctx, from)?;
    let y = parse_vertex(&ctx, to)?;
    let path = ctx.geodesic(&x, &y)?;
    let value = serde_json::json!({
        "from": ctx.format_element(&x),
        "to": ctx.format_element(&y),
        "distance": ctx.distance(&x, &y)?,
        "vertices": path.iter().map(|g| ctx.format_element(g)).collect::<Vec<_>>(),
    });
    print_and_save(&value, None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_hull(source: &GroupArgs, tuple: &str) -> Result<ExitCode> {
    let (_, ctx) = load_group(source)?;
    let points = parse_tuple(&ctx, tuple)?;
    let hull = ctx.geodesic_hull(&points)?;
    let value = serde_json::json!({
        "tuple": points.iter().map(|g| ctx.format_element(g)).collect::<Vec<_>>(),
        "diameter": ctx.diameter(&points)?,
        "hull_size": hull.len(),
        "hull": hull.iter().map(|g| ctx.format_element(g)).collect::<Vec<_>>(),
    });
    print_and_save(&value, None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_tree(source: &GroupArgs, tuple: &str, out: Option<&std::path::Path>) -> Result<ExitCode> {
    let (_, ctx) = load_group(source)?;
    let points = parse_tuple(&ctx, tuple)?;
    let corr = build_correspondence(&ctx, &points)?;
    let value = corr.to_json_value(&ctx);
    print_and_save(&value, out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_subdivide(
    source: &GroupArgs,
    simplex: &str,
    dim: Option<usize>,
    out: Option<&std::path::Path>,
) -> Result<ExitCode> {
    let (_, ctx) = load_group(source)?;
    let sigma = parse_tuple(&ctx, simplex)?;
    let i = dim.unwrap_or(sigma.len() - 1);
    let map = SubdivisionMap::new(&ctx, i.max(1));
    let f = map.subdivide(&sigma, i)?;
    let chain: serde_json::Value = serde_json::from_str(&chain_to_json(&ctx, &f))
        .map_err(|e| Error::Internal { detail: format!("chain serialization: {e}") })?;
    let value = serde_json::json!({
        "simplex": sigma.iter().map(|g| ctx.format_element(g)).collect::<Vec<_>>(),
        "dim": i,
        "input_sobolev": sobolev_norm(&ctx, &Chain::from_simplex(sigma.clone())?)?.to_string(),
        "output_l1": f.l1_norm().to_string(),
        "chain": chain,
        "params": map.params().to_json_value(),
    });
    print_and_save(&value, out)?;
    Ok(ExitCode::SUCCESS)
}

/// Read a corpus file: a JSON array of word tuples.
fn read_corpus_file(ctx: &GroupContext, path: &std::path::Path) -> Result<Vec<Vec<GroupElement>>> {
    let text = std::fs::read_to_string(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let raw: Vec<Vec<String>> = serde_path_to_error::deserialize(de).map_err(|e| Error::Json {
        path: format!("{}:{}", path.display(), e.path()),
        message: e.inner().to_string(),
    })?;
    let mut corpus = Vec::with_capacity(raw.len());
    for tuple in &raw {
        let words: Vec<GroupElement> = tuple
            .iter()
            .map(|w| parse_vertex(ctx, w))
            .collect::<Result<_>>()?;
        if words.is_empty() {
            return Err(Error::EmptyTuple);
        }
        corpus.push(words);
    }
    Ok(corpus)
}

fn parse_dims(text: &str) -> Result<Vec<usize>> {
    let mut dims: Vec<usize> = text
        .split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|_| Error::InvalidInput {
                reason: format!("bad dimension {t:?} in --dims"),
            })
        })
        .collect::<Result<_>>()?;
    dims.sort_unstable();
    dims.dedup();
    if dims.is_empty() || dims[0] == 0 {
        return Err(Error::InvalidInput {
            reason: "--dims must list dimensions >= 1".to_string(),
        });
    }
    Ok(dims)
}

fn default_max_word(ctx: &GroupContext) -> u32 {
    (ctx.ball_radius() / 3).clamp(1, 4)
}

/// Subdivide every corpus simplex, fanning out over threads; the memo and
/// measurement slots are monotone maxima, so the result is order-independent.
fn subdivide_corpus(map: &SubdivisionMap, corpus: &[(Vec<GroupElement>, usize)]) -> Result<()> {
    let threads = std::thread::available_parallelism()
        .map(|v| v.get())
        .unwrap_or(1)
        .min(8)
        .min(corpus.len().max(1));
    let chunk = corpus.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = corpus
            .chunks(chunk.max(1))
            .map(|part| {
                scope.spawn(move || -> Result<()> {
                    for (sigma, dim) in part {
                        map.subdivide(sigma, *dim)?;
                    }
                    Ok(())
                })
            })
            .collect();
        for h in handles {
            h.join().map_err(|_| Error::Internal {
                detail: "corpus worker panicked".to_string(),
            })??;
        }
        Ok(())
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_certify(
    source: &GroupArgs,
    dims: &str,
    count: usize,
    seed: u64,
    max_word: Option<u32>,
    corpus_file: Option<&std::path::Path>,
    report: Option<&std::path::Path>,
    baseline: Option<&std::path::Path>,
) -> Result<ExitCode> {
    let (label, ctx) = load_group(source)?;
    let (corpus, description) = match corpus_file {
        Some(path) => {
            let tuples = read_corpus_file(&ctx, path)?;
            let bytes = std::fs::read(path)?;
            let name = path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "corpus".to_string());
            let tagged: Vec<(Vec<GroupElement>, usize)> =
                tuples.into_iter().map(|t| { let d = t.len() - 1; (t, d) }).collect();
            (tagged, format!("file:{name} sha256:{}", sha256_hex(&bytes)))
        }
        None => {
            let dims = parse_dims(dims)?;
            let max_word = max_word.unwrap_or_else(|| default_max_word(&ctx));
            let mut tagged = Vec::new();
            for &dim in &dims {
                for sigma in
                    hypsubdiv::corpus::group_simplices(&ctx, dim, count, max_word, seed ^ dim as u64)?
                {
                    tagged.push((sigma, dim));
                }
            }
            let dims_text = dims.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            (tagged, format!("walks(dims=[{dims_text}],count={count},max_word={max_word})"))
        }
    };
    let max_dim = corpus.iter().map(|(_, d)| *d).max().unwrap_or(1);
    let map = SubdivisionMap::new(&ctx, max_dim);

    // Phase 1 populates the memo and the tolerance and ratio slots; phase 2
    // re-reads certificates against the finished schedule so the report does
    // not depend on corpus order.
    subdivide_corpus(&map, &corpus)?;
    let mut certificates: Vec<Certificate> = Vec::with_capacity(corpus.len());
    for (sigma, dim) in &corpus {
        certificates.push(map.certify(sigma, *dim)?);
    }

    let manifest = RunManifest {
        group_label: label,
        group_hash: presentation_fingerprint(ctx.presentation()),
        schedule: map.radii(),
        tolerances: map.tolerances(),
        corpus: description,
        seed,
        norm_ratios: map.ratios(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let value = certify_report(&manifest, &certificates);
    let text = canonical_to_string(&value);
    print!("{text}");
    if let Some(path) = report {
        std::fs::write(path, &text)?;
    }
    if let Some(path) = baseline {
        let expected = std::fs::read_to_string(path)?;
        if expected != text {
            eprintln!("baseline mismatch: report differs from {}", path.display());
            return Ok(ExitCode::from(1));
        }
    }
    let pass = value
        .pointer("/summary/pass")
        .and_then(serde_json::Value::as_bool)
        .unwrap_or(false);
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Metric-space file: {"matrix": [[rational strings]]}, symmetric with zero
/// diagonal; validation happens in rips_basis via the exact distances.
fn read_metric_matrix(path: &std::path::Path) -> Result<Vec<Vec<BigRational>>> {
    #[derive(serde::Deserialize)]
    struct MetricFile {
        matrix: Vec<Vec<String>>,
    }
    let text = std::fs::read_to_string(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let file: MetricFile = serde_path_to_error::deserialize(de).map_err(|e| Error::Json {
        path: format!("{}:{}", path.display(), e.path()),
        message: e.inner().to_string(),
    })?;
    let n = file.matrix.len();
    let mut matrix = Vec::with_capacity(n);
    for row in &file.matrix {
        if row.len() != n {
            return Err(Error::MetricInvalid {
                reason: format!("matrix is {n} x {}, expected square", row.len()),
            });
        }
        matrix.push(row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?);
    }
    for i in 0..n {
        for j in 0..n {
            if matrix[i][j] != matrix[j][i] {
                return Err(Error::MetricInvalid {
                    reason: format!("matrix not symmetric at ({i}, {j})"),
                });
            }
        }
        if !matrix[i][i].is_zero() {
            return Err(Error::MetricInvalid {
                reason: format!("nonzero diagonal at {i}"),
            });
        }
    }
    Ok(matrix)
}

fn cmd_homology(
    source: &GroupArgs,
    metric_space: Option<&std::path::Path>,
    rips_radius: &str,
    max_dim: usize,
    augmented: bool,
    max_points: usize,
    report: Option<&std::path::Path>,
) -> Result<ExitCode> {
    let radius = parse_rational(rips_radius)?;
    let (label, basis) = match metric_space {
        Some(path) => {
            let matrix = read_metric_matrix(path)?;
            let n = matrix.len();
            let basis = rips_basis(n, |i, j| Ok(matrix[i][j].clone()), &radius, max_dim + 1)?;
            (format!("metric-space:{}", path.display()), basis)
        }
        None => {
            // Vertices are the ball of the requested radius, but pairwise
            // distances reach twice that, so the context ball is doubled.
            let vertex_radius = source.radius.unwrap_or(2);
            let doubled = GroupArgs {
                preset: source.preset.clone(),
                group: source.group.clone(),
                radius: Some(2 * vertex_radius),
            };
            let (label, ctx) = load_group(&doubled)?;
            if ctx.ball_size() > BigUint::from(500_000u32) {
                return Err(Error::BallTooLarge { cap: 500_000 });
            }
            let ball: Vec<GroupElement> = ctx
                .enumerate_ball()?
                .into_iter()
                .filter(|x| ctx.word_length(x) <= vertex_radius)
                .collect();
            if ball.len() > max_points {
                return Err(Error::BallTooLarge { cap: max_points });
            }
            let basis = rips_basis(
                ball.len(),
                |i, j| Ok(rat_u(u64::from(ctx.distance(&ball[i], &ball[j])?))),
                &radius,
                max_dim + 1,
            )?;
            (format!("ball:{label}:{vertex_radius}"), basis)
        }
    };
    let groups = homology(&basis, max_dim, augmented)?;
    let mut value = homology_to_json(&basis, &groups, augmented);
    if let Some(obj) = value.as_object_mut() {
        obj.insert("source".to_string(), serde_json::Value::String(label));
    }
    print_and_save(&value, report)?;
    Ok(ExitCode::SUCCESS)
}

/// Reduced word of exact length `len`: a non-backtracking random walk. With a
/// free backend the word metric equals word length, so d(e, w) = len.
fn exact_length_word(ctx: &GroupContext, rng: &mut ChaCha8Rng, len: u32) -> Result<GroupElement> {
    let k = ctx.presentation().generators.len() as i32;
    let mut letters: Vec<i32> = Vec::with_capacity(len as usize);
    for _ in 0..len {
        // letters are +-(1..=k); avoid the inverse of the previous letter
        loop {
            let mut l = rng.gen_range(1..=2 * k);
            if l > k {
                l = k - l; // map k+1..=2k to -1..=-k
            }
            if letters.last() != Some(&-l) {
                letters.push(l);
                break;
            }
        }
    }
    let word: Vec<hypsubdiv::words::Letter> = letters.iter().map(|&l| l as i8).collect();
    ctx.normal_form(&word)
}

fn cmd_bench_norm(
    source: &GroupArgs,
    dim: usize,
    max_diameter: u32,
    count: usize,
    seed: u64,
    report: Option<&std::path::Path>,
) -> Result<ExitCode> {
    let (label, ctx) = load_group(source)?;
    if dim == 0 {
        return Err(Error::InvalidInput {
            reason: "--dim must be >= 1".to_string(),
        });
    }
    if max_diameter > ctx.ball_radius() {
        return Err(Error::InvalidInput {
            reason: format!(
                "--max-diameter {max_diameter} exceeds the ball radius {}",
                ctx.ball_radius()
            ),
        });
    }
    let map = SubdivisionMap::new(&ctx, dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples: Vec<(Vec<GroupElement>, u32)> = Vec::new();
    if dim == 1 {
        // one bucket per exact diameter 1..=max_diameter
        for len in 1..=max_diameter {
            for _ in 0..count {
                let w = exact_length_word(&ctx, &mut rng, len)?;
                let sigma = vec![ctx.identity(), w];
                let d = ctx.diameter(&sigma)?;
                samples.push((sigma, d));
            }
        }
    } else {
        let max_word = default_max_word(&ctx).min(max_diameter.max(1));
        for sigma in hypsubdiv::corpus::group_simplices(&ctx, dim, count, max_word, seed)? {
            let d = ctx.diameter(&sigma)?;
            if d <= max_diameter {
                samples.push((sigma, d));
            }
        }
    }
    samples.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));

    let mut buckets: BTreeMap<u32, Vec<&Vec<GroupElement>>> = BTreeMap::new();
    for (sigma, d) in &samples {
        buckets.entry(*d).or_default().push(sigma);
    }
    let tagged: Vec<(Vec<GroupElement>, usize)> =
        samples.iter().map(|(s, _)| (s.clone(), dim)).collect();
    subdivide_corpus(&map, &tagged)?;

    let mut rows = Vec::new();
    for (diameter, sigmas) in &buckets {
        let mut total = BigUint::zero();
        let mut max_l1 = BigUint::zero();
        let mut max_ratio = BigRational::zero();
        for sigma in sigmas {
            let f = map.subdivide(sigma, dim)?;
            let l1 = f.l1_norm();
            let sobolev = sobolev_norm(&ctx, &Chain::from_simplex((*sigma).clone())?)?;
            let ratio = BigRational::new(l1.clone().into(), sobolev.into());
            total += &l1;
            max_l1 = max_l1.max(l1);
            max_ratio = max_ratio.max(ratio);
        }
        rows.push(BenchRow {
            dim,
            diameter: *diameter,
            count: sigmas.len(),
            mean_l1: BigRational::new(total.into(), (sigmas.len() as u64).into()),
            max_l1,
            max_ratio,
        });
    }

    let manifest = RunManifest {
        group_label: label,
        group_hash: presentation_fingerprint(ctx.presentation()),
        schedule: map.radii(),
        tolerances: map.tolerances(),
        corpus: format!("bench(dim={dim},max_diameter={max_diameter},count={count})"),
        seed,
        norm_ratios: map.ratios(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let value = bench_report(&manifest, &rows);
    print_and_save(&value, report)?;
    Ok(ExitCode::SUCCESS)
}
