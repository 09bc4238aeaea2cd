use std::fmt;
use std::io::Write;
use std::iter::Peekable;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sts_core::constructions::predicates::{
    pg2_paired_counterexample, pg2_pointed_counterexample, pg3_2pointed_counterexample,
};
use sts_core::constructions::products::{double_names, product_names};
use sts_core::constructions::paired::paired_names;
use sts_core::constructions::*;
use sts_core::io::{parse, write_pstss, write_sts, SystemFile};
use sts_core::params::{self, KStrategy, ParameterSolution};
use sts_core::pstss::boolean::{mask, BooleanReplacement};
use sts_core::pstss::{
    attach_gadgets, boolean_space_with_cap, build_q, rigid_enlargement, set_stabilizer_system, cyclic_pstss,
    replace_triples,
};
use sts_core::search::are_isomorphic_with;
use sts_core::{
    automorphism_group_with, classify_fano, enumerate_fano, Error, FanoClassification, IsoCertificate,
    PartialTripleSystem, Point, PointSet, SearchConfig, Triple, TripleStructure, TripleSystem,
};

use crate::output::{emit, sha256_file, Run};
use crate::{Cli, Command, Construct, EmbedArgs, EmbedMode, KStrategyArg, Labeling, MooreArgs, SolveArgs, VerifyArgs};

/// A check ran and failed (exit code 1).
#[derive(Debug)]
pub struct CheckFailed(pub String);

/// Arguments that parse but cannot be used together (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}
impl std::error::Error for UsageError {}

/// Output cut short by a closed pipe, as in `sts aut big.sts | head`.
pub fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return 2;
        }
        if let Some(Error::BudgetExceeded { .. }) = cause.downcast_ref::<Error>() {
            return 3;
        }
    }
    1
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn node_budget(cli: &Cli) -> Result<u64> {
    if let Some(b) = cli.budget {
        return Ok(b);
    }
    match std::env::var(crate::BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("{} = {s:?} is not a node count", crate::BUDGET_ENV))),
        Err(_) => Ok(SearchConfig::default().node_budget),
    }
}

fn read_system(path: &Path) -> Result<SystemFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("in {}", path.display()))
}

fn read_sts(path: &Path) -> Result<TripleSystem> {
    read_system(path)?
        .into_steiner()
        .with_context(|| format!("in {}", path.display()))
}

fn parse_points(text: &str, what: &str) -> Result<Vec<u32>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| usage(format!("{what}: `{s}` is not a point"))))
        .collect()
}

pub fn run(cli: Cli, argv: Vec<String>) -> Result<()> {
    let budget = node_budget(&cli)?;
    let config = SearchConfig::with_budget(budget);
    let seed = cli.seed;
    let mut ctx = Run {
        argv,
        subcommand: String::new(),
        seed,
        node_budget: budget,
        inputs: Vec::new(),
    };
    match cli.command {
        Command::Construct { kind, out } => {
            let out = out.ok_or_else(|| usage("construct needs --out"))?;
            construct(kind, &out, &mut ctx)
        }
        Command::Verify(args) => verify(args),
        Command::Aut { path } => aut(&path, &config, seed),
        Command::Iso { first, second } => iso(&first, &second, &config),
        Command::ClassifyFano(args) => classify(&args),
        Command::SolveParams(args) => {
            ctx.subcommand = "solve-params".into();
            solve(args, &ctx)
        }
        Command::EmbedPstss(args) => {
            ctx.subcommand = "embed-pstss".into();
            embed(args, &mut ctx)
        }
        Command::RigidSearch { n, attempts, out } => {
            ctx.subcommand = "rigid-search".into();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ts = rigid_sts_search(n, attempts, &mut rng)?;
            emit_sts(&ctx, &out, &ts, None)
        }
        Command::Replay { manifest } => replay(&manifest),
    }
}

fn emit_sts(ctx: &Run, out: &Path, ts: &TripleSystem, names: Option<&[String]>) -> Result<()> {
    let report = ts.validate();
    if !report.is_ok() {
        bail!(CheckFailed(format!("refusing to write an invalid system: {report}")));
    }
    let text = write_sts(ts);
    emit(ctx, out, names, |w| w.write_all(text.as_bytes()))
}

fn emit_pstss(ctx: &Run, out: &Path, ps: &PartialTripleSystem, names: Option<&[String]>) -> Result<()> {
    let text = write_pstss(ps);
    emit(ctx, out, names, |w| w.write_all(text.as_bytes()))
}

fn moore_input(args: &MooreArgs) -> Result<MooreInput> {
    let (y, x) = embed_subsystem(args.x, args.y)?;
    let labeling = match args.labeling {
        Labeling::Anchored => label_anchored(&y, &x, false),
        Labeling::Strict => label_per_p7(&y, &x),
        Labeling::Ascending => CyclicLabeling::ascending(&y, &x),
    }
    .context("no labeling of Y - X; try --labeling ascending")?;
    Ok(MooreInput::new(y, x, standard_sts(args.v)?, labeling)?)
}

fn construct(kind: Construct, out: &Path, ctx: &mut Run) -> Result<()> {
    let name = match &kind {
        Construct::Pg { .. } => "pg",
        Construct::Bose { .. } => "bose",
        Construct::Skolem { .. } => "skolem",
        Construct::Standard { .. } => "standard",
        Construct::Ag => "ag",
        Construct::Double { .. } => "double",
        Construct::Product { .. } => "product",
        Construct::Moore { .. } => "moore",
        Construct::Paired { .. } => "paired",
        Construct::Random { .. } => "random",
        Construct::Gadget { .. } => "gadget",
        Construct::Cyclic { .. } => "cyclic",
    };
    ctx.subcommand = format!("construct {name}");
    match kind {
        Construct::Pg { dim } => {
            let ts = pg_sts(dim)?;
            let names: Vec<String> = (0..ts.n_points()).map(|i| format!("{:0w$b}", i + 1, w = dim as usize + 1)).collect();
            emit_sts(ctx, out, &ts, Some(&names))
        }
        Construct::Bose { n } => emit_sts(ctx, out, &bose(n)?, None),
        Construct::Skolem { n } => emit_sts(ctx, out, &skolem(n)?, None),
        Construct::Standard { n } => emit_sts(ctx, out, &standard_sts(n)?, None),
        Construct::Ag => emit_sts(ctx, out, &ag23(), None),
        Construct::Double { input } => {
            let y = read_sts(&input)?;
            ctx.inputs.push(input);
            emit_sts(ctx, out, &double(&y), Some(&double_names(y.n_points())))
        }
        Construct::Product { left, right } => {
            let (a, b) = (read_sts(&left)?, read_sts(&right)?);
            ctx.inputs.extend([left, right]);
            let names = product_names(a.n_points(), b.n_points());
            emit_sts(ctx, out, &direct_product(&a, &b), Some(&names))
        }
        Construct::Moore { sizes, sigma } => {
            let input = moore_input(&sizes)?;
            let u = match sigma {
                None => moore(&input),
                Some(images) => {
                    let images = parse_points(&images, "--sigma")?;
                    let sigma = sts_core::Permutation::from_images(images)?;
                    moore_variant_sigma(&input, &sigma)?
                }
            };
            emit_sts(ctx, out, &u, Some(&input.layout().names()))
        }
        Construct::Paired { input, design } => {
            let s = read_sts(&input)?;
            let w = read_sts(&design)?;
            ctx.inputs.extend([input, design]);
            let u = paired_via_design(&s, &BlockDesign::from_sts(&w))?;
            emit_sts(ctx, out, &u, Some(&paired_names(w.n_points())))
        }
        Construct::Random { n } => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            emit_sts(ctx, out, &random_sts(n, &mut rng)?, None)
        }
        Construct::Gadget { n } => {
            let q = build_q(n)?;
            let mut names: Vec<String> = (0..q.system.n_points()).map(|p| p.to_string()).collect();
            names[q.z as usize] = "z".into();
            names[q.z_prime as usize] = "z'".into();
            for i in 0..2 {
                names[q.z_leaf[i] as usize] = format!("z{}", i + 1);
                names[q.z_joint[i] as usize] = format!("z'{}", i + 1);
            }
            emit_pstss(ctx, out, &q.system, Some(&names))
        }
        Construct::Cyclic { t } => emit_pstss(ctx, out, cyclic_pstss(t)?.system(), None),
    }
}

fn verify(args: VerifyArgs) -> Result<()> {
    let (path, complete) = match (&args.sts, &args.pstss) {
        (Some(p), None) => (p, true),
        (None, Some(p)) => (p, false),
        _ => return Err(usage("give exactly one of --sts and --pstss")),
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = match parse(&text) {
        Ok(f) => f,
        Err(Error::NotSteiner(report)) | Err(Error::NotPartial(report)) => {
            println!("{}: {report}", path.display());
            bail!(CheckFailed("validation failed".into()));
        }
        Err(e) => return Err(anyhow!(e).context(format!("in {}", path.display()))),
    };
    let ps = file.as_partial();
    let report = if complete {
        sts_core::validate_sts(ps.n_points(), ps.triples())
    } else {
        sts_core::validate_pstss(ps.n_points(), ps.triples())
    };
    println!("{}: {report}", path.display());
    let mut failed = !report.is_ok();
    let needs_sts = args.pointed.is_some() || args.two_pointed.is_some() || args.paired;
    if needs_sts && !failed {
        let ts = match file.into_steiner() {
            Ok(ts) => ts,
            Err(_) => return Err(usage("--pointed, --two-pointed and --paired need a Steiner system")),
        };
        let n = ts.n_points() as u32;
        let point_ok = |p: u32| if p < n { Ok(p) } else { Err(usage(format!("point {p} out of range"))) };
        if let Some(p) = args.pointed {
            let bad = pg2_pointed_counterexample(&ts, point_ok(p)?);
            match bad {
                None => println!("pointed at {p}: ok"),
                Some((a, b)) => {
                    println!("pointed at {p}: triples {a:?} and {b:?} span no Fano plane");
                    failed = true;
                }
            }
        }
        if let Some(pq) = &args.two_pointed {
            let (p, q) = (point_ok(pq[0])?, point_ok(pq[1])?);
            match pg3_2pointed_counterexample(&ts, p, q) {
                None => println!("2-pointed at {p}, {q}: ok"),
                Some(w) => {
                    println!("2-pointed at {p}, {q}: no PG(3,2) through {w:?}");
                    failed = true;
                }
            }
        }
        if args.paired {
            match pg2_paired_counterexample(&ts) {
                None => println!("paired: ok"),
                Some((a, b)) => {
                    println!("paired: pair ({a},{b}) lies in fewer than two Fano planes");
                    failed = true;
                }
            }
        }
    }
    if failed {
        bail!(CheckFailed("verification failed".into()));
    }
    Ok(())
}

fn aut(path: &Path, config: &SearchConfig, seed: u64) -> Result<()> {
    let file = read_system(path)?;
    let g = automorphism_group_with(file.as_partial(), config)?;
    let gens = g.small_generating_set(64, &mut ChaCha8Rng::seed_from_u64(seed));
    let mut out = std::io::stdout().lock();
    writeln!(out, "order {}", g.order())?;
    writeln!(out, "generators {}", gens.len())?;
    for h in &gens {
        writeln!(out, "{h}")?;
    }
    Ok(())
}

fn iso(first: &Path, second: &Path, config: &SearchConfig) -> Result<()> {
    let (a, b) = (read_system(first)?, read_system(second)?);
    match are_isomorphic_with(a.as_partial(), b.as_partial(), config)? {
        IsoCertificate::Isomorphic(map) => {
            println!("isomorphic");
            let images: Vec<String> = map.images().iter().map(|p| p.to_string()).collect();
            println!("map {}", images.join(" "));
            Ok(())
        }
        IsoCertificate::NotIsomorphic(reason) => {
            let why = match reason {
                sts_core::search::NonIsomorphism::PointCount { a, b } => format!("{a} vs {b} points"),
                sts_core::search::NonIsomorphism::TripleCount { a, b } => format!("{a} vs {b} triples"),
                sts_core::search::NonIsomorphism::CanonicalForms { .. } => "canonical forms differ".into(),
            };
            println!("not isomorphic: {why}");
            bail!(CheckFailed("not isomorphic".into()))
        }
    }
}

fn classify(args: &MooreArgs) -> Result<()> {
    let input = moore_input(args)?;
    let u = moore(&input);
    let mut counts = [0usize; 3];
    let mut unclassified = 0;
    let mut out = std::io::stdout().lock();
    for f in enumerate_fano(&u) {
        let pts: Vec<String> = f.iter().map(|p| p.to_string()).collect();
        match classify_fano(&u, &input, &f) {
            Ok(c) => {
                let detail = match &c {
                    FanoClassification::InYv { v } => {
                        counts[0] += 1;
                        format!("v={v}")
                    }
                    FanoClassification::VSf { s, f } => {
                        counts[1] += 1;
                        format!("S={s:?} f={f:?}")
                    }
                    FanoClassification::Type31 { x, v, a } => {
                        counts[2] += 1;
                        format!("x={x} v={v:?} a={a:?}")
                    }
                };
                writeln!(out, "{} {} {detail}", pts.join(" "), c.kind())?;
            }
            Err(e) => {
                unclassified += 1;
                writeln!(out, "{} unclassified {e}", pts.join(" "))?;
            }
        }
    }
    writeln!(
        out,
        "# in-yv {} vsf {} type31 {} unclassified {unclassified}",
        counts[0], counts[1], counts[2]
    )?;
    if unclassified > 0 {
        bail!(CheckFailed(format!("{unclassified} Fano subsystems not classified")));
    }
    Ok(())
}

fn big(text: &str, flag: &str) -> Result<BigInt> {
    text.trim().parse().map_err(|_| usage(format!("{flag}: `{text}` is not an integer")))
}

fn solve(args: SolveArgs, ctx: &Run) -> Result<()> {
    if let Some(path) = &args.check {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cert = ParameterSolution::<BigInt>::parse_certificate(&text).with_context(|| format!("in {}", path.display()))?;
        return match cert.check() {
            Ok(()) => {
                println!("{}: ok", path.display());
                Ok(())
            }
            Err(e) => {
                println!("{}: {e}", path.display());
                bail!(CheckFailed("certificate check failed".into()))
            }
        };
    }
    let v1 = big(args.v1.as_deref().unwrap_or_default(), "--v1")?;
    let v2 = big(args.v2.as_deref().unwrap_or_default(), "--v2")?;
    let strategy = match args.k_strategy {
        KStrategyArg::SmallestPrime => KStrategy::SmallestPrime,
        KStrategyArg::OrderOfTwo => KStrategy::OrderOfTwo,
    };
    let (k, big_k) = params::choose_k_with(&v1, &v2, strategy)?;
    if args.threshold {
        println!("k = {k}");
        println!("K = {big_k}");
        println!("threshold = {}", params::order_threshold(&v1, &v2, &big_k));
        return Ok(());
    }
    let u = big(args.u.as_deref().unwrap_or_default(), "--u")?;
    let sol = params::solve_order(&u, &v1, &v2, &big_k, k)?;
    sol.check()?;
    let text = sol.to_certificate();
    match &args.out {
        Some(out) => emit(ctx, out, None, |w| w.write_all(text.as_bytes())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Merges two sorted triple streams.
struct Merge<A: Iterator<Item = Triple>, B: Iterator<Item = Triple>> {
    a: Peekable<A>,
    b: Peekable<B>,
}

impl<A: Iterator<Item = Triple>, B: Iterator<Item = Triple>> Iterator for Merge<A, B> {
    type Item = Triple;

    fn next(&mut self) -> Option<Triple> {
        match (self.a.peek(), self.b.peek()) {
            (Some(x), Some(y)) if y < x => self.b.next(),
            (Some(_), _) => self.a.next(),
            (None, _) => self.b.next(),
        }
    }
}

fn write_replacement(w: &mut dyn Write, u: &BooleanReplacement) -> std::io::Result<()> {
    writeln!(w, "sts {}", u.space().n_points())?;
    let survivors = u.space().triples().filter(|t| !u.removed().contains(t));
    let merged = Merge {
        a: survivors.peekable(),
        b: u.added().iter().copied().peekable(),
    };
    for t in merged {
        writeln!(w, "{} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}

fn subset_name(p: Point) -> String {
    let m = mask(p);
    let members: Vec<String> = (0..32).filter(|i| m >> i & 1 == 1).map(|i: u32| i.to_string()).collect();
    format!("{{{}}}", members.join(","))
}

fn embed(args: EmbedArgs, ctx: &mut Run) -> Result<()> {
    let file = read_system(&args.input)?;
    ctx.inputs.push(args.input.clone());
    match args.mode {
        EmbedMode::Boolean => {
            let v = file.as_partial();
            let vprime = if args.skip_gadgets { v.clone() } else { attach_gadgets(v)?.0 };
            let space = boolean_space_with_cap(vprime.n_points() as u32, args.np_cap).with_context(|| {
                format!("{} points after attaching gadgets; see --skip-gadgets", vprime.n_points())
            })?;
            let u = replace_triples(&space, &vprime)?;
            let report = u.validate();
            if !report.is_ok() {
                bail!(CheckFailed(format!("replacement is not a Steiner system: {report}")));
            }
            let names: Vec<String> = (0..space.n_points() as Point).map(subset_name).collect();
            emit(ctx, &args.out, Some(&names), |w| write_replacement(w, &u))
        }
        EmbedMode::Enlarge => {
            let w_path = args.w.clone().ok_or_else(|| usage("cor46 needs --w"))?;
            let v = file.into_steiner()?;
            let w = read_sts(&w_path)?;
            ctx.inputs.push(w_path);
            let pair = rigid_enlargement(&v, &w)?;
            let nw = pair.w_prime.n_points();
            let names: Vec<String> = (0..nw)
                .map(|i| format!("w{i}"))
                .chain((0..v.n_points()).map(|i| format!("v{i}")))
                .collect();
            emit_pstss(ctx, &args.out, &pair.combined, Some(&names))
        }
        EmbedMode::Stabilizer => {
            let subset = args.subset.as_deref().ok_or_else(|| usage("cor47 needs --subset"))?;
            let v = file.into_steiner()?;
            let pts = parse_points(subset, "--subset")?;
            if let Some(p) = pts.iter().find(|&&p| p as usize >= v.n_points()) {
                return Err(usage(format!("--subset: point {p} out of range")));
            }
            let v1 = PointSet::from_points(v.n_points(), pts);
            let w = set_stabilizer_system(&v, &v1)?;
            let names: Vec<String> = (0..v.n_points())
                .map(|i| format!("v{i}"))
                .chain(v1.iter().map(|x| format!("v{x}'")))
                .chain(std::iter::once("z".to_string()))
                .collect();
            emit_pstss(ctx, &args.out, &w, Some(&names))
        }
    }
}

fn replay(manifest: &Path) -> Result<()> {
    let text = std::fs::read_to_string(manifest).with_context(|| format!("reading {}", manifest.display()))?;
    let json: serde_json::Value = serde_json::from_str(&text).context("manifest is not JSON")?;
    let argv: Vec<String> = json["argv"]
        .as_array()
        .ok_or_else(|| anyhow!("manifest has no argv"))?
        .iter()
        .map(|a| a.as_str().map(str::to_owned).ok_or_else(|| anyhow!("argv entries must be strings")))
        .collect::<Result<_>>()?;
    let recorded: Vec<(PathBuf, String)> = json["outputs"]
        .as_array()
        .ok_or_else(|| anyhow!("manifest has no outputs"))?
        .iter()
        .map(|o| {
            let path = o["path"].as_str().ok_or_else(|| anyhow!("output without path"))?;
            let sha = o["sha256"].as_str().ok_or_else(|| anyhow!("output without sha256"))?;
            Ok((PathBuf::from(path), sha.to_owned()))
        })
        .collect::<Result<_>>()?;
    let mut full = vec!["sts".to_string()];
    full.extend(argv.iter().cloned());
    let cli = Cli::try_parse_from(&full).map_err(|e| usage(format!("recorded arguments no longer parse: {e}")))?;
    run(cli, argv)?;
    let mut mismatched = 0;
    for (path, sha) in &recorded {
        let now = sha256_file(path)?;
        if &now == sha {
            println!("{}: identical", path.display());
        } else {
            println!("{}: differs ({sha} recorded, {now} now)", path.display());
            mismatched += 1;
        }
    }
    if mismatched > 0 {
        bail!(CheckFailed(format!("{mismatched} outputs differ")));
    }
    Ok(())
}
