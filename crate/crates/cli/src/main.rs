use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use holowedge::hierarchy::{
    self, approx_clifford_gap, classify_level, encoding_isometry, logical_action, py_certify, random_perturbation,
    replacement_push, theorem_report, transversal_census, Layout, TheoremConfig, Variant,
};
use holowedge::metrics::{self, Scan};
use holowedge::network::{contract, StabilizerTensor};
use holowedge::{par, regions, Region, SubsystemCode, Tiling};
use rand::rngs::StdRng;
use rand::SeedableRng;

mod record;
mod svg;

use record::{region, sites, Record, Sink};

#[derive(Parser)]
#[command(name = "holowedge", version, about = "Holographic stabilizer codes on hyperbolic tilings")]
struct Cli {
    /// One tab-separated `key=value` record per line.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a layered {n,k} tiling.
    Tiling {
        #[arg(long, value_name = "N,K")]
        schlafli: String,
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Contract one tensor per tiling vertex into a code.
    Build {
        #[arg(long)]
        tiling: PathBuf,
        /// `five-qubit`, `window8`, or a code file on the tensor's planar legs.
        #[arg(long, default_value = "five-qubit")]
        tensor: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entanglement wedges of a region and its complement.
    Wedge {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        region: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Complementary recovery over every interval (or every region).
    CrScan {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        connected: bool,
    },
    /// Smallest non-correctable region.
    Distance {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        bulk: BulkArg,
        #[arg(long)]
        connected: bool,
        /// Use Pauli-dressed-cleanability instead of correctability.
        #[arg(long)]
        dressed: bool,
        #[arg(long, default_value_t = metrics::DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Smallest region reconstructing the bulk set.
    Price {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        bulk: BulkArg,
        #[arg(long)]
        connected: bool,
        #[arg(long, default_value_t = metrics::DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Distance, price and the window 2 <= p <= 2d - 2.
    Window {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        bulk: BulkArg,
        #[arg(long, default_value_t = metrics::DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Search for a certifiable three-region partition.
    Tripartition {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        bulk: BulkArg,
        #[arg(long, default_value_t = 0)]
        spread: usize,
    },
    /// Check a region partition and issue a Clifford-hierarchy certificate.
    Certify {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        bulk: BulkArg,
        /// Regions `R_0|R_1|...`, each `a..b` or `{i,j,..}`.
        #[arg(long)]
        regions: String,
        #[arg(long, default_value_t = 0)]
        spread: usize,
        #[arg(long)]
        bare: bool,
    },
    /// Connected distance, recovery and spread thresholds.
    Theorems {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        bulk: BulkArg,
        #[arg(long, default_value_t = 5)]
        level_cap: usize,
        #[arg(long, default_value_t = metrics::DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Replacement pushing of the centre's logicals into target sectors.
    Push {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long, value_name = "J,..")]
        targets: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Logical action of a Clifford layout.
    Action {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        layout: PathBuf,
        #[arg(long, value_name = "I,..")]
        bulk: Option<String>,
    },
    /// Census of transversal single-qubit Clifford layouts.
    Census {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        bulk: BulkArg,
        /// Sample this many layouts instead of enumerating all `24^n`.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Logical error of a layout on randomly perturbed encoders.
    Approx {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        layout: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct CodeArg {
    /// Code file, or `five-qubit` / `bacon-shor` for the built-in codes.
    #[arg(long = "code")]
    path: String,
}

#[derive(Args)]
struct BulkArg {
    #[arg(long, value_name = "I,..", default_value = "0")]
    bulk: String,
}

/// Attach the file name to parse errors.
fn parse_err(path: &Path, e: holowedge::Error) -> anyhow::Error {
    match e {
        holowedge::Error::Parse { line, column, message } => {
            anyhow!("{}:{line}:{column}: {message}", path.display())
        }
        other => anyhow!("{}: {other}", path.display()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

impl CodeArg {
    fn load(&self) -> Result<SubsystemCode> {
        match self.path.as_str() {
            "five-qubit" => Ok(SubsystemCode::five_qubit()),
            "bacon-shor" => Ok(SubsystemCode::bacon_shor_2x2()),
            p => {
                let path = Path::new(p);
                SubsystemCode::from_text(&read(path)?).map_err(|e| parse_err(path, e))
            }
        }
    }
}

fn index_list(s: &str, what: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, part) in s.split(',').enumerate() {
        let t = part.trim();
        let v = t
            .parse()
            .map_err(|_| anyhow!("--{what}: item {} is {t:?}, expected a non-negative integer", i + 1))?;
        out.push(v);
    }
    Ok(out)
}

impl BulkArg {
    fn sites(&self, code: &SubsystemCode) -> Result<Vec<usize>> {
        let s = index_list(&self.bulk, "bulk")?;
        if let Some(&bad) = s.iter().find(|&&i| i >= code.bulk_count()) {
            bail!("--bulk: site {bad} out of range for {} bulk sites", code.bulk_count());
        }
        Ok(s)
    }
}

fn parse_region(s: &str, n: usize, flag: &str) -> Result<Region> {
    Region::parse(s, n).map_err(|e| match e {
        holowedge::Error::Parse { column, message, .. } => anyhow!("{flag}:1:{column}: {message}"),
        other => anyhow!("{flag}: {other}"),
    })
}

fn load_tiling(path: &Path) -> Result<Tiling> {
    Tiling::from_text(&read(path)?).map_err(|e| parse_err(path, e))
}

fn load_layout(path: &Path, n: usize) -> Result<Layout> {
    Layout::parse(&read(path)?, n).map_err(|e| parse_err(path, e))
}

fn scan(s: &Scan) -> String {
    match s {
        Scan::Found { value, .. } => value.to_string(),
        Scan::Exceeded { cutoff } => format!(">{cutoff}"),
    }
}

fn wedge_record(w: &regions::WedgeReport) -> Record {
    Record::new("wedge")
        .field("region", region(&w.region))
        .field("wedge", sites(&w.wedge))
        .field("complement_wedge", sites(&w.complement_wedge))
        .field("residual", sites(&w.residual))
        .field("complementary", w.complementary)
        .opt("epsilon", w.epsilon)
}

/// `true` when the checked property holds.
fn run(cli: Cli, sink: &mut Sink) -> Result<bool> {
    match cli.command {
        Command::Tiling { schlafli, layers, out, svg } => {
            let nk = index_list(&schlafli, "schlafli")?;
            let [n, k] = nk[..] else { bail!("--schlafli: expected N,K") };
            let (s, warnings) = holowedge::tiling::validate_schlafli(n, k)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            let t = Tiling::generate(s, layers)?;
            let text = t.to_text();
            match &out {
                Some(p) => write(p, &text)?,
                None if !cli.machine => sink.note(&text),
                None => {}
            }
            for layer in 0..=layers {
                let c = t.census(layer);
                sink.emit(
                    Record::new("layer")
                        .field("layer", layer)
                        .field("types", t.layer_string(layer))
                        .field("i", c[0])
                        .field("a", c[1])
                        .field("b", c[2])
                        .field("c", c[3]),
                );
            }
            sink.emit(
                Record::new("tiling")
                    .field("schlafli", format!("{{{n},{k}}}"))
                    .field("layers", layers)
                    .field("vertices", t.vertex_count())
                    .field("boundary", t.boundary_len()),
            );
            if let Some(p) = svg {
                write(&p, &svg::render(&t, &[]))?;
            }
            Ok(true)
        }
        Command::Build { tiling, tensor, out } => {
            let t = load_tiling(&tiling)?;
            let tensor = match StabilizerTensor::builtin(&tensor) {
                Some(b) => b,
                None => {
                    let path = Path::new(&tensor);
                    let code = SubsystemCode::from_text(&read(path)?).map_err(|e| parse_err(path, e))?;
                    StabilizerTensor::from_code(&tensor, &code)?
                }
            };
            let code = contract(&t, &tensor)?;
            let text = code.to_text();
            match &out {
                Some(p) => write(p, &text)?,
                None if !cli.machine => sink.note(&text),
                None => {}
            }
            sink.emit(
                Record::new("code")
                    .field("n", code.n())
                    .field("bulk", code.bulk_count())
                    .field("rank", code.stabilizers().rank())
                    .field("id", hierarchy::code_id(&code)),
            );
            Ok(true)
        }
        Command::Wedge { code, region: r, svg } => {
            let code = code.load()?;
            let r = parse_region(&r, code.n(), "--region")?;
            let w = regions::complementary_recovery(&code, &r);
            sink.emit(wedge_record(&w));
            if let Some(p) = svg {
                let t = code
                    .tiling()
                    .ok_or_else(|| anyhow!("--svg needs a code built from a tiling"))?;
                let overlays = [
                    svg::Overlay {
                        label: "region".into(),
                        boundary: r.iter().collect(),
                        bulk: Vec::new(),
                        color: "#cc0000",
                        hatch: false,
                    },
                    svg::Overlay {
                        label: "wedge".into(),
                        boundary: Vec::new(),
                        bulk: w.wedge.clone(),
                        color: "#cc0000",
                        hatch: false,
                    },
                    svg::Overlay {
                        label: "complement-wedge".into(),
                        boundary: Vec::new(),
                        bulk: w.complement_wedge.clone(),
                        color: "#204a87",
                        hatch: false,
                    },
                    svg::Overlay {
                        label: "residual".into(),
                        boundary: Vec::new(),
                        bulk: w.residual.clone(),
                        color: "#5c3566",
                        hatch: true,
                    },
                ];
                write(&p, &svg::render(&t, &overlays))?;
            }
            Ok(w.complementary)
        }
        Command::CrScan { code, connected } => {
            let code = code.load()?;
            let reports = if connected {
                regions::cr_scan_connected(&code)
            } else {
                let n = code.n();
                if n > 20 {
                    bail!("scanning all 2^{n} regions is out of reach; use --connected");
                }
                let all: Vec<Region> = (0u32..1 << n)
                    .map(|m| Region::from_sites(n, (0..n).filter(|&i| m >> i & 1 == 1)))
                    .collect();
                par::map(&all, |r| regions::complementary_recovery(&code, r))
            };
            for w in &reports {
                sink.emit(wedge_record(w));
            }
            let failures = reports.iter().filter(|w| !w.complementary).count();
            let max_residual = reports.iter().map(|w| w.residual.len()).max().unwrap_or(0);
            sink.emit(
                Record::new("summary")
                    .field("regions", reports.len())
                    .field("failures", failures)
                    .field("max_residual", max_residual),
            );
            Ok(failures == 0)
        }
        Command::Distance { code, bulk, connected, dressed, cutoff } => {
            let code = code.load()?;
            let s = bulk.sites(&code)?;
            let (value, witness) = if connected {
                if dressed {
                    bail!("--dressed and --connected cannot be combined");
                }
                match metrics::connected_distance(&code, &s)? {
                    Some((v, w)) => (v.to_string(), Some(w)),
                    None => ("-".into(), None),
                }
            } else {
                let r = if dressed {
                    metrics::dressed_distance(&code, &s, cutoff)?
                } else {
                    metrics::distance(&code, &s, cutoff)?
                };
                (scan(&r), r.witness().cloned())
            };
            let found = witness.is_some();
            sink.emit(
                Record::new("distance")
                    .field("s", sites(&s))
                    .field("connected", connected)
                    .field("dressed", dressed)
                    .field("value", value)
                    .opt("witness", witness.as_ref().map(region)),
            );
            Ok(found)
        }
        Command::Price { code, bulk, connected, cutoff } => {
            let code = code.load()?;
            let s = bulk.sites(&code)?;
            let (value, witness) = if connected {
                let (v, w) = metrics::connected_price(&code, &s)?;
                (v.to_string(), Some(w))
            } else {
                let r = metrics::price(&code, &s, cutoff)?;
                (scan(&r), r.witness().cloned())
            };
            let found = witness.is_some();
            sink.emit(
                Record::new("price")
                    .field("s", sites(&s))
                    .field("connected", connected)
                    .field("value", value)
                    .opt("witness", witness.as_ref().map(region)),
            );
            Ok(found)
        }
        Command::Window { code, bulk, cutoff } => {
            let code = code.load()?;
            let s = bulk.sites(&code)?;
            let rep = metrics::check_window(&code, &s, cutoff)?;
            sink.emit(
                Record::new("window")
                    .field("s", sites(&s))
                    .field("d", scan(&rep.d))
                    .opt("d_c", rep.d_c)
                    .field("p", scan(&rep.p))
                    .field("p_c", rep.p_c)
                    .opt("window", rep.window_ok)
                    .opt("window_connected", rep.window_ok_connected)
                    .opt("d_witness", rep.non_correctable_witness.as_ref().map(region))
                    .opt("p_witness", rep.reconstruction_witness.as_ref().map(region)),
            );
            Ok(rep.window_ok == Some(true))
        }
        Command::Tripartition { code, bulk, spread } => {
            let code = code.load()?;
            let s = bulk.sites(&code)?;
            let tri = metrics::find_tripartition(&code, &s, spread)?;
            let rec = Record::new("tripartition").field("s", sites(&s)).field("spread", spread);
            match &tri {
                Some([r0, r1, r2]) => sink.emit(
                    rec.field("found", true)
                        .field("regions", format!("{}|{}|{}", region(r0), region(r1), region(r2))),
                ),
                None => sink.emit(rec.field("found", false)),
            }
            Ok(tri.is_some())
        }
        Command::Certify { code, bulk, regions: spec, spread, bare } => {
            let code = code.load()?;
            let s = bulk.sites(&code)?;
            let parts = spec
                .split('|')
                .map(|p| parse_region(p, code.n(), "--regions"))
                .collect::<Result<Vec<_>>>()?;
            let variant = if bare { Variant::Bare } else { Variant::Dressed };
            match py_certify(&code, &s, &parts, spread, variant)? {
                Ok(cert) => {
                    sink.emit(
                        Record::new("certificate")
                            .field("code", &cert.code_id)
                            .field("s", sites(&cert.s))
                            .field("spread", cert.spread)
                            .field("variant", cert.variant)
                            .field("level", cert.level),
                    );
                    for c in &cert.checks {
                        sink.emit(
                            Record::new("check")
                                .field("index", c.index)
                                .field("region", region(&c.region))
                                .field("inflation", c.inflation)
                                .field("inflated", region(&c.inflated))
                                .field("property", c.property),
                        );
                    }
                    Ok(true)
                }
                Err(fail) => {
                    sink.emit(
                        Record::new("refused")
                            .field("index", fail.check.index)
                            .field("region", region(&fail.check.region))
                            .field("inflated", region(&fail.check.inflated))
                            .field("property", fail.check.property)
                            .field("logical", fail.logical),
                    );
                    Ok(false)
                }
            }
        }
        Command::Theorems { code, bulk, level_cap, cutoff } => {
            let code = code.load()?;
            let s = bulk.sites(&code)?;
            let config = TheoremConfig {
                level_cap,
                cutoff,
                ..TheoremConfig::default()
            };
            let rep = theorem_report(&code, &s, &config)?;
            sink.emit(
                Record::new("theorems")
                    .field("s", sites(&rep.s))
                    .opt("d_c", rep.d_c)
                    .field("d", scan(&rep.d))
                    .field("intervals", rep.connected_regions)
                    .field("cr_failures", rep.connected_cr_failures)
                    .field("max_residual", rep.max_residual)
                    .field("all_connected_cr", rep.all_connected_cr)
                    .opt("cr_witness", rep.cr_witness.as_ref().map(region))
                    .opt("bulk_diameter", rep.diameter)
                    .opt("kappa_witness", rep.kappa_witness.as_ref().map(|(r, k)| format!("{}:{k}", region(r))))
                    .opt(
                        "approx_witness",
                        rep.approx_witness.as_ref().map(|(r, k, e)| format!("{}:{k}:{e}", region(r))),
                    )
                    .opt("split_region", rep.split_region.as_ref().map(region))
                    .field("split_length_is_d_c", rep.exact_hypothesis),
            );
            for th in &rep.thresholds {
                sink.emit(
                    Record::new("threshold")
                        .field("level", th.level)
                        .field("bound", format!("s<{}/{}", rep.d_c.unwrap_or(0), th.denominator))
                        .field("max_spread", th.max_spread)
                        .opt("split_spread", th.split_spread)
                        .opt(
                            "partition",
                            th.partition
                                .as_ref()
                                .map(|p| p.iter().map(region).collect::<Vec<_>>().join("|")),
                        )
                        .field("certified", th.certificate.is_some()),
                );
            }
            Ok(true)
        }
        Command::Push { tiling, targets, svg } => {
            let t = load_tiling(&tiling)?;
            let targets = index_list(&targets, "targets")?;
            let rep = replacement_push(&t, &targets)?;
            for step in &rep.schedule.steps {
                let outgoing: Vec<String> = step.outgoing.iter().map(|(v, m)| format!("{v}:{m:?}")).collect();
                sink.emit(
                    Record::new("step")
                        .field("vertex", step.vertex)
                        .field("layer", step.layer)
                        .field("incoming", sites(&step.incoming))
                        .field("outgoing", format!("{{{}}}", outgoing.join(","))),
                );
            }
            for (c, sched) in rep.covers.iter().zip(&rep.cover_schedules) {
                sink.emit(
                    Record::new("cover")
                        .field("targets", sites(c))
                        .field("contained", sched.contained)
                        .field("per_sector", sched.per_sector),
                );
            }
            sink.emit(
                Record::new("push")
                    .field("protocol", format!("{:?}", rep.protocol))
                    .field("targets", sites(&rep.schedule.targets))
                    .field("support", sites(&rep.schedule.support))
                    .field("contained", rep.schedule.contained)
                    .field("per_sector", rep.schedule.per_sector)
                    .field("triple_intersection_empty", rep.triple_intersection_empty),
            );
            if let Some(p) = svg {
                let overlays = [
                    svg::Overlay {
                        label: "allowed".into(),
                        boundary: rep.schedule.allowed.clone(),
                        bulk: Vec::new(),
                        color: "#73d216",
                        hatch: false,
                    },
                    svg::Overlay {
                        label: "support".into(),
                        boundary: rep.schedule.support.clone(),
                        bulk: rep.schedule.steps.iter().map(|s| s.vertex).collect(),
                        color: "#cc0000",
                        hatch: false,
                    },
                ];
                write(&p, &svg::render(&t, &overlays))?;
            }
            Ok(rep.schedule.contained && rep.triple_intersection_empty)
        }
        Command::Action { code, layout, bulk } => {
            let code = code.load()?;
            let layout = load_layout(&layout, code.n())?;
            let s = match bulk {
                Some(b) => BulkArg { bulk: b }.sites(&code)?,
                None => (0..code.bulk_count()).collect(),
            };
            let action = logical_action(&code, &s, &layout)?;
            sink.emit(
                Record::new("action")
                    .field("s", sites(&action.s))
                    .field("kind", format!("{:?}", action.kind))
                    .opt("level", classify_level(&action))
                    .field("junk_identity", action.junk_identity)
                    .field("spread", layout.spread())
                    .opt("witness", action.witness.as_ref()),
            );
            for (q, (x, z)) in action.images.iter().enumerate() {
                sink.emit(Record::new("image").field("qubit", q).field("x", x).field("z", z));
            }
            Ok(!action.rejected())
        }
        Command::Census { code, bulk, samples, seed } => {
            let code = code.load()?;
            let s = bulk.sites(&code)?;
            let c = transversal_census(&code, &s, samples.map(|k| (k, seed)))?;
            let levels = |l: &[u64; 3]| format!("{},{},{}", l[0], l[1], l[2]);
            sink.emit(
                Record::new("census")
                    .field("layouts", c.layouts)
                    .field("exhaustive", c.exhaustive)
                    .field("csp", c.csp)
                    .field("not_product", c.not_product)
                    .field("levels", levels(&c.levels))
                    .field("bare_levels", levels(&c.bare_levels))
                    .opt("max_level", c.max_level())
                    .opt("max_bare_level", c.max_bare_level()),
            );
            Ok(true)
        }
        Command::Approx { code, layout, epsilon, trials, seed } => {
            let code = code.load()?;
            let layout = load_layout(&layout, code.n())?;
            let v0 = encoding_isometry(&code)?;
            let mut rng = StdRng::seed_from_u64(seed);
            let mut all = true;
            let mut largest = 0.0f64;
            for trial in 0..trials {
                let dv = random_perturbation(v0.nrows(), v0.ncols(), epsilon, &mut rng);
                let g = approx_clifford_gap(&code, &dv, &layout)?;
                all &= g.ok;
                largest = largest.max(g.gap);
                sink.emit(
                    Record::new("gap")
                        .field("trial", trial)
                        .field("epsilon", format!("{:.6e}", g.epsilon))
                        .field("gap", format!("{:.6e}", g.gap))
                        .field("bound", format!("{:.6e}", g.bound))
                        .field("ok", g.ok),
                );
            }
            sink.emit(
                Record::new("approx")
                    .field("trials", trials)
                    .field("all_within_bound", all)
                    .field("largest_gap", format!("{largest:.6e}")),
            );
            Ok(all)
        }
    }
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("HOLOWEDGE_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| anyhow!("HOLOWEDGE_THREADS={v:?} is not a thread count"))?;
            Ok(Some(n.max(1)))
        }
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut sink = Sink::new(cli.machine);
    let result = threads_from_env().and_then(|threads| match threads {
        Some(t) => par::with_threads(t, || run(cli, &mut sink)),
        None => run(cli, &mut sink),
    });
    print!("{}", sink.finish());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
