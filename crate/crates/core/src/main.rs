use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use k3lines::combinatorics::{
    bound_calculators, build_line_graph, degree3_menu, euler_tally_enumerate, plane_config, rank_filter, refined_menu,
    summarize, Menu, EULER_BUDGET, TABLE3_FILTER, TABLE4_FILTER,
};
use k3lines::finite_field::{Field, MAX_DEGREE};
use k3lines::fixtures::Fixture;
use k3lines::line_census::{all_lines, stabilization_sweep, CensusMode, LineSet};
use k3lines::line_invariants::full_report;
use k3lines::normalize::cmd_normalize_c1;
use k3lines::projective::{transform_surface, Line3, Plane3, ProjTransform, QuarticSurface, SurfaceJson};
use k3lines::singularities::{ade_type, global_singular_search, singular_points_on_lines};
use k3lines::verify::{cmd_verify_paper, VerificationReport, VerifyOptions};

#[derive(Parser)]
#[command(name = "k3lines", version, about = "Lines on quartic K3 surfaces over GF(2^k)")]
struct Cli {
    /// Field degree k of the working field GF(2^k).
    #[arg(long, global = true)]
    field: Option<u32>,
    /// Defining polynomial as a bitmask instead of the Conway polynomial.
    #[arg(long, global = true)]
    modulus: Option<u32>,
    /// Largest field degree any computation may use.
    #[arg(long, global = true, default_value_t = MAX_DEGREE)]
    max_degree: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct SurfaceArgs {
    /// familyX, familyX:<λ bits>, EX16, EX20 or EX12.
    #[arg(long, conflicts_with = "surface")]
    fixture: Option<String>,
    /// JSON file with `field` and `coeffs`.
    #[arg(long)]
    surface: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Closure,
}

#[derive(Subcommand)]
enum Command {
    /// Modulus, order and generator of GF(2^k).
    FieldInfo,
    /// Line census.
    Lines {
        #[command(flatten)]
        input: SurfaceArgs,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Seed line for closure mode as two plane equations "a,b,c,d;e,f,g,h".
        #[arg(long)]
        seed_line: Option<String>,
        /// Closure counts over GF(2^1..=12) and the degree where they settle.
        #[arg(long)]
        sweep: bool,
    },
    /// Invariants of one line, or of every line in the census.
    LineReport {
        #[command(flatten)]
        input: SurfaceArgs,
        /// Two plane equations "a,b,c,d;e,f,g,h"; defaults to the fixture's line.
        #[arg(long)]
        line: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Singular points with their ADE types.
    Singular {
        #[command(flatten)]
        input: SurfaceArgs,
        /// Search the census lines instead of scanning all points.
        #[arg(long)]
        on_lines: bool,
    },
    /// Intersection graph of the census with the bound checks.
    Graph {
        #[command(flatten)]
        input: SurfaceArgs,
    },
    /// Configuration type of a plane section.
    Config {
        #[command(flatten)]
        input: SurfaceArgs,
        /// Plane coefficients "a,b,c,d".
        #[arg(long)]
        plane: String,
    },
    /// Fiber tallies (3, 4) and the rank filter (5).
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=5))]
        which: u8,
    },
    /// Move a C1 configuration to the normal form of family X.
    NormalizeC1 {
        #[command(flatten)]
        input: SurfaceArgs,
        /// Apply a random projective transform from this seed first.
        #[arg(long)]
        scramble: Option<u64>,
    },
    /// Run the verification suite.
    VerifyPaper {
        /// λ as a bitmask in GF(2^lambda_degree).
        #[arg(long, default_value_t = 1)]
        lambda: u32,
        #[arg(long, default_value_t = 1)]
        lambda_degree: u32,
        /// Comma-separated criteria; all by default.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
        #[arg(long, default_value_t = 200)]
        random_surfaces: usize,
        #[arg(long, default_value_t = 50)]
        scrambles: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Input or computation error (exit 2), distinct from a failed check (exit 1).
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

type Res<T> = Result<T, Failure>;

fn fail<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure(msg.into()))
}

fn default_degree(fx: &Fixture) -> u32 {
    match fx {
        Fixture::FamilyX { .. } => 6,
        Fixture::Ex16 => 15,
        Fixture::Ex20 => 18,
        Fixture::Ex12 => 10,
    }
}

struct Input {
    surface: QuarticSurface,
    fixture: Option<Fixture>,
}

impl Cli {
    fn make_field(&self, k: u32) -> Res<Field> {
        if k > self.max_degree {
            return fail(format!("GF(2^{k}) exceeds --max-degree {}", self.max_degree));
        }
        Ok(match self.modulus {
            Some(m) => Field::with_modulus(k, m)?,
            None => Field::new(k)?,
        })
    }

    /// The surface over the working field.
    fn input(&self, a: &SurfaceArgs) -> Res<Input> {
        match (&a.fixture, &a.surface) {
            (Some(name), None) => {
                let fx = Fixture::parse(name).ok_or_else(|| Failure(format!("unknown fixture {name}")))?;
                let f = self.make_field(self.field.unwrap_or(default_degree(&fx)))?;
                if let Fixture::FamilyX { lambda } = fx {
                    f.try_elem(lambda as u64)?;
                }
                Ok(Input { surface: fx.surface(f), fixture: Some(fx) })
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)?;
                let j: SurfaceJson = serde_json::from_str(&text)?;
                let x = QuarticSurface::from_json(&j)?;
                let x = match self.field {
                    Some(k) => x.embed(self.make_field(k)?)?,
                    None => x,
                };
                Ok(Input { surface: x, fixture: None })
            }
            _ => fail("give exactly one of --fixture and --surface"),
        }
    }
}

fn parse_vec4(f: Field, s: &str) -> Res<[k3lines::finite_field::Fe; 4]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return fail(format!("expected four comma-separated bitmasks, got {s:?}"));
    }
    let mut out = [f.zero(); 4];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = f.try_elem(p.parse::<u64>()?)?;
    }
    Ok(out)
}

fn parse_line(f: Field, s: &str) -> Res<Line3> {
    let Some((a, b)) = s.split_once(';') else { return fail("a line is two plane equations separated by ';'") };
    Ok(Line3::from_equations(parse_vec4(f, a)?, parse_vec4(f, b)?)?)
}

fn census(input: &Input, mode: Option<Mode>, seed: Option<&Line3>) -> Res<LineSet> {
    let x = &input.surface;
    let f = x.field();
    let seeds: Vec<Line3> = match (seed, input.fixture) {
        (Some(l), _) => vec![*l],
        (None, Some(fx)) => vec![fx.line(f)],
        (None, None) => Vec::new(),
    };
    let mode = mode.unwrap_or(if seeds.is_empty() { Mode::Exhaustive } else { Mode::Closure });
    Ok(match mode {
        Mode::Exhaustive => all_lines(x, f, CensusMode::Exhaustive, &[])?,
        Mode::Closure => all_lines(x, f, CensusMode::Closure, &seeds)?,
    })
}

fn line_set_json(set: &LineSet) -> Value {
    json!({
        "field": set.field.spec(),
        "mode": set.mode,
        "count": set.len(),
        "lines": set.lines.iter().map(|l| l.bits()).collect::<Vec<_>>(),
    })
}

fn table_json(menu: &Menu, which: u8) -> Res<Value> {
    let filter = if which == 3 { TABLE3_FILTER } else { TABLE4_FILTER };
    let rows = euler_tally_enumerate(menu, EULER_BUDGET, filter);
    if which == 5 {
        return Ok(serde_json::to_value(rank_filter(menu, &rows)?)?);
    }
    let out: Vec<Value> = rows
        .iter()
        .map(|r| json!({"case": r.case, "fibers": r.fibers(menu), "valency": r.valency, "euler": r.euler(menu)}))
        .collect();
    Ok(Value::Array(out))
}

fn table_text(v: &Value, which: u8) -> String {
    let mut s = String::new();
    for row in v.as_array().into_iter().flatten() {
        let fibers: Vec<String> = row["fibers"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|f| format!("{} x{}", f[0].as_str().unwrap_or(""), f[1]))
            .collect();
        let extra = if which == 5 { format!("  {}", row["singularities"].as_str().unwrap_or("")) } else { String::new() };
        s.push_str(&format!("{:>4}  v={:<3} {}{}\n", row["case"].as_str().unwrap_or(""), row["valency"], fibers.join(", "), extra));
    }
    s
}

fn verify_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        s.push_str(&format!("[{status}] {:>2} {} ({:.1}s)\n      expected: {}\n      computed: {}\n", c.criterion, c.name, c.seconds, c.expected, c.computed));
        if !c.pass {
            s.push_str(&format!("      reproduce: {}\n", c.reproduce));
        }
    }
    s
}

fn random_transform(seed: u64, f: Field) -> ProjTransform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m = [0; 4].map(|_| [0; 4].map(|_| f.elem(rng.gen_range(0..f.order()) as u32)));
        if let Ok(t) = ProjTransform::new(m) {
            return t;
        }
    }
}

/// Output value and whether every check in it passed.
fn run(cli: &Cli) -> Res<(Value, Option<String>, bool)> {
    let text = |v: &Value| serde_json::to_string_pretty(v).unwrap_or_default();
    match &cli.command {
        Command::FieldInfo => {
            let f = cli.make_field(cli.field.unwrap_or(1))?;
            let g = f.generator();
            let v = json!({
                "k": f.k(),
                "order": f.order(),
                "modulus": f.modulus(),
                "modulus_hex": format!("{:#x}", f.modulus()),
                "conway": f.is_conway(),
                "generator": g.bits(),
                "generator_order": g.order(),
            });
            Ok((v, None, true))
        }
        Command::Lines { input, mode, seed_line, sweep } => {
            let inp = cli.input(input)?;
            let f = inp.surface.field();
            let seed = seed_line.as_deref().map(|s| parse_line(f, s)).transpose()?;
            if *sweep {
                let seeds: Vec<Line3> = match (seed, inp.fixture) {
                    (Some(l), _) => vec![l],
                    (None, Some(fx)) => vec![fx.line(f)],
                    (None, None) => return fail("--sweep needs a seed line or a fixture"),
                };
                let base = inp.surface.field().k();
                let degrees: Vec<u32> = (1..=cli.max_degree.min(12)).filter(|k| k % base == 0 || base % k == 0).collect();
                let x = &inp.surface;
                let sw = stabilization_sweep(x, &seeds, &degrees)?;
                let stable = sw.is_stable();
                let v = json!({"sweep": sw, "stable": stable, "lines": sw.max_count()});
                return Ok((v, None, stable));
            }
            let set = census(&inp, *mode, seed.as_ref())?;
            Ok((line_set_json(&set), None, true))
        }
        Command::LineReport { input, line, all } => {
            let inp = cli.input(input)?;
            let x = &inp.surface;
            let f = x.field();
            if *all {
                let set = census(&inp, None, None)?;
                let reports = set.lines.iter().map(|l| full_report(x, l, f)).collect::<Result<Vec<_>, _>>()?;
                return Ok((serde_json::to_value(reports)?, None, true));
            }
            let l = match (line, inp.fixture) {
                (Some(s), _) => parse_line(f, s)?,
                (None, Some(fx)) => fx.line(f),
                (None, None) => return fail("--line is required for a surface file"),
            };
            Ok((serde_json::to_value(full_report(x, &l, f)?)?, None, true))
        }
        Command::Singular { input, on_lines } => {
            let inp = cli.input(input)?;
            let x = &inp.surface;
            let pts = if *on_lines {
                let set = census(&inp, None, None)?;
                singular_points_on_lines(x, &set.lines, x.field())?
            } else {
                global_singular_search(x, x.field())?
            };
            let typed = pts.iter().map(|p| ade_type(x, p)).collect::<Result<Vec<_>, _>>()?;
            Ok((serde_json::to_value(typed)?, None, true))
        }
        Command::Graph { input } => {
            let inp = cli.input(input)?;
            let x = &inp.surface;
            let f = x.field();
            let set = census(&inp, None, None)?;
            let g = build_line_graph(x, &set);
            let reports = set.lines.iter().map(|l| full_report(x, l, f)).collect::<Result<Vec<_>, _>>()?;
            let sing = singular_points_on_lines(x, &set.lines, f)?;
            let bounds = bound_calculators(x, &g, &reports, &sing, f)?;
            let ok = bounds.all_hold();
            let v = json!({"summary": summarize(&g), "graph": g, "bounds": bounds});
            Ok((v, None, ok))
        }
        Command::Config { input, plane } => {
            let inp = cli.input(input)?;
            let x = &inp.surface;
            let p = Plane3::new(parse_vec4(x.field(), plane)?)?;
            Ok((serde_json::to_value(plane_config(x, &p, x.field())?)?, None, true))
        }
        Command::Tables { which } => {
            let menu = if *which == 3 { degree3_menu() } else { refined_menu() };
            let v = table_json(&menu, *which)?;
            let t = table_text(&v, *which);
            Ok((v, Some(t), true))
        }
        Command::NormalizeC1 { input, scramble } => {
            let inp = cli.input(input)?;
            let mut x = inp.surface.clone();
            if let Some(seed) = scramble {
                x = transform_surface(&x, &random_transform(*seed, x.field()))?;
            }
            let out = cmd_normalize_c1(&x, x.field())?;
            let v = json!({"outcome": out, "normal_form": out.surface.to_json()});
            Ok((v, None, true))
        }
        Command::VerifyPaper { lambda, lambda_degree, criteria, random_surfaces, scrambles, seed } => {
            let opts = VerifyOptions {
                lambda: *lambda,
                lambda_degree: *lambda_degree,
                max_degree: cli.max_degree,
                random_surfaces: *random_surfaces,
                scrambles: *scrambles,
                seed: *seed,
                criteria: criteria.clone(),
            };
            let r = cmd_verify_paper(opts)?;
            let t = verify_text(&r);
            let ok = r.all_pass();
            Ok((serde_json::to_value(&r)?, Some(t), ok))
        }
    }
    .map(|(v, t, ok): (Value, Option<String>, bool)| {
        let t = t.or_else(|| Some(text(&v)));
        (v, t, ok)
    })
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("K3LINES_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Only fails when a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok((v, t, ok)) => {
            match cli.format {
                Format::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&v).unwrap_or_default())),
                Format::Text => emit(&t.unwrap_or_default()),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
