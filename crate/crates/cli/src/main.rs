mod output;

/// `println!` that stays quiet when stdout is closed early, e.g. by `head`.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

use clap::{Args, Parser, Subcommand, ValueEnum};
use exclusivity::cliques::{
    max_independent_set, resolve_point, verify_cover, CliqueError, LabelledCover,
};
use exclusivity::events::{build_exclusivity_graph, union_scenario, ExclusivityRule, Scenario};
use exclusivity::format::{
    self, IndependentSetJson, InputDigest, PackingJson, ReportJson, ThetaJson,
};
use exclusivity::graph::Graph;
use exclusivity::monogamy::{monogamy_report, Certificates, MonogamyError, ReportOptions, Verdict};
use exclusivity::packing::{fractional_packing, packing_bounds, PackingError};
use exclusivity::rational::{self, Rational};
use exclusivity::scenarios::{self as gen, Family};
use exclusivity::theta::{default_tolerance, lovasz_theta};
use output::{digest, read, write_atomic, CliError};
use serde_json::json;
use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (report schema 1)");

/// Exclusivity graphs, their classical, quantum and exclusivity bounds, and
/// monogamy checks for experiments run together.
#[derive(Parser)]
#[command(name = "exclusivity", version = VERSION)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write scenario files for a named family.
    Gen(GenArgs),
    /// Compute α, α* and ϑ of one scenario, or of the union of several.
    Numbers(NumbersArgs),
    /// Check whether several experiments are monogamous and write a report.
    Monogamy(MonogamyArgs),
    /// Write the exclusivity graph as DOT.
    Export(ExportArgs),
    /// Check a fractional clique cover and print its bound.
    VerifyCover(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Ncycle,
    BellLoop,
    Star,
    Chain,
    KcbsPair,
    Svetlichny,
    SvetlichnyTriple,
}

#[derive(Args)]
struct GenArgs {
    family: FamilyName,
    /// Cycle length (ncycle).
    #[arg(long)]
    n: Option<usize>,
    /// Flipped context, 1-based (ncycle).
    #[arg(long, default_value_t = 1)]
    j: usize,
    /// Flip every context instead of one (ncycle).
    #[arg(long)]
    complementary: bool,
    /// Number of parties (bell-loop, chain, svetlichny).
    #[arg(long)]
    parties: Option<usize>,
    /// Settings per party (bell-loop, star, chain).
    #[arg(long)]
    settings: Option<usize>,
    /// Number of outer parties around the hub (star).
    #[arg(long)]
    bobs: Option<usize>,
    /// Also compute and write exact α* certificates (svetlichny-triple).
    #[arg(long)]
    certificates: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct Inputs {
    /// Scenario files.
    #[arg(required = true)]
    scenarios: Vec<PathBuf>,
    /// Extra exclusivity rules between the scenarios.
    #[arg(long)]
    rules: Option<PathBuf>,
}

#[derive(Args)]
struct Tolerance {
    /// Certified width of ϑ intervals and slack of verdicts. Defaults by
    /// graph size.
    #[arg(long, env = "EXCLUSIVITY_TOL")]
    tol: Option<f64>,
}

impl Tolerance {
    fn resolve(&self, n: usize) -> Result<f64, CliError> {
        match self.tol {
            Some(t) if t.is_finite() && t > 0.0 => Ok(t),
            Some(t) => Err(CliError::Input(format!(
                "tolerance must be positive, got {t}"
            ))),
            None => Ok(default_tolerance(n)),
        }
    }
}

#[derive(Args)]
struct CertificateArgs {
    /// Fractional clique cover, used when the maximal cliques overflow.
    #[arg(long)]
    cover: Option<PathBuf>,
    /// Packing point giving a lower bound next to --cover.
    #[arg(long)]
    point: Option<PathBuf>,
}

#[derive(Args)]
struct NumbersArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    alpha: bool,
    #[arg(long)]
    theta: bool,
    #[arg(long)]
    alpha_star: bool,
    /// All three numbers and the testability flag (the default).
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    tol: Tolerance,
    #[command(flatten)]
    certs: CertificateArgs,
}

#[derive(Args)]
struct MonogamyArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[command(flatten)]
    tol: Tolerance,
    /// Skip the Lovász numbers (Theorem 1 only).
    #[arg(long)]
    skip_theta: bool,
    #[command(flatten)]
    certs: CertificateArgs,
    /// Report path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// DOT output path.
    #[arg(long)]
    dot: PathBuf,
    /// Colour edges between different scenarios.
    #[arg(long)]
    highlight_cross: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    cover: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Numbers(a) => cmd_numbers(&a),
        Command::Monogamy(a) => cmd_monogamy(&a),
        Command::Export(a) => cmd_export(&a),
        Command::VerifyCover(a) => cmd_verify_cover(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn input<E: std::fmt::Display>(path: &Path) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Input(format!("{}: {e}", path.display()))
}

fn required(value: Option<usize>, flag: &str) -> Result<usize, CliError> {
    value.ok_or_else(|| CliError::Input(format!("--{flag} is required for this family")))
}

fn cmd_gen(a: &GenArgs) -> Result<(), CliError> {
    let bad = |e: gen::ScenarioError| CliError::Input(e.to_string());
    let mut files: Vec<(String, String)> = Vec::new();
    let add_family = |files: &mut Vec<(String, String)>, name: &str, f: &Family| {
        for (i, s) in f.parts.iter().enumerate() {
            files.push((format!("{name}-{i}.json"), format::scenario_to_json(s)));
        }
        files.push((
            format!("{name}-rules.json"),
            format::rules_to_json(&f.rules),
        ));
    };
    match a.family {
        FamilyName::Ncycle => {
            let s = gen::gen_ncycle(required(a.n, "n")?, a.j, a.complementary).map_err(bad)?;
            files.push(("ncycle.json".into(), format::scenario_to_json(&s)));
        }
        FamilyName::BellLoop => {
            let f = gen::gen_bell_loop(
                required(a.parties, "parties")?,
                required(a.settings, "settings")?,
            )
            .map_err(bad)?;
            add_family(&mut files, "bell-loop", &f);
        }
        FamilyName::Star => {
            let f = gen::gen_star(required(a.bobs, "bobs")?, required(a.settings, "settings")?)
                .map_err(bad)?;
            add_family(&mut files, "star", &f);
        }
        FamilyName::Chain => {
            let f = gen::gen_chain(
                required(a.parties, "parties")?,
                required(a.settings, "settings")?,
            )
            .map_err(bad)?;
            add_family(&mut files, "chain", &f);
        }
        FamilyName::KcbsPair => {
            add_family(&mut files, "kcbs-pair", &gen::gen_kcbs_pair());
            files.push((
                "kcbs-pair-cover.json".into(),
                format::cover_to_json(&gen::kcbs_pair_cover()),
            ));
        }
        FamilyName::Svetlichny => {
            let (_, s) = gen::gen_svetlichny(required(a.parties, "parties")?).map_err(bad)?;
            files.push(("svetlichny.json".into(), format::scenario_to_json(&s)));
        }
        FamilyName::SvetlichnyTriple => {
            let t = gen::gen_svetlichny_triple();
            add_family(&mut files, "svetlichny-triple", &t.family);
            files.push((
                "svetlichny-triple-table-cover.json".into(),
                format::cover_to_json(&t.cover),
            ));
            if a.certificates {
                let p = t.packing().map_err(|e| CliError::Failed(e.to_string()))?;
                files.push((
                    "svetlichny-triple-point.json".into(),
                    format::point_to_json(&p.point),
                ));
                files.push((
                    "svetlichny-triple-cover.json".into(),
                    format::cover_to_json(&p.cover),
                ));
            }
        }
    }
    std::fs::create_dir_all(&a.out)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", a.out.display())))?;
    for (name, text) in &files {
        let path = a.out.join(name);
        write_atomic(&path, text)?;
        say!("{}", path.display());
    }
    Ok(())
}

struct Loaded {
    scenarios: Vec<Scenario>,
    rules: Vec<ExclusivityRule>,
    digests: Vec<InputDigest>,
}

fn load(inputs: &Inputs) -> Result<Loaded, CliError> {
    let mut scenarios = Vec::new();
    let mut digests = Vec::new();
    for path in &inputs.scenarios {
        let text = read(path)?;
        scenarios.push(format::parse_scenario(&text).map_err(input(path))?);
        digests.push(digest(path, &text));
    }
    let rules = match &inputs.rules {
        Some(path) => {
            let text = read(path)?;
            digests.push(digest(path, &text));
            format::parse_rules(&text).map_err(input(path))?
        }
        None => Vec::new(),
    };
    Ok(Loaded {
        scenarios,
        rules,
        digests,
    })
}

/// One graph for the inputs: a lone scenario keeps its own labels, several
/// are combined into their union. The second value lists cross-part edges.
fn combined_graph(l: &Loaded) -> Result<(Graph, Vec<(usize, usize)>), CliError> {
    let bad = |e: exclusivity::events::EventsError| CliError::Input(e.to_string());
    if let [single] = l.scenarios.as_slice() {
        let mut s = single.clone();
        for r in &l.rules {
            if !s.rules.contains(r) {
                s.rules.push(r.clone());
            }
        }
        return Ok((build_exclusivity_graph(&s).map_err(bad)?, Vec::new()));
    }
    let u = union_scenario(&l.scenarios, &l.rules).map_err(bad)?;
    let g = build_exclusivity_graph(&u.scenario).map_err(bad)?;
    let cross = u.cross_edges(&g);
    Ok((g, cross))
}

struct LoadedCerts {
    cover: Option<LabelledCover>,
    point: Option<Vec<(String, Rational)>>,
}

fn load_certs(
    c: &CertificateArgs,
    digests: &mut Vec<InputDigest>,
) -> Result<LoadedCerts, CliError> {
    let cover = match &c.cover {
        Some(path) => {
            let text = read(path)?;
            digests.push(digest(path, &text));
            Some(format::parse_cover(&text).map_err(input(path))?)
        }
        None => None,
    };
    let point = match &c.point {
        Some(path) => {
            let text = read(path)?;
            digests.push(digest(path, &text));
            Some(format::parse_point(&text).map_err(input(path))?)
        }
        None => None,
    };
    Ok(LoadedCerts { cover, point })
}

fn labels(g: &Graph) -> Vec<String> {
    (0..g.vertex_count()).map(|v| g.display_name(v)).collect()
}

const OVERFLOW_HINT: &str = "supply a fractional clique cover with --cover";

fn cmd_numbers(a: &NumbersArgs) -> Result<(), CliError> {
    let mut loaded = load(&a.inputs)?;
    let certs = load_certs(&a.certs, &mut loaded.digests)?;
    let (g, _) = combined_graph(&loaded)?;
    let names = labels(&g);
    let all = a.all || !(a.alpha || a.theta || a.alpha_star);
    let tol = a.tol.resolve(g.vertex_count())?;

    let mut out = serde_json::Map::new();
    out.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    out.insert("inputs".into(), json!(loaded.digests));
    out.insert("vertices".into(), json!(g.vertex_count()));
    out.insert("edges".into(), json!(g.edge_count()));

    let mis = max_independent_set(&g);
    if all || a.alpha {
        out.insert("alpha".into(), json!(IndependentSetJson::new(&mis, &names)));
    }
    let mut alpha_star: Option<(Rational, Rational)> = None;
    if all || a.alpha_star {
        let packing = match fractional_packing(&g) {
            Ok(s) => PackingJson::from_solution(&s, &names),
            Err(PackingError::Clique(e @ CliqueError::Overflow { .. })) => {
                let Some(cover) = &certs.cover else {
                    return Err(CliError::CliqueOverflow(format!("{e}; {OVERFLOW_HINT}")));
                };
                certificate_bounds(&g, cover, certs.point.as_deref(), &mis.value)?
            }
            Err(e) => return Err(CliError::Failed(e.to_string())),
        };
        let lower = rational::parse(&packing.lower).expect("own output");
        let upper = rational::parse(&packing.upper).expect("own output");
        alpha_star = Some((lower, upper));
        out.insert("alpha_star".into(), json!(packing));
    }
    if all || a.theta {
        let t = lovasz_theta(&g, tol).map_err(|e| CliError::Failed(e.to_string()))?;
        if all {
            let testable = match &alpha_star {
                Some((lo, hi)) if lo == hi && t.converged => Some(
                    rational::to_f64(&mis.value) + tol < t.low
                        && t.high < rational::to_f64(lo) - tol,
                ),
                _ => None,
            };
            out.insert("testable".into(), json!(testable));
        }
        out.insert("theta".into(), json!(ThetaJson::from(&t)));
    }
    say!(
        "{}",
        serde_json::to_string_pretty(&out).expect("plain data")
    );
    Ok(())
}

fn certificate_bounds(
    g: &Graph,
    cover: &LabelledCover,
    point: Option<&[(String, Rational)]>,
    alpha: &Rational,
) -> Result<PackingJson, CliError> {
    let cover = cover
        .resolve(g)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let check = verify_cover(g, &cover);
    if let Some(v) = check.violation {
        return Err(CliError::Input(format!("invalid cover: {v}")));
    }
    let (lower, point_map) = match point {
        Some(p) => {
            let x = resolve_point(g, p).map_err(|e| CliError::Input(e.to_string()))?;
            let b = packing_bounds(g, &x, &cover).map_err(|e| CliError::Input(e.to_string()))?;
            let names = labels(g);
            let map: BTreeMap<String, String> = x
                .iter()
                .zip(&names)
                .filter(|(v, _)| **v != rational::zero())
                .map(|(v, l)| (l.clone(), rational::format(v)))
                .collect();
            (b.lower, map)
        }
        // α ≤ α* always.
        None => (alpha.clone(), BTreeMap::new()),
    };
    let upper = check.bound;
    Ok(PackingJson {
        method: "certificates".into(),
        exact: (lower == upper).then(|| rational::format(&lower)),
        lower: rational::format(&lower),
        upper: rational::format(&upper),
        point: point_map,
        cover: Vec::new(),
    })
}

fn cmd_monogamy(a: &MonogamyArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let mut loaded = load(&a.inputs)?;
    if loaded.scenarios.len() < 2 {
        return Err(CliError::Input(
            "monogamy needs at least 2 scenario files".into(),
        ));
    }
    let certs = load_certs(&a.certs, &mut loaded.digests)?;
    let n: usize = loaded.scenarios.iter().map(|s| s.events.len()).sum();
    let tol = a.tol.resolve(n)?;
    let options = ReportOptions {
        tol,
        skip_theta: a.skip_theta,
        certificates: Certificates {
            cover: certs.cover,
            point: certs.point,
        },
        ..ReportOptions::default()
    };
    let report =
        monogamy_report(&loaded.scenarios, &loaded.rules, &options).map_err(|e| match e {
            MonogamyError::UnionPacking(PackingError::Clique(CliqueError::Overflow { .. })) => {
                CliError::CliqueOverflow(format!("{e}; {OVERFLOW_HINT}"))
            }
            MonogamyError::TooFewParts(_)
            | MonogamyError::PartGraph { .. }
            | MonogamyError::Union(_)
            | MonogamyError::Certificate(_)
            | MonogamyError::CertificateLabel(_) => CliError::Input(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        })?;
    let json = ReportJson::new(&report, loaded.digests, tol, start.elapsed().as_millis());
    write_atomic(&a.out, &json.to_json())?;

    let verdict = |v: Verdict| match v {
        Verdict::Holds => "monogamous",
        Verdict::Fails => "not shown monogamous",
        Verdict::Undecided => "undecided",
    };
    say!(
        "sum of classical bounds: {}",
        rational::format(&report.sum_alpha)
    );
    match report.union_alpha_star() {
        Some(v) => say!("alpha* of the union: {}", rational::format(v)),
        None => say!(
            "alpha* of the union: in [{}, {}]",
            rational::format(report.union_packing.lower()),
            rational::format(report.union_packing.upper())
        ),
    }
    say!("theorem 1: {}", verdict(report.theorem1));
    if let (Some(t), Some(v)) = (&report.union_theta, report.theorem2) {
        say!("theta of the union: [{:.7}, {:.7}]", t.low, t.high);
        say!(
            "theorem 2: {}{}",
            verdict(v),
            if report.tight == Some(true) {
                " (tight)"
            } else {
                ""
            }
        );
    }
    say!("report: {}", a.out.display());

    if report.theorem2 == Some(Verdict::Undecided) {
        let t = report.union_theta.as_ref().expect("theta computed");
        return Err(CliError::Undecided(format!(
            "theta interval [{}, {}] did not settle theorem 2",
            t.low, t.high
        )));
    }
    if report.theorem1 == Verdict::Undecided {
        return Err(CliError::Undecided(format!(
            "alpha* bounds [{}, {}] do not settle theorem 1",
            rational::format(report.union_packing.lower()),
            rational::format(report.union_packing.upper())
        )));
    }
    Ok(())
}

fn cmd_export(a: &ExportArgs) -> Result<(), CliError> {
    let loaded = load(&a.inputs)?;
    let (g, cross) = combined_graph(&loaded)?;
    let highlight: HashSet<(usize, usize)> = cross.into_iter().collect();
    let dot = g.to_dot(a.highlight_cross.then_some(&highlight));
    write_atomic(&a.dot, &dot)?;
    say!(
        "{}: {} nodes, {} edges, {} between scenarios",
        a.dot.display(),
        g.vertex_count(),
        g.edge_count(),
        highlight.len()
    );
    Ok(())
}

fn cmd_verify_cover(a: &VerifyArgs) -> Result<(), CliError> {
    let loaded = load(&a.inputs)?;
    let (g, _) = combined_graph(&loaded)?;
    let text = read(&a.cover)?;
    let cover = format::parse_cover(&text).map_err(input(&a.cover))?;
    let cover = cover
        .resolve(&g)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let check = verify_cover(&g, &cover);
    let out = json!({
        "valid": check.valid,
        "bound": rational::format(&check.bound),
        "violation": check.violation.as_ref().map(ToString::to_string),
    });
    say!(
        "{}",
        serde_json::to_string_pretty(&out).expect("plain data")
    );
    if check.valid {
        Ok(())
    } else {
        Err(CliError::Failed("cover is not valid".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn version_names_the_schema() {
        assert!(VERSION.contains(&format!("schema {}", format::SCHEMA_VERSION)));
    }
}
