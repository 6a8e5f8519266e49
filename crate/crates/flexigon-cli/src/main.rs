/*!
Command-line front end for the flexigon calculator.

Every command takes a `--lengths` vector whose entries may carry epsilon
tokens (`eps`, `4+eps`); these are realized by perturbation before any
computation, and the realized rational vector is echoed in every report, so
a run is reproducible from its output alone.

* `eval` — evaluate one top-degree monomial: an integer over ℤ, a parity
  over ℤ₂;
* `table` — the pairwise `Ch(i)⌣Ch(j)` table of a pentagon, or every top
  monomial of any polygon under `--all`;
* `expand` — print a monomial's cocycle in normal form;
* `triangles` — list the triangular configurations behind a value, each with
  its sign;
* `chamber` — fingerprint the chamber of a length vector and report which
  Chern classes vanish there;
* `verify` — randomized cross-checks of the two evaluation paths.

Exit codes: 0 success, 1 a `verify` property failed, 2 non-generic or
malformed lengths, 3 a non-transversal product (reachable only through
`expand --reps`), 4 bad monomial or degree.
*/

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flexigon_core::algebra::RingTag;
use flexigon_core::classes::{
    chern_monomial, euler_power_top, monomial_cocycle, EulerMethod, MonomialSpec,
    RepresentationChoice,
};
use flexigon_core::lengths::{
    chamber_signature, chern_nonvanishing, ChamberSignature, ChernVanishing, LengthVector,
    SymbolicLengths,
};
use flexigon_core::oracle::list_triangles;
use flexigon_core::Error;

mod checks;

#[derive(Parser)]
#[command(
    name = "flexigon",
    version,
    about = "Exact intersection numbers on moduli spaces of flexible polygons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a top-degree monomial on the moduli space of the lengths
    Eval(EvalArgs),
    /// Print the pairwise Ch(i)⌣Ch(j) table of a pentagon (--all: every top
    /// monomial, any n)
    Table(TableArgs),
    /// Expand a monomial into its cocycle normal form
    Expand(ExpandArgs),
    /// List the triangular configurations contributing to a monomial
    Triangles(TrianglesArgs),
    /// Report the chamber of a length vector
    Chamber(ChamberArgs),
    /// Cross-check the evaluation paths on random inputs
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Comma-separated side lengths: positive rationals ("3", "7/2", "2.5"),
    /// optionally perturbed ("eps", "4+eps")
    #[arg(long)]
    lengths: String,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Monomial: "1:2,4:1" for Ch(1)²·Ch(4), "e:3" for e³ (ring z2)
    #[arg(long)]
    monomial: String,
    /// Coefficient ring: z (spatial, Chern) or z2 (planar, Euler)
    #[arg(long, value_enum, default_value_t = RingArg::Z)]
    ring: RingArg,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// List every top-degree monomial instead of the pentagon pair table
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Monomial: "1:2,4:1" for Ch(1)²·Ch(4), "e:3" for e³ (ring z2)
    #[arg(long)]
    monomial: String,
    /// Coefficient ring: z (spatial, Chern) or z2 (planar, Euler)
    #[arg(long, value_enum, default_value_t = RingArg::Z)]
    ring: RingArg,
    /// Override dashed partners, "class=partner" pairs: "1=4,2=5"
    #[arg(long)]
    reps: Option<String>,
}

#[derive(Args)]
struct TrianglesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Monomial: "1:2,4:1" for Ch(1)²·Ch(4), "e:3" for e³ (ring z2)
    #[arg(long)]
    monomial: String,
    /// Coefficient ring: z (spatial, Chern) or z2 (planar, Euler)
    #[arg(long, value_enum, default_value_t = RingArg::Z)]
    ring: RingArg,
}

#[derive(Args)]
struct ChamberArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Also run fixed-vector checks against these lengths
    #[arg(long)]
    lengths: Option<String>,
    /// Random trials per property
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Seed for the deterministic generator
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest random polygon size
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(4..=12))]
    nmax: u64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RingArg {
    Z,
    Z2,
}

impl From<RingArg> for RingTag {
    fn from(r: RingArg) -> RingTag {
        match r {
            RingArg::Z => RingTag::Z,
            RingArg::Z2 => RingTag::Z2,
        }
    }
}

fn ring_name(ring: RingTag) -> &'static str {
    match ring {
        RingTag::Z => "z",
        RingTag::Z2 => "z2",
    }
}

/// A command failure: message for stderr plus the process exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::NonGeneric(_) | Error::BadLengths(_) => 2,
            Error::NonTransversal(_) => 3,
            _ => 4,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`flexigon ... | head`), like any filter.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(a) => run_eval(a),
        Command::Table(a) => run_table(a),
        Command::Expand(a) => run_expand(a),
        Command::Triangles(a) => run_triangles(a),
        Command::Chamber(a) => run_chamber(a),
        Command::Verify(a) => run_verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

/// Parse `--lengths` and realize any epsilons. All length problems — syntax,
/// non-positivity, walls — share exit code 2.
fn realize(spec: &str) -> Result<LengthVector, Failure> {
    let sym = SymbolicLengths::parse(spec).map_err(|e| Failure {
        code: 2,
        msg: e.to_string(),
    })?;
    Ok(sym.perturb())
}

fn length_strings(l: &LengthVector) -> Vec<String> {
    l.values().iter().map(ToString::to_string).collect()
}

fn lengths_line(l: &LengthVector) -> String {
    length_strings(l).join(", ")
}

/// Human form of a monomial: `Ch(1)²` is written `Ch(1)^2`, Euler powers `e^K`.
fn pretty_monomial(spec: &MonomialSpec) -> String {
    match spec.ring() {
        RingTag::Z2 => format!("e^{}", spec.total()),
        RingTag::Z => spec
            .exponents()
            .iter()
            .map(|(&i, &d)| {
                if d == 1 {
                    format!("Ch({i})")
                } else {
                    format!("Ch({i})^{d}")
                }
            })
            .collect::<Vec<_>>()
            .join("·"),
    }
}

fn print_json(v: Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("plain data"));
}

// ---------------------------------------------------------------- eval ----

fn run_eval(a: EvalArgs) -> CmdResult {
    let l = realize(&a.common.lengths)?;
    let n = l.n();
    let ring: RingTag = a.ring.into();
    let spec = MonomialSpec::parse(&a.monomial, ring).map_err(Failure::from)?;
    let value = match ring {
        RingTag::Z => chern_monomial(&l, &spec)?,
        RingTag::Z2 => {
            if spec.total() as usize != n - 3 {
                return Err(Error::BadDegree(format!(
                    "total degree {} must equal n−3 = {}",
                    spec.total(),
                    n - 3
                ))
                .into());
            }
            euler_power_top(&l, EulerMethod::Chain)?
        }
    };
    match a.common.format {
        Format::Json => print_json(json!({
            "schema": "flexigon/eval/v1",
            "n": n,
            "lengths": length_strings(&l),
            "ring": ring_name(ring),
            "monomial": spec.to_string(),
            "value": value,
        })),
        Format::Md => {
            println!("lengths: {}  (n = {n})", lengths_line(&l));
            println!("monomial: {}", pretty_monomial(&spec));
            println!("value: {value}");
        }
        Format::Tsv => {
            println!("lengths\tmonomial\tvalue");
            println!("{}\t{}\t{}", length_strings(&l).join(","), spec, value);
        }
    }
    Ok(())
}

// --------------------------------------------------------------- table ----

/// Every exponent vector of total degree `n − 3` on edges `1..=n`, largest
/// leading exponents first (so pure powers of Ch(1) open the listing).
fn enumerate_top_monomials(n: usize) -> Vec<Vec<(usize, u32)>> {
    fn go(
        edge: usize,
        n: usize,
        left: u32,
        cur: &mut Vec<(usize, u32)>,
        out: &mut Vec<Vec<(usize, u32)>>,
    ) {
        if edge > n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for d in (0..=left).rev() {
            if d > 0 {
                cur.push((edge, d));
            }
            go(edge + 1, n, left - d, cur, out);
            if d > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(1, n, (n - 3) as u32, &mut Vec::new(), &mut out);
    out
}

fn pair_spec(i: usize, j: usize) -> MonomialSpec {
    if i == j {
        MonomialSpec::chern(&[(i, 2)]).expect("valid pair")
    } else {
        MonomialSpec::chern(&[(i, 1), (j, 1)]).expect("valid pair")
    }
}

fn run_table(a: TableArgs) -> CmdResult {
    let l = realize(&a.common.lengths)?;
    let n = l.n();
    if a.all {
        let mut rows: Vec<(String, i64)> = Vec::new();
        for exps in enumerate_top_monomials(n) {
            let spec = MonomialSpec::chern(&exps).map_err(Failure::from)?;
            rows.push((spec.to_string(), chern_monomial(&l, &spec)?));
        }
        match a.common.format {
            Format::Json => print_json(json!({
                "schema": "flexigon/table/v1",
                "n": n,
                "lengths": length_strings(&l),
                "kind": "all",
                "rows": rows
                    .iter()
                    .map(|(m, v)| json!({ "monomial": m, "value": v }))
                    .collect::<Vec<_>>(),
            })),
            Format::Md => {
                println!("lengths: {}  (n = {n})", lengths_line(&l));
                println!();
                println!("| monomial | value |");
                println!("|---|---|");
                for (m, v) in &rows {
                    println!("| {m} | {v} |");
                }
            }
            Format::Tsv => {
                println!("monomial\tvalue");
                for (m, v) in &rows {
                    println!("{m}\t{v}");
                }
            }
        }
        return Ok(());
    }
    if n != 5 {
        return Err(Failure {
            code: 4,
            msg: format!(
                "the pairwise Ch(i)⌣Ch(j) table needs a pentagon (got n = {n}); \
                 pass --all for the full monomial listing"
            ),
        });
    }
    let mut entries = [[0i64; 5]; 5];
    for i in 1..=5 {
        for j in i..=5 {
            let v = chern_monomial(&l, &pair_spec(i, j))?;
            entries[i - 1][j - 1] = v;
            entries[j - 1][i - 1] = v;
        }
    }
    match a.common.format {
        Format::Json => print_json(json!({
            "schema": "flexigon/table/v1",
            "n": n,
            "lengths": length_strings(&l),
            "kind": "pairwise",
            "entries": entries.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
        })),
        Format::Md => {
            println!("lengths: {}  (n = {n})", lengths_line(&l));
            println!();
            let header: Vec<String> = (1..=5).map(|j| format!("Ch({j})")).collect();
            println!("| ⌣ | {} |", header.join(" | "));
            println!("|---|{}", "---|".repeat(5));
            for i in 1..=5 {
                let row: Vec<String> = entries[i - 1].iter().map(ToString::to_string).collect();
                println!("| Ch({i}) | {} |", row.join(" | "));
            }
        }
        Format::Tsv => {
            let header: Vec<String> = (1..=5).map(|j| format!("Ch({j})")).collect();
            println!("\t{}", header.join("\t"));
            for i in 1..=5 {
                let row: Vec<String> = entries[i - 1].iter().map(ToString::to_string).collect();
                println!("Ch({i})\t{}", row.join("\t"));
            }
        }
    }
    Ok(())
}

// -------------------------------------------------------------- expand ----

fn parse_reps(s: &str) -> Result<BTreeMap<usize, usize>, Failure> {
    let mut out = BTreeMap::new();
    for item in s.split(',') {
        let item = item.trim();
        let bad = || Failure {
            code: 4,
            msg: format!("bad --reps entry {item:?}: expected class=partner"),
        };
        let (c, p) = item.split_once('=').ok_or_else(bad)?;
        let c: usize = c.trim().parse().map_err(|_| bad())?;
        let p: usize = p.trim().parse().map_err(|_| bad())?;
        if out.insert(c, p).is_some() {
            return Err(Failure {
                code: 4,
                msg: format!("class {c} overridden twice in --reps"),
            });
        }
    }
    Ok(out)
}

fn run_expand(a: ExpandArgs) -> CmdResult {
    let l = realize(&a.common.lengths)?;
    let n = l.n();
    let ring: RingTag = a.ring.into();
    let spec = MonomialSpec::parse(&a.monomial, ring).map_err(Failure::from)?;
    let choice = match &a.reps {
        None => RepresentationChoice::canonical(n, &spec).map_err(Failure::from)?,
        Some(reps) => {
            if ring == RingTag::Z2 {
                return Err(Failure {
                    code: 4,
                    msg: "--reps overrides dashed Chern partners; the Euler chain has none".into(),
                });
            }
            let overrides = parse_reps(reps)?;
            RepresentationChoice::with_dashed_overrides(n, &spec, &overrides)
                .map_err(Failure::from)?
        }
    };
    let c = monomial_cocycle(&l, &spec, &choice)?;
    let rep_md = match ring {
        RingTag::Z2 => format!(
            "chain {}",
            (1..=spec.total() as usize)
                .map(|m| format!("({m} {})", m + 1))
                .collect::<String>()
        ),
        RingTag::Z => spec
            .support()
            .iter()
            .map(|&cl| {
                let mut s = format!("Ch({cl}): dashed {}", choice.dashed(cl).expect("chosen"));
                let b = choice.bold(cl);
                if !b.is_empty() {
                    let b: Vec<String> = b.iter().map(ToString::to_string).collect();
                    s.push_str(&format!(", bold {}", b.join(" ")));
                }
                s
            })
            .collect::<Vec<_>>()
            .join("; "),
    };
    let rep_json = match ring {
        RingTag::Z2 => json!({
            "chain": (1..=spec.total() as usize)
                .map(|m| json!([m, m + 1]))
                .collect::<Vec<_>>(),
        }),
        RingTag::Z => Value::Object(
            spec.support()
                .iter()
                .map(|&cl| {
                    (
                        cl.to_string(),
                        json!({
                            "dashed": choice.dashed(cl),
                            "bold": choice.bold(cl),
                        }),
                    )
                })
                .collect(),
        ),
    };
    match a.common.format {
        Format::Json => print_json(json!({
            "schema": "flexigon/expand/v1",
            "n": n,
            "lengths": length_strings(&l),
            "ring": ring_name(ring),
            "monomial": spec.to_string(),
            "representation": rep_json,
            "cocycle": c.to_string(),
            "terms": c.num_terms(),
            "degree": c.homogeneous_degree(),
        })),
        Format::Md => {
            println!("lengths: {}  (n = {n})", lengths_line(&l));
            println!("monomial: {}", pretty_monomial(&spec));
            println!("representation: {rep_md}");
            println!("cocycle: {c}");
            match c.homogeneous_degree() {
                Some(d) => println!("terms: {}  degree: {d}", c.num_terms()),
                None => println!("terms: {}", c.num_terms()),
            }
        }
        Format::Tsv => {
            println!("term\tcoeff");
            for (t, coeff) in c.terms() {
                println!("{t}\t{coeff}");
            }
        }
    }
    Ok(())
}

// ----------------------------------------------------------- triangles ----

fn run_triangles(a: TrianglesArgs) -> CmdResult {
    let l = realize(&a.common.lengths)?;
    let n = l.n();
    let ring: RingTag = a.ring.into();
    let spec = MonomialSpec::parse(&a.monomial, ring).map_err(Failure::from)?;
    let configs = list_triangles(&l, &spec)?;
    let value: i64 = match ring {
        RingTag::Z => configs.iter().map(|c| c.sign).sum(),
        RingTag::Z2 => (configs.len() % 2) as i64,
    };
    // A group renders like a factor body: codirected plain, antidirected primed.
    let group_body = |(iset, jset): (
        flexigon_core::algebra::EdgeSet,
        flexigon_core::algebra::EdgeSet,
    )| {
        let parts: Vec<String> = (iset | jset)
            .iter()
            .map(|e| {
                if jset.contains(e) {
                    format!("{e}'")
                } else {
                    e.to_string()
                }
            })
            .collect();
        format!("({})", parts.join(" "))
    };
    match a.common.format {
        Format::Json => print_json(json!({
            "schema": "flexigon/triangles/v1",
            "n": n,
            "lengths": length_strings(&l),
            "ring": ring_name(ring),
            "monomial": spec.to_string(),
            "configurations": configs
                .iter()
                .map(|c| json!({
                    "groups": c.groups
                        .iter()
                        .map(|&(i, j)| json!({
                            "I": i.iter().collect::<Vec<_>>(),
                            "J": j.iter().collect::<Vec<_>>(),
                        }))
                        .collect::<Vec<_>>(),
                    "sides": c.sides.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "sign": c.sign,
                }))
                .collect::<Vec<_>>(),
            "count": configs.len(),
            "value": value,
        })),
        Format::Md => {
            println!("lengths: {}  (n = {n})", lengths_line(&l));
            println!("monomial: {}", pretty_monomial(&spec));
            println!();
            println!("| # | groups | sides | sign |");
            println!("|---|---|---|---|");
            for (k, c) in configs.iter().enumerate() {
                let groups: Vec<String> = c.groups.iter().map(|&g| group_body(g)).collect();
                let sides: Vec<String> = c.sides.iter().map(ToString::to_string).collect();
                println!(
                    "| {} | {} | {} | {:+} |",
                    k + 1,
                    groups.join(" "),
                    sides.join(", "),
                    c.sign
                );
            }
            println!();
            println!("{} configurations, value {value}", configs.len());
        }
        Format::Tsv => {
            println!("groups\tsides\tsign");
            for c in &configs {
                let groups: Vec<String> = c.groups.iter().map(|&g| group_body(g)).collect();
                let sides: Vec<String> = c.sides.iter().map(ToString::to_string).collect();
                println!("{}\t{}\t{}", groups.join(" "), sides.join(","), c.sign);
            }
        }
    }
    Ok(())
}

// ------------------------------------------------------------- chamber ----

/// FNV-1a over the wall signs, a stable 64-bit chamber fingerprint: equal
/// for two vectors iff they share every moduli-space invariant computed here.
fn fingerprint(sig: &ChamberSignature) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &s in sig.signs() {
        h ^= if s > 0 { 0x2b } else { 0x2d };
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn run_chamber(a: ChamberArgs) -> CmdResult {
    let l = realize(&a.common.lengths)?;
    let n = l.n();
    let sig = chamber_signature(&l).map_err(Failure::from)?;
    let fp = fingerprint(&sig);
    let mut zero_edges = Vec::new();
    for i in 1..=n {
        if chern_nonvanishing(&l, i)? == ChernVanishing::ZeroExceptional {
            zero_edges.push(i);
        }
    }
    match a.common.format {
        Format::Json => print_json(json!({
            "schema": "flexigon/chamber/v1",
            "n": n,
            "lengths": length_strings(&l),
            "generic": l.is_generic(),
            "walls": sig.signs().len(),
            "fingerprint": format!("{fp:#018x}"),
            "chern": (1..=n)
                .map(|i| json!({
                    "edge": i,
                    "status": if zero_edges.contains(&i) { "zero" } else { "nonzero" },
                }))
                .collect::<Vec<_>>(),
        })),
        Format::Md => {
            println!("lengths: {}  (n = {n})", lengths_line(&l));
            println!("generic: {}", if l.is_generic() { "yes" } else { "no" });
            println!("fingerprint: {fp:#018x}  ({} walls)", sig.signs().len());
            if zero_edges.is_empty() {
                println!("chern: all classes nonzero");
            } else {
                let edges: Vec<String> = zero_edges.iter().map(ToString::to_string).collect();
                println!(
                    "chern: zero on edges {} (exceptional chamber), nonzero elsewhere",
                    edges.join(", ")
                );
            }
        }
        Format::Tsv => {
            println!("key\tvalue");
            println!("n\t{n}");
            println!("lengths\t{}", length_strings(&l).join(","));
            println!("generic\t{}", l.is_generic());
            println!("walls\t{}", sig.signs().len());
            println!("fingerprint\t{fp:#018x}");
            for i in 1..=n {
                let status = if zero_edges.contains(&i) { "zero" } else { "nonzero" };
                println!("chern:{i}\t{status}");
            }
        }
    }
    Ok(())
}

// -------------------------------------------------------------- verify ----

fn run_verify(a: VerifyArgs) -> CmdResult {
    let fixed = match &a.lengths {
        None => None,
        Some(s) => Some(realize(s)?),
    };
    let outcome = checks::run(a.trials, a.seed, a.nmax as usize, fixed.as_ref());
    let total_checks: usize = outcome.properties.iter().map(|p| p.trials).sum();
    let total_failures: usize = outcome.properties.iter().map(|p| p.failures).sum();
    match a.format {
        Format::Json => print_json(json!({
            "schema": "flexigon/verify/v1",
            "seed": a.seed,
            "trials": a.trials,
            "nmax": a.nmax,
            "lengths": fixed.as_ref().map(length_strings),
            "properties": outcome.properties
                .iter()
                .map(|p| json!({
                    "name": p.name,
                    "trials": p.trials,
                    "failures": p.failures,
                    "note": p.note,
                }))
                .collect::<Vec<_>>(),
            "passed": outcome.passed,
        })),
        Format::Md => {
            println!(
                "seed: {}  trials: {} per property  polygons up to n = {}",
                a.seed, a.trials, a.nmax
            );
            if let Some(l) = &fixed {
                println!("fixed lengths: {}  (n = {})", lengths_line(l), l.n());
            }
            println!();
            println!("| property | trials | failures |");
            println!("|---|---|---|");
            for p in &outcome.properties {
                println!("| {} | {} | {} |", p.name, p.trials, p.failures);
            }
            println!();
            for p in &outcome.properties {
                if let Some(note) = &p.note {
                    println!("note: {note}");
                }
            }
            if outcome.passed {
                println!("result: ok — {total_checks} checks, 0 failures");
            } else {
                println!("result: FAILED — {total_failures} of {total_checks} checks");
            }
        }
        Format::Tsv => {
            println!("property\ttrials\tfailures");
            for p in &outcome.properties {
                println!("{}\t{}\t{}", p.name, p.trials, p.failures);
            }
        }
    }
    if outcome.passed {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            msg: format!("verification failed ({total_failures} of {total_checks} checks)"),
        })
    }
}
