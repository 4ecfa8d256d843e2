//! `superdouble`: checks, certificates, enumeration and classification reports
//! over the catalog of Lie superalgebras and Manin supertriples.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use superdouble::algebra::{commutant_series, CommutantFingerprint, SuperAlgebra};
use superdouble::catalog::Catalog;
use superdouble::classify::{
    check_classes, classify_dims, dual_action, enumerate_duals, reduce_orbits, report, DualAnsatz, EnumerateOptions,
    OrbitSampling, ReportOptions, Target,
};
use superdouble::iso::{
    dual_form, odd_action, search_iso, solve_r, verify_certificate, ExhaustReason, Mask, SearchOptions, SearchOutcome,
};
use superdouble::linalg::Matrix;
use superdouble::scalar::{Bindings, Rat, Scalar, Var};
use superdouble::triple::{build_double, check_compatibility, ManinTriple};
use superdouble::{Error, Result};

#[derive(Parser)]
#[command(name = "superdouble", version, about = "Exact computations with Lie superbialgebra doubles")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Node budget for searches and enumeration.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Parameter assignment `name=value`; repeatable.
    #[arg(long = "bind", value_name = "NAME=VALUE", global = true)]
    binds: Vec<String>,
    /// Extra catalog file loaded after the catalog path.
    #[arg(long = "file", value_name = "PATH", global = true)]
    files: Vec<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Grading, graded antisymmetry and Jacobi of algebras; compatibility and
    /// ad-invariance of triples. With no names, everything loaded from the
    /// `--file` arguments, or the whole catalog.
    Check {
        #[arg(long = "algebra", value_name = "NAME")]
        algebras: Vec<String>,
        #[arg(long = "triple", value_name = "ID")]
        triples: Vec<String>,
    },
    /// Brackets of the double of a triple.
    Double {
        #[arg(long)]
        triple: String,
    },
    /// Commutant series of an algebra or of the double of a triple.
    Invariants {
        #[arg(long, conflicts_with = "triple", required_unless_present = "triple")]
        algebra: Option<String>,
        #[arg(long)]
        triple: Option<String>,
    },
    /// Verifies a catalog certificate, or searches for one between two triples.
    VerifyIso {
        #[arg(long, conflicts_with_all = ["from", "to"], required_unless_present_all = ["from", "to"])]
        cert: Option<String>,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
        /// Preserve both halves, searching for an isomorphism of triples.
        #[arg(long)]
        split: bool,
    },
    /// Symmetric `R` relating `(C | abelian)` to `(C | N)` for `C` of
    /// superdimension `(1,n)`; `G` is symbolic unless a triple supplies it.
    SolveR {
        #[arg(long, conflicts_with = "triple", required_unless_present = "triple")]
        algebra: Option<String>,
        #[arg(long)]
        triple: Option<String>,
    },
    /// Grid enumeration of duals of a seed algebra, reduced by its automorphisms.
    Enumerate {
        #[arg(long)]
        seed: String,
        /// Grid values, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Option<Vec<String>>,
    },
    /// Groups the sampled triples of one superdimension into classes of doubles.
    Classify {
        /// Superdimension `m,n` of the triples.
        #[arg(long, value_parser = parse_dims)]
        dims: (usize, usize),
    },
    /// Compares computed results with the encoded table or theorem claims.
    Report {
        #[arg(long)]
        target: String,
    },
}

fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (m, n) = s.split_once(',').ok_or("expected m,n")?;
    let m = m.trim().parse().map_err(|_| format!("bad dimension {m}"))?;
    let n = n.trim().parse().map_err(|_| format!("bad dimension {n}"))?;
    Ok((m, n))
}

/// Text and machine renderings of one run, plus its verdict.
struct Out {
    format: Format,
    buf: String,
    pass: bool,
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn clean(s: &str) -> String {
    s.replace(' ', "")
}

impl Out {
    fn new(format: Format) -> Out {
        Out { format, buf: String::new(), pass: true }
    }

    fn raw(&mut self, text: &str, machine: &str) {
        let s = if self.format == Format::Text { text } else { machine };
        if !s.is_empty() {
            self.buf += s;
            self.buf.push('\n');
        }
    }

    fn kv(&mut self, key: &str, value: &str) {
        self.raw(&format!("{key}: {value}"), &format!("{key}={}", clean(value)));
    }

    /// A named check with its residual count; a failure fails the run.
    fn check(&mut self, name: &str, residuals: usize) {
        let ok = residuals == 0;
        self.pass &= ok;
        self.raw(
            &format!("{name}: {} ({residuals} residuals)", status(ok)),
            &format!("{name}={} residuals={residuals}", status(ok)),
        );
    }

    /// Up to `LIMIT` residual lines, text only.
    fn details(&mut self, lines: impl IntoIterator<Item = String>) {
        const LIMIT: usize = 8;
        if self.format == Format::Text {
            for l in lines.into_iter().take(LIMIT) {
                self.buf += &format!("  {l}\n");
            }
        }
    }
}

struct Ctx {
    catalog: Catalog,
    bindings: Bindings,
    budget: Option<usize>,
    files: Vec<String>,
}

fn parse_binding(s: &str, b: &mut Bindings) -> Result<()> {
    let bad = |msg: String| Error::Parse { line: 1, col: 1, msg };
    let (k, v) = s.split_once('=').ok_or_else(|| bad(format!("binding {s} is not name=value")))?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() || !k.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(bad(format!("bad parameter name in {s}")));
    }
    let r = Rat::parse(v).ok_or_else(|| bad(format!("binding {s}: {v} is not a rational number")))?;
    b.insert(k, r);
    Ok(())
}

fn setup(g: &Global) -> Result<Ctx> {
    let mut bindings = Bindings::new();
    for s in &g.binds {
        parse_binding(s, &mut bindings)?;
    }
    let mut catalog = Catalog::load()?;
    let mut files = Vec::new();
    for f in &g.files {
        catalog.add_file(f)?;
        files.push(f.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string());
    }
    Ok(Ctx { catalog, bindings, budget: g.budget, files })
}

impl Ctx {
    fn algebra(&self, name: &str) -> Result<SuperAlgebra> {
        let a = self.catalog.algebra(name, &Bindings::new())?;
        let b = self.bindings.restricted(a.ctx.names());
        if b.is_empty() {
            Ok(a)
        } else {
            a.substitute(&b)
        }
    }

    fn triple(&self, id: &str) -> Result<ManinTriple> {
        let t = self.catalog.triple(id, &Bindings::new())?;
        let b = self.bindings.restricted(t.ctx.names());
        if b.is_empty() {
            Ok(t)
        } else {
            t.substitute(&b)
        }
    }

    /// A triple with every parameter bound; sign and discrete parameters left
    /// open must be bound explicitly.
    fn concrete_triple(&self, id: &str) -> Result<ManinTriple> {
        let t = self.triple(id)?;
        if let Some(p) = t.ctx.params.first() {
            return Err(Error::ConstraintViolation(format!("{id} needs a binding for {}", p.name)));
        }
        Ok(t)
    }
}

fn check_algebra(out: &mut Out, a: &SuperAlgebra) {
    let names = &a.basis;
    let tres = |r: &superdouble::algebra::TensorResidual| {
        format!("[{},{}] component {}: {}", names[r.i], names[r.j], names[r.k], r.value)
    };
    let g = a.check_grading();
    out.check("grading", g.len());
    out.details(g.iter().map(tres));
    let s = a.check_antisymmetry();
    out.check("antisymmetry", s.len());
    out.details(s.iter().map(tres));
    let j = a.check_jacobi();
    out.check("jacobi", j.len());
    out.details(j.iter().map(|r| {
        let at = if r.branch.is_empty() { String::new() } else { format!(" at {}", r.branch) };
        format!("({},{},{}) component {}: {}{at}", names[r.x], names[r.y], names[r.z], names[r.k], r.value)
    }));
}

fn check_triple(out: &mut Out, t: &ManinTriple) -> Result<()> {
    let c = check_compatibility(t)?;
    out.check("compatibility", c.len());
    out.details(c.iter().map(|r| format!("({},{},{})^{}: {}", r.x, r.y, r.z, r.k, r.value)));
    let d = build_double(t)?;
    let a = d.ad_invariance()?;
    out.check("ad-invariance", a.len());
    let names = &d.algebra.basis;
    out.details(a.iter().map(|r| format!("({},{},{}): {}", names[r.i], names[r.j], names[r.k], r.value)));
    Ok(())
}

fn cmd_check(cx: &Ctx, out: &mut Out, algebras: &[String], triples: &[String]) -> Result<()> {
    let (mut algebras, mut triples) = (algebras.to_vec(), triples.to_vec());
    if algebras.is_empty() && triples.is_empty() {
        let mine = |f: &str| cx.files.is_empty() || cx.files.iter().any(|x| x == f);
        algebras = cx.catalog.algebras().iter().filter(|e| mine(&e.file)).map(|e| e.name.clone()).collect();
        triples = cx.catalog.triples().iter().filter(|e| mine(&e.file)).map(|e| e.name.clone()).collect();
    }
    let header = algebras.len() + triples.len() > 1;
    for n in &algebras {
        let a = cx.algebra(n)?;
        if header {
            out.kv("algebra", n);
        }
        check_algebra(out, &a);
    }
    for id in &triples {
        let t = cx.triple(id)?;
        if header {
            out.kv("triple", id);
        }
        check_triple(out, &t)?;
    }
    Ok(())
}

fn cmd_double(cx: &Ctx, out: &mut Out, id: &str) -> Result<()> {
    let t = cx.triple(id)?;
    let d = build_double(&t)?;
    let (m, n) = t.super_dim();
    out.kv("triple", &format!("({}|{})", t.left.label(), t.right.label()));
    out.kv("superdimension", &format!("({},{})", 2 * m, 2 * n));
    let names = &d.algebra.basis;
    for (i, j, v) in d.algebra.nonzero_brackets() {
        let val = d.algebra.format_vector(&v);
        out.raw(
            &format!("[{},{}] = {val}", names[i], names[j]),
            &format!("bracket=[{},{}] value={}", names[i], names[j], clean(&val)),
        );
    }
    check_triple(out, &t)
}

fn fingerprint(out: &mut Out, f: &CommutantFingerprint) {
    for (i, (m, n)) in f.series.iter().enumerate() {
        out.kv(&format!("C{}", i + 1), &format!("({m},{n})"));
    }
    let d = f.dims();
    out.kv("dims", &format!("{},{},{}", d[0], d[1], d[2]));
}

fn cmd_invariants(cx: &Ctx, out: &mut Out, algebra: Option<&str>, triple: Option<&str>) -> Result<()> {
    let a = match (algebra, triple) {
        (Some(n), _) => {
            let a = cx.algebra(n)?;
            if let Some(p) = a.ctx.params.first() {
                return Err(Error::ConstraintViolation(format!("{n} needs a binding for {}", p.name)));
            }
            a
        }
        (None, Some(id)) => build_double(&cx.concrete_triple(id)?)?.algebra,
        (None, None) => return Err(Error::UnknownName("nothing to compute".into())),
    };
    fingerprint(out, &commutant_series(&a, &Bindings::new())?);
    Ok(())
}

fn cmd_verify_cert(cx: &Ctx, out: &mut Out, id: &str) -> Result<()> {
    let c = cx.catalog.certificate(id)?;
    let b = cx.bindings.restricted(c.ctx.names());
    let c = if b.is_empty() { c.clone() } else { c.substitute(&b)? };
    let r = verify_certificate(&c)?;
    out.kv("certificate", &c.label());
    out.kv("source", &c.source.label());
    out.kv("target", &c.target.label());
    out.kv("instances", &format!("{} branches, {} samples", r.branches.len(), r.samples.len()));
    let (i, ii) = (r.form_ok(), r.brackets_ok());
    out.raw(
        &format!("condition(i): {}, condition(ii): {}", status(i), status(ii)),
        &format!("condition(i)={}\ncondition(ii)={}", status(i), status(ii)),
    );
    if !r.invertible() {
        out.kv("invertible", "FAIL");
    }
    for inst in r.branches.iter().chain(&r.samples).filter(|x| !x.passed()) {
        let why = inst.error.clone().unwrap_or_else(|| {
            format!("{} form residuals, {} bracket residuals", inst.form_residuals.len(), inst.bracket_residuals.len())
        });
        out.details([format!("at {}: {why}", inst.binding)]);
    }
    out.pass &= r.passed();
    Ok(())
}

fn cmd_search(cx: &Ctx, out: &mut Out, from: &str, to: &str, split: bool) -> Result<u8> {
    let (s, t) = (cx.concrete_triple(from)?, cx.concrete_triple(to)?);
    let mask = if split { Mask::SplitPreserving } else { Mask::Even };
    let opts =
        SearchOptions { budget: cx.budget.unwrap_or(SearchOptions::default().budget), mask, ..Default::default() };
    match search_iso(&s, &t, &opts)? {
        SearchOutcome::Found { cert, strategy, nodes } => {
            out.kv("found", &format!("{strategy} after {nodes} nodes"));
            out.kv("matrix", &cert.matrix.to_string());
            let r = verify_certificate(&cert)?;
            out.raw(
                &format!("condition(i): {}, condition(ii): {}", status(r.form_ok()), status(r.brackets_ok())),
                &format!("condition(i)={}\ncondition(ii)={}", status(r.form_ok()), status(r.brackets_ok())),
            );
            out.pass &= r.passed();
            Ok(0)
        }
        SearchOutcome::Exhausted { budget, nodes, reason, .. } => {
            out.pass = false;
            let why = match &reason {
                ExhaustReason::Fingerprint(a, b) => format!("fingerprints {a} and {b} differ"),
                ExhaustReason::Budget => "budget".into(),
                ExhaustReason::Space => "space".into(),
            };
            out.kv("exhausted", &why);
            out.kv("nodes", &format!("{nodes}/{budget}"));
            Ok(if reason == ExhaustReason::Budget { 4 } else { 1 })
        }
    }
}

fn symbolic_g(n: usize) -> Matrix {
    let name = |j: usize, k: usize| {
        let (j, k) = (j.min(k), j.max(k));
        if n == 2 {
            ["alpha", "beta", "gamma"][j + k].to_string()
        } else {
            format!("G{}{}", j + 1, k + 1)
        }
    };
    Matrix::from_rows((0..n).map(|j| (0..n).map(|k| Scalar::var(Var::new(&name(j, k)))).collect()).collect())
        .expect("square")
}

fn cmd_solve_r(cx: &Ctx, out: &mut Out, algebra: Option<&str>, triple: Option<&str>) -> Result<()> {
    let (h, g) = match (algebra, triple) {
        (Some(n), _) => {
            let a = cx.algebra(n)?;
            let h = odd_action(&a)?;
            let g = symbolic_g(h.rows());
            (h, g)
        }
        (None, Some(id)) => {
            let t = cx.triple(id)?;
            (odd_action(&t.left)?, dual_form(&t.right)?)
        }
        (None, None) => return Err(Error::UnknownName("nothing to solve".into())),
    };
    out.kv("H", &h.to_string());
    out.kv("G", &g.to_string());
    match solve_r(&h, &g)? {
        Ok(s) => {
            out.kv("R", &s.r.to_string());
            let res = s.residual()?;
            let k = (0..res.rows())
                .flat_map(|j| (0..res.cols()).map(move |k| (j, k)))
                .filter(|&(j, k)| !res.get(j, k).is_zero())
                .count();
            out.check("residual", k);
        }
        Err(o) => {
            out.pass = false;
            out.kv("no-solution", &o.to_string());
        }
    }
    Ok(())
}

fn cmd_enumerate(cx: &Ctx, out: &mut Out, seed: &str, grid: Option<&[String]>) -> Result<()> {
    let a = cx.algebra(seed)?;
    let (m, n) = a.grading.super_dim();
    let mut opts = EnumerateOptions::default();
    if let Some(g) = grid {
        opts.grid = g
            .iter()
            .map(|v| Rat::parse(v).ok_or_else(|| Error::Parse { line: 1, col: 1, msg: format!("grid value {v}") }))
            .collect::<Result<_>>()?;
    }
    if let Some(b) = cx.budget {
        opts.budget = b;
    }
    let e = enumerate_duals(&a, &DualAnsatz::new(m, n), &opts)?;
    out.kv("seed", &a.label());
    out.kv("solutions", &e.solutions.len().to_string());
    out.kv("nodes", &e.nodes.to_string());
    out.kv("complete", &e.complete.to_string());
    let fams = cx.catalog.automorphisms(seed).map(|f| f.to_vec()).unwrap_or_default();
    let red = reduce_orbits(&e.solutions, &fams, &OrbitSampling::default())?;
    out.kv("orbits", &red.orbits.len().to_string());
    for (i, o) in red.orbits.iter().enumerate() {
        let d = &e.solutions[o.representative];
        let s = d.to_string();
        let s = if s.is_empty() { "abelian".to_string() } else { s };
        out.raw(
            &format!("orbit {}: size {}, dual {s}", i + 1, o.members.len()),
            &format!("orbit={} size={} dual={}", i + 1, o.members.len(), clean(&s)),
        );
    }
    for edge in &red.edges {
        let ok = dual_action(&e.solutions[edge.from].tensor, &edge.automorphism)
            .is_ok_and(|t| t == e.solutions[edge.to].tensor);
        out.pass &= ok;
    }
    Ok(())
}

fn cmd_classify(cx: &Ctx, out: &mut Out, dims: (usize, usize)) -> Result<()> {
    let opts = ReportOptions { bindings: cx.bindings.clone(), budget: cx.budget };
    let rep = classify_dims(&cx.catalog, dims, &opts)?;
    if rep.nodes.is_empty() {
        return Err(Error::UnknownName(format!("no catalog triples of superdimension ({},{})", dims.0, dims.1)));
    }
    let check = check_classes(&rep);
    out.kv("triples", &rep.nodes.len().to_string());
    out.kv("classes", &rep.classes.len().to_string());
    for (ci, c) in rep.classes.iter().enumerate() {
        let members: Vec<String> = c.iter().map(|&i| rep.nodes[i].label()).collect();
        let fp = rep.nodes[c[0]].fingerprint.to_string();
        out.raw(
            &format!("class {}: [{fp}] {}", ci + 1, members.join(", ")),
            &format!("class={} fingerprint={} members={}", ci + 1, clean(&fp), clean(&members.join(";"))),
        );
    }
    for e in &rep.edges {
        let (s, t) = (rep.nodes[e.source].label(), rep.nodes[e.target].label());
        out.raw(
            &format!("edge {s} -> {t} by {}", e.evidence),
            &format!("edge={} target={} evidence={}", clean(&s), clean(&t), e.evidence),
        );
    }
    for s in &rep.separations {
        let (a, b) = (rep.nodes[s.a].label(), rep.nodes[s.b].label());
        let why = match &s.reason {
            ExhaustReason::Fingerprint(..) => "fingerprint".to_string(),
            ExhaustReason::Budget => format!("budget {}/{}", s.nodes, s.budget),
            ExhaustReason::Space => format!("space {}/{}", s.nodes, s.budget),
        };
        out.raw(
            &format!("apart {a} | {b} by {why}"),
            &format!("apart={} other={} reason={}", clean(&a), clean(&b), clean(&why)),
        );
    }
    out.kv("certificates-verified", &check.edges_verified.to_string());
    out.kv("unseparated", &check.unseparated.len().to_string());
    out.pass &= check.edges_verified && check.unseparated.is_empty();
    Ok(())
}

fn cmd_report(cx: &Ctx, out: &mut Out, target: &str) -> Result<()> {
    let target: Target = target.parse()?;
    let opts = ReportOptions { bindings: cx.bindings.clone(), budget: cx.budget };
    let r = report(&cx.catalog, target, &opts)?;
    out.buf += &match out.format {
        Format::Text => r.render_text(),
        Format::Machine => r.render_machine(),
    };
    out.pass &= r.pass;
    Ok(())
}

fn run(cli: &Cli, out: &mut Out) -> Result<u8> {
    let cx = setup(&cli.global)?;
    match &cli.command {
        Command::Check { algebras, triples } => cmd_check(&cx, out, algebras, triples)?,
        Command::Double { triple } => cmd_double(&cx, out, triple)?,
        Command::Invariants { algebra, triple } => cmd_invariants(&cx, out, algebra.as_deref(), triple.as_deref())?,
        Command::VerifyIso { cert: Some(id), .. } => cmd_verify_cert(&cx, out, id)?,
        Command::VerifyIso { from: Some(f), to: Some(t), split, .. } => return cmd_search(&cx, out, f, t, *split),
        Command::VerifyIso { .. } => return Err(Error::UnknownName("give --cert or --from and --to".into())),
        Command::SolveR { algebra, triple } => cmd_solve_r(&cx, out, algebra.as_deref(), triple.as_deref())?,
        Command::Enumerate { seed, grid } => cmd_enumerate(&cx, out, seed, grid.as_deref())?,
        Command::Classify { dims } => cmd_classify(&cx, out, *dims)?,
        Command::Report { target } => cmd_report(&cx, out, target)?,
    }
    Ok(0)
}

/// 2 parse, 3 constraint, 4 budget, 5 unknown name or id, 1 anything else.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::ConstraintViolation(_) | Error::InconsistentRadical(_) | Error::DivisionByZero => 3,
        Error::BudgetExceeded(_) => 4,
        Error::UnknownName(_) | Error::UnknownId(_) => 5,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out::new(cli.global.format);
    let code = match run(&cli, &mut out) {
        Ok(c) if c != 0 => c,
        Ok(_) => u8::from(!out.pass),
        Err(e) => {
            print!("{}", out.buf);
            let code = exit_code(&e);
            if cli.global.format == Format::Machine {
                println!("error={}", clean(&e.to_string()));
            }
            eprintln!("superdouble: {e}");
            return ExitCode::from(code);
        }
    };
    print!("{}", out.buf);
    ExitCode::from(code)
}
