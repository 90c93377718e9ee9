mod report;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use superdirac::clifford::clifford_suite;
use superdirac::dirac::{
    casselman_osborne_check, dirac_cohomology, dirac_constant, dirac_constant_trace, dirac_index, euler_check, h_euler,
    non_triviality, verify_identities, Checks, Dirac, DiracReport, Strategy,
};
use superdirac::kostant::{kostant_cohomology, verify_embedding, verify_identification, Kostant};
use superdirac::parabolic::{parabolic, ParabolicData};
use superdirac::qlinalg::{parse_rat, rat, rat_str, Rat};
use superdirac::rootdata::{build_gl, parse_weight, RootDatum, Weight};
use superdirac::superalg::{invariant_form, structure_suite, AlgElem};
use superdirac::supermodules::{kac_module, module_parity_label, simple_module, WeightModule};
use superdirac::Error;

use report::*;

#[derive(Parser)]
#[command(name = "superdirac", version, about = "Cubic Dirac operators for gl(m|n) in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Root data of gl(m|n).
    Algebra {
        #[command(subcommand)]
        what: AlgebraCmd,
    },
    /// Parabolic data for a functional.
    Parabolic(Setup),
    /// A finite-dimensional module and its character.
    Module(Setup),
    /// Dirac cohomology.
    Dirac(DiracArgs),
    /// Kostant (co)homology of u and ū.
    Kostant(KostantArgs),
    /// Index of D against the Euler characteristic of H_D.
    Index(IndexArgs),
    /// Identity suites over a matrix of algebras and parabolics.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum AlgebraCmd {
    Info { m: usize, n: usize },
}

#[derive(Args, Clone)]
struct Setup {
    /// "m,n"
    #[arg(long, default_value = "1,1")]
    algebra: String,
    /// Values on e_1..e_m, d_1..d_n, e.g. "1,1,0"; defaults to the Borel functional.
    #[arg(long, allow_hyphen_values = true)]
    functional: Option<String>,
    /// Highest weight, e.g. "2e1+1e2-1d1" or "[2,1|0]".
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    hw: String,
    #[arg(long, value_enum, default_value_t = Kind::Simple)]
    kind: Kind,
    /// Comma-separated checks, or "all".
    #[arg(long)]
    checks: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Kac,
    Simple,
    Trivial,
}

#[derive(Args)]
struct DiracArgs {
    #[command(flatten)]
    setup: Setup,
    /// candidates | window:N
    #[arg(long)]
    strategy: Option<String>,
    /// Degree window; selects the window strategy when --strategy is absent.
    #[arg(long)]
    window: Option<u32>,
}

#[derive(Args)]
struct KostantArgs {
    #[command(flatten)]
    setup: Setup,
    #[arg(long, default_value_t = 3)]
    max_degree: usize,
    /// Window for the identification and embedding checks.
    #[arg(long, default_value_t = 3)]
    window: u32,
}

#[derive(Args)]
struct IndexArgs {
    #[command(flatten)]
    setup: Setup,
    #[arg(long, default_value_t = 6)]
    window: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// square, invariance, nilpotency, trace, structure, clifford, kostant, identification, embedding
    #[arg(long, default_value = "square,invariance,nilpotency")]
    suite: String,
    /// gl11, gl21, gl12, gl22
    #[arg(long, default_value = "gl11,gl21,gl12,gl22")]
    matrix: String,
    #[arg(long, default_value_t = 3)]
    window: u32,
}

/// Outcome of a command: text, a serializable report, and whether every check passed.
struct Outcome {
    text: String,
    json: String,
    pass: bool,
}

fn outcome<T: Serialize>(text: String, report: &T, pass: bool) -> Outcome {
    let json = serde_json::to_string_pretty(report).expect("reports serialize");
    Outcome { text, json, pass }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Algebra { what: AlgebraCmd::Info { m, n } } => cmd_algebra(*m, *n),
        Cmd::Parabolic(s) => cmd_parabolic(s),
        Cmd::Module(s) => cmd_module(s),
        Cmd::Dirac(a) => cmd_dirac(a),
        Cmd::Kostant(a) => cmd_kostant(a),
        Cmd::Index(a) => cmd_index(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match res {
        Ok(o) => {
            match cli.format {
                Format::Text => print!("{}", o.text),
                Format::Json => println!("{}", o.json),
            }
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_algebra(s: &str) -> Result<RootDatum, Error> {
    let bad = || Error::Parse(format!("--algebra expects \"m,n\", got {s:?}"));
    let (m, n) = s.split_once(',').ok_or_else(bad)?;
    build_gl(m.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?)
}

fn parse_functional(rd: &RootDatum, s: Option<&str>) -> Result<Vec<Rat>, Error> {
    let r = rd.rank();
    let Some(s) = s else {
        return Ok((0..r).rev().map(|i| rat(i as i64)).collect());
    };
    let c: Vec<Rat> = s
        .split(',')
        .map(|x| parse_rat(x.trim()).ok_or_else(|| Error::Parse(format!("bad functional entry {x:?}"))))
        .collect::<Result<_, _>>()?;
    if c.len() != r {
        return Err(Error::Parse(format!("functional needs {r} entries, got {}", c.len())));
    }
    Ok(c)
}

fn parse_checks(s: Option<&str>, known: &[&str]) -> Result<Vec<String>, Error> {
    let Some(s) = s else {
        return Ok(Vec::new());
    };
    if s == "all" {
        return Ok(known.iter().map(|x| x.to_string()).collect());
    }
    let out: Vec<String> = s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect();
    if let Some(x) = out.iter().find(|x| !known.contains(&x.as_str())) {
        return Err(Error::Parse(format!("unknown check {x:?}; known: {}", known.join(","))));
    }
    Ok(out)
}

struct Ctx {
    rd: RootDatum,
    pd: ParabolicData,
    module: WeightModule,
    label: String,
}

fn setup(s: &Setup) -> Result<Ctx, Error> {
    let rd = parse_algebra(&s.algebra)?;
    let pd = parabolic(&rd, &parse_functional(&rd, s.functional.as_deref())?)?;
    let (module, label) = build_module(&rd, s)?;
    Ok(Ctx { rd, pd, module, label })
}

fn build_module(rd: &RootDatum, s: &Setup) -> Result<(WeightModule, String), Error> {
    let lam = parse_weight(rd.m, rd.n, &s.hw)?;
    let m = match s.kind {
        Kind::Kac => kac_module(rd, &lam)?,
        Kind::Simple => simple_module(rd, &lam)?,
        Kind::Trivial => {
            if !lam.is_zero() {
                return Err(Error::Parse("the trivial module has highest weight 0".into()));
            }
            WeightModule::trivial(rd)
        }
    };
    let kind = match s.kind {
        Kind::Kac => "kac",
        Kind::Simple => "simple",
        Kind::Trivial => "trivial",
    };
    Ok((m, format!("{kind} {}", lam.display(rd.m))))
}

fn algebra_name(rd: &RootDatum) -> String {
    format!("gl({}|{})", rd.m, rd.n)
}

fn functional_strs(pd: &ParabolicData) -> Vec<String> {
    pd.functional.iter().map(rat_str).collect()
}

fn elem_name(a: usize, b: usize) -> String {
    format!("E{}{}", a + 1, b + 1)
}

fn parity_name(p: usize) -> String {
    if p == 0 { "even" } else { "odd" }.into()
}

fn checks_line(checks: &BTreeMap<String, bool>) -> String {
    if checks.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = checks.iter().map(|(k, v)| format!("{k} {}", if *v { "pass" } else { "FAIL" })).collect();
    format!("checks: {}\n", parts.join(", "))
}

fn cmd_algebra(m: usize, n: usize) -> Result<Outcome, Error> {
    let rd = build_gl(m, n)?;
    let (r0, r1, rho) = rd.rho_parts();
    let positive_roots: Vec<RootEntry> = rd
        .positive_roots()
        .into_iter()
        .map(|(a, b)| {
            let w = rd.root((a, b));
            RootEntry {
                root: w.display(m),
                element: elem_name(a, b),
                parity: parity_name(rd.root_parity((a, b))),
                norm: rat_str(&rd.form(&w, &w)),
            }
        })
        .collect();
    let st = structure_suite(&rd);
    let mut checks = BTreeMap::from([
        ("jacobi".to_string(), st.jacobi),
        ("invariance".to_string(), st.invariance),
        ("supersymmetry".to_string(), st.supersymmetry),
        ("consistency".to_string(), st.consistency),
    ]);
    for (i, ok) in st.root_axioms.iter().enumerate() {
        checks.insert(format!("root_axiom_{}", (b'a' + i as u8) as char), *ok);
    }
    let rep = AlgebraReport {
        algebra: algebra_name(&rd),
        rank: rd.rank(),
        form_diagonal: (0..rd.rank())
            .map(|a| rat_str(&invariant_form(&rd, &AlgElem::e(a, a), &AlgElem::e(a, a))))
            .collect(),
        positive_roots,
        simple_roots: rd.simple_roots().into_iter().map(|g| rd.root(g).display(m)).collect(),
        rho0: r0.display(m),
        rho1: r1.display(m),
        rho: rho.display(m),
        checks,
        conventions: Conventions::new(&["jacobi", "invariance", "supersymmetry", "root_axioms"]),
    };
    let mut t = format!("{}  rank {}\nform on h: diag({})\n", rep.algebra, rep.rank, rep.form_diagonal.join(", "));
    let even = rep.positive_roots.iter().filter(|r| r.parity == "even").count();
    t += &format!("positive roots: {} even, {} odd\n", even, rep.positive_roots.len() - even);
    for r in &rep.positive_roots {
        t += &format!("  {:<5} {:<14} {:<4} (a,a) = {}\n", r.element, r.root, r.parity, r.norm);
    }
    t += &format!("simple roots: {}\n", rep.simple_roots.join(" "));
    t += &format!("rho0 = {}\nrho1 = {}\nrho = {}\n", rep.rho0, rep.rho1, rep.rho);
    t += &checks_line(&rep.checks);
    let pass = st.all();
    Ok(outcome(t, &rep, pass))
}

fn cmd_parabolic(s: &Setup) -> Result<Outcome, Error> {
    let rd = parse_algebra(&s.algebra)?;
    let pd = parabolic(&rd, &parse_functional(&rd, s.functional.as_deref())?)?;
    let wanted = parse_checks(s.checks.as_deref(), &["clifford"])?;
    let mut checks = BTreeMap::new();
    if !wanted.is_empty() {
        let c = clifford_suite(&pd);
        checks.insert("relations".into(), c.relations);
        if let Some(q) = c.quantization {
            checks.insert("quantization".into(), q);
        }
        if let Some(q) = c.moment {
            checks.insert("moment".into(), q);
        }
        checks.insert("nu_homomorphism".into(), c.nu_homomorphism);
        checks.insert("adjoint_match".into(), c.adjoint_match);
        checks.insert("oscillator".into(), c.oscillator);
    }
    let m = rd.m;
    let u = pd
        .nil_roots
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| NilEntry {
            element: elem_name(a, b),
            dual: format!("{}/{}", elem_name(b, a), if rd.parity(b) == 0 { "1" } else { "-1" }),
            weight: pd.u_weight[i].display(m),
            parity: parity_name(pd.u_parity[i]),
        })
        .collect();
    let rep = ParabolicReport {
        algebra: algebra_name(&rd),
        functional: functional_strs(&pd),
        kind: pd.kind().into(),
        compatible: pd.compatible,
        levi_roots: pd.levi_positive().into_iter().map(|g| rd.root(g).display(m)).collect(),
        u,
        s0: pd.s0,
        s1: pd.s1,
        rho_l: pd.rho_l.display(m),
        rho_u: pd.rho_u.display(m),
        constant: rat_str(&dirac_constant(&pd)),
        constant_trace: rat_str(&dirac_constant_trace(&pd)?),
        checks,
        conventions: Conventions::new(&["clifford relations", "quantization", "moment map", "nu_* homomorphism"]),
    };
    let mut t = format!(
        "{} functional ({}) : {}{}\n",
        rep.algebra,
        rep.functional.join(","),
        rep.kind,
        if rep.compatible { "" } else { ", not compatible with the distinguished Borel" }
    );
    t += &format!("positive Levi roots: {}\n", if rep.levi_roots.is_empty() { "none".into() } else { rep.levi_roots.join(" ") });
    t += &format!("u: dim {} ({} even, {} odd)\n", rep.s0 + rep.s1, rep.s0, rep.s1);
    for e in &rep.u {
        t += &format!("  {:<5} {:<14} {:<4} dual {}\n", e.element, e.weight, e.parity, e.dual);
    }
    t += &format!("rho_l = {}\nrho_u = {}\n", rep.rho_l, rep.rho_u);
    t += &format!("c = (rho,rho) - (rho_l,rho_l) = {} (trace formula {})\n", rep.constant, rep.constant_trace);
    t += &checks_line(&rep.checks);
    let pass = rep.checks.values().all(|&x| x) && rep.constant == rep.constant_trace;
    Ok(outcome(t, &rep, pass))
}

fn cmd_module(s: &Setup) -> Result<Outcome, Error> {
    let rd = parse_algebra(&s.algebra)?;
    let (module, label) = build_module(&rd, s)?;
    let wanted = parse_checks(s.checks.as_deref(), &["representation"])?;
    let mut checks = BTreeMap::new();
    if !wanted.is_empty() {
        checks.insert("representation".to_string(), module.verify_representation().is_ok());
    }
    let ch = module.character();
    let character: Vec<CharEntry> = ch
        .0
        .iter()
        .map(|(w, (e, o))| CharEntry { weight: w.display(rd.m), even: *e, odd: *o })
        .collect();
    let even_dim = module.parity.iter().filter(|&&p| p == 0).count();
    let rep = ModuleReport {
        algebra: algebra_name(&rd),
        module: label,
        highest_weight: module.highest_weight.as_ref().map(|w| w.display(rd.m)),
        typical: module.highest_weight.as_ref().map(|w| rd.is_typical(w)),
        dim: module.dim(),
        even_dim,
        odd_dim: module.dim() - even_dim,
        character,
        checks,
        conventions: Conventions::new(&["representation"]),
    };
    let mut t = format!(
        "{} module {}: dim {} ({} even, {} odd)",
        rep.algebra, rep.module, rep.dim, rep.even_dim, rep.odd_dim
    );
    if let Some(ty) = rep.typical {
        t += if ty { ", typical\n" } else { ", atypical\n" };
    } else {
        t += "\n";
    }
    for c in &rep.character {
        t += &format!("  {:<16} even {} odd {}\n", c.weight, c.even, c.odd);
    }
    t += &checks_line(&rep.checks);
    let pass = rep.checks.values().all(|&x| x);
    Ok(outcome(t, &rep, pass))
}

const DIRAC_CHECKS: [&str; 9] = [
    "square",
    "invariance",
    "nilpotency",
    "euler",
    "non_triviality",
    "casselman_osborne",
    "multiplicity_one",
    "prediction",
    "delta_eigen",
];

fn index_entries(m: usize, ix: &BTreeMap<Weight, i64>) -> Vec<IndexEntry> {
    ix.iter().filter(|(_, v)| **v != 0).map(|(w, v)| IndexEntry { weight: w.display(m), value: *v }).collect()
}

fn dirac_checks(
    d: &Dirac,
    rep: &DiracReport,
    wanted: &[String],
    window: u32,
) -> Result<(BTreeMap<String, bool>, Option<String>), Error> {
    let mut checks = BTreeMap::new();
    let mut first = None;
    let want = |x: &str| wanted.iter().any(|w| w == x);
    if want("square") || want("invariance") || want("nilpotency") {
        let c = Checks { square: want("square"), invariance: want("invariance"), nilpotency: want("nilpotency") };
        let ir = verify_identities(d, window, c)?;
        for (k, on, v) in [("square", c.square, ir.square), ("invariance", c.invariance, ir.invariance), ("nilpotency", c.nilpotency, ir.nilpotency)] {
            if on {
                checks.insert(k.to_string(), v);
            }
        }
        first = ir.first_failure;
    }
    let lam = d.highest_weight().cloned();
    let nus: Vec<Weight> = rep.constituents.iter().map(|c| c.weight.clone()).collect();
    for w in wanted {
        let v = match w.as_str() {
            "euler" => euler_check(rep),
            "non_triviality" => non_triviality(d)?,
            "casselman_osborne" => lam.as_ref().is_some_and(|l| casselman_osborne_check(&d.pd, l, &nus)),
            "multiplicity_one" => rep.multiplicity_one,
            "prediction" => rep.matches_prediction,
            "delta_eigen" => rep.delta_eigen_zero,
            _ => continue,
        };
        if !v && first.is_none() {
            first = Some(format!("{w} fails"));
        }
        checks.insert(w.clone(), v);
    }
    Ok((checks, first))
}

fn cmd_dirac(a: &DiracArgs) -> Result<Outcome, Error> {
    let cx = setup(&a.setup)?;
    let wanted = parse_checks(a.setup.checks.as_deref(), &DIRAC_CHECKS)?;
    let strategy: Strategy = match (&a.strategy, a.window) {
        (Some(s), _) => s.parse()?,
        (None, Some(n)) => Strategy::Window(n),
        (None, None) => Strategy::Candidates,
    };
    if strategy == Strategy::Candidates {
        if let Some(l) = cx.module.highest_weight.as_ref().filter(|l| !cx.rd.is_typical(l)) {
            return Err(Error::Precondition(format!(
                "{} is atypical, candidate weights are not enough; pass --window N",
                l.display(cx.rd.m)
            )));
        }
    }
    let d = Dirac::new(&cx.module, &cx.pd)?;
    let rep = dirac_cohomology(&d, &strategy)?;
    let (checks, first_failure) = dirac_checks(&d, &rep, &wanted, a.window.unwrap_or(4))?;
    let m = cx.rd.m;
    let index = rep.blocks.iter().map(|b| (b.weight.clone(), b.index)).collect();
    let out = DiracCliReport {
        algebra: algebra_name(&cx.rd),
        functional: functional_strs(&cx.pd),
        module: cx.label,
        strategy: match strategy {
            Strategy::Candidates => "candidates".into(),
            Strategy::Window(n) => format!("window:{n}"),
        },
        h_dim: rep.h_dim(),
        blocks: rep
            .blocks
            .iter()
            .map(|b| BlockEntry {
                weight: b.weight.display(m),
                dim: b.dim,
                dim_ker: b.dim_ker,
                dim_im: b.dim - b.dim_ker,
                dim_ker_cap_im: b.dim_im_cap_ker,
                h_plus: b.h_plus,
                h_minus: b.h_minus,
            })
            .collect(),
        l_decomposition: rep
            .constituents
            .iter()
            .map(|c| Constituent {
                weight: c.weight.display(m),
                multiplicity: c.multiplicity,
                parity: module_parity_label(c.parity).into(),
                atypical: c.atypical_flag,
            })
            .collect(),
        predicted: rep.predicted.iter().map(|w| w.display(m)).collect(),
        matches_prediction: rep.matches_prediction,
        discrepancy: rep.discrepancy,
        d_is_zero: rep.d_is_zero,
        boundary_clean: rep.boundary_clean,
        index: index_entries(m, &index),
        checks,
        first_failure,
        conventions: Conventions::new(&["square", "invariance", "nilpotency", "euler"]),
    };
    let mut t = format!(
        "{} functional ({}) module {} strategy {}\n",
        out.algebra,
        out.functional.join(","),
        out.module,
        out.strategy
    );
    let supp: Vec<String> = rep
        .blocks
        .iter()
        .filter(|b| b.h_plus + b.h_minus > 0)
        .map(|b| format!("{} (+{} -{})", b.weight.display(m), b.h_plus, b.h_minus))
        .collect();
    t += &format!("H_D dim {}", out.h_dim);
    if !supp.is_empty() {
        t += &format!(" at {}", supp.join(", "));
    }
    t += "\n";
    t += &format!("blocks computed: {}\n", out.blocks.len());
    for c in &out.l_decomposition {
        t += &format!(
            "  L_l({}) x{} {}{}\n",
            c.weight,
            c.multiplicity,
            c.parity,
            if c.atypical { " (l-atypical)" } else { "" }
        );
    }
    t += &format!("predicted: {} (match {})\n", out.predicted.join(" "), out.matches_prediction);
    if out.discrepancy {
        t += "atypical module: computed H_D differs from the typical prediction\n";
    }
    if out.d_is_zero && out.strategy != "candidates" {
        t += "D vanishes on every computed block\n";
    }
    if out.boundary_clean == Some(false) {
        t += "warning: cohomology on the outermost window layer; enlarge the window\n";
    }
    t += &checks_line(&out.checks);
    if let Some(f) = &out.first_failure {
        t += &format!("first failure: {f}\n");
    }
    let pass = out.checks.values().all(|&x| x);
    Ok(outcome(t, &out, pass))
}

const KOSTANT_CHECKS: [&str; 3] = ["identification", "embedding", "equivariance"];

fn cmd_kostant(a: &KostantArgs) -> Result<Outcome, Error> {
    let cx = setup(&a.setup)?;
    let wanted = parse_checks(a.setup.checks.as_deref(), &KOSTANT_CHECKS)?;
    let k = Kostant::new(&cx.module, &cx.pd)?;
    let kr = kostant_cohomology(&k, a.max_degree)?;
    let m = cx.rd.m;
    let mut checks = BTreeMap::from([
        ("square_zero".to_string(), kr.square_zero),
        ("duality".to_string(), kr.duality),
        ("euler_poincare".to_string(), kr.euler_poincare),
    ]);
    if !wanted.is_empty() {
        let d = Dirac::new(&cx.module, &cx.pd)?;
        for w in &wanted {
            let v = match w.as_str() {
                "identification" => verify_identification(&d, &k, a.window)?.all(),
                "embedding" => verify_embedding(&d, &k, a.window)?.all(),
                _ => {
                    let ws: Vec<Weight> = k.weights_up_to(a.window).into_keys().collect();
                    k.verify_l_equivariance(&ws)?
                }
            };
            checks.insert(w.clone(), v);
        }
    }
    let degrees: Vec<KostantDegree> = kr
        .degrees
        .iter()
        .map(|dg| KostantDegree {
            p: dg.p,
            dim_chain: dg.weights.iter().map(|w| w.dim_chain).sum(),
            dim_h: dg.weights.iter().map(|w| w.dim_h).sum(),
            weights: dg
                .weights
                .iter()
                .map(|w| KostantWeight {
                    weight: w.weight.display(m),
                    dim_chain: w.dim_chain,
                    dim_h: w.dim_h,
                    dim_h_homology: w.dim_h_homology,
                })
                .collect(),
            l_decomposition: dg.l_decomposition.as_ref().map(|v| v.iter().map(|(w, c)| (w.display(m), *c)).collect()),
        })
        .collect();
    let rep = KostantCliReport {
        algebra: algebra_name(&cx.rd),
        functional: functional_strs(&cx.pd),
        module: cx.label,
        max_degree: a.max_degree,
        degrees,
        checks,
        conventions: Conventions::new(&["square_zero", "duality", "euler_poincare", "identification"]),
    };
    let mut t = format!("{} functional ({}) module {}\n", rep.algebra, rep.functional.join(","), rep.module);
    let dims: Vec<String> = rep.degrees.iter().map(|d| d.dim_h.to_string()).collect();
    t += &format!("dim H^p(u, M), p = 0..{}: {}\n", rep.max_degree, dims.join(","));
    for dg in &rep.degrees {
        t += &format!("degree {}: dim C^p {}, dim H^p {}\n", dg.p, dg.dim_chain, dg.dim_h);
        for w in dg.weights.iter().filter(|w| w.dim_h > 0) {
            t += &format!("  {:<16} H^p {}  H_p {}\n", w.weight, w.dim_h, w.dim_h_homology);
        }
        if let Some(l) = &dg.l_decomposition {
            let parts: Vec<String> = l.iter().map(|(w, c)| format!("{c} L_l({w})")).collect();
            if !parts.is_empty() {
                t += &format!("  as l-module: {}\n", parts.join(" + "));
            }
        }
    }
    t += &checks_line(&rep.checks);
    let pass = rep.checks.values().all(|&x| x);
    Ok(outcome(t, &rep, pass))
}

fn cmd_index(a: &IndexArgs) -> Result<Outcome, Error> {
    let cx = setup(&a.setup)?;
    let d = Dirac::new(&cx.module, &cx.pd)?;
    let ix = dirac_index(&d, a.window)?;
    let rep = dirac_cohomology(&d, &Strategy::Window(a.window))?;
    let he = h_euler(&rep);
    let m = cx.rd.m;
    let out = IndexReport {
        algebra: algebra_name(&cx.rd),
        functional: functional_strs(&cx.pd),
        module: cx.label,
        window: a.window,
        index: index_entries(m, &ix),
        h_euler: index_entries(m, &he),
        matches: ix == he && euler_check(&rep),
        conventions: Conventions::new(&["euler"]),
    };
    let mut t = format!(
        "{} functional ({}) module {} window {}\n",
        out.algebra,
        out.functional.join(","),
        out.module,
        out.window
    );
    let show = |v: &[IndexEntry]| -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter().map(|e| format!("{}*e^{}", e.value, e.weight)).collect::<Vec<_>>().join(" + ")
    };
    t += &format!("index:            {}\n", show(&out.index));
    t += &format!("Euler char of H_D: {}\n", show(&out.h_euler));
    t += &format!("match {}\n", out.matches);
    let pass = out.matches;
    Ok(outcome(t, &out, pass))
}

const SUITES: [&str; 9] =
    ["square", "invariance", "nilpotency", "trace", "structure", "clifford", "kostant", "identification", "embedding"];

/// The test matrix: parabolics and a typical highest weight per algebra.
fn matrix_entry(name: &str) -> Result<(usize, usize, Vec<Vec<i64>>, Vec<i64>), Error> {
    Ok(match name {
        "gl11" => (1, 1, vec![vec![1, 0], vec![0, 0]], vec![1, 0]),
        "gl21" => (2, 1, vec![vec![2, 1, 0], vec![1, 1, 0], vec![1, 0, 0]], vec![2, 1, 0]),
        "gl12" => (1, 2, vec![vec![2, 1, 0], vec![1, 0, 0], vec![1, 1, 0]], vec![2, 0, 0]),
        "gl22" => (2, 2, vec![vec![4, 3, 2, 1], vec![1, 1, 0, 0], vec![1, 0, 0, -1]], vec![2, 2, 0, 0]),
        x => return Err(Error::Parse(format!("unknown matrix entry {x:?}; known: gl11,gl21,gl12,gl22"))),
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, Error> {
    let suites = parse_checks(Some(&a.suite), &SUITES)?;
    let want = |x: &str| suites.iter().any(|s| s == x);
    let mut runs = Vec::new();
    for name in a.matrix.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (m, n, cs, lam) = matrix_entry(name)?;
        let rd = build_gl(m, n)?;
        let lam = Weight::from_i64(&lam);
        let module = kac_module(&rd, &lam)?;
        for c in cs {
            let pd = parabolic(&rd, &c.iter().map(|&x| rat(x)).collect::<Vec<_>>())?;
            let mut results = BTreeMap::new();
            let mut first_failure = None;
            if want("structure") {
                results.insert("structure".to_string(), structure_suite(&rd).all());
            }
            if want("clifford") {
                results.insert("clifford".to_string(), clifford_suite(&pd).all());
            }
            if want("trace") {
                results.insert("trace".to_string(), dirac_constant(&pd) == dirac_constant_trace(&pd)?);
            }
            let d = Dirac::new(&module, &pd)?;
            if want("square") || want("invariance") || want("nilpotency") {
                let ch = Checks { square: want("square"), invariance: want("invariance"), nilpotency: want("nilpotency") };
                let ir = verify_identities(&d, a.window, ch)?;
                for (k, on, v) in [("square", ch.square, ir.square), ("invariance", ch.invariance, ir.invariance), ("nilpotency", ch.nilpotency, ir.nilpotency)] {
                    if on {
                        results.insert(k.to_string(), v);
                    }
                }
                first_failure = ir.first_failure;
            }
            if want("kostant") || want("identification") || want("embedding") {
                let k = Kostant::new(&module, &pd)?;
                if want("kostant") {
                    let kr = kostant_cohomology(&k, 3)?;
                    results.insert("kostant".to_string(), kr.square_zero && kr.duality && kr.euler_poincare);
                }
                if want("identification") {
                    let r = verify_identification(&d, &k, a.window)?;
                    let ok = r.all();
                    if !ok && first_failure.is_none() {
                        first_failure = r.first_failure.map(|w| format!("identification fails at weight {}", w.display(m)));
                    }
                    results.insert("identification".to_string(), ok);
                }
                if want("embedding") {
                    results.insert("embedding".to_string(), verify_embedding(&d, &k, a.window)?.all());
                }
            }
            runs.push(VerifyRun {
                algebra: algebra_name(&rd),
                functional: functional_strs(&pd),
                module: format!("kac {}", lam.display(m)),
                results,
                first_failure,
            });
        }
    }
    let all_pass = runs.iter().all(|r| r.results.values().all(|&x| x));
    let rep = VerifyReport {
        suites: suites.clone(),
        window: a.window,
        runs,
        all_pass,
        conventions: Conventions::new(&suites.iter().map(String::as_str).collect::<Vec<_>>()),
    };
    let mut t = format!("suites {} at window {}\n", rep.suites.join(","), rep.window);
    for r in &rep.runs {
        let bad: Vec<&String> = r.results.iter().filter(|(_, v)| !**v).map(|(k, _)| k).collect();
        t += &format!(
            "{:<8} ({:<10}) {:<18} {}\n",
            r.algebra,
            r.functional.join(","),
            r.module,
            if bad.is_empty() { "pass".to_string() } else { format!("FAIL {bad:?}") }
        );
        if let Some(f) = &r.first_failure {
            t += &format!("  first failure: {f}\n");
        }
    }
    t += &format!("{}\n", if rep.all_pass { "all pass" } else { "failures present" });
    let pass = rep.all_pass;
    Ok(outcome(t, &rep, pass))
}
