//! Command-line front end.
//!
//! Exit status is 0 on success, 1 when a mathematical check fails and 2 on
//! input errors. JSON output keys are stable; human output is not meant to be
//! parsed.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{format_combination, BoundQuiverAlgebra, DEFAULT_LENGTH_CAP};
use crate::bimod::{arrow_ideal_bimodule, Bimodule};
use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::extensions::{poset, verify_theorem, ExtensionPoset, RelationExtension, TheoremReport};
use crate::hochschild::{bar_h, coboundary, cup_product, derivation_to_cochain, h0, h1, Cochain, CoboundaryTester};
use crate::qdsl::{parse, PresentationFile};
use crate::repmod::{ext2_dimension, gldim_at_most};

#[derive(Parser, Debug)]
#[command(name = "relext", version, about = "Hochschild cohomology of bound quiver algebras and their relation extensions")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    /// Override the field of every presentation, e.g. `Q` or `F7`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(clap::Args, Debug)]
pub struct ExtArgs {
    /// Name of the base algebra.
    #[arg(long, default_value = "C")]
    pub base: String,
    /// Name of the relation extension.
    #[arg(long, default_value = "Ctilde")]
    pub tilde: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Role {
    #[value(name = "C")]
    C,
    #[value(name = "B")]
    B,
    #[value(name = "Ctilde")]
    Ctilde,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModuleRole {
    Regular,
    #[value(name = "Eprime")]
    Eprime,
    #[value(name = "Esec")]
    Esec,
    #[value(name = "E")]
    E,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension, triangularity and global dimension of one algebra.
    Info { file: String, algebra: String },
    /// Hochschild cohomology HH^n with representatives.
    Hh {
        file: String,
        algebra: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
        degree: u8,
        /// Recompute with the bar complex and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// H^n(X, M) for X among C, B, Ctilde and M among the relation bimodules.
    Hcoh {
        file: String,
        #[arg(value_enum)]
        over: Role,
        #[arg(value_enum)]
        module: ModuleRole,
        #[command(flatten)]
        ext: ExtArgs,
        /// New arrows generating E'.
        #[arg(long, value_delimiter = ',')]
        split: Vec<String>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
        degree: u8,
        #[arg(long)]
        oracle: bool,
    },
    /// Check the four exact sequences for one partial extension.
    Verify {
        file: String,
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long, value_delimiter = ',')]
        split: Vec<String>,
        #[arg(long)]
        oracle: bool,
    },
    /// The poset of all partial relation extensions.
    Poset {
        file: String,
        #[command(flatten)]
        ext: ExtArgs,
    },
    /// dim Ext^2(DA, A) for a triangular algebra of global dimension at most 2.
    Ext2 { file: String, algebra: String },
    /// Cup products of degree-1 classes, checked for graded commutativity.
    Cup { file: String, algebra: String },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.text.as_bytes());
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

struct Outcome {
    text: String,
    ok: bool,
}

fn emit<T: Serialize>(format: Format, value: &T, human: impl FnOnce(&T) -> String, ok: bool) -> Outcome {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Human => human(value),
    };
    Outcome { text, ok }
}

fn read(path: &str) -> Result<PresentationFile> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_string(), source })?;
    parse(&text).map_err(|e| Error::Usage(format!("{path}:{e}")))
}

fn field_override(cli: &Cli) -> Result<Option<Field>> {
    cli.field.as_deref().map(str::parse).transpose().map_err(Error::from)
}

fn algebra(file: &PresentationFile, name: &str, field: Option<Field>) -> Result<BoundQuiverAlgebra> {
    let block = file.block(name).ok_or_else(|| Error::Usage(format!("no algebra named `{name}`")))?;
    Ok(BoundQuiverAlgebra::from_block(block, field, DEFAULT_LENGTH_CAP)?)
}

/// `key  value` lines with the values aligned.
fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let field = field_override(cli)?;
    match &cli.command {
        Command::Info { file, algebra: name } => info(cli.format, &read(file)?, name, field),
        Command::Hh { file, algebra: name, degree, oracle } => {
            let a = algebra(&read(file)?, name, field)?;
            let m = Bimodule::regular(&a);
            cohomology(cli.format, &a, &m, name, "regular", *degree as usize, *oracle)
        }
        Command::Hcoh { file, over, module, ext, split, degree, oracle } => {
            let e = RelationExtension::from_file(&read(file)?, &ext.base, &ext.tilde, field)?;
            let (a, m) = coefficient_pair(&e, split, *over, *module)?;
            cohomology(cli.format, &a, &m, &format!("{over:?}"), &format!("{module:?}"), *degree as usize, *oracle)
        }
        Command::Verify { file, ext, split, oracle } => {
            let e = RelationExtension::from_file(&read(file)?, &ext.base, &ext.tilde, field)?;
            let report = verify_theorem(&e, split, *oracle)?;
            let ok = report.passed();
            Ok(emit(cli.format, &report, human_report, ok))
        }
        Command::Poset { file, ext } => {
            let e = RelationExtension::from_file(&read(file)?, &ext.base, &ext.tilde, field)?;
            let p = poset(&e)?;
            let ok = p.passed();
            Ok(emit(cli.format, &p, human_poset, ok))
        }
        Command::Ext2 { file, algebra: name } => {
            let a = algebra(&read(file)?, name, field)?;
            #[derive(Serialize)]
            struct Ext2 {
                algebra: String,
                field: String,
                ext2: usize,
            }
            let value = Ext2 { algebra: name.clone(), field: a.field().to_string(), ext2: ext2_dimension(&a)? };
            Ok(emit(cli.format, &value, |v| table(&[("algebra", v.algebra.clone()), ("field", v.field.clone()), ("dim Ext^2(DA,A)", v.ext2.to_string())]), true))
        }
        Command::Cup { file, algebra: name } => cup(cli.format, &algebra(&read(file)?, name, field)?, name),
    }
}

fn info(format: Format, file: &PresentationFile, name: &str, field: Option<Field>) -> Result<Outcome> {
    let a = algebra(file, name, field)?;
    #[derive(Serialize)]
    struct Info {
        algebra: String,
        field: String,
        dim: usize,
        vertices: usize,
        arrows: usize,
        triangular: bool,
        gldim_at_most_2: bool,
        center_dim: usize,
    }
    let triangular = a.is_triangular();
    let value = Info {
        algebra: name.to_string(),
        field: a.field().to_string(),
        dim: a.dim(),
        vertices: a.quiver().vertex_count(),
        arrows: a.quiver().arrows().len(),
        triangular,
        // Projective resolutions of simples terminate only for acyclic quivers here.
        gldim_at_most_2: triangular && gldim_at_most(&a, 2),
        center_dim: a.center().dim(),
    };
    Ok(emit(
        format,
        &value,
        |v| {
            table(&[
                ("algebra", v.algebra.clone()),
                ("field", v.field.clone()),
                ("dim", v.dim.to_string()),
                ("vertices", v.vertices.to_string()),
                ("arrows", v.arrows.to_string()),
                ("triangular", v.triangular.to_string()),
                ("gldim<=2", v.gldim_at_most_2.to_string()),
                ("dim Z", v.center_dim.to_string()),
            ])
        },
        true,
    ))
}

fn coefficient_pair(e: &RelationExtension, split: &[String], over: Role, module: ModuleRole) -> Result<(BoundQuiverAlgebra, Bimodule)> {
    let sp = e.split(split)?;
    let rest: Vec<&str> = e.new_arrows.iter().map(String::as_str).filter(|n| !sp.new_arrows.iter().any(|s| s == n)).collect();
    let (c, b, ct) = (&sp.base, &sp.extension, &e.tilde);
    let a = match over {
        Role::C => c,
        Role::B => b,
        Role::Ctilde => ct,
    };
    let m = match (over, module) {
        (_, ModuleRole::Regular) => Bimodule::regular(a),
        (Role::C | Role::B, ModuleRole::Eprime) => arrow_ideal_bimodule(b, a, &sp.new_arrows)?,
        (Role::Ctilde, ModuleRole::Eprime) => return Err(Error::Usage("E' is not a Ctilde-bimodule".into())),
        (_, ModuleRole::Esec) => arrow_ideal_bimodule(ct, a, &rest)?,
        (_, ModuleRole::E) => arrow_ideal_bimodule(ct, a, &e.new_arrows)?,
    };
    Ok((a.clone(), m))
}

fn cohomology(format: Format, a: &BoundQuiverAlgebra, m: &Bimodule, over: &str, module: &str, degree: usize, oracle: bool) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Coh {
        algebra: String,
        module: String,
        field: String,
        degree: usize,
        dim: usize,
        representatives: Vec<Vec<String>>,
        bar_dim: Option<usize>,
        methods_agree: Option<bool>,
    }
    let (dim, representatives) = if degree == 0 {
        let h = h0(a, m);
        let reps = h.representatives().iter().map(|v| vec![format_combination(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (c.clone(), m.labels()[k].clone())))]).collect();
        (h.dim(), reps)
    } else {
        let h = h1(a, m);
        let reps = h.representatives().iter().map(|d| d.describe(a, m, &h.slots)).collect();
        (h.dim(), reps)
    };
    let bar_dim = if oracle { Some(bar_h(a, m, degree)?.dim()) } else { None };
    let methods_agree = bar_dim.map(|b| b == dim);
    let value = Coh { algebra: over.to_string(), module: module.to_string(), field: a.field().to_string(), degree, dim, representatives, bar_dim, methods_agree };
    let ok = methods_agree != Some(false);
    Ok(emit(
        format,
        &value,
        |v| {
            let target = if v.module == "regular" { format!("HH^{}", v.degree) } else { format!("H^{}({},{})", v.degree, v.algebra, v.module) };
            let mut s = format!("dim {target} = {}\n", v.dim);
            for (i, r) in v.representatives.iter().enumerate() {
                let body = if r.is_empty() { "0".to_string() } else { r.join(", ") };
                s.push_str(&format!("  [{}] {body}\n", i + 1));
            }
            if let Some(b) = v.bar_dim {
                s.push_str(&format!("bar complex: {b} ({})\n", if v.methods_agree == Some(true) { "agrees" } else { "DISAGREES" }));
            }
            s
        },
        ok,
    ))
}

fn cup(format: Format, a: &BoundQuiverAlgebra, name: &str) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Pair {
        f: usize,
        g: usize,
        product_is_cocycle: bool,
        commutator_is_coboundary: bool,
        graded_commutator_is_coboundary: bool,
    }
    #[derive(Serialize)]
    struct Cup {
        algebra: String,
        field: String,
        hh1: usize,
        unit_law: bool,
        pairs: Vec<Pair>,
    }
    let m = Bimodule::regular(a);
    let h = h1(a, &m);
    let tester = CoboundaryTester::new(a, &m, 2)?;
    let fs: Vec<Cochain> = h.representatives().iter().map(|d| derivation_to_cochain(a, &m, &h.slots, &d.values)).collect();
    let one = Cochain::new(0, a.dim(), a.dim(), crate::exactla::SparseVec::from_dense(&a.one_vec()));
    let mut unit_law = true;
    let mut pairs = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        unit_law &= cup_product(a, &one, f)? == *f && cup_product(a, f, &one)? == *f;
        for (j, g) in fs.iter().enumerate() {
            let fg = cup_product(a, f, g)?;
            let gf = cup_product(a, g, f)?;
            pairs.push(Pair {
                f: i + 1,
                g: j + 1,
                product_is_cocycle: coboundary(a, &m, &fg).is_zero(),
                commutator_is_coboundary: tester.is_coboundary(&fg.sub(&gf)),
                graded_commutator_is_coboundary: tester.is_coboundary(&fg.add(&gf)),
            });
        }
    }
    let ok = unit_law && pairs.iter().all(|p| p.product_is_cocycle && p.commutator_is_coboundary && p.graded_commutator_is_coboundary);
    let value = Cup { algebra: name.to_string(), field: a.field().to_string(), hh1: h.dim(), unit_law, pairs };
    Ok(emit(
        format,
        &value,
        |v| {
            let mut s = table(&[("algebra", v.algebra.clone()), ("field", v.field.clone()), ("dim HH^1", v.hh1.to_string()), ("unit law", v.unit_law.to_string())]);
            s.push_str("f  g  cocycle  f*g-g*f exact  f*g+g*f exact\n");
            for p in &v.pairs {
                s.push_str(&format!("{:<2} {:<2} {:<8} {:<14} {}\n", p.f, p.g, p.product_is_cocycle, p.commutator_is_coboundary, p.graded_commutator_is_coboundary));
            }
            s
        },
        ok,
    ))
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn human_report(r: &TheoremReport) -> String {
    let list = |v: &[String]| if v.is_empty() { "-".to_string() } else { v.join(",") };
    let mut s = table(&[
        ("field", r.field.clone()),
        ("base", r.base.clone()),
        ("tilde", r.tilde.clone()),
        ("split", list(&r.split)),
        ("dims C/B/C~", format!("{}/{}/{}", r.dim_C, r.dim_B, r.dim_Ctilde)),
        ("dim Ext2(DC,C)", r.ext2_C.to_string()),
        ("HH0 C/B/C~", format!("{}/{}/{}", r.hh0_C, r.hh0_B, r.hh0_Ctilde)),
        ("HH1 C/B/C~", format!("{}/{}/{}", r.hh1_C, r.hh1_B, r.hh1_Ctilde)),
        ("H1(B,E')", r.h1_B_Eprime.to_string()),
        ("H1(C,E')", r.h1_C_Eprime.to_string()),
        ("H1(C~,E'')", r.h1_Ctilde_Esec.to_string()),
        ("H1(C~,E)", r.h1_Ctilde_E.to_string()),
        ("E(E'',B)", r.curlyE_Esec_B.to_string()),
        ("E(E',C)", r.curlyE_Eprime_C.to_string()),
    ]);
    let width = r.rows.iter().map(|x| x.name.len()).chain(r.remarks.iter().map(|x| x.name.len())).chain([r.pushout.name.len()]).max().unwrap_or(0);
    s.push('\n');
    for row in &r.rows {
        let rhs: Vec<String> = row.rhs.iter().map(ToString::to_string).collect();
        s.push_str(&format!("{:<width$}  {} = {:<8} surjective={} kernel={}  {}\n", row.name, row.lhs, rhs.join("+"), row.surjective, row.kernel_ok, pass(row.pass)));
    }
    for id in r.remarks.iter().chain([&r.pushout]) {
        let rhs: Vec<String> = id.rhs.iter().map(ToString::to_string).collect();
        s.push_str(&format!("{:<width$}  {} = {:<8}  {}\n", id.name, id.lhs, rhs.join(" + ").replace("+ -", "- "), pass(id.pass)));
    }
    for c in &r.checks {
        s.push_str(&format!("{:<width$}  {}\n", c.name, pass(c.pass)));
    }
    if let Some(o) = &r.oracle {
        s.push_str("\noracle (derivations vs bar complex)\n");
        for e in o {
            s.push_str(&format!("  H{}({},{}) {} {} {}\n", e.degree, e.algebra, e.module, e.derivations, e.bar, pass(e.equal)));
        }
    }
    s
}

fn human_poset(p: &ExtensionPoset) -> String {
    let mut s = String::from("node  arrows        dim  HH1\n");
    for (i, n) in p.nodes.iter().enumerate() {
        let arrows = if n.arrows.is_empty() { "-".to_string() } else { n.arrows.join(",") };
        s.push_str(&format!("{i:<5} {arrows:<13} {:<4} {}\n", n.dim, n.hh1));
    }
    s.push_str("\nedge   monotone  surjective\n");
    for e in &p.edges {
        s.push_str(&format!("{}<{}    {:<9} {}\n", e.lower, e.upper, e.monotone, e.surjective));
    }
    s.push_str(&format!("\ntriangles commute: {}\n", p.triangles_commute));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX2: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/ex2.quiv");

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("relext").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn info_and_bad_input() {
        let (code, out, _) = call(&["--format", "json", "info", EX2, "C"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!((v["dim"].as_u64(), v["triangular"].as_bool(), v["gldim_at_most_2"].as_bool()), (Some(8), Some(true), Some(true)));
        assert_eq!(call(&["info", "/nonexistent.quiv", "C"]).0, 2);
        assert_eq!(call(&["info", EX2, "Nope"]).0, 2);
        assert_eq!(call(&["hh", EX2, "C", "--degree", "2"]).0, 2);
        assert_eq!(call(&["--field", "F4", "info", EX2, "C"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn hh_with_oracle_in_json() {
        let (code, out, _) = call(&["--format", "json", "hh", EX2, "Ctilde", "--oracle"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["dim"], 3);
        assert_eq!(v["methods_agree"], true);
        assert_eq!(v["representatives"].as_array().unwrap().len(), 3);
    }
}
