//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria listed in `EXPECTED_FAILURES` are known to be contradicted by the
//! computation; they still print FAIL, and the target only errors if the set
//! of failures changes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use relext::algebra::{BoundQuiverAlgebra, DEFAULT_LENGTH_CAP};
use relext::bimod::{arrow_ideal_bimodule, curly_e, Bimodule, ProductContext};
use relext::extensions::{check_lift, lift_derivation, poset, verify_theorem, RelationExtension, TheoremReport};
use relext::hochschild::{bar, coboundary, cup_product, derivation_space, derivation_to_cochain, h1, Cochain, CoboundaryTester};
use relext::qdsl::{parse, serialize, PresentationFile};
use relext::repmod::{ext2_dimension, gldim_at_most};

/// `𝓔(E″, B) = 0` in the second example: `ε′α = 0` in `C̃` but `εα ≠ 0` in `B`.
const EXPECTED_FAILURES: &[usize] = &[2];

struct Fixture {
    name: &'static str,
    file: PresentationFile,
    ext: RelationExtension,
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn load(name: &'static str) -> Fixture {
    let text = fs::read_to_string(fixtures_dir().join(name)).expect("fixture");
    let file = parse(&text).expect("fixture parses");
    let ext = RelationExtension::from_file(&file, "C", "Ctilde", None).expect("fixture is a relation extension");
    Fixture { name, file, ext }
}

fn block(f: &Fixture, name: &str) -> BoundQuiverAlgebra {
    BoundQuiverAlgebra::from_block(f.file.block(name).unwrap(), None, DEFAULT_LENGTH_CAP).unwrap()
}

fn hh1(a: &BoundQuiverAlgebra) -> usize {
    h1(a, &Bimodule::regular(a)).dim()
}

fn splittings(f: &Fixture) -> Vec<Vec<String>> {
    let all = f.ext.new_arrows.clone();
    let mut out = vec![Vec::new()];
    out.extend(all.iter().map(|a| vec![a.clone()]));
    out.push(all);
    out
}

fn reports(f: &Fixture, oracle: bool) -> Vec<TheoremReport> {
    splittings(f).iter().map(|s| verify_theorem(&f.ext, s, oracle).expect("splitting is valid")).collect()
}

fn criterion_1(ex1: &Fixture) -> (bool, String) {
    let dims = [hh1(&block(ex1, "C")), hh1(&block(ex1, "B")), hh1(&block(ex1, "Ctilde"))];
    (dims == [0, 1, 2], format!("ex1 dim HH1 C/B/C~ = {dims:?}, expected [0, 1, 2]"))
}

fn criterion_2(ex2: &Fixture) -> (bool, String) {
    let (c, b, ct) = (block(ex2, "C"), block(ex2, "B"), block(ex2, "Ctilde"));
    let dims = [hh1(&c), hh1(&b), hh1(&ct)];
    let e_c = arrow_ideal_bimodule(&b, &c, &["eps"]).unwrap();
    let e_b = arrow_ideal_bimodule(&b, &b, &["eps"]).unwrap();
    let (h1_c, h1_b, end) = (h1(&c, &e_c).dim(), h1(&b, &e_b).dim(), e_c.end_enveloping().dim());
    let es_b = arrow_ideal_bimodule(&ct, &b, &["eps2"]).unwrap();
    let iota = relext::algebra::AlgebraMap::by_names(&b, &ct).unwrap();
    let b_in = Bimodule::inside(&ct, &b, &iota, (0..b.dim()).map(|i| iota.matrix().column(i)).collect()).unwrap();
    let curly = curly_e(&es_b, &b_in, &ProductContext { ambient: &ct }).unwrap().dim();
    let ok = dims == [1, 2, 3] && (h1_c, h1_b, end) == (0, 1, 1) && curly != 0;
    (ok, format!("ex2 dim HH1 C/B/C~ = {dims:?}; H1(C,E') = {h1_c}; H1(B,E') = {h1_b}; End(E') = {end}; dim E(E'',B) = {curly} (expected nonzero)"))
}

fn criterion_3(fx: &[&Fixture], all: &[Vec<TheoremReport>]) -> (bool, String) {
    let mut detail = Vec::new();
    let mut ok = true;
    for (f, rs) in fx.iter().zip(all) {
        for r in rs {
            let rows: Vec<String> = r.rows.iter().map(|x| format!("{}={}", x.lhs, x.rhs.iter().map(ToString::to_string).collect::<Vec<_>>().join("+"))).collect();
            ok &= r.rows.iter().all(|x| x.pass);
            detail.push(format!("{} {{{}}}: {}", f.name, r.split.join(","), rows.join(" ")));
        }
    }
    (ok, detail.join("; "))
}

fn criterion_4(all: &[Vec<TheoremReport>]) -> (bool, String) {
    let rs: Vec<&TheoremReport> = all.iter().flatten().collect();
    let ok = rs.iter().all(|r| r.remarks[..2].iter().all(|i| i.pass));
    (ok, format!("{} splittings, both identities each", rs.len()))
}

fn criterion_5(all: &[Vec<TheoremReport>]) -> (bool, String) {
    let rs: Vec<&TheoremReport> = all.iter().flatten().collect();
    let ex2 = rs.iter().find(|r| r.dim_C == 8 && r.split == ["eps"]).expect("ex2 {eps}");
    let p = &ex2.pushout;
    let ok = rs.iter().all(|r| r.pushout.pass) && p.lhs == 2 && p.rhs == [3, 1, -2];
    (ok, format!("ex2 {{eps}}: {} = {} + {} - {}", p.lhs, p.rhs[0], p.rhs[1], -p.rhs[2]))
}

fn criterion_6(all: &[Vec<TheoremReport>]) -> (bool, String) {
    let rs: Vec<&TheoremReport> = all.iter().flatten().collect();
    let curly = rs.iter().all(|r| r.curlyE_Eprime_C == 0);
    let check = |r: &TheoremReport, name: &str| r.checks.iter().any(|c| c.name == name && c.pass);
    let center = rs.iter().all(|r| check(r, "radical of Z(B) annihilates E''"));
    (curly && center, format!("E(E',C) = 0 everywhere: {curly}; radical of Z(B) kills E'' on both sides: {center}"))
}

fn criterion_7(fx: &[&Fixture]) -> (bool, String) {
    let mut count = 0;
    let mut ok = true;
    for f in fx {
        for s in splittings(f).into_iter().skip(1) {
            let sp = f.ext.split(&s).unwrap();
            let c = &sp.base;
            let (slots, der) = derivation_space(c, &Bimodule::regular(c));
            for d in der.basis() {
                let w = lift_derivation(c, &slots, &sp.ideal, d);
                ok &= w.is_lifted() && check_lift(c, &slots, &sp.ideal, &w);
                count += 1;
            }
        }
    }
    (ok, format!("{count} derivation/bimodule pairs solved and rechecked"))
}

fn criterion_8(fx: &[&Fixture]) -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for (f, want) in fx.iter().zip([[0, 1, 1, 2], [1, 2, 2, 3]]) {
        let p = poset(&f.ext).unwrap();
        ok &= p.passed() && p.profile() == want && p.nodes.len() == 4 && p.edges.len() == 4;
        detail.push(format!("{} profile {:?}", f.name, p.profile()));
    }
    (ok, detail.join("; "))
}

fn criterion_9(fx: &[&Fixture], all: &[Vec<TheoremReport>]) -> (bool, String) {
    let entries: Vec<_> = all.iter().flatten().flat_map(|r| r.oracle.clone().unwrap()).collect();
    let agree = entries.iter().all(|e| e.equal);
    let mut square = true;
    let mut pairs = 0;
    for f in fx {
        let sp = f.ext.split(&["eps"]).unwrap();
        let (c, b, ct) = (&sp.base, &sp.extension, &f.ext.tilde);
        let modules: Vec<(&BoundQuiverAlgebra, Bimodule)> = vec![
            (c, Bimodule::regular(c)),
            (b, Bimodule::regular(b)),
            (ct, Bimodule::regular(ct)),
            (b, arrow_ideal_bimodule(b, b, &["eps"]).unwrap()),
            (c, sp.ideal.clone()),
            (ct, arrow_ideal_bimodule(ct, ct, &["eps2"]).unwrap()),
            (b, arrow_ideal_bimodule(ct, b, &["eps2"]).unwrap()),
            (ct, arrow_ideal_bimodule(ct, ct, &["eps", "eps2"]).unwrap()),
        ];
        for (a, m) in &modules {
            square &= bar::square_zero(a, m, 0) && bar::square_zero(a, m, 1);
            pairs += 1;
        }
    }
    (agree && square, format!("{} dimension comparisons agree: {agree}; b2.b1 = 0 and b3.b2 = 0 on {pairs} pairs: {square}", entries.len()))
}

fn criterion_10(fx: &[&Fixture]) -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for f in fx {
        let e = ext2_dimension(&f.ext.base).unwrap();
        let diff = f.ext.tilde.dim() - f.ext.base.dim();
        ok &= e == diff;
        detail.push(format!("{}: {e} = {} - {}", f.name, f.ext.tilde.dim(), f.ext.base.dim()));
    }
    (ok, detail.join("; "))
}

fn criterion_11(fx: &[&Fixture]) -> (bool, String) {
    let ok = fx.iter().all(|f| {
        let b = block(f, "B");
        gldim_at_most(&f.ext.base, 2) && f.ext.base.is_triangular() && !b.is_triangular()
    });
    (ok, "gldim C <= 2, C triangular, B not triangular on both fixtures".into())
}

fn criterion_12(fx: &[&Fixture]) -> (bool, String) {
    let mut ok = true;
    let mut graded = true;
    let mut pairs = 0;
    for f in fx {
        let a = &f.ext.tilde;
        let m = Bimodule::regular(a);
        let h = h1(a, &m);
        let tester = CoboundaryTester::new(a, &m, 2).unwrap();
        let fs: Vec<Cochain> = h.representatives().iter().map(|d| derivation_to_cochain(a, &m, &h.slots, &d.values)).collect();
        let one = Cochain::new(0, a.dim(), a.dim(), relext::exactla::SparseVec::from_dense(&a.one_vec()));
        for x in &fs {
            ok &= cup_product(a, &one, x).unwrap() == *x && cup_product(a, x, &one).unwrap() == *x;
            for y in &fs {
                let (xy, yx) = (cup_product(a, x, y).unwrap(), cup_product(a, y, x).unwrap());
                ok &= coboundary(a, &m, &xy).is_zero() && tester.is_coboundary(&xy.sub(&yx));
                graded &= tester.is_coboundary(&xy.add(&yx));
                pairs += 1;
            }
        }
    }
    (ok, format!("{pairs} pairs: f*g - g*f exact; unit law holds; f*g + g*f also exact: {graded}"))
}

fn criterion_13() -> (bool, String) {
    let mut ok = true;
    for name in ["ex1.quiv", "ex2.quiv"] {
        let text = fs::read_to_string(fixtures_dir().join(name)).unwrap();
        ok &= serialize(&parse(&text).unwrap()) == text;
    }
    let mut classes = 0;
    for entry in fs::read_dir(fixtures_dir().join("errors")).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        let loc = text.lines().next().and_then(|l| l.strip_prefix("# expect ")).and_then(|l| l.split(' ').next()).unwrap_or("");
        match parse(&text) {
            Err(e) => {
                ok &= format!("{}:{}", e.line, e.column) == loc;
                classes += 1;
            }
            Ok(_) => ok = false,
        }
    }
    (ok && classes == 10, format!("fixtures round-trip; {classes} error classes located"))
}

fn main() -> ExitCode {
    let (ex1, ex2) = (load("ex1.quiv"), load("ex2.quiv"));
    let fx = [&ex1, &ex2];
    let all: Vec<Vec<TheoremReport>> = fx.iter().map(|f| reports(f, true)).collect();
    let results = [
        criterion_1(&ex1),
        criterion_2(&ex2),
        criterion_3(&fx, &all),
        criterion_4(&all),
        criterion_5(&all),
        criterion_6(&all),
        criterion_7(&fx),
        criterion_8(&fx),
        criterion_9(&fx, &all),
        criterion_10(&fx),
        criterion_11(&fx),
        criterion_12(&fx),
        criterion_13(),
    ];
    let mut unexpected = false;
    for (i, (ok, detail)) in results.iter().enumerate() {
        let n = i + 1;
        let expected_fail = EXPECTED_FAILURES.contains(&n);
        let note = match (ok, expected_fail) {
            (false, true) => " [known: contradicted by computation]",
            (true, true) => " [expected to fail; update EXPECTED_FAILURES]",
            _ => "",
        };
        println!("criterion {n:>2} {} {detail}{note}", if *ok { "PASS" } else { "FAIL" });
        unexpected |= *ok == expected_fail;
    }
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
