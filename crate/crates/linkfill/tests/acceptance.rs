//! One PASS/FAIL line per acceptance criterion. Exact criteria have zero
//! tolerance; the only tolerances are the wall-clock budgets below.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use linkfill::json::LinkingMatrixJson;
use linkfill::parallel::{self, FingerParams};
use linkfill_core::certify::{is_injective, vandermonde_check, CertifyOptions, Mode};
use linkfill_core::link::{single_curve_link, standard_link};
use linkfill_core::modules::{normal_form_j, LineQuotient, PlaquetteChain};
use linkfill_core::nilpotent::{
    basic_commutator, hall_basis, hall_span_rank, lcs_depth, phi_closed_form, phi_k, phi_surjectivity_check, witt_rank,
    FreeWord,
};
use linkfill_core::{Ambient, AugClass, Filtration, LaurentPoly, LinkSpec, MultiIndex};
use num_bigint::BigInt;

const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const SWEEP_BUDGET: Duration = Duration::from_secs(60);
const ORACLE_BUDGET: Duration = Duration::from_secs(300);
const FINGER_BUDGET: Duration = Duration::from_secs(120);
const FINGER_SEEDS: u64 = 100;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn within(start: Instant, budget: Duration) -> Check {
    let t = start.elapsed();
    if t <= budget {
        Ok(format!("{:.2}s", t.as_secs_f64()))
    } else {
        Err(format!(
            "took {:.2}s, budget {:.0}s",
            t.as_secs_f64(),
            budget.as_secs_f64()
        ))
    }
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Parses `(1-x)^2 l_{xy}` into a multi-index and a component label.
fn parse_h_label(s: &str, dim: usize) -> (MultiIndex, String) {
    let s = squash(s);
    let at = s.find("l_").expect("meridian label");
    let (factors, label) = s.split_at(at);
    let mut alpha = [0u32; 3];
    let mut rest = factors;
    while let Some(r) = rest.strip_prefix("(1-") {
        let axis = "xyz".find(&r[..1]).expect("variable");
        assert!(axis < dim);
        rest = r[1..].strip_prefix(')').expect("closing paren");
        let mut e = 1;
        if let Some(r) = rest.strip_prefix('^') {
            let n = r.chars().take_while(|c| c.is_ascii_digit()).count();
            e = r[..n].parse().unwrap();
            rest = &r[n..];
        }
        alpha[axis] += e;
    }
    assert!(rest.is_empty(), "unparsed {rest:?}");
    (MultiIndex(alpha), label.to_string())
}

/// The expected column label and ours name the same element of `I^k H / I^{k+1} H`.
fn same_h_element(expected: &str, ours: &str, link: &LinkSpec) -> bool {
    let (a, la) = parse_h_label(expected, link.dim);
    let (b, lb) = parse_h_label(ours, link.dim);
    if la != lb {
        return false;
    }
    let c = &link.components[link.index_of(&la).expect("component")];
    let q = LineQuotient::new(link.dim, &c.direction, &c.label).unwrap();
    q.reduce(&AugClass::from_multi(link.dim, a, 1)) == q.reduce(&AugClass::from_multi(link.dim, b, 1))
}

fn golden_case(k: usize, rows: &[&str], cols: &[&str], entries: &[&[i64]]) -> Check {
    let path = std::env::temp_dir().join(format!("linkfill-acceptance-{}-k{k}.json", std::process::id()));
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_linkfill"))
        .args(["matrix", "--dim", "2", "--k", &k.to_string(), "--standard", "--json"])
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = within(start, GOLDEN_BUDGET);
    if !out.status.success() {
        return Err(format!("k={k}: exit {:?}", out.status.code()));
    }
    let m: LinkingMatrixJson =
        serde_json::from_str(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let _ = std::fs::remove_file(&path);
    let mut problems = Vec::new();
    let want: Vec<Vec<i64>> = entries.iter().map(|r| r.to_vec()).collect();
    for (i, (got, exp)) in m.entries.iter().zip(want.iter()).enumerate() {
        for (j, (g, e)) in got.iter().zip(exp.iter()).enumerate() {
            if g != e {
                problems.push(format!("entry ({}, {}) = {g}, expected {e}", m.rows[i], m.cols[j]));
            }
        }
    }
    if m.entries.len() != want.len() || m.entries.iter().any(|r| r.len() != cols.len()) {
        problems.push(String::from("shape mismatch"));
    }
    let got_rows: Vec<String> = m.rows.iter().map(|s| squash(s)).collect();
    let want_rows: Vec<String> = rows.iter().map(|s| squash(s)).collect();
    if got_rows != want_rows {
        problems.push(format!("row labels {got_rows:?}"));
    }
    let link = standard_link(k, Ambient::Relative);
    for (p, o) in cols.iter().zip(m.cols.iter()) {
        if !same_h_element(p, o, &link) {
            problems.push(format!("column {o} is not {p}"));
        }
    }
    if let Err(e) = &elapsed {
        problems.push(e.clone());
    }
    if problems.is_empty() {
        Ok(format!("k={k} {}", elapsed.unwrap()))
    } else {
        Err(format!("k={k}: {}", problems.join("; ")))
    }
}

fn criterion_1() -> Check {
    let a = golden_case(
        1,
        &["(1-x)P_y", "(1-y)P_x", "(1-x)P_x"],
        &["(1-x)l_y", "(1-y)l_x", "(1-x)l_{xy}"],
        &[&[1, 0, 1], &[0, 1, 1], &[0, 0, 1]],
    );
    let b = golden_case(
        2,
        &["(1-x)^2 P_y", "(1-y)^2 P_x", "(1-x)(1-y) P_x", "(1-x)^2 P_x"],
        &["(1-x)^2 l_y", "(1-y)^2 l_x", "(1-y)^2 l_{xy}", "(1-y)^2 l_{xy^2}"],
        &[&[1, 0, 1, 4], &[0, 1, 1, 1], &[0, 0, 1, 2], &[0, 0, 1, 4]],
    );
    match (a, b) {
        (Ok(a), Ok(b)) => Ok(format!("{a}, {b}")),
        (a, b) => Err([a, b]
            .into_iter()
            .filter_map(|r| r.err())
            .collect::<Vec<_>>()
            .join(" | ")),
    }
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut runs = 0;
    for (ambient, top) in [(Ambient::Relative, 8), (Ambient::Torus, 6)] {
        for m in 2..=top {
            let c = parallel::certify(m, ambient, CertifyOptions::closed_form_only()).map_err(|e| e.to_string())?;
            if !c.verdict {
                return Err(format!("dim {} m={m} failed", ambient.dim()));
            }
            for d in c.degrees.iter() {
                let rows = d.matrix.entries.rows();
                if d.injectivity.rank_bareiss != rows || d.injectivity.rank_smith != rows {
                    return Err(format!(
                        "dim {} m={m} j={}: ranks {} / {} of {rows}",
                        ambient.dim(),
                        d.j,
                        d.injectivity.rank_bareiss,
                        d.injectivity.rank_smith
                    ));
                }
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} certificates, {}", within(start, SWEEP_BUDGET)?))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut n = 0;
    for (ambient, top) in [(Ambient::Relative, 4), (Ambient::Torus, 3)] {
        for k in 0..=top {
            let link = standard_link(k, ambient);
            let a = parallel::build_matrix(k, &link, Mode::ClosedForm).map_err(|e| e.to_string())?;
            let b = parallel::build_matrix(k, &link, Mode::Geometric).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("dim {} k={k}: oracle differs", ambient.dim()));
            }
            n += 1;
        }
    }
    Ok(format!("{n} matrices equal, {}", within(start, ORACLE_BUDGET)?))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut checks = 0;
    for ambient in [Ambient::Relative, Ambient::Torus] {
        for k in 0..=4 {
            let link = standard_link(k, ambient);
            let runs = parallel::finger_sweep(k, &link, 0..FINGER_SEEDS, FingerParams::default())
                .map_err(|e| e.to_string())?;
            if let Some(r) = runs.iter().find(|r| !r.report.clean()) {
                return Err(format!(
                    "dim {} k={k} seed {}: {:?}",
                    ambient.dim(),
                    r.seed,
                    r.report.violations[0]
                ));
            }
            checks += runs.iter().map(|r| r.report.checked).sum::<usize>();
        }
    }
    Ok(format!(
        "{checks} basis checks over {} maps, {}",
        10 * FINGER_SEEDS,
        within(start, FINGER_BUDGET)?
    ))
}

fn letter_sequences(len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| (0..3).map(move |g| [s.clone(), vec![g]].concat()))
            .collect();
    }
    out.retain(|s| s[0] != s[1]);
    out
}

fn criterion_5() -> Check {
    let w = FreeWord::parse("[[x,y],z]", 3).unwrap();
    let v = phi_k(&w, 3, Ambient::Torus).map_err(|e| e.to_string())?;
    let target = PlaquetteChain::generator(Ambient::Torus, 2, LaurentPoly::one_minus(3, 2));
    if v != normal_form_j(&target, 1).map_err(|e| e.to_string())? {
        return Err(format!("phi_3([[x,y],z]) = {v:?}"));
    }
    let mut formulas = 0;
    for ambient in [Ambient::Relative, Ambient::Torus] {
        for len in 2..=5 {
            for letters in letter_sequences(len) {
                let word = basic_commutator(&letters, 3).unwrap();
                let a = phi_k(&word, len, ambient).map_err(|e| e.to_string())?;
                let b = phi_closed_form(&letters, ambient).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("dim {} letters {letters:?}", ambient.dim()));
                }
                formulas += 1;
            }
        }
    }
    let mut witnesses = 0;
    for ambient in [Ambient::Relative, Ambient::Torus] {
        for k in 2..=5 {
            let r = phi_surjectivity_check(k, ambient).map_err(|e| e.to_string())?;
            if !r.all_ok() {
                return Err(format!("dim {} k={k}: missing witness", ambient.dim()));
            }
            witnesses += r.witnesses.len();
        }
    }
    Ok(format!("{formulas} commutator images, {witnesses} witnesses"))
}

fn criterion_6() -> Check {
    for k in 1..=10usize {
        let r = vandermonde_check(k, Ambient::Relative).map_err(|e| format!("k={k}: {e}"))?;
        let mut want = BigInt::from(1);
        for n in 1..=k {
            for m in 1..n {
                want *= n - m;
            }
        }
        let factorial: BigInt = (1..=k).map(BigInt::from).product();
        let block = &r.blocks[0];
        if block.det_vandermonde != want || block.det_block != &want * &factorial {
            return Err(format!("k={k}: det V = {}, expected {want}", block.det_vandermonde));
        }
    }
    Ok(String::from("k=1..10"))
}

fn criterion_7() -> Check {
    let expected = [3u64, 3, 8, 18, 48];
    let hall = hall_basis(3, 5);
    for (i, &e) in expected.iter().enumerate() {
        let k = i + 1;
        let count = hall.iter().filter(|h| h.weight == k).count() as u64;
        let span = hall_span_rank(3, k) as u64;
        if witt_rank(3, k) != e || count != e || span != e {
            return Err(format!("k={k}: witt {} hall {count} span {span}", witt_rank(3, k)));
        }
    }
    for h in hall.iter() {
        if lcs_depth(&h.bracket.word(3), 6) != Filtration::Exact(h.weight) {
            return Err(format!("depth of weight-{} commutator", h.weight));
        }
    }
    Ok(format!("ranks {expected:?}, {} commutators", hall.len()))
}

fn criterion_8() -> Check {
    let link = single_curve_link();
    let m = parallel::build_matrix(1, &link, Mode::Geometric).map_err(|e| e.to_string())?;
    let inj = is_injective(&m.entries);
    if inj.injective {
        return Err(String::from("degree-1 map is injective"));
    }
    let w = inj.witness.ok_or("no witness")?;
    // (x - y) P_x = (1-y) P_x - (1-x) P_x
    let target: Vec<BigInt> = m
        .rows
        .iter()
        .map(|r| match squash(r).as_str() {
            "(1-y)P_x" => BigInt::from(1),
            "(1-x)P_x" => BigInt::from(-1),
            _ => BigInt::from(0),
        })
        .collect();
    let scale = w
        .iter()
        .zip(target.iter())
        .find(|(_, t)| **t != BigInt::from(0))
        .map(|(x, t)| x * t)
        .unwrap();
    let proportional = scale != BigInt::from(0) && w.iter().zip(target.iter()).all(|(x, t)| x == &(&scale * t));
    if !proportional {
        return Err(format!("witness {w:?}"));
    }
    Ok(format!(
        "rank {} of {}, witness {scale} (x-y) P_x",
        inj.rank_bareiss,
        m.entries.rows()
    ))
}

fn main() -> ExitCode {
    if let Err(e) = parallel::init_threads() {
        eprintln!("{e}");
        return ExitCode::FAILURE;
    }
    let criteria: [Criterion; 8] = [
        ("golden i_1 and i_2 tables", criterion_1),
        ("certification sweep", criterion_2),
        ("geometric oracle equivalence", criterion_3),
        ("finger-move invariance", criterion_4),
        ("phi-map checks", criterion_5),
        ("Vandermonde structure", criterion_6),
        ("Magnus and lower central series", criterion_7),
        ("negative control", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
