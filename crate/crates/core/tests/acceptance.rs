//! One PASS/FAIL line per acceptance criterion.
//!
//! Criterion 5 asks for `C(α,β;δ) ⟺ [α,β] ≤ δ` on every instance up to
//! order 4. That equivalence is false: centrality is closed under meets but
//! not upward in `δ`, and the census contains counterexamples. The line
//! prints FAIL with the counts. The run still succeeds only when that is the
//! sole failure and it has exactly the known shape, so any other regression
//! turns the target red.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use leftq_core::census::{self, MAX_EXHAUSTIVE_ORDER};
use leftq_core::commutator;
use leftq_core::congruence::{self, CongruenceLattice};
use leftq_core::fixtures;
use leftq_core::maltsev;
use leftq_core::miner;
use leftq_core::verify::{self, SuiteReport, Tally};
use leftq_core::{Groups, LeftQuasigroup};

const CRITERION_1_LIMIT: Duration = Duration::from_secs(1);
const CRITERION_10_LIMIT: Duration = Duration::from_secs(600);
const PI_SAMPLES: usize = 50;
const PI_SEED: u64 = 4;
const AFFINE_SPECS: usize = 100;
const AFFINE_SEED: u64 = 6;
const ORDER5_SAMPLES: usize = 1000;
const ORDER5_SEED: u64 = 8;
const WITNESS_MAX_ORDER: usize = 12;
/// Criteria allowed to fail, each with the shape check it must satisfy.
const KNOWN_FAILURES: &[u8] = &[5];

struct Line {
    id: u8,
    pass: bool,
    known_shape: bool,
}

fn emit(id: u8, pass: bool, title: &str, detail: String, elapsed: Duration) -> Line {
    println!(
        "criterion {id:>2} {}  {title}: {detail} [{:.2}s]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    Line { id, pass, known_shape: false }
}

fn upto(max: usize, f: impl Fn(usize) -> Vec<LeftQuasigroup>) -> Vec<LeftQuasigroup> {
    (1..=max).flat_map(f).collect()
}

fn all_upto_3() -> Vec<LeftQuasigroup> {
    upto(3, |n| census::all_tables(n).unwrap().collect())
}

fn idempotent_upto_4() -> Vec<LeftQuasigroup> {
    upto(MAX_EXHAUSTIVE_ORDER, |n| census::idempotent_tables(n).unwrap().collect())
}

fn run(id: &str, corpus: &[LeftQuasigroup]) -> Tally {
    let lemma = verify::lemma(id).expect("lemma exists");
    let report: SuiteReport = verify::run_suite(&[lemma], corpus, maltsev::DEFAULT_BUDGET);
    report.lemmas.into_iter().next().unwrap()
}

fn tally_text(t: &Tally) -> String {
    let mut s = format!("{} pass={} fail={} skipped={} unknown={}", t.id, t.pass, t.fail, t.skipped, t.unknown);
    if let Some(f) = &t.first_failure {
        s.push_str(&format!(" first failure: {f:?}"));
    }
    s
}

fn criterion_1() -> Line {
    let t = Instant::now();
    let fx = fixtures::all();
    let census = all_upto_3();
    let mut bad = Vec::new();
    for (name, q) in &fx {
        let identities = (0..q.order())
            .all(|x| (0..q.order()).all(|y| q.mul(x, q.ldiv(x, y)) == y && q.ldiv(x, q.mul(x, y)) == y));
        if !identities {
            bad.push(format!("{name}: identities"));
        }
    }
    for q in fx.iter().map(|(_, q)| q).chain(&census) {
        let text = LeftQuasigroup::parse(&q.to_lq()).ok();
        let json = LeftQuasigroup::parse(&q.to_json()).ok();
        if text.as_ref() != Some(q) || json.as_ref() != Some(q) || q.to_lq() != text.unwrap().to_lq() {
            bad.push(format!("round trip of {:?}", q.to_lq()));
        }
    }
    let elapsed = t.elapsed();
    let pass = bad.is_empty() && elapsed < CRITERION_1_LIMIT;
    let detail = format!(
        "{} fixtures and {} census tables round-trip, identities checked on fixtures, {} problems, limit {:?}",
        fx.len(),
        census.len(),
        bad.len(),
        CRITERION_1_LIMIT
    );
    emit(1, pass, "axioms and parsing", detail, elapsed)
}

fn criterion_2() -> Line {
    let t = Instant::now();
    let mut corpus: Vec<LeftQuasigroup> = census::all_tables(3).unwrap().collect();
    corpus.extend(census::idempotent_tables(4).unwrap());
    let r = run("galois_connection", &corpus);
    let pass = r.fail == 0 && r.unknown == 0 && r.pass == 216 + 1296;
    emit(2, pass, "Galois connection", tally_text(&r), t.elapsed())
}

fn criterion_3() -> Line {
    let t = Instant::now();
    let corpus = idempotent_upto_4();
    let r = run("p:dis_alpha1", &corpus);
    let pass = r.fail == 0 && r.unknown == 0 && r.pass == corpus.len();
    emit(3, pass, "Dis of meets and joins", tally_text(&r), t.elapsed())
}

fn criterion_4() -> Line {
    let t = Instant::now();
    let mut corpus = vec![fixtures::get("dihedral-3xP2").unwrap()];
    let mut seed = PI_SEED;
    while corpus.len() < PI_SAMPLES + 1 {
        for q in census::sample(4, 64, false, seed).unwrap() {
            let lattice = CongruenceLattice::build(&q, congruence::DEFAULT_LATTICE_CAP).unwrap();
            if lattice.len() > 2 && corpus.len() < PI_SAMPLES + 1 {
                corpus.push(q);
            }
        }
        seed += 1;
    }
    let r = run("pi-correspondence", &corpus);
    let pass = r.fail == 0 && r.unknown == 0 && r.pass == corpus.len();
    emit(4, pass, "π-correspondence", tally_text(&r), t.elapsed())
}

fn criterion_5() -> Line {
    let t = Instant::now();
    let small = all_upto_3();
    let definitional = run("commutator-definitional", &small);
    let part1 = definitional.fail == 0 && definitional.unknown == 0 && definitional.pass == small.len();

    let mut instances = small.clone();
    instances.extend(census::iso_classes(census::all_tables(4).unwrap()).into_iter().map(|c| c.representative));
    let (mut checks, mut early_vs_listed) = (0usize, 0usize);
    let (mut c_without_leq, mut leq_without_c) = (0usize, 0usize);
    let mut failing_tables: Vec<LeftQuasigroup> = Vec::new();
    for q in &instances {
        let lattice = CongruenceLattice::build(q, congruence::DEFAULT_LATTICE_CAP).unwrap();
        let before = leq_without_c + c_without_leq;
        for a in lattice.congruences() {
            for b in lattice.congruences() {
                let ms = commutator::tc_matrices(q, a, b).unwrap();
                let c = commutator::commutator(q, a, b).unwrap();
                for d in lattice.congruences() {
                    checks += 1;
                    let listed = commutator::centralizes_on(&ms, d);
                    if commutator::centralizes(q, a, b, d).unwrap() != listed {
                        early_vs_listed += 1;
                    }
                    match (listed, c.leq(d)) {
                        (true, false) => c_without_leq += 1,
                        (false, true) => leq_without_c += 1,
                        _ => {}
                    }
                }
            }
        }
        if leq_without_c + c_without_leq > before {
            failing_tables.push(q.clone());
        }
    }
    let discrepancies = c_without_leq + leq_without_c;
    let pass = part1 && discrepancies == 0 && early_vs_listed == 0;
    let witness = LeftQuasigroup::parse(fixtures::NON_MONOTONE).unwrap();
    let known_shape = part1
        && early_vs_listed == 0
        && c_without_leq == 0
        && failing_tables.iter().any(|q| census::is_isomorphic(q, &witness));
    let detail = format!(
        "term oracle on {} tables of order ≤ 3: {} pass, {} fail; equivalence over {} instances \
         ({} order-4 iso classes), {checks} checks: {discrepancies} discrepancies on {} tables \
         (C without [α,β] ≤ δ: {c_without_leq}; [α,β] ≤ δ without C: {leq_without_c}), \
         early-exit vs listed matrix check disagreements: {early_vs_listed}. \
         C is not upward closed in δ, see the non-monotone fixture",
        small.len(),
        definitional.pass,
        definitional.fail,
        instances.len(),
        instances.len() - small.len(),
        failing_tables.len(),
    );
    let mut line = emit(5, pass, "commutator oracle", detail, t.elapsed());
    line.known_shape = known_shape;
    line
}

fn criterion_6() -> Line {
    let t = Instant::now();
    let r = verify::extension_suite(AFFINE_SEED, AFFINE_SPECS).unwrap();
    let a = r.tally("affine-abelian").unwrap();
    let pass = a.fail == 0 && a.pass == AFFINE_SPECS;
    emit(6, pass, "affine instances are abelian", tally_text(a), t.elapsed())
}

fn criterion_7() -> Line {
    let t = Instant::now();
    let corpus = idempotent_upto_4();
    let mut semiregular = 0;
    let mut offenders = 0;
    for q in &corpus {
        if Groups::new(q).unwrap().dis().is_semiregular() {
            semiregular += 1;
            if !q.classify().quandle {
                offenders += 1;
            }
        }
    }
    let quandles = run("semiregular-idempotent-quandle", &corpus);
    let decomposition = run("semiregular-decomposition", &corpus);
    let pass = offenders == 0
        && quandles.fail == 0
        && decomposition.fail == 0
        && decomposition.unknown == 0
        && decomposition.pass + decomposition.skipped == corpus.len();
    let detail = format!(
        "{} idempotent tables, {semiregular} semiregular, {offenders} semiregular non-quandles; {}; {}",
        corpus.len(),
        tally_text(&quandles),
        tally_text(&decomposition)
    );
    emit(7, pass, "semiregular idempotent are quandles", detail, t.elapsed())
}

fn maltsev_corpus() -> Vec<LeftQuasigroup> {
    let mut corpus = idempotent_upto_4();
    corpus.extend(census::sample(5, ORDER5_SAMPLES, true, ORDER5_SEED).unwrap());
    corpus
}

fn nilpotent_count(corpus: &[LeftQuasigroup]) -> (usize, usize) {
    let nil: Vec<&LeftQuasigroup> =
        corpus.iter().filter(|q| commutator::central_series(q).unwrap().is_nilpotent()).collect();
    (nil.len(), nil.iter().filter(|q| q.order() == 5).count())
}

fn criterion_8(corpus: &[LeftQuasigroup]) -> Line {
    let t = Instant::now();
    let r = run("nilpotent-latin", corpus);
    let (nil, nil5) = nilpotent_count(corpus);
    let detail = format!(
        "{} idempotent instances ({ORDER5_SAMPLES} sampled at order 5), {nil} nilpotent ({nil5} of order 5); {}",
        corpus.len(),
        tally_text(&r)
    );
    emit(8, r.fail == 0, "nilpotent Mal'tsev are latin", detail, t.elapsed())
}

fn criterion_9(corpus: &[LeftQuasigroup]) -> Line {
    let t = Instant::now();
    let eq = run("nilpotent-latin-equivalence", corpus);
    let div = run("divisors", corpus);
    let detail = format!("{}; {}", tally_text(&eq), tally_text(&div));
    emit(9, eq.fail == 0 && div.fail == 0, "nilpotent latin equivalences and divisors", detail, t.elapsed())
}

fn criterion_10() -> Line {
    let t = Instant::now();
    let mined = miner::mine_non_closure_witness(WITNESS_MAX_ORDER).unwrap();
    let elapsed = t.elapsed();
    let (stored, alpha) = fixtures::semiregular_witness();
    let (pass, detail) = match mined {
        Some(w) => {
            let replays = w.replays().unwrap();
            let matches_fixture = w.quandle == stored && w.congruence == alpha;
            (
                replays && matches_fixture && elapsed < CRITERION_10_LIMIT,
                format!(
                    "order {} semiregular quandle ({}), quotient by [{}] of order {} is not semiregular; \
                     replays: {replays}, matches stored fixture: {matches_fixture}, limit {:?}",
                    w.quandle.order(),
                    w.source,
                    w.congruence,
                    w.quotient.order(),
                    CRITERION_10_LIMIT
                ),
            )
        }
        None => (false, format!("no witness up to order {WITNESS_MAX_ORDER}")),
    };
    emit(10, pass, "non-closure witness", detail, elapsed)
}

fn criterion_11(corpus: &[LeftQuasigroup]) -> Line {
    let t = Instant::now();
    let scoped: Vec<LeftQuasigroup> = corpus
        .iter()
        .filter(|q| q.is_faithful() && maltsev::is_connected(q).unwrap())
        .cloned()
        .collect();
    let with_central = scoped.iter().filter(|q| !commutator::center(q).unwrap().is_discrete()).count();
    let r = run("structure-kn", &scoped);
    let pass = r.fail == 0 && r.unknown == 0 && r.pass == scoped.len();
    let detail = format!(
        "{} connected faithful idempotent instances, {with_central} with a nonzero central congruence; {}",
        scoped.len(),
        tally_text(&r)
    );
    emit(11, pass, "structure of central congruences", detail, t.elapsed())
}

fn main() -> ExitCode {
    let maltsev = maltsev_corpus();
    let lines = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(&maltsev),
        criterion_9(&maltsev),
        criterion_10(),
        criterion_11(&maltsev),
    ];
    let failed: Vec<&Line> = lines.iter().filter(|l| !l.pass).collect();
    println!("{} of {} criteria pass", lines.len() - failed.len(), lines.len());
    let unexpected: Vec<u8> =
        failed.iter().filter(|l| !(KNOWN_FAILURES.contains(&l.id) && l.known_shape)).map(|l| l.id).collect();
    if unexpected.is_empty() {
        if !failed.is_empty() {
            println!("failing criteria {:?} fail only in the documented way", failed.iter().map(|l| l.id).collect::<Vec<_>>());
        }
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
