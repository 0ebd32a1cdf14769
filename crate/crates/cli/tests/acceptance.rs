//! Acceptance checks, one PASS/FAIL line each. Run with
//! `cargo test -p wnsynth-cli --test acceptance`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::BufReader;
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config as ProptestConfig, TestRunner};
use serde_json::{json, Value};
use wnsynth::assembly::{export_tab, table_to_generated, CoverageReport, PWN_SYNSET_TOTAL};
use wnsynth::pipeline::{generate_dr, generate_iw, generate_iwnd, PipelineConfig};
use wnsynth::providers::{DictionaryProvider, MockProvider, ProviderRegistry, TranslationProvider};
use wnsynth::ranking::{compute_ranks, rank_and_select, select_candidates, Case};
use wnsynth::wn_data::{parse_dictionary_tsv, parse_omw_tab, parse_wndb, Lang, Pos, WordnetTable};
use wnsynth::{Approach, Candidate, CandidateSet, OffsetPos, Rank};

use common::{copy_fixtures, fixtures, wnsynth, Served};

/// Coverage may differ from the reference value by one rounding step.
const COVERAGE_TOLERANCE_HUNDREDTHS: i64 = 1;
const RANK_ANCHORS_BUDGET: Duration = Duration::from_secs(1);
const ORACLE_BUDGET: Duration = Duration::from_secs(30);
const COVERAGE_BUDGET: Duration = Duration::from_secs(1);
const PIPELINE_BUDGET: Duration = Duration::from_secs(10);
const PARSER_BUDGET: Duration = Duration::from_secs(30);
const SERVICE_BUDGET: Duration = Duration::from_secs(30);

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("rank formula anchors", RANK_ANCHORS_BUDGET, rank_anchors),
        ("oracle equivalence", ORACLE_BUDGET, oracle_equivalence),
        ("coverage arithmetic", COVERAGE_BUDGET, coverage_arithmetic),
        ("pipeline end-to-end", PIPELINE_BUDGET, pipeline_end_to_end),
        ("parser round-trips", PARSER_BUDGET, parser_round_trips),
        (
            "review service contract",
            SERVICE_BUDGET,
            review_service_contract,
        ),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > budget => {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS  {name}: {detail} ({elapsed:.2?})"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name}: {reason} ({elapsed:.2?})");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn lang(code: &str) -> Lang {
    Lang::new(code).unwrap()
}

fn id(s: &str) -> OffsetPos {
    s.parse().unwrap()
}

fn token(word: &str, source: &str, source_word: &str) -> Candidate {
    Candidate {
        word: word.to_string(),
        source_wordnet: source.to_string(),
        source_word: source_word.to_string(),
        pivot_word: None,
    }
}

fn rank_anchors() -> Outcome {
    // Case 3 example: DR over 00010435-v, every row a single-source token.
    let tied = CandidateSet::new(
        id("00010435-v"),
        lang("vie"),
        vec![
            token("hành động", "PWN", "act"),
            token("hoạt động", "PWN", "behave"),
            token("làm", "PWN", "do"),
        ],
        1,
    )
    .unwrap();
    let ranked = compute_ranks(&tied);
    ensure!(
        ranked.len() == 3,
        "expected 3 ranked words, got {}",
        ranked.len()
    );
    let third = Rank::from_counts(1, 3, 1, 1);
    for r in &ranked {
        ensure!(
            r.rank == third && r.rank.numer() == 1 && r.rank.denom() == 3,
            "{} ranked {}",
            r.word,
            r.rank
        );
        ensure!(
            r.rank_display == "0.33",
            "{} displayed {}",
            r.word,
            r.rank_display
        );
    }
    let outcome = select_candidates(tied.id(), &ranked);
    ensure!(
        outcome.case == Case::Case3,
        "tied set selected {:?}",
        outcome.case
    );
    ensure!(
        outcome.accepted.is_empty(),
        "tied set accepted {:?}",
        outcome.accepted
    );

    // Case 1 example: 00952615-n translated to "điện" from all four wordnets.
    let unanimous = CandidateSet::new(
        id("00952615-n"),
        lang("vie"),
        vec![
            token("điện", "PWN", "electricity"),
            token("điện", "FWN", "sähkö"),
            token("điện", "JWN", "電気"),
            token("điện", "WWN", "électricité"),
        ],
        4,
    )
    .unwrap();
    let outcome = rank_and_select(&unanimous);
    ensure!(
        outcome.case == Case::Case1,
        "unanimous set selected {:?}",
        outcome.case
    );
    ensure!(
        outcome.accepted.len() == 1,
        "unanimous set accepted {:?}",
        outcome.accepted
    );
    let rank = outcome.accepted[0].rank;
    ensure!(
        rank == Rank::ONE && rank.numer() == 1 && rank.denom() == 1,
        "unanimous set rank {rank}"
    );
    Ok("1/3 x3 -> Case3, 1 -> Case1".into())
}

/// Brute-force transcription of the rank and selection rules over raw
/// integer fractions, independent of the library's types.
fn oracle(
    tokens: &[(usize, usize)],
    num_wordnets: u64,
) -> (BTreeMap<usize, (u64, u64)>, u8, BTreeSet<usize>) {
    let n = tokens.len() as u64;
    let words: BTreeSet<usize> = tokens.iter().map(|t| t.0).collect();
    let mut ranks = BTreeMap::new();
    for &w in &words {
        let occur = tokens.iter().filter(|t| t.0 == w).count() as u64;
        let dst = tokens
            .iter()
            .filter(|t| t.0 == w)
            .map(|t| t.1)
            .collect::<BTreeSet<_>>()
            .len() as u64;
        ranks.insert(w, (occur * dst, n * num_wordnets));
    }
    let is_one = |(a, b): (u64, u64)| a == b;
    let greater = |(a, b): (u64, u64), (c, d): (u64, u64)| a * d > c * b;
    let equal = |(a, b): (u64, u64), (c, d): (u64, u64)| a * d == c * b;

    let ones: BTreeSet<usize> = ranks
        .iter()
        .filter(|(_, r)| is_one(**r))
        .map(|(w, _)| *w)
        .collect();
    if !ones.is_empty() {
        return (ranks, 1, ones);
    }
    let mut best = *ranks.values().next().unwrap();
    for r in ranks.values() {
        if greater(*r, best) {
            best = *r;
        }
    }
    let top: BTreeSet<usize> = ranks
        .iter()
        .filter(|(_, r)| equal(**r, best))
        .map(|(w, _)| *w)
        .collect();
    if top.len() == words.len() && words.len() >= 2 {
        (ranks, 3, BTreeSet::new())
    } else {
        (ranks, 2, top)
    }
}

fn oracle_equivalence() -> Outcome {
    const WORDS: [&str; 3] = ["a", "b", "c"];
    const SOURCES: [&str; 3] = ["S1", "S2", "S3"];
    // Token kinds: (word, source); multisets as non-decreasing sequences.
    let kinds: Vec<(usize, usize)> = (0..3).flat_map(|w| (0..3).map(move |s| (w, s))).collect();
    let mut multisets: Vec<Vec<(usize, usize)>> = Vec::new();
    fn extend(
        kinds: &[(usize, usize)],
        start: usize,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if !current.is_empty() {
            out.push(current.clone());
        }
        if current.len() == 6 {
            return;
        }
        for k in start..kinds.len() {
            current.push(kinds[k]);
            extend(kinds, k, current, out);
            current.pop();
        }
    }
    extend(&kinds, 0, &mut Vec::new(), &mut multisets);

    let mut instances = 0usize;
    for tokens in &multisets {
        let sources = tokens.iter().map(|t| t.1).collect::<BTreeSet<_>>().len();
        for num_wordnets in sources.max(1)..=4 {
            instances += 1;
            let candidates = tokens
                .iter()
                .map(|&(w, s)| token(WORDS[w], SOURCES[s], "x"))
                .collect();
            let cs = CandidateSet::new(id("00000001-n"), lang("vie"), candidates, num_wordnets)
                .map_err(|e| e.to_string())?;
            let ranked = compute_ranks(&cs);
            let outcome = select_candidates(cs.id(), &ranked);
            let (expected, case, accepted) = oracle(tokens, num_wordnets as u64);

            ensure!(
                ranked.len() == expected.len(),
                "{tokens:?}/{num_wordnets}: word count differs"
            );
            for r in &ranked {
                let w = WORDS.iter().position(|x| *x == r.word).unwrap();
                let (num, den) = expected[&w];
                ensure!(
                    r.rank.numer() as u128 * den as u128 == num as u128 * r.rank.denom() as u128,
                    "{tokens:?}/{num_wordnets}: rank of {} is {}, oracle {num}/{den}",
                    r.word,
                    r.rank
                );
            }
            let got_case = match outcome.case {
                Case::Case1 => 1,
                Case::Case2 => 2,
                Case::Case3 => 3,
            };
            let got: BTreeSet<usize> = outcome
                .accepted
                .iter()
                .map(|r| WORDS.iter().position(|x| *x == r.word).unwrap())
                .collect();
            ensure!(
                got_case == case && got == accepted,
                "{tokens:?}/{num_wordnets}: got Case{got_case} {got:?}, oracle Case{case} {accepted:?}"
            );
        }
    }
    Ok(format!("{instances} instances agree"))
}

fn hundredths(report: &CoverageReport) -> i64 {
    let (int, frac) = report.coverage_percent.split_once('.').unwrap();
    int.parse::<i64>().unwrap() * 100 + frac.parse::<i64>().unwrap()
}

fn coverage_arithmetic() -> Outcome {
    let mut shown = Vec::new();
    for (count, approach, reference) in [(4_813, Approach::Dr, 410), (75_234, Approach::Iw, 6394)] {
        let report = CoverageReport::new(lang("arb"), vec![approach], count, PWN_SYNSET_TOTAL);
        let got = hundredths(&report);
        ensure!(
            (got - reference).abs() <= COVERAGE_TOLERANCE_HUNDREDTHS,
            "{count}/{PWN_SYNSET_TOTAL} gave {}%, reference {}.{:02}%",
            report.coverage_percent,
            reference / 100,
            reference % 100
        );
        shown.push(format!("{count} -> {}%", report.coverage_percent));
    }
    Ok(shown.join(", "))
}

struct Suite {
    pwn: WordnetTable,
    fwn: WordnetTable,
    jwn: WordnetTable,
    wwn: WordnetTable,
    mt: Arc<dyn TranslationProvider>,
    dict: Arc<dyn TranslationProvider>,
}

fn open(name: &str) -> BufReader<File> {
    BufReader::new(File::open(fixtures().join(name)).unwrap())
}

impl Suite {
    fn load() -> Suite {
        let mut pwn = parse_wndb(open("data.noun"), Pos::Noun).unwrap().value;
        pwn.extend(parse_wndb(open("data.verb"), Pos::Verb).unwrap().value)
            .unwrap();
        let omw = |file: &str, name: &str, code: &str| {
            parse_omw_tab(open(file), name, &lang(code)).unwrap().value
        };
        let dict = parse_dictionary_tsv(open("dict-eng-vie.tsv"), lang("eng"), lang("vie"))
            .unwrap()
            .value;
        Suite {
            pwn,
            fwn: omw("wn-data-fin.tab", "FWN", "fin"),
            jwn: omw("wn-data-jpn.tab", "JWN", "jpn"),
            wwn: omw("wn-data-fra.tab", "WWN", "fra"),
            mt: Arc::new(MockProvider::from_tsv("mt", open("mt.tsv")).unwrap()),
            dict: Arc::new(DictionaryProvider::new("dict", Arc::new(dict))),
        }
    }

    fn config(&self, approach: Approach) -> PipelineConfig {
        let mut reg = ProviderRegistry::new();
        if approach == Approach::Iwnd {
            for src in ["fin", "jpn", "fra"] {
                reg.assign(lang(src), lang("eng"), self.mt.clone()).unwrap();
            }
            reg.assign(lang("eng"), lang("vie"), self.dict.clone())
                .unwrap();
        } else {
            for src in ["eng", "fin", "jpn", "fra"] {
                reg.assign(lang(src), lang("vie"), self.mt.clone()).unwrap();
            }
        }
        PipelineConfig::new(approach, lang("vie"), reg)
    }
}

/// `(word, "n/d")` pairs of one synset's ranking, and its case.
fn ranking(cs: &CandidateSet) -> (Case, Vec<(String, String)>) {
    let outcome = rank_and_select(cs);
    let mut pairs: Vec<(String, String)> = outcome
        .accepted
        .iter()
        .chain(&outcome.rejected)
        .map(|r| (r.word.clone(), r.rank.to_string()))
        .collect();
    pairs.sort();
    (outcome.case, pairs)
}

fn pairs(items: &[(&str, &str)]) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = items
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    v.sort();
    v
}

fn pipeline_end_to_end() -> Outcome {
    let suite = Suite::load();
    let dr = generate_dr(&suite.pwn, &suite.config(Approach::Dr)).map_err(|e| e.to_string())?;
    let iw_pwn =
        generate_iw(&[&suite.pwn], &suite.config(Approach::Iw)).map_err(|e| e.to_string())?;
    ensure!(
        dr.candidates == iw_pwn.candidates,
        "DR and IW([PWN]) candidate sets differ"
    );
    ensure!(
        dr.outcomes() == iw_pwn.outcomes(),
        "DR and IW([PWN]) selections differ"
    );

    let iw_cfg = suite.config(Approach::Iw);
    let two = generate_iw(&[&suite.pwn, &suite.fwn], &iw_cfg).map_err(|e| e.to_string())?;
    let all = [&suite.pwn, &suite.fwn, &suite.jwn, &suite.wwn];
    let four = generate_iw(&all, &iw_cfg).map_err(|e| e.to_string())?;
    ensure!(
        two.candidates.values().all(|c| c.num_wordnets() == 2),
        "IW(2) numWordnets"
    );
    ensure!(
        four.candidates.values().all(|c| c.num_wordnets() == 4),
        "IW(4) numWordnets"
    );
    let expectations = [
        (
            "02084071-n",
            &two,
            Case::Case2,
            pairs(&[("chó", "2/3"), ("chó nhà", "1/6")]),
        ),
        (
            "02084071-n",
            &four,
            Case::Case2,
            pairs(&[("chó", "2/3"), ("chó nhà", "1/24"), ("con chó", "1/24")]),
        ),
        (
            "14842992-n",
            &two,
            Case::Case3,
            pairs(&[("bẩn", "1/2"), ("đất", "1/2")]),
        ),
        (
            "14842992-n",
            &four,
            Case::Case2,
            pairs(&[("bẩn", "1/6"), ("đất", "2/3")]),
        ),
        (
            "01437254-v",
            &two,
            Case::Case2,
            pairs(&[("chỉ đạo", "1/6"), ("gửi", "2/3")]),
        ),
        (
            "01437254-v",
            &four,
            Case::Case2,
            pairs(&[("chỉ đạo", "1/20"), ("gửi", "4/5")]),
        ),
        ("07739125-n", &four, Case::Case1, pairs(&[("táo", "1/1")])),
    ];
    for (key, generation, case, expected) in &expectations {
        let cs = generation
            .candidates
            .get(&id(key))
            .ok_or(format!("{key} has no candidates"))?;
        let got = ranking(cs);
        ensure!(
            got == (*case, expected.clone()),
            "{key} over {} wordnets: {got:?}",
            cs.num_wordnets()
        );
    }

    let iwnd = generate_iwnd(&all, &suite.config(Approach::Iwnd))
        .map_err(|e| e.to_string())?
        .select();
    let iw = four.select();
    for miss in ["15228787-n", "04194289-n"] {
        ensure!(
            !iwnd.entries().contains_key(&id(miss)),
            "IWND kept dictionary miss {miss}"
        );
        ensure!(iw.entries().contains_key(&id(miss)), "IW lost {miss}");
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    copy_fixtures(dir.path());
    let config = dir.path().join("build.toml");
    let cache = dir.path().join("cache.tsv");
    let mut exports = Vec::new();
    for _ in 0..3 {
        let out = wnsynth(&[
            "build",
            "-c",
            config.to_str().unwrap(),
            "--cache",
            cache.to_str().unwrap(),
            "--workers",
            "4",
        ]);
        ensure!(
            out.status.success(),
            "build failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        exports.push(fs::read(dir.path().join("out/wn-data-vie.tab")).map_err(|e| e.to_string())?);
    }
    ensure!(
        exports.windows(2).all(|w| w[0] == w[1]),
        "exports differ across warm-cache runs"
    );
    Ok(format!(
        "DR==IW([PWN]), {} hand-computed rankings, 2 IWND misses absent, 3 identical exports",
        expectations.len()
    ))
}

fn parser_round_trips() -> Outcome {
    let suite = Suite::load();
    for table in [&suite.pwn, &suite.fwn, &suite.jwn, &suite.wwn] {
        let gw = table_to_generated(table);
        let bytes = export_tab(&gw, &table.name, &[]).map_err(|e| e.to_string())?;
        let back =
            parse_omw_tab(bytes.as_slice(), &table.name, &table.lang).map_err(|e| e.to_string())?;
        ensure!(
            table_to_generated(&back.value).entries() == gw.entries(),
            "{} does not round-trip",
            table.name
        );
    }

    let expected: [(&str, &[&str]); 5] = [
        ("00001740-n", &["entity"]),
        ("02084071-n", &["dog", "domestic dog", "canis familiaris"]),
        ("14845743-n", &["water", "h2o"]),
        ("00001740-v", &["breathe", "take a breath"]),
        ("00010435-v", &["act", "behave", "do"]),
    ];
    ensure!(
        suite.pwn.len() == 20,
        "WNDB fixture has {} synsets, expected 20",
        suite.pwn.len()
    );
    for (key, words) in expected {
        let synset = suite.pwn.get(&id(key)).ok_or(format!("{key} missing"))?;
        ensure!(synset.words == words, "{key}: {:?}", synset.words);
    }

    let valid = |id: &OffsetPos| -> bool {
        let text = id.to_string();
        text.len() == 10
            && text[..8].bytes().all(|b| b.is_ascii_digit())
            && text.parse::<OffsetPos>().ok() == Some(*id)
    };
    let mut runner = TestRunner::new(ProptestConfig {
        cases: 2000,
        failure_persistence: None,
        ..ProptestConfig::default()
    });
    let key = prop_oneof!["[0-9]{6,10}-[nvasrx]", "\\PC{0,12}"];
    runner
        .run(&(key.clone(), "\\PC{0,8}"), |(key, lemma)| {
            if let Ok(id) = key.parse::<OffsetPos>() {
                prop_assert!(valid(&id));
            }
            let line = format!("{key}\tlemma\t{lemma}\n");
            if let Ok(loaded) = parse_omw_tab(line.as_bytes(), "X", &lang("vie")) {
                prop_assert!(loaded.value.ids().all(valid));
            }
            Ok(())
        })
        .map_err(|e| format!("OMW fuzz: {e}"))?;
    runner
        .run(
            &(
                "[0-9]{7,9}",
                "[0-9]{2}",
                "[nvasr]",
                "[0-9a-f]{2}",
                "\\PC{0,20}",
            ),
            |(off, lex, ss, cnt, rest)| {
                let line = format!("{off} {lex} {ss} {cnt} {rest}\n");
                for pos in Pos::ALL {
                    if let Ok(loaded) = parse_wndb(line.as_bytes(), pos) {
                        prop_assert!(loaded.value.ids().all(valid));
                    }
                }
                Ok(())
            },
        )
        .map_err(|e| format!("WNDB fuzz: {e}"))?;
    Ok("4 fixture tables round-trip, 5 WNDB transcriptions match, 4000 fuzz cases".into())
}

fn review_service_contract() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    copy_fixtures(dir.path());
    let out = wnsynth(&[
        "build",
        "-c",
        dir.path().join("build.toml").to_str().unwrap(),
    ]);
    ensure!(out.status.success(), "build failed");
    let export = dir.path().join("out/wn-data-vie.tab");
    let ratings = dir.path().join("ratings.jsonl");
    let client = reqwest::blocking::Client::new();
    let post = |server: &Served, key: &str, score: i64| -> Result<u16, String> {
        client
            .post(server.url("/api/ratings"))
            .json(&json!({"offsetPos": key, "score": score, "rater": "acceptance"}))
            .send()
            .map(|r| r.status().as_u16())
            .map_err(|e| e.to_string())
    };
    let get = |server: &Served, path: &str| -> Result<Value, String> {
        client
            .get(server.url(path))
            .send()
            .and_then(|r| r.json())
            .map_err(|e| e.to_string())
    };

    let server = Served::start(&export, &ratings, None);
    let status = post(&server, "07739125-n", 6)?;
    ensure!(status == 422, "score 6 answered {status}");
    for (key, score) in [("07739125-n", 5), ("07739125-n", 4), ("01437254-v", 3)] {
        let status = post(&server, key, score)?;
        ensure!(status == 201, "rating {key}={score} answered {status}");
    }
    drop(server);

    let server = Served::start(&export, &ratings, None);
    for (key, score) in [("14842992-n", 2), ("14842992-n", 2), ("14842992-n", 5)] {
        let status = post(&server, key, score)?;
        ensure!(status == 201, "rating {key}={score} answered {status}");
    }
    drop(server);

    // apple (5+4)/2 = 4.50, send 3/1 = 3.00, soil (2+2+5)/3 = 3.00;
    // overall (4.5 + 3 + 3) / 3 = 3.50 over 6 ratings.
    let server = Served::start(&export, &ratings, None);
    let stats = get(&server, "/api/stats")?;
    for (key, mean) in [
        ("07739125-n", "4.50"),
        ("01437254-v", "3.00"),
        ("14842992-n", "3.00"),
    ] {
        ensure!(
            stats["perSynset"][key]["mean"] == mean,
            "{key} mean {}",
            stats["perSynset"][key]["mean"]
        );
    }
    ensure!(
        stats["overall"]["mean"] == "3.50",
        "overall mean {}",
        stats["overall"]["mean"]
    );
    ensure!(
        stats["overall"]["ratings"] == 6,
        "overall count {}",
        stats["overall"]["ratings"]
    );
    let entry = get(&server, "/api/synsets/07739125-n")?;
    ensure!(
        entry["rating"]["count"] == 2,
        "apple rating count {}",
        entry["rating"]["count"]
    );
    Ok("422 on score 6, ratings survive two restarts, means 4.50/3.00/3.00 overall 3.50".into())
}
