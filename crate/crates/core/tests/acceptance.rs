//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are pinned below.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mediagraph::annotate::{annotate_builtin, AdmissionMode};
use mediagraph::canon::{build_alias_table, CanonParams};
use mediagraph::corpus::{write_corpus, Article, Corpus};
use mediagraph::graph::{build_graph, mention_counts, BuildConfig, EdgeAttrs, EdgeMode, KnowledgeGraph};
use mediagraph::metrics::{
    analyze, eccentricity_stats, louvain, modularity_of, sentiment_stats, spearman, Partition, WeightSource,
};
use mediagraph::sentiment::SentimentLexicon;

const ORACLE_GRAPHS: usize = 200;
const ORACLE_MAX_VERTICES: usize = 8;
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(10);
const BARBELL_Q_TOL: f64 = 1e-9;
const KARATE_MIN_Q: f64 = 0.40;
/// Best karate-club partition as scored by networkx 3.x `modularity`.
const KARATE_REFERENCE_Q: f64 = 0.41978961209730437;
const KARATE_REFERENCE_TOL: f64 = 1e-12;
const SCALE_FACTOR: u64 = 7;
const SCALE_Q_TOL: f64 = 1e-12;
const SPEARMAN_TOL: f64 = 1e-12;
const CANON_MULTISETS: usize = 1000;
const CONTRAST_ARTICLES: usize = 200;
const CONTRAST_TIME_LIMIT: Duration = Duration::from_secs(30);
const CONTRAST_TOP_VERTICES: usize = 3;
const NEUTRAL_ARTICLES: usize = 2000;
const NEUTRAL_POLARITY_TOL: f64 = 0.02;
const NEUTRAL_SUBJECTIVITY_TOL: f64 = 0.03;
const THREAD_COUNTS: [&str; 3] = ["1", "4", "16"];

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn graph_from(label: &str, edges: &[(String, String, u64)]) -> KnowledgeGraph {
    let cfg = BuildConfig::new(
        EdgeMode::SentenceCooccurrence,
        AdmissionMode::Intersection,
        CanonParams::default(),
    );
    let mut g = KnowledgeGraph::empty(label, cfg);
    for (a, b, f) in edges {
        g.add_edge(
            a,
            b,
            EdgeAttrs {
                frequency: *f,
                polarity: 0.0,
                subjectivity: 0.0,
            },
        );
    }
    g
}

fn name(i: usize) -> String {
    format!("v{i:02}")
}

// ---------------------------------------------------------------------------

fn metric_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..ORACLE_GRAPHS {
        let n = rng.gen_range(2..=ORACLE_MAX_VERTICES);
        let mut adj = vec![vec![false; n]; n];
        // random spanning tree, then extra edges
        for v in 1..n {
            let u = rng.gen_range(0..v);
            adj[u][v] = true;
            adj[v][u] = true;
        }
        let p = rng.gen_range(0.0..0.6);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    adj[u][v] = true;
                    adj[v][u] = true;
                }
            }
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if adj[u][v] {
                    edges.push((name(u), name(v), 1));
                }
            }
        }
        let g = graph_from("R", &edges);

        // Floyd-Warshall
        const INF: u64 = u64::MAX / 4;
        let mut d = vec![vec![INF; n]; n];
        for u in 0..n {
            d[u][u] = 0;
            for v in 0..n {
                if adj[u][v] {
                    d[u][v] = 1;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        let ecc: Vec<u64> = (0..n).map(|u| *d[u].iter().max().unwrap()).collect();
        let radius = *ecc.iter().min().unwrap();
        let diameter = *ecc.iter().max().unwrap();
        let mut sum = 0;
        let mut pairs = 0;
        for u in 0..n {
            for v in u + 1..n {
                sum += d[u][v];
                pairs += 1;
            }
        }

        let summary = analyze(&g, WeightSource::Frequency, 0)
            .map_err(|e| e.to_string())?
            .summary;
        let stats = eccentricity_stats(&g).map_err(|e| e.to_string())?;
        check(summary.radius == Some(radius as u32), || {
            format!("case {case}: radius {:?} vs {radius}", summary.radius)
        })?;
        check(summary.diameter == Some(diameter as u32), || {
            format!("case {case}: diameter {:?} vs {diameter}", summary.diameter)
        })?;
        check(stats.path_length_sum == sum && stats.pair_count == pairs, || {
            format!(
                "case {case}: path sum {}/{} vs {sum}/{pairs}",
                stats.path_length_sum, stats.pair_count
            )
        })?;
        check(summary.avg_path_length == Some(sum as f64 / pairs as f64), || {
            format!("case {case}: avg path {:?} vs {sum}/{pairs}", summary.avg_path_length)
        })?;
    }
    let elapsed = start.elapsed();
    check(elapsed < ORACLE_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{ORACLE_GRAPHS} graphs exact, {elapsed:.2?}"))
}

/// Q straight from its definition: sum over communities of
/// (internal weight / m) - (total degree / 2m)^2.
fn direct_q(edges: &[(String, String, u64)], part: &BTreeMap<String, usize>) -> f64 {
    let m: f64 = edges.iter().map(|e| e.2 as f64).sum();
    let mut internal: BTreeMap<usize, f64> = BTreeMap::new();
    let mut degree: BTreeMap<usize, f64> = BTreeMap::new();
    for (a, b, w) in edges {
        let (ca, cb) = (part[a], part[b]);
        if ca == cb {
            *internal.entry(ca).or_default() += *w as f64;
        }
        *degree.entry(ca).or_default() += *w as f64;
        *degree.entry(cb).or_default() += *w as f64;
    }
    degree
        .iter()
        .map(|(c, d)| internal.get(c).copied().unwrap_or(0.0) / m - (d / (2.0 * m)).powi(2))
        .sum()
}

fn karate_edges() -> Vec<(String, String, u64)> {
    let text = fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/karate.txt")).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let v: Vec<usize> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
            (name(v[0]), name(v[1]), 1)
        })
        .collect()
}

fn modularity_correctness() -> Outcome {
    // two K5s joined by one bridge
    let mut edges = Vec::new();
    for base in [0, 5] {
        for i in base..base + 5 {
            for j in i + 1..base + 5 {
                edges.push((name(i), name(j), 1));
            }
        }
    }
    edges.push((name(4), name(5), 1));
    let g = graph_from("barbell", &edges);
    let r = louvain(&g, WeightSource::Frequency, 0).map_err(|e| e.to_string())?;
    let groups: BTreeSet<Vec<&str>> = r.partition.communities().into_values().collect();
    let expected: BTreeSet<Vec<&str>> = [
        vec!["v00", "v01", "v02", "v03", "v04"],
        vec!["v05", "v06", "v07", "v08", "v09"],
    ]
    .into_iter()
    .collect();
    check(groups == expected, || format!("barbell communities {groups:?}"))?;
    let dq = direct_q(&edges, &r.partition.assignment);
    check((r.modularity - dq).abs() <= BARBELL_Q_TOL, || {
        format!("barbell Q {} vs direct {dq}", r.modularity)
    })?;

    // karate club
    let kedges = karate_edges();
    let k = graph_from("karate", &kedges);
    check(k.vertex_count() == 34 && k.edge_count() == 78, || {
        "karate fixture size".into()
    })?;
    let kr = louvain(&k, WeightSource::Frequency, 0).map_err(|e| e.to_string())?;
    check(kr.modularity >= KARATE_MIN_Q, || format!("karate Q {}", kr.modularity))?;
    check(kr.modularity <= KARATE_REFERENCE_Q + 1e-9, || {
        format!("karate Q {} above the known optimum", kr.modularity)
    })?;
    let kdq = direct_q(&kedges, &kr.partition.assignment);
    check((kr.modularity - kdq).abs() <= BARBELL_Q_TOL, || {
        format!("karate Q {} vs direct {kdq}", kr.modularity)
    })?;
    let reference: [&[usize]; 4] = [
        &[0, 1, 2, 3, 7, 11, 12, 13, 17, 19, 21],
        &[4, 5, 6, 10, 16],
        &[8, 9, 14, 15, 18, 20, 22, 26, 29, 30, 32, 33],
        &[23, 24, 25, 27, 28, 31],
    ];
    let ref_part = Partition {
        assignment: reference
            .iter()
            .enumerate()
            .flat_map(|(c, vs)| vs.iter().map(move |&v| (name(v), c)))
            .collect(),
    };
    let ref_q = modularity_of(&k, &ref_part, WeightSource::Frequency).map_err(|e| e.to_string())?;
    check((ref_q - KARATE_REFERENCE_Q).abs() <= KARATE_REFERENCE_TOL, || {
        format!("reference partition scored {ref_q}, networkx {KARATE_REFERENCE_Q}")
    })?;

    // uniform scaling
    let scaled: Vec<_> = kedges
        .iter()
        .map(|(a, b, w)| (a.clone(), b.clone(), w * SCALE_FACTOR))
        .collect();
    let sr = louvain(&graph_from("karate", &scaled), WeightSource::Frequency, 0).map_err(|e| e.to_string())?;
    check((sr.modularity - kr.modularity).abs() <= SCALE_Q_TOL, || {
        format!("scaled Q {} vs {}", sr.modularity, kr.modularity)
    })?;
    check(sr.partition == kr.partition, || "scaling changed the partition".into())?;

    Ok(format!(
        "barbell split exact; karate Q {:.6} (reference optimum {KARATE_REFERENCE_Q:.6}); x{SCALE_FACTOR} scaling |dQ| {:.1e}",
        kr.modularity,
        (sr.modularity - kr.modularity).abs()
    ))
}

/// Rank of each value: 1 + number of smaller values + (ties - 1) / 2.
fn brute_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&x| {
            let less = v.iter().filter(|&&y| y < x).count() as f64;
            let equal = v.iter().filter(|&&y| y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

fn brute_spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (brute_ranks(x), brute_ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

fn spearman_correctness() -> Outcome {
    let up: Vec<f64> = (0..12).map(|i| i as f64 * 0.1).collect();
    let down: Vec<f64> = up.iter().rev().copied().collect();
    check(spearman(&up, &up) == Some(1.0), || {
        format!("monotone gave {:?}", spearman(&up, &up))
    })?;
    check(spearman(&up, &down) == Some(-1.0), || {
        format!("reversed gave {:?}", spearman(&up, &down))
    })?;

    // ten edges with ties in both coordinates
    let rows: [(f64, f64); 10] = [
        (0.2, 0.5),
        (-0.1, 0.3),
        (0.2, 0.5),
        (0.0, 0.1),
        (0.4, 0.5),
        (-0.1, 0.6),
        (0.2, 0.2),
        (0.7, 0.9),
        (0.0, 0.1),
        (-0.5, 0.3),
    ];
    let cfg = BuildConfig::new(
        EdgeMode::SentenceCooccurrence,
        AdmissionMode::Intersection,
        CanonParams::default(),
    );
    let mut g = KnowledgeGraph::empty("S", cfg);
    for (i, (p, s)) in rows.iter().enumerate() {
        g.add_edge(
            &name(i),
            &name(i + 10),
            EdgeAttrs {
                frequency: 1,
                polarity: *p,
                subjectivity: *s,
            },
        );
    }
    let got = sentiment_stats(&g)
        .map_err(|e| e.to_string())?
        .spearman_pol_subj
        .ok_or("undefined")?;
    // edges come out sorted by endpoint name, which here preserves row order
    let (x, y): (Vec<f64>, Vec<f64>) = rows.iter().copied().unzip();
    let want = brute_spearman(&x, &y);
    check((got - want).abs() <= SPEARMAN_TOL, || {
        format!("tied fixture {got} vs brute force {want}")
    })?;
    Ok(format!("+1/-1 exact; tied fixture {got:.12} vs {want:.12}"))
}

fn canonicalization_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let vocab = [
        "trump",
        "donald",
        "president",
        "clinton",
        "hillary",
        "new",
        "york",
        "times",
        "bank",
        "of",
        "england",
        "x",
    ];
    for case in 0..CANON_MULTISETS {
        let mut mentions: BTreeMap<String, u64> = BTreeMap::new();
        for _ in 0..rng.gen_range(1..25) {
            let len = rng.gen_range(1..=4);
            let surface: Vec<&str> = (0..len).map(|_| *vocab.choose(&mut rng).unwrap()).collect();
            *mentions.entry(surface.join(" ")).or_default() += rng.gen_range(1..30);
        }
        let params = CanonParams {
            min_parent_freq: rng.gen_range(1..15),
            min_child_freq: rng.gen_range(1..4),
        };
        let table = build_alias_table(&mentions, params, &BTreeSet::new()).map_err(|e| e.to_string())?;
        let total: u64 = mentions.values().sum();
        let kept: u64 = table.canonical_frequencies().values().sum();
        check(kept + table.dropped_mass() == total, || {
            format!("case {case}: mass {kept} + {} != {total}", table.dropped_mass())
        })?;
        for (surface, canon) in table.mappings() {
            // idempotence and acyclicity: canonical forms map to themselves
            check(table.canonicalize(canon) == Some(canon), || {
                format!("case {case}: {surface} -> {canon} -> {:?}", table.canonicalize(canon))
            })?;
            check(table.canonical_frequencies().contains_key(canon), || {
                format!("case {case}: {canon} has no mass")
            })?;
        }
        for surface in mentions.keys() {
            check(
                table.canonicalize(surface).is_some() != table.is_dropped(surface),
                || format!("case {case}: {surface} neither kept nor dropped"),
            )?;
        }
    }

    let fixture: BTreeMap<String, u64> = [("trump", 40), ("donald trump", 15), ("president donald trump", 5)]
        .into_iter()
        .map(|(s, f)| (s.to_string(), f))
        .collect();
    let table = build_alias_table(&fixture, CanonParams::default(), &BTreeSet::new()).map_err(|e| e.to_string())?;
    for s in fixture.keys() {
        check(table.canonicalize(s) == Some("trump"), || {
            format!("{s} -> {:?}", table.canonicalize(s))
        })?;
    }
    Ok(format!(
        "{CANON_MULTISETS} multisets; trump fixture resolves transitively"
    ))
}

// ---------------------------------------------------------------------------
// Synthetic corpora

const GIVEN: [&str; 12] = [
    "Arlen", "Bexa", "Corvin", "Delphy", "Ezran", "Fiora", "Gundar", "Halsey", "Idris", "Jorva", "Kestel", "Lunet",
];
const FAMILY: [&str; 8] = [
    "Mardek", "Nollis", "Orcutt", "Pevensy", "Quillon", "Rastova", "Selwin", "Tovald",
];

fn filler_entities(n: usize) -> Vec<String> {
    let mut out = Vec::new();
    'outer: for f in FAMILY {
        for g in GIVEN {
            out.push(format!("{g} {f}"));
            if out.len() == n {
                break 'outer;
            }
        }
    }
    out
}

fn article(id: String, label: &str, sentences: &[String]) -> Article {
    Article {
        id,
        source_label: label.into(),
        published_date: None,
        title: String::new(),
        body: sentences.join(" "),
    }
}

const PLANTED_A: &str = "Ravel Okonjo";
const PLANTED_B: &str = "Tarin Voss";

fn planted_corpus(label: &str, verb: &str, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = filler_entities(30);
    let companions = &pool[..3];
    let mut articles = Vec::new();
    for i in 0..CONTRAST_ARTICLES {
        let mut s = Vec::new();
        if i % 4 == 0 {
            s.push(format!("{PLANTED_A} {verb} {PLANTED_B} on the plan."));
            let c = companions.choose(&mut rng).unwrap();
            let who = if rng.gen_bool(0.5) { PLANTED_A } else { PLANTED_B };
            s.push(format!("{who} met {c} in the city."));
        }
        for _ in 0..rng.gen_range(2..5) {
            let a = pool.choose(&mut rng).unwrap();
            let b = pool.choose(&mut rng).unwrap();
            if a == b {
                continue;
            }
            // sparse, sign-symmetric noise on filler pairs
            let tail = match rng.gen_range(0..20) {
                0 => " and agreed on the plan",
                1 => " and delayed the plan",
                _ => "",
            };
            s.push(format!("{a} met {b} during the week{tail}."));
        }
        articles.push(article(format!("{label}-{i:03}"), label, &s));
    }
    Corpus {
        source_label: label.into(),
        articles,
    }
}

fn save_corpus(c: &Corpus, path: &Path) {
    let mut out = Vec::new();
    write_corpus(c, &mut out).unwrap();
    fs::write(path, out).unwrap();
}

fn bin(args: &[&str]) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_mediagraph"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if o.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)))
    }
}

fn ps(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn planted_contrast() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    for (label, verb, seed) in [("A", "praised", 1), ("B", "criticized", 2)] {
        let corpus = d.join(format!("{label}.jsonl"));
        save_corpus(&planted_corpus(label, verb, seed), &corpus);
        let ann = d.join(format!("{label}.ann.jsonl"));
        bin(&["annotate", "--corpus", ps(&corpus), "--out", ps(&ann)])?;
        bin(&[
            "build-graph",
            "--annotations",
            ps(&ann),
            "--out",
            ps(&d.join(format!("{label}.graph.json"))),
        ])?;
    }
    let out = d.join("contrast");
    bin(&[
        "contrast",
        "--graph-a",
        ps(&d.join("A.graph.json")),
        "--graph-b",
        ps(&d.join("B.graph.json")),
        "--out-dir",
        ps(&out),
    ])?;
    let elapsed = start.elapsed();
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("contrast.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;

    let (pa, pb) = (PLANTED_A.to_lowercase(), PLANTED_B.to_lowercase());
    let first = report["edge_items"].get(0).ok_or("no edge items")?;
    let pair: BTreeSet<&str> = [first["source"].as_str().unwrap(), first["target"].as_str().unwrap()].into();
    check(pair == [pa.as_str(), pb.as_str()].into(), || {
        format!("first edge item {first}")
    })?;
    check(first["polarity_a"] == 0.5 && first["polarity_b"] == -0.5, || {
        format!("planted polarities {first}")
    })?;
    let top: Vec<&str> = report["vertex_items"]
        .as_array()
        .ok_or("no vertex items")?
        .iter()
        .take(CONTRAST_TOP_VERTICES)
        .map(|v| v["entity"].as_str().unwrap())
        .collect();
    check(top.contains(&pa.as_str()) && top.contains(&pb.as_str()), || {
        format!("top vertices {top:?}")
    })?;
    check(elapsed < CONTRAST_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "planted pair first of {} edge items; top vertices {top:?}; {elapsed:.2?}",
        report["edge_items"].as_array().unwrap().len()
    ))
}

fn neutrality() -> Outcome {
    let lexicon = SentimentLexicon::bundled();
    // equal-magnitude opposite-sign pairs, sampled uniformly
    let pairs = [("agreed", "delayed"), ("praised", "criticized"), ("good", "bad")];
    let mut implied_subj = 0.0;
    for (pos, neg) in pairs {
        let (p, n) = (lexicon.get(pos).ok_or(pos)?, lexicon.get(neg).ok_or(neg)?);
        check(p.polarity == -n.polarity && p.polarity > 0.0, || {
            format!("{pos}/{neg} are not mirror images")
        })?;
        implied_subj += (p.subjectivity + n.subjectivity) / (2.0 * pairs.len() as f64);
    }
    let pool = filler_entities(20);
    for e in &pool {
        for t in e.split(' ') {
            check(lexicon.get(&t.to_lowercase()).is_none(), || {
                format!("{t} is a lexicon word")
            })?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut articles = Vec::new();
    for i in 0..NEUTRAL_ARTICLES {
        let s: Vec<String> = (0..5)
            .map(|_| {
                let a = pool.choose(&mut rng).unwrap();
                let mut b = pool.choose(&mut rng).unwrap();
                while b == a {
                    b = pool.choose(&mut rng).unwrap();
                }
                let (pos, neg) = pairs.choose(&mut rng).unwrap();
                let word = if rng.gen_bool(0.5) { pos } else { neg };
                format!("{a} met {b} and the talks were {word}.")
            })
            .collect();
        articles.push(article(format!("n-{i:04}"), "N", &s));
    }
    let corpus = Corpus {
        source_label: "N".into(),
        articles,
    };
    let anns = annotate_builtin(&corpus, &lexicon, true);
    let table = build_alias_table(
        &mention_counts(&anns, AdmissionMode::Intersection),
        CanonParams::default(),
        &BTreeSet::new(),
    )
    .map_err(|e| e.to_string())?;
    let (g, _) = build_graph(
        "N",
        &anns,
        &table,
        EdgeMode::SentenceCooccurrence,
        AdmissionMode::Intersection,
    );
    let s = sentiment_stats(&g).map_err(|e| e.to_string())?;
    check(s.avg_polarity.abs() <= NEUTRAL_POLARITY_TOL, || {
        format!("avg polarity {}", s.avg_polarity)
    })?;
    check(
        (s.avg_subjectivity - implied_subj).abs() <= NEUTRAL_SUBJECTIVITY_TOL,
        || format!("avg subjectivity {} vs implied {implied_subj}", s.avg_subjectivity),
    )?;
    Ok(format!(
        "{} edges: avg polarity {:+.4}, avg subjectivity {:.4} (implied {implied_subj:.4})",
        g.edge_count(),
        s.avg_polarity,
        s.avg_subjectivity
    ))
}

fn run_pipeline(corpus: &Path, dir: &Path, threads: &str) -> Result<Vec<(String, Vec<u8>)>, String> {
    fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let ann = dir.join("ann.jsonl");
    let graph = dir.join("graph.json");
    let metrics = dir.join("metrics");
    let gexf = dir.join("graph.gexf");
    let t = ["--threads", threads, "--seed", "11"];
    let with = |args: &[&str]| -> Vec<String> { args.iter().chain(t.iter()).map(|s| s.to_string()).collect() };
    let call = |args: Vec<String>| bin(&args.iter().map(String::as_str).collect::<Vec<_>>());
    call(with(&["annotate", "--corpus", ps(corpus), "--out", ps(&ann)]))?;
    call(with(&["build-graph", "--annotations", ps(&ann), "--out", ps(&graph)]))?;
    call(with(&["metrics", "--graph", ps(&graph), "--out-dir", ps(&metrics)]))?;
    call(with(&[
        "export",
        "--graph",
        ps(&graph),
        "--color-by",
        "community",
        "--out",
        ps(&gexf),
    ]))?;
    let mut files = Vec::new();
    for p in [
        ann,
        graph,
        metrics.join("summary.json"),
        metrics.join("polarity_histogram.csv"),
        metrics.join("subjectivity_histogram.csv"),
        gexf,
    ] {
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        files.push((name, fs::read(&p).map_err(|e| e.to_string())?));
    }
    Ok(files)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let big = d.join("A.jsonl");
    save_corpus(&planted_corpus("A", "praised", 1), &big);
    let mini = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/mini_corpus.jsonl");
    let mut runs = 0;
    for (tag, corpus) in [("mini", mini), ("planted", big)] {
        let reference = run_pipeline(&corpus, &d.join(format!("{tag}-ref")), "1")?;
        for threads in THREAD_COUNTS {
            for rep in 0..2 {
                let got = run_pipeline(&corpus, &d.join(format!("{tag}-{threads}-{rep}")), threads)?;
                runs += 1;
                for ((name, want), (_, have)) in reference.iter().zip(&got) {
                    check(want == have, || {
                        format!("{tag}: {name} differs with --threads {threads} (run {rep})")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{runs} runs over threads {THREAD_COUNTS:?} byte-identical (annotations, graph, metrics, GEXF)"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("metric_oracle_equivalence", metric_oracle),
        ("modularity_correctness", modularity_correctness),
        ("spearman_correctness", spearman_correctness),
        ("canonicalization_properties", canonicalization_properties),
        ("planted_contrast_end_to_end", planted_contrast),
        ("neutrality_property", neutrality),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
