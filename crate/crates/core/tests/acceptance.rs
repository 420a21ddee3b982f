//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (run with --nocapture to see them).

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;

use isorich::{
    blowup, blowup_iso_bound, blowup_rm_transfer, canonical_form, count_induced_iso_classes,
    count_induced_iso_classes_capped, derive_constants, desk_scale_constants, diagonal_ramsey,
    es_bound, graph6_decode, graph6_encode, greedy_independent, iso_rich_family,
    neighborhood_classes, oracle, pinned_canonical_form, ramsey_extract, rm_number, run_pipeline,
    run_sweep, verify_certificate, CanonicalForm, ConstantOverrides, Constants, Graph, NodeSet,
    Rat, SweepConfig,
};

use rand_core::RngCore;

fn report(number: u32, name: &str) {
    println!("ACCEPTANCE {number} ({name}): PASS");
}

fn desk() -> Constants {
    desk_scale_constants(Rat::from_integer(1)).unwrap()
}

/// One representative per isomorphism class of labeled graphs on n nodes,
/// deduplicated by canonical form.
fn representatives(n: usize) -> Vec<Graph> {
    let bits = n * n.saturating_sub(1) / 2;
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    let mut reps = Vec::new();
    for mask in 0u64..(1 << bits) {
        let g = oracle::graph_from_bitmask(n, mask);
        if seen.insert(canonical_form(&g)) {
            reps.push(g);
        }
    }
    reps
}

/// Representatives on n+1 nodes obtained by extending each n-node
/// representative with every possible neighbourhood of the new node; every
/// (n+1)-node class contains such an extension.
fn extend_representatives(reps: &[Graph]) -> Vec<Graph> {
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    let mut out = Vec::new();
    for g in reps {
        let n = g.n();
        let mut edges = g.edges();
        for mask in 0u64..(1 << n) {
            edges.retain(|&(_, y)| y < n);
            for v in 0..n {
                if mask & (1 << v) != 0 {
                    edges.push((v, n));
                }
            }
            let h = Graph::build(n + 1, &edges).unwrap();
            if seen.insert(canonical_form(&h)) {
                out.push(h);
            }
        }
    }
    out
}

#[test]
fn acceptance_1_oracle_equivalence() {
    // exhaustive over labeled graphs for n <= 5
    for n in 0..=5usize {
        let bits = n * n.saturating_sub(1) / 2;
        for mask in 0u64..(1 << bits) {
            let g = oracle::graph_from_bitmask(n, mask);
            assert_eq!(
                count_induced_iso_classes(&g).unwrap(),
                oracle::count_iso_classes_by_search(&g),
                "n={n} mask={mask}"
            );
        }
    }
    // canonical representatives for 6 and 7
    let reps6 = representatives(6);
    assert_eq!(reps6.len(), 156);
    for g in &reps6 {
        assert_eq!(
            count_induced_iso_classes(g).unwrap(),
            oracle::count_iso_classes_by_search(g)
        );
    }
    let reps7 = extend_representatives(&reps6);
    assert_eq!(reps7.len(), 1044);
    for g in &reps7 {
        assert_eq!(
            count_induced_iso_classes(g).unwrap(),
            oracle::count_iso_classes_by_search(g)
        );
    }
    report(1, "oracle equivalence");
}

#[test]
fn acceptance_2_ramsey_exactness() {
    let reps6 = representatives(6);
    assert_eq!(reps6.len(), 156);
    for g in &reps6 {
        let h = ramsey_extract(g, 3, 3)
            .found()
            .expect("guaranteed on 6 nodes")
            .clone();
        assert!(h.len() >= 3);
        assert!(h.verify(g));
    }
    let c5 = Graph::cycle(5).unwrap();
    assert!(ramsey_extract(&c5, 3, 3).found().is_none());
    assert_eq!(rm_number(&c5).unwrap().0, 2);
    assert_eq!(diagonal_ramsey(3).unwrap(), 6);
    assert_eq!(es_bound(3, 3).unwrap(), 6);
    report(2, "ramsey exactness");
}

#[test]
fn acceptance_3_blowup_ceiling() {
    for n in 0..=4usize {
        for h in representatives(n) {
            for m in 1..=3usize {
                if m * n > 12 {
                    continue;
                }
                let g = blowup(&h, m).unwrap();
                let exact = count_induced_iso_classes_capped(&g, 12).unwrap();
                assert!(
                    BigUint::from(exact) <= blowup_iso_bound(&h, m),
                    "n={n} m={m}"
                );
            }
        }
    }
    let c5 = Graph::cycle(5).unwrap();
    assert!(blowup_rm_transfer(&c5, 2, 3, 3).unwrap());
    report(3, "blow-up ceiling");
}

#[test]
fn acceptance_4_key_inequality_mechanism() {
    let mut rng = isorich::rng::stream_rng(2024, 0);
    let c = desk();
    let mut checked = 0;
    while checked < 200 {
        let n = 4 + (rng.next_u64() % 9) as usize; // 4..=12
        let p = [0.3, 0.5, 0.7][(rng.next_u64() % 3) as usize];
        let g = Graph::random(n, p, rng.next_u64()).unwrap();
        // random nonempty proper subset as A
        let amask = rng.next_u64() % (1u64 << n);
        if amask == 0 || amask == (1u64 << n) - 1 {
            continue;
        }
        let a = NodeSet::from_members(n, (0..n).filter(|&v| amask & (1 << v) != 0)).unwrap();
        // the separation postcondition must hold for this (G, A)
        let bound = isorich::rat_to_f64(&c.c4) * (n as f64).log2().powi(2);
        let part = neighborhood_classes(&g, &a);
        let ell = part.class_count();
        let mut ok_sep = true;
        for class in &part.classes {
            let ms = class.members();
            for (i, &x) in ms.iter().enumerate() {
                for &y in &ms[i + 1..] {
                    ok_sep &= (g.dif(x, y).unwrap() as f64) <= bound;
                }
            }
        }
        assert!(ok_sep, "separation bound must hold at desk scale");

        // 2^ell <= n^|A| * I(G), exactly
        let exact = count_induced_iso_classes_capped(&g, 12).unwrap();
        let lhs = BigUint::from(1u32) << ell;
        let rhs = BigUint::from(n).pow(a.len() as u32) * BigUint::from(exact);
        assert!(lhs <= rhs, "n={n} |A|={} ell={ell} I={exact}", a.len());

        // all pinned class-union structures pairwise distinct
        if ell <= 10 {
            let family = iso_rich_family(&g, &part, 1 << ell);
            assert_eq!(family.len(), 1 << ell);
            let forms: HashSet<CanonicalForm> = family
                .iter()
                .map(|(_, pg)| pinned_canonical_form(pg))
                .collect();
            assert_eq!(forms.len(), 1 << ell, "pinned forms must be distinct");
        }
        checked += 1;
    }
    report(4, "key inequality mechanism");
}

#[test]
fn acceptance_5_pipeline_soundness() {
    let desk_c = desk();
    let theo_c = derive_constants(Rat::from_integer(1), &ConstantOverrides::default()).unwrap();

    let mut graphs: Vec<Graph> = Vec::new();
    for &n in &[32usize, 64, 128] {
        graphs.push(Graph::empty(n).unwrap());
        graphs.push(Graph::complete(n).unwrap());
        graphs.push(Graph::random(n, 0.5, n as u64).unwrap());
    }
    let c5 = Graph::cycle(5).unwrap();
    for &m in &[6usize, 13, 26] {
        graphs.push(blowup(&c5, m).unwrap()); // 30, 65, 130 nodes
    }

    let mut runs = 0;
    let mut certificates = 0;
    for constants in [&desk_c, &theo_c] {
        for (gi, g) in graphs.iter().enumerate() {
            for seed in 0..4u64 {
                if runs >= 100 {
                    break;
                }
                let run = run_pipeline(g, constants, 1000 + gi as u64 * 17 + seed).unwrap();
                for check in &run.trace.checks {
                    if matches!(check.name, "a-size-bound" | "a-separation" | "conflict-bound") {
                        if let Some(holds) = check.holds {
                            assert!(holds, "graph {gi} seed {seed}: {} failed", check.name);
                        }
                    }
                }
                if let Some(cert) = &run.certificate {
                    let rep = verify_certificate(g, cert);
                    assert!(rep.ok, "graph {gi} seed {seed}: {rep}");
                    certificates += 1;
                }
                runs += 1;
            }
        }
    }
    assert_eq!(runs, 96);
    // top up to 100 invocations with extra seeded desk runs
    let g = Graph::random(64, 0.5, 99).unwrap();
    for seed in 0..4u64 {
        let run = run_pipeline(&g, &desk_c, seed).unwrap();
        if let Some(cert) = &run.certificate {
            assert!(verify_certificate(&g, cert).ok);
            certificates += 1;
        }
        runs += 1;
    }
    assert_eq!(runs, 100);
    assert!(certificates >= 48, "desk-scale runs must produce certificates");
    report(5, "pipeline soundness");
}

#[test]
fn acceptance_6_erdos_bound_replication() {
    let mut good_128 = 0;
    for seed in 0..100u64 {
        let g = Graph::random(128, 0.5, seed).unwrap();
        if rm_number(&g).unwrap().0 <= 14 {
            good_128 += 1;
        }
    }
    assert!(good_128 >= 95, "G(128,1/2): {good_128}/100 within 2 log2 n");
    let mut good_64 = 0;
    for seed in 0..100u64 {
        let g = Graph::random(64, 0.5, 1000 + seed).unwrap();
        if rm_number(&g).unwrap().0 <= 12 {
            good_64 += 1;
        }
    }
    assert!(good_64 >= 95, "G(64,1/2): {good_64}/100 within 2 log2 n");
    report(6, "Erdos bound replication");
}

#[test]
fn acceptance_7_constants_derivation() {
    let one = derive_constants(Rat::from_integer(1), &ConstantOverrides::default()).unwrap();
    assert_eq!(one.m1_star, 11);
    let half = derive_constants(Rat::new(1, 2), &ConstantOverrides::default()).unwrap();
    assert_eq!(half.m1_star, 4);
    for c in [
        one,
        half,
        desk(),
        derive_constants(Rat::new(3, 2), &ConstantOverrides::default()).unwrap(),
    ] {
        assert_eq!(c.c3 * c.c4, Rat::from_integer(4), "exact product");
        assert!(c.c5 > Rat::from_integer(0));
    }
    report(7, "constants derivation");
}

#[test]
fn acceptance_8_greedy_selection_bound() {
    let mut rng = isorich::rng::stream_rng(77, 0);
    for case in 0..1000u32 {
        let istar = 1 + (rng.next_u64() % 1000) as usize;
        let dcap = (rng.next_u64() % 31) as usize;
        let u: Vec<Vec<usize>> = (0..istar)
            .map(|i| {
                let mut s: Vec<usize> = (0..dcap)
                    .map(|_| (rng.next_u64() % istar as u64) as usize)
                    .filter(|&j| j != i)
                    .collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let w = greedy_independent(&u);
        for (pos, &i) in w.iter().enumerate() {
            for &j in &w[pos + 1..] {
                assert!(!u[i].contains(&j) && !u[j].contains(&i), "case {case}");
            }
        }
        let d = u.iter().map(|s| s.len()).max().unwrap_or(0);
        assert!(d <= 30);
        assert!(
            w.len() * (d + 1) * (d + 1) >= istar,
            "case {case}: |W|={} i*={istar} D={d}",
            w.len()
        );
    }
    report(8, "greedy selection bound");
}

#[test]
fn acceptance_9_determinism() {
    let cfg = SweepConfig::from_toml(
        r#"
source = "gnp:64:0.5"
c1 = "1"
seed = 31
trials = 20
m1_star = 2
m2_star = 2
"#,
    )
    .unwrap();
    let first = run_sweep(&cfg, None).unwrap();
    let second = run_sweep(&cfg, None).unwrap();
    assert_eq!(first, second, "sweep rerun must be byte-identical");
    assert_eq!(first.lines().count(), 21);

    let mut rng = isorich::rng::stream_rng(5, 0);
    let mut class_sizes: HashMap<usize, u32> = HashMap::new();
    for _ in 0..1000 {
        let n = (rng.next_u64() % 13) as usize; // 0..=12
        let p = (rng.next_u64() % 100) as f64 / 100.0;
        let g = Graph::random(n, p, rng.next_u64()).unwrap();
        let enc = graph6_encode(&g);
        assert_eq!(graph6_decode(&enc).unwrap(), g);
        *class_sizes.entry(n).or_default() += 1;
    }
    assert!(class_sizes.len() == 13, "all sizes 0..=12 exercised");
    report(9, "determinism");
}
