mod common;

use pidtw::oracle::bf_treewidth;
use pidtw::safe_sep::{candidate_separators, decompose, heuristic_minor_safe, verify_minor_evidence, Verdict, DEFAULT_STEP_BUDGET};
use pidtw::solver::treewidth;
use pidtw::td::{extract, validate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn decomposition_preserves_treewidth() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xdec0);
    let mut applied = 0;
    let mut tried = 0;
    while applied < 100 {
        tried += 1;
        assert!(tried < 5000, "only {applied} graphs with a safe separator");
        let n = rng.gen_range(5..=13);
        let m = rng.gen_range(n..=2 * n);
        let g = common::random_connected(&mut rng, n, m);
        let d = decompose(&g, DEFAULT_STEP_BUDGET);
        if d.applied() == 0 {
            continue;
        }
        applied += 1;
        let want = bf_treewidth(&g).unwrap();
        let mut tds = Vec::new();
        let mut worst = 0;
        for p in &d.parts {
            worst = worst.max(bf_treewidth(&p.graph).unwrap());
            let (_, w) = treewidth(&p.graph).unwrap();
            tds.push(extract(&p.graph, &w).unwrap());
        }
        assert_eq!(worst, want, "graph {tried}: {:?}", g.edges().collect::<Vec<_>>());
        let td = d.glue(g.n(), &tds);
        assert!(validate(&g, &td).is_ok(), "graph {tried}: glued decomposition invalid");
        assert_eq!(td.width(), want);
    }
}

#[test]
fn every_yes_verdict_has_valid_evidence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe71d);
    let mut yes = 0;
    let mut with_minor = 0;
    for i in 0..100 {
        let n = rng.gen_range(5..=13);
        let m = common::densities(n)[i % 3];
        let g = common::random_connected(&mut rng, n, m);
        for s in candidate_separators(&g) {
            let r = heuristic_minor_safe(&g, &s, DEFAULT_STEP_BUDGET);
            if r.verdict != Verdict::Yes {
                continue;
            }
            yes += 1;
            if r.evidence.iter().any(|e| !e.bags.is_empty()) {
                with_minor += 1;
            }
            let comps = g.components(&s);
            assert_eq!(r.evidence.len(), comps.len());
            for c in &comps {
                let ev = r.evidence.iter().find(|e| e.component == *c).expect("evidence per component");
                if let Err(e) = verify_minor_evidence(&g, &s, c, ev) {
                    panic!("graph {i}, separator {:?}: {e}", s.to_vec());
                }
            }
        }
    }
    // non-clique separators must show up, or the evidence checks are vacuous
    assert!(yes > 0 && with_minor > 0, "{yes} yes verdicts, {with_minor} with contracted branch sets");
}
