//! Independent reimplementations checked against the library.

use std::collections::{BTreeMap, BTreeSet};

use boxcluster::adm_seq::AdmissibleSequence;
use boxcluster::invariants_a::{de_fund, lambda_fund, lambda_inf_fund};
use boxcluster::presets::{default_sequence, example_q_datum, small_types};
use boxcluster::qdatum::{adapted_word, phi_q, HatIndex, QDatum};
use boxcluster::quivers::gls_quiver;
use boxcluster::root_data::RootVector;

fn add(a: &RootVector, b: &RootVector) -> RootVector {
    RootVector(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
}

/// Coxeter element: simple reflections ordered by increasing height, leftmost applied last.
fn coxeter(q: &QDatum, v: &RootVector) -> RootVector {
    let mut order: Vec<usize> = q.datum.nodes().collect();
    order.sort_by_key(|&i| q.xi(i));
    q.datum.apply_word(&order, v)
}

/// Σ α_j over j reachable from i along edges descending in height by one at each step.
fn lowest_root(q: &QDatum, i: usize) -> RootVector {
    let mut seen = BTreeSet::from([i]);
    let mut stack = vec![i];
    while let Some(a) = stack.pop() {
        for b in q.datum.neighbors(a) {
            if q.xi(b) == q.xi(a) - 1 && seen.insert(b) {
                stack.push(b);
            }
        }
    }
    let mut v = RootVector::zero(q.datum.rank);
    for j in seen {
        v.0[j - 1] = 1;
    }
    v
}

#[test]
fn phi_matches_mesh_recursion_for_untwisted_orbits() {
    let mut tested = 0;
    for t in small_types() {
        let q = example_q_datum(t).unwrap();
        let dd = &q.datum;
        if dd.nodes().any(|i| dd.sigma(i) != i) {
            continue;
        }
        tested += 1;
        let w = adapted_word(&q);
        let seq = AdmissibleSequence::from_q_datum(&q, &w).unwrap();
        let l = seq.ell() as i64;
        let region: BTreeMap<HatIndex, RootVector> = (1..=l)
            .map(|k| {
                let x = seq.at(k);
                let (b, m) = phi_q(&q, &w, x).unwrap();
                assert_eq!(m, 0);
                (x, b)
            })
            .collect();
        for i in dd.nodes() {
            let bottom = HatIndex::new(i, q.xi(i));
            assert_eq!(region.get(&bottom), Some(&lowest_root(&q, i)), "{t} row {i}");
        }
        for (&x, b) in &region {
            let up = HatIndex::new(x.node, x.level + 2);
            let Some(bu) = region.get(&up) else { continue };
            assert_eq!(&coxeter(&q, b), bu, "{t} at {x}");
            let mut mid = RootVector::zero(dd.rank);
            for j in dd.neighbors(x.node) {
                if let Some(bj) = region.get(&HatIndex::new(j, x.level + 1)) {
                    mid = add(&mid, bj);
                }
            }
            assert_eq!(add(b, bu), mid, "{t} mesh at {x}");
        }
        for (&x, b) in &region {
            let shifted = HatIndex::new(dd.star(x.node), x.level + dd.period_shift());
            assert_eq!(phi_q(&q, &w, shifted).unwrap(), (b.clone(), 1), "{t} shift of {x}");
        }
    }
    assert!(tested >= 10);
}

/// GLS arrows straight from the definition, scanning colors position by position.
fn gls_brute(seq: &AdmissibleSequence, a: i64, b: i64) -> BTreeSet<(i64, i64)> {
    let prev = |s: i64| (1..).map(|d| s - d).find(|&t| seq.node(t) == seq.node(s)).unwrap();
    let mut out = BTreeSet::new();
    for s in a..=b {
        for t in a..=b {
            if t == prev(s) {
                out.insert((s, t));
            }
            let adj = seq.datum.adjacent(seq.node(s), seq.node(t));
            if adj && prev(s) < prev(t) && prev(t) < s && s < t {
                out.insert((s, t));
            }
        }
    }
    out
}

#[test]
fn gls_quiver_matches_definition() {
    for t in small_types() {
        let seq = default_sequence(t).unwrap();
        let l = seq.ell() as i64;
        for (a, b) in [(1 - l, 2 * l), (-3, 4), (5, 5)] {
            let q = gls_quiver(&seq, a, b);
            assert_eq!(q.arrow_set(), gls_brute(&seq, a, b), "{t} [{a},{b}]");
            assert!(q.arrows().all(|(_, _, m)| m == 1));
        }
    }
}

fn de_brute(n: usize, x: HatIndex, y: HatIndex) -> i64 {
    let m = x.node.min(y.node).min(n + 1 - x.node).min(n + 1 - y.node) as i64;
    let dp = (x.level - y.level).abs();
    let base = x.node.abs_diff(y.node) as i64;
    i64::from(dp > base && dp <= base + 2 * m && (dp - base) % 2 == 0)
}

fn dual(n: usize, x: HatIndex, k: i64) -> HatIndex {
    let node = if k % 2 == 0 { x.node } else { n + 1 - x.node };
    HatIndex::new(node, x.level + k * (n as i64 + 1))
}

#[test]
fn lambdas_match_wide_brute_sums() {
    for n in 1..=4 {
        for i in 1..=n {
            for j in 1..=n {
                for p in -12..=12 {
                    let (x, y) = (HatIndex::new(i, 0), HatIndex::new(j, p));
                    assert_eq!(de_fund(n, x, y).unwrap() as i64, de_brute(n, x, y));
                    let (mut lam, mut inf) = (0, 0);
                    for k in -40i64..=40 {
                        let d = de_brute(n, x, dual(n, y, k));
                        inf += if k % 2 == 0 { d } else { -d };
                        lam += if (k + i64::from(k < 0)) % 2 == 0 { d } else { -d };
                    }
                    assert_eq!(lambda_fund(n, x, y).unwrap(), lam, "Λ {x} {y}");
                    assert_eq!(lambda_inf_fund(n, x, y).unwrap(), inf, "Λ^∞ {x} {y}");
                }
            }
        }
    }
}
