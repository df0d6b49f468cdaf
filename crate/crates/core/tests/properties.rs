use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use boxcluster::adm_seq::{same_lattice_on, AdmissibleSequence};
use boxcluster::cluster_engine::{check_compatible, mutate_seed, Seed};
use boxcluster::iboxes::{apply_moves, boxes_commute, t_path, Chain};
use boxcluster::invariants_a::{bilinear, de_fund, e_vector, TypeA};
use boxcluster::presets::{default_sequence, example_q_datum, small_types};
use boxcluster::qdatum::{random_adapted_word, reflect_q, sinks, validate_q_datum, HatIndex};
use boxcluster::quivers::{gls_quiver, to_exchange_matrix, ExchangeMatrix};
use boxcluster::root_data::{AffineType, RootVector};
use boxcluster::tsystem_seed::{seed_from_chain, shape_from_chain, transport};

fn any_type() -> impl Strategy<Value = AffineType> {
    prop::sample::select(small_types())
}

fn seq_and_window() -> impl Strategy<Value = (AdmissibleSequence, i64, i64, u64)> {
    (any_type(), -8i64..8, 1i64..=10, any::<u64>())
        .prop_map(|(t, lo, w, seed)| (default_sequence(t).unwrap(), lo, lo + w - 1, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adapted_words_enumerate_positive_roots(t in any_type(), seed in any::<u64>()) {
        let q = example_q_datum(t).unwrap();
        let w = random_adapted_word(&q, &mut ChaCha8Rng::seed_from_u64(seed));
        let roots: BTreeSet<Vec<i64>> = q.datum.word_roots(&w).into_iter().map(|r| r.0).collect();
        let all: BTreeSet<Vec<i64>> = q.datum.positive_roots().into_iter().map(|r| r.0).collect();
        prop_assert_eq!(w.len(), q.datum.ell);
        prop_assert_eq!(roots, all);
    }

    #[test]
    fn q_data_stay_valid_under_sink_reflection(t in any_type(), steps in 0usize..12, pick in any::<u64>()) {
        let mut q = example_q_datum(t).unwrap();
        for k in 0..steps {
            let s = sinks(&q);
            prop_assert!(!s.is_empty());
            q = reflect_q(&q, s[(pick as usize + k) % s.len()]).unwrap();
            prop_assert!(validate_q_datum(&q).ok);
        }
    }

    #[test]
    fn rho_is_invertible_and_injective(t in any_type(), seed in any::<u64>()) {
        let q = example_q_datum(t).unwrap();
        let w = random_adapted_word(&q, &mut ChaCha8Rng::seed_from_u64(seed));
        let seq = AdmissibleSequence::from_q_datum(&q, &w).unwrap();
        prop_assert_eq!(seq.to_q_datum().unwrap(), (q.clone(), w));
        let l = seq.ell() as i64;
        let pts: BTreeSet<HatIndex> = (-2 * l..=2 * l).map(|k| seq.at(k)).collect();
        prop_assert_eq!(pts.len() as i64, 4 * l + 1);
        prop_assert!(same_lattice_on(&seq, &q, -l, l));
    }

    #[test]
    fn box_move_is_an_involution((seq, lo, hi, seed) in seq_and_window()) {
        let c = Chain::random_with_range(lo, hi, &mut ChaCha8Rng::seed_from_u64(seed));
        for s in c.movable_indices() {
            let m = c.box_move(s).unwrap();
            prop_assert_eq!(m.range(), c.range());
            prop_assert_eq!(m.box_move(s).unwrap(), c.clone());
        }
        let boxes = c.boxes(&seq);
        for x in &boxes {
            for y in &boxes {
                prop_assert!(boxes_commute(&seq, *x, *y));
            }
        }
    }

    #[test]
    fn t_paths_are_short_and_land(lo in -6i64..6, w in 1i64..=12, s1 in any::<u64>(), s2 in any::<u64>()) {
        let hi = lo + w - 1;
        let c1 = Chain::random_with_range(lo, hi, &mut ChaCha8Rng::seed_from_u64(s1));
        let c2 = Chain::random_with_range(lo, hi, &mut ChaCha8Rng::seed_from_u64(s2));
        let p = t_path(&c1, &c2).unwrap();
        prop_assert!(p.len() as i64 <= w * w);
        prop_assert_eq!(apply_moves(&c1, &p).unwrap(), c2);
    }

    #[test]
    fn gls_exchange_matrices_are_skew((seq, lo, hi, _s) in seq_and_window()) {
        let q = gls_quiver(&seq, lo, hi);
        prop_assert!(!q.has_loop_or_2cycle());
        let k: Vec<i64> = (lo..=hi).collect();
        let m = to_exchange_matrix(&q, &k, &k);
        prop_assert!(m.principal_is_skew());
    }

    #[test]
    fn transport_is_path_independent((seq, lo, hi, seed) in seq_and_window()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = Chain::random_with_range(lo, hi, &mut rng);
        let via = Chain::random_with_range(lo, hi, &mut rng);
        let direct = seed_from_chain(&seq, &target).unwrap();
        let start = seed_from_chain(&seq, &Chain::canonical(lo, hi)).unwrap();
        let detour = transport(&transport(&start, &t_path(&start.chain, &via).unwrap()).unwrap(), &t_path(&via, &target).unwrap()).unwrap();
        prop_assert_eq!(detour.by_label(), direct.by_label());
        prop_assert_eq!(detour.seed.bmat, direct.seed.bmat);
    }

    #[test]
    fn frozen_variables_never_move((seq, lo, hi, seed) in seq_and_window()) {
        let chain = Chain::random_with_range(lo, hi, &mut ChaCha8Rng::seed_from_u64(seed));
        let start = seed_from_chain(&seq, &Chain::canonical(lo, hi)).unwrap();
        let end = seed_from_chain(&seq, &chain).unwrap();
        let frozen = |bs: &boxcluster::tsystem_seed::BoxSeed| -> BTreeSet<_> {
            bs.seed.bmat.frozen().into_iter().map(|k| (bs.labels[k], bs.seed.vars[k].clone())).collect()
        };
        prop_assert_eq!(frozen(&start), frozen(&end));
        let frozen_boxes: BTreeSet<_> = chain.frozen_indices(&seq).into_iter().map(|k| end.labels[k - 1]).collect();
        let from_matrix: BTreeSet<_> = end.seed.bmat.frozen().into_iter().map(|k| end.labels[k]).collect();
        prop_assert_eq!(frozen_boxes, from_matrix);
    }

    #[test]
    fn shapes_agree_with_full_seeds((seq, lo, hi, seed) in seq_and_window()) {
        let chain = Chain::random_with_range(lo, hi, &mut ChaCha8Rng::seed_from_u64(seed));
        let full = seed_from_chain(&seq, &chain).unwrap();
        let shape = shape_from_chain(&seq, &chain).unwrap();
        prop_assert_eq!(full.seed.bmat, shape.seed.bmat);
        prop_assert_eq!(full.labels, shape.labels);
    }

    #[test]
    fn random_mutations_are_laurent_and_positive(n in 2usize..=4, entries in prop::collection::vec(-1i64..=1, 25), ks in prop::collection::vec(0usize..5, 0..=8)) {
        let mut dense = vec![vec![0i64; 2 * n]; 2 * n];
        for i in 0..n {
            for j in i + 1..n {
                dense[i][j] = entries[i * 5 + j];
                dense[j][i] = -entries[i * 5 + j];
            }
            dense[n + i][i] = 1;
        }
        let mut lam = vec![vec![0i64; 2 * n]; 2 * n];
        for i in 0..n {
            lam[i][n + i] = 2;
            lam[n + i][i] = -2;
            for j in 0..n {
                lam[n + i][n + j] = 2 * dense[i][j];
            }
        }
        let b = ExchangeMatrix::from_dense(&dense, (0..n).collect());
        prop_assert!(check_compatible(&lam, &b));
        let mut s = Seed::initial(b).with_lambda(lam);
        for k in ks {
            s = mutate_seed(&s, k % n).unwrap();
            prop_assert!(s.vars.iter().all(|v| v.is_positive()));
            prop_assert!(check_compatible(s.lambda.as_ref().unwrap(), &s.bmat));
        }
    }

    #[test]
    fn denominators_are_shift_invariant(n in 1usize..=5, i in 1usize..=5, j in 1usize..=5, p in -20i64..20, q in -20i64..20, c in -30i64..30) {
        let (i, j) = ((i - 1) % n + 1, (j - 1) % n + 1);
        let (x, y) = (HatIndex::new(i, p), HatIndex::new(j, q));
        let d = de_fund(n, x, y).unwrap();
        prop_assert_eq!(d, de_fund(n, y, x).unwrap());
        prop_assert_eq!(d, de_fund(n, HatIndex::new(i, p + c), HatIndex::new(j, q + c)).unwrap());
    }

    #[test]
    fn bilinear_is_symmetric(n in 1usize..=4, xs in prop::collection::vec((1usize..=4, -10i64..10), 0..5), ys in prop::collection::vec((1usize..=4, -10i64..10), 0..5)) {
        let mk = |v: &[(usize, i64)]| e_vector(&v.iter().map(|&(i, p)| HatIndex::new((i - 1) % n + 1, p)).collect::<Vec<_>>());
        let (e, f) = (mk(&xs), mk(&ys));
        let b = TypeA { n };
        prop_assert_eq!(bilinear(&b, &e, &f).unwrap(), bilinear(&b, &f, &e).unwrap());
        if xs.len() == 1 {
            prop_assert_eq!(bilinear(&b, &e, &e).unwrap(), 2);
        }
    }
}

#[test]
fn star_is_minus_w0() {
    for t in small_types() {
        let dd = boxcluster::root_data::folded_datum(t).unwrap();
        for i in dd.nodes() {
            let a = RootVector::simple(dd.rank, i);
            assert_eq!(dd.minus_w0(&a), RootVector::simple(dd.rank, dd.star(i)), "{t} node {i}");
        }
    }
}

/// If s⁻ < t < s with adjacent colors and d_{i_s} < d_{i_t}, some t' in (s, s⁺) has color σ(i_t).
#[test]
fn folded_tendency_property() {
    use AffineType::*;
    for t in [B(2), B(3), C(3), C(4), F4, G2] {
        let seq = default_sequence(t).unwrap();
        let dd = &seq.datum;
        let l = seq.ell() as i64;
        for s in -l..=2 * l {
            let (is, sm, sp) = (seq.node(s), seq.idx_minus(s), seq.idx_plus(s));
            for u in sm + 1..s {
                let iu = seq.node(u);
                if dd.adjacent(is, iu) && dd.d(is) < dd.d(iu) {
                    assert!((s + 1..sp).any(|v| seq.node(v) == dd.sigma(iu)), "{t} s={s} t={u}");
                }
            }
        }
    }
}
