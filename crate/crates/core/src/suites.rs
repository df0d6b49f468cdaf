//! Randomized and exhaustive property suites shared by `boxcluster verify` and the test targets.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adm_seq::AdmissibleSequence;
use crate::cluster_engine::mutate_seed;
use crate::error::{Error, Result};
use crate::iboxes::{t_path, Chain, MoveKind};
use crate::invariants_a::{
    backend_for, cuspidal_de_checks, eb_check, gram_check, is_positive_semidefinite, lambda_symmetry_check,
    CheckReport,
};
use crate::qdatum::{adapted_word, phi_q, phi_q_inv, psi_arrows, random_adapted_word, HatIndex};
use crate::quivers::{check_gls_eq_hl, hl_quiver};
use crate::presets::{default_sequence, example_q_datum, example_sequence, section5_sequence, small_types};
use crate::root_data::AffineType;
use crate::tsystem_seed::{
    apply_box_move, canonical_seed, seed_from_chain, transport, verify_box_move_mutation, vinout_check,
};

pub const SUITES: &[&str] =
    &["example", "hl-eq-gls", "figure", "box-move", "positivity", "vinout", "type-a", "eb", "gram", "transport", "rho"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOptions {
    pub tag: Option<AffineType>,
    pub window: Option<(i64, i64)>,
    pub budget: Option<usize>,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { tag: None, window: None, budget: None, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub ok: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn from_check(suite: &str, mut r: CheckReport) -> Self {
        r.failures.truncate(20);
        SuiteReport { suite: suite.into(), ok: r.failures.is_empty(), checked: r.checked, failures: r.failures }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    let r = match name {
        "example" => example()?,
        "hl-eq-gls" => hl_eq_gls(opts)?,
        "figure" => figure()?,
        "box-move" => box_move(opts)?,
        "positivity" => positivity(opts)?,
        "vinout" => vinout(opts)?,
        "type-a" => type_a(opts)?,
        "eb" => eb(opts)?,
        "gram" => gram(opts)?,
        "transport" => transport_suite(opts)?,
        "rho" => rho(opts)?,
        _ => return Err(Error::Parse(format!("unknown suite {name:?}; expected one of {}", SUITES.join(", ")))),
    };
    Ok(SuiteReport::from_check(name, r))
}

fn rng(opts: &SuiteOptions, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ salt)
}

fn types_or(opts: &SuiteOptions, default: &[AffineType]) -> Vec<AffineType> {
    opts.tag.map(|t| vec![t]).unwrap_or_else(|| default.to_vec())
}

/// Window [1−ℓ, 2ℓ] of 3ℓ indices unless one is given.
fn window_or(opts: &SuiteOptions, seq: &AdmissibleSequence) -> (i64, i64) {
    let l = seq.ell() as i64;
    opts.window.unwrap_or((1 - l, 2 * l))
}

/// The worked A₃ chain walk (0,LL) → (−1,RL) → (−1,LR) → (−2,RR).
pub fn example() -> Result<CheckReport> {
    let seq = section5_sequence();
    let mut rep = CheckReport::default();
    let mut chain: Chain = "0:LL".parse()?;
    let mut bs = seed_from_chain(&seq, &chain)?;
    rep.record(chain.pretty(&seq) == "([0],[-1],[-2,0])", || format!("𝔠1 = {}", chain.pretty(&seq)));
    let expected = [
        (1, "-1:RL", "([-1],[0],[-2,0])"),
        (2, "-1:LR", "([-1],[-2],[-2,0])"),
        (1, "-2:RR", "([-2],[-1],[-2,0])"),
    ];
    for (k, (s, code, pretty)) in expected.into_iter().enumerate() {
        let rm = verify_box_move_mutation(&bs, s)?;
        rep.record(rm.ok, || format!("move {} at s={s}: {}", k + 2, rm.detail));
        bs = apply_box_move(&bs, s)?.0;
        chain = chain.box_move(s)?;
        rep.record(chain.to_string() == code, || format!("𝔠{} = {chain}, expected {code}", k + 2));
        rep.record(chain.pretty(&seq) == pretty, || format!("𝔠{} boxes {}", k + 2, chain.pretty(&seq)));
        rep.record(bs.chain == chain, || "seed chain out of sync".into());
    }
    Ok(rep.finish())
}

pub fn hl_eq_gls(opts: &SuiteOptions) -> Result<CheckReport> {
    use AffineType::*;
    let mut rep = CheckReport::default();
    let mut seqs: Vec<AdmissibleSequence> = Vec::new();
    for t in types_or(opts, &[A(3), A(4), B(2), C(3), D(4)]) {
        seqs.push(example_sequence(t)?);
    }
    if opts.tag.is_none() || opts.tag == Some(A(3)) {
        seqs.push(section5_sequence());
    }
    for seq in &seqs {
        let (a, b) = window_or(opts, seq);
        rep.record(check_gls_eq_hl(seq, a, b), || format!("{}: GLS ≠ HL on [{a},{b}]", seq.datum.affine_tag));
    }
    Ok(rep.finish())
}

type Arrow = ((usize, i64), (usize, i64));

/// Arrows read off the Ψ panels, by type.
pub const PSI_FIGURE_ARROWS: &[(&str, &[Arrow])] = &[
    ("A3", &[((1, -4), (2, -3)), ((2, -3), (1, -2)), ((2, -3), (3, -2)), ((3, -4), (2, -3))]),
    (
        "B2",
        &[
            ((1, -7), (2, -6)),
            ((2, -8), (1, -7)),
            ((2, -6), (3, -5)),
            ((3, -5), (2, -4)),
            ((2, -4), (1, -3)),
            ((1, -3), (2, -2)),
            ((2, -2), (3, -1)),
            ((3, -1), (2, 0)),
            ((2, 0), (1, 1)),
        ],
    ),
    (
        "C3",
        &[
            ((1, -6), (2, -5)),
            ((2, -5), (1, -4)),
            ((2, -5), (3, -4)),
            ((3, -4), (2, -3)),
            ((2, -3), (4, -2)),
            ((4, -6), (2, -5)),
        ],
    ),
    (
        "D4",
        &[
            ((1, -6), (2, -5)),
            ((3, -6), (2, -5)),
            ((4, -6), (2, -5)),
            ((2, -5), (1, -4)),
            ((2, -5), (3, -4)),
            ((2, -5), (4, -4)),
        ],
    ),
];

/// Arrows read off the HL panels, by type.
pub const HL_FIGURE_ARROWS: &[(&str, &[Arrow])] = &[
    (
        "A3",
        &[
            ((1, -6), (2, -5)),
            ((1, -6), (1, -8)),
            ((2, -5), (1, -4)),
            ((2, -5), (3, -4)),
            ((2, -5), (2, -7)),
        ],
    ),
    (
        "B2",
        &[
            ((2, -10), (1, -7)),
            ((2, -8), (3, -5)),
            ((1, -7), (2, -6)),
            ((1, -7), (1, -11)),
            ((3, -9), (2, -8)),
            ((3, -9), (3, -13)),
            ((2, -6), (1, -3)),
            ((2, -4), (3, -1)),
            ((3, -5), (2, -4)),
            ((1, -3), (2, -2)),
            ((2, -8), (2, -10)),
        ],
    ),
    (
        "C3",
        &[
            ((1, -10), (2, -9)),
            ((2, -9), (1, -8)),
            ((2, -9), (4, -6)),
            ((2, -7), (3, -4)),
            ((3, -8), (2, -7)),
            ((4, -10), (2, -9)),
            ((3, -8), (3, -12)),
        ],
    ),
    (
        "D4",
        &[
            ((1, -6), (2, -5)),
            ((2, -7), (1, -6)),
            ((2, -7), (3, -6)),
            ((2, -7), (4, -6)),
            ((2, -7), (2, -9)),
            ((3, -6), (2, -5)),
            ((4, -6), (2, -5)),
        ],
    ),
];

fn level_span(arrows: &[Arrow]) -> (i64, i64) {
    let ls = arrows.iter().flat_map(|&((_, p), (_, q))| [p, q]);
    (ls.clone().min().unwrap_or(0) - 2, ls.max().unwrap_or(0) + 2)
}

/// Every transcribed figure arrow is present in the generated Ψ and HL quivers.
pub fn figure() -> Result<CheckReport> {
    let mut rep = CheckReport::default();
    for (panel, table) in [("Ψ", PSI_FIGURE_ARROWS), ("HL", HL_FIGURE_ARROWS)] {
        for &(tag, arrows) in table {
            let q = example_q_datum(tag.parse()?)?;
            let (lo, hi) = level_span(arrows);
            let quiver = if panel == "Ψ" { psi_arrows(&q, lo, hi) } else { hl_quiver(&q.datum, &q.hat_points(lo, hi)) };
            for &((i, p), (j, r)) in arrows {
                let (x, y) = (HatIndex::new(i, p), HatIndex::new(j, r));
                rep.record(quiver.has_arrow(&x, &y), || format!("{panel} {tag}: missing {x} → {y}"));
            }
        }
    }
    Ok(rep.finish())
}

fn random_types() -> Vec<AffineType> {
    use AffineType::*;
    vec![A(2), A(3), A(4), B(2), B(3), C(2), C(3), D(4), G2, F4, ATwisted(3), ATwisted(4), DTwisted(4), D4Triality]
}

fn random_window<R: Rng>(rng: &mut R, seq: &AdmissibleSequence, max_width: i64) -> (i64, i64) {
    let l = seq.ell() as i64;
    let lo = rng.gen_range(-l..=l);
    (lo, lo + rng.gen_range(1..=max_width) - 1)
}

/// Every T-system move of random chains replaces the moved variable by the T-system quotient.
/// The budget counts instances with at least one T-system move.
pub fn box_move(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut rng = rng(opts, 1);
    let types = types_or(opts, &random_types());
    let budget = opts.budget.unwrap_or(200);
    let mut rep = CheckReport::default();
    let mut instances = 0;
    for _ in 0..20 * budget {
        if instances == budget {
            break;
        }
        let seq = default_sequence(*types.choose(&mut rng).unwrap())?;
        let (lo, hi) = opts.window.unwrap_or_else(|| random_window(&mut rng, &seq, 20));
        let chain = Chain::random_with_range(lo, hi, &mut rng);
        let moves: Vec<usize> = chain
            .movable_indices()
            .into_iter()
            .filter(|&s| matches!(chain.classify_move(&seq, s), Ok(MoveKind::TSystem(_))))
            .collect();
        if moves.is_empty() {
            continue;
        }
        instances += 1;
        let bs = seed_from_chain(&seq, &chain)?;
        for s in moves {
            let r = verify_box_move_mutation(&bs, s)?;
            rep.record(r.ok, || format!("{} {chain} B_{s}: {}", seq.datum.affine_tag, r.detail));
        }
    }
    rep.record(instances == budget, || format!("only {instances} instances with T-system moves"));
    Ok(rep.finish())
}

/// Random walks of ≤ 8 box moves or mutations from canonical seeds stay positive Laurent.
pub fn positivity(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut rng = rng(opts, 2);
    let types = types_or(opts, &random_types());
    let mut rep = CheckReport::default();
    for _ in 0..opts.budget.unwrap_or(150) {
        let seq = default_sequence(*types.choose(&mut rng).unwrap())?;
        let (lo, hi) = opts.window.unwrap_or_else(|| random_window(&mut rng, &seq, 12));
        let mut bs = canonical_seed(&seq, lo, hi);
        let mut attached = true;
        let mut seed = bs.seed.clone();
        for step in 0..rng.gen_range(1..=8) {
            let movable = bs.chain.movable_indices();
            if attached && !movable.is_empty() && rng.gen_bool(0.6) {
                bs = apply_box_move(&bs, *movable.choose(&mut rng).unwrap())?.0;
                seed = bs.seed.clone();
            } else {
                let ex: Vec<usize> = seed.bmat.exchangeable.iter().copied().collect();
                let Some(&k) = ex.choose(&mut rng) else { break };
                attached = false;
                match mutate_seed(&seed, k) {
                    Ok(s) => seed = s,
                    Err(e) => {
                        rep.record(false, || format!("{} [{lo},{hi}] step {step}: {e}", seq.datum.affine_tag));
                        break;
                    }
                }
            }
            for v in &seed.vars {
                rep.record(v.is_positive(), || format!("{} [{lo},{hi}] step {step}: negative coefficient", seq.datum.affine_tag));
            }
        }
    }
    Ok(rep.finish())
}

pub fn vinout(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut rep = CheckReport::default();
    for t in types_or(opts, &small_types()) {
        let seq = default_sequence(t)?;
        let windows = match opts.window {
            Some(w) => vec![w],
            None => vec![window_or(opts, &seq), (0, seq.ell() as i64), (-3, 3)],
        };
        for (lo, hi) in windows {
            for s in lo..=hi {
                if seq.idx_minus(s) < lo {
                    continue;
                }
                let r = vinout_check(&seq, lo, hi, s)?;
                rep.record(r.ok, || format!("{t} [{lo},{hi}] s={s}: expected {:?}, got {:?}", r.expected, r.actual));
            }
        }
    }
    Ok(rep.finish())
}

fn type_a_ranks(opts: &SuiteOptions) -> Result<Vec<usize>> {
    match opts.tag {
        None => Ok((1..=5).collect()),
        Some(AffineType::A(n)) => Ok(vec![n]),
        Some(_) => Err(Error::WrongBackend),
    }
}

pub fn type_a(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut rep = CheckReport::default();
    for n in type_a_ranks(opts)? {
        let w = 4 * (n as i64 + 1);
        merge(&mut rep, lambda_symmetry_check(n, -w / 2, w)?, &format!("A{n}"));
        let seq = example_sequence(AffineType::A(n))?;
        let (a, b) = window_or(opts, &seq);
        merge(&mut rep, cuspidal_de_checks(&seq, a, b)?, &format!("A{n}"));
    }
    Ok(rep.finish())
}

fn merge(into: &mut CheckReport, r: CheckReport, ctx: &str) {
    into.checked += r.checked;
    into.failures.extend(r.failures.into_iter().map(|f| format!("{ctx}: {f}")));
}

pub fn eb(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut rng = rng(opts, 3);
    let ranks = type_a_ranks(opts)?;
    let mut rep = CheckReport::default();
    for _ in 0..opts.budget.unwrap_or(40) {
        let n = *ranks.choose(&mut rng).unwrap();
        let seq = default_sequence(AffineType::A(n))?;
        let (lo, hi) = opts.window.unwrap_or_else(|| random_window(&mut rng, &seq, 24));
        let chain = Chain::random_with_range(lo, hi, &mut rng);
        merge(&mut rep, eb_check(&seq, &chain)?, &format!("A{n} {chain}"));
    }
    Ok(rep.finish())
}

pub fn gram(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut rep = CheckReport::default();
    let tag = opts.tag.unwrap_or(AffineType::A(3));
    backend_for(&crate::root_data::folded_datum(tag)?)?;
    let mut seqs = vec![example_sequence(tag)?];
    if tag == AffineType::A(3) {
        seqs.push(section5_sequence());
    }
    for seq in seqs {
        let (ok, ge, gb) = gram_check(&seq)?;
        rep.record(ok, || format!("{:?}: E-Gram {ge:?} ≠ root Gram {gb:?}", seq.period_i()));
        rep.record(is_positive_semidefinite(&ge, false), || format!("E-Gram {ge:?} is not positive semidefinite"));
    }
    Ok(rep.finish())
}

/// Seeds of random chains reached by T-moves from another chain agree with the direct construction.
pub fn transport_suite(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut rng = rng(opts, 4);
    let types = types_or(opts, &random_types());
    let mut rep = CheckReport::default();
    for _ in 0..opts.budget.unwrap_or(50) {
        let seq = default_sequence(*types.choose(&mut rng).unwrap())?;
        let (lo, hi) = opts.window.unwrap_or_else(|| random_window(&mut rng, &seq, 16));
        let c1 = Chain::random_with_range(lo, hi, &mut rng);
        let c2 = Chain::random_with_range(lo, hi, &mut rng);
        let via = transport(&seed_from_chain(&seq, &c1)?, &t_path(&c1, &c2)?)?;
        let direct = seed_from_chain(&seq, &c2)?;
        let ctx = || format!("{} {c1} → {c2}", seq.datum.affine_tag);
        let mut v1 = via.seed.vars.clone();
        let mut v2 = direct.seed.vars.clone();
        v1.sort();
        v2.sort();
        rep.record(v1 == v2, || format!("{}: variable multisets differ", ctx()));
        rep.record(via.by_label() == direct.by_label(), || format!("{}: box labels differ", ctx()));
        rep.record(via.seed.bmat == direct.seed.bmat, || format!("{}: exchange matrices differ", ctx()));
    }
    Ok(rep.finish())
}

/// ϱ round trip, and φ_Q maps positions 1..ℓ bijectively onto Φ⁺ × {0}.
pub fn rho(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut rng = rng(opts, 5);
    let mut rep = CheckReport::default();
    for t in types_or(opts, &small_types()) {
        let q = example_q_datum(t)?;
        let mut words = vec![adapted_word(&q)];
        for _ in 0..3 {
            words.push(random_adapted_word(&q, &mut rng));
        }
        for w in words {
            let seq = AdmissibleSequence::from_q_datum(&q, &w)?;
            let report = seq.validate();
            rep.record(report.ok, || format!("{t}: {:?}", report.violations));
            let (q2, w2) = seq.to_q_datum()?;
            rep.record(q2 == q && w2 == w, || format!("{t}: ϱ⁻¹ϱ ≠ id for {w:?}"));
            let l = seq.ell() as i64;
            let mut seen = BTreeSet::new();
            for k in 1..=2 * l {
                let x = seq.at(k);
                let (beta, m) = phi_q(&q, &w, x)?;
                rep.record(m == i64::from(k > l), || format!("{t}: φ_Q({x}) has shift {m}"));
                rep.record(phi_q_inv(&q, &w, &beta, m)? == x, || format!("{t}: φ_Q⁻¹φ_Q({x}) ≠ {x}"));
                if m == 0 {
                    seen.insert(beta.0.clone());
                }
            }
            let all: BTreeSet<Vec<i64>> = q.datum.positive_roots().into_iter().map(|r| r.0).collect();
            rep.record(seen == all, || format!("{t}: φ_Q is not onto Φ⁺ × {{0}}"));
        }
    }
    Ok(rep.finish())
}
