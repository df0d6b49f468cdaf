//! T-system relations, KR labels, seeds attached to chains and their transport along box moves.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::adm_seq::AdmissibleSequence;
use crate::cluster_engine::{mutate_seed, Seed};
use crate::error::{Error, Result};
use crate::iboxes::{t_path, Chain, IBox, MoveKind};
use crate::laurent::LaurentPoly;
use crate::qdatum::{spectral, HatIndex, Spectral};
use crate::quivers::{gls_quiver, to_exchange_matrix};

/// [M[a⁺,b]]·[M[a,b⁻]] = [M[a,b]]·[M[a⁺,b⁻]] + ∏_ȷ [M[a(ȷ)⁺,b(ȷ)⁻]]; boxes with a > b are units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub ibox: IBox,
    pub left: [IBox; 2],
    pub right_main: [IBox; 2],
    pub right_neighbors: Vec<IBox>,
}

fn product(f: &mut fmt::Formatter<'_>, boxes: &[IBox]) -> fmt::Result {
    let real: Vec<&IBox> = boxes.iter().filter(|b| !b.is_unit()).collect();
    if real.is_empty() {
        return write!(f, "1");
    }
    for b in real {
        write!(f, "[M{b}]")?;
    }
    Ok(())
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        product(f, &self.left)?;
        write!(f, " = ")?;
        product(f, &self.right_main)?;
        write!(f, " + ")?;
        product(f, &self.right_neighbors)
    }
}

pub fn t_relation(seq: &AdmissibleSequence, ibox: IBox) -> Result<Relation> {
    if !ibox.is_ibox(seq) {
        return Err(Error::NotAnIBox(ibox.a, ibox.b));
    }
    if ibox.a == ibox.b {
        return Err(Error::DegenerateBox);
    }
    let i = ibox.color(seq);
    let (ap, bm) = (seq.idx_plus(ibox.a), seq.idx_minus(ibox.b));
    let right_neighbors = seq
        .datum
        .neighbors(i)
        .map(|j| IBox::new(seq.idx_color_plus(ibox.a, j), seq.idx_color_minus(ibox.b, j)))
        .collect();
    Ok(Relation {
        ibox,
        left: [IBox::new(ap, ibox.b), IBox::new(ibox.a, bm)],
        right_main: [ibox, IBox::new(ap, bm)],
        right_neighbors,
    })
}

/// W^{(π(ι))}_{m, c·base^{p_a}}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KRLabel {
    pub node: usize,
    pub length: usize,
    pub exponent: i64,
    pub twist: Spectral,
}

impl fmt::Display for KRLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W^{{({})}}_{{{},{}}}", self.node, self.length, self.twist)
    }
}

pub fn kr_label(seq: &AdmissibleSequence, ibox: IBox) -> Result<KRLabel> {
    if !ibox.is_ibox(seq) {
        return Err(Error::NotAnIBox(ibox.a, ibox.b));
    }
    let i = ibox.color(seq);
    let m = ibox.phi_len(seq);
    let pa = seq.level(ibox.a);
    debug_assert_eq!(seq.level(ibox.b), pa + 2 * seq.datum.d(i) * (m as i64 - 1));
    Ok(KRLabel { node: seq.datum.pi(i), length: m, exponent: pa, twist: spectral(&seq.datum, i, pa) })
}

/// Fundamental label of the single box [k], as (ι, p).
pub fn cuspidal(seq: &AdmissibleSequence, k: i64) -> HatIndex {
    seq.at(k)
}

/// A seed whose cluster variables are labeled by the boxes of a chain; position k−1 holds box k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxSeed {
    pub seq: AdmissibleSequence,
    pub chain: Chain,
    pub seed: Seed,
    pub labels: Vec<IBox>,
    /// Boxes naming the initial indeterminates x_0, x_1, ….
    pub initial_labels: Vec<IBox>,
}

#[derive(Serialize)]
struct BoxSeedJson<'a> {
    chain: &'a Chain,
    range: IBox,
    labels: Vec<String>,
    kr_labels: Vec<String>,
    frozen: Vec<usize>,
    initial_labels: Vec<String>,
    variables: Vec<String>,
    seed: &'a Seed,
}

impl Serialize for BoxSeed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoxSeedJson {
            chain: &self.chain,
            range: self.chain.range(),
            labels: self.labels.iter().map(|b| b.to_string()).collect(),
            kr_labels: self.kr_labels().iter().map(|l| l.to_string()).collect(),
            frozen: self.seed.bmat.frozen().into_iter().map(|k| k + 1).collect(),
            initial_labels: self.initial_labels.iter().map(|b| b.to_string()).collect(),
            variables: (0..self.seed.vars.len()).map(|k| self.render_var(k)).collect(),
            seed: &self.seed,
        }
        .serialize(s)
    }
}

impl BoxSeed {
    pub fn kr_labels(&self) -> Vec<KRLabel> {
        self.labels.iter().map(|&b| kr_label(&self.seq, b).expect("chain boxes are i-boxes")).collect()
    }

    pub fn var_name(&self, v: u32) -> String {
        format!("x{}", self.initial_labels[v as usize])
    }

    pub fn render(&self, p: &LaurentPoly) -> String {
        p.render(&|v| self.var_name(v))
    }

    pub fn render_var(&self, k: usize) -> String {
        self.render(&self.seed.vars[k])
    }

    /// Cluster variable of a box, or 1 for a unit box; `None` if the box is not in the chain.
    pub fn var_of(&self, b: IBox) -> Option<LaurentPoly> {
        if b.is_unit() {
            return Some(LaurentPoly::one());
        }
        self.labels.iter().position(|&l| l == b).map(|k| self.seed.vars[k].clone())
    }

    /// Map from box to cluster variable.
    pub fn by_label(&self) -> BTreeMap<IBox, LaurentPoly> {
        self.labels.iter().copied().zip(self.seed.vars.iter().cloned()).collect()
    }
}

/// The seed of the chain ([b+1−k, b})_k on [lo, hi]: fresh variables, GLS exchange matrix,
/// K^ex = {s : lo ≤ s⁻}.
pub fn canonical_seed(seq: &AdmissibleSequence, lo: i64, hi: i64) -> BoxSeed {
    let mut bs = canonical_shape(seq, lo, hi);
    bs.seed = Seed::initial(bs.seed.bmat);
    bs
}

/// As [`canonical_seed`] without cluster variables.
pub fn canonical_shape(seq: &AdmissibleSequence, lo: i64, hi: i64) -> BoxSeed {
    let chain = Chain::canonical(lo, hi);
    let k: Vec<i64> = (lo..=hi).rev().collect();
    let kex: Vec<i64> = k.iter().copied().filter(|&s| seq.idx_minus(s) >= lo).collect();
    let bmat = to_exchange_matrix(&gls_quiver(seq, lo, hi), &k, &kex);
    let labels = chain.boxes(seq);
    BoxSeed { seq: seq.clone(), chain, seed: Seed::matrix_only(bmat), initial_labels: labels.clone(), labels }
}

/// Applies the box move B_s: a transposition permutes positions s−1 and s, a T-system move
/// mutates position s−1.
pub fn apply_box_move(bs: &BoxSeed, s: usize) -> Result<(BoxSeed, MoveKind)> {
    let kind = bs.chain.classify_move(&bs.seq, s)?;
    let chain = bs.chain.box_move(s)?;
    let new_boxes = chain.boxes(&bs.seq);
    let mut out = bs.clone();
    match kind {
        MoveKind::Transposition => {
            let mut perm: Vec<usize> = (0..bs.labels.len()).collect();
            perm.swap(s - 1, s);
            out.seed = bs.seed.permuted(&perm);
            out.labels.swap(s - 1, s);
        }
        MoveKind::TSystem(_) => {
            out.seed = mutate_seed(&bs.seed, s - 1)?;
            out.labels[s - 1] = new_boxes[s - 1];
        }
    }
    if out.labels != new_boxes {
        return Err(Error::Transport(format!("labels {:?} disagree with chain {} after B_{s}", out.labels, chain)));
    }
    out.chain = chain;
    Ok((out, kind))
}

pub fn transport(bs: &BoxSeed, moves: &[usize]) -> Result<BoxSeed> {
    moves.iter().try_fold(bs.clone(), |cur, &s| apply_box_move(&cur, s).map(|r| r.0))
}

/// The seed of an arbitrary finite chain, transported from the canonical chain with the same range.
pub fn seed_from_chain(seq: &AdmissibleSequence, chain: &Chain) -> Result<BoxSeed> {
    from_chain(seq, chain, true)
}

/// Exchange matrix and labels of the seed of `chain`, without cluster variables.
pub fn shape_from_chain(seq: &AdmissibleSequence, chain: &Chain) -> Result<BoxSeed> {
    from_chain(seq, chain, false)
}

fn from_chain(seq: &AdmissibleSequence, chain: &Chain, with_vars: bool) -> Result<BoxSeed> {
    if chain.unbounded {
        return Err(Error::InfiniteRange);
    }
    let r = chain.range();
    let start = if with_vars { canonical_seed(seq, r.a, r.b) } else { canonical_shape(seq, r.a, r.b) };
    let path = t_path(&start.chain, chain)?;
    transport(&start, &path)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveReport {
    pub ok: bool,
    pub kind: String,
    pub relation: Option<String>,
    pub detail: String,
}

/// Checks that B_s on `bs` replaces the moved variable by the quotient predicted by the
/// T-system, both as Laurent polynomials and as an exchange binomial in the current cluster.
pub fn verify_box_move_mutation(bs: &BoxSeed, s: usize) -> Result<MoveReport> {
    let seq = &bs.seq;
    let kind = bs.chain.classify_move(seq, s)?;
    let ibox = match kind {
        MoveKind::Transposition => {
            let (after, _) = apply_box_move(bs, s)?;
            let ok = after.seed.vars[s - 1] == bs.seed.vars[s] && after.seed.vars[s] == bs.seed.vars[s - 1];
            return Ok(MoveReport {
                ok,
                kind: "transposition".into(),
                relation: None,
                detail: "no mutation; permutation only".into(),
            });
        }
        MoveKind::TSystem(b) => b,
    };
    let rel = t_relation(seq, ibox)?;
    let fail = |detail: String| MoveReport { ok: false, kind: "t-system".into(), relation: Some(rel.to_string()), detail };
    let k0 = s - 1;
    let moved = bs.labels[k0];
    let Some(other) = rel.left.iter().copied().find(|&b| b != moved) else {
        return Ok(fail(format!("moved box {moved} is not a factor of the left side")));
    };
    if !rel.left.contains(&moved) {
        return Ok(fail(format!("moved box {moved} is not a factor of the left side")));
    }
    let pos_of = |b: IBox| bs.labels.iter().position(|&l| l == b);
    let mut main = Vec::new();
    let mut nbrs = Vec::new();
    for (dst, boxes) in [(&mut main, &rel.right_main[..]), (&mut nbrs, &rel.right_neighbors[..])] {
        for &b in boxes.iter().filter(|b| !b.is_unit()) {
            match pos_of(b) {
                Some(p) => dst.push(p),
                None => return Ok(fail(format!("participant {b} missing from the chain"))),
            }
        }
    }
    main.sort_unstable();
    nbrs.sort_unstable();
    let col = bs.seed.bmat.column(k0);
    let mut plus: Vec<usize> = Vec::new();
    let mut minus: Vec<usize> = Vec::new();
    for (i, v) in col {
        let dst = if v > 0 { &mut plus } else { &mut minus };
        dst.extend(std::iter::repeat_n(i, v.unsigned_abs() as usize));
    }
    let binomial_ok = (plus == main && minus == nbrs) || (plus == nbrs && minus == main);
    let prod = |ps: &[usize]| ps.iter().fold(LaurentPoly::one(), |acc, &p| acc.mul(&bs.seed.vars[p]));
    let Some(predicted) = prod(&main).add(&prod(&nbrs)).div_exact(&bs.seed.vars[k0]) else {
        return Ok(fail("predicted quotient is not Laurent".into()));
    };
    let (after, _) = apply_box_move(bs, s)?;
    let mut problems = Vec::new();
    if !binomial_ok {
        problems.push(format!("exchange binomial {plus:?}/{minus:?} differs from T-system {main:?}/{nbrs:?}"));
    }
    if after.seed.vars[k0] != predicted {
        problems.push("mutated variable differs from the T-system quotient".into());
    }
    if after.labels[k0] != other {
        problems.push(format!("new label {} is not {other}", after.labels[k0]));
    }
    Ok(MoveReport {
        ok: problems.is_empty(),
        kind: "t-system".into(),
        relation: Some(rel.to_string()),
        detail: if problems.is_empty() { format!("{moved} -> {other}") } else { problems.join("; ") },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VinoutReport {
    pub ok: bool,
    pub expected: BTreeMap<i64, i64>,
    pub actual: BTreeMap<i64, i64>,
}

/// Compares the GLS column at s with +1 on {s⁺} ∪ V^in(s) and −1 on {s⁻} ∪ V^out(s), where
/// V^in(s) = {s⁻(ȷ)⁺} and V^out(s) = {s(ȷ)⁺} over neighbors ȷ with a ȷ-position in (s⁻, s).
pub fn vinout_check(seq: &AdmissibleSequence, lo: i64, hi: i64, s: i64) -> Result<VinoutReport> {
    let sm = seq.idx_minus(s);
    if sm < lo || s > hi {
        return Err(Error::FrozenVertex(s.max(0) as usize));
    }
    let k: Vec<i64> = (lo..=hi).collect();
    let bmat = to_exchange_matrix(&gls_quiver(seq, lo, hi), &k, &[s]);
    let actual: BTreeMap<i64, i64> = bmat.column((s - lo) as usize).into_iter().map(|(i, v)| (k[i], v)).collect();
    let mut expected = BTreeMap::new();
    let mut put = |t: i64, v: i64| {
        if (lo..=hi).contains(&t) {
            expected.insert(t, v);
        }
    };
    put(seq.idx_plus(s), 1);
    put(sm, -1);
    for j in seq.datum.neighbors(seq.node(s)) {
        if sm < seq.idx_color_minus(s, j) {
            put(seq.idx_color_plus(sm, j), 1);
            put(seq.idx_color_plus(s, j), -1);
        }
    }
    Ok(VinoutReport { ok: expected == actual, expected, actual })
}
