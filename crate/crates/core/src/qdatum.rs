//! Q-data (Δ, σ, ξ): height functions, sinks and sources, Î_Q, the quiver Ψ and φ_Q.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quivers::Quiver;
use crate::root_data::{AffineType, FoldedCartanDatum, Node, RootVector};

/// A point (ι, p) of I × ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HatIndex {
    pub node: Node,
    pub level: i64,
}

impl HatIndex {
    pub fn new(node: Node, level: i64) -> Self {
        HatIndex { node, level }
    }
}

impl fmt::Display for HatIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.node, self.level)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QDatum {
    pub datum: FoldedCartanDatum,
    pub xi: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<String>) -> Self {
        ValidationReport { ok: violations.is_empty(), violations }
    }
}

#[derive(Serialize, Deserialize)]
struct QDatumJson {
    #[serde(rename = "type")]
    ty: AffineType,
    xi: BTreeMap<Node, i64>,
}

impl Serialize for QDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QDatumJson {
            ty: self.datum.affine_tag,
            xi: self.datum.nodes().map(|i| (i, self.xi(i))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = QDatumJson::deserialize(d)?;
        let datum = crate::root_data::folded_datum(raw.ty).map_err(D::Error::custom)?;
        let xi: Vec<i64> = datum
            .nodes()
            .map(|i| raw.xi.get(&i).copied().ok_or_else(|| D::Error::custom(format!("xi missing node {i}"))))
            .collect::<std::result::Result<_, _>>()?;
        Ok(QDatum { datum, xi })
    }
}

impl QDatum {
    /// Builds a Q-datum, rejecting height functions that fail conditions (i)/(ii).
    pub fn new(datum: FoldedCartanDatum, xi: Vec<i64>) -> Result<Self> {
        let q = Self::new_unchecked(datum, xi)?;
        let report = validate_q_datum(&q);
        if report.ok {
            Ok(q)
        } else {
            Err(Error::InvalidQDatum(report.violations.join("; ")))
        }
    }

    pub fn new_unchecked(datum: FoldedCartanDatum, xi: Vec<i64>) -> Result<Self> {
        if xi.len() != datum.rank {
            return Err(Error::InvalidQDatum(format!("expected {} heights, got {}", datum.rank, xi.len())));
        }
        Ok(QDatum { datum, xi })
    }

    pub fn xi(&self, i: Node) -> i64 {
        self.xi[i - 1]
    }

    pub fn contains(&self, x: HatIndex) -> bool {
        x.node >= 1
            && x.node <= self.datum.rank
            && (x.level - self.xi(x.node)).rem_euclid(2 * self.datum.d(x.node)) == 0
    }

    /// Î_Q ∩ (I × [lo, hi]), ordered by level then node.
    pub fn hat_points(&self, lo: i64, hi: i64) -> Vec<HatIndex> {
        let mut pts = Vec::new();
        for p in lo..=hi {
            for i in self.datum.nodes() {
                let x = HatIndex::new(i, p);
                if self.contains(x) {
                    pts.push(x);
                }
            }
        }
        pts
    }

    pub fn is_sink(&self, i: Node) -> bool {
        self.datum.neighbors(i).all(|j| self.xi(i) < self.xi(j))
    }

    pub fn is_source(&self, i: Node) -> bool {
        let dd = &self.datum;
        dd.neighbors(i).all(|j| self.xi(i) - 2 * dd.d(i) > self.xi(j) - 2 * dd.d(j))
    }
}

/// Checks conditions (i) and (ii) of a height function.
pub fn validate_q_datum(q: &QDatum) -> ValidationReport {
    let dd = &q.datum;
    let mut violations = Vec::new();
    for &(a, b) in &dd.edges {
        for (i, j) in [(a, b), (b, a)] {
            if dd.d(i) == dd.d(j) {
                if i < j && (q.xi(i) - q.xi(j)).abs() != dd.d(i) {
                    violations.push(format!("(i) fails on edge {i}-{j}"));
                }
            } else if dd.d(i) == 1 {
                let good = (0..dd.ord_sigma)
                    .map(|k| dd.sigma_pow(j, k))
                    .filter(|&j0| {
                        (q.xi(i) - q.xi(j0)).abs() == 1
                            && (0..dd.ord_sigma).all(|k| q.xi(dd.sigma_pow(j0, k)) == q.xi(j0) + 2 * k)
                    })
                    .count();
                if good != 1 {
                    violations.push(format!("(ii) fails on edge {i}-{j}: {good} admissible orbit representatives"));
                }
            }
        }
    }
    ValidationReport::from_violations(violations)
}

pub fn sinks(q: &QDatum) -> Vec<Node> {
    q.datum.nodes().filter(|&i| q.is_sink(i)).collect()
}

pub fn sources(q: &QDatum) -> Vec<Node> {
    q.datum.nodes().filter(|&i| q.is_source(i)).collect()
}

/// s_ι ξ for a sink ι.
pub fn reflect_q(q: &QDatum, i: Node) -> Result<QDatum> {
    q.datum.check_node(i)?;
    if !q.is_sink(i) {
        return Err(Error::NotASink(i));
    }
    let mut out = q.clone();
    out.xi[i - 1] += 2 * q.datum.d(i);
    Ok(out)
}

/// s_ι^{-1} ξ for a source ι.
pub fn reflect_q_inv(q: &QDatum, i: Node) -> Result<QDatum> {
    q.datum.check_node(i)?;
    if !q.is_source(i) {
        return Err(Error::NotASource(i));
    }
    let mut out = q.clone();
    out.xi[i - 1] -= 2 * q.datum.d(i);
    Ok(out)
}

/// The quiver Ψ_Q restricted to the level window [lo, hi].
pub fn psi_arrows(q: &QDatum, lo: i64, hi: i64) -> Quiver<HatIndex> {
    let dd = &q.datum;
    let vertices = q.hat_points(lo, hi);
    let mut quiver = Quiver::new(vertices.clone());
    for &x in &vertices {
        for j in dd.neighbors(x.node) {
            let y = HatIndex::new(j, x.level + dd.d(x.node).min(dd.d(j)));
            if y.level <= hi && q.contains(y) {
                quiver.add_arrow(x, y);
            }
        }
    }
    quiver
}

/// Direct sink simulation: every letter must be a sink of the running reflected datum.
pub fn is_adapted(q: &QDatum, word: &[Node]) -> bool {
    let mut cur = q.clone();
    for &i in word {
        if i == 0 || i > q.datum.rank {
            return false;
        }
        match reflect_q(&cur, i) {
            Ok(next) => cur = next,
            Err(_) => return false,
        }
    }
    true
}

/// Levels p_k of the letters of an adapted word.
pub fn adapted_levels(q: &QDatum, word: &[Node]) -> Result<Vec<i64>> {
    let mut cur = q.clone();
    let mut levels = Vec::with_capacity(word.len());
    for &i in word {
        levels.push(cur.xi(i));
        cur = reflect_q(&cur, i).map_err(|_| Error::WordNotAdapted)?;
    }
    Ok(levels)
}

/// An adapted reduced word of w₀, preferring the smallest available sink.
pub fn adapted_word(q: &QDatum) -> Vec<Node> {
    search_adapted(q, &mut |sinks: &mut Vec<Node>| sinks.sort())
}

/// An adapted reduced word of w₀ chosen by random sink order.
pub fn random_adapted_word<R: Rng>(q: &QDatum, rng: &mut R) -> Vec<Node> {
    search_adapted(q, &mut |sinks: &mut Vec<Node>| sinks.shuffle(rng))
}

fn search_adapted(q: &QDatum, order: &mut dyn FnMut(&mut Vec<Node>)) -> Vec<Node> {
    fn go(
        q: &QDatum,
        word: &mut Vec<Node>,
        order: &mut dyn FnMut(&mut Vec<Node>),
    ) -> bool {
        let dd = &q.datum;
        if word.len() == dd.ell {
            return true;
        }
        let mut cands: Vec<Node> = sinks(q)
            .into_iter()
            .filter(|&i| dd.apply_word(word, &RootVector::simple(dd.rank, i)).is_positive())
            .collect();
        order(&mut cands);
        for i in cands {
            word.push(i);
            let next = reflect_q(q, i).expect("sink");
            if go(&next, word, order) {
                return true;
            }
            word.pop();
        }
        false
    }
    let mut word = Vec::new();
    let found = go(q, &mut word, order);
    assert!(found, "every Q-datum admits an adapted reduced word of w0");
    word
}

fn check_adapted_w0(q: &QDatum, word: &[Node]) -> Result<Vec<i64>> {
    if word.len() != q.datum.ell || !q.datum.is_reduced(word) {
        return Err(Error::WordNotReduced);
    }
    adapted_levels(q, word)
}

/// φ_Q(x) = (β, m), read off an adapted reduced word of w₀ and the period rule
/// φ(ι^{m*}, p + m·ord(σ)h^∨) = (β, m) when φ(ι, p) = (β, 0).
pub fn phi_q(q: &QDatum, word: &[Node], x: HatIndex) -> Result<(RootVector, i64)> {
    let levels = check_adapted_w0(q, word)?;
    if !q.contains(x) {
        return Err(Error::NotLatticePoint(x.node, x.level));
    }
    let dd = &q.datum;
    let shift = dd.period_shift();
    let roots = dd.word_roots(word);
    for (k, (&i, &p)) in word.iter().zip(&levels).enumerate() {
        let diff = x.level - p;
        if diff.rem_euclid(shift) != 0 {
            continue;
        }
        let m = diff.div_euclid(shift);
        if dd.star_pow(i, m) == x.node {
            return Ok((roots[k].clone(), m));
        }
    }
    Err(Error::NotLatticePoint(x.node, x.level))
}

pub fn phi_q_inv(q: &QDatum, word: &[Node], beta: &RootVector, m: i64) -> Result<HatIndex> {
    let levels = check_adapted_w0(q, word)?;
    let dd = &q.datum;
    let roots = dd.word_roots(word);
    let k = roots
        .iter()
        .position(|r| r == beta)
        .ok_or_else(|| Error::Unsupported(format!("{beta} is not a positive root")))?;
    Ok(HatIndex::new(dd.star_pow(word[k], m), levels[k] + m * dd.period_shift()))
}

const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

pub(crate) fn subscript(n: usize) -> String {
    n.to_string().chars().map(|c| SUBSCRIPTS[c.to_digit(10).unwrap() as usize]).collect()
}

/// The spectral parameter c·base^p of a fundamental module, kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectral {
    pub coeff: String,
    pub base: String,
    pub exponent: i64,
}

impl fmt::Display for Spectral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = if self.exponent < 0 {
            format!("{{−{}}}", -self.exponent)
        } else {
            self.exponent.to_string()
        };
        write!(f, "{}{}^{}", self.coeff, self.base, e)
    }
}

fn sign(neg: bool) -> &'static str {
    if neg {
        "−"
    } else {
        ""
    }
}

/// Spectral parameter of V(ι, p) per the untwisted and twisted label tables.
pub fn spectral(datum: &FoldedCartanDatum, i: Node, p: i64) -> Spectral {
    use AffineType::*;
    let mq = "(−q)".to_string();
    let (coeff, base): (String, String) = match datum.affine_tag {
        A(_) | D(_) | E(_) => (String::new(), mq),
        C(_) | G2 => (String::new(), "(−q_sh)".into()),
        B(n) => (sign(datum.distance(i, n) % 2 == 1).into(), "(q_sh)".into()),
        F4 => (sign(datum.distance(i, 2) % 2 == 1).into(), "(q_sh)".into()),
        ATwisted(nn) => {
            let neg = i > nn.div_ceil(2) && nn % 2 == 1;
            (sign(neg).into(), mq)
        }
        DTwisted(m) => {
            let n = m - 1;
            let c = if i < n {
                match (n + 1 - i) % 4 {
                    0 => "",
                    1 => "√−1",
                    2 => "−",
                    _ => "−√−1",
                }
            } else {
                sign(i % 2 == 1)
            };
            (c.into(), mq)
        }
        E6Twisted => {
            let c = match i {
                1 | 3 => "",
                5 | 6 => "−",
                _ => "√−1",
            };
            (c.into(), mq)
        }
        D4Triality => {
            let c = match i {
                1 => "",
                2 => "−",
                3 => "ω",
                _ => "ω²",
            };
            (c.into(), mq)
        }
    };
    Spectral { coeff, base, exponent: p }
}

/// Human-readable label V(ϖ_{π(ι)})_{c·base^p} of the fundamental module at (ι, p).
pub fn fundamental_label(datum: &FoldedCartanDatum, x: HatIndex) -> String {
    format!("V(ϖ{})_{{{}}}", subscript(datum.pi(x.node)), spectral(datum, x.node, x.level))
}
