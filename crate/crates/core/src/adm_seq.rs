//! Admissible sequences (i_k, p_k)_{k∈ℤ}, the correspondence with (Q-datum, adapted word)
//! pairs, validation and index calculus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qdatum::{adapted_levels, is_adapted, validate_q_datum, HatIndex, QDatum, ValidationReport};
use crate::root_data::{folded_datum, AffineType, FoldedCartanDatum, Node};

/// One period (i_k, p_k), k = 1..ℓ, extended by i_{k+ℓ} = i_k^*, p_{k+ℓ} = p_k + ord(σ)h^∨.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSequence {
    pub datum: FoldedCartanDatum,
    period_i: Vec<Node>,
    period_p: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct SequenceJson {
    #[serde(rename = "type")]
    ty: AffineType,
    period_i: Vec<Node>,
    period_p: Vec<i64>,
}

impl Serialize for AdmissibleSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceJson {
            ty: self.datum.affine_tag,
            period_i: self.period_i.clone(),
            period_p: self.period_p.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AdmissibleSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SequenceJson::deserialize(d)?;
        let datum = folded_datum(raw.ty).map_err(D::Error::custom)?;
        AdmissibleSequence::from_parts(datum, raw.period_i, raw.period_p).map_err(D::Error::custom)
    }
}

impl AdmissibleSequence {
    /// Wraps a period without checking admissibility; see [`validate`](Self::validate).
    /// Every node must occur in the period so that the index calculus is total.
    pub fn from_parts(datum: FoldedCartanDatum, period_i: Vec<Node>, period_p: Vec<i64>) -> Result<Self> {
        if period_i.len() != datum.ell || period_p.len() != datum.ell {
            return Err(Error::InvalidSequence(format!("period must have length {}", datum.ell)));
        }
        for &i in &period_i {
            datum.check_node(i)?;
        }
        if let Some(j) = datum.nodes().find(|j| !period_i.contains(j)) {
            return Err(Error::InvalidSequence(format!("color {j} missing from period")));
        }
        Ok(AdmissibleSequence { datum, period_i, period_p })
    }

    /// ϱ: the sequence attached to a Q-datum and an adapted reduced word of w₀.
    pub fn from_q_datum(q: &QDatum, w0: &[Node]) -> Result<Self> {
        let dd = &q.datum;
        if w0.len() != dd.ell || !dd.is_reduced(w0) {
            return Err(Error::WordNotReduced);
        }
        if !is_adapted(q, w0) {
            return Err(Error::WordNotAdapted);
        }
        let levels = adapted_levels(q, w0)?;
        Self::from_parts(dd.clone(), w0.to_vec(), levels)
    }

    /// ϱ⁻¹: ξ_ι is the level at the first k ≥ 1 with i_k = ι.
    pub fn to_q_datum(&self) -> Result<(QDatum, Vec<Node>)> {
        let report = self.validate();
        if !report.ok {
            return Err(Error::InvalidSequence(report.violations.join("; ")));
        }
        let xi = self.datum.nodes().map(|j| self.level(self.idx_color_plus(1, j))).collect();
        let q = QDatum::new(self.datum.clone(), xi)?;
        Ok((q, self.period_i.clone()))
    }

    pub fn ell(&self) -> usize {
        self.datum.ell
    }

    pub fn period_i(&self) -> &[Node] {
        &self.period_i
    }

    pub fn period_p(&self) -> &[i64] {
        &self.period_p
    }

    fn split(&self, k: i64) -> (usize, i64) {
        let l = self.ell() as i64;
        let r = (k - 1).rem_euclid(l);
        (r as usize, (k - 1 - r) / l)
    }

    pub fn node(&self, k: i64) -> Node {
        let (r, m) = self.split(k);
        self.datum.star_pow(self.period_i[r], m)
    }

    pub fn level(&self, k: i64) -> i64 {
        let (r, m) = self.split(k);
        self.period_p[r] + m * self.datum.period_shift()
    }

    pub fn at(&self, k: i64) -> HatIndex {
        HatIndex::new(self.node(k), self.level(k))
    }

    /// The unique k with (i_k, p_k) = x, if any.
    pub fn position_of(&self, x: HatIndex) -> Option<i64> {
        let shift = self.datum.period_shift();
        let l = self.ell() as i64;
        (0..self.ell()).find_map(|r| {
            let diff = x.level - self.period_p[r];
            if diff.rem_euclid(shift) != 0 {
                return None;
            }
            let m = diff.div_euclid(shift);
            (self.datum.star_pow(self.period_i[r], m) == x.node).then_some(r as i64 + 1 + m * l)
        })
    }

    fn search_bound(&self) -> i64 {
        2 * self.ell() as i64 + 1
    }

    /// s⁺ = min{t > s : i_t = i_s}.
    pub fn idx_plus(&self, s: i64) -> i64 {
        self.idx_color_plus(s + 1, self.node(s))
    }

    /// s⁻ = max{t < s : i_t = i_s}.
    pub fn idx_minus(&self, s: i64) -> i64 {
        self.idx_color_minus(s - 1, self.node(s))
    }

    /// s(ȷ)⁺ = min{t ≥ s : i_t = ȷ}.
    pub fn idx_color_plus(&self, s: i64, j: Node) -> i64 {
        (s..s + self.search_bound())
            .find(|&t| self.node(t) == j)
            .expect("every color occurs within two periods")
    }

    /// s(ȷ)⁻ = max{t ≤ s : i_t = ȷ}.
    pub fn idx_color_minus(&self, s: i64, j: Node) -> i64 {
        (s - self.search_bound()..=s)
            .rev()
            .find(|&t| self.node(t) == j)
            .expect("every color occurs within two periods")
    }

    /// Re-indexed sequence k ↦ (i_{k+m}, p_{k+m}).
    pub fn shift(&self, m: i64) -> Self {
        let period_i = (1..=self.ell() as i64).map(|k| self.node(k + m)).collect();
        let period_p = (1..=self.ell() as i64).map(|k| self.level(k + m)).collect();
        AdmissibleSequence { datum: self.datum.clone(), period_i, period_p }
    }

    /// True iff {(i_k,p_k) : k ≤ 0} is exactly the part of Î below the height function ξ.
    pub fn is_xi_adapted(&self, xi: &[i64]) -> bool {
        xi.len() == self.datum.rank
            && self.datum.nodes().all(|j| {
                let k = self.idx_color_minus(0, j);
                self.level(k) + 2 * self.datum.d(j) == xi[j - 1]
            })
    }

    /// Checks conditions (a)-(d) on the window [1-ℓ, 2ℓ].
    ///
    /// Shifting k by ℓ replaces (i, p) by (i^*, p + ord(σ)h^∨). Since * is a diagram
    /// automorphism commuting with σ and preserving d, each condition is invariant under this
    /// shift. A reduced word of w₀ contains every color, so s⁺ - s ≤ ℓ and every pair of indices
    /// entering (a) or (b) lies within one period of s. For (c), levels of a fixed color are
    /// constant modulo 2d by (a), so one representative t per color suffices. Hence checking
    /// base points s ∈ [1, ℓ] with partners in [1-ℓ, 2ℓ] covers all k ∈ ℤ.
    pub fn validate(&self) -> ValidationReport {
        let dd = &self.datum;
        let l = self.ell() as i64;
        let mut v = Vec::new();
        for s in 1..=l {
            let i = self.node(s);
            let sp = self.idx_plus(s);
            if self.level(sp) != self.level(s) + 2 * dd.d(i) {
                v.push(format!("(a) fails at s={s}"));
            }
            for t in (s + 1)..sp {
                let j = self.node(t);
                if dd.adjacent(i, j) && self.idx_minus(t) < s {
                    let want = self.level(s) + dd.d(i).min(dd.d(j));
                    if self.level(t) != want {
                        v.push(format!("(b) fails at (s,t)=({s},{t})"));
                    }
                }
            }
            for t in (1 - l)..=(2 * l) {
                if self.node(t) == dd.sigma(i) && (self.level(t) - self.level(s) - 2).rem_euclid(2 * dd.d(i)) != 0 {
                    v.push(format!("(c) fails at (s,t)=({s},{t})"));
                    break;
                }
            }
        }
        for k in (1 - l)..=(l + 1) {
            let word: Vec<Node> = (k..k + l).map(|t| self.node(t)).collect();
            if !dd.is_reduced(&word) {
                v.push(format!("(d) fails on window starting at {k}"));
            }
        }
        ValidationReport::from_violations(v)
    }

    /// Adjacent colors must satisfy p_s < p_t iff s < t; returns offending pairs in [lo, hi].
    pub fn tendency_violations(&self, lo: i64, hi: i64) -> Vec<(i64, i64)> {
        let mut bad = Vec::new();
        for s in lo..=hi {
            for t in (s + 1)..=hi {
                if self.datum.adjacent(self.node(s), self.node(t)) && self.level(s) >= self.level(t) {
                    bad.push((s, t));
                }
            }
        }
        bad
    }
}

/// Sanity check that a sequence and a Q-datum describe the same set Î on a window.
pub fn same_lattice_on(seq: &AdmissibleSequence, q: &QDatum, lo: i64, hi: i64) -> bool {
    validate_q_datum(q).ok
        && q.hat_points(lo, hi).into_iter().all(|x| seq.position_of(x).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> AdmissibleSequence {
        let q = QDatum::new(folded_datum(AffineType::A(3)).unwrap(), vec![0, 1, 0]).unwrap();
        AdmissibleSequence::from_q_datum(&q, &[1, 3, 2, 1, 3, 2]).unwrap()
    }

    #[test]
    fn from_q_datum_example() {
        let s = a3();
        assert_eq!(s.period_i(), &[1, 3, 2, 1, 3, 2]);
        assert_eq!(s.period_p(), &[0, 0, 1, 2, 2, 3]);
        assert_eq!(s.at(7), HatIndex::new(3, 4));
        assert!(s.validate().ok);
    }

    #[test]
    fn a1_degenerate() {
        let q = QDatum::new(folded_datum(AffineType::A(1)).unwrap(), vec![5]).unwrap();
        let s = AdmissibleSequence::from_q_datum(&q, &[1]).unwrap();
        assert_eq!(s.level(2), 7);
        assert_eq!(s.level(-1), 1);
        assert_eq!(s.to_q_datum().unwrap().0.xi, vec![5]);
    }

    #[test]
    fn errors() {
        let q = QDatum::new(folded_datum(AffineType::A(3)).unwrap(), vec![0, 1, 0]).unwrap();
        assert_eq!(AdmissibleSequence::from_q_datum(&q, &[1, 1, 2, 1, 3, 2]), Err(Error::WordNotReduced));
        assert_eq!(AdmissibleSequence::from_q_datum(&q, &[2, 1, 3, 2, 1, 3]), Err(Error::WordNotAdapted));
    }

    #[test]
    fn roundtrip() {
        let (q, w) = a3().to_q_datum().unwrap();
        assert_eq!(q.xi, vec![0, 1, 0]);
        assert_eq!(w, vec![1, 3, 2, 1, 3, 2]);
    }

    #[test]
    fn broken_level_fails_b() {
        let s = a3();
        let mut p = s.period_p().to_vec();
        p[2] = 2;
        let bad = AdmissibleSequence::from_parts(s.datum.clone(), s.period_i().to_vec(), p).unwrap();
        let r = bad.validate();
        assert!(!r.ok);
        assert!(r.violations.iter().any(|m| m.starts_with("(b)")));
    }

    #[test]
    fn tendency() {
        assert!(a3().tendency_violations(-12, 12).is_empty());
    }

    #[test]
    fn index_calculus() {
        let q = QDatum::new(folded_datum(AffineType::A(3)).unwrap(), vec![0, 1, 2]).unwrap();
        let s = AdmissibleSequence::from_q_datum(&q, &[1, 2, 3, 1, 2, 1]).unwrap();
        let window: Vec<Node> = (-2..=3).map(|k| s.node(k)).collect();
        assert_eq!(window, vec![3, 2, 3, 1, 2, 3]);
        assert_eq!(s.idx_plus(0), 3);
        assert_eq!(s.idx_color_minus(0, 2), -1);
        assert_eq!(s.idx_color_minus(4, s.node(4)), 4);
        assert_eq!(s.idx_color_plus(4, s.node(4)), 4);
        assert_eq!(s.idx_minus(0), -2);
    }

    #[test]
    fn shifts() {
        let s = a3();
        let l = s.ell() as i64;
        let sh = s.shift(l);
        for k in -10..10 {
            assert_eq!(sh.node(k), s.datum.star(s.node(k)));
            assert_eq!(sh.level(k), s.level(k) + 4);
        }
        assert_eq!(s.shift(1).shift(-1), s);
        let (q1, _) = s.shift(1).to_q_datum().unwrap();
        let (q0, _) = s.to_q_datum().unwrap();
        assert_eq!(q1, crate::qdatum::reflect_q(&q0, 1).unwrap());
    }

    #[test]
    fn xi_adaptedness() {
        let s = a3();
        assert!(s.is_xi_adapted(&[0, 1, 0]));
        assert!(!s.is_xi_adapted(&[2, 1, 0]));
    }

    #[test]
    fn json() {
        let s = a3();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"type":"A3","period_i":[1,3,2,1,3,2],"period_p":[0,0,1,2,2,3]}"#);
        let back: AdmissibleSequence = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
