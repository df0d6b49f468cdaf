//! i-boxes, admissible chains encoded as (a, 𝔗), box moves and T-equivalence paths.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adm_seq::AdmissibleSequence;
use crate::error::{Error, Result};
use crate::root_data::Node;

/// An interval [a, b] of ℤ. It is an i-box of a sequence when a ≤ b and i_a = i_b;
/// intervals with a > b stand for the unit module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IBox {
    pub a: i64,
    pub b: i64,
}

impl IBox {
    pub fn new(a: i64, b: i64) -> Self {
        IBox { a, b }
    }

    pub fn is_unit(&self) -> bool {
        self.a > self.b
    }

    pub fn is_ibox(&self, seq: &AdmissibleSequence) -> bool {
        self.a <= self.b && seq.node(self.a) == seq.node(self.b)
    }

    pub fn color(&self, seq: &AdmissibleSequence) -> Node {
        seq.node(self.a)
    }

    /// |[a,b]|_φ = #{t ∈ [a,b] : i_t = i_a}.
    pub fn phi_len(&self, seq: &AdmissibleSequence) -> usize {
        let i = seq.node(self.a);
        (self.a..=self.b).filter(|&t| seq.node(t) == i).count()
    }

    /// Positions t ∈ [a,b] with i_t = i_a.
    pub fn positions(&self, seq: &AdmissibleSequence) -> Vec<i64> {
        let i = seq.node(self.a);
        (self.a..=self.b).filter(|&t| seq.node(t) == i).collect()
    }

    /// [a⁺, b]
    pub fn shrink_left(&self, seq: &AdmissibleSequence) -> IBox {
        IBox::new(seq.idx_plus(self.a), self.b)
    }

    /// [a, b⁻]
    pub fn shrink_right(&self, seq: &AdmissibleSequence) -> IBox {
        IBox::new(self.a, seq.idx_minus(self.b))
    }
}

impl fmt::Display for IBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == self.b {
            write!(f, "[{}]", self.a)
        } else {
            write!(f, "[{},{}]", self.a, self.b)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    fn flip(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

/// An admissible chain of i-boxes, encoded by its first box [a] and the directions 𝔗 in which
/// the envelope grows. An unbounded chain stores a finite prefix of an infinite code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub base: i64,
    pub code: Vec<Side>,
    pub unbounded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    Transposition,
    TSystem(IBox),
}

/// Boxes and envelopes of a chain inside a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpandedChain {
    pub boxes: Vec<IBox>,
    pub envelopes: Vec<IBox>,
}

impl Chain {
    pub fn new(base: i64, code: Vec<Side>) -> Self {
        Chain { base, code, unbounded: false }
    }

    /// The chain ([b+1-k, b})_k used as the starting point of seed transport.
    pub fn canonical(lo: i64, hi: i64) -> Self {
        Chain::new(hi, vec![Side::L; (hi - lo) as usize])
    }

    pub fn len(&self) -> usize {
        self.code.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn code_string(&self) -> String {
        self.code.iter().map(|s| if *s == Side::L { 'L' } else { 'R' }).collect()
    }

    /// The range [a - #L, a + #R].
    pub fn range(&self) -> IBox {
        let l = self.code.iter().filter(|&&s| s == Side::L).count() as i64;
        let r = self.code.len() as i64 - l;
        IBox::new(self.base - l, self.base + r)
    }

    pub fn envelopes(&self) -> Vec<IBox> {
        let mut env = IBox::new(self.base, self.base);
        let mut out = vec![env];
        for s in &self.code {
            match s {
                Side::L => env.a -= 1,
                Side::R => env.b += 1,
            }
            out.push(env);
        }
        out
    }

    pub fn expand(&self, seq: &AdmissibleSequence) -> ExpandedChain {
        let envelopes = self.envelopes();
        let mut boxes = vec![envelopes[0]];
        for (k, s) in self.code.iter().enumerate() {
            let e = envelopes[k + 1];
            boxes.push(match s {
                Side::L => IBox::new(e.a, seq.idx_color_minus(e.b, seq.node(e.a))),
                Side::R => IBox::new(seq.idx_color_plus(e.a, seq.node(e.b)), e.b),
            });
        }
        ExpandedChain { boxes, envelopes }
    }

    pub fn boxes(&self, seq: &AdmissibleSequence) -> Vec<IBox> {
        self.expand(seq).boxes
    }

    /// Box list in the notation ([0],[-1],[-2,0]).
    pub fn pretty(&self, seq: &AdmissibleSequence) -> String {
        let parts: Vec<String> = self.boxes(seq).iter().map(|b| b.to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// B_s is allowed when s = 1 or T_{s-1} ≠ T_s.
    pub fn movable(&self, s: usize) -> bool {
        s >= 1 && s < self.len() && (s == 1 || self.code[s - 2] != self.code[s - 1])
    }

    pub fn movable_indices(&self) -> Vec<usize> {
        (1..self.len()).filter(|&s| self.movable(s)).collect()
    }

    pub fn box_move(&self, s: usize) -> Result<Chain> {
        if !self.movable(s) {
            return Err(Error::NotMovable(s));
        }
        let mut out = self.clone();
        if s == 1 {
            out.base += match self.code[0] {
                Side::L => -1,
                Side::R => 1,
            };
        } else {
            out.code[s - 2] = out.code[s - 2].flip();
        }
        out.code[s - 1] = out.code[s - 1].flip();
        Ok(out)
    }

    /// A move is a T-system move iff the envelope 𝔠̃_{s+1} is an i-box.
    pub fn classify_move(&self, seq: &AdmissibleSequence, s: usize) -> Result<MoveKind> {
        if !self.movable(s) {
            return Err(Error::NotMovable(s));
        }
        let env = self.envelopes()[s];
        Ok(if env.is_ibox(seq) { MoveKind::TSystem(env) } else { MoveKind::Transposition })
    }

    /// Box numbers k (from 1) with 𝔠_k = [a(ι)⁺, b(ι)⁻] for the range [a, b].
    pub fn frozen_indices(&self, seq: &AdmissibleSequence) -> BTreeSet<usize> {
        if self.unbounded {
            return BTreeSet::new();
        }
        let r = self.range();
        self.boxes(seq)
            .iter()
            .enumerate()
            .filter(|(_, bx)| {
                let i = bx.color(seq);
                bx.a == seq.idx_color_plus(r.a, i) && bx.b == seq.idx_color_minus(r.b, i)
            })
            .map(|(k, _)| k + 1)
            .collect()
    }

    pub fn member_index(&self, seq: &AdmissibleSequence, ibox: IBox) -> Option<usize> {
        self.boxes(seq).iter().position(|&b| b == ibox).map(|k| k + 1)
    }

    /// A uniformly random finite chain with the given range.
    pub fn random_with_range<R: Rng>(lo: i64, hi: i64, rng: &mut R) -> Chain {
        let n = (hi - lo) as usize;
        let base = rng.gen_range(lo..=hi);
        let mut code = vec![Side::L; (base - lo) as usize];
        code.extend(vec![Side::R; (hi - base) as usize]);
        for k in (1..n).rev() {
            let j = rng.gen_range(0..=k);
            code.swap(k, j);
        }
        Chain::new(base, code)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.base, self.code_string())?;
        if self.unbounded {
            write!(f, "...")?;
        }
        Ok(())
    }
}

fn parse_code(s: &str) -> Result<Vec<Side>> {
    s.chars()
        .map(|c| match c.to_ascii_uppercase() {
            'L' => Ok(Side::L),
            'R' => Ok(Side::R),
            _ => Err(Error::Parse(format!("bad code letter {c:?}"))),
        })
        .collect()
}

impl FromStr for Chain {
    type Err = Error;

    /// Parses `a:CODE`, e.g. `-1:RL`; a trailing `...` marks an unbounded chain.
    fn from_str(s: &str) -> Result<Self> {
        let (a, code) = s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("expected a:CODE, got {s:?}")))?;
        let (code, unbounded) = match code.strip_suffix("...") {
            Some(c) => (c, true),
            None => (code, false),
        };
        let base = a.trim().parse().map_err(|_| Error::Parse(format!("bad base {a:?}")))?;
        Ok(Chain { base, code: parse_code(code.trim())?, unbounded })
    }
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    a: i64,
    code: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    unbounded: bool,
}

impl Serialize for Chain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChainJson { a: self.base, code: self.code_string(), unbounded: self.unbounded }.serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ChainInput {
    Text(String),
    Object(ChainJson),
}

/// Accepts {a, code} or the text form "a:CODE".
impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ChainInput::deserialize(d)? {
            ChainInput::Text(t) => t.parse().map_err(serde::de::Error::custom),
            ChainInput::Object(raw) => {
                let code = parse_code(&raw.code).map_err(serde::de::Error::custom)?;
                Ok(Chain { base: raw.a, code, unbounded: raw.unbounded })
            }
        }
    }
}

/// a₁⁻ < a₂ ≤ b₂ < b₁⁺ or the same with the roles exchanged.
pub fn boxes_commute(seq: &AdmissibleSequence, b1: IBox, b2: IBox) -> bool {
    let nested = |x: IBox, y: IBox| seq.idx_minus(x.a) < y.a && y.a <= y.b && y.b < seq.idx_plus(x.b);
    nested(b1, b2) || nested(b2, b1)
}

/// Moves taking a chain to the all-L chain with the same range.
fn normalize(chain: &Chain) -> Vec<usize> {
    let mut moves = Vec::new();
    let mut c = chain.clone();
    while let Some(j) = c.code.iter().position(|&s| s == Side::R) {
        let s = j + 1;
        moves.push(s);
        c = c.box_move(s).expect("first R is always movable");
    }
    moves
}

/// A sequence of box moves from `c1` to `c2`; both must have the same finite range.
pub fn t_path(c1: &Chain, c2: &Chain) -> Result<Vec<usize>> {
    if c1.unbounded || c2.unbounded {
        return Err(Error::InfiniteRange);
    }
    if c1.range() != c2.range() {
        return Err(Error::RangesDiffer);
    }
    let mut path = normalize(c1);
    let mut back = normalize(c2);
    back.reverse();
    path.extend(back);
    Ok(path)
}

pub fn apply_moves(chain: &Chain, moves: &[usize]) -> Result<Chain> {
    moves.iter().try_fold(chain.clone(), |c, &s| c.box_move(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::section5_sequence;

    fn ch(s: &str) -> Chain {
        s.parse().unwrap()
    }

    #[test]
    fn expand_examples() {
        let s = section5_sequence();
        assert_eq!(ch("0:LL").pretty(&s), "([0],[-1],[-2,0])");
        assert_eq!(ch("-1:RL").pretty(&s), "([-1],[0],[-2,0])");
        assert_eq!(ch("-1:LR").pretty(&s), "([-1],[-2],[-2,0])");
        assert_eq!(ch("-2:RR").pretty(&s), "([-2],[-1],[-2,0])");
        assert_eq!(ch("5:").boxes(&s), vec![IBox::new(5, 5)]);
    }

    #[test]
    fn moves() {
        let s = section5_sequence();
        let c1 = ch("0:LL");
        let c2 = c1.box_move(1).unwrap();
        assert_eq!(c2, ch("-1:RL"));
        assert_eq!(c1.classify_move(&s, 1).unwrap(), MoveKind::Transposition);
        assert_eq!(c2.classify_move(&s, 2).unwrap(), MoveKind::TSystem(IBox::new(-2, 0)));
        let c3 = c2.box_move(2).unwrap();
        assert_eq!(c3, ch("-1:LR"));
        assert_eq!(c3.box_move(1).unwrap(), ch("-2:RR"));
        assert_eq!(c1.box_move(2), Err(Error::NotMovable(2)));
    }

    #[test]
    fn commuting() {
        let s = section5_sequence();
        assert!(boxes_commute(&s, IBox::new(0, 0), IBox::new(-2, 0)));
        assert!(!boxes_commute(&s, IBox::new(-2, -2), IBox::new(0, 0)));
        assert!(boxes_commute(&s, IBox::new(1, 1), IBox::new(1, 1)));
    }

    #[test]
    fn paths() {
        assert_eq!(t_path(&ch("0:LL"), &ch("-2:RR")).unwrap(), vec![1, 2, 1]);
        assert!(t_path(&ch("0:LL"), &ch("0:LL")).unwrap().is_empty());
        assert_eq!(t_path(&ch("0:LL"), &ch("0:RR")), Err(Error::RangesDiffer));
    }

    #[test]
    fn frozen_and_members() {
        let s = section5_sequence();
        let c = ch("0:LL");
        assert_eq!(c.frozen_indices(&s), BTreeSet::from([2, 3]));
        assert_eq!(c.member_index(&s, IBox::new(-1, -1)), Some(2));
        assert_eq!(c.member_index(&s, IBox::new(3, 3)), None);
        assert!(ch("0:LL...").frozen_indices(&s).is_empty());
    }

    #[test]
    fn serde_and_text() {
        let c = ch("-1:RL");
        assert_eq!(c.to_string(), "-1:RL");
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(j, r#"{"a":-1,"code":"RL"}"#);
        assert_eq!(serde_json::from_str::<Chain>(&j).unwrap(), c);
        assert!("x:LL".parse::<Chain>().is_err());
        assert!("0:LX".parse::<Chain>().is_err());
    }
}
