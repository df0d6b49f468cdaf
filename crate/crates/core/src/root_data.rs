//! Simply-laced root data, Weyl words and the folding attached to each affine type.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex of the simply-laced diagram, numbered from 1.
pub type Node = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AffineType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    /// `A_N^{(2)}`, stores N.
    ATwisted(usize),
    /// `D_{m}^{(2)}`, stores m = n+1.
    DTwisted(usize),
    D4Triality,
    E6Twisted,
}

impl AffineType {
    pub fn is_untwisted(&self) -> bool {
        !matches!(
            self,
            AffineType::ATwisted(_)
                | AffineType::DTwisted(_)
                | AffineType::D4Triality
                | AffineType::E6Twisted
        )
    }

    /// Label in the usual `X_n^{(t)}` notation.
    pub fn long_name(&self) -> String {
        match *self {
            AffineType::A(n) => format!("A_{n}^{{(1)}}"),
            AffineType::B(n) => format!("B_{n}^{{(1)}}"),
            AffineType::C(n) => format!("C_{n}^{{(1)}}"),
            AffineType::D(n) => format!("D_{n}^{{(1)}}"),
            AffineType::E(n) => format!("E_{n}^{{(1)}}"),
            AffineType::F4 => "F_4^{(1)}".into(),
            AffineType::G2 => "G_2^{(1)}".into(),
            AffineType::ATwisted(n) => format!("A_{n}^{{(2)}}"),
            AffineType::DTwisted(m) => format!("D_{m}^{{(2)}}"),
            AffineType::D4Triality => "D_4^{(3)}".into(),
            AffineType::E6Twisted => "E_6^{(2)}".into(),
        }
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AffineType::A(n) => write!(f, "A{n}"),
            AffineType::B(n) => write!(f, "B{n}"),
            AffineType::C(n) => write!(f, "C{n}"),
            AffineType::D(n) => write!(f, "D{n}"),
            AffineType::E(n) => write!(f, "E{n}"),
            AffineType::F4 => write!(f, "F4"),
            AffineType::G2 => write!(f, "G2"),
            AffineType::ATwisted(n) => write!(f, "A{n}^(2)"),
            AffineType::DTwisted(m) => write!(f, "D{m}^(2)"),
            AffineType::D4Triality => write!(f, "D4^(3)"),
            AffineType::E6Twisted => write!(f, "E6^(2)"),
        }
    }
}

impl FromStr for AffineType {
    type Err = Error;

    /// Accepts `A3`, `A3^(1)`, `A_3^{(1)}`, `A5^(2)`, `D4^(3)` and similar.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedType(s.to_string());
        let cleaned: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '{' | '}' | '(' | ')' | ' '))
            .collect();
        let (body, twist) = match cleaned.split_once('^') {
            Some((b, t)) => (b, t.parse::<u32>().map_err(|_| bad())?),
            None => (cleaned.as_str(), 1),
        };
        let mut chars = body.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        let t = match (letter, twist) {
            ('A', 1) if n >= 1 => AffineType::A(n),
            ('B', 1) if n >= 2 => AffineType::B(n),
            ('C', 1) if n >= 2 => AffineType::C(n),
            ('D', 1) if n >= 4 => AffineType::D(n),
            ('E', 1) if (6..=8).contains(&n) => AffineType::E(n),
            ('F', 1) if n == 4 => AffineType::F4,
            ('G', 1) if n == 2 => AffineType::G2,
            ('A', 2) if n >= 2 => AffineType::ATwisted(n),
            ('D', 2) if n >= 3 => AffineType::DTwisted(n),
            ('D', 3) if n == 4 => AffineType::D4Triality,
            ('E', 2) if n == 6 => AffineType::E6Twisted,
            _ => return Err(bad()),
        };
        Ok(t)
    }
}

impl TryFrom<String> for AffineType {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AffineType> for String {
    fn from(t: AffineType) -> String {
        t.to_string()
    }
}

/// Coordinates in the simple roots of the simply-laced diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn zero(rank: usize) -> Self {
        RootVector(vec![0; rank])
    }

    pub fn simple(rank: usize, i: Node) -> Self {
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        RootVector(v)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn neg(&self) -> Self {
        RootVector(self.0.iter().map(|c| -c).collect())
    }

    /// The node `i` when this is the simple root α_i.
    pub fn as_simple(&self) -> Option<Node> {
        let mut found = None;
        for (k, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 if found.is_none() => found = Some(k + 1),
                _ => return None,
            }
        }
        found
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "α{}", k + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The folding data of one affine type: Δ, σ, π, d, ord(σ), h^∨ and ℓ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldedCartanDatum {
    pub affine_tag: AffineType,
    /// Finite type of the simply-laced diagram Δ, e.g. `A3` or `E6`.
    pub delta: String,
    pub rank: usize,
    pub edges: Vec<(Node, Node)>,
    pub sigma: Vec<Node>,
    pub pi: Vec<Node>,
    pub d: Vec<i64>,
    pub ord_sigma: i64,
    pub h_dual: i64,
    pub ell: usize,
    pub star: Vec<Node>,
    #[serde(skip)]
    adj: Vec<Vec<bool>>,
}

fn path_edges(n: usize) -> Vec<(Node, Node)> {
    (1..n).map(|k| (k, k + 1)).collect()
}

fn d_edges(m: usize) -> Vec<(Node, Node)> {
    let mut e = path_edges(m - 2);
    e.push((m - 2, m - 1));
    e.push((m - 2, m));
    e
}

fn e_edges(n: usize) -> Vec<(Node, Node)> {
    let mut e = vec![(1, 3), (2, 4)];
    for k in 3..n {
        e.push((k, k + 1));
    }
    e
}

/// Builds the folded Cartan datum for a supported affine type.
pub fn folded_datum(tag: AffineType) -> Result<FoldedCartanDatum> {
    use AffineType::*;
    // (Δ name, edges, σ, π, h^∨)
    let (delta, edges, sigma, pi, h_dual): (String, _, Vec<Node>, Vec<Node>, i64) = match tag {
        A(n) => (format!("A{n}"), path_edges(n), (1..=n).collect(), (1..=n).collect(), n as i64 + 1),
        B(n) => {
            let m = 2 * n - 1;
            let sigma = (1..=m).map(|k| 2 * n - k).collect();
            let pi = (1..=m).map(|k| k.min(2 * n - k)).collect();
            (format!("A{m}"), path_edges(m), sigma, pi, 2 * n as i64 - 1)
        }
        C(n) => {
            let m = n + 1;
            let mut sigma: Vec<Node> = (1..=m).collect();
            sigma.swap(n - 1, n);
            let pi = (1..=m).map(|k| k.min(n)).collect();
            (format!("D{m}"), d_edges(m), sigma, pi, n as i64 + 1)
        }
        D(n) => (format!("D{n}"), d_edges(n), (1..=n).collect(), (1..=n).collect(), 2 * n as i64 - 2),
        E(n) => {
            let h = match n {
                6 => 12,
                7 => 18,
                _ => 30,
            };
            (format!("E{n}"), e_edges(n), (1..=n).collect(), (1..=n).collect(), h)
        }
        F4 => (
            "E6".into(),
            e_edges(6),
            vec![6, 2, 5, 4, 3, 1],
            vec![1, 4, 2, 3, 2, 1],
            9,
        ),
        G2 => ("D4".into(), d_edges(4), vec![3, 2, 4, 1], vec![1, 2, 1, 1], 4),
        ATwisted(n) => {
            let half = n.div_ceil(2);
            let pi = (1..=n).map(|k| if k <= half { k } else { n + 1 - k }).collect();
            (format!("A{n}"), path_edges(n), (1..=n).collect(), pi, n as i64 + 1)
        }
        DTwisted(m) => {
            let n = m - 1;
            let pi = (1..=m).map(|k| k.min(n)).collect();
            (format!("D{m}"), d_edges(m), (1..=m).collect(), pi, 2 * m as i64 - 2)
        }
        D4Triality => ("D4".into(), d_edges(4), (1..=4).collect(), vec![1, 2, 1, 1], 6),
        E6Twisted => ("E6".into(), e_edges(6), (1..=6).collect(), vec![1, 4, 2, 3, 2, 1], 12),
    };
    let rank = sigma.len();
    let mut adj = vec![vec![false; rank]; rank];
    for &(i, j) in &edges {
        adj[i - 1][j - 1] = true;
        adj[j - 1][i - 1] = true;
    }
    let mut ord_sigma = 1;
    let mut d = vec![0i64; rank];
    for i in 1..=rank {
        let mut j = sigma[i - 1];
        let mut size = 1;
        while j != i {
            j = sigma[j - 1];
            size += 1;
        }
        d[i - 1] = size;
        ord_sigma = num_integer::lcm(ord_sigma, size);
    }
    let mut datum = FoldedCartanDatum {
        affine_tag: tag,
        delta,
        rank,
        edges,
        sigma,
        pi,
        d,
        ord_sigma,
        h_dual,
        ell: 0,
        star: vec![],
        adj,
    };
    let w0 = datum.greedy_longest_word();
    datum.ell = w0.len();
    datum.star = (1..=rank)
        .map(|i| {
            let v = datum.apply_word(&w0, &RootVector::simple(rank, i)).neg();
            v.as_simple().expect("-w0 permutes simple roots")
        })
        .collect();
    Ok(datum)
}

impl FoldedCartanDatum {
    pub fn from_tag_str(s: &str) -> Result<Self> {
        folded_datum(s.parse()?)
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<Node> {
        1..=self.rank
    }

    pub fn check_node(&self, i: Node) -> Result<()> {
        if i >= 1 && i <= self.rank {
            Ok(())
        } else {
            Err(Error::BadNode(i))
        }
    }

    pub fn adjacent(&self, i: Node, j: Node) -> bool {
        self.adj[i - 1][j - 1]
    }

    pub fn neighbors(&self, i: Node) -> impl Iterator<Item = Node> + '_ {
        self.nodes().filter(move |&j| self.adjacent(i, j))
    }

    pub fn d(&self, i: Node) -> i64 {
        self.d[i - 1]
    }

    pub fn sigma(&self, i: Node) -> Node {
        self.sigma[i - 1]
    }

    pub fn star(&self, i: Node) -> Node {
        self.star[i - 1]
    }

    /// `star` applied `k` times; `k` may be negative since star is an involution.
    pub fn star_pow(&self, i: Node, k: i64) -> Node {
        if k.rem_euclid(2) == 0 {
            i
        } else {
            self.star(i)
        }
    }

    pub fn pi(&self, i: Node) -> Node {
        self.pi[i - 1]
    }

    /// ord(σ)·h^∨, the level period of admissible sequences.
    pub fn period_shift(&self) -> i64 {
        self.ord_sigma * self.h_dual
    }

    pub fn cartan(&self, i: Node, j: Node) -> i64 {
        if i == j {
            2
        } else if self.adjacent(i, j) {
            -1
        } else {
            0
        }
    }

    /// ⟨h_i, v⟩.
    pub fn pairing(&self, i: Node, v: &RootVector) -> i64 {
        self.nodes().map(|j| self.cartan(i, j) * v.0[j - 1]).sum()
    }

    /// Symmetric form (β, γ) normalized by (α_i, α_i) = 2.
    pub fn inner(&self, b: &RootVector, c: &RootVector) -> i64 {
        self.nodes().map(|i| b.0[i - 1] * self.pairing(i, c)).sum()
    }

    pub fn reflect(&self, i: Node, v: &RootVector) -> RootVector {
        let c = self.pairing(i, v);
        let mut out = v.clone();
        out.0[i - 1] -= c;
        out
    }

    /// s_{w_1} ⋯ s_{w_r} applied to `v` (rightmost letter first).
    pub fn apply_word(&self, word: &[Node], v: &RootVector) -> RootVector {
        word.iter().rev().fold(v.clone(), |acc, &i| self.reflect(i, &acc))
    }

    /// Matrix of the Weyl element; column j is w(α_j).
    pub fn weyl_matrix(&self, word: &[Node]) -> Vec<Vec<i64>> {
        let cols: Vec<RootVector> = self
            .nodes()
            .map(|j| self.apply_word(word, &RootVector::simple(self.rank, j)))
            .collect();
        (0..self.rank).map(|r| cols.iter().map(|c| c.0[r]).collect()).collect()
    }

    /// β_k = s_{i_1} ⋯ s_{i_{k-1}} α_{i_k} for each letter.
    pub fn word_roots(&self, word: &[Node]) -> Vec<RootVector> {
        (0..word.len())
            .map(|k| self.apply_word(&word[..k], &RootVector::simple(self.rank, word[k])))
            .collect()
    }

    /// A word is reduced iff every β_k is positive.
    pub fn is_reduced(&self, word: &[Node]) -> bool {
        word.iter().all(|&i| i >= 1 && i <= self.rank) && self.word_roots(word).iter().all(RootVector::is_positive)
    }

    pub fn longest_word(&self) -> Vec<Node> {
        self.greedy_longest_word()
    }

    fn greedy_longest_word(&self) -> Vec<Node> {
        let mut word = Vec::new();
        loop {
            let next = self.nodes().find(|&i| {
                self.apply_word(&word, &RootVector::simple(self.rank, i)).is_positive()
            });
            match next {
                Some(i) => word.push(i),
                None => return word,
            }
        }
    }

    pub fn positive_roots(&self) -> Vec<RootVector> {
        let mut roots = self.word_roots(&self.longest_word());
        roots.sort();
        roots
    }

    /// −w₀ acting on a root; permutes simple roots through `star`.
    pub fn minus_w0(&self, v: &RootVector) -> RootVector {
        let mut out = RootVector::zero(self.rank);
        for i in self.nodes() {
            out.0[self.star(i) - 1] += v.0[i - 1];
        }
        out
    }

    /// Graph distance in Δ.
    pub fn distance(&self, i: Node, j: Node) -> usize {
        let mut dist = vec![usize::MAX; self.rank];
        dist[i - 1] = 0;
        let mut queue = VecDeque::from([i]);
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if dist[v - 1] == usize::MAX {
                    dist[v - 1] = dist[u - 1] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist[j - 1]
    }

    /// Number of σ-orbits, i.e. the rank of the folded finite type.
    pub fn folded_rank(&self) -> usize {
        self.nodes().filter(|&i| self.nodes().all(|j| j >= i || !self.same_orbit(i, j))).count()
    }

    pub fn same_orbit(&self, i: Node, j: Node) -> bool {
        let mut k = i;
        for _ in 0..self.ord_sigma {
            if k == j {
                return true;
            }
            k = self.sigma(k);
        }
        false
    }

    /// σ^k(i) for k ≥ 0.
    pub fn sigma_pow(&self, i: Node, k: i64) -> Node {
        let mut j = i;
        for _ in 0..k.rem_euclid(self.ord_sigma) {
            j = self.sigma(j);
        }
        j
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dat(s: &str) -> FoldedCartanDatum {
        FoldedCartanDatum::from_tag_str(s).unwrap()
    }

    #[test]
    fn a3_row() {
        let a = dat("A_3^{(1)}");
        assert_eq!(a.delta, "A3");
        assert_eq!(a.ord_sigma, 1);
        assert_eq!(a.h_dual, 4);
        assert_eq!(a.ell, 6);
        assert_eq!(a.star, vec![3, 2, 1]);
    }

    #[test]
    fn b2_row() {
        let b = dat("B2");
        assert_eq!(b.delta, "A3");
        assert_eq!(b.sigma, vec![3, 2, 1]);
        assert_eq!(b.ord_sigma, 2);
        assert_eq!(b.d, vec![2, 1, 2]);
        assert_eq!(b.h_dual, 3);
    }

    #[test]
    fn a1_row() {
        let a = dat("A1");
        assert_eq!(a.ell, 1);
        assert_eq!(a.h_dual, 2);
        assert_eq!(a.star, vec![1]);
    }

    #[test]
    fn unsupported() {
        assert!(matches!("Z3".parse::<AffineType>(), Err(Error::UnsupportedType(_))));
        assert!("D3".parse::<AffineType>().is_err());
        assert!("E9".parse::<AffineType>().is_err());
    }

    #[test]
    fn tag_roundtrip() {
        for s in ["A3", "B4", "C3", "D5", "E7", "F4", "G2", "A5^(2)", "D4^(2)", "D4^(3)", "E6^(2)"] {
            let t: AffineType = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
            assert_eq!(t.long_name().parse::<AffineType>().unwrap(), t);
        }
    }

    #[test]
    fn reflections() {
        let a = dat("A3");
        let r = RootVector(vec![1, 1, 1]);
        assert_eq!(a.reflect(2, &r), r);
        assert_eq!(a.reflect(1, &RootVector::simple(3, 1)), RootVector(vec![-1, 0, 0]));
    }

    #[test]
    fn star_matches_known_involutions() {
        assert_eq!(dat("D5").star, vec![1, 2, 3, 5, 4]);
        assert_eq!(dat("D4").star, vec![1, 2, 3, 4]);
        assert_eq!(dat("E6").star, vec![6, 2, 5, 4, 3, 1]);
        assert_eq!(dat("E7").star, (1..=7).collect::<Vec<_>>());
    }

    #[test]
    fn root_display() {
        assert_eq!(RootVector(vec![1, 1, 0]).to_string(), "α1+α2");
        assert_eq!(RootVector(vec![0, -2, 0]).to_string(), "-2α2");
    }
}
