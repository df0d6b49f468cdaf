//! GLS quivers on ℤ, HL quivers on Î, exchange matrices and DOT export.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{Display, Write as _};

use serde::{Deserialize, Serialize};

use crate::adm_seq::AdmissibleSequence;
use crate::qdatum::HatIndex;
use crate::root_data::FoldedCartanDatum;

/// A finite quiver; arrows form a multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver<V: Ord + Clone> {
    vertices: Vec<V>,
    arrows: BTreeMap<(V, V), u32>,
}

impl<V: Ord + Clone> Quiver<V> {
    pub fn new(vertices: Vec<V>) -> Self {
        let mut vertices = vertices;
        vertices.sort();
        vertices.dedup();
        Quiver { vertices, arrows: BTreeMap::new() }
    }

    pub fn add_arrow(&mut self, from: V, to: V) {
        *self.arrows.entry((from, to)).or_insert(0) += 1;
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn arrow_count(&self, from: &V, to: &V) -> u32 {
        self.arrows.get(&(from.clone(), to.clone())).copied().unwrap_or(0)
    }

    pub fn has_arrow(&self, from: &V, to: &V) -> bool {
        self.arrow_count(from, to) > 0
    }

    /// Arrows with multiplicity, in sorted order.
    pub fn arrows(&self) -> impl Iterator<Item = (&V, &V, u32)> {
        self.arrows.iter().map(|((a, b), &m)| (a, b, m))
    }

    pub fn arrow_set(&self) -> BTreeSet<(V, V)> {
        self.arrows.keys().cloned().collect()
    }

    pub fn num_arrows(&self) -> u32 {
        self.arrows.values().sum()
    }

    pub fn index_of(&self, v: &V) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    /// Relabels vertices through `f`, which must be injective.
    pub fn map<W: Ord + Clone>(&self, f: impl Fn(&V) -> W) -> Quiver<W> {
        let mut q = Quiver::new(self.vertices.iter().map(&f).collect());
        for (a, b, m) in self.arrows() {
            for _ in 0..m {
                q.add_arrow(f(a), f(b));
            }
        }
        q
    }

    pub fn has_loop_or_2cycle(&self) -> bool {
        self.arrows.keys().any(|(a, b)| a == b || self.arrows.contains_key(&(b.clone(), a.clone())))
    }
}

/// The GLS quiver on the window [a, b]: horizontal arrows s → s⁻ and vertical arrows s → t
/// when s⁻ < t⁻ < s < t with adjacent colors. An arrow is kept iff both ends lie in the window.
pub fn gls_quiver(seq: &AdmissibleSequence, a: i64, b: i64) -> Quiver<i64> {
    let dd = &seq.datum;
    let mut q = Quiver::new((a..=b).collect());
    for s in a..=b {
        let sm = seq.idx_minus(s);
        if sm >= a {
            q.add_arrow(s, sm);
        }
        let i = seq.node(s);
        for j in dd.neighbors(i) {
            let t = seq.idx_color_plus(s + 1, j);
            if t <= b && sm < seq.idx_minus(t) {
                q.add_arrow(s, t);
            }
        }
    }
    q
}

/// The HL quiver on a finite vertex set: (ι,x) → (ȷ,y) iff ι,ȷ adjacent with
/// x = y − 2d_ȷ + min(d_ι,d_ȷ), or ι = ȷ with x = y + 2d_ι.
pub fn hl_quiver(datum: &FoldedCartanDatum, vertices: &[HatIndex]) -> Quiver<HatIndex> {
    let mut q = Quiver::new(vertices.to_vec());
    let set: BTreeSet<HatIndex> = vertices.iter().copied().collect();
    for &x in vertices {
        let down = HatIndex::new(x.node, x.level - 2 * datum.d(x.node));
        if set.contains(&down) {
            q.add_arrow(x, down);
        }
        for j in datum.neighbors(x.node) {
            let y = HatIndex::new(j, x.level + 2 * datum.d(j) - datum.d(x.node).min(datum.d(j)));
            if set.contains(&y) {
                q.add_arrow(x, y);
            }
        }
    }
    q
}

/// Compares GLS and HL arrow sets on the window under s ↦ (i_s, p_s).
pub fn check_gls_eq_hl(seq: &AdmissibleSequence, a: i64, b: i64) -> bool {
    let gls = gls_quiver(seq, a, b).map(|&s| seq.at(s));
    let hl = hl_quiver(&seq.datum, gls.vertices());
    gls == hl
}

/// Sparse integer matrix over K × K^ex. Rows and columns are positions 0..n in K.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    pub n: usize,
    pub exchangeable: BTreeSet<usize>,
    entries: BTreeMap<(usize, usize), i64>,
}

impl ExchangeMatrix {
    pub fn new(n: usize, exchangeable: BTreeSet<usize>) -> Self {
        ExchangeMatrix { n, exchangeable, entries: BTreeMap::new() }
    }

    /// From a dense full matrix; only columns in `exchangeable` are kept.
    pub fn from_dense(rows: &[Vec<i64>], exchangeable: BTreeSet<usize>) -> Self {
        let mut m = Self::new(rows.len(), exchangeable);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if m.exchangeable.contains(&j) {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        if v == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn is_exchangeable(&self, k: usize) -> bool {
        self.exchangeable.contains(&k)
    }

    pub fn frozen(&self) -> BTreeSet<usize> {
        (0..self.n).filter(|k| !self.exchangeable.contains(k)).collect()
    }

    /// Nonzero entries (i, j, b_ij).
    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v)).collect()
    }

    pub fn column(&self, k: usize) -> BTreeMap<usize, i64> {
        self.entries.iter().filter(|((_, j), _)| *j == k).map(|(&(i, _), &v)| (i, v)).collect()
    }

    pub fn principal_is_skew(&self) -> bool {
        self.exchangeable
            .iter()
            .all(|&i| self.exchangeable.iter().all(|&j| self.get(i, j) == -self.get(j, i)))
    }

    /// Reorders K by `perm`: new position p holds old position perm[p].
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut out = Self::new(self.n, self.exchangeable.iter().map(|&k| inv[k]).collect());
        for (&(i, j), &v) in &self.entries {
            out.set(inv[i], inv[j], v);
        }
        out
    }
}

/// b_ij = #(i→j) − #(j→i) for i ∈ K, j ∈ K^ex.
pub fn to_exchange_matrix<V: Ord + Clone>(quiver: &Quiver<V>, k: &[V], kex: &[V]) -> ExchangeMatrix {
    let pos: BTreeMap<&V, usize> = k.iter().enumerate().map(|(p, v)| (v, p)).collect();
    let mut m = ExchangeMatrix::new(k.len(), kex.iter().filter_map(|v| pos.get(v).copied()).collect());
    for (a, b, mult) in quiver.arrows() {
        let (Some(&i), Some(&j)) = (pos.get(a), pos.get(b)) else { continue };
        let mult = mult as i64;
        if m.is_exchangeable(j) {
            m.set(i, j, m.get(i, j) + mult);
        }
        if m.is_exchangeable(i) {
            m.set(j, i, m.get(j, i) - mult);
        }
    }
    m
}

/// DOT text with vertices v0, v1, … in sorted order.
pub fn export_dot<V: Ord + Clone + Display>(quiver: &Quiver<V>) -> String {
    let mut out = String::from("digraph {");
    for (k, v) in quiver.vertices().iter().enumerate() {
        let _ = write!(out, " v{k} [label=\"{v}\"];");
    }
    for (a, b, m) in quiver.arrows() {
        let (i, j) = (quiver.index_of(a).unwrap(), quiver.index_of(b).unwrap());
        for _ in 0..m {
            let _ = write!(out, " v{i} -> v{j};");
        }
    }
    out.push_str(" }");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::section5_sequence;

    #[test]
    fn gls_small_windows() {
        let s = section5_sequence();
        let q = gls_quiver(&s, -2, 0);
        assert_eq!(q.arrow_set(), BTreeSet::from([(0, -2), (-1, 0), (-2, -1)]));
        assert_eq!(gls_quiver(&s, 0, 0).num_arrows(), 0);
        assert!(gls_quiver(&s, -2, 3).has_arrow(&3, &0));
    }

    #[test]
    fn exchange_column() {
        let s = section5_sequence();
        let q = gls_quiver(&s, -2, 0);
        let m = to_exchange_matrix(&q, &[-2, -1, 0], &[0]);
        assert_eq!(m.column(2), BTreeMap::from([(0, -1), (1, 1)]));
        assert!(m.principal_is_skew());
    }

    #[test]
    fn hl_gls_agree() {
        let s = section5_sequence();
        assert!(check_gls_eq_hl(&s, -18, 18));
    }

    #[test]
    fn dot() {
        let q: Quiver<i64> = Quiver::new(vec![0]);
        assert_eq!(export_dot(&q), "digraph { v0 [label=\"0\"]; }");
        let e: Quiver<i64> = Quiver::new(vec![]);
        assert_eq!(export_dot(&e), "digraph { }");
        let s = section5_sequence();
        let d = export_dot(&gls_quiver(&s, -2, 0));
        assert_eq!(d.matches("->").count(), 3);
        assert_eq!(d.matches("label").count(), 3);
    }

    #[test]
    fn permute_matrix() {
        let m = ExchangeMatrix::from_dense(&[vec![0, 1], vec![-1, 0]], BTreeSet::from([0, 1]));
        let p = m.permuted(&[1, 0]);
        assert_eq!(p.get(0, 1), -1);
        assert_eq!(p.get(1, 0), 1);
    }
}
