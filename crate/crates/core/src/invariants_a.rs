//! 𝔡, Λ, Λ^∞ between fundamentals and E-vectors, through a pluggable denominator backend.
//! Only the A_n^{(1)} backend is provided.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::adm_seq::AdmissibleSequence;
use crate::error::{Error, Result};
use crate::iboxes::{Chain, IBox};
use crate::qdatum::HatIndex;
use crate::root_data::{AffineType, FoldedCartanDatum};
use crate::tsystem_seed::shape_from_chain;

/// (i, p) labelling the fundamental V(ϖ_i) at spectral parameter (−q)^p.
pub type FundIndex = HatIndex;
pub type Matrix = Vec<Vec<i64>>;

/// Zeros of the normalized denominators d_{i,j}(z) for one affine type.
pub trait DenominatorBackend {
    fn rank(&self) -> usize;
    /// Exponents e, with multiplicity, such that d_{i,j} vanishes at z = (−q)^e.
    fn exponents(&self, i: usize, j: usize) -> Result<Vec<i64>>;
    /// 𝒟^k.
    fn dual_shift(&self, x: FundIndex, k: i64) -> FundIndex;
    /// Level shift of 𝒟.
    fn dual_period(&self) -> i64;
    /// Bound on |e| over all exponents.
    fn max_exponent(&self) -> i64;

    fn de(&self, x: FundIndex, y: FundIndex) -> Result<u32> {
        let ex = self.exponents(x.node, y.node)?;
        let dp = y.level - x.level;
        Ok(ex.iter().filter(|&&e| e == dp).count() as u32 + ex.iter().filter(|&&e| e == -dp).count() as u32)
    }

    /// Nonzero terms 𝔡(x, 𝒟^k y) with their k.
    fn de_orbit(&self, x: FundIndex, y: FundIndex) -> Result<Vec<(i64, u32)>> {
        let per = self.dual_period();
        let center = (x.level - y.level).div_euclid(per);
        let reach = self.max_exponent() / per + 2;
        let mut out = Vec::new();
        for k in center - reach..=center + reach {
            let d = self.de(x, self.dual_shift(y, k))?;
            if d != 0 {
                out.push((k, d));
            }
        }
        Ok(out)
    }

    /// Σ_k (−1)^{k+δ(k<0)} 𝔡(x, 𝒟^k y).
    fn lambda(&self, x: FundIndex, y: FundIndex) -> Result<i64> {
        Ok(self
            .de_orbit(x, y)?
            .into_iter()
            .map(|(k, d)| if (k + i64::from(k < 0)).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum())
    }

    /// Σ_k (−1)^k 𝔡(x, 𝒟^k y).
    fn lambda_inf(&self, x: FundIndex, y: FundIndex) -> Result<i64> {
        Ok(self
            .de_orbit(x, y)?
            .into_iter()
            .map(|(k, d)| if k.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeA {
    pub n: usize,
}

impl TypeA {
    fn check(&self, i: usize) -> Result<()> {
        if (1..=self.n).contains(&i) {
            Ok(())
        } else {
            Err(Error::BadNode(i))
        }
    }
}

impl DenominatorBackend for TypeA {
    fn rank(&self) -> usize {
        self.n
    }

    fn exponents(&self, i: usize, j: usize) -> Result<Vec<i64>> {
        self.check(i)?;
        self.check(j)?;
        let n = self.n;
        let m = i.min(j).min(n + 1 - i).min(n + 1 - j);
        let base = i.abs_diff(j) as i64;
        Ok((1..=m as i64).map(|s| base + 2 * s).collect())
    }

    fn dual_shift(&self, x: FundIndex, k: i64) -> FundIndex {
        let node = if k.rem_euclid(2) == 0 { x.node } else { self.n + 1 - x.node };
        HatIndex::new(node, x.level + k * self.dual_period())
    }

    fn dual_period(&self) -> i64 {
        self.n as i64 + 1
    }

    fn max_exponent(&self) -> i64 {
        self.n as i64 + 1
    }
}

/// The backend for a datum; only A_n^{(1)} is available.
pub fn backend_for(datum: &FoldedCartanDatum) -> Result<TypeA> {
    match datum.affine_tag {
        AffineType::A(n) => Ok(TypeA { n }),
        _ => Err(Error::WrongBackend),
    }
}

pub fn denom_exponents(n: usize, i: usize, j: usize) -> Result<Vec<i64>> {
    TypeA { n }.exponents(i, j)
}

pub fn de_fund(n: usize, x: FundIndex, y: FundIndex) -> Result<u32> {
    TypeA { n }.de(x, y)
}

pub fn dual_shift(n: usize, x: FundIndex, k: i64) -> FundIndex {
    TypeA { n }.dual_shift(x, k)
}

pub fn lambda_fund(n: usize, x: FundIndex, y: FundIndex) -> Result<i64> {
    TypeA { n }.lambda(x, y)
}

pub fn lambda_inf_fund(n: usize, x: FundIndex, y: FundIndex) -> Result<i64> {
    TypeA { n }.lambda_inf(x, y)
}

/// E(M) stored as the formal sum of the fundamentals of M; as a function it is
/// y ↦ Σ c_x Λ^∞(x, y).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EVector {
    pub terms: BTreeMap<FundIndex, i64>,
}

impl EVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn fundamental(x: FundIndex) -> Self {
        EVector { terms: BTreeMap::from([(x, 1)]) }
    }

    pub fn add_scaled(&mut self, other: &EVector, c: i64) {
        for (&x, &v) in &other.terms {
            let e = self.terms.entry(x).or_insert(0);
            *e += c * v;
            if *e == 0 {
                self.terms.remove(&x);
            }
        }
    }

    pub fn eval<B: DenominatorBackend>(&self, b: &B, y: FundIndex) -> Result<i64> {
        self.terms.iter().try_fold(0, |acc, (&x, &c)| Ok(acc + c * b.lambda_inf(x, y)?))
    }

    /// Vanishing as a function. Since E(𝒟y) = −E(y), it suffices to test one 𝒟-period of levels.
    pub fn is_zero<B: DenominatorBackend>(&self, b: &B) -> Result<bool> {
        let Some(q0) = self.terms.keys().map(|x| x.level).min() else {
            return Ok(true);
        };
        for q in q0..q0 + b.dual_period() {
            for j in 1..=b.rank() {
                if self.eval(b, HatIndex::new(j, q))? != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub fn e_vector(factors: &[FundIndex]) -> EVector {
    let mut e = EVector::zero();
    for &x in factors {
        e.add_scaled(&EVector::fundamental(x), 1);
    }
    e
}

/// (E, E') = −Σ c_x c'_y Λ^∞(x, y).
pub fn bilinear<B: DenominatorBackend>(b: &B, e1: &EVector, e2: &EVector) -> Result<i64> {
    let mut s = 0;
    for (&x, &c) in &e1.terms {
        for (&y, &d) in &e2.terms {
            s -= c * d * b.lambda_inf(x, y)?;
        }
    }
    Ok(s)
}

/// E(M[a,b]) as the sum over its cuspidal positions.
pub fn box_e_vector(seq: &AdmissibleSequence, ibox: IBox) -> EVector {
    e_vector(&ibox.positions(seq).into_iter().map(|k| seq.at(k)).collect::<Vec<_>>())
}

/// Λ(M[m], M[n]) for i-boxes with every position of `n` before every position of `m`,
/// where Λ = Λ^∞ = −(E, E). Other pairs are unsupported.
pub fn lambda_boxes(seq: &AdmissibleSequence, m: IBox, n: IBox) -> Result<i64> {
    let b = backend_for(&seq.datum)?;
    if m.is_unit() || n.is_unit() {
        return Ok(0);
    }
    if n.b >= m.a {
        return Err(Error::Unsupported(format!("Λ(M{m}, M{n}) for a pair that is not strongly unmixed")));
    }
    Ok(-bilinear(&b, &box_e_vector(seq, m), &box_e_vector(seq, n))?)
}

pub fn root_module_check(n: usize, x: FundIndex) -> Result<bool> {
    let b = TypeA { n };
    let r = n as i64 + 2;
    for k in -r..=r {
        if b.de(x, b.dual_shift(x, k))? != u32::from(k.abs() == 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn finish(mut self) -> Self {
        self.ok = self.failures.is_empty();
        self
    }
}

/// 𝔡(S_{a⁺},S_a) = 1, 𝔡(S_a,S_b) = δ(|a−b| = ℓ) for ℓ ≤ |a−b| ≤ 2ℓ, and 𝔡(𝒟^m S_b, S_a) = 0
/// for m ≥ 1 and a < b, for positions a, b in [lo, hi].
pub fn cuspidal_de_checks(seq: &AdmissibleSequence, lo: i64, hi: i64) -> Result<CheckReport> {
    let b = backend_for(&seq.datum)?;
    let l = seq.ell() as i64;
    let reach = b.max_exponent() / b.dual_period() + 2;
    let mut rep = CheckReport::default();
    for a in lo..=hi {
        let (sa, sap) = (seq.at(a), seq.at(seq.idx_plus(a)));
        rep.record(b.de(sap, sa)? == 1, || format!("𝔡(S_{{{a}⁺}}, S_{a}) ≠ 1"));
        for c in lo..=hi {
            let sc = seq.at(c);
            let dist = (a - c).abs();
            if (l..=2 * l).contains(&dist) {
                let want = u32::from(dist == l);
                rep.record(b.de(sa, sc)? == want, || format!("𝔡(S_{a}, S_{c}) ≠ {want}"));
            }
            if a < c {
                for m in 1..=reach {
                    rep.record(b.de(b.dual_shift(sc, m), sa)? == 0, || format!("𝔡(𝒟^{m} S_{c}, S_{a}) ≠ 0"));
                }
            }
        }
    }
    Ok(rep.finish())
}

/// Λ(x,y) + Λ(y,x) = 2𝔡(x,y) and the root-module property for all fundamentals with levels in
/// [q0, q0 + width).
pub fn lambda_symmetry_check(n: usize, q0: i64, width: i64) -> Result<CheckReport> {
    let b = TypeA { n };
    let pts: Vec<FundIndex> =
        (q0..q0 + width).flat_map(|q| (1..=n).map(move |i| HatIndex::new(i, q))).collect();
    let mut rep = CheckReport::default();
    for &x in &pts {
        rep.record(root_module_check(n, x)?, || format!("{x} is not a root module"));
        for &y in &pts {
            let lhs = b.lambda(x, y)? + b.lambda(y, x)?;
            rep.record(lhs == 2 * b.de(x, y)? as i64, || format!("Λ({x},{y}) + Λ({y},{x}) ≠ 2𝔡"));
        }
    }
    Ok(rep.finish())
}

/// Σ_i E(M_i) b_ik = 0 for every exchangeable k of the seed of `chain`.
pub fn eb_check(seq: &AdmissibleSequence, chain: &Chain) -> Result<CheckReport> {
    let b = backend_for(&seq.datum)?;
    let bs = shape_from_chain(seq, chain)?;
    let es: Vec<EVector> = bs.labels.iter().map(|&l| box_e_vector(seq, l)).collect();
    let mut rep = CheckReport::default();
    for &k in &bs.seed.bmat.exchangeable {
        let mut sum = EVector::zero();
        for (i, v) in bs.seed.bmat.column(k) {
            sum.add_scaled(&es[i], v);
        }
        rep.record(sum.is_zero(&b)?, || format!("E·B̃ ≠ 0 in column of {}", bs.labels[k]));
    }
    Ok(rep.finish())
}

/// Gram matrices of E(S_1..S_ℓ) under the bilinear form and of the roots β_k of the period word.
pub fn gram_check(seq: &AdmissibleSequence) -> Result<(bool, Matrix, Matrix)> {
    let b = backend_for(&seq.datum)?;
    let l = seq.ell() as i64;
    let es: Vec<EVector> = (1..=l).map(|k| EVector::fundamental(seq.at(k))).collect();
    let roots = seq.datum.word_roots(seq.period_i());
    let mut ge = Vec::new();
    for x in &es {
        ge.push(es.iter().map(|y| bilinear(&b, x, y)).collect::<Result<Vec<_>>>()?);
    }
    let gb: Vec<Vec<i64>> =
        roots.iter().map(|x| roots.iter().map(|y| seq.datum.inner(x, y)).collect()).collect();
    Ok((ge == gb, ge, gb))
}

/// Positive semidefiniteness of a symmetric integer matrix, by exact LDLᵀ elimination over ℚ.
/// With `strict`, positive definiteness.
pub fn is_positive_semidefinite(m: &[Vec<i64>], strict: bool) -> bool {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{Signed, Zero};
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect();
    for p in 0..n {
        if a[p][p].is_negative() {
            return false;
        }
        if a[p][p].is_zero() {
            if strict || a[p][p..].iter().any(|v| !v.is_zero()) {
                return false;
            }
            continue;
        }
        for r in p + 1..n {
            let f = &a[r][p] / &a[p][p];
            if f.is_zero() {
                continue;
            }
            let pivot = a[p].clone();
            for (x, y) in a[r].iter_mut().zip(&pivot).skip(p) {
                *x -= &f * y;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::section5_sequence;

    fn h(i: usize, p: i64) -> FundIndex {
        HatIndex::new(i, p)
    }

    #[test]
    fn exponents() {
        assert_eq!(denom_exponents(3, 1, 1).unwrap(), vec![2]);
        assert_eq!(denom_exponents(3, 2, 2).unwrap(), vec![2, 4]);
        assert_eq!(denom_exponents(3, 1, 3).unwrap(), vec![4]);
        assert_eq!(denom_exponents(3, 0, 1), Err(Error::BadNode(0)));
    }

    #[test]
    fn de_examples() {
        assert_eq!(de_fund(3, h(1, 0), h(1, 2)).unwrap(), 1);
        assert_eq!(de_fund(3, h(2, 0), h(2, 4)).unwrap(), 1);
        assert_eq!(de_fund(3, h(2, 0), h(2, 8)).unwrap(), 0);
        assert_eq!(de_fund(3, h(2, 5), h(2, 5)).unwrap(), 0);
    }

    #[test]
    fn duals() {
        assert_eq!(dual_shift(3, h(1, 0), 1), h(3, 4));
        assert_eq!(dual_shift(3, h(1, 0), 0), h(1, 0));
        assert_eq!(dual_shift(3, dual_shift(3, h(2, 7), -1), 1), h(2, 7));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_fund(3, h(1, 0), h(1, 2)).unwrap(), 1);
        assert_eq!(lambda_fund(3, h(1, 2), h(1, 0)).unwrap(), 1);
        for n in 1..=5 {
            for i in 1..=n {
                assert_eq!(lambda_fund(n, h(i, 3), h(i, 3)).unwrap(), 0);
                assert_eq!(lambda_inf_fund(n, h(i, 3), h(i, 3)).unwrap(), -2);
            }
        }
    }

    #[test]
    fn evectors() {
        let b = TypeA { n: 3 };
        let e = EVector::fundamental(h(2, 0));
        assert_eq!(bilinear(&b, &e, &e).unwrap(), 2);
        assert!(e_vector(&[]).is_zero(&b).unwrap());
        assert!(!e.is_zero(&b).unwrap());
        let mut z = e_vector(&[h(1, 0), h(3, 4)]);
        assert_eq!(z.terms.len(), 2);
        assert!(z.is_zero(&b).unwrap());
        z.add_scaled(&e, 0);
        assert!(z.is_zero(&b).unwrap());
    }

    #[test]
    fn root_modules() {
        assert!(root_module_check(3, h(2, 0)).unwrap());
    }

    #[test]
    fn cuspidal_checks_on_example() {
        let s = section5_sequence();
        assert_eq!(de_fund(3, s.at(s.idx_plus(1)), s.at(1)).unwrap(), 1);
        assert_eq!(de_fund(3, s.at(1), s.at(7)).unwrap(), 1);
        assert_eq!(de_fund(3, s.at(1), s.at(8)).unwrap(), 0);
        let r = cuspidal_de_checks(&s, -6, 12).unwrap();
        assert!(r.ok, "{:?}", r.failures);
    }

    #[test]
    fn eb_on_example_chain() {
        let s = section5_sequence();
        assert!(eb_check(&s, &"0:LL".parse().unwrap()).unwrap().ok);
        let single = eb_check(&s, &"0:".parse().unwrap()).unwrap();
        assert!(single.ok);
        assert_eq!(single.checked, 0);
    }

    #[test]
    fn gram_and_definiteness() {
        let s = section5_sequence();
        let (ok, ge, _) = gram_check(&s).unwrap();
        assert!(ok);
        assert!(is_positive_semidefinite(&ge, false));
        assert!(!is_positive_semidefinite(&ge, true));
        let head: Vec<Vec<i64>> = ge[..3].iter().map(|r| r[..3].to_vec()).collect();
        assert!(is_positive_semidefinite(&head, true));
        assert!(!is_positive_semidefinite(&[vec![1, 2], vec![2, 1]], false));
        assert!(is_positive_semidefinite(&[vec![1, 1], vec![1, 1]], false));
    }

    #[test]
    fn strongly_unmixed_only() {
        let s = section5_sequence();
        assert!(lambda_boxes(&s, IBox::new(3, 3), IBox::new(-2, 0)).is_ok());
        assert!(matches!(lambda_boxes(&s, IBox::new(-2, 0), IBox::new(-1, -1)), Err(Error::Unsupported(_))));
    }
}
