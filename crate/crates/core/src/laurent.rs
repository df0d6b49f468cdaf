//! Laurent polynomials in finitely many variables with big-integer coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A monomial as (variable, exponent) pairs with its decimal coefficient.
pub type Term = (Vec<(u32, i32)>, String);

/// A Laurent monomial stored as sorted (variable, nonzero exponent) pairs.
///
/// Ordered lexicographically on dense exponent vectors with variable 0 most significant.
/// This is a total order compatible with multiplication, which exact division relies on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<(u32, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, i32)>) -> Self {
        let mut acc: BTreeMap<u32, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn pairs(&self) -> &[(u32, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: u32) -> i32 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn pow(&self, n: i32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * n)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            let x = a.get(i);
            let y = b.get(j);
            match (x, y) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, f))) => return 0.cmp(&f),
                (Some(&(v, e)), Some(&(w, f))) => match v.cmp(&w) {
                    Ordering::Less => return e.cmp(&0),
                    Ordering::Greater => return 0.cmp(&f),
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one(), BigInt::one())
    }

    pub fn var(v: u32) -> Self {
        Self::monomial(Monomial::var(v), BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(Monomial::one(), c.into())
    }

    pub fn monomial(m: Monomial, c: BigInt) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            out.terms.insert(m1.mul(m), c1 * c);
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Per-variable exponent ranges over the support.
    fn exponent_box(&self) -> BTreeMap<u32, (i32, i32)> {
        let mut vars: Vec<u32> = self.terms.keys().flat_map(|m| m.0.iter().map(|p| p.0)).collect();
        vars.sort_unstable();
        vars.dedup();
        vars.into_iter()
            .map(|v| {
                let es = self.terms.keys().map(|m| m.exponent(v));
                let (lo, hi) = es.fold((i32::MAX, i32::MIN), |(lo, hi), e| (lo.min(e), hi.max(e)));
                (v, (lo, hi))
            })
            .collect()
    }

    /// Exact quotient by leading-term elimination, or `None` if `d` does not divide `self`.
    ///
    /// If self = q·d then for every variable min_q = min_self − min_d and max_q = max_self − max_d.
    /// Candidate quotient terms outside that box prove non-divisibility; inside the box they
    /// strictly decrease, so the loop terminates.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.len() == 1 {
            let (m, c) = d.leading().unwrap();
            let inv = m.inv();
            let mut out = Self::zero();
            for (m1, c1) in &self.terms {
                if (c1 % c).is_zero() {
                    out.terms.insert(m1.mul(&inv), c1 / c);
                } else {
                    return None;
                }
            }
            return Some(out);
        }
        let nb = self.exponent_box();
        let db = d.exponent_box();
        let mut qbox = BTreeMap::new();
        for (&v, &(lo, hi)) in nb.iter() {
            let (dlo, dhi) = db.get(&v).copied().unwrap_or((0, 0));
            qbox.insert(v, (lo - dlo, hi - dhi));
        }
        for (&v, &(dlo, dhi)) in db.iter() {
            qbox.entry(v).or_insert((-dlo, -dhi));
        }
        let in_box = |m: &Monomial| {
            qbox.iter().all(|(&v, &(lo, hi))| {
                let e = m.exponent(v);
                lo <= e && e <= hi
            }) && m.0.iter().all(|p| qbox.contains_key(&p.0))
        };
        let (dm, dc) = d.leading().unwrap();
        let dm_inv = dm.inv();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((rm, rc)) = rem.leading() {
            if !(rc % dc).is_zero() {
                return None;
            }
            let qm = rm.mul(&dm_inv);
            if !in_box(&qm) {
                return None;
            }
            let qc = rc / dc;
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quot.terms.insert(qm, qc);
        }
        Some(quot)
    }

    pub fn is_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Sorted (exponent pairs, coefficient) list for JSON dumps.
    pub fn to_terms(&self) -> Vec<Term> {
        self.terms.iter().map(|(m, c)| (m.0.clone(), c.to_string())).collect()
    }

    /// Renders as (numerator)/denominator with a monomial denominator.
    pub fn render(&self, name: &dyn Fn(u32) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut den: BTreeMap<u32, i32> = BTreeMap::new();
        for m in self.terms.keys() {
            for &(v, e) in &m.0 {
                if e < 0 {
                    let slot = den.entry(v).or_insert(0);
                    *slot = (*slot).max(-e);
                }
            }
        }
        let den_m = Monomial::from_pairs(den.iter().map(|(&v, &e)| (v, e)));
        let num = self.mul_term(&den_m, &BigInt::one());
        let mut s = String::new();
        for (k, (m, c)) in num.terms.iter().enumerate() {
            let body = render_monomial(m, name);
            let neg = c.is_negative();
            if k > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let a = c.abs();
            if body.is_empty() {
                let _ = write!(s, "{a}");
            } else if a.is_one() {
                s.push_str(&body);
            } else {
                let _ = write!(s, "{a}*{body}");
            }
        }
        if den.is_empty() {
            return s;
        }
        let den_s = render_monomial(&den_m, name);
        let num_s = if num.len() > 1 { format!("({s})") } else { s };
        if den_m.0.len() > 1 || den_m.0[0].1 > 1 {
            format!("{num_s}/({den_s})")
        } else {
            format!("{num_s}/{den_s}")
        }
    }
}

fn render_monomial(m: &Monomial, name: &dyn Fn(u32) -> String) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .map(|&(v, e)| if e == 1 { name(v) } else { format!("{}^{}", name(v), e) })
        .collect();
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(v: u32) -> LaurentPoly {
        LaurentPoly::var(v)
    }

    #[test]
    fn basic_division() {
        let num = x(1).add(&x(2));
        let q = num.div_exact(&x(0)).unwrap();
        assert_eq!(q.mul(&x(0)), num);
        let name = |v: u32| format!("x{v}");
        assert_eq!(q.render(&name), "(x2 + x1)/x0");
        assert!(q.is_positive());
    }

    #[test]
    fn non_divisible() {
        let num = x(1).add(&LaurentPoly::one());
        assert!(num.div_exact(&x(1).add(&x(2))).is_none());
        assert!(LaurentPoly::constant(3).div_exact(&LaurentPoly::constant(2)).is_none());
    }

    #[test]
    fn order_is_multiplicative() {
        let a = Monomial::from_pairs([(0, 1), (2, -1)]);
        let b = Monomial::from_pairs([(1, 3)]);
        let c = Monomial::from_pairs([(1, -2), (3, 5)]);
        assert!(a > b);
        assert_eq!(a.cmp(&b), a.mul(&c).cmp(&b.mul(&c)));
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((prop::collection::vec((0u32..4, -2i32..3), 0..3), -3i64..4), 1..5).prop_map(|ts| {
            ts.into_iter().fold(LaurentPoly::zero(), |acc, (pairs, c)| {
                acc.add(&LaurentPoly::monomial(Monomial::from_pairs(pairs), BigInt::from(c)))
            })
        })
    }

    proptest! {
        #[test]
        fn product_divides_back(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let p = a.mul(&b);
            prop_assert_eq!(p.div_exact(&b), Some(a));
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
        }
    }
}
