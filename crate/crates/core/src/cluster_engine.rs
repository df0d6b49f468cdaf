//! Seeds over Laurent polynomials: matrix, Λ-matrix and cluster mutation.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Term};
use crate::quivers::ExchangeMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub vars: Vec<LaurentPoly>,
    pub bmat: ExchangeMatrix,
    pub lambda: Option<Vec<Vec<i64>>>,
}

#[derive(Serialize)]
struct SeedJson {
    vars: BTreeMap<usize, Vec<Term>>,
    b: Vec<(usize, usize, i64)>,
    exchangeable: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<Vec<Vec<i64>>>,
}

impl Serialize for Seed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeedJson {
            vars: self.vars.iter().map(LaurentPoly::to_terms).enumerate().collect(),
            b: self.bmat.triplets(),
            exchangeable: self.bmat.exchangeable.iter().copied().collect(),
            lambda: self.lambda.clone(),
        }
        .serialize(s)
    }
}

impl Seed {
    /// Initial seed with indeterminates x_0, …, x_{n-1}.
    pub fn initial(bmat: ExchangeMatrix) -> Self {
        let vars = (0..bmat.n as u32).map(LaurentPoly::var).collect();
        Seed { vars, bmat, lambda: None }
    }

    /// A seed that tracks only B̃ and Λ; mutation leaves `vars` empty.
    pub fn matrix_only(bmat: ExchangeMatrix) -> Self {
        Seed { vars: Vec::new(), bmat, lambda: None }
    }

    pub fn with_lambda(mut self, lambda: Vec<Vec<i64>>) -> Self {
        self.lambda = Some(lambda);
        self
    }

    /// Reorders K: new position p holds old position perm[p].
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Seed {
            vars: if self.vars.is_empty() { Vec::new() } else { perm.iter().map(|&k| self.vars[k].clone()).collect() },
            bmat: self.bmat.permuted(perm),
            lambda: self
                .lambda
                .as_ref()
                .map(|l| perm.iter().map(|&i| perm.iter().map(|&j| l[i][j]).collect()).collect()),
        }
    }
}

fn check_exchangeable(b: &ExchangeMatrix, k: usize) -> Result<()> {
    if k >= b.n {
        Err(Error::BadIndex(k))
    } else if !b.is_exchangeable(k) {
        Err(Error::FrozenVertex(k))
    } else {
        Ok(())
    }
}

/// μ_k on K × K^ex.
pub fn mutate_matrix(b: &ExchangeMatrix, k: usize) -> Result<ExchangeMatrix> {
    check_exchangeable(b, k)?;
    let mut out = ExchangeMatrix::new(b.n, b.exchangeable.clone());
    for i in 0..b.n {
        for &j in &b.exchangeable {
            let v = if i == k || j == k {
                -b.get(i, j)
            } else {
                let bik = b.get(i, k);
                b.get(i, j) + bik.signum() * (bik * b.get(k, j)).max(0)
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Λ' = EᵀΛE where E is the identity except for column k: E_kk = −1, E_tk = [−b_tk]_+.
pub fn mutate_lambda(lambda: &[Vec<i64>], b: &ExchangeMatrix, k: usize) -> Vec<Vec<i64>> {
    let n = lambda.len();
    let e = |t: usize| if t == k { -1 } else { (-b.get(t, k)).max(0) };
    let mut out = lambda.to_vec();
    for j in 0..n {
        if j == k {
            continue;
        }
        let v: i64 = (0..n).map(|t| e(t) * lambda[t][j]).sum();
        out[k][j] = v;
        out[j][k] = -v;
    }
    out[k][k] = 0;
    out
}

pub fn mutate_seed(seed: &Seed, k: usize) -> Result<Seed> {
    let b = &seed.bmat;
    check_exchangeable(b, k)?;
    if seed.vars.is_empty() {
        return Ok(Seed {
            vars: Vec::new(),
            bmat: mutate_matrix(b, k)?,
            lambda: seed.lambda.as_ref().map(|l| mutate_lambda(l, b, k)),
        });
    }
    let mut pos = LaurentPoly::one();
    let mut neg = LaurentPoly::one();
    for (i, v) in b.column(k) {
        if v > 0 {
            pos = pos.mul(&seed.vars[i].pow(v as u32));
        } else {
            neg = neg.mul(&seed.vars[i].pow((-v) as u32));
        }
    }
    let new = pos.add(&neg).div_exact(&seed.vars[k]).ok_or(Error::NonLaurentDivision)?;
    let mut vars = seed.vars.clone();
    vars[k] = new;
    Ok(Seed {
        vars,
        bmat: mutate_matrix(b, k)?,
        lambda: seed.lambda.as_ref().map(|l| mutate_lambda(l, b, k)),
    })
}

pub fn apply_sequence(seed: &Seed, ks: &[usize]) -> Result<Seed> {
    ks.iter().try_fold(seed.clone(), |s, &k| mutate_seed(&s, k))
}

/// Σ_t λ_it b_tj = 2δ_ij for i ∈ K, j ∈ K^ex.
pub fn check_compatible(lambda: &[Vec<i64>], b: &ExchangeMatrix) -> bool {
    let n = b.n;
    if lambda.len() != n || lambda.iter().any(|r| r.len() != n) {
        return false;
    }
    (0..n).all(|i| {
        b.exchangeable.iter().all(|&j| {
            let s: i64 = (0..n).map(|t| lambda[i][t] * b.get(t, j)).sum();
            s == if i == j { 2 } else { 0 }
        })
    })
}

pub fn positivity(p: &LaurentPoly) -> bool {
    p.is_positive()
}
