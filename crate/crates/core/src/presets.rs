//! Standard height functions and sequences used by the CLI, the service and the test suites.

use crate::adm_seq::AdmissibleSequence;
use crate::error::Result;
use crate::qdatum::{adapted_word, QDatum};
use crate::root_data::{folded_datum, AffineType, FoldedCartanDatum, Node};

/// A height function for the type. For the classical rows and F₄, G₂ these are the standard
/// examples; other types use ξ_ι = distance from node 1.
pub fn example_xi(datum: &FoldedCartanDatum) -> Vec<i64> {
    use AffineType::*;
    let r = datum.rank as i64;
    match datum.affine_tag {
        A(n) | ATwisted(n) => (1..=n as i64).map(|k| n as i64 - k).collect(),
        D(n) | DTwisted(n) => (1..=n as i64).map(|k| if k <= n as i64 - 2 { n as i64 - 1 - k } else { 0 }).collect(),
        B(n) => {
            let n = n as i64;
            (1..=r)
                .map(|k| match k {
                    k if k < n => 2 * (n - k) - 1,
                    k if k == n => 0,
                    k => 2 * (k - n) - 3,
                })
                .collect()
        }
        C(n) => {
            let n = n as i64;
            (1..=r)
                .map(|k| match k {
                    k if k <= n - 2 => n - 2 - k,
                    k if k == n - 1 => -1,
                    k if k == n => 0,
                    _ => 2,
                })
                .collect()
        }
        F4 => vec![0, -2, -2, -3, -4, -2],
        G2 => vec![-1, 0, 1, 3],
        _ => datum.nodes().map(|i| datum.distance(1, i) as i64).collect(),
    }
}

pub fn example_q_datum(tag: AffineType) -> Result<QDatum> {
    let datum = folded_datum(tag)?;
    let xi = example_xi(&datum);
    QDatum::new(datum, xi)
}

/// The sequence of the example height function with its smallest-sink adapted word.
pub fn example_sequence(tag: AffineType) -> Result<AdmissibleSequence> {
    let q = example_q_datum(tag)?;
    let w = adapted_word(&q);
    AdmissibleSequence::from_q_datum(&q, &w)
}

/// The A₃ sequence with ξ = (0,1,2) and word s₁s₂s₃s₁s₂s₁, so that (i_{-2},…,i_3) = (3,2,3,1,2,3).
pub fn section5_sequence() -> AdmissibleSequence {
    let q = QDatum::new(folded_datum(AffineType::A(3)).unwrap(), vec![0, 1, 2]).unwrap();
    AdmissibleSequence::from_q_datum(&q, &[1, 2, 3, 1, 2, 1]).unwrap()
}

/// The sequence selected by `--seq default`: the worked A₃ sequence for A₃, otherwise
/// [`example_sequence`].
pub fn default_sequence(tag: AffineType) -> Result<AdmissibleSequence> {
    if tag == AffineType::A(3) {
        Ok(section5_sequence())
    } else {
        example_sequence(tag)
    }
}

/// Every supported tag of small rank, for exhaustive tests.
pub fn small_types() -> Vec<AffineType> {
    use AffineType::*;
    vec![
        A(1),
        A(2),
        A(3),
        A(4),
        A(5),
        B(2),
        B(3),
        C(2),
        C(3),
        C(4),
        D(4),
        D(5),
        E(6),
        F4,
        G2,
        ATwisted(3),
        ATwisted(4),
        DTwisted(4),
        D4Triality,
        E6Twisted,
    ]
}

pub fn word_string(w: &[Node]) -> String {
    w.iter().map(|i| format!("s{i}")).collect()
}
