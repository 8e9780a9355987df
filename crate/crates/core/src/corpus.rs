//! Built-in matrices with known determinants.
//!
//! Published values are stored exactly (decimals converted to fractions).
//! Entries marked [`ExpectedDet::Derived`] have no published value; their
//! determinant is computed by the Bareiss oracle when asked for.

use serde::Serialize;

use crate::matrix::SymMatrix;
use crate::oracle::det_bareiss;
use crate::poly::{Polynomial, VarId};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpectedDet {
    Published(Rational),
    Derived,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub matrix: SymMatrix,
    pub expected: ExpectedDet,
    pub provenance: &'static str,
}

impl CorpusEntry {
    /// The published value, or the oracle value for derived entries.
    pub fn expected_det(&self) -> Rational {
        match &self.expected {
            ExpectedDet::Published(r) => r.clone(),
            ExpectedDet::Derived => {
                det_bareiss(&self.matrix).expect("corpus matrices are constant")
            }
        }
    }
}

/// One line of the exported corpus manifest.
#[derive(Clone, Debug, Serialize)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub n: usize,
    pub expected_det: String,
    pub derived: bool,
    pub provenance: String,
}

impl From<&CorpusEntry> for ManifestEntry {
    fn from(e: &CorpusEntry) -> Self {
        ManifestEntry {
            name: e.name.to_string(),
            file: format!("{}.csv", e.name),
            n: e.matrix.n(),
            expected_det: e.expected_det().to_string(),
            derived: e.expected == ExpectedDet::Derived,
            provenance: e.provenance.to_string(),
        }
    }
}

fn parse_rows(rows: &[&[&str]]) -> SymMatrix {
    let rows: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| s.parse().expect("corpus literal"))
                .collect()
        })
        .collect();
    SymMatrix::from_rationals(&rows).expect("corpus matrices are square")
}

fn published(s: &str) -> ExpectedDet {
    ExpectedDet::Published(s.parse().expect("corpus literal"))
}

/// A 4x4 whose interior zero survives every cyclic row/column shift.
pub fn shift_resistant_4x4() -> SymMatrix {
    SymMatrix::from_ints([[1, 0, 3, 0], [0, -1, 0, 1], [1, 1, 2, 0], [0, 2, 0, 1]])
}

pub fn centre_zero_4x4() -> SymMatrix {
    SymMatrix::from_ints([[3, -2, 1, 2], [-1, 4, 4, 1], [3, 3, 3, 4], [2, 5, 2, -1]])
}

/// First condensation shared by `centre_zero_4x4` and A1..A6; its centre is 0.
pub fn shared_intermediate() -> SymMatrix {
    SymMatrix::from_ints([[10, -12, -7], [-15, 0, 13], [9, -9, -11]])
}

pub fn matrix_a1() -> SymMatrix {
    SymMatrix::from_ints([[1, -2, 1, 2], [3, 4, 4, 1], [6, 3, 3, 4], [7, 5, 2, -1]])
}

pub fn matrix_a2() -> SymMatrix {
    parse_rows(&[
        &["0.25", "9", "12", "4.75"],
        &["-1", "4", "4", "1"],
        &["3", "3", "3", "4"],
        &["2", "5", "2", "-1"],
    ])
}

pub fn matrix_a3() -> SymMatrix {
    parse_rows(&[
        &["3", "-2", "1", "0.25"],
        &["-1", "4", "4", "-6"],
        &["3", "3", "3", "-1.25"],
        &["2", "5", "2", "-4.5"],
    ])
}

pub fn matrix_a4() -> SymMatrix {
    parse_rows(&[
        &["-45", "-5", "-2", "0.5"],
        &["-7", "-1", "2", "3"],
        &["-8", "1", "-2", "3.5"],
        &["-25", "2", "-13", "28.25"],
    ])
}

pub fn matrix_a5() -> SymMatrix {
    parse_rows(&[
        &["0", "1", "5", "-8.5"],
        &["-10", "2", "-2", "2"],
        &["-7.5", "3", "-3", "-3.5"],
        &["-8", "2", "-5", "-13/6"],
    ])
}

pub fn matrix_a6() -> SymMatrix {
    parse_rows(&[
        &["0", "1", "4", "31/12"],
        &["-10", "6", "12", "6"],
        &["35/12", "-1/4", "-1/2", "5/6"],
        &["-34", "6", "48", "-58"],
    ])
}

/// 4x4 with a 2x2 block of zeros in the interior.
pub fn zero_block_4x4() -> SymMatrix {
    SymMatrix::from_ints([[1, 2, 3, 4], [5, 0, 0, 6], [7, 0, 0, 8], [9, 10, 11, 12]])
}

/// `zero_block_4x4` with its four zeros replaced by `x0..x3` in reading order.
pub fn zero_block_4x4_symbolic() -> SymMatrix {
    let mut m = zero_block_4x4();
    let mut v = 0;
    for i in 1..3 {
        for j in 1..3 {
            m.set(i, j, Polynomial::var(VarId(v)));
            v += 1;
        }
    }
    m
}

/// 5x5 on which replacing intermediate zeros still gives the right value.
pub fn intermediate_ok_5x5() -> SymMatrix {
    SymMatrix::from_ints([
        [1, 0, 1, 0, 1],
        [0, 1, 1, 1, 1],
        [1, 2, 1, 1, 2],
        [-1, 1, 1, 2, 1],
        [0, 1, 0, 1, 0],
    ])
}

/// 5x5 with a 3x3 zero interior; needs nine fresh variables.
pub fn zero_block_5x5() -> SymMatrix {
    SymMatrix::from_ints([
        [1, 3, 5, 7, 9],
        [-2, 0, 0, 0, -4],
        [-6, 0, 0, 0, -8],
        [-10, 0, 0, 0, -12],
        [9, 7, 5, 3, 1],
    ])
}

pub fn corpus_entries() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "E1.1",
            matrix: shift_resistant_4x4(),
            expected: published("3"),
            provenance: "interior zero that no cyclic shift removes",
        },
        CorpusEntry {
            name: "E2.2",
            matrix: centre_zero_4x4(),
            expected: published("213"),
            provenance: "zero appears at the centre of the first condensation",
        },
        CorpusEntry {
            name: "A1",
            matrix: matrix_a1(),
            expected: published("213"),
            provenance: "shares the first condensation of E2.2",
        },
        CorpusEntry {
            name: "A2",
            matrix: matrix_a2(),
            expected: published("213"),
            provenance: "shares the first condensation of E2.2",
        },
        CorpusEntry {
            name: "A3",
            matrix: matrix_a3(),
            expected: published("213"),
            provenance: "shares the first condensation of E2.2",
        },
        CorpusEntry {
            name: "A4",
            matrix: matrix_a4(),
            expected: published("5665.5"),
            provenance: "shares the first condensation of E2.2, different determinant",
        },
        CorpusEntry {
            name: "A5",
            matrix: matrix_a5(),
            expected: published("451.5"),
            provenance: "shares the first condensation of E2.2, different determinant",
        },
        CorpusEntry {
            name: "A6",
            matrix: matrix_a6(),
            expected: published("2073"),
            provenance: "shares the first condensation of E2.2, different determinant",
        },
        CorpusEntry {
            name: "E2.3",
            matrix: zero_block_4x4(),
            expected: published("16"),
            provenance: "2x2 block of interior zeros, four fresh variables",
        },
        CorpusEntry {
            name: "S4-5x5",
            matrix: intermediate_ok_5x5(),
            expected: ExpectedDet::Derived,
            provenance: "intermediate replacement happens to give the right value",
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_values_match_bareiss() {
        for e in corpus_entries() {
            if let ExpectedDet::Published(v) = &e.expected {
                assert_eq!(&det_bareiss(&e.matrix).unwrap(), v, "{}", e.name);
            }
        }
    }

    #[test]
    fn decimal_values_are_exact_fractions() {
        let entries = corpus_entries();
        let get = |name| {
            entries
                .iter()
                .find(|e| e.name == name)
                .unwrap()
                .expected_det()
        };
        assert_eq!(get("A4"), Rational::new(11331, 2).unwrap());
        assert_eq!(get("A5"), Rational::new(903, 2).unwrap());
        assert_eq!(get("S4-5x5"), Rational::one());
    }

    #[test]
    fn manifest_lines() {
        let entries = corpus_entries();
        let m = ManifestEntry::from(&entries[5]);
        assert_eq!(m.file, "A4.csv");
        assert_eq!(m.expected_det, "11331/2");
        assert!(!m.derived);
        assert!(ManifestEntry::from(entries.last().unwrap()).derived);
    }
}
