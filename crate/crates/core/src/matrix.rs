//! Dense square matrices of polynomial entries.
//!
//! Storage is row-major and 0-based; every user-facing coordinate
//! ([`Position`], [`Window`]) is 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::det_cofactor;
use crate::poly::{Polynomial, VarId};
use crate::rational::{rat_from_decimal_string, Rational};

/// A 1-based `(row, col)` coordinate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Contiguous square block: rows `row_start..row_start+size-1`, same for
/// columns. 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Window {
    pub row_start: usize,
    pub col_start: usize,
    pub size: usize,
}

impl Window {
    pub fn new(row_start: usize, col_start: usize, size: usize) -> Self {
        Window {
            row_start,
            col_start,
            size,
        }
    }

    pub fn fits(&self, n: usize) -> bool {
        self.size >= 1
            && self.row_start >= 1
            && self.col_start >= 1
            && self.row_start + self.size - 1 <= n
            && self.col_start + self.size - 1 <= n
    }

    pub fn top_left(&self) -> Position {
        Position::new(self.row_start, self.col_start)
    }

    /// All positions of the window in row-major order.
    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.size).flat_map(move |di| {
            (0..self.size).map(move |dj| Position::new(self.row_start + di, self.col_start + dj))
        })
    }

    pub fn contains(&self, p: Position) -> bool {
        p.row >= self.row_start
            && p.row < self.row_start + self.size
            && p.col >= self.col_start
            && p.col < self.col_start + self.size
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rows {}..{}, cols {}..{}",
            self.row_start,
            self.row_start + self.size - 1,
            self.col_start,
            self.col_start + self.size - 1
        )
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatrixJson", try_from = "MatrixJson")]
pub struct SymMatrix {
    n: usize,
    entries: Vec<Polynomial>,
}

impl SymMatrix {
    pub fn new(n: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        Ok(SymMatrix { n, entries })
    }

    /// Builds from a 0-based generator.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        SymMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRows {
                    row: i + 1,
                    len: row.len(),
                    expected: n,
                });
            }
            entries.extend(row);
        }
        Ok(SymMatrix { n, entries })
    }

    pub fn from_rationals(rows: &[Vec<Rational>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().cloned().map(Polynomial::constant).collect())
                .collect(),
        )
    }

    pub fn from_ints<const N: usize>(rows: [[i64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| Polynomial::from(rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                Polynomial::one()
            } else {
                Polynomial::zero()
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 0-based access.
    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.n + j] = p;
    }

    /// 1-based access.
    pub fn at(&self, pos: Position) -> &Polynomial {
        self.get(pos.row - 1, pos.col - 1)
    }

    pub fn set_at(&mut self, pos: Position, p: Polynomial) {
        self.set(pos.row - 1, pos.col - 1, p)
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Polynomial]> {
        self.entries.chunks(self.n)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(Polynomial::is_constant)
    }

    /// Entries as rationals, or `SymbolicEntry` if any entry has a variable.
    pub fn to_rationals(&self) -> Result<Vec<Vec<Rational>>> {
        self.rows()
            .map(|r| {
                r.iter()
                    .map(|p| p.constant_value().ok_or(Error::SymbolicEntry))
                    .collect()
            })
            .collect()
    }

    pub fn vars(&self) -> std::collections::BTreeSet<VarId> {
        self.entries.iter().flat_map(|p| p.vars()).collect()
    }

    pub fn transpose(&self) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, w: Window) -> Result<SymMatrix> {
        if !w.fits(self.n) {
            return Err(Error::WindowOutOfBounds {
                window: w,
                n: self.n,
            });
        }
        Ok(SymMatrix::from_fn(w.size, |i, j| {
            self.get(w.row_start - 1 + i, w.col_start - 1 + j).clone()
        }))
    }

    /// Matrix with row `skip_row` and column `skip_col` (0-based) removed.
    pub fn minor_matrix(&self, skip_row: usize, skip_col: usize) -> SymMatrix {
        let n = self.n - 1;
        SymMatrix::from_fn(n, |i, j| {
            let r = if i < skip_row { i } else { i + 1 };
            let c = if j < skip_col { j } else { j + 1 };
            self.get(r, c).clone()
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> MatrixJson {
        MatrixJson {
            n: self.n,
            rows: self
                .rows()
                .map(|r| r.iter().map(|p| p.to_string()).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("matrix JSON is always serializable")
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for row in cells.chunks(self.n) {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", padded.join("  "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .map(|r| r.iter().map(|p| p.to_string()).collect())
            .collect();
        write!(f, "SymMatrix{rows:?}")
    }
}

/// On-disk JSON form: `{"n": 4, "rows": [["1", "0", ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub rows: Vec<Vec<String>>,
}

impl From<SymMatrix> for MatrixJson {
    fn from(m: SymMatrix) -> Self {
        m.to_json_value()
    }
}

impl TryFrom<MatrixJson> for SymMatrix {
    type Error = Error;

    fn try_from(value: MatrixJson) -> Result<Self> {
        if value.rows.len() != value.n {
            return Err(Error::DimensionMismatch(format!(
                "n = {} but {} rows given",
                value.n,
                value.rows.len()
            )));
        }
        check_shape(value.rows.iter().map(Vec::len))?;
        let rows = value
            .rows
            .iter()
            .map(|r| r.iter().map(|s| parse_entry(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        SymMatrix::from_rows(rows)
    }
}

/// Rational/decimal literal first; anything else must be a polynomial.
fn parse_entry(s: &str) -> Result<Polynomial> {
    match rat_from_decimal_string(s) {
        Ok(r) => Ok(Polynomial::constant(r)),
        Err(e @ Error::ZeroDenominator(_)) => Err(e),
        Err(e) => s.parse::<Polynomial>().map_err(|_| e),
    }
}

fn check_shape(lens: impl Iterator<Item = usize>) -> Result<()> {
    let lens: Vec<usize> = lens.collect();
    let Some(&first) = lens.first() else {
        return Err(Error::EmptyMatrix);
    };
    if let Some((row, &len)) = lens.iter().enumerate().find(|(_, &l)| l != first) {
        return Err(Error::RaggedRows {
            row: row + 1,
            len,
            expected: first,
        });
    }
    if lens.len() != first {
        return Err(Error::NonSquare {
            rows: lens.len(),
            cols: first,
        });
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatrixFormat {
    Csv,
    Json,
}

pub fn parse_matrix(text: &str, format: MatrixFormat) -> Result<SymMatrix> {
    match format {
        MatrixFormat::Csv => {
            let rows: Vec<Vec<&str>> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(|l| l.split(',').map(str::trim).collect())
                .collect();
            check_shape(rows.iter().map(Vec::len))?;
            let rows = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|s| rat_from_decimal_string(s).map(Polynomial::constant))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            SymMatrix::from_rows(rows)
        }
        MatrixFormat::Json => {
            let raw: MatrixJson =
                serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
            raw.try_into()
        }
    }
}

/// The (n-2)x(n-2) block left after deleting the outer ring.
pub fn interior(m: &SymMatrix) -> Result<SymMatrix> {
    if m.n() < 3 {
        return Err(Error::NoInterior(m.n()));
    }
    m.submatrix(Window::new(2, 2, m.n() - 2))
}

/// Determinant of the windowed block, via cofactor expansion.
pub fn contiguous_minor(m: &SymMatrix, w: Window) -> Result<Polynomial> {
    det_cofactor(&m.submatrix(w)?)
}
