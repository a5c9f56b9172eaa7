//! Dense containers of unit values.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::unit::{parse_unit, UnitValue};

/// A non-empty column vector of unit values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitVector(Vec<UnitValue>);

impl UnitVector {
    pub fn new(entries: Vec<UnitValue>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch(
                "vector must have at least one entry".into(),
            ));
        }
        Ok(Self(entries))
    }

    pub fn parse(texts: &[&str]) -> Result<Self> {
        Self::new(texts.iter().map(|t| parse_unit(t)).collect::<Result<_>>()?)
    }

    pub fn filled(len: usize, value: UnitValue) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, UnitValue> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[UnitValue] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<UnitValue> {
        self.0
    }

    pub fn map(&self, f: impl FnMut(&UnitValue) -> UnitValue) -> Self {
        Self(self.0.iter().map(f).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().zip(other.iter()).all(|(a, b)| a <= b)
    }

    /// `‖self - other‖∞`.
    pub fn linf_distance(&self, other: &Self) -> Result<UnitValue> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .iter()
            .zip(other.iter())
            .map(|(a, b)| a.abs_diff(b))
            .max()
            .unwrap_or_else(UnitValue::zero))
    }
}

impl Index<usize> for UnitVector {
    type Output = UnitValue;

    fn index(&self, i: usize) -> &UnitValue {
        &self.0[i]
    }
}

impl fmt::Debug for UnitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for UnitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (idx, v) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// A dense `(rows, cols)` matrix of unit values, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<UnitValue>,
}

impl UnitMatrix {
    pub fn from_rows(rows: Vec<Vec<UnitValue>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(Error::DimensionMismatch(
                "matrix must be at least 1x1".into(),
            ));
        }
        if let Some((idx, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} entries, expected {m}",
                idx + 1,
                row.len()
            )));
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn parse(rows: &[&[&str]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|t| parse_unit(t)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?,
        )
    }

    pub fn filled(rows: usize, cols: usize, value: UnitValue) -> Result<Self> {
        Self::from_rows(vec![vec![value; cols]; rows])
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> UnitValue,
    ) -> Result<Self> {
        Self::from_rows(
            (0..rows)
                .map(|r| (0..cols).map(|c| f(r, c)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, row: usize, col: usize) -> &UnitValue {
        assert!(
            row < self.rows && col < self.cols,
            "index ({row}, {col}) out of bounds for {}x{}",
            self.rows,
            self.cols
        );
        &self.data[row * self.cols + col]
    }

    pub fn try_get(&self, row: usize, col: usize) -> Result<&UnitValue> {
        self.check_index(row, col)?;
        Ok(&self.data[row * self.cols + col])
    }

    pub fn set(&mut self, row: usize, col: usize, value: UnitValue) {
        assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col] = value;
    }

    pub fn check_index(&self, row: usize, col: usize) -> Result<()> {
        if row < self.rows && col < self.cols {
            Ok(())
        } else {
            Err(Error::IndexOutOfBounds {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn row(&self, row: usize) -> &[UnitValue] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[UnitValue]> {
        self.data.chunks(self.cols)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = &UnitValue> {
        self.data.iter().skip(col).step_by(self.cols)
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = &UnitValue> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            data.extend(self.column(c).cloned());
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map(&self, f: impl FnMut(&UnitValue) -> UnitValue) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<UnitValue>> {
        self.row_iter().map(<[UnitValue]>::to_vec).collect()
    }
}

impl fmt::Debug for UnitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.row_iter().map(|r| r.to_vec()))
            .finish()
    }
}

impl fmt::Display for UnitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, row) in self.row_iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// The entrywise transform `t ↦ 1 - t`, an involution.
pub trait Complement {
    fn complement(&self) -> Self;
}

impl Complement for UnitValue {
    fn complement(&self) -> Self {
        UnitValue::complement(self)
    }
}

impl Complement for UnitVector {
    fn complement(&self) -> Self {
        self.map(UnitValue::complement)
    }
}

impl Complement for UnitMatrix {
    fn complement(&self) -> Self {
        self.map(UnitValue::complement)
    }
}
