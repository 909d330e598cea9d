use std::fmt;

use crate::error::{Error, Result};

use super::poly::{Chart, Polynomial, Rational};

/// A polynomial vector field `Σ X^i ∂/∂x^i` on a chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyVector {
    chart: Chart,
    components: Vec<Polynomial>,
}

impl PolyVector {
    pub fn new(chart: &Chart, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                found: components.len(),
            });
        }
        for c in &components {
            if c.chart() != chart {
                return Err(Error::ChartMismatch {
                    left: chart.to_string(),
                    right: c.chart().to_string(),
                });
            }
        }
        Ok(PolyVector {
            chart: chart.clone(),
            components,
        })
    }

    pub fn zero(chart: &Chart) -> Self {
        PolyVector {
            chart: chart.clone(),
            components: vec![Polynomial::zero(chart); chart.dim()],
        }
    }

    /// The coordinate field `∂/∂x^i`.
    pub fn coordinate(chart: &Chart, index: usize) -> Self {
        let mut v = Self::zero(chart);
        v.components[index] = Polynomial::one(chart);
        v
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn set_component(&mut self, i: usize, p: Polynomial) {
        assert_eq!(p.chart(), &self.chart, "component on a different chart");
        self.components[i] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Derivative of `f` along the field.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.chart);
        for (i, x) in self.components.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let d = f.partial(i);
            if !d.is_zero() {
                out += &(x * &d);
            }
        }
        out
    }

    /// Lie bracket of vector fields, `[X,Y]^i = X(Y^i) - Y(X^i)`.
    pub fn commutator(&self, other: &PolyVector) -> PolyVector {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(xi, yi)| self.apply(yi) - other.apply(xi))
            .collect();
        PolyVector {
            chart: self.chart.clone(),
            components,
        }
    }

    pub fn add(&self, other: &PolyVector) -> PolyVector {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PolyVector) -> PolyVector {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> PolyVector {
        self.map(|a| -a)
    }

    pub fn scale(&self, c: &Rational) -> PolyVector {
        self.map(|a| a.scale(c))
    }

    pub fn mul_poly(&self, f: &Polynomial) -> PolyVector {
        self.map(|a| a * f)
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyVector {
        PolyVector {
            chart: self.chart.clone(),
            components: self.components.iter().map(f).collect(),
        }
    }

    fn zip_with(&self, other: &PolyVector, f: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> PolyVector {
        assert_eq!(self.chart, other.chart, "vector fields on different charts");
        PolyVector {
            chart: self.chart.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Re-expresses the field on a larger chart by coordinate names; new
    /// directions get zero components.
    pub fn reexpress(&self, target: &Chart) -> Result<PolyVector> {
        let mut out = PolyVector::zero(target);
        for (name, c) in self.chart.names().iter().zip(&self.components) {
            match target.index_of(name) {
                Some(j) => out.components[j] = c.reexpress(target)?,
                None if c.is_zero() => {}
                None => return Err(Error::UnknownVariable(name.clone())),
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PolyVector {
    /// `(x^2)*d/dx + d/dy` style; `0` for the zero field.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, c) in self.chart.names().iter().zip(&self.components) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let one = Rational::from_integer(1.into());
            match c.constant_value() {
                Some(v) if v == one => write!(f, "d/d{name}")?,
                Some(v) if v == -one => write!(f, "-d/d{name}")?,
                _ => write!(f, "({c})*d/d{name}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A dense matrix of polynomials on a chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    chart: Chart,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zero(chart: &Chart, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            chart: chart.clone(),
            rows,
            cols,
            entries: vec![Polynomial::zero(chart); rows * cols],
        }
    }

    pub fn identity(chart: &Chart, n: usize) -> Self {
        let mut m = Self::zero(chart, n, n);
        for i in 0..n {
            m.set(i, i, Polynomial::one(chart));
        }
        m
    }

    pub fn scalar(chart: &Chart, n: usize, c: &Rational) -> Self {
        Self::identity(chart, n).scale(c)
    }

    pub fn from_rows(chart: &Chart, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::Shape(format!(
                    "ragged matrix: expected {ncols} columns, found {}",
                    row.len()
                )));
            }
            for p in row {
                if p.chart() != chart {
                    return Err(Error::ChartMismatch {
                        left: chart.to_string(),
                        right: p.chart().to_string(),
                    });
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix {
            chart: chart.clone(),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    /// Matrix with one unit entry at `(row, col)`.
    pub fn unit(chart: &Chart, rows: usize, cols: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zero(chart, rows, cols);
        m.set(row, col, Polynomial::one(chart));
        m
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Polynomial) {
        assert_eq!(p.chart(), &self.chart, "entry on a different chart");
        self.entries[r * self.cols + c] = p;
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn column(&self, c: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zero(&self.chart, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zero(&self.chart, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Polynomial::zero(&self.chart);
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    let b = other.get(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        self.try_mul(other).expect("matrix shapes do not compose")
    }

    pub fn mul_vec(&self, v: &[Polynomial]) -> Vec<Polynomial> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix");
        (0..self.rows)
            .map(|r| {
                let mut acc = Polynomial::zero(&self.chart);
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(r, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(|a| -a)
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        self.map(|a| a.scale(c))
    }

    pub fn mul_poly(&self, f: &Polynomial) -> PolyMatrix {
        self.map(|a| a * f)
    }

    /// Entrywise derivative along a vector field.
    pub fn derive(&self, x: &PolyVector) -> PolyMatrix {
        self.map(|a| x.apply(a))
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &PolyMatrix) -> PolyMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix {
            chart: self.chart.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn zip_with(&self, other: &PolyMatrix, f: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> PolyMatrix {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "matrix shapes differ: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        PolyMatrix {
            chart: self.chart.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn reexpress(&self, target: &Chart) -> Result<PolyMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.reexpress(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            chart: target.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }
}

impl fmt::Display for PolyMatrix {
    /// Rows separated by `;`, entries by `,`, matching the input syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}
