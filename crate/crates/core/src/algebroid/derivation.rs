use std::fmt;

use crate::error::{Error, Result};
use crate::symexpr::{Chart, PolyMatrix, PolyVector, Polynomial, Rational};

/// A derivation of a trivialized vector bundle of rank `n`:
/// `Δ(f e) = X(f) e + f Δ(e)` with `Δ e_A = V^B_A e_B`.
///
/// The matrix is stored with row index `B` and column index `A`, so the
/// column of `V` is the image of the source frame element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BundleDerivation {
    symbol: PolyVector,
    matrix: PolyMatrix,
}

impl BundleDerivation {
    pub fn new(symbol: PolyVector, matrix: PolyMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::Shape(format!(
                "derivation matrix must be square, found {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if symbol.chart() != matrix.chart() {
            return Err(Error::ChartMismatch {
                left: symbol.chart().to_string(),
                right: matrix.chart().to_string(),
            });
        }
        Ok(BundleDerivation { symbol, matrix })
    }

    pub fn zero(chart: &Chart, rank: usize) -> Self {
        BundleDerivation {
            symbol: PolyVector::zero(chart),
            matrix: PolyMatrix::zero(chart, rank, rank),
        }
    }

    /// The endomorphism derivation `(0, V)`.
    pub fn endomorphism(matrix: PolyMatrix) -> Result<Self> {
        let symbol = PolyVector::zero(matrix.chart());
        Self::new(symbol, matrix)
    }

    pub fn chart(&self) -> &Chart {
        self.symbol.chart()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn symbol(&self) -> &PolyVector {
        &self.symbol
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_zero() && self.matrix.is_zero()
    }

    pub fn try_apply(&self, e: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if e.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: e.len(),
            });
        }
        Ok(self.apply(e))
    }

    /// `(Δe)^B = X(e^B) + V^B_A e^A`.
    pub fn apply(&self, e: &[Polynomial]) -> Vec<Polynomial> {
        let ve = self.matrix.mul_vec(e);
        e.iter().zip(ve).map(|(eb, v)| self.symbol.apply(eb) + v).collect()
    }

    /// `Δ₁∘Δ₂ - Δ₂∘Δ₁`: symbol `[X₁, X₂]`, matrix `X₁(V₂) - X₂(V₁) + V₁V₂ - V₂V₁`.
    pub fn commutator(&self, other: &BundleDerivation) -> BundleDerivation {
        let matrix = self
            .matrix
            .derive(&other.symbol)
            .neg()
            .add(&other.matrix.derive(&self.symbol))
            .add(&self.matrix.commutator(&other.matrix));
        BundleDerivation {
            symbol: self.symbol.commutator(&other.symbol),
            matrix,
        }
    }

    /// The dual derivation on `E*`, `⟨Δ*φ, e⟩ = X⟨φ, e⟩ - ⟨φ, Δe⟩`.
    pub fn dual(&self) -> BundleDerivation {
        BundleDerivation {
            symbol: self.symbol.clone(),
            matrix: self.matrix.transpose().neg(),
        }
    }

    pub fn add(&self, other: &BundleDerivation) -> BundleDerivation {
        BundleDerivation {
            symbol: self.symbol.add(&other.symbol),
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn sub(&self, other: &BundleDerivation) -> BundleDerivation {
        BundleDerivation {
            symbol: self.symbol.sub(&other.symbol),
            matrix: self.matrix.sub(&other.matrix),
        }
    }

    pub fn neg(&self) -> BundleDerivation {
        BundleDerivation {
            symbol: self.symbol.neg(),
            matrix: self.matrix.neg(),
        }
    }

    pub fn scale(&self, c: &Rational) -> BundleDerivation {
        BundleDerivation {
            symbol: self.symbol.scale(c),
            matrix: self.matrix.scale(c),
        }
    }

    /// `f Δ`, again a derivation.
    pub fn mul_poly(&self, f: &Polynomial) -> BundleDerivation {
        BundleDerivation {
            symbol: self.symbol.mul_poly(f),
            matrix: self.matrix.mul_poly(f),
        }
    }

    pub fn reexpress(&self, target: &Chart) -> Result<BundleDerivation> {
        Ok(BundleDerivation {
            symbol: self.symbol.reexpress(target)?,
            matrix: self.matrix.reexpress(target)?,
        })
    }
}

impl fmt::Display for BundleDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "symbol {}, matrix {}", self.symbol, self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::rat;

    fn line() -> (Chart, Polynomial) {
        let c = Chart::new(["x"]);
        let x = Polynomial::var(&c, "x").unwrap();
        (c, x)
    }

    fn mat1(p: Polynomial) -> PolyMatrix {
        let c = p.chart().clone();
        PolyMatrix::from_rows(&c, vec![vec![p]]).unwrap()
    }

    #[test]
    fn apply_examples() {
        let (c, x) = line();
        let id = BundleDerivation::endomorphism(PolyMatrix::identity(&c, 1)).unwrap();
        assert_eq!(id.apply(std::slice::from_ref(&x)), vec![x.clone()]);
        let dx = BundleDerivation::new(PolyVector::coordinate(&c, 0), PolyMatrix::zero(&c, 1, 1)).unwrap();
        assert_eq!(dx.apply(std::slice::from_ref(&x)), vec![Polynomial::one(&c)]);
        let d = BundleDerivation::new(PolyVector::coordinate(&c, 0), mat1(x.clone())).unwrap();
        // d/dx(x^2) + x * x^2
        assert_eq!(d.apply(&[x.pow(2)]), vec![x.scale(&rat(2)) + x.pow(3)]);
    }

    #[test]
    fn commutator_examples() {
        let (c, x) = line();
        let dx = BundleDerivation::new(PolyVector::coordinate(&c, 0), PolyMatrix::zero(&c, 1, 1)).unwrap();
        assert!(dx.commutator(&dx).is_zero());
        let one = BundleDerivation::endomorphism(PolyMatrix::identity(&c, 1)).unwrap();
        assert!(dx.commutator(&one).is_zero());
        let xm = BundleDerivation::endomorphism(mat1(x)).unwrap();
        assert_eq!(dx.commutator(&xm), one);
    }

    #[test]
    fn dual_examples() {
        let (c, x) = line();
        let v = BundleDerivation::new(
            PolyVector::new(&c, vec![x.clone()]).unwrap(),
            PolyMatrix::zero(&c, 1, 1),
        )
        .unwrap();
        assert_eq!(v.dual(), v);
        let lam = BundleDerivation::endomorphism(PolyMatrix::scalar(&c, 1, &rat(3))).unwrap();
        assert_eq!(lam.dual(), lam.neg());
        let d = BundleDerivation::new(PolyVector::coordinate(&c, 0), mat1(x)).unwrap();
        assert_eq!(d.dual().dual(), d);
    }
}
