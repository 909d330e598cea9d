use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::Check;
use crate::symexpr::{PolyMatrix, Polynomial};

use super::{BundleDerivation, FrameAlgebroid, NamedCombination, Section};

/// An `A`-connection on a trivialized bundle `E` of rank `n`:
/// `∇_{ε_α} e_A = Γ_α^B_A e_B`, with `Γ_α` stored as an `n×n` matrix
/// (row `B`, column `A`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    algebroid: Arc<FrameAlgebroid>,
    names: Vec<String>,
    christoffel: Vec<PolyMatrix>,
}

impl Connection {
    pub fn new<S: Into<String>>(
        algebroid: Arc<FrameAlgebroid>,
        names: Vec<S>,
        christoffel: Vec<PolyMatrix>,
    ) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let n = names.len();
        if christoffel.len() != algebroid.rank() {
            return Err(Error::Shape(format!(
                "expected {} christoffel matrices, found {}",
                algebroid.rank(),
                christoffel.len()
            )));
        }
        for m in &christoffel {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Shape(format!(
                    "christoffel matrix must be {n}x{n}, found {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.chart() != algebroid.chart() {
                return Err(Error::ChartMismatch {
                    left: algebroid.chart().to_string(),
                    right: m.chart().to_string(),
                });
            }
        }
        Ok(Connection {
            algebroid,
            names,
            christoffel,
        })
    }

    /// The connection with all Christoffel symbols zero.
    pub fn trivial(algebroid: Arc<FrameAlgebroid>, n: usize) -> Self {
        let names = (1..=n).map(|i| format!("f{i}")).collect();
        let christoffel = vec![PolyMatrix::zero(algebroid.chart(), n, n); algebroid.rank()];
        Connection {
            algebroid,
            names,
            christoffel,
        }
    }

    pub fn algebroid(&self) -> &Arc<FrameAlgebroid> {
        &self.algebroid
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn christoffel(&self, alpha: usize) -> &PolyMatrix {
        &self.christoffel[alpha]
    }

    /// `∇_{ε_α}` as a derivation of `E`.
    pub fn frame_derivation(&self, alpha: usize) -> BundleDerivation {
        BundleDerivation::new(
            self.algebroid.anchor_field(alpha).clone(),
            self.christoffel[alpha].clone(),
        )
        .expect("connection data is well shaped")
    }

    /// `∇_a = Σ a^α ∇_{ε_α}`.
    pub fn derivation(&self, a: &Section) -> BundleDerivation {
        let mut out = BundleDerivation::zero(self.algebroid.chart(), self.rank());
        for (alpha, c) in a.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.frame_derivation(alpha).mul_poly(c));
            }
        }
        out
    }

    pub fn apply(&self, a: &Section, e: &[Polynomial]) -> Result<Vec<Polynomial>> {
        self.algebroid.check_section(a)?;
        self.derivation(a).try_apply(e)
    }

    /// Curvature `R(ε_α, ε_β) = [∇_α, ∇_β] - ∇_{[ε_α, ε_β]}` as an
    /// endomorphism-valued derivation.
    pub fn curvature(&self, alpha: usize, beta: usize) -> BundleDerivation {
        self.frame_derivation(alpha)
            .commutator(&self.frame_derivation(beta))
            .sub(&self.derivation(self.algebroid.frame_bracket(alpha, beta)))
    }

    pub fn check_flatness(&self) -> Check {
        let r = self.algebroid.rank();
        let pairs = (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b)));
        Check::first_failure("flatness", pairs, |(a, b)| {
            let k = self.curvature(a, b);
            (!k.is_zero()).then(|| (self.algebroid.tuple_name(&[a, b]), k.matrix().to_string()))
        })
    }

    pub fn require_flat(&self) -> Result<()> {
        let c = self.check_flatness();
        match c.witness {
            None => Ok(()),
            Some(w) => Err(Error::NotFlat(format!("R{} = {}", w.location, w.residual))),
        }
    }

    pub fn display_section<'a>(&'a self, e: &'a [Polynomial]) -> impl std::fmt::Display + 'a {
        NamedCombination {
            coeffs: e,
            names: &self.names,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{Chart, PolyVector};

    fn tm() -> Arc<FrameAlgebroid> {
        let c = Chart::new(["x"]);
        Arc::new(FrameAlgebroid::new(&c, vec!["e"], vec![PolyVector::coordinate(&c, 0)], std::iter::empty()).unwrap())
    }

    #[test]
    fn apply_examples() {
        let a = tm();
        let c = a.chart().clone();
        let x = Polynomial::var(&c, "x").unwrap();
        let nabla = Connection::new(
            a.clone(),
            vec!["f"],
            vec![PolyMatrix::from_rows(&c, vec![vec![x.clone()]]).unwrap()],
        )
        .unwrap();
        let e = a.frame_section(0);
        assert_eq!(nabla.apply(&e, &[Polynomial::one(&c)]).unwrap(), vec![x.clone()]);
        // d/dx(x) + x * x
        assert_eq!(
            nabla.apply(&e, std::slice::from_ref(&x)).unwrap(),
            vec![Polynomial::one(&c) + x.pow(2)]
        );
        assert!(nabla.check_flatness().passed());
    }

    #[test]
    fn commuting_and_noncommuting_actions() {
        let c = Chart::point();
        let ab = Arc::new(
            FrameAlgebroid::new(&c, vec!["e1", "e2"], vec![PolyVector::zero(&c); 2], std::iter::empty()).unwrap(),
        );
        let p = |v: i64| Polynomial::from_int(&c, v);
        let diag = |a: i64, b: i64| PolyMatrix::from_rows(&c, vec![vec![p(a), p(0)], vec![p(0), p(b)]]).unwrap();
        let flat = Connection::new(ab.clone(), vec!["f1", "f2"], vec![diag(1, 2), diag(3, -1)]).unwrap();
        assert!(flat.check_flatness().passed());
        let v1 = PolyMatrix::from_rows(&c, vec![vec![p(0), p(1)], vec![p(0), p(0)]]).unwrap();
        let v2 = PolyMatrix::from_rows(&c, vec![vec![p(0), p(0)], vec![p(1), p(0)]]).unwrap();
        let bent = Connection::new(ab, vec!["f1", "f2"], vec![v1.clone(), v2.clone()]).unwrap();
        let check = bent.check_flatness();
        assert!(!check.passed());
        assert_eq!(check.witness.unwrap().residual, v1.commutator(&v2).to_string());
        assert!(matches!(bent.require_flat(), Err(Error::NotFlat(_))));
    }
}
