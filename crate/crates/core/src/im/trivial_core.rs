use crate::algebroid::{BundleDerivation, Connection};
use crate::defcomplex::DefCochain;
use crate::error::{Error, Result};
use crate::report::Check;
use crate::symexpr::{PolyMatrix, PolyVector, Polynomial};
use crate::vb::SplitVB;

use super::IMTriple;

/// Coordinate data of a candidate IM section of the trivial-core
/// VB-algebroid of `(A, ∇)`: `δ_A ε_β = -U^α_β ε_α` with symbol `X`, and
/// `δ_E e_B = V^A_B e_A` with the same symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMSectionCoords {
    x: PolyVector,
    u: PolyMatrix,
    v: PolyMatrix,
}

impl IMSectionCoords {
    pub fn new(conn: &Connection, x: PolyVector, u: PolyMatrix, v: PolyMatrix) -> Result<Self> {
        let a = conn.algebroid();
        let (r, n) = (a.rank(), conn.rank());
        for (what, chart) in [("X", x.chart()), ("U", u.chart()), ("V", v.chart())] {
            if chart != a.chart() {
                return Err(Error::ChartMismatch {
                    left: a.chart().to_string(),
                    right: format!("{chart} ({what})"),
                });
            }
        }
        if u.rows() != r || u.cols() != r {
            return Err(Error::Shape(format!(
                "U must be {r}x{r}, found {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        if v.rows() != n || v.cols() != n {
            return Err(Error::Shape(format!(
                "V must be {n}x{n}, found {}x{}",
                v.rows(),
                v.cols()
            )));
        }
        Ok(IMSectionCoords { x, u, v })
    }

    pub fn zero(conn: &Connection) -> Self {
        let a = conn.algebroid();
        let c = a.chart();
        IMSectionCoords {
            x: PolyVector::zero(c),
            u: PolyMatrix::zero(c, a.rank(), a.rank()),
            v: PolyMatrix::zero(c, conn.rank(), conn.rank()),
        }
    }

    pub fn x(&self) -> &PolyVector {
        &self.x
    }

    pub fn u(&self) -> &PolyMatrix {
        &self.u
    }

    pub fn v(&self) -> &PolyMatrix {
        &self.v
    }

    /// `(δ_A, δ_E)`.
    pub fn to_pair(&self) -> (BundleDerivation, BundleDerivation) {
        let da = BundleDerivation::new(self.x.clone(), self.u.neg()).expect("square");
        let de = BundleDerivation::new(self.x.clone(), self.v.clone()).expect("square");
        (da, de)
    }

    /// Inverse of [`IMSectionCoords::to_pair`]; the symbols must agree.
    pub fn from_pair(conn: &Connection, da: &BundleDerivation, de: &BundleDerivation) -> Result<Self> {
        if da.symbol() != de.symbol() {
            return Err(Error::Shape(format!(
                "symbol mismatch: {} vs {}",
                da.symbol(),
                de.symbol()
            )));
        }
        Self::new(conn, da.symbol().clone(), da.matrix().neg(), de.matrix().clone())
    }
}

/// The derivation conditions for a pair `(δ_A, δ_E)` on the trivial-core
/// VB-algebroid of a flat `∇`: `sigma` and `connection`
/// (`[δ_E, ∇_{ε_α}] = ∇_{δ_A ε_α}`).
pub fn trivial_core_im_check(conn: &Connection, da: &DefCochain, de: &BundleDerivation) -> Result<Vec<Check>> {
    conn.require_flat()?;
    let a = conn.algebroid();
    if **da.parent() != **a || da.degree() != 1 {
        return Err(Error::Shape("δ_A must be a 1-cochain of the base algebroid".into()));
    }
    if de.chart() != a.chart() || de.rank() != conn.rank() {
        return Err(Error::Shape(format!(
            "δ_E must be a derivation of a rank-{} bundle over {}",
            conn.rank(),
            a.chart()
        )));
    }
    if let Some(w) = da.is_algebroid_derivation().witness {
        return Err(Error::NotDerivation(format!("{}: {}", w.location, w.residual)));
    }
    let d = da.as_derivation().expect("degree 1");
    let mut out = Vec::new();
    out.push(if d.symbol() == de.symbol() {
        Check::pass("sigma")
    } else {
        Check::fail(
            "sigma",
            "symbols",
            format!("symbol mismatch: {} vs {}", d.symbol(), de.symbol()),
        )
    });
    let names = a.frame_names();
    out.push(Check::first_failure("connection", 0..a.rank(), |al| {
        let lhs = de.commutator(&conn.frame_derivation(al));
        let rhs = conn.derivation(&da.value_on_frame(&[al]));
        let res = lhs.sub(&rhs);
        (!res.is_zero()).then(|| (names[al].clone(), res.to_string()))
    }));
    Ok(out)
}

/// The coordinate system `pde_1`, `pde_2`, `pde_3` for an IM section of
/// the trivial-core VB-algebroid, each as an exact polynomial identity.
pub fn im_section_pde_check(conn: &Connection, s: &IMSectionCoords) -> Result<Vec<Check>> {
    let s = IMSectionCoords::new(conn, s.x.clone(), s.u.clone(), s.v.clone())?;
    let a = conn.algebroid();
    let c = a.chart();
    let (m, r, n) = (c.dim(), a.rank(), conn.rank());
    let names = a.frame_names();
    let coords = c.names();
    let fiber = conn.names();
    let rho = |i: usize, al: usize| a.anchor_field(al).component(i);
    let x = |i: usize| s.x.component(i);
    let u = |al: usize, be: usize| s.u.get(al, be);
    let v = |p: usize, q: usize| s.v.get(p, q);
    let gamma = |al: usize, p: usize, q: usize| conn.christoffel(al).get(p, q);
    let zero = Polynomial::zero(c);
    let along = |field: &dyn Fn(usize) -> Polynomial, f: &Polynomial| {
        let mut acc = zero.clone();
        for j in 0..m {
            acc += &(field(j) * f.partial(j));
        }
        acc
    };
    let mut out = Vec::new();

    // ρ^j_α ∂_j X^i - (∂_j ρ^i_α) X^j - ρ^i_β U^β_α
    let pairs = (0..r).flat_map(|al| (0..m).map(move |i| (al, i)));
    out.push(Check::first_failure("pde_1", pairs, |(al, i)| {
        let mut res = along(&|j| rho(j, al).clone(), x(i));
        res -= &along(&|j| x(j).clone(), rho(i, al));
        for be in 0..r {
            res -= &(rho(i, be) * u(be, al));
        }
        (!res.is_zero()).then(|| (format!("({}, {})", names[al], coords[i]), res.to_string()))
    }));

    // ρ_α(V^A_B) - X(Γ_α^A_B) - Γ_α^C_B V^A_C + Γ_α^A_C V^C_B - Γ_β^A_B U^β_α
    let triples = (0..r).flat_map(|al| (0..n).flat_map(move |p| (0..n).map(move |q| (al, p, q))));
    out.push(Check::first_failure("pde_2", triples, |(al, p, q)| {
        let mut res = along(&|j| rho(j, al).clone(), v(p, q));
        res -= &along(&|j| x(j).clone(), gamma(al, p, q));
        for t in 0..n {
            res -= &(gamma(al, t, q) * v(p, t));
            res += &(gamma(al, p, t) * v(t, q));
        }
        for be in 0..r {
            res -= &(gamma(be, p, q) * u(be, al));
        }
        (!res.is_zero()).then(|| (format!("({}, {}, {})", names[al], fiber[p], fiber[q]), res.to_string()))
    }));

    // ρ_β(U^α_γ) - ρ_γ(U^α_β) - c^α_δβ U^δ_γ + c^α_δγ U^δ_β - c^δ_βγ U^α_δ + X(c^α_βγ)
    let triples = (0..r).flat_map(|al| (0..r).flat_map(move |be| (be + 1..r).map(move |ga| (al, be, ga))));
    out.push(Check::first_failure("pde_3", triples, |(al, be, ga)| {
        let mut res = along(&|j| rho(j, be).clone(), u(al, ga));
        res -= &along(&|j| rho(j, ga).clone(), u(al, be));
        for de in 0..r {
            res -= &(a.structure(al, de, be) * u(de, ga));
            res += &(a.structure(al, de, ga) * u(de, be));
            res -= &(a.structure(de, be, ga) * u(al, de));
        }
        res += &along(&|j| x(j).clone(), a.structure(al, be, ga));
        (!res.is_zero()).then(|| {
            (
                format!("({}, {}, {})", names[al], names[be], names[ga]),
                res.to_string(),
            )
        })
    }));
    Ok(out)
}

/// The triple `(δ_A, δ_E, δ_C)` on a trivial-core presentation, whose fat
/// algebroid is the base; `δ_C` acts on the zero bundle with symbol `σ(δ_A)`.
pub fn trivial_core_triple(w: &SplitVB, da: &BundleDerivation, de: &BundleDerivation) -> Result<IMTriple> {
    if w.core_rank() != 0 {
        return Err(Error::Shape(format!(
            "expected trivial core, found core rank {}",
            w.core_rank()
        )));
    }
    let core = BundleDerivation::new(da.symbol().clone(), PolyMatrix::zero(w.base_chart(), 0, 0))?;
    IMTriple::new(w, da.clone(), de.clone(), core)
}
