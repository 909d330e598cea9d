//! The deformation complex of a frame algebroid.

pub mod perm;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebroid::{BundleDerivation, FrameAlgebroid, Section};
use crate::error::{Error, Result};
use crate::report::Check;
use crate::symexpr::{PolyMatrix, PolyVector, Polynomial, Rational};

use perm::{for_each_permutation, increasing_tuples, omit, sign, sort_with_sign};

/// Default bound on cochain degrees handled by [`DefCochain::differential`].
pub const DEFAULT_DEGREE_CAP: usize = 4;

/// A degree-`k` multiderivation of a frame algebroid, stored by its values
/// on increasing frame tuples and the values of its symbol on increasing
/// `(k-1)`-tuples. Zero entries are not stored.
///
/// A degree-0 cochain is a section, kept under the empty tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefCochain {
    degree: usize,
    parent: Arc<FrameAlgebroid>,
    values: BTreeMap<Vec<usize>, Section>,
    symbols: BTreeMap<Vec<usize>, PolyVector>,
}

impl DefCochain {
    pub fn zero(parent: Arc<FrameAlgebroid>, degree: usize) -> Self {
        DefCochain {
            degree,
            parent,
            values: BTreeMap::new(),
            symbols: BTreeMap::new(),
        }
    }

    pub fn from_section(parent: Arc<FrameAlgebroid>, a: Section) -> Result<Self> {
        parent.check_section(&a)?;
        let mut c = Self::zero(parent, 0);
        c.insert_value(vec![], a);
        Ok(c)
    }

    /// The 1-cochain of a derivation of the underlying vector bundle.
    pub fn from_derivation(parent: Arc<FrameAlgebroid>, d: &BundleDerivation) -> Result<Self> {
        if d.rank() != parent.rank() || d.chart() != parent.chart() {
            return Err(Error::Shape("derivation does not act on this algebroid".into()));
        }
        let mut c = Self::zero(parent.clone(), 1);
        for alpha in 0..parent.rank() {
            c.insert_value(vec![alpha], Section::new(parent.chart(), d.matrix().column(alpha))?);
        }
        c.insert_symbol(vec![], d.symbol().clone());
        Ok(c)
    }

    /// Builds a cochain from frame data given on arbitrary tuples; entries
    /// are brought to increasing order with the permutation sign, and later
    /// entries for the same tuple are added.
    pub fn new(
        parent: Arc<FrameAlgebroid>,
        degree: usize,
        values: impl IntoIterator<Item = (Vec<usize>, Section)>,
        symbols: impl IntoIterator<Item = (Vec<usize>, PolyVector)>,
    ) -> Result<Self> {
        let mut c = Self::zero(parent.clone(), degree);
        for (idx, s) in values {
            parent.check_section(&s)?;
            c.check_tuple(&idx, degree)?;
            if let Some((sorted, odd)) = sort_with_sign(&idx) {
                let s = if odd { s.neg() } else { s };
                let cur = c.value_on_frame(&sorted);
                c.insert_value(sorted, cur.add(&s));
            } else if !s.is_zero() {
                return Err(Error::Shape(format!("nonzero value on repeated tuple {idx:?}")));
            }
        }
        if degree == 0 {
            if symbols.into_iter().next().is_some() {
                return Err(Error::Shape("a degree-0 cochain has no symbol".into()));
            }
            return Ok(c);
        }
        for (idx, v) in symbols {
            if v.chart() != parent.chart() {
                return Err(Error::ChartMismatch {
                    left: parent.chart().to_string(),
                    right: v.chart().to_string(),
                });
            }
            c.check_tuple(&idx, degree - 1)?;
            if let Some((sorted, odd)) = sort_with_sign(&idx) {
                let v = if odd { v.neg() } else { v };
                let cur = c.symbol_on_frame(&sorted);
                c.insert_symbol(sorted, cur.add(&v));
            } else if !v.is_zero() {
                return Err(Error::Shape(format!("nonzero symbol on repeated tuple {idx:?}")));
            }
        }
        Ok(c)
    }

    fn check_tuple(&self, idx: &[usize], len: usize) -> Result<()> {
        if idx.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: idx.len(),
            });
        }
        if let Some(&i) = idx.iter().find(|&&i| i >= self.parent.rank()) {
            return Err(Error::Shape(format!("frame index {i} out of range")));
        }
        Ok(())
    }

    fn insert_value(&mut self, idx: Vec<usize>, s: Section) {
        if s.is_zero() {
            self.values.remove(&idx);
        } else {
            self.values.insert(idx, s);
        }
    }

    fn insert_symbol(&mut self, idx: Vec<usize>, v: PolyVector) {
        if v.is_zero() {
            self.symbols.remove(&idx);
        } else {
            self.symbols.insert(idx, v);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parent(&self) -> &Arc<FrameAlgebroid> {
        &self.parent
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty() && self.symbols.is_empty()
    }

    /// Stored (nonzero) frame values on increasing tuples.
    pub fn values(&self) -> &BTreeMap<Vec<usize>, Section> {
        &self.values
    }

    /// Stored (nonzero) symbol values on increasing tuples.
    pub fn symbols(&self) -> &BTreeMap<Vec<usize>, PolyVector> {
        &self.symbols
    }

    /// `c(ε_{α_1}, …, ε_{α_k})` for any index tuple.
    pub fn value_on_frame(&self, idx: &[usize]) -> Section {
        match sort_with_sign(idx) {
            None => self.parent.zero_section(),
            Some((sorted, odd)) => match self.values.get(&sorted) {
                None => self.parent.zero_section(),
                Some(s) if odd => s.neg(),
                Some(s) => s.clone(),
            },
        }
    }

    /// `σ_c(ε_{α_1}, …, ε_{α_{k-1}})` for any index tuple.
    pub fn symbol_on_frame(&self, idx: &[usize]) -> PolyVector {
        let zero = || PolyVector::zero(self.parent.chart());
        match sort_with_sign(idx) {
            None => zero(),
            Some((sorted, odd)) => match self.symbols.get(&sorted) {
                None => zero(),
                Some(v) if odd => v.neg(),
                Some(v) => v.clone(),
            },
        }
    }

    /// The section of a degree-0 cochain.
    pub fn as_section(&self) -> Option<Section> {
        (self.degree == 0).then(|| self.value_on_frame(&[]))
    }

    /// The derivation of a degree-1 cochain.
    pub fn as_derivation(&self) -> Option<BundleDerivation> {
        if self.degree != 1 {
            return None;
        }
        let r = self.parent.rank();
        let mut m = PolyMatrix::zero(self.parent.chart(), r, r);
        for alpha in 0..r {
            for (beta, p) in self.value_on_frame(&[alpha]).coeffs().iter().enumerate() {
                m.set(beta, alpha, p.clone());
            }
        }
        Some(BundleDerivation::new(self.symbol_on_frame(&[]), m).expect("square matrix"))
    }

    fn check_args(&self, args: &[Section], expected: usize) -> Result<()> {
        if args.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: args.len(),
            });
        }
        for a in args {
            self.parent.check_section(a)?;
        }
        Ok(())
    }

    /// Tensorial expansion `Σ Π a_j^{α_j} table(α)`.
    fn expand<T>(
        &self,
        args: &[Section],
        table: &BTreeMap<Vec<usize>, T>,
        zero: T,
        add_scaled: impl Fn(&T, &T, &Polynomial, bool) -> T,
    ) -> T {
        let mut acc = zero;
        for (idx, entry) in table {
            // sum over permutations of the stored tuple
            for_each_permutation(idx, |perm, odd| {
                let mut coeff = Polynomial::one(self.parent.chart());
                for (a, &alpha) in args.iter().zip(perm) {
                    let f = a.coeff(alpha);
                    if f.is_zero() {
                        return;
                    }
                    coeff = &coeff * f;
                }
                acc = add_scaled(&acc, entry, &coeff, odd);
            });
        }
        acc
    }

    /// `σ_c(a_1, …, a_{k-1})`, tensorial in every slot.
    pub fn symbol_eval(&self, args: &[Section]) -> Result<PolyVector> {
        if self.degree == 0 {
            return Err(Error::Shape("a degree-0 cochain has no symbol".into()));
        }
        self.check_args(args, self.degree - 1)?;
        Ok(self.symbol_eval_unchecked(args))
    }

    fn symbol_eval_unchecked(&self, args: &[Section]) -> PolyVector {
        self.expand(
            args,
            &self.symbols,
            PolyVector::zero(self.parent.chart()),
            |acc, v, f, odd| {
                let t = v.mul_poly(f);
                if odd {
                    acc.sub(&t)
                } else {
                    acc.add(&t)
                }
            },
        )
    }

    /// `c(a_1, …, a_k)`, extended from the frame by multilinearity,
    /// antisymmetry and the Leibniz rule:
    /// `c(a) = Σ Π a_j^{α_j} c(ε_α) + Σ_i (-1)^{k-i} σ_c(…â_i…)(a_i)`.
    pub fn eval(&self, args: &[Section]) -> Result<Section> {
        self.check_args(args, self.degree)?;
        Ok(self.eval_unchecked(args))
    }

    fn eval_unchecked(&self, args: &[Section]) -> Section {
        let k = self.degree;
        let mut out = self.expand(args, &self.values, self.parent.zero_section(), |acc, s, f, odd| {
            let t = s.mul_poly(f);
            if odd {
                acc.sub(&t)
            } else {
                acc.add(&t)
            }
        });
        if self.symbols.is_empty() {
            return out;
        }
        for i in 0..k {
            let rest = omit(args, &[i]);
            let x = self.symbol_eval_unchecked(&rest);
            if x.is_zero() {
                continue;
            }
            let d = args[i].map(|p| x.apply(p));
            // slot i (0-based) moves to the end through k-1-i transpositions
            out = if sign(k - 1 - i) > 0 { out.add(&d) } else { out.sub(&d) };
        }
        out
    }

    pub fn add(&self, other: &DefCochain) -> Result<DefCochain> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &DefCochain) -> Result<DefCochain> {
        self.combine(other, true)
    }

    fn combine(&self, other: &DefCochain, subtract: bool) -> Result<DefCochain> {
        if !Arc::ptr_eq(&self.parent, &other.parent) && self.parent != other.parent {
            return Err(Error::ParentMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::Shape(format!(
                "cannot combine degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (idx, s) in &other.values {
            let cur = out.value_on_frame(idx);
            out.insert_value(idx.clone(), if subtract { cur.sub(s) } else { cur.add(s) });
        }
        for (idx, v) in &other.symbols {
            let cur = out.symbol_on_frame(idx);
            out.insert_symbol(idx.clone(), if subtract { cur.sub(v) } else { cur.add(v) });
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> DefCochain {
        let mut out = Self::zero(self.parent.clone(), self.degree);
        for (idx, s) in &self.values {
            out.insert_value(idx.clone(), s.scale(c));
        }
        for (idx, v) in &self.symbols {
            out.insert_symbol(idx.clone(), v.scale(c));
        }
        out
    }

    pub fn neg(&self) -> DefCochain {
        self.scale(&Rational::from_integer((-1).into()))
    }

    /// Highest total degree among stored coefficients.
    pub fn max_poly_degree(&self) -> u32 {
        let vals = self
            .values
            .values()
            .flat_map(|s| s.coeffs().iter().filter_map(Polynomial::total_degree));
        let syms = self
            .symbols
            .values()
            .flat_map(|v| v.components().iter().filter_map(Polynomial::total_degree));
        vals.chain(syms).max().unwrap_or(0)
    }

    pub fn differential(&self) -> Result<DefCochain> {
        self.differential_with_cap(DEFAULT_DEGREE_CAP)
    }

    /// The differential; degree 0 is special-cased to `d a = [a, -]`.
    pub fn differential_with_cap(&self, cap: usize) -> Result<DefCochain> {
        let k = self.degree;
        if k + 1 > cap {
            return Err(Error::DegreeCap { degree: k + 1, cap });
        }
        let a = &self.parent;
        let r = a.rank();
        let mut out = Self::zero(a.clone(), k + 1);
        if k == 0 {
            let s = self.value_on_frame(&[]);
            for beta in 0..r {
                out.insert_value(vec![beta], a.bracket(&s, &a.frame_section(beta)));
            }
            out.insert_symbol(vec![], a.anchor(&s));
            return Ok(out);
        }
        let frame: Vec<Section> = (0..r).map(|i| a.frame_section(i)).collect();
        for idx in increasing_tuples(r, k + 1) {
            let args: Vec<Section> = idx.iter().map(|&i| frame[i].clone()).collect();
            out.insert_value(idx, self.partial_values(&args));
        }
        for idx in increasing_tuples(r, k) {
            let args: Vec<Section> = idx.iter().map(|&i| frame[i].clone()).collect();
            out.insert_symbol(idx, self.partial_symbol(&args));
        }
        Ok(out)
    }

    /// Right-hand side of the differential on `k+1` sections (1-based signs).
    fn partial_values(&self, args: &[Section]) -> Section {
        let a = &self.parent;
        let n = args.len();
        let mut acc = a.zero_section();
        for i in 0..n {
            let rest = omit(args, &[i]);
            let t = a.bracket(&args[i], &self.eval_unchecked(&rest));
            // (-1)^{(i+1)+1}
            acc = if sign(i) > 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        for i in 0..n {
            for j in i + 1..n {
                let mut rest = vec![a.bracket(&args[i], &args[j])];
                rest.extend(omit(args, &[i, j]));
                let t = self.eval_unchecked(&rest);
                acc = if sign(i + j) > 0 { acc.add(&t) } else { acc.sub(&t) };
            }
        }
        acc
    }

    /// Symbol of the differential on `k` sections.
    fn partial_symbol(&self, args: &[Section]) -> PolyVector {
        let a = &self.parent;
        let k = args.len();
        let mut acc = PolyVector::zero(a.chart());
        for i in 0..k {
            let rest = omit(args, &[i]);
            let t = a.anchor(&args[i]).commutator(&self.symbol_eval_unchecked(&rest));
            acc = if sign(i) > 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        for i in 0..k {
            for j in i + 1..k {
                let mut rest = vec![a.bracket(&args[i], &args[j])];
                rest.extend(omit(args, &[i, j]));
                let t = self.symbol_eval_unchecked(&rest);
                acc = if sign(i + j) > 0 { acc.add(&t) } else { acc.sub(&t) };
            }
        }
        let rho = a.anchor(&self.eval_unchecked(args));
        // - (-1)^k
        if sign(k) > 0 {
            acc.sub(&rho)
        } else {
            acc.add(&rho)
        }
    }

    /// Degree-1 cocycle test: `δ[a,b] = [δa,b] + [a,δb]` and
    /// `ρ(δa) = [σ(δ), ρ(a)]` on the frame.
    pub fn is_algebroid_derivation(&self) -> Check {
        let name = "algebroid_derivation";
        if self.degree != 1 {
            return Check::error(name, format!("expected degree 1, found {}", self.degree));
        }
        let a = &self.parent;
        let r = a.rank();
        let names = a.frame_names();
        let pairs = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j)));
        let bracket = Check::first_failure(name, pairs, |(i, j)| {
            let (ei, ej) = (a.frame_section(i), a.frame_section(j));
            let lhs = self.eval_unchecked(&[a.bracket(&ei, &ej)]);
            let rhs = a
                .bracket(&self.value_on_frame(&[i]), &ej)
                .add(&a.bracket(&ei, &self.value_on_frame(&[j])));
            let res = lhs.sub(&rhs);
            (!res.is_zero()).then(|| (a.tuple_name(&[i, j]), res.display(names).to_string()))
        });
        if !bracket.passed() {
            return bracket;
        }
        let sigma = self.symbol_on_frame(&[]);
        Check::first_failure(name, 0..r, |i| {
            let res = a
                .anchor(&self.value_on_frame(&[i]))
                .sub(&sigma.commutator(a.anchor_field(i)));
            (!res.is_zero()).then(|| (format!("anchor {}", a.tuple_name(&[i])), res.to_string()))
        })
    }

    /// `[[Δ, c]]` for a derivation `Δ` of the underlying vector bundle:
    /// values `Δ(c(w)) - Σ c(…, Δw_i, …)`, symbol
    /// `[σ(Δ), σ_c(w)] - Σ σ_c(…, Δw_i, …)`.
    pub fn bracket_with_derivation(&self, d: &BundleDerivation) -> Result<DefCochain> {
        let a = &self.parent;
        if d.rank() != a.rank() || d.chart() != a.chart() {
            return Err(Error::ParentMismatch);
        }
        let k = self.degree;
        let r = a.rank();
        let apply = |s: &Section| Section::new(a.chart(), d.apply(s.coeffs())).expect("same chart");
        let mut out = Self::zero(a.clone(), k);
        let frame: Vec<Section> = (0..r).map(|i| a.frame_section(i)).collect();
        let dframe: Vec<Section> = frame.iter().map(apply).collect();
        for idx in increasing_tuples(r, k) {
            let args: Vec<Section> = idx.iter().map(|&i| frame[i].clone()).collect();
            let mut acc = apply(&self.eval_unchecked(&args));
            for (slot, &i) in idx.iter().enumerate() {
                let mut moved = args.clone();
                moved[slot] = dframe[i].clone();
                acc = acc.sub(&self.eval_unchecked(&moved));
            }
            out.insert_value(idx, acc);
        }
        if k >= 1 {
            for idx in increasing_tuples(r, k - 1) {
                let args: Vec<Section> = idx.iter().map(|&i| frame[i].clone()).collect();
                let mut acc = d.symbol().commutator(&self.symbol_eval_unchecked(&args));
                for (slot, &i) in idx.iter().enumerate() {
                    let mut moved = args.clone();
                    moved[slot] = dframe[i].clone();
                    acc = acc.sub(&self.symbol_eval_unchecked(&moved));
                }
                out.insert_symbol(idx, acc);
            }
        }
        Ok(out)
    }

    /// Leibniz consistency in the last slot on the given arguments:
    /// `c(…, f a_k) - f c(…, a_k) - σ_c(…)(f) a_k`.
    pub fn leibniz_defect(&self, args: &[Section], f: &Polynomial) -> Result<Section> {
        if self.degree == 0 {
            return Err(Error::Shape("a degree-0 cochain has no arguments".into()));
        }
        self.check_args(args, self.degree)?;
        let k = self.degree;
        let mut scaled = args.to_vec();
        scaled[k - 1] = args[k - 1].mul_poly(f);
        let lhs = self.eval_unchecked(&scaled);
        let base = self.eval_unchecked(args).mul_poly(f);
        let x = self.symbol_eval_unchecked(&args[..k - 1]);
        let extra = args[k - 1].mul_poly(&x.apply(f));
        Ok(lhs.sub(&base).sub(&extra))
    }

    /// A printable table of frame values and symbols.
    pub fn table(&self) -> CochainTable<'_> {
        CochainTable(self)
    }
}

/// Frame values and symbols of a cochain, one per line.
pub struct CochainTable<'a>(&'a DefCochain);

impl fmt::Display for CochainTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        let a = &c.parent;
        let names = a.frame_names();
        let tuple = |idx: &[usize]| idx.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(", ");
        writeln!(f, "degree {}", c.degree)?;
        for idx in increasing_tuples(a.rank(), c.degree) {
            writeln!(f, "value [{}] = {}", tuple(&idx), c.value_on_frame(&idx).display(names))?;
        }
        if c.degree > 0 {
            for idx in increasing_tuples(a.rank(), c.degree - 1) {
                writeln!(f, "symbol [{}] = {}", tuple(&idx), c.symbol_on_frame(&idx))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
