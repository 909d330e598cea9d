use std::fmt;

use crate::algebroid::{BundleDerivation, Section};
use crate::defcomplex::perm::{increasing_tuples, omit, sign};
use crate::defcomplex::DefCochain;
use crate::error::{Error, Result};
use crate::report::Check;
use crate::symexpr::{PolyMatrix, PolyVector};
use crate::vb::{FatAlgebroid, SplitVB};

use super::hom_bracket;
use super::table::AltTable;

/// The data `(c_Â, c_E, c_C, D)` of a linear `k`-cochain: a cochain of the
/// fat algebroid, skew `(k-1)`-forms on `Â` with values in derivations of
/// `E` and `C`, and a skew `(k-2)`-form with values in `Hom(C, E)`. Parts
/// whose arity would be negative are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearDecomposition {
    degree: usize,
    fat: DefCochain,
    side: Option<AltTable<BundleDerivation>>,
    core: Option<AltTable<BundleDerivation>>,
    hom: Option<AltTable<PolyMatrix>>,
}

impl LinearDecomposition {
    /// Assembles a decomposition from its parts; the arities must be
    /// `k - 1` and `k - 2` where defined.
    pub fn new(
        fat: DefCochain,
        side: Option<AltTable<BundleDerivation>>,
        core: Option<AltTable<BundleDerivation>>,
        hom: Option<AltTable<PolyMatrix>>,
    ) -> Result<Self> {
        let k = fat.degree();
        let arity = |t: Option<usize>, want: Option<usize>, what: &str| {
            if t == want {
                Ok(())
            } else {
                Err(Error::Shape(format!("{what} part has arity {t:?}, expected {want:?}")))
            }
        };
        arity(side.as_ref().map(AltTable::arity), k.checked_sub(1), "side")?;
        arity(core.as_ref().map(AltTable::arity), k.checked_sub(1), "core")?;
        arity(hom.as_ref().map(AltTable::arity), k.checked_sub(2), "hom")?;
        Ok(LinearDecomposition {
            degree: k,
            fat,
            side,
            core,
            hom,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn fat(&self) -> &DefCochain {
        &self.fat
    }

    pub fn side(&self) -> Option<&AltTable<BundleDerivation>> {
        self.side.as_ref()
    }

    pub fn core(&self) -> Option<&AltTable<BundleDerivation>> {
        self.core.as_ref()
    }

    pub fn hom(&self) -> Option<&AltTable<PolyMatrix>> {
        self.hom.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.fat.is_zero()
            && self.side.as_ref().is_none_or(AltTable::is_zero)
            && self.core.as_ref().is_none_or(AltTable::is_zero)
            && self.hom.as_ref().is_none_or(AltTable::is_zero)
    }
}

impl fmt::Display for LinearDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.fat.parent().frame_names();
        let tuple = |idx: &[usize]| {
            let v: Vec<&str> = idx.iter().map(|&i| names[i].as_str()).collect();
            format!("[{}]", v.join(", "))
        };
        writeln!(f, "fat:")?;
        write!(f, "{}", self.fat.table())?;
        if let Some(t) = &self.side {
            for (idx, d) in t.entries() {
                writeln!(f, "side {} = {}", tuple(idx), d)?;
            }
        }
        if let Some(t) = &self.core {
            for (idx, d) in t.entries() {
                writeln!(f, "core {} = {}", tuple(idx), d)?;
            }
        }
        if let Some(t) = &self.hom {
            for (idx, m) in t.entries() {
                writeln!(f, "hom {} = {}", tuple(idx), m)?;
            }
        }
        Ok(())
    }
}

fn fat_frame(fat: &FatAlgebroid) -> Vec<Section> {
    let a = fat.algebroid();
    (0..a.rank()).map(|i| a.frame_section(i)).collect()
}

fn pick(frame: &[Section], idx: &[usize]) -> Vec<Section> {
    idx.iter().map(|&i| frame[i].clone()).collect()
}

/// Splits a linear cochain into its fat, side, core and `Hom(C, E)` parts.
pub fn decompose_linear(w: &SplitVB, c: &DefCochain) -> Result<LinearDecomposition> {
    let lin = w.classify_cochain_linearity(c)?;
    if let Some(wit) = lin.witness {
        return Err(Error::NotLinear(format!(
            "[[Euler, c]] at {} = {}",
            wit.location, wit.residual
        )));
    }
    let fat = w.fat()?;
    let fa = fat.algebroid();
    let size = fa.rank();
    let bc = w.base_chart();
    let (n, kc) = (w.side_rank(), w.core_rank());
    let k = c.degree();
    let lifts: Vec<Section> = fat_frame(&fat).iter().map(|s| w.lift_fat(s)).collect();
    let cores: Vec<Section> = (0..kc).map(|b| w.total().frame_section(w.core_index(b))).collect();
    if k == 0 {
        let s = w.project_fat(&c.value_on_frame(&[]))?;
        return LinearDecomposition::new(DefCochain::from_section(fa.clone(), s)?, None, None, None);
    }
    let mut values = Vec::new();
    for idx in increasing_tuples(size, k) {
        values.push((idx.clone(), w.project_fat(&c.eval(&pick(&lifts, &idx))?)?));
    }
    let mut symbols = Vec::new();
    let mut side = AltTable::new(k - 1, BundleDerivation::zero(bc, n));
    let mut core = AltTable::new(k - 1, BundleDerivation::zero(bc, kc));
    for idx in increasing_tuples(size, k - 1) {
        let args = pick(&lifts, &idx);
        let d = w.field_derivation(&c.symbol_eval(&args)?)?;
        symbols.push((idx.clone(), d.symbol().clone()));
        let mut m = PolyMatrix::zero(bc, kc, kc);
        for (dd, chi) in cores.iter().enumerate() {
            let mut full = args.clone();
            full.push(chi.clone());
            for (b, p) in w.core_part(&c.eval(&full)?)?.into_iter().enumerate() {
                m.set(b, dd, p);
            }
        }
        core.insert(&idx, BundleDerivation::new(d.symbol().clone(), m)?);
        side.insert(&idx, d);
    }
    let hom = if k >= 2 {
        let mut hom = AltTable::new(k - 2, PolyMatrix::zero(bc, n, kc));
        for idx in increasing_tuples(size, k - 2) {
            let args = pick(&lifts, &idx);
            let mut m = PolyMatrix::zero(bc, n, kc);
            for (dd, chi) in cores.iter().enumerate() {
                let mut full = args.clone();
                full.push(chi.clone());
                for (a, p) in w.vertical_section(&c.symbol_eval(&full)?)?.into_iter().enumerate() {
                    m.set(a, dd, p);
                }
            }
            hom.insert(&idx, m);
        }
        Some(hom)
    } else {
        None
    };
    let fat_cochain = DefCochain::new(fa.clone(), k, values, symbols)?;
    LinearDecomposition::new(fat_cochain, Some(side), Some(core), hom)
}

fn check_shapes(w: &SplitVB, fat: &FatAlgebroid, dec: &LinearDecomposition) -> Result<()> {
    if **dec.fat.parent() != **fat.algebroid() {
        return Err(Error::ParentMismatch);
    }
    let bc = w.base_chart();
    let (n, kc) = (w.side_rank(), w.core_rank());
    if let Some(t) = &dec.side {
        if *t.zero_value() != BundleDerivation::zero(bc, n) {
            return Err(Error::Shape("side part does not act on the side bundle".into()));
        }
    }
    if let Some(t) = &dec.core {
        if *t.zero_value() != BundleDerivation::zero(bc, kc) {
            return Err(Error::Shape("core part does not act on the core".into()));
        }
    }
    if let Some(t) = &dec.hom {
        if *t.zero_value() != PolyMatrix::zero(bc, n, kc) {
            return Err(Error::Shape(format!("hom part must be {n}x{kc}")));
        }
    }
    Ok(())
}

/// The compatibility conditions on a decomposition, checked with a
/// `Hom(E, C)` frame element in the last slot: `derivation_valued`,
/// `fat_hom`, `side_hom`, `core_hom`, `hom_hom`.
pub fn check_decomposition(w: &SplitVB, dec: &LinearDecomposition) -> Result<Vec<Check>> {
    let fat = w.fat()?;
    check_shapes(w, &fat, dec)?;
    let k = dec.degree;
    if k == 0 {
        return Ok(Vec::new());
    }
    let fa = fat.algebroid();
    let names = fa.frame_names();
    let size = fa.rank();
    let frame = fat_frame(&fat);
    let homs: Vec<usize> = (fat.base_rank()..size).collect();
    let side = dec.side.as_ref().expect("degree >= 1");
    let core = dec.core.as_ref().expect("degree >= 1");
    let with_hom = |arity: usize| -> Vec<(Vec<usize>, usize)> {
        increasing_tuples(size, arity)
            .into_iter()
            .flat_map(|idx| homs.iter().map(move |&h| (idx.clone(), h)))
            .collect()
    };
    let loc = |idx: &[usize], h: usize| {
        let mut v = idx.to_vec();
        v.push(h);
        fa.tuple_name(&v)
    };
    let mut out = Vec::new();

    out.push(Check::first_failure(
        "derivation_valued",
        increasing_tuples(size, k - 1),
        |idx| {
            let x = dec.fat.symbol_on_frame(&idx);
            let (xs, xc) = (side.get(&idx), core.get(&idx));
            (xs.symbol() != &x || xc.symbol() != &x).then(|| {
                (
                    fa.tuple_name(&idx),
                    format!("symbol mismatch: fat {x}, side {}, core {}", xs.symbol(), xc.symbol()),
                )
            })
        },
    ));

    out.push(Check::first_failure("fat_hom", with_hom(k - 1), |(idx, h)| {
        let mut args = pick(&frame, &idx);
        args.push(frame[h].clone());
        let lhs = dec.fat.eval(&args).expect("fat sections");
        let phi = fat.hom_part(&frame[h]);
        let head = &args[..k - 1];
        let rhs = fat.hom_section(&hom_bracket(&core.eval(head), &phi, &side.eval(head)));
        let res = lhs.sub(&rhs);
        (!res.is_zero()).then(|| (loc(&idx, h), res.display(names).to_string()))
    }));

    let hom = dec.hom.as_ref();
    let zero_hom = PolyMatrix::zero(w.base_chart(), w.side_rank(), w.core_rank());
    let hom_at = |args: &[Section]| hom.map_or(zero_hom.clone(), |t| t.eval(args));
    if k >= 2 {
        out.push(Check::first_failure("side_hom", with_hom(k - 2), |(idx, h)| {
            let mut args = pick(&frame, &idx);
            let d = hom_at(&args);
            args.push(frame[h].clone());
            let phi = fat.hom_part(&frame[h]);
            let expected = BundleDerivation::endomorphism(d.mul(&phi).neg()).expect("square");
            let res = side.eval(&args).sub(&expected);
            (!res.is_zero()).then(|| (loc(&idx, h), res.to_string()))
        }));
        out.push(Check::first_failure("core_hom", with_hom(k - 2), |(idx, h)| {
            let mut args = pick(&frame, &idx);
            let d = hom_at(&args);
            args.push(frame[h].clone());
            let phi = fat.hom_part(&frame[h]);
            let expected = BundleDerivation::endomorphism(phi.mul(&d).neg()).expect("square");
            let res = core.eval(&args).sub(&expected);
            (!res.is_zero()).then(|| (loc(&idx, h), res.to_string()))
        }));
    } else {
        out.push(Check::pass("side_hom"));
        out.push(Check::pass("core_hom"));
    }
    if k >= 3 {
        out.push(Check::first_failure("hom_hom", with_hom(k - 3), |(idx, h)| {
            let mut args = pick(&frame, &idx);
            args.push(frame[h].clone());
            let res = hom_at(&args);
            (!res.is_zero()).then(|| (loc(&idx, h), res.to_string()))
        }));
    } else {
        out.push(Check::pass("hom_hom"));
    }
    Ok(out)
}

/// The linear cochain with the given decomposition.
pub fn compose_linear(w: &SplitVB, dec: &LinearDecomposition) -> Result<DefCochain> {
    for c in check_decomposition(w, dec)? {
        if let Some(wit) = c.witness {
            return Err(Error::Decomposition(format!(
                "{} at {}: {}",
                c.name, wit.location, wit.residual
            )));
        }
    }
    let total = w.total();
    let k = dec.degree;
    if k == 0 {
        let s = dec.fat.as_section().expect("degree 0");
        return DefCochain::from_section(total.clone(), w.lift_fat(&s));
    }
    let r = w.base_rank();
    let kc = w.core_rank();
    let side = dec.side.as_ref().expect("degree >= 1");
    let core = dec.core.as_ref().expect("degree >= 1");
    let mut values = Vec::new();
    for idx in increasing_tuples(r, k) {
        values.push((idx.clone(), w.lift_fat(&dec.fat.value_on_frame(&idx))));
    }
    for idx in increasing_tuples(r, k - 1) {
        let m = core.get(&idx);
        for d in 0..kc {
            let mut full = idx.clone();
            full.push(w.core_index(d));
            values.push((full, w.core_section(&m.matrix().column(d))));
        }
    }
    let mut symbols: Vec<(Vec<usize>, PolyVector)> = Vec::new();
    for idx in increasing_tuples(r, k - 1) {
        symbols.push((idx.clone(), w.derivation_field(&side.get(&idx))));
    }
    if let Some(hom) = &dec.hom {
        for idx in increasing_tuples(r, k - 2) {
            let m = hom.get(&idx);
            for d in 0..kc {
                let mut full = idx.clone();
                full.push(w.core_index(d));
                symbols.push((full, w.vertical_lift(&m.column(d))));
            }
        }
    }
    DefCochain::new(total.clone(), k, values, symbols)
}

/// The decomposition of `d c̃` computed from that of `c̃`.
pub fn decomposition_differential(w: &SplitVB, dec: &LinearDecomposition) -> Result<LinearDecomposition> {
    let fat = w.fat()?;
    check_shapes(w, &fat, dec)?;
    let fa = fat.algebroid();
    let size = fa.rank();
    let bc = w.base_chart();
    let (n, kc) = (w.side_rank(), w.core_rank());
    let k = dec.degree;
    let dfat = dec.fat.differential()?;
    if k == 0 {
        let s = dec.fat.as_section().expect("degree 0");
        let mut side = AltTable::new(0, BundleDerivation::zero(bc, n));
        side.insert(&[], w.side_derivation(&s)?);
        let mut core = AltTable::new(0, BundleDerivation::zero(bc, kc));
        core.insert(&[], w.core_derivation(&s)?);
        return LinearDecomposition::new(dfat, Some(side), Some(core), None);
    }
    let frame = fat_frame(&fat);
    let side = dec.side.as_ref().expect("degree >= 1");
    let core = dec.core.as_ref().expect("degree >= 1");
    let psi_s: Vec<BundleDerivation> = frame.iter().map(|e| w.side_derivation(e)).collect::<Result<_>>()?;
    let psi_c: Vec<BundleDerivation> = frame.iter().map(|e| w.core_derivation(e)).collect::<Result<_>>()?;

    // Σ (-1)^{i+1} [ψ_{a_i}, t(..â_i..)] + Σ_{i<j} (-1)^{i+j} t([a_i, a_j], ..) - (-1)^k ψ_{c_Â(a)}
    let prime = |t: &AltTable<BundleDerivation>,
                 psi: &[BundleDerivation],
                 psi_of: &dyn Fn(&Section) -> Result<BundleDerivation>|
     -> Result<AltTable<BundleDerivation>> {
        let mut out = AltTable::new(k, t.zero_value().clone());
        for idx in increasing_tuples(size, k) {
            let args = pick(&frame, &idx);
            let mut acc = t.zero_value().clone();
            for i in 0..k {
                let term = psi[idx[i]].commutator(&t.eval(&omit(&args, &[i])));
                acc = if sign(i) > 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            for i in 0..k {
                for j in i + 1..k {
                    let mut rest = vec![fa.bracket(&args[i], &args[j])];
                    rest.extend(omit(&args, &[i, j]));
                    let term = t.eval(&rest);
                    acc = if sign(i + j) > 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
            }
            let last = psi_of(&dec.fat.eval(&args)?)?;
            acc = if sign(k) > 0 { acc.sub(&last) } else { acc.add(&last) };
            out.insert(&idx, acc);
        }
        Ok(out)
    };
    let side_prime = prime(side, &psi_s, &|s| w.side_derivation(s))?;
    let core_prime = prime(core, &psi_c, &|s| w.core_derivation(s))?;

    let alpha = w.core_anchor()?;
    let zero_hom = PolyMatrix::zero(bc, n, kc);
    // ψ^s ∘ D - D ∘ ψ^c and c_E ∘ α - α ∘ c_C as tensors
    let between = |s: &BundleDerivation, m: &PolyMatrix, c: &BundleDerivation| {
        m.derive(s.symbol()).add(&s.matrix().mul(m)).sub(&m.mul(c.matrix()))
    };
    let mut hom_prime = AltTable::new(k - 1, zero_hom.clone());
    for idx in increasing_tuples(size, k - 1) {
        let args = pick(&frame, &idx);
        let mut acc = zero_hom.clone();
        if let Some(hom) = &dec.hom {
            for i in 0..k - 1 {
                let d = hom.eval(&omit(&args, &[i]));
                let term = between(&psi_s[idx[i]], &d, &psi_c[idx[i]]);
                acc = if sign(i) > 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            for i in 0..k - 1 {
                for j in i + 1..k - 1 {
                    let mut rest = vec![fa.bracket(&args[i], &args[j])];
                    rest.extend(omit(&args, &[i, j]));
                    let term = hom.eval(&rest);
                    acc = if sign(i + j) > 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
            }
        }
        let last = between(&side.eval(&args), &alpha, &core.eval(&args));
        acc = if sign(k) > 0 { acc.add(&last) } else { acc.sub(&last) };
        hom_prime.insert(&idx, acc);
    }
    LinearDecomposition::new(dfat, Some(side_prime), Some(core_prime), Some(hom_prime))
}
