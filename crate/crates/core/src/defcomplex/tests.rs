use super::*;
use crate::fixtures;
use crate::random;

fn identity(parent: &Arc<FrameAlgebroid>) -> DefCochain {
    let r = parent.rank();
    let values = (0..r).map(|i| (vec![i], parent.frame_section(i)));
    DefCochain::new(parent.clone(), 1, values, std::iter::empty()).unwrap()
}

#[test]
fn identity_cochain_evaluates_to_its_argument() {
    let tm = fixtures::tm();
    let x = Polynomial::var(tm.chart(), "x").unwrap();
    let a = tm.frame_section(0).mul_poly(&x);
    assert_eq!(identity(&tm).eval(std::slice::from_ref(&a)).unwrap(), a);
}

#[test]
fn repeated_arguments_vanish() {
    let mut rng = random::rng(7);
    let a = fixtures::aff1_line();
    let c = random::cochain(&mut rng, &a, 2, 2);
    let s = random::section(&mut rng, &a, 2);
    assert!(c.eval(&[s.clone(), s]).unwrap().is_zero());
}

#[test]
fn constant_linearity_on_aff1() {
    let a = fixtures::aff1();
    let d = DefCochain::new(a.clone(), 1, [(vec![0], a.frame_section(1))], std::iter::empty()).unwrap();
    let arg = a.frame_section(0).add(&a.frame_section(1));
    assert_eq!(d.eval(&[arg]).unwrap(), a.frame_section(1));
}

#[test]
fn symbol_is_tensorial() {
    let tm = fixtures::tm();
    let c = tm.chart();
    let x = Polynomial::var(c, "x").unwrap();
    let sym = PolyVector::new(c, vec![x.clone()]).unwrap();
    let k2 = DefCochain::new(tm.clone(), 2, std::iter::empty(), [(vec![0], sym)]).unwrap();
    let got = k2.symbol_eval(&[tm.frame_section(0).mul_poly(&x)]).unwrap();
    assert_eq!(got, PolyVector::new(c, vec![x.pow(2)]).unwrap());
    assert!(identity(&tm).symbol_eval(&[]).unwrap().is_zero());
}

#[test]
fn differential_of_a_section_is_its_adjoint() {
    let a = fixtures::aff1();
    let d = DefCochain::from_section(a.clone(), a.frame_section(0))
        .unwrap()
        .differential()
        .unwrap();
    assert_eq!(d.value_on_frame(&[1]), a.frame_section(1));
    assert!(d.value_on_frame(&[0]).is_zero());
}

#[test]
fn differential_of_identity_on_aff1() {
    let a = fixtures::aff1();
    let (e1, e2) = (a.frame_section(0), a.frame_section(1));
    // [e1, δe2] - [e2, δe1] - δ[e1, e2] with δ = id
    let oracle = a.bracket(&e1, &e2).sub(&a.bracket(&e2, &e1)).sub(&a.bracket(&e1, &e2));
    let d = identity(&a).differential().unwrap();
    assert_eq!(d.value_on_frame(&[0, 1]), oracle);
    assert_eq!(oracle, e2);
    assert!(!identity(&a).is_algebroid_derivation().passed());
}

#[test]
fn coboundaries_are_derivations() {
    let mut rng = random::rng(11);
    for (name, a) in fixtures::algebroids() {
        let s = random::section(&mut rng, &a, 2);
        let d = DefCochain::from_section(a.clone(), s).unwrap().differential().unwrap();
        assert!(d.is_algebroid_derivation().passed(), "{name}");
        assert!(d.differential().unwrap().is_zero(), "{name}");
    }
}

#[test]
fn abelian_symbol_free_cochains_are_derivations() {
    let mut rng = random::rng(3);
    let a = fixtures::abelian(2);
    let mut d = random::cochain(&mut rng, &a, 1, 0);
    d.symbols.clear();
    assert!(d.is_algebroid_derivation().passed());
}

#[test]
fn d_squared_vanishes_on_random_cochains() {
    let mut rng = random::rng(2024);
    for (name, a) in fixtures::algebroids() {
        for k in 0..=2 {
            let c = random::cochain(&mut rng, &a, k, 2);
            let dd = c.differential().unwrap().differential().unwrap();
            assert!(dd.is_zero(), "{name} degree {k}:\n{}", dd.table());
        }
    }
}

#[test]
fn differential_satisfies_leibniz_with_its_symbol() {
    let mut rng = random::rng(99);
    for (name, a) in fixtures::algebroids() {
        if a.dim() == 0 {
            continue;
        }
        for k in 0..=2 {
            let c = random::cochain(&mut rng, &a, k, 2);
            let d = c.differential().unwrap();
            let args: Vec<Section> = (0..=k).map(|_| random::section(&mut rng, &a, 1)).collect();
            let f = random::polynomial(&mut rng, a.chart(), 2, 3);
            assert!(d.leibniz_defect(&args, &f).unwrap().is_zero(), "{name} degree {k}");
            if k >= 1 {
                let args: Vec<Section> = (0..k).map(|_| random::section(&mut rng, &a, 1)).collect();
                assert!(c.leibniz_defect(&args, &f).unwrap().is_zero(), "{name} degree {k}");
            }
        }
    }
}

#[test]
fn cocycle_iff_derivation() {
    let mut rng = random::rng(5);
    for (name, a) in fixtures::algebroids() {
        for _ in 0..10 {
            let c = random::cochain(&mut rng, &a, 1, 1);
            let by_check = c.is_algebroid_derivation().passed();
            let by_d = c.differential().unwrap().is_zero();
            assert_eq!(by_check, by_d, "{name}");
        }
    }
}

#[test]
fn bracket_with_derivation_matches_commutator_in_degree_one() {
    let mut rng = random::rng(17);
    let a = fixtures::aff1_line();
    let d1 = random::derivation(&mut rng, a.chart(), 2, 1);
    let d2 = random::derivation(&mut rng, a.chart(), 2, 1);
    let c2 = DefCochain::from_derivation(a.clone(), &d2).unwrap();
    let br = c2.bracket_with_derivation(&d1).unwrap();
    let expected = DefCochain::from_derivation(a.clone(), &d1.commutator(&d2)).unwrap();
    assert_eq!(br, expected);
    let zero = BundleDerivation::zero(a.chart(), 2);
    let c = random::cochain(&mut rng, &a, 2, 2);
    assert!(c.bracket_with_derivation(&zero).unwrap().is_zero());
}

#[test]
fn degree_cap_is_enforced() {
    let a = fixtures::abelian(1);
    let c = DefCochain::zero(a, 4);
    assert!(matches!(c.differential(), Err(Error::DegreeCap { degree: 5, cap: 4 })));
}

#[test]
fn construction_normalizes_order() {
    let a = fixtures::aff1();
    let c = DefCochain::new(a.clone(), 2, [(vec![1, 0], a.frame_section(0))], std::iter::empty()).unwrap();
    assert_eq!(c.value_on_frame(&[0, 1]), a.frame_section(0).neg());
}
