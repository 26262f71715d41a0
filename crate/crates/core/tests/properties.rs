use carlitz_core::basealg::{monic_count, monic_poly};
use carlitz_core::carlitz::{CarlitzTables, LatticeExp};
use carlitz_core::period::period_w;
use carlitz_core::ramanujan::{telescoping_sides, RamanujanContext, Scale};
use carlitz_core::{Field, FieldCtx, Laurent, Poly, RatFunc, Valuation};
use proptest::prelude::*;
use std::sync::OnceLock;

fn f3() -> Field {
    FieldCtx::prime(3).unwrap()
}

fn f9() -> Field {
    FieldCtx::new(9, Some(&[1, 0, 1])).unwrap()
}

fn fields() -> Vec<Field> {
    vec![f3(), FieldCtx::prime(5).unwrap(), f9(), FieldCtx::new(27, Some(&[1, 2, 0, 1])).unwrap()]
}

fn poly_from(field: &Field, raw: &[u32]) -> Poly {
    let q = field.q();
    Poly::new(field, raw.iter().map(|&c| field.elem(c % q)).collect())
}

fn laurent_from(field: &Field, hi: i64, raw: &[u32], floor: i64) -> Laurent {
    let q = field.q();
    Laurent::from_coeffs(field, hi, raw.iter().map(|&c| field.elem(c % q)).collect(), Some(floor))
}

fn ell_q3() -> &'static LatticeExp {
    static ELL: OnceLock<LatticeExp> = OnceLock::new();
    ELL.get_or_init(|| {
        let f = f3();
        let w = period_w(&f, -60).unwrap();
        LatticeExp::new(&w, &CarlitzTables::build(&f, 6).unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(which in 0usize..4, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fields()[which];
        let q = f.q();
        let (a, b, c) = (f.elem(a % q), f.elem(b % q), f.elem(c % q));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.pow(a, q as u64), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }

    #[test]
    fn poly_division(which in 0usize..3, a in prop::collection::vec(any::<u32>(), 0..8),
                     b in prop::collection::vec(any::<u32>(), 1..5)) {
        let f = &fields()[which];
        let a = poly_from(f, &a);
        let b = poly_from(f, &b);
        prop_assume!(!b.is_zero());
        let (quot, rem) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&quot * &b) + &rem, a.clone());
        prop_assert!(rem.is_zero() || rem.degree() < b.degree());
        let g = a.gcd(&b);
        prop_assert!(g.is_monic());
        prop_assert!(a.div_rem(&g).unwrap().1.is_zero());
        prop_assert_eq!(a.pow_q(), a.pow(f.q() as u64));
    }

    #[test]
    fn ratfunc_canonical(a in prop::collection::vec(0u32..3, 1..5), b in prop::collection::vec(0u32..3, 1..5),
                         c in prop::collection::vec(0u32..3, 1..4)) {
        let f = f3();
        let (a, b, c) = (poly_from(&f, &a), poly_from(&f, &b), poly_from(&f, &c));
        prop_assume!(!b.is_zero() && !c.is_zero());
        let r = RatFunc::new(a.clone(), b.clone()).unwrap();
        // Scaling the fraction by c/c leaves the canonical form unchanged.
        prop_assert_eq!(RatFunc::new(&a * &c, &b * &c).unwrap(), r.clone());
        prop_assert!(r.den().is_monic());
        prop_assert!(r.is_zero() || r.num().gcd(r.den()).is_one());
        let back = r.mul(&RatFunc::from_poly(b.clone()));
        prop_assert_eq!(back, RatFunc::from_poly(a));
    }

    #[test]
    fn laurent_valuation_rules(hx in -10i64..10, x in prop::collection::vec(0u32..3, 6..20),
                               hy in -10i64..10, y in prop::collection::vec(0u32..3, 6..20)) {
        let f = f3();
        let mut x = x;
        let mut y = y;
        x[0] = 1 + x[0] % 2;
        y[0] = 1 + y[0] % 2;
        let a = laurent_from(&f, hx, &x, hx - x.len() as i64 + 1);
        let b = laurent_from(&f, hy, &y, hy - y.len() as i64 + 1);
        let va = a.valuation().finite().unwrap();
        let vb = b.valuation().finite().unwrap();
        prop_assert_eq!((&a * &b).valuation(), Valuation::Exact(va + vb));
        let s = &a + &b;
        prop_assert!(s.valuation().bound() >= va.min(vb));
        if va != vb {
            prop_assert_eq!(s.valuation(), Valuation::Exact(va.min(vb)));
        }
        let inv = a.inv().unwrap();
        prop_assert!((&(&a * &inv) - &Laurent::one(&f)).is_zero_to_precision());
        let t = a.truncate(hx - 3);
        prop_assert_eq!(t.truncate(hx - 3), t.clone());
        prop_assert!(t.floor().unwrap() >= a.floor().unwrap());
    }

    #[test]
    fn ratfunc_embedding_round_trip(num in prop::collection::vec(0u32..3, 1..6), den in prop::collection::vec(0u32..3, 1..6)) {
        let f = f3();
        let (a, b) = (poly_from(&f, &num), poly_from(&f, &den));
        prop_assume!(!b.is_zero());
        let r = RatFunc::new(a.clone(), b.clone()).unwrap();
        let e = Laurent::embed_ratfunc(&r, -40).unwrap();
        prop_assert!(e.exponents_have_parity(false));
        let lhs = &e * &Laurent::embed_poly(&b);
        prop_assert!(lhs.agrees_with(&Laurent::embed_poly(&a)));
    }

    #[test]
    fn ell_is_fq_linear(a in 0u32..3, b in 0u32..3, i in 0u64..9, k in 0u64..27) {
        let f = f3();
        let ell = ell_q3();
        let z1 = Laurent::embed_poly(&monic_poly(&f, 2, i)).shift(1);
        let z2 = Laurent::embed_poly(&monic_poly(&f, 3, k)).shift(-1);
        let (a, b) = (f.elem(a), f.elem(b));
        let combo = &z1.scale(a) + &z2.scale(b);
        let floor = -20;
        let lhs = ell.eval(&combo, floor).unwrap();
        let rhs = &ell.eval(&z1, floor).unwrap().scale(a) + &ell.eval(&z2, floor).unwrap().scale(b);
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn ell_vanishes_on_r(i in 0u64..27) {
        let f = f3();
        let a = Laurent::embed_poly(&monic_poly(&f, 3, i));
        let l = ell_q3().eval(&a, -40).unwrap();
        prop_assert!(l.is_zero_to_precision());
    }

    #[test]
    fn telescoping_random(j in 1u32..6, xn in prop::collection::vec(0u32..5, 1..4), xd in prop::collection::vec(0u32..5, 1..4),
                          yn in prop::collection::vec(0u32..5, 1..4)) {
        let f = FieldCtx::prime(5).unwrap();
        let (xn, xd, yn) = (poly_from(&f, &xn), poly_from(&f, &xd), poly_from(&f, &yn));
        prop_assume!(!xn.is_zero() && !xd.is_zero() && !yn.is_zero());
        let x = RatFunc::new(xn, xd).unwrap();
        let y = RatFunc::from_poly(yn);
        prop_assume!(x != y);
        let (l, r) = telescoping_sides(&x, &y, j).unwrap();
        prop_assert_eq!(l, r);
    }
}

#[test]
fn summation_order_is_irrelevant() {
    let f = f3();
    let floor = -40;
    let mut forward = Laurent::zero_to_precision(&f, floor);
    let mut backward = Laurent::zero_to_precision(&f, floor);
    let count = monic_count(&f, 3);
    for i in 0..count {
        forward = &forward + &Laurent::embed_poly(&monic_poly(&f, 3, i).pow(2)).inv_to(floor).unwrap();
    }
    for i in (0..count).rev() {
        backward = &backward + &Laurent::embed_poly(&monic_poly(&f, 3, i).pow(2)).inv_to(floor).unwrap();
    }
    assert_eq!(forward, backward);
    let z = carlitz_core::zeta::power_sum_block(&f, 2, 3, floor).unwrap();
    assert_eq!(z, forward);
}

#[test]
fn swapping_u_and_inverse_u() {
    // Exchanging alpha and beta exchanges the two left summands; the right
    // side is palindromic in k, so it is unchanged.
    let f = f3();
    let j = 2;
    let ctx = RamanujanContext::new(&f, j, -60, None).unwrap();
    let d = ctx.params().d;
    let t_u = ctx.lattice_sum(Scale::U, -60 + d).unwrap().value;
    let t_inv = ctx.lattice_sum(Scale::InvU, -60 - d).unwrap().value;
    let rhs = ctx.rhs_convolution(-60).unwrap();
    let swapped = &t_inv.shift(d) + &t_u.shift(-d);
    assert!(swapped.agrees_with(&rhs));
    let b = ctx.b_values().unwrap();
    let ex = ctx.params().u_exponents();
    for k in 0..ex.len() {
        let mirror = ex.len() - 1 - k;
        assert_eq!(ex[k], -ex[mirror]);
        assert_eq!(b[j as usize + 1 - k].mul(&b[k]), b[j as usize + 1 - mirror].mul(&b[mirror]));
    }
}

#[test]
fn precision_never_rewrites_known_digits() {
    let f = f3();
    let coarse = carlitz_core::ramanujan::verify_ramanujan(&f, 1, -40, None).unwrap();
    let fine = carlitz_core::ramanujan::verify_ramanujan(&f, 1, -80, None).unwrap();
    assert!(fine.lhs.truncate(-40).agrees_with(&coarse.lhs));
    let wide = carlitz_core::ramanujan::verify_ramanujan(&f, 1, -40, Some(4)).unwrap();
    assert!(wide.lhs.agrees_with(&coarse.lhs));
}

#[test]
fn wrong_exponent_is_detected() {
    // A negative control: comparing T-sums against the j+1 right side fails.
    let f = f3();
    let a = RamanujanContext::new(&f, 1, -60, None).unwrap();
    let b = RamanujanContext::new(&f, 2, -60, None).unwrap();
    let d = a.params().d;
    let lhs = &a.lattice_sum(Scale::U, -60 + d).unwrap().value.shift(-d)
        + &a.lattice_sum(Scale::InvU, -60 - d).unwrap().value.shift(d);
    let wrong = b.rhs_convolution(-60).unwrap();
    assert!(!lhs.truncate(-60).agrees_with(&wrong));
}
