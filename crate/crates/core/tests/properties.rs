use num_bigint::BigInt;
use proptest::prelude::*;

use arbordyn::fields::{FieldDesc, Fq};
use arbordyn::galois::{stoll_rank, SquareClassRing, StollMode};
use arbordyn::insep::insep_degree;
use arbordyn::orbit::{OrbitCache, QuadMap};
use arbordyn::polyalg::{IntPoly, Poly, RationalFn};
use arbordyn::zsig::{exceptional_primes, primitive_divisors};

const PRIMES: [u64; 6] = [3, 5, 7, 11, 13, 17];

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(&PRIMES[..])
}

fn field() -> impl Strategy<Value = FieldDesc> {
    (prime(), any::<bool>()).prop_map(|(p, ext)| {
        if ext && p < 12 {
            FieldDesc::quadratic(p).unwrap()
        } else {
            FieldDesc::prime(p).unwrap()
        }
    })
}

fn elem(f: FieldDesc, a: u64, b: u64) -> Fq {
    let p = f.p();
    if f.degree() == 1 {
        f.from_u64(a % p)
    } else {
        f.from_coords(a % p, b % p).unwrap()
    }
}

fn coeffs(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..=20, 1..=max_deg + 1)
}

/// Nonconstant polynomial over `F_p` from raw coefficients (leading one forced
/// nonzero by appending a 1 when needed).
fn nonconstant(f: FieldDesc, mut c: Vec<i64>) -> Poly {
    if c.len() < 2 {
        c.push(1);
    }
    let g = Poly::from_ints(f, &c);
    if g.is_constant() {
        Poly::from_ints(f, &[c[0], 1])
    } else {
        g
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_round_trip(f in field(), a in 0u64..1000, b in 0u64..1000) {
        let x = elem(f, a, b);
        prop_assume!(!x.is_zero());
        prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
    }

    #[test]
    fn squares_follow_euler(f in field(), a in 0u64..1000, b in 0u64..1000) {
        let x = elem(f, a, b);
        let euler = f.pow(x, (f.order() - 1) / 2);
        prop_assert_eq!(f.is_square(x), euler == f.one() || euler.is_zero());
        if let Some(r) = f.sqrt(x) {
            prop_assert_eq!(f.mul(r, r), x);
            prop_assert_eq!(f.sqrt(x), Some(r));
        }
    }

    #[test]
    fn factorization_reproduces_input(p in prime(), c in coeffs(12)) {
        let f = FieldDesc::prime(p).unwrap();
        let g = nonconstant(f, c);
        let fac = g.factor().unwrap();
        let prod = fac.factors.iter().fold(Poly::constant(f, fac.unit.value()), |acc, (h, e)| acc.mul(&h.pow(*e as u64)));
        prop_assert_eq!(prod, g);
        for (h, _) in &fac.factors {
            prop_assert!(h.is_monic() && h.is_irreducible());
        }
    }

    #[test]
    fn geometric_squarefree_part_leaves_a_square(p in prime(), c in coeffs(10), s in coeffs(3)) {
        let f = FieldDesc::prime(p).unwrap();
        let g = nonconstant(f, c).mul(&nonconstant(f, s).square());
        let d = g.squarefree_part_geometric().unwrap();
        prop_assert!(d.square().divides(&g.mul(&d)));
        let rest = g.div_exact(&d).unwrap();
        let root = rest.monic().sqrt_monic();
        prop_assert!(root.as_ref().is_some_and(|r| r.square() == rest.monic()));
    }

    #[test]
    fn closure_square_detection(p in prime(), c in coeffs(5), unit in 1i64..100, h_idx in 0usize..50) {
        let f = FieldDesc::prime(p).unwrap();
        let g = nonconstant(f, c).monic();
        let u = Poly::from_ints(f, &[unit % p as i64 + if unit % p as i64 == 0 { 1 } else { 0 }]);
        let sq = u.mul(&g.square());
        prop_assert!(sq.is_square_in_closure().unwrap());
        // an irreducible not dividing g breaks squareness
        let irr: Vec<Poly> = arbordyn::polyalg::irreducibles_of_degree(f, 2);
        let h = &irr[h_idx % irr.len()];
        prop_assume!(!h.divides(&g));
        prop_assert!(!sq.mul(h).is_square_in_closure().unwrap());
    }

    #[test]
    fn pth_power_degree_shifts(p in prop::sample::select(vec![3u64, 5, 7]), c in coeffs(4), d in coeffs(3), i in 0u32..=3) {
        let f = FieldDesc::prime(p).unwrap();
        let base = RationalFn::new(nonconstant(f, c), nonconstant(f, d)).unwrap();
        prop_assume!(!base.is_constant());
        let e0 = base.pth_power_degree().unwrap();
        let q = p.pow(i);
        let r = RationalFn::new(base.num().pow(q), base.den().pow(q)).unwrap();
        prop_assert_eq!(r.pth_power_degree().unwrap(), e0 + i);
    }

    #[test]
    fn crt_and_prs_discriminants_agree(c in prop::collection::vec(-30i64..=30, 2..=21)) {
        let g = IntPoly::from_i64s(&c);
        prop_assume!(!g.is_constant());
        prop_assert_eq!(g.discriminant().unwrap(), g.discriminant_prs().unwrap());
    }
}

fn regular_map(f: FieldDesc, g: &[i64], c: &[i64]) -> Option<QuadMap<Poly>> {
    let m = QuadMap::new(Poly::from_ints(f, g), Poly::from_ints(f, c));
    m.require_regular().ok().map(|_| m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unbalanced_heights_double(p in prime(), g in coeffs(3), c in coeffs(3)) {
        let m = regular_map(FieldDesc::prime(p).unwrap(), &g, &c);
        prop_assume!(m.is_some());
        let m = m.unwrap();
        let (hg, hc) = (m.gamma().height(), m.c1().height());
        prop_assume!(hg != hc);
        let cache = OrbitCache::new(m);
        for n in 2..=10u32 {
            prop_assert_eq!(cache.c(n as usize).height(), hg.max(hc) << (n - 1));
        }
    }

    #[test]
    fn balanced_heights(p in prime(), g in coeffs(3), r in coeffs(3)) {
        let f = FieldDesc::prime(p).unwrap();
        let gamma = Poly::from_ints(f, &g);
        let gc = Poly::from_ints(f, &r);
        let m = QuadMap::new(gamma.clone(), gc.sub(&gamma));
        prop_assume!(m.require_regular().is_ok() && gamma.height() == m.c1().height());
        let (h, hgc) = (gamma.height(), gc.height());
        let cache = OrbitCache::new(m);
        for n in 1..=8u32 {
            prop_assert_eq!(cache.crit0(n as usize).height(), h << n);
            if (hgc << (n - 1)) > h {
                prop_assert_eq!(cache.c(n as usize).height(), hgc << (n - 1));
            }
        }
    }

    #[test]
    fn late_orbit_points_are_not_squares(p in prime(), g in coeffs(3), c in coeffs(3)) {
        let m = regular_map(FieldDesc::prime(p).unwrap(), &g, &c);
        prop_assume!(m.is_some());
        let m = m.unwrap();
        let (hgc, hc) = (m.gamma_plus_c1().height(), m.c1().height());
        let cache = OrbitCache::new(m);
        for n in 2..=8u32 {
            if (hgc << (n - 2)) > hc {
                prop_assert!(!cache.c(n as usize).is_square_in_closure().unwrap());
            }
        }
    }

    #[test]
    fn reduction_commutes_with_iteration(p in prime(), g in prop::collection::vec(-5i64..=5, 1..=2), c in prop::collection::vec(-5i64..=5, 1..=2)) {
        let f = FieldDesc::prime(p).unwrap();
        let z = QuadMap::new(IntPoly::from_i64s(&g), IntPoly::from_i64s(&c));
        let zc = OrbitCache::new(z.clone());
        let pc = OrbitCache::new(z.reduce(f));
        for n in 1..=10 {
            prop_assert_eq!(zc.c(n).reduce(f), pc.c(n).as_ref().clone());
        }
    }

    #[test]
    fn forced_inseparability(p in prop::sample::select(vec![3u64, 5]), a in coeffs(2), b in coeffs(2), i in 0u32..=2) {
        let f = FieldDesc::prime(p).unwrap();
        let q = p.pow(i);
        let (a, b) = (nonconstant(f, a).pow(q), Poly::from_ints(f, &b).pow(q));
        prop_assume!(!b.is_zero());
        // gamma + c1 = a and c1 = b are both p^i-th powers
        let m = QuadMap::new(a.sub(&b), b);
        prop_assume!(m.require_regular().is_ok());
        let r = insep_degree(&m).unwrap();
        prop_assert!(r.e >= i, "{}: e = {} < {}", m, r.e, i);
        if r.sqrt_c1.is_some() {
            prop_assert!(r.root_choice_checked);
        }
    }

    #[test]
    fn separable_outside_exceptional_primes(g in prop::collection::vec(-6i64..=6, 1..=3), c in prop::collection::vec(-6i64..=6, 1..=3)) {
        let z = QuadMap::new(IntPoly::from_i64s(&g), IntPoly::from_i64s(&c));
        prop_assume!(z.require_regular().is_ok());
        let ex = exceptional_primes(&z, 20_000).unwrap();
        prop_assume!(ex.complete);
        let listed: Vec<u64> = ex.s.iter().chain(&ex.t).filter_map(|t| t.prime.parse().ok()).collect();
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            if listed.contains(&p) {
                continue;
            }
            let m = z.reduce(FieldDesc::prime(p).unwrap());
            if m.require_regular().is_ok() {
                prop_assert_eq!(insep_degree(&m).unwrap().e, 0, "p = {}", p);
            }
        }
    }

    #[test]
    fn primitive_divisors_are_new(p in prime(), g in coeffs(2), c in coeffs(2)) {
        let m = regular_map(FieldDesc::prime(p).unwrap(), &g, &c);
        prop_assume!(m.is_some());
        let cache = OrbitCache::new(m.unwrap());
        for n in 1..=6 {
            let cn = cache.c(n);
            if cn.is_zero() {
                continue;
            }
            let divs = primitive_divisors(&cache, n).unwrap();
            let prod = divs.iter().fold(Poly::one(cn.desc()), |acc, (h, e)| acc.mul(&h.pow(*e as u64)));
            prop_assert!(prod.divides(&cn));
            for (h, _) in &divs {
                for i in 1..n {
                    let ci = cache.c(i);
                    if !ci.is_zero() {
                        prop_assert!(h.gcd(&ci).unwrap().is_one());
                    }
                }
            }
        }
    }

    #[test]
    fn class_ignores_constants_and_squares(p in prime(), c in coeffs(8), s in coeffs(3), k in 1i64..50) {
        let f = FieldDesc::prime(p).unwrap();
        let g = nonconstant(f, c);
        let kernel = |h: &Poly| h.odd_blocks().unwrap().iter().fold(Poly::one(f), |acc, b| acc.mul(b)).monic();
        let k = Poly::from_ints(f, &[if k % p as i64 == 0 { 1 } else { k }]);
        let twisted = g.mul(&k).mul(&nonconstant(f, s).square());
        prop_assert_eq!(kernel(&g), kernel(&twisted));
    }

    #[test]
    fn parity_rows_detect_square_products(p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]), g in coeffs(1), c in coeffs(1), mask in 1u32..64) {
        let m = regular_map(FieldDesc::prime(p).unwrap(), &g, &c);
        prop_assume!(m.is_some());
        let m = m.unwrap();
        let cache = OrbitCache::new(m.clone());
        prop_assume!((1..=6).all(|i| !cache.c(i).is_zero()));
        let r = stoll_rank(&m, 6, StollMode::Geometric).unwrap();
        let f = m.desc();
        let mut sum: Vec<bool> = vec![false; r.base.len()];
        let mut prod = Poly::one(f);
        for i in 0..6 {
            if mask >> i & 1 == 1 {
                for (s, b) in sum.iter_mut().zip(r.parity_matrix[i].chars()) {
                    *s ^= b == '1';
                }
                prod = prod.mul(&cache.c(i + 1));
            }
        }
        prop_assert_eq!(sum.iter().all(|b| !b), prod.is_square_in_closure().unwrap());
    }

    #[test]
    fn maps_round_trip_through_text(p in prime(), g in coeffs(4), c in coeffs(4)) {
        let f = FieldDesc::prime(p).unwrap();
        let m = QuadMap::new(Poly::from_ints(f, &g), Poly::from_ints(f, &c));
        prop_assert_eq!(QuadMap::<Poly>::parse(f, &m.format()).unwrap(), m);
        let z = QuadMap::new(IntPoly::from_i64s(&g), IntPoly::from_i64s(&c).scale(&BigInt::from(7)));
        prop_assert_eq!(QuadMap::<IntPoly>::parse(&z.format()).unwrap(), z);
    }
}
