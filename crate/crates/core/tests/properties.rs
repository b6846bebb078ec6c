use std::collections::BTreeSet;

use exphull::case2::{check_permutation, iterate_relation, solve_permutation, support, translation_generator};
use exphull::enumerate::to_rational_rows;
use exphull::gamma::variable_names;
use exphull::scalar::rat_int;
use exphull::{
    parse_poly, AVariety, Dimension, GammaConfig, Ideal, LaurentPoly, Poly, QMatrix, Rational, SubspaceSpec, TermOrder,
    ZMatrix,
};
use itertools::Itertools;
use num_integer::Integer;
use proptest::prelude::*;

fn cases() -> ProptestConfig {
    ProptestConfig { cases: 256, ..ProptestConfig::default() }
}

fn exp_a2() -> &'static GammaConfig {
    static CONFIG: std::sync::OnceLock<GammaConfig> = std::sync::OnceLock::new();
    CONFIG.get_or_init(|| {
        let pairs: Vec<String> = ["tau", "b", "s", "a", "c"].iter().map(|s| s.to_string()).collect();
        let names = variable_names(&pairs);
        let locus = ["y_tau - 1", "y_s - x_b", "x_s - x_a^2", "x_c - y_a", "y_c - 2"]
            .iter()
            .map(|g| parse_poly(g, &names).unwrap())
            .collect();
        GammaConfig::new(pairs, 2, locus, Vec::new(), true).unwrap()
    })
}

fn row(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, n)
}

fn zmatrix(r: usize, c: usize) -> impl Strategy<Value = ZMatrix> {
    prop::collection::vec(row(c), r).prop_map(move |rows| ZMatrix::from_rows(c, rows))
}

/// Small varieties in `G_a^2 x G_m^2`.
fn variety() -> impl Strategy<Value = AVariety> {
    let templates = [
        "x1 - x2",
        "x1 + 2*x2 - 1",
        "y1 - 2",
        "y1 - y2",
        "y1^2 - 3*y2",
        "x1 - y1",
        "x2 - 1",
        "y1*y2 - 5",
        "x1^2 - x2",
    ];
    prop::sample::subsequence(templates.to_vec(), 0..=2).prop_map(|gens| {
        let names = exphull::variety::pair_names(2);
        AVariety::new(2, gens.iter().map(|g| parse_poly(g, &names).unwrap()).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(cases())]

    #[test]
    fn delta_is_additive_over_nested_subspaces(r1 in row(5), r2 in row(5), r3 in row(5)) {
        let c = exp_a2();
        let k = c.kernel();
        let lower = k.join(&SubspaceSpec::from_int_rows(5, &[r1]));
        let middle = lower.join(&SubspaceSpec::from_int_rows(5, &[r2]));
        let upper = middle.join(&SubspaceSpec::from_int_rows(5, &[r3]));
        let whole = c.delta(&upper, &lower).unwrap();
        let split = c.delta(&upper, &middle).unwrap() + c.delta(&middle, &lower).unwrap();
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn delta_depends_on_row_space_only(r1 in row(5), r2 in row(5), a in 1i64..=3, b in -2i64..=2) {
        let c = exp_a2();
        let s1 = SubspaceSpec::from_int_rows(5, &[r1.clone(), r2.clone()]);
        let mixed: Vec<i64> = r1.iter().zip(&r2).map(|(x, y)| a * x + b * y).collect();
        let s2 = SubspaceSpec::from_int_rows(5, &[mixed, r2.clone()]);
        prop_assert_eq!(c.delta(&s1, &c.kernel()).unwrap(), c.delta(&s2, &c.kernel()).unwrap());
    }
}

proptest! {
    #![proptest_config(cases())]

    #[test]
    fn matrix_action_is_functorial(v in variety(), m1 in zmatrix(2, 2), m2 in zmatrix(2, 2)) {
        let direct = v.matrix_act(&m1.mul(&m2)).unwrap();
        let staged = v.matrix_act(&m2).unwrap().matrix_act(&m1).unwrap();
        prop_assert!(direct.ideal().same_as(staged.ideal()).unwrap());
    }

    #[test]
    fn image_dimension_depends_on_row_space(v in variety(), m in zmatrix(2, 2), a in 1i64..=3, b in -2i64..=2) {
        let rows = m.rows().to_vec();
        let mixed = vec![rows[0].iter().zip(&rows[1]).map(|(x, y)| a * x + b * y).collect::<Vec<_>>(), rows[1].clone()];
        prop_assert_eq!(v.image_dimension(&rows).unwrap(), v.image_dimension(&mixed).unwrap());
        prop_assert_eq!(v.image_dimension(&rows).unwrap(), v.matrix_act(&m).unwrap().dimension().unwrap());
    }
}

fn brute_monomial_dimension(n: usize, gens: &[Vec<u8>]) -> Dimension {
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return Dimension::Empty;
    }
    // largest coordinate subspace (set T of free variables) on which
    // every generator vanishes
    let best = (0..1u32 << n)
        .filter(|t| gens.iter().all(|g| (0..n).any(|i| g[i] > 0 && t & (1 << i) == 0)))
        .map(|t| t.count_ones() as usize)
        .max()
        .unwrap();
    Dimension::Finite(best)
}

proptest! {
    #![proptest_config(cases())]

    #[test]
    fn monomial_dimension_matches_brute_force(
        n in 1usize..=4,
        gens in prop::collection::vec(prop::collection::vec(0u8..=2, 4), 0..=4),
    ) {
        let gens: Vec<Vec<u8>> = gens.into_iter().map(|g| g[..n].to_vec()).collect();
        let names: Vec<String> = (0..n).map(|i| format!("z{}", i)).collect();
        let polys: Vec<Poly> = gens
            .iter()
            .map(|g| LaurentPoly::monomial(g.iter().map(|&e| e as i64).collect(), rat_int(1)))
            .collect();
        let ideal = Ideal::polynomial(names, polys).unwrap();
        prop_assert_eq!(ideal.dimension().unwrap(), brute_monomial_dimension(n, &gens));
    }
}

fn support_strategy() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=2).prop_flat_map(|k| {
        (Just(k), prop::collection::btree_set(prop::collection::vec(-2i64..=2, k), 1..=5))
            .prop_map(|(k, s)| (k, s.into_iter().collect()))
    })
}

fn small_matrix(k: usize) -> impl Strategy<Value = QMatrix> {
    let structured = prop::sample::select(vec![1i64, -1]).prop_map(move |sgn| {
        QMatrix::from_rows(k, (0..k).map(|i| (0..k).map(|j| rat_int(if i == j { sgn } else { 0 })).collect()).collect())
    });
    let swap = Just(QMatrix::from_rows(
        k,
        (0..k).map(|i| (0..k).map(|j| rat_int(if i + j == k - 1 { 1 } else { 0 })).collect()).collect(),
    ));
    let random = prop::collection::vec(prop::collection::vec(-2i64..=2, k), k)
        .prop_map(move |rows| QMatrix::from_rows(k, to_rational_rows(&rows)));
    prop_oneof![structured, swap, random]
}

fn as_poly(k: usize, s: &[Vec<i64>]) -> Poly {
    // X1 * sum Y^s keeps every support element with coefficient X1
    LaurentPoly::from_terms(
        k + 1,
        s.iter().map(|v| {
            let mut e = vec![1];
            e.extend(v);
            (e, rat_int(1))
        }),
    )
}

proptest! {
    #![proptest_config(cases())]

    #[test]
    fn centroid_solution_is_complete((k, s, n) in support_strategy().prop_flat_map(|(k, s)| (Just(k), Just(s), small_matrix(k)))) {
        let sd = support(&as_poly(k, &s)).unwrap();
        let found = solve_permutation(&sd, &n).unwrap();
        let mut brute: BTreeSet<Vec<Rational>> = BTreeSet::new();
        for perm in s.iter().permutations(s.len()) {
            let u: Vec<Rational> = n
                .mul_vec(&to_rational_rows(&[s[0].clone()])[0])
                .iter()
                .zip(&to_rational_rows(&[perm[0].clone()])[0])
                .map(|(a, b)| a - b)
                .collect();
            let ok = s.iter().zip(&perm).all(|(v, w)| {
                let lhs = n.mul_vec(&to_rational_rows(&[v.clone()])[0]);
                let rhs: Vec<Rational> = to_rational_rows(&[(*w).clone()])[0].iter().zip(&u).map(|(a, b)| a + b).collect();
                lhs == rhs
            });
            if ok {
                brute.insert(u);
            }
        }
        prop_assert!(brute.len() <= 1);
        match found {
            Some(sol) => {
                prop_assert!(check_permutation(&sd, &n, &sol));
                prop_assert_eq!(brute.into_iter().next(), Some(sol.u));
            }
            None => prop_assert!(brute.is_empty()),
        }
    }

    #[test]
    fn iteration_is_a_cocycle(
        (n, u) in (1usize..=2).prop_flat_map(|k| (small_matrix(k), prop::collection::vec(-3i64..=3, k))),
        a in 1u64..=6,
        b in 1u64..=6,
    ) {
        let u: Vec<Rational> = u.into_iter().map(rat_int).collect();
        let (na, ga) = iterate_relation(&n, &u, a).unwrap();
        let (nb, gb) = iterate_relation(&n, &u, b).unwrap();
        let (nab, gab) = iterate_relation(&n, &u, a + b).unwrap();
        prop_assert_eq!(nab, na.mul(&nb));
        let composed: Vec<Rational> = ga.iter().zip(na.mul_vec(&gb)).map(|(x, y)| x + y).collect();
        prop_assert_eq!(gab, composed);
    }

    #[test]
    fn translation_generator_is_a_gcd(
        dir in (-3i64..=3, -3i64..=3),
        ks in prop::collection::vec(-4i64..=4, 1..=4),
    ) {
        let pairs: Vec<(i64, i64)> = ks.iter().map(|k| (k * dir.0, k * dir.1)).collect();
        let t = translation_generator(&pairs).unwrap();
        prop_assert!(t.d.0 >= 0);
        for (p, r) in pairs.iter().zip(&t.exponents) {
            prop_assert_eq!(*p, (r * t.d.0, r * t.d.1));
        }
        for e1 in 1i64..=24 {
            if pairs.iter().all(|p| p.0 % e1 == 0) {
                prop_assert!(t.d.0 % e1 == 0);
            }
            if pairs.iter().all(|p| p.1 % e1 == 0) {
                prop_assert!(t.d.1 % e1 == 0);
            }
        }
        if t.d != (0, 0) {
            let sum = pairs.iter().zip(&t.coefficients).fold((0, 0), |acc, (p, c)| (acc.0 + c * p.0, acc.1 + c * p.1));
            prop_assert_eq!(sum, t.d);
        }
        let g1 = pairs.iter().fold(0i64, |a, p| a.gcd(&p.0));
        prop_assert_eq!(t.d.0, g1);
    }

    #[test]
    fn non_colinear_pairs_are_rejected(p in (-4i64..=4, -4i64..=4), q in (-4i64..=4, -4i64..=4)) {
        let r = translation_generator(&[p, q]);
        prop_assert_eq!(r.is_err(), p.0 * q.1 - p.1 * q.0 != 0);
    }
}

fn sparse_poly(n: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0i64..=2, n), -3i64..=3), 1..=3).prop_map(move |terms| {
        LaurentPoly::from_terms(n, terms.into_iter().map(|(e, c)| (e, rat_int(c))))
    })
}

proptest! {
    #![proptest_config(cases())]

    #[test]
    fn term_orders_agree(f in sparse_poly(3), g in sparse_poly(3), h in sparse_poly(3)) {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let ideal = Ideal::polynomial(names, vec![f.clone(), g.clone()]).unwrap();
        let lex = ideal.dimension_with(&TermOrder::lex()).unwrap();
        let drl = ideal.dimension_with(&TermOrder::degrevlex()).unwrap();
        prop_assert_eq!(lex, drl);
        let via_lex = ideal.groebner(&TermOrder::lex()).unwrap();
        prop_assert!(via_lex.same_as(&ideal).unwrap());
        let probe = &(&f * &h) + &g;
        prop_assert!(ideal.contains(&probe).unwrap());
        prop_assert_eq!(via_lex.contains(&h).unwrap(), ideal.contains(&h).unwrap());
    }

    #[test]
    fn absorbing_members_changes_nothing(f in sparse_poly(3), g in sparse_poly(3), h in sparse_poly(3)) {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let ideal = Ideal::polynomial(names, vec![f.clone()]).unwrap();
        let bigger = ideal.with_generators(vec![&f * &g]).unwrap();
        prop_assert!(bigger.same_as(&ideal).unwrap());
        let sum = ideal.with_generators(vec![h.clone()]).unwrap();
        prop_assert!(sum.contains(&(&h * &g)).unwrap());
        prop_assert!(sum.contains(&f).unwrap());
    }

    #[test]
    fn hermite_and_smith_reconstruct(m in (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| zmatrix(r, c))) {
        let (h, u) = m.hermite();
        prop_assert!(u.is_unimodular());
        prop_assert_eq!(u.mul(&m), h.clone());
        let sm = m.smith();
        prop_assert!(sm.u.is_unimodular() && sm.v.is_unimodular());
        prop_assert_eq!(sm.u.mul(&m).mul(&sm.v), sm.s.clone());
        let d: Vec<i64> = (0..m.nrows().min(m.ncols())).map(|i| *sm.s.get(i, i)).collect();
        for i in 0..sm.s.nrows() {
            for j in 0..sm.s.ncols() {
                if i != j {
                    prop_assert_eq!(*sm.s.get(i, j), 0);
                }
            }
        }
        for w in d.windows(2) {
            prop_assert!(w[0] >= 0 && (w[0] == 0 && w[1] == 0 || w[0] != 0 && w[1] % w[0] == 0));
        }
        prop_assert_eq!(h.integer_rank(), m.to_rational().rank());
    }

    #[test]
    fn scalar_types_agree_on_dimension(f in sparse_poly(3), g in sparse_poly(3)) {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let big = Ideal::polynomial(names.clone(), vec![f.clone(), g.clone()]).unwrap();
        let to_small = |p: &Poly| {
            p.map_coeffs(|c: &Rational| {
                num_rational::Ratio::new(
                    num_traits::ToPrimitive::to_i64(c.numer()).unwrap(),
                    num_traits::ToPrimitive::to_i64(c.denom()).unwrap(),
                )
            })
        };
        let small: Ideal<num_rational::Ratio<i64>> = Ideal::polynomial(names, vec![to_small(&f), to_small(&g)]).unwrap();
        match (big.dimension(), small.dimension()) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            // machine-width coefficients may overflow
            (Ok(_), Err(_)) => {}
            (Err(e), _) => prop_assert!(false, "{}", e),
        }
    }
}
