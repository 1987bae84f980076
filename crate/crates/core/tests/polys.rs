mod common;

use std::collections::BTreeMap;

use matchlattice_core::matching::{indicator_closed_form, ubpm_closed_form, ubpm_dual_closed_form};
use matchlattice_core::{BipartiteGraph, MatchingPolys, SparseMultilinearPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;
use rand::Rng;

fn dense(p: &SparseMultilinearPoly) -> Vec<i64> {
    let mut out = vec![0i64; 1 << p.n_vars()];
    for (&m, c) in p.terms() {
        out[m as usize] = c.to_i64().unwrap();
    }
    out
}

fn from_table(table: &[i64], n_vars: usize) -> SparseMultilinearPoly {
    SparseMultilinearPoly::interpolate(|x| table[x as usize] != 0, n_vars).unwrap()
}

#[test]
fn ubpm_closed_form_matches_brute_interpolation() {
    for n in [2, 3] {
        let table = common::ubpm_table(n);
        let brute = common::interpolate(&table);
        assert_eq!(dense(&ubpm_closed_form(n).unwrap()), brute, "n={n}");
        assert_eq!(dense(&from_table(&table, n * n)), brute, "n={n}");
    }
}

#[test]
#[ignore = "long: n = 4 oracle interpolation"]
fn ubpm_closed_form_n4() {
    let table = common::ubpm_table(4);
    assert_eq!(ubpm_closed_form(4).unwrap(), from_table(&table, 16));
    let dual = common::dual_table(&table);
    assert_eq!(ubpm_dual_closed_form(4).unwrap(), from_table(&dual, 16));
}

#[test]
fn ubpm_dual_closed_form_matches_brute_interpolation() {
    for n in [2, 3] {
        let dual = common::dual_table(&common::ubpm_table(n));
        let brute = common::interpolate(&dual);
        let closed = ubpm_dual_closed_form(n).unwrap();
        assert_eq!(dense(&closed), brute, "n={n}");
        assert_eq!(closed.coefficient(0), BigInt::from(1));
        assert_eq!(closed, ubpm_closed_form(n).unwrap().dualize());
    }
}

#[test]
fn ubpm_dual_n2_coefficients() {
    let closed = ubpm_dual_closed_form(2).unwrap();
    let pms = common::pm_masks(2);
    for g in 0u64..16 {
        let expect = match g.count_ones() {
            0 => 1,
            1 => -1,
            2 if pms.contains(&g) => 1,
            2 => 2,
            3 => -2,
            _ => 2,
        };
        assert_eq!(closed.coefficient(g), BigInt::from(expect), "G={g:#x}");
    }
}

fn brute_closure(pms: &[u64], g: u64) -> u64 {
    pms.iter().filter(|&&m| m & !g == 0).fold(0, |a, &m| a | m)
}

fn check_indicator(n: usize, set: &[u64]) {
    let pms = common::pm_masks(n);
    let table: Vec<i64> = (0..1u64 << (n * n))
        .map(|g| set.contains(&brute_closure(&pms, g)) as i64)
        .collect();
    let graphs: Vec<BipartiteGraph> = set.iter().map(|&m| BipartiteGraph::new(n, m).unwrap()).collect();
    let closed = indicator_closed_form(n, &graphs).unwrap();
    assert_eq!(dense(&closed), common::interpolate(&table), "n={n} S={set:x?}");
}

#[test]
fn indicator_closed_form_matches_brute_interpolation() {
    let mut rng = common::rng();
    for n in [2, 3] {
        let mc = common::mc_set(n);
        check_indicator(n, &common::pm_masks(n));
        check_indicator(n, &mc);
        for _ in 0..20 {
            let set: Vec<u64> = mc.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            check_indicator(n, &set);
        }
    }
}

#[test]
fn indicator_of_all_mc_is_bpm() {
    for n in [2, 3] {
        let pms = common::pm_masks(n);
        let table: Vec<i64> = (0..1u64 << (n * n)).map(|g| (common::pm_count(&pms, g) > 0) as i64).collect();
        assert_eq!(dense(&MatchingPolys::new(n).unwrap().bpm()), common::interpolate(&table));
    }
}

#[test]
fn norms_and_sparsity() {
    let expect = [(2, 4, 3, 25, 16), (3, 132, 49, 625, 293)];
    for (n, l1, sp, l1d, spd) in expect {
        let p = ubpm_closed_form(n).unwrap();
        let d = ubpm_dual_closed_form(n).unwrap();
        assert_eq!((p.l1_norm(), p.sparsity()), (BigInt::from(l1), sp), "n={n}");
        assert_eq!((d.l1_norm(), d.sparsity()), (BigInt::from(l1d), spd), "n={n}");
    }
}

#[test]
fn top_coefficient_is_signed_factorial() {
    for n in [2usize, 3, 4] {
        let p = MatchingPolys::new(n).unwrap().ubpm();
        let full = (1u64 << (n * n)) - 1;
        let chi = n * n - 2 * n + 1;
        let fact: i64 = (1..=n as i64).product();
        let sign = if chi % 2 == 0 { 1 } else { -1 };
        assert_eq!(p.coefficient(full), BigInt::from(sign * fact), "n={n}");
        assert_eq!(p.degree(), Some(n * n));
    }
}

#[test]
fn f2_degree_and_support() {
    for (n, deg2) in [(2, 2), (3, 7)] {
        let p = ubpm_closed_form(n).unwrap();
        assert_eq!(p.deg2(), Some(deg2));
        assert!(deg2 < n * n);
        let pms = common::pm_masks(n);
        let odd: Vec<u64> = common::mc_set(n)
            .into_iter()
            .filter(|&g| common::pm_count(&pms, g) % 2 == 1)
            .collect();
        let support: Vec<u64> = p.reduce_mod2().terms().iter().copied().collect();
        assert_eq!(support, odd, "n={n}");
    }
}

fn fourier_numerators(p: &SparseMultilinearPoly) -> BTreeMap<u64, BigRational> {
    p.to_fourier().terms().clone()
}

#[test]
fn fourier_matches_walsh_and_dual_agrees_up_to_sign() {
    for n in [2, 3] {
        let nv = n * n;
        let table = common::ubpm_table(n);
        let dual = common::dual_table(&table);
        let scale = BigInt::from(1u64 << nv);
        let f = fourier_numerators(&ubpm_closed_form(n).unwrap());
        let fd = fourier_numerators(&ubpm_dual_closed_form(n).unwrap());
        let w = common::walsh_numerators(&table);
        let wd = common::walsh_numerators(&dual);
        for t in 0..1usize << nv {
            let get = |m: &BTreeMap<u64, BigRational>| {
                m.get(&(t as u64)).cloned().unwrap_or_default() * BigRational::from_integer(scale.clone())
            };
            assert_eq!(get(&f), BigRational::from_integer(w[t].into()), "T={t:#x}");
            assert_eq!(get(&fd), BigRational::from_integer(wd[t].into()), "T={t:#x}");
            if t != 0 {
                assert_eq!(get(&f).abs(), get(&fd).abs(), "T={t:#x}");
            }
        }
    }
}

#[test]
fn l1_submultiplicative_on_seeded_pairs() {
    let mut rng = common::rng();
    for _ in 0..100 {
        let nv = rng.gen_range(1..=6);
        let ta: Vec<i64> = (0..1 << nv).map(|_| rng.gen_range(0..2)).collect();
        let tb: Vec<i64> = (0..1 << nv).map(|_| rng.gen_range(0..2)).collect();
        let (a, b) = (from_table(&ta, nv), from_table(&tb, nv));
        let prod = a.multiply(&b).unwrap();
        assert!(prod.l1_norm() <= a.l1_norm() * b.l1_norm());
        let pointwise: Vec<i64> = ta.iter().zip(&tb).map(|(x, y)| x * y).collect();
        assert_eq!(dense(&prod), common::interpolate(&pointwise));
    }
}

fn table_strategy() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (1usize..=6).prop_flat_map(|nv| (Just(nv), prop::collection::vec(0i64..2, 1 << nv)))
}

proptest! {
    #[test]
    fn interpolation_round_trips((nv, table) in table_strategy()) {
        let p = from_table(&table, nv);
        prop_assert_eq!(dense(&p), common::interpolate(&table));
        let back: Vec<i64> = p.truth_table().unwrap().iter().map(|v| v.to_i64().unwrap()).collect();
        prop_assert_eq!(back, table.clone());
        for x in 0..1u64 << nv {
            prop_assert_eq!(p.evaluate(x), BigInt::from(table[x as usize]));
            prop_assert_eq!(p.to_fourier().evaluate(x), BigRational::from_integer(table[x as usize].into()));
            prop_assert_eq!(p.reduce_mod2().evaluate(x) as i64, table[x as usize]);
        }
    }

    #[test]
    fn dualize_is_an_involution_matching_the_dual_oracle((nv, table) in table_strategy()) {
        let p = from_table(&table, nv);
        let d = p.dualize();
        prop_assert_eq!(dense(&d), common::interpolate(&common::dual_table(&table)));
        prop_assert_eq!(d.dualize(), p.clone());
        prop_assert_eq!(p.complement().complement(), p);
    }

    #[test]
    fn sparse_and_dense_dualize_agree((nv, table) in table_strategy()) {
        let p = from_table(&table, nv);
        let wide = SparseMultilinearPoly::from_terms(nv + 15, p.terms().clone()).unwrap();
        let dw = wide.dualize();
        // The dual of a function ignoring 15 variables ignores them too.
        let narrowed: Vec<(u64, BigInt)> = dw.terms().iter().map(|(&m, c)| (m, c.clone())).collect();
        prop_assert!(narrowed.iter().all(|(m, _)| m >> nv == 0));
        prop_assert_eq!(SparseMultilinearPoly::from_terms(nv, narrowed).unwrap(), p.dualize());
    }
}
