mod common;

use std::collections::HashMap;

use matchlattice_core::{BipartiteGraph, MCLattice};
use rand::Rng;

fn graph(n: usize, m: u64) -> BipartiteGraph {
    BipartiteGraph::new(n, m).unwrap()
}

#[test]
fn element_counts() {
    for (n, expect) in [(1, 1), (2, 3), (3, 49)] {
        let brute = common::mc_set(n);
        assert_eq!(brute.len(), expect);
        let lat = MCLattice::new(n).unwrap();
        assert_eq!(lat.len(), expect + 1);
        let mine: Vec<u64> = lat.mc_elements().map(|g| g.mask()).collect();
        assert_eq!(mine, brute);
    }
}

#[test]
fn mc4_matches_brute_force() {
    let brute = common::mc_set(4);
    assert_eq!(brute.len(), 7443);
    let lat = MCLattice::new(4).unwrap();
    assert_eq!(&lat.masks()[1..], &brute[..]);
}

/// μ from the defining recursion over the brute-force poset.
fn brute_mobius(els: &[u64], h: u64, g: u64, memo: &mut HashMap<(u64, u64), i64>) -> i64 {
    if h == g {
        return 1;
    }
    if let Some(&v) = memo.get(&(h, g)) {
        return v;
    }
    let v = -els
        .iter()
        .filter(|&&z| z & !g == 0 && z & h == h && z != g)
        .map(|&z| brute_mobius(els, h, z, memo))
        .sum::<i64>();
    memo.insert((h, g), v);
    v
}

#[test]
fn mobius_exhaustive_small() {
    for n in [2, 3] {
        let lat = MCLattice::new(n).unwrap();
        let mut els = vec![0u64];
        els.extend(common::mc_set(n));
        let mut memo = HashMap::new();
        for &h in &els {
            for &g in els.iter().filter(|&&g| g & h == h) {
                let (hg, gg) = (graph(n, h), graph(n, g));
                let rec = lat.mobius_recursive(&hg, &gg).unwrap();
                assert_eq!(rec, brute_mobius(&els, h, g, &mut memo), "{hg} {gg}");
                assert_eq!(rec, lat.mobius_closed_form(&hg, &gg).unwrap(), "{hg} {gg}");
            }
        }
    }
}

#[test]
fn mobius_sampled_n4() {
    let lat = MCLattice::new(4).unwrap();
    let els = lat.masks();
    let mut rng = common::rng();
    let mut checked = 0;
    while checked < 1000 {
        let g = els[rng.gen_range(0..els.len())];
        // A random element below g: close a random sub-mask.
        let sub = g & rng.gen::<u64>();
        let h = graph(4, sub).mc_closure();
        let gg = graph(4, g);
        if !lat.contains(&h) || h.mask() & !g != 0 {
            continue;
        }
        assert_eq!(
            lat.mobius_recursive(&h, &gg).unwrap(),
            lat.mobius_closed_form(&h, &gg).unwrap(),
            "{h} {gg}"
        );
        checked += 1;
    }
}

#[test]
fn rank_is_chi_plus_one_and_chain_length() {
    for n in [2, 3] {
        let lat = MCLattice::new(n).unwrap();
        let chains = lat.longest_chain_lengths();
        for (g, &len) in lat.elements().zip(&chains) {
            let expect = if g.is_empty() { 0 } else { common::cyclomatic(n, g.mask()) + 1 };
            assert_eq!(lat.rank_of(&g).unwrap(), expect, "{g}");
            assert_eq!(len, expect, "{g}");
        }
    }
}

#[test]
fn join_meet_laws() {
    for n in [2, 3] {
        let lat = MCLattice::new(n).unwrap();
        let els: Vec<BipartiteGraph> = lat.elements().collect();
        for a in &els {
            assert_eq!(lat.join(a, a).unwrap(), *a);
            assert_eq!(lat.meet(a, a).unwrap(), *a);
            for b in &els {
                let j = lat.join(a, b).unwrap();
                let m = lat.meet(a, b).unwrap();
                assert!(lat.contains(&j) && lat.contains(&m));
                assert_eq!(j, lat.join(b, a).unwrap());
                assert_eq!(m, lat.meet(b, a).unwrap());
                assert_eq!(lat.join(a, &lat.meet(a, b).unwrap()).unwrap(), *a);
                assert_eq!(lat.meet(a, &lat.join(a, b).unwrap()).unwrap(), *a);
                // Least upper / greatest lower bound by brute force.
                let ub: Vec<&BipartiteGraph> =
                    els.iter().filter(|z| a.is_subgraph_of(z) && b.is_subgraph_of(z)).collect();
                assert!(ub.iter().all(|z| j.is_subgraph_of(z)));
                let lb: Vec<&BipartiteGraph> =
                    els.iter().filter(|z| z.is_subgraph_of(a) && z.is_subgraph_of(b)).collect();
                assert!(lb.iter().all(|z| z.is_subgraph_of(&m)));
                assert!(lb.contains(&&m));
            }
        }
        for a in els.iter().step_by(3) {
            for b in els.iter().step_by(2) {
                for c in els.iter().step_by(5) {
                    let l = lat.join(&lat.join(a, b).unwrap(), c).unwrap();
                    let r = lat.join(a, &lat.join(b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                    let l = lat.meet(&lat.meet(a, b).unwrap(), c).unwrap();
                    let r = lat.meet(a, &lat.meet(b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }
}

#[test]
fn eulerian_intervals() {
    let lat = MCLattice::new(3).unwrap();
    let els: Vec<BipartiteGraph> = lat.elements().collect();
    for h in &els {
        for g in els.iter().filter(|g| h.is_subgraph_of(g) && *g != h) {
            let iv = lat.interval(h, g).unwrap();
            let even = iv.iter().filter(|z| lat.rank_of(z).unwrap() % 2 == 0).count();
            assert_eq!(2 * even, iv.len(), "{h} {g}");
        }
    }
}

#[test]
fn lower_covers_drop_rank_by_one() {
    let lat = MCLattice::new(3).unwrap();
    for g in lat.mc_elements() {
        let r = lat.rank_of(&g).unwrap();
        for c in lat.lower_covers(&g).unwrap() {
            assert_eq!(lat.rank_of(&c).unwrap() + 1, r, "{c} < {g}");
        }
    }
}

#[test]
fn errors() {
    let lat = MCLattice::new(2).unwrap();
    let not_mc = graph(2, 0b0111);
    assert!(lat.index_of(&not_mc).is_err());
    let a = graph(2, 0b1001);
    let b = graph(2, 0b0110);
    assert!(lat.mobius_recursive(&a, &b).is_err());
    assert!(MCLattice::new(5).is_err());
}
