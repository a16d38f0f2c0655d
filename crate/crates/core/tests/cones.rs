//! Cone duality, gift wrapping and Hilbert bases against independent oracles.

use std::collections::BTreeSet;

use coxring_core::cone::dd::cone_from_inequalities;
use coxring_core::cone::wrap::dual_by_wrapping;
use coxring_core::cone::{
    check_extremal, effective_cone, hilbert_basis, nef_dual, ConeKind, PredicateOutcome,
};
use coxring_core::{ConeDesc, DivisorClass, Extremality, SurfaceConfig, SurfaceModel};
use proptest::prelude::*;

fn finite_configs() -> Vec<SurfaceConfig> {
    let mut out: Vec<SurfaceConfig> = (0..=7).map(SurfaceConfig::general).collect();
    out.push(SurfaceConfig {
        collinear: vec![[1, 2, 3]],
        ..SurfaceConfig::new(4)
    });
    out.push(SurfaceConfig {
        infinitely_near: vec![[1, 2], [2, 3]],
        ..SurfaceConfig::new(3)
    });
    out.push(SurfaceConfig {
        collinear: vec![[1, 2, 3], [1, 4, 5]],
        on_conic: vec![[1, 2, 4, 6, 7, 3]],
        ..SurfaceConfig::new(7)
    });
    out
}

fn e8_pencil() -> SurfaceConfig {
    let e = |i| DivisorClass::exceptional(9, i);
    let mut roots: Vec<DivisorClass> = (1..8)
        .map(|i| e(i).checked_sub(&e(i + 1)).unwrap())
        .collect();
    roots.push(DivisorClass::line_through(9, &[1, 2, 3]));
    SurfaceConfig {
        cubic_pencil: true,
        extra_effective_roots: roots,
        ..SurfaceConfig::new(9)
    }
}

#[test]
fn duality_pairing_and_double_dual() {
    let mut configs = finite_configs();
    configs.push(e8_pencil());
    for config in configs {
        let model = config.model();
        let eff = effective_cone(&config).unwrap();
        let nef = nef_dual(&eff).unwrap();
        for g in &eff.generators {
            for n in &nef.generators {
                assert!(
                    model.intersect(g, n).unwrap() >= 0,
                    "{config:?}: {g:?} . {n:?}"
                );
            }
        }
        let back = nef_dual(&nef).unwrap();
        assert_eq!(back.extremal_rays, eff.extremal_rays, "{config:?}");
    }
}

#[test]
fn ray_counts_of_del_pezzo_cones() {
    // Number of nef rays and nef Hilbert basis elements, r = 3..7.
    let expected = [
        (3, 5, 5),
        (4, 10, 10),
        (5, 26, 26),
        (6, 99, 100),
        (7, 702, 759),
    ];
    for (r, rays, hb) in expected {
        let eff = effective_cone(&SurfaceConfig::general(r)).unwrap();
        let nef = nef_dual(&eff).unwrap();
        assert_eq!(nef.extremal_rays.len(), rays, "r = {r}");
        assert_eq!(hilbert_basis(&nef).unwrap().len(), hb, "r = {r}");
    }
}

fn flip(v: &[i64]) -> Vec<i64> {
    v.iter()
        .enumerate()
        .map(|(i, &x)| if i == 0 { x } else { -x })
        .collect()
}

fn sorted(mut rays: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    rays.sort();
    rays
}

#[test]
fn gift_wrapping_agrees_with_double_description() {
    for r in [6usize, 7] {
        let model = SurfaceModel::new(r);
        let eff = effective_cone(&SurfaceConfig::general(r)).unwrap();
        let nef = nef_dual(&eff).unwrap();
        let seed = flip(&model.anticanonical().coords());
        for (gens, seed) in [
            (&eff.generators, seed),
            (&nef.generators, flip(&eff.generators[0].coords())),
        ] {
            let rows: Vec<Vec<i64>> = gens.iter().map(DivisorClass::coords).collect();
            let wrapped = dual_by_wrapping(&rows, r + 1, &seed).unwrap();
            let dd = cone_from_inequalities(&rows, r + 1).unwrap();
            assert!(dd.lineality.is_empty() && wrapped.lineality.is_empty());
            assert_eq!(sorted(wrapped.rays), sorted(dd.rays), "r = {r}");
        }
    }
}

#[test]
fn lemma_on_k_minus_x() {
    let mut configs = finite_configs();
    configs.push(e8_pencil());
    for config in configs {
        let model = config.model();
        let k = model.canonical();
        let eff = effective_cone(&config).unwrap();
        let nef = nef_dual(&eff).unwrap();
        let hb = hilbert_basis(&nef).unwrap();
        for x in eff.generators.iter().chain(&hb) {
            let diff = k.checked_sub(x).unwrap();
            assert!(
                !eff.contains(&diff).unwrap(),
                "{config:?}: K - {x:?} is effective"
            );
        }
        for n in nef.generators.iter().chain(&hb) {
            assert!(model.square(n).unwrap() >= 0, "{config:?}: {n:?}");
        }
    }
}

#[test]
fn elliptic_fiber_passes_the_fiber_branch() {
    let config = e8_pencil();
    let report = check_extremal(&config).unwrap();
    assert_eq!(report.outcome, Extremality::Extremal);
    let fiber = config.model().anticanonical();
    assert!(report
        .generators
        .iter()
        .any(|(n, o)| *n == fiber && *o == PredicateOutcome::FiberMultiple));
}

/// Facet normals of a full-dimensional cone in rank 2 or 3, by trying every
/// candidate normal through `dim - 1` generators.
fn facets(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let dim = gens[0].len();
    let mut candidates = Vec::new();
    if dim == 2 {
        for g in gens {
            candidates.push(vec![-g[1], g[0]]);
        }
    } else {
        for a in gens {
            for b in gens {
                candidates.push(vec![
                    a[1] * b[2] - a[2] * b[1],
                    a[2] * b[0] - a[0] * b[2],
                    a[0] * b[1] - a[1] * b[0],
                ]);
            }
        }
    }
    let dot = |u: &[i64], v: &[i64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<i64>();
    let mut out = BTreeSet::new();
    for c in candidates {
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        for n in [c.clone(), c.iter().map(|x| -x).collect()] {
            if gens.iter().all(|g| dot(&n, g) >= 0) {
                let g = n.iter().fold(0i64, |acc, &x| gcd(acc, x.abs()));
                out.insert(n.iter().map(|x| x / g).collect::<Vec<_>>());
            }
        }
    }
    out.into_iter().collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Hilbert basis by brute force.
///
/// An irreducible point lies in the half-open parallelepiped of some
/// linearly independent generators or is a generator, so every basis element
/// lies in the box `|x_i| <= dim * max|g_j|`. A reducible point is a basis
/// element plus a nonzero cone point, so it is enough to look for `y` in the
/// box with `x - y` a nonzero cone point.
fn brute_hilbert(gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let dim = gens[0].len();
    let normals = facets(gens);
    let dot = |u: &[i64], v: &[i64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<i64>();
    let inside = |x: &[i64]| normals.iter().all(|n| dot(n, x) >= 0);
    let reach = dim as i64 * gens.iter().flatten().map(|x| x.abs()).max().unwrap();
    let mut points = Vec::new();
    let mut x = vec![-reach; dim];
    loop {
        if x.iter().any(|&v| v != 0) && inside(&x) {
            points.push(x.clone());
        }
        let mut i = 0;
        while i < dim {
            x[i] += 1;
            if x[i] <= reach {
                break;
            }
            x[i] = -reach;
            i += 1;
        }
        if i == dim {
            break;
        }
    }
    points
        .iter()
        .filter(|x| {
            !points.iter().any(|y| {
                let z: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                z.iter().any(|&v| v != 0) && inside(&z)
            })
        })
        .cloned()
        .collect()
}

fn generator_sets() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2usize..=3).prop_flat_map(|dim| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, dim), dim..=dim + 2)
    })
}

fn rank_of(gens: &[Vec<i64>]) -> usize {
    let dim = gens[0].len();
    if dim == 2 {
        let any = gens
            .iter()
            .any(|a| gens.iter().any(|b| a[0] * b[1] != a[1] * b[0]));
        return if any { 2 } else { 1 };
    }
    let any = gens.iter().any(|a| {
        gens.iter().any(|b| {
            gens.iter().any(|c| {
                a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                    + a[2] * (b[0] * c[1] - b[1] * c[0])
                    != 0
            })
        })
    });
    if any {
        3
    } else {
        0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn small_hilbert_bases_match_brute_force(gens in generator_sets()) {
        let dim = gens[0].len();
        prop_assume!(rank_of(&gens) == dim);
        let normals = facets(&gens);
        // Pointed: the facet normals span the space.
        prop_assume!(normals.len() >= dim && rank_of(&normals) == dim);
        let classes: Vec<DivisorClass> = gens.iter().map(|g| DivisorClass::from_coords(g).unwrap()).collect();
        let cone = ConeDesc::from_generators(dim - 1, classes, ConeKind::Other).unwrap();
        let got: BTreeSet<Vec<i64>> = hilbert_basis(&cone).unwrap().iter().map(DivisorClass::coords).collect();
        prop_assert_eq!(got, brute_hilbert(&gens));
    }
}

#[test]
fn non_unimodular_cones_need_interior_generators() {
    let c = |d0, m1| DivisorClass::new(d0, vec![m1]);
    // 2l and l + (l - e1).
    let cone = ConeDesc::from_generators(1, vec![c(2, 0), c(2, 1)], ConeKind::Other).unwrap();
    assert_eq!(hilbert_basis(&cone).unwrap(), vec![c(1, 0), c(2, 1)]);
    // l and l - 2e1 span a cone of index 2.
    let cone = ConeDesc::from_generators(1, vec![c(1, 0), c(1, 2)], ConeKind::Other).unwrap();
    let hb = hilbert_basis(&cone).unwrap();
    assert_eq!(hb, vec![c(1, 0), c(1, 1), c(1, 2)]);
    assert!(hb.len() > cone.extremal_rays.len());
    let expected: BTreeSet<Vec<i64>> = hb.iter().map(DivisorClass::coords).collect();
    assert_eq!(brute_hilbert(&[vec![1, 0], vec![1, 2]]), expected);
}
