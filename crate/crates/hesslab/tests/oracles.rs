//! Independent oracles: naive enumeration written here from the definitions, plus
//! frozen values. Nothing below calls the enumeration code under test.

#![allow(clippy::needless_range_loop)]

use hesslab::ci_cohomology::{ci_euler, primitive_middle_betti, CIProfile};
use hesslab::finitefield::{nilpotent_representative, FormChoice, NilpotentRep};
use hesslab::hessenberg::{
    family_dimension, fiber_poincare, fiber_poincare_with_forms, gamma_poincare, image_partition, upsilon_poincare,
    Flavor,
};
use hesslab::monodromy::{decompose_x, decompose_xtilde_minus, sp_fundamental_dim};
use hesslab::orbits::{dominance_leq, orbit_dimension, partitions_of};
use hesslab::qcombinatorics::{gaussian_binomial, ogr_count, quadric_count, Witt};
use hesslab::Partition;
use num_bigint::BigUint;

// ---- arithmetic mod p, test-side ----

fn rank_mod(p: u64, rows: &[Vec<u64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = pow_mod(m[r][c], p - 2, p);
        for v in m[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for k in 0..cols {
                    m[i][k] = (m[i][k] + p * p - f * m[r][k] % p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// All k-dimensional subspaces of F_p^n, as reduced echelon bases.
fn subspaces(p: u64, n: usize, k: usize) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    choose(n, k, 0, &mut pivots, &mut |piv| {
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| (piv[r] + 1..n).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
            .collect();
        for mut idx in 0..p.pow(slots.len() as u32) {
            let mut rows = vec![vec![0u64; n]; k];
            for (r, &c) in piv.iter().enumerate() {
                rows[r][c] = 1;
            }
            for &(r, c) in &slots {
                rows[r][c] = idx % p;
                idx /= p;
            }
            out.push(rows);
        }
    });
    out
}

fn choose(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..n {
        cur.push(i);
        choose(n, k, i + 1, cur, f);
        cur.pop();
    }
}

fn form(p: u64, g: &dyn Fn(usize, usize) -> u64, u: &[u64], v: &[u64]) -> u64 {
    let mut acc = 0;
    for i in 0..u.len() {
        for j in 0..v.len() {
            acc = (acc + u[i] * g(i, j) % p * v[j]) % p;
        }
    }
    acc
}

fn apply(p: u64, rep: &NilpotentRep, v: &[u64]) -> Vec<u64> {
    let n = rep.x.rows;
    (0..n).map(|i| (0..n).map(|j| rep.x.data[i * n + j] * v[j]).sum::<u64>() % p).collect()
}

/// Basis of {w : <u, w> = 0 for every u in `rows`}.
fn perp(p: u64, rep: &NilpotentRep, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = rep.x.rows;
    // row i of the system is G u_i
    let system: Vec<Vec<u64>> = rows
        .iter()
        .map(|u| (0..n).map(|j| (0..n).map(|i| u[i] * rep.gram.data[i * n + j]).sum::<u64>() % p).collect())
        .collect();
    nullspace_mod(p, n, &system)
}

fn nullspace_mod(p: u64, n: usize, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = pow_mod(m[r][c], p - 2, p);
        for v in m[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for k in 0..n {
                    m[i][k] = (m[i][k] + p * p - f * m[r][k] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[i][fc]) % p;
            }
            v
        })
        .collect()
}

/// Flags U ⊂ V, dim V = m, V isotropic with xV = 0, and x U^⊥ ⊂ V (E) or ⊂ U (O),
/// by enumerating every m-subspace and every hyperplane in it.
fn naive_fiber(flavor: Flavor, m: usize, rep: &NilpotentRep) -> u64 {
    let p = rep.field.p();
    let n = rep.x.rows;
    let g = |i: usize, j: usize| rep.gram.data[i * n + j];
    let mut count = 0;
    for v in subspaces(p, n, m) {
        let iso = v.iter().all(|a| v.iter().all(|b| form(p, &g, a, b) == 0));
        if !iso || v.iter().any(|a| apply(p, rep, a).iter().any(|&c| c != 0)) {
            continue;
        }
        for coeffs in subspaces(p, m, m - 1) {
            let u: Vec<Vec<u64>> = coeffs
                .iter()
                .map(|c| (0..n).map(|t| (0..m).map(|r| c[r] * v[r][t]).sum::<u64>() % p).collect())
                .collect();
            let target = if flavor == Flavor::E { &v } else { &u };
            let base = rank_mod(p, target);
            let ok = perp(p, rep, &u).iter().all(|w| {
                let xw = apply(p, rep, w);
                let mut t = target.clone();
                t.push(xw);
                rank_mod(p, &t) == base
            });
            if ok {
                count += 1;
            }
        }
    }
    count
}

// ---- isotropic subspaces ----

fn diag_form(consts: &[u64]) -> impl Fn(usize, usize) -> u64 + '_ {
    move |i, j| if i == j { consts[i] } else { 0 }
}

fn naive_isotropic(p: u64, consts: &[u64], k: usize) -> u64 {
    let g = diag_form(consts);
    subspaces(p, consts.len(), k)
        .into_iter()
        .filter(|v| v.iter().all(|a| v.iter().all(|b| form(p, &g, a, b) == 0)))
        .count() as u64
}

fn nonsquare(p: u64) -> u64 {
    (2..p).find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1).unwrap()
}

/// Diagonal constants realizing each class: the Plus/Minus decision uses the
/// discriminant (-1)^{d/2} ∏ c_i.
fn diagonal_for(p: u64, d: usize, witt: Witt) -> Vec<u64> {
    let mut c = vec![1u64; d];
    if d.is_multiple_of(2) {
        let sign_sq = pow_mod(p - 1, (d / 2) as u64, p);
        let is_sq = pow_mod(sign_sq, (p - 1) / 2, p) == 1;
        let want_sq = witt == Witt::Plus;
        if is_sq != want_sq && d > 0 {
            c[d - 1] = nonsquare(p);
        }
    }
    c
}

#[test]
fn gaussian_binomials_count_subspaces() {
    for p in [3u64, 5] {
        for n in 0..=4usize {
            for k in 0..=n {
                let want = subspaces(p, n, k).len() as u64;
                assert_eq!(gaussian_binomial(n as u32, k as u32).eval(p), BigUint::from(want), "p={p} n={n} k={k}");
            }
        }
    }
}

#[test]
fn isotropic_grassmannians_by_enumeration() {
    for p in [3u64, 5] {
        for d in 1..=5usize {
            let classes: &[Witt] = if d % 2 == 1 { &[Witt::Split] } else { &[Witt::Plus, Witt::Minus] };
            for &w in classes {
                let consts = diagonal_for(p, d, w);
                for k in 1..=d / 2 {
                    let want = naive_isotropic(p, &consts, k);
                    let got = ogr_count(k as u32, d as u32, w).unwrap().eval(p);
                    assert_eq!(got, BigUint::from(want), "p={p} d={d} k={k} {w:?}");
                }
                if d >= 3 || d % 2 == 0 {
                    let lines = naive_isotropic(p, &consts, 1);
                    let q = quadric_count(d as u32 - 2, w).unwrap().eval(p);
                    assert_eq!(q, BigUint::from(lines), "quadric p={p} d={d} {w:?}");
                }
            }
        }
    }
}

// ---- fibers ----

fn order3_below(flavor: Flavor, m: u32, nn: u32) -> Vec<Partition> {
    let img = image_partition(flavor, m, nn).unwrap();
    partitions_of(nn, Some(3)).into_iter().filter(|p| dominance_leq(p, &img).unwrap()).collect()
}

fn poly_at(flavor: Flavor, m: u32, nn: u32, p: &Partition, q: u64) -> u64 {
    match fiber_poincare(flavor, m, nn, p) {
        Ok(poly) => u64::try_from(poly.eval(q)).unwrap(),
        Err(hesslab::Error::EmptyFiber(_)) => 0,
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn fibers_match_naive_enumeration_small() {
    for (nn, q) in [(3u32, 3u64), (3, 5), (5, 3), (5, 5)] {
        for flavor in [Flavor::E, Flavor::O] {
            for m in 1..=(nn - 1) / 2 {
                for p in order3_below(flavor, m, nn) {
                    let rep = nilpotent_representative(&p, q, FormChoice::Split).unwrap();
                    let want = naive_fiber(flavor, m as usize, &rep);
                    assert_eq!(poly_at(flavor, m, nn, &p, q), want, "{flavor} m={m} N={nn} x={p} q={q}");
                }
            }
        }
    }
}

#[test]
fn fibers_match_naive_enumeration_seven() {
    for flavor in [Flavor::E, Flavor::O] {
        for m in 1..=3 {
            for p in order3_below(flavor, m, 7) {
                let rep = nilpotent_representative(&p, 3, FormChoice::Split).unwrap();
                let want = naive_fiber(flavor, m as usize, &rep);
                assert_eq!(poly_at(flavor, m, 7, &p, 3), want, "{flavor} m={m} x={p}");
            }
        }
    }
}

/// With every Gram constant 1 the forms on Im x and Σ can be of Minus type; the
/// polynomial with those types must still match the count.
#[test]
fn standard_representative_uses_its_own_form_types() {
    let mut minus_seen = false;
    for (nn, q) in [(5u32, 3u64), (5, 5), (7, 3)] {
        for flavor in [Flavor::E, Flavor::O] {
            for m in 1..=2.min((nn - 1) / 2) {
                for p in order3_below(flavor, m, nn) {
                    let rep = nilpotent_representative(&p, q, FormChoice::Standard).unwrap();
                    let forms = rep.form_types();
                    minus_seen |= forms.image == Witt::Minus || forms.sigma == Witt::Minus;
                    let got = match fiber_poincare_with_forms(flavor, m, nn, &p, forms) {
                        Ok(poly) => u64::try_from(poly.eval(q)).unwrap(),
                        Err(hesslab::Error::EmptyFiber(_)) => 0,
                        Err(e) => panic!("{e}"),
                    };
                    assert_eq!(got, naive_fiber(flavor, m as usize, &rep), "{flavor} m={m} N={nn} x={p} q={q}");
                }
            }
        }
    }
    assert!(minus_seen);
}

// ---- frozen values ----

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

#[test]
fn frozen_fiber_values() {
    // Υ for N=7, m=2, j=3 is 1 + q; four points over F_3
    assert_eq!(upsilon_poincare(7, 2, 3).unwrap().coeffs(), &[BigUint::from(1u8), BigUint::from(1u8)]);
    assert!(gamma_poincare(5, 1, 2).unwrap().is_zero());
    assert_eq!(poly_at(Flavor::E, 2, 7, &p(&[2, 2, 2, 1]), 3), 4);
    assert_eq!(poly_at(Flavor::E, 1, 5, &p(&[2, 1, 1, 1]), 3), 1);
    assert_eq!(poly_at(Flavor::E, 1, 9, &p(&[2, 1, 1, 1, 1, 1, 1, 1]), 7), 1);
}

#[test]
fn frozen_dimensions() {
    assert_eq!(family_dimension(Flavor::E, 2, 7).unwrap(), 14);
    assert_eq!(family_dimension(Flavor::O, 2, 7).unwrap(), 13);
    for n in 1..=6 {
        assert_eq!(family_dimension(Flavor::E, 1, 2 * n + 1).unwrap(), 2 * n as u64);
    }
    assert_eq!(image_partition(Flavor::E, 2, 7).unwrap(), p(&[3, 2, 1, 1]));
    assert_eq!(image_partition(Flavor::O, 2, 7).unwrap(), p(&[3, 1, 1, 1, 1]));
}

/// Centralizer dimension Σ_{i,j} min(λ_i, λ_j) computed directly.
#[test]
fn orbit_dimension_by_centralizer() {
    for nn in (1..=15).step_by(2) {
        for part in partitions_of(nn, None) {
            let c: u64 = part.parts().iter().flat_map(|a| part.parts().iter().map(move |b| *a.min(b) as u64)).sum();
            let nn = nn as u64;
            assert_eq!(orbit_dimension(&part).unwrap(), (nn * nn - c) / 2, "{part}");
        }
    }
    assert_eq!(partitions_of(5, Some(3)).len(), 5);
    assert_eq!(partitions_of(3, Some(3)).len(), 3);
}

/// Classical values: a del Pezzo surface of degree 4, a genus 5 curve, a K3 surface,
/// 16 points, the intersection of two quadrics in P^5 (b_3 = 4).
#[test]
fn frozen_betti_numbers() {
    let b = |k: u32, m: u32| primitive_middle_betti(&CIProfile::quadrics(k, m).unwrap()).unwrap();
    assert_eq!(b(4, 2), BigUint::from(5u8));
    assert_eq!(b(4, 3), BigUint::from(10u8));
    assert_eq!(b(5, 3), BigUint::from(21u8));
    assert_eq!(b(4, 4), BigUint::from(15u8));
    assert_eq!(b(5, 2), BigUint::from(4u8));
    assert_eq!(ci_euler(&CIProfile::quadrics(5, 3).unwrap()), 24.into());
}

/// Genus of a complete intersection curve by adjunction: 2g - 2 = (Σ d_i - K - 1) ∏ d_i.
#[test]
fn curve_genus_by_adjunction() {
    for nn in [5u32, 7, 9, 11] {
        let k = nn - 1;
        let m = nn - 2;
        let two_g = (2 * m as i64 - k as i64 - 1) * (1i64 << m) + 2;
        assert_eq!(decompose_x(nn, m).unwrap().total, BigUint::from(two_g as u64), "N={nn}");
    }
}

#[test]
fn frozen_decompositions() {
    assert_eq!(decompose_x(5, 2).unwrap().total, BigUint::from(5u8));
    assert_eq!(decompose_xtilde_minus(5, 2).unwrap().total, BigUint::from(16u8));
    assert_eq!(decompose_x(7, 3).unwrap().total, BigUint::from(28u8));
    assert_eq!(decompose_xtilde_minus(5, 4).unwrap().total, BigUint::from(16u8));
    // C(2g, j) - C(2g, j - 2)
    assert_eq!(sp_fundamental_dim(2, 2).unwrap(), BigUint::from(5u8));
    assert_eq!(sp_fundamental_dim(5, 3).unwrap(), BigUint::from(120u32 - 10));
}
