//! Direct enumeration of the Hessenberg fiber over a nilpotent representative:
//! isotropic flags V_{m-1} ⊂ V_m with x V_m = 0 and the flavor's second condition.

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::NilpotentRep;
use crate::error::{Error, Result};
use crate::hessenberg::Flavor;
use crate::linalg::{mat_vec, nullspace, rank, Field, Mat, PrimeField};
use crate::qcombinatorics::{ogr_count, Witt};

pub const DEFAULT_FIBER_BUDGET: u128 = 500_000_000;

type Vector = Vec<u64>;

struct Ctx<'a> {
    f: &'a PrimeField,
    rep: &'a NilpotentRep,
    /// Basis of ker x, ambient coordinates.
    kernel: Vec<Vector>,
    /// Gram matrix of the form on ker x in that basis.
    gk: Vec<Vector>,
}

impl Ctx<'_> {
    fn dot(&self, u: &[u64], v: &[u64]) -> u64 {
        let g = &self.rep.gram;
        bilinear(self.f.p(), u, v, |a, b| *g.get(a, b))
    }

    fn kdot(&self, u: &[u64], v: &[u64]) -> u64 {
        bilinear(self.f.p(), u, v, |a, b| self.gk[a][b])
    }

    fn to_ambient(&self, coords: &[u64]) -> Vector {
        let f = self.f;
        let n = self.rep.n();
        let mut out = vec![0; n];
        for (c, k) in coords.iter().zip(&self.kernel) {
            if *c == 0 {
                continue;
            }
            for t in 0..n {
                out[t] = f.add(&out[t], &f.mul(c, &k[t]));
            }
        }
        out
    }
}

/// Bound on the enumeration work. Isotropic r-subspaces of ker x are isotropic in V, so
/// at most |OGr(r, N)| partial flags of each size r < m-1 are extended, each scanning
/// at most p^{dim ker x - r} candidate rows; each complete V_{m-1} scans at most
/// p^{dim ker x - 2(m-1)} lines.
pub fn fiber_work_estimate(rep: &NilpotentRep, m: u32) -> u128 {
    let p = rep.field.p();
    let n = rep.n() as u32;
    let dk = n - rank(&rep.field, &rep.x) as u32;
    let s = m.saturating_sub(1);
    let iso = |r: u32| {
        ogr_count(r, n, Witt::split_for(n))
            .map(|c| c.eval(p).to_u128().unwrap_or(u128::MAX))
            .unwrap_or(0)
    };
    let pw = |e: u32| (p as u128).saturating_pow(e);
    let interior: u128 = (0..s).map(|r| iso(r).saturating_mul(pw(dk.saturating_sub(r)))).sum();
    interior.saturating_add(iso(s).saturating_mul(pw(dk.saturating_sub(2 * s))))
}

/// Number of F_p-points of the fiber over `rep` at step m.
pub fn brute_fiber_count(flavor: Flavor, m: u32, rep: &NilpotentRep, budget: u128) -> Result<u64> {
    if !matches!(flavor, Flavor::E | Flavor::O) {
        return Err(Error::OutOfRange(format!("fibers are defined for E and O, not {flavor}")));
    }
    if m == 0 || 2 * m as usize > rep.n() {
        return Err(Error::OutOfRange(format!("m = {m} for N = {}", rep.n())));
    }
    let estimate = fiber_work_estimate(rep, m);
    if estimate > budget {
        return Err(Error::OracleTooLarge { estimate, budget });
    }
    let f = &rep.field;
    let kernel = nullspace(f, &rep.x);
    let ctx0 = Ctx { f, rep, kernel: kernel.clone(), gk: Vec::new() };
    let gk: Vec<Vector> =
        kernel.iter().map(|u| kernel.iter().map(|v| ctx0.dot(u, v)).collect()).collect();
    let ctx = Ctx { f, rep, kernel, gk };
    let dk = ctx.kernel.len();
    let s = (m - 1) as usize;

    if s == 0 {
        return Ok(count_extensions(&ctx, flavor, &[]));
    }
    // Split the search over the first row of the echelon form.
    let firsts: Vec<(usize, Vector)> = (0..dk)
        .flat_map(|pivot| row_candidates(f.p(), dk, pivot, &[]).map(move |r| (pivot, r)))
        .filter(|(_, r)| ctx.kdot(r, r) == 0)
        .collect();
    let total: u64 = firsts
        .par_iter()
        .map(|(pivot, row)| {
            let mut rows = vec![row.clone()];
            let mut pivots = vec![*pivot];
            let mut acc = 0;
            extend(&ctx, flavor, s, &mut rows, &mut pivots, &mut acc);
            acc
        })
        .sum();
    Ok(total)
}

/// Vectors in kernel coordinates with a 1 at `pivot`, zeros before it and at earlier
/// pivot columns, anything elsewhere.
fn row_candidates(p: u64, dk: usize, pivot: usize, earlier: &[usize]) -> impl Iterator<Item = Vector> {
    let free: Vec<usize> = (pivot + 1..dk).filter(|c| !earlier.contains(c)).collect();
    let count = p.pow(free.len() as u32);
    (0..count).map(move |mut idx| {
        let mut v = vec![0; dk];
        v[pivot] = 1;
        for &c in &free {
            v[c] = idx % p;
            idx /= p;
        }
        v
    })
}

/// Depth-first enumeration of isotropic subspaces of ker x in reduced echelon form.
fn extend(ctx: &Ctx, flavor: Flavor, s: usize, rows: &mut Vec<Vector>, pivots: &mut Vec<usize>, acc: &mut u64) {
    if rows.len() == s {
        *acc += count_extensions(ctx, flavor, rows);
        return;
    }
    let dk = ctx.kernel.len();
    let last = *pivots.last().expect("nonempty");
    for pivot in last + 1..dk {
        // earlier rows must vanish at the new pivot column
        if rows.iter().any(|r| r[pivot] != 0) {
            continue;
        }
        let earlier = pivots.clone();
        for cand in row_candidates(ctx.f.p(), dk, pivot, &earlier) {
            if ctx.kdot(&cand, &cand) != 0 || rows.iter().any(|r| ctx.kdot(r, &cand) != 0) {
                continue;
            }
            rows.push(cand);
            pivots.push(pivot);
            extend(ctx, flavor, s, rows, pivots, acc);
            rows.pop();
            pivots.pop();
        }
    }
}

/// Given V_{m-1} (kernel coordinates), count the valid V_m.
fn count_extensions(ctx: &Ctx, flavor: Flavor, rows: &[Vector]) -> u64 {
    let f = ctx.f;
    let n = ctx.rep.n();
    let dk = ctx.kernel.len();
    let basis: Vec<Vector> = rows.iter().map(|r| ctx.to_ambient(r)).collect();

    // V_{m-1}^perp in ambient coordinates
    let perp = if basis.is_empty() {
        (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
    } else {
        let g = Mat::from_rows(basis.iter().map(|b| (0..n).map(|c| ctx.dot(b, &unit(n, c))).collect()).collect());
        nullspace(f, &g)
    };

    // residues of x V_{m-1}^perp modulo V_{m-1}
    let images: Vec<Vector> = perp.iter().map(|v| mat_vec(f, &ctx.rep.x, v)).collect();
    let s = basis.len();
    let mut stacked = basis.clone();
    stacked.extend(images.iter().cloned());
    let residue_dim = if stacked.is_empty() { 0 } else { rank(f, &Mat::from_rows(stacked)) - s };

    // W = V_{m-1}^perp ∩ ker x in kernel coordinates, and a complement Z of V_{m-1} in W
    let w_basis = if rows.is_empty() {
        (0..dk).map(|i| unit(dk, i)).collect::<Vec<_>>()
    } else {
        let c = Mat::from_rows(rows.iter().map(|r| (0..dk).map(|t| ctx.kdot(r, &unit(dk, t))).collect()).collect());
        nullspace(f, &c)
    };
    let mut span: Vec<Vector> = rows.to_vec();
    let mut z: Vec<Vector> = Vec::new();
    for w in w_basis {
        let mut trial = span.clone();
        trial.push(w.clone());
        if rank(f, &Mat::from_rows(trial)) > span.len() {
            span.push(w.clone());
            z.push(w);
        }
    }

    match (flavor, residue_dim) {
        (_, 0) => isotropic_lines(ctx, &z),
        (Flavor::E, 1) => {
            // V_m is forced to be V_{m-1} + <r>
            let r = images
                .iter()
                .find(|v| {
                    let mut t = basis.clone();
                    t.push((*v).clone());
                    rank(f, &Mat::from_rows(t)) > s
                })
                .expect("residue of dimension one");
            let in_kernel = mat_vec(f, &ctx.rep.x, r).iter().all(|&c| c == 0);
            let orthogonal = basis.iter().all(|b| ctx.dot(b, r) == 0);
            u64::from(in_kernel && orthogonal && ctx.dot(r, r) == 0)
        }
        _ => 0,
    }
}

/// u^T G v mod p, reducing once per term.
fn bilinear(p: u64, u: &[u64], v: &[u64], g: impl Fn(usize, usize) -> u64) -> u64 {
    let mut acc: u128 = 0;
    for (a, &ua) in u.iter().enumerate() {
        if ua == 0 {
            continue;
        }
        for (b, &vb) in v.iter().enumerate() {
            if vb == 0 {
                continue;
            }
            let gab = g(a, b);
            if gab != 0 {
                acc += ((ua * gab % p) * vb) as u128;
            }
        }
    }
    (acc % p as u128) as u64
}

fn unit(n: usize, i: usize) -> Vector {
    (0..n).map(|j| u64::from(i == j)).collect()
}

/// Isotropic lines in span(z) for the form restricted from ker x.
fn isotropic_lines(ctx: &Ctx, z: &[Vector]) -> u64 {
    let f = ctx.f;
    let t = z.len();
    if t == 0 {
        return 0;
    }
    let h: Vec<Vec<u64>> = z.iter().map(|a| z.iter().map(|b| ctx.kdot(a, b)).collect()).collect();
    let p = f.p();
    let mut count = 0;
    for lead in 0..t {
        let free = t - lead - 1;
        let mut v = vec![0u64; t];
        v[lead] = 1;
        for mut idx in 0..p.pow(free as u32) {
            for c in lead + 1..t {
                v[c] = idx % p;
                idx /= p;
            }
            let mut q = 0;
            for a in lead..t {
                if v[a] == 0 {
                    continue;
                }
                for b in lead..t {
                    if v[b] != 0 && h[a][b] != 0 {
                        q = f.add(&q, &f.mul(&f.mul(&v[a], &h[a][b]), &v[b]));
                    }
                }
            }
            if q == 0 {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitefield::{nilpotent_representative, FormChoice};
    use crate::orbits::Partition;

    fn count(flavor: Flavor, m: u32, parts: &[u32], p: u64) -> u64 {
        let rep = nilpotent_representative(&Partition::new(parts.to_vec()).unwrap(), p, FormChoice::Split).unwrap();
        brute_fiber_count(flavor, m, &rep, DEFAULT_FIBER_BUDGET).unwrap()
    }

    #[test]
    fn small_fibers() {
        assert_eq!(count(Flavor::E, 2, &[2, 2, 2, 1], 3), 4);
        assert_eq!(count(Flavor::E, 1, &[2, 1, 1, 1], 3), 1);
        assert_eq!(count(Flavor::E, 1, &[2, 1, 1, 1, 1, 1], 5), 1);
        assert_eq!(count(Flavor::O, 2, &[2, 1, 1, 1], 3), 4);
        // x = 0, N = 5, m = 1: all isotropic lines of a 5-dim quadratic space, 1+q+q^2+q^3
        assert_eq!(count(Flavor::E, 1, &[1, 1, 1, 1, 1], 3), 40);
    }

    #[test]
    fn budget_is_enforced() {
        let rep = nilpotent_representative(&Partition::new(vec![1; 9]).unwrap(), 5, FormChoice::Split).unwrap();
        assert!(matches!(
            brute_fiber_count(Flavor::E, 3, &rep, 1000),
            Err(Error::OracleTooLarge { .. })
        ));
    }
}
