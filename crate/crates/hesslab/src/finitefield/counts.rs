//! Point counts of quadric intersections, their double covers, and hyperelliptic curves.

use rayon::prelude::*;

use super::RegularTuple;
use crate::error::{Error, Result};
use crate::linalg::{Field, PrimeField};

/// Default cap on projective representatives enumerated by one count.
pub const DEFAULT_COUNT_BUDGET: u128 = 10_000_000;

const CHUNK: u64 = 1 << 12;

/// (p^dim - 1) / (p - 1)
pub fn projective_representatives(p: u64, dim: u32) -> u128 {
    ((p as u128).pow(dim) - 1) / (p as u128 - 1)
}

/// Sum of `visit` over canonical representatives of P^{dim-1}(F_p): the first nonzero
/// coordinate is 1. Work is split into fixed chunks, so the result does not depend on
/// the thread count.
fn sum_over_projective<V>(p: u64, dim: usize, visit: V) -> u64
where
    V: Fn(&[u64]) -> u64 + Sync,
{
    (0..dim)
        .map(|lead| {
            let free = (dim - lead - 1) as u32;
            let total = p.pow(free);
            let chunks = total.div_ceil(CHUNK);
            (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let start = c * CHUNK;
                    let end = (start + CHUNK).min(total);
                    let mut v = vec![0u64; dim];
                    v[lead] = 1;
                    let mut idx = start;
                    for slot in v.iter_mut().skip(lead + 1) {
                        *slot = idx % p;
                        idx /= p;
                    }
                    let mut acc = 0;
                    for _ in start..end {
                        acc += visit(&v);
                        // odometer increment over the free coordinates
                        for slot in v.iter_mut().skip(lead + 1) {
                            *slot += 1;
                            if *slot < p {
                                break;
                            }
                            *slot = 0;
                        }
                    }
                    acc
                })
                .sum::<u64>()
        })
        .sum()
}

struct Forms {
    p: u64,
    /// coeff[k][i] = a_i^k for k = 0..=m
    coeff: Vec<Vec<u64>>,
    squares: Vec<u64>,
}

impl Forms {
    fn new(t: &RegularTuple<PrimeField>, m: usize) -> Self {
        let f = &t.field;
        let p = f.p();
        let coeff = (0..=m).map(|k| t.a.iter().map(|a| f.pow(a, k as u64)).collect()).collect();
        let squares = (0..p).map(|x| x * x % p).collect();
        Self { p, coeff, squares }
    }

    /// Σ_i a_i^k v_i^2
    fn eval(&self, k: usize, v: &[u64]) -> u64 {
        let row = &self.coeff[k];
        let mut acc: u64 = 0;
        for (c, x) in row.iter().zip(v) {
            if *x != 0 {
                acc += c * self.squares[*x as usize] % self.p;
            }
        }
        acc % self.p
    }

    fn on_x(&self, m: usize, v: &[u64]) -> bool {
        (0..m).all(|k| self.eval(k, v) == 0)
    }
}

fn check_budget(p: u64, dim: usize, budget: u128) -> Result<()> {
    let estimate = projective_representatives(p, dim as u32);
    if estimate > budget {
        return Err(Error::OracleTooLarge { estimate, budget });
    }
    Ok(())
}

/// #X_{m,a}(F_p) in P^{N-1}, or #X̃_{m,a}(F_p) in P^N when `doubled`, where X̃ adds
/// the equation Σ a_i^m v_i^2 = ε^2.
pub fn count_quadric_intersection(
    n_total: u32,
    m: u32,
    a: &RegularTuple<PrimeField>,
    doubled: bool,
    budget: u128,
) -> Result<u64> {
    let n = n_total as usize;
    let m = m as usize;
    if a.len() != n {
        return Err(Error::OutOfRange(format!("tuple of length {} for N = {n}", a.len())));
    }
    if m == 0 || m >= n {
        return Err(Error::OutOfRange(format!("m = {m} for N = {n}")));
    }
    let forms = Forms::new(a, m);
    let p = forms.p;
    if !doubled {
        check_budget(p, n, budget)?;
        return Ok(sum_over_projective(p, n, |v| u64::from(forms.on_x(m, v))));
    }
    check_budget(p, n + 1, budget)?;
    Ok(sum_over_projective(p, n + 1, |w| {
        let (v, eps) = w.split_at(n);
        u64::from(forms.on_x(m, v) && forms.eval(m, v) == forms.squares[eps[0] as usize])
    }))
}

/// The double cover counted directly agrees with the count over X_{m,a} weighted by
/// 1 + η(Σ a_i^m v_i^2).
pub fn double_cover_consistency(n_total: u32, m: u32, a: &RegularTuple<PrimeField>, budget: u128) -> Result<bool> {
    let direct = count_quadric_intersection(n_total, m, a, true, budget)?;
    let n = n_total as usize;
    let mu = m as usize;
    let forms = Forms::new(a, mu);
    let f = &a.field;
    let weighted = sum_over_projective(forms.p, n, |v| {
        if forms.on_x(mu, v) {
            (1 + f.eta(forms.eval(mu, v)) as i64) as u64
        } else {
            0
        }
    });
    Ok(direct == weighted)
}

/// Points on the smooth projective model of y^2 = ∏ (x - b), b in `branch`.
/// `include_infinity_branch` states that ∞ is a branch point, which holds exactly when
/// the degree is odd; a mismatched flag is rejected.
pub fn count_hyperelliptic(branch: &[u64], include_infinity_branch: bool, p: u64) -> Result<u64> {
    let f = PrimeField::new(p)?;
    let b: Vec<u64> = branch.iter().map(|x| x % p).collect();
    for i in 0..b.len() {
        if b[i + 1..].contains(&b[i]) {
            return Err(Error::RepeatedBranchPoints);
        }
    }
    let odd = b.len() % 2 == 1;
    if odd != include_infinity_branch {
        return Err(Error::OutOfRange(format!(
            "degree {} {} a branch point at infinity",
            b.len(),
            if odd { "requires" } else { "excludes" }
        )));
    }
    let mut affine: i64 = 0;
    for x in 0..p {
        let fx = b.iter().fold(1u64, |acc, bi| f.mul(&acc, &f.sub(&x, bi)));
        affine += 1 + f.eta(fx) as i64;
    }
    // monic: even degree has two points at infinity, odd degree one
    let infinity = if odd { 1 } else { 2 };
    Ok(affine as u64 + infinity)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(p: u64, a: &[i64]) -> RegularTuple<PrimeField> {
        RegularTuple::from_ints(PrimeField::new(p).unwrap(), a).unwrap()
    }

    #[test]
    fn conic() {
        let t = tuple(5, &[0, 1, 2]);
        assert_eq!(count_quadric_intersection(3, 1, &t, false, DEFAULT_COUNT_BUDGET).unwrap(), 6);
    }

    #[test]
    fn points_of_zero_dimensional_intersection() {
        let t = tuple(7, &[0, 1, 2, 3, 4]);
        let c = count_quadric_intersection(5, 4, &t, false, DEFAULT_COUNT_BUDGET).unwrap();
        assert!(c <= 16);
    }

    #[test]
    fn del_pezzo_band() {
        let t = tuple(11, &[0, 1, 2, 3, 4]);
        let c = count_quadric_intersection(5, 2, &t, false, DEFAULT_COUNT_BUDGET).unwrap();
        assert!((78..=188).contains(&c), "{c}");
    }

    #[test]
    fn covers() {
        let t = tuple(7, &[0, 1, 2, 3, 5]);
        for m in 1..5 {
            assert!(double_cover_consistency(5, m, &t, DEFAULT_COUNT_BUDGET).unwrap());
        }
    }

    #[test]
    fn hyperelliptic() {
        assert_eq!(count_hyperelliptic(&[0, 1], false, 3).unwrap(), 4);
        let c = count_hyperelliptic(&[0, 1, 2], true, 5).unwrap();
        assert!((2..=10).contains(&c));
        assert!(count_hyperelliptic(&[0, 1, 1], true, 5).is_err());
        assert!(count_hyperelliptic(&[0, 1], true, 5).is_err());
    }

    #[test]
    fn budget() {
        let t = tuple(11, &[0, 1, 2, 3, 4, 5, 6]);
        assert!(matches!(
            count_quadric_intersection(7, 2, &t, false, 1000),
            Err(Error::OracleTooLarge { .. })
        ));
    }
}
