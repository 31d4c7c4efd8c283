//! Equivalence of the configuration (P(V_{m,a}), {d_i v_i}, H_∞) with the hyperplane
//! configuration H_{a,i} = x_1 + a_i x_2 + ... + a_i^{N-m-1} x_{N-m}, H_{a,N+1} = x_{N-m},
//! checked with exact linear algebra over any field.

use super::RegularTuple;
use crate::error::{Error, Result};
use crate::linalg::{inverse, mat_vec, nullspace, rref, vec_mat, Field, Mat};

/// Elementary symmetric polynomials s_0..s_N of the entries.
fn elementary_symmetric<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    // coefficients of ∏ (1 + a_r t)
    let mut s = vec![f.one()];
    for x in a {
        let mut next = s.clone();
        next.push(f.zero());
        for k in 0..s.len() {
            next[k + 1] = f.add(&next[k + 1], &f.mul(x, &s[k]));
        }
        s = next;
    }
    s
}

/// The map f = f3 ∘ f2 ∘ f1 : V^* → k^{N-m}, evaluated on a vector w ∈ V standing for
/// the functional ⟨w, ·⟩ restricted to V_{m,a}.
struct ConfigMap<'a, F: Field> {
    f: &'a F,
    n: usize,
    m: usize,
    vandermonde_inv: Mat<F::Elem>,
    a_inv: Mat<F::Elem>,
}

impl<F: Field> ConfigMap<'_, F> {
    fn apply(&self, w: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.f;
        // w = Σ_k c_k u_k with u_k = (a_1^k, ..., a_N^k); f1 drops u_0..u_{m-1}
        let c = mat_vec(f, &self.vandermonde_inv, w);
        // f2: u_{N-t} ↦ (-1)^{t-1} x_t
        let y: Vec<F::Elem> = (1..=self.n - self.m)
            .map(|t| {
                let v = c[self.n - t].clone();
                if t % 2 == 0 {
                    f.neg(&v)
                } else {
                    v
                }
            })
            .collect();
        // f3: right multiplication by A^{-1}
        vec_mat(f, &y, &self.a_inv)
    }
}

pub fn configuration_check<F: Field>(n_total: u32, m: u32, t: &RegularTuple<F>) -> Result<bool> {
    let f = &t.field;
    let n = n_total as usize;
    let m = m as usize;
    if t.len() != n {
        return Err(Error::OutOfRange(format!("tuple of length {} for N = {n}", t.len())));
    }
    if m == 0 || m >= n {
        return Err(Error::OutOfRange(format!("m = {m} for N = {n}")));
    }
    let k = n - m;
    let a = &t.a;

    let mut vandermonde = Mat::filled(n, n, f.zero());
    for r in 0..n {
        for c in 0..n {
            vandermonde.set(r, c, f.pow(&a[r], c as u64));
        }
    }
    let vandermonde_inv = inverse(f, &vandermonde)?;

    let s = elementary_symmetric(f, a);
    let mut amat = Mat::filled(k, k, f.zero());
    for i in 0..k {
        for j in i..k {
            let v = if i % 2 == 0 { s[j - i].clone() } else { f.neg(&s[j - i]) };
            amat.set(i, j, v);
        }
    }
    let a_inv = inverse(f, &amat)?;
    let map = ConfigMap { f, n, m, vandermonde_inv, a_inv };

    // V_{m,a} = {v : Σ a_i^k v_i = 0, k < m}, basis as the columns of B (N × (N-m))
    let mut eqs = Mat::filled(m, n, f.zero());
    for kk in 0..m {
        for i in 0..n {
            eqs.set(kk, i, f.pow(&a[i], kk as u64));
        }
    }
    let basis = nullspace(f, &eqs);
    if basis.len() != k {
        return Ok(false);
    }
    let b = Mat::from_rows(basis).transpose();

    // f on the coordinate functionals must factor through restriction to V_{m,a}:
    // there is a k × k matrix Φ with B Φ = [f(e_1); ...; f(e_N)].
    let images = Mat::from_rows(
        (0..n)
            .map(|r| map.apply(&(0..n).map(|c| if c == r { f.one() } else { f.zero() }).collect::<Vec<_>>()))
            .collect(),
    );
    let mut bt = b.transpose();
    let pivot_rows = rref(f, &mut bt);
    let sub = |m: &Mat<F::Elem>| Mat::from_rows(pivot_rows.iter().map(|&r| m.row(r).to_vec()).collect());
    let phi = crate::linalg::mat_mul(f, &inverse(f, &sub(&b))?, &sub(&images));
    if crate::linalg::mat_mul(f, &b, &phi) != images {
        return Ok(false);
    }
    if inverse(f, &phi).is_err() {
        return Ok(false);
    }

    // f(d_i v_i) = H_{a,i}
    for i in 0..n {
        let w: Vec<F::Elem> = (0..n).map(|c| if c == i { t.d[i].clone() } else { f.zero() }).collect();
        let h: Vec<F::Elem> = (0..k).map(|e| f.pow(&a[i], e as u64)).collect();
        if map.apply(&w) != h {
            return Ok(false);
        }
    }
    // f(H_∞) = x_{N-m}
    let h_inf: Vec<F::Elem> = (0..n).map(|i| f.pow(&a[i], m as u64)).collect();
    let last: Vec<F::Elem> = (0..k).map(|e| if e + 1 == k { f.one() } else { f.zero() }).collect();
    Ok(map.apply(&h_inf) == last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn rationals(a: &[i64]) -> RegularTuple<Rationals> {
        RegularTuple::new(Rationals, a.iter().map(|&x| BigRational::from_integer(x.into())).collect()).unwrap()
    }

    #[test]
    fn small_cases() {
        assert!(configuration_check(3, 1, &rationals(&[0, 1, 2])).unwrap());
        let t = RegularTuple::from_ints(PrimeField::new(11).unwrap(), &[3, 1, 7, 2, 9]).unwrap();
        assert!(configuration_check(5, 2, &t).unwrap());
        assert!(configuration_check(5, 4, &t).unwrap());
        assert!(configuration_check(7, 3, &rationals(&[-3, 5, 0, 2, 11, -7, 4])).unwrap());
    }

    #[test]
    fn symmetric_functions() {
        let f = Rationals;
        let t = rationals(&[0, 1, 2, 5, -1]);
        let s = elementary_symmetric(&f, &t.a);
        assert_eq!(s.len(), 6);
        assert_eq!(s[1], f.from_i64(7));
    }
}
