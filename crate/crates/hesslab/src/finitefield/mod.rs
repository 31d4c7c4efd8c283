//! Prime-field arithmetic and brute-force enumeration oracles.
//!
//! Everything here counts by direct enumeration; none of it uses the closed
//! formulas it is meant to check.

mod config;
mod counts;
mod fiber;

pub use config::configuration_check;
pub use counts::{
    count_hyperelliptic, count_quadric_intersection, double_cover_consistency, projective_representatives,
    DEFAULT_COUNT_BUDGET,
};
pub use fiber::{brute_fiber_count, fiber_work_estimate, DEFAULT_FIBER_BUDGET};

pub use crate::linalg::{Field, FqMatrix, Mat, PrimeField, Rationals};

use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hessenberg::FormTypes;
use crate::linalg::mat_mul;
use crate::orbits::Partition;
use crate::qcombinatorics::Witt;

/// Pairwise-distinct a_1, ..., a_N with d_i = ∏_{j≠i} (a_j - a_i).
#[derive(Clone, Debug)]
pub struct RegularTuple<F: Field> {
    pub field: F,
    pub a: Vec<F::Elem>,
    pub d: Vec<F::Elem>,
}

impl<F: Field> RegularTuple<F> {
    pub fn new(field: F, a: Vec<F::Elem>) -> Result<Self> {
        let n = a.len();
        let mut d = Vec::with_capacity(n);
        for i in 0..n {
            let mut di = field.one();
            for j in 0..n {
                if j != i {
                    di = field.mul(&di, &field.sub(&a[j], &a[i]));
                }
            }
            if field.is_zero(&di) {
                return Err(Error::NotRegular(format!("{:?} has a repeated entry", a)));
            }
            d.push(di);
        }
        Ok(Self { field, a, d })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

impl RegularTuple<PrimeField> {
    pub fn from_ints(field: PrimeField, a: &[i64]) -> Result<Self> {
        let v = a.iter().map(|&x| field.reduce(x)).collect();
        Self::new(field, v)
    }

    /// Uniform distinct residues, by rejection on collisions.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> Result<Self> {
        if n as u64 > field.p() {
            return Err(Error::NotRegular(format!("{n} distinct values do not exist mod {}", field.p())));
        }
        let mut a: Vec<u64> = Vec::with_capacity(n);
        while a.len() < n {
            let x = rng.gen_range(0..field.p());
            if !a.contains(&x) {
                a.push(x);
            }
        }
        Self::new(field, a)
    }
}

impl RegularTuple<Rationals> {
    /// Distinct fractions num/den with |num| ≤ 50 and 1 ≤ den ≤ 9, by rejection.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut a: Vec<BigRational> = Vec::with_capacity(n);
        while a.len() < n {
            let num: i64 = rng.gen_range(-50..=50);
            let den: i64 = rng.gen_range(1..=9);
            let x = BigRational::new(num.into(), den.into());
            if !a.contains(&x) {
                a.push(x);
            }
        }
        Self::new(Rationals, a)
    }
}

/// Which constants the Gram matrix puts on the 2- and 1-blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormChoice {
    /// ⟨v, xv⟩ and ⟨w, w⟩ alternate between 1 and -1, so the forms on Im x and on
    /// ker x / Im x have maximal Witt index.
    Split,
    /// Every constant is 1.
    Standard,
}

/// A nilpotent self-adjoint x with Jordan type `partition`, and its Gram matrix.
#[derive(Clone, Debug)]
pub struct NilpotentRep {
    pub field: PrimeField,
    pub x: FqMatrix,
    pub gram: FqMatrix,
    pub partition: Partition,
    /// Constants on the 2-blocks and on the 1-blocks, in block order.
    pub two_block_constants: Vec<u64>,
    pub one_block_constants: Vec<u64>,
}

/// Basis x^k u (3-blocks), v, xv (2-blocks), w (1-blocks), blocks in order.
pub fn nilpotent_representative(partition: &Partition, p: u64, choice: FormChoice) -> Result<NilpotentRep> {
    if !partition.is_order3() {
        return Err(Error::OutsideOrder3(partition.to_string()));
    }
    let field = PrimeField::new(p)?;
    let n = partition.total() as usize;
    let mut x = Mat::filled(n, n, 0u64);
    let mut gram = Mat::filled(n, n, 0u64);
    let sign = |t: usize| match choice {
        FormChoice::Split if t % 2 == 1 => p - 1,
        _ => 1,
    };
    let (mut twos, mut ones) = (Vec::new(), Vec::new());
    let mut idx = 0;
    for &part in partition.parts() {
        match part {
            3 => {
                x.set(idx + 1, idx, 1);
                x.set(idx + 2, idx + 1, 1);
                gram.set(idx, idx + 2, 1);
                gram.set(idx + 2, idx, 1);
                gram.set(idx + 1, idx + 1, 1);
            }
            2 => {
                let c = sign(twos.len());
                twos.push(c);
                x.set(idx + 1, idx, 1);
                gram.set(idx, idx + 1, c);
                gram.set(idx + 1, idx, c);
            }
            _ => {
                let c = sign(ones.len());
                ones.push(c);
                gram.set(idx, idx, c);
            }
        }
        idx += part as usize;
    }
    Ok(NilpotentRep {
        field,
        x,
        gram,
        partition: partition.clone(),
        two_block_constants: twos,
        one_block_constants: ones,
    })
}

/// Witt class of the diagonal form diag(c_1, ..., c_d) over F_p.
pub fn diagonal_witt(field: &PrimeField, consts: &[u64]) -> Witt {
    let d = consts.len();
    if d % 2 == 1 {
        return Witt::Split;
    }
    let mut disc = if (d / 2).is_multiple_of(2) { 1 } else { field.p() - 1 };
    for c in consts {
        disc = field.mul(&disc, c);
    }
    if field.eta(disc) == 1 {
        Witt::Plus
    } else {
        Witt::Minus
    }
}

impl NilpotentRep {
    pub fn n(&self) -> usize {
        self.x.rows
    }

    /// Classes of the forms on Im x_0 and ker x_0 / Im x_0 for x_0 the restriction to the
    /// 2- and 1-blocks. On Im x_0 the form (xv, xw) = ⟨v, xw⟩ is diagonal with the
    /// 2-block constants; on the quotient it is diagonal with the 1-block constants.
    pub fn form_types(&self) -> FormTypes {
        FormTypes {
            image: diagonal_witt(&self.field, &self.two_block_constants),
            sigma: diagonal_witt(&self.field, &self.one_block_constants),
        }
    }

    pub fn is_self_adjoint(&self) -> bool {
        let f = &self.field;
        // ⟨xu, v⟩ = u^T x^T G v and ⟨u, xv⟩ = u^T G x v
        mat_mul(f, &self.x.transpose(), &self.gram) == mat_mul(f, &self.gram, &self.x)
    }

    pub fn power(&self, k: u32) -> FqMatrix {
        let mut acc = crate::linalg::identity(&self.field, self.n());
        for _ in 0..k {
            acc = mat_mul(&self.field, &acc, &self.x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn representatives() {
        for choice in [FormChoice::Split, FormChoice::Standard] {
            let r = nilpotent_representative(&p(&[3, 2, 2]), 5, choice).unwrap();
            assert!(r.is_self_adjoint());
            assert!(r.power(3).data.iter().all(|&v| v == 0));
            assert!(r.power(2).data.iter().any(|&v| v != 0));
            assert_eq!(rank(&r.field, &r.gram), 7);
            let r = nilpotent_representative(&p(&[1; 5]), 3, choice).unwrap();
            assert!(r.x.data.iter().all(|&v| v == 0));
        }
        let r = nilpotent_representative(&p(&[2, 1]), 3, FormChoice::Standard).unwrap();
        assert!(r.is_self_adjoint());
        assert_eq!(rank(&r.field, &r.x), 1);
    }

    #[test]
    fn witt_of_diagonal_forms() {
        let f3 = PrimeField::new(3).unwrap();
        // x^2 + y^2 is anisotropic mod 3
        assert_eq!(diagonal_witt(&f3, &[1, 1]), Witt::Minus);
        assert_eq!(diagonal_witt(&f3, &[1, 2]), Witt::Plus);
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(diagonal_witt(&f5, &[1, 1]), Witt::Plus);
        assert_eq!(diagonal_witt(&f3, &[1, 1, 1]), Witt::Split);
    }

    #[test]
    fn regular_tuples() {
        let f = PrimeField::new(7).unwrap();
        assert!(RegularTuple::from_ints(f.clone(), &[1, 2, 8]).is_err());
        let t = RegularTuple::from_ints(f, &[0, 1, 2]).unwrap();
        // d_1 = (1-0)(2-0) = 2
        assert_eq!(t.d[0], 2);
    }
}
