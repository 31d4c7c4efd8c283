//! Euler characteristics and primitive middle Betti numbers of smooth complete
//! intersections in projective space, from the Chern class generating function.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A smooth complete intersection of the given degrees in P^K.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CIProfile {
    pub ambient_dim: u32,
    pub degrees: Vec<u32>,
}

impl CIProfile {
    pub fn new(ambient_dim: u32, degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() || degrees.contains(&0) {
            return Err(Error::InconsistentProfile(format!("degrees {degrees:?}")));
        }
        if degrees.len() as u32 > ambient_dim {
            return Err(Error::InconsistentProfile(format!(
                "{} hypersurfaces in P^{ambient_dim}",
                degrees.len()
            )));
        }
        Ok(Self { ambient_dim, degrees })
    }

    /// m quadrics in P^K.
    pub fn quadrics(ambient_dim: u32, m: u32) -> Result<Self> {
        Self::new(ambient_dim, vec![2; m as usize])
    }

    pub fn dim(&self) -> u32 {
        self.ambient_dim - self.degrees.len() as u32
    }
}

/// χ = (∏ d_i) [z^D] (1+z)^{K+1} / ∏ (1 + d_i z).
pub fn ci_euler(profile: &CIProfile) -> BigInt {
    let d = profile.dim() as usize;
    let k = profile.ambient_dim as usize;
    // (1+z)^{K+1} truncated at z^D
    let mut series: Vec<BigInt> = vec![BigInt::zero(); d + 1];
    let mut c = BigInt::one();
    for (t, slot) in series.iter_mut().enumerate() {
        *slot = c.clone();
        c = c * BigInt::from(k + 1 - t) / BigInt::from(t + 1);
    }
    for &deg in &profile.degrees {
        // divide by (1 + deg z): s_t -= deg * s_{t-1}, in increasing t
        let deg = BigInt::from(deg);
        for t in 1..=d {
            let prev = series[t - 1].clone();
            series[t] -= &deg * prev;
        }
    }
    let prod: BigInt = profile.degrees.iter().map(|&x| BigInt::from(x)).product();
    prod * &series[d]
}

/// Primitive part of H^D, with H^i for i ≠ D as in P^D.
pub fn primitive_middle_betti(profile: &CIProfile) -> Result<BigUint> {
    let chi = ci_euler(profile);
    let d = BigInt::from(profile.dim());
    let prim = if profile.dim().is_multiple_of(2) {
        // b_D = χ - D, one class of it is the hyperplane power
        chi - d - BigInt::one()
    } else {
        d + BigInt::one() - chi
    };
    if prim.is_negative() {
        return Err(Error::InconsistentProfile(format!(
            "negative primitive Betti number {prim} for {:?} in P^{}",
            profile.degrees, profile.ambient_dim
        )));
    }
    Ok(prim.to_biguint().expect("nonnegative"))
}

/// Middle Betti number b_D, including the hyperplane class in even dimension.
pub fn middle_betti(profile: &CIProfile) -> Result<BigUint> {
    let prim = primitive_middle_betti(profile)?;
    Ok(if profile.dim().is_multiple_of(2) { prim + 1u32 } else { prim })
}
