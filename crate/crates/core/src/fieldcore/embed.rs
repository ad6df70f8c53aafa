use num_bigint::BigUint;
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::poly::{self, Poly};
use super::{FieldCtx, FieldElem};
use crate::error::{Error, Result};

/// Ring embedding F_{p^n} → F_{p^m}, n | m, fixing F_p.
///
/// The image of the source generator is the root of the source modulus in the
/// target field with the smallest encoding. Embedding a context into an
/// identical context is the identity.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: FieldCtx,
    dst: FieldCtx,
    /// Images of the source basis monomials 1, y, …, y^{n−1}.
    images: Vec<FieldElem>,
}

impl Embedding {
    pub fn new(src: &FieldCtx, dst: &FieldCtx) -> Result<Embedding> {
        check_compatible(src, dst)?;
        if src == dst || src.degree() == 1 {
            return Ok(Embedding::from_root(src, dst, dst.generator()));
        }
        let roots = roots_of_modulus(src, dst)?;
        let root = roots
            .into_iter()
            .min_by(|a, b| a.cmp_encoding(b))
            .ok_or(Error::NoRootFound)?;
        Ok(Embedding::from_root(src, dst, root))
    }

    /// Embedding through an explicitly chosen root of the source modulus.
    pub fn with_root(src: &FieldCtx, dst: &FieldCtx, root: FieldElem) -> Result<Embedding> {
        check_compatible(src, dst)?;
        if let Some(m) = src.modulus() {
            let g = Poly::from_prime_coeffs(dst, m);
            if !poly::eval(dst, &g, &root).is_zero() {
                return Err(Error::NoRootFound);
            }
        }
        Ok(Embedding::from_root(src, dst, root))
    }

    /// All roots of the source modulus in the target field.
    pub fn all_roots(src: &FieldCtx, dst: &FieldCtx) -> Result<Vec<FieldElem>> {
        check_compatible(src, dst)?;
        if src.degree() == 1 {
            return Ok(vec![dst.zero()]);
        }
        roots_of_modulus(src, dst)
    }

    fn from_root(src: &FieldCtx, dst: &FieldCtx, root: FieldElem) -> Embedding {
        let mut images = Vec::with_capacity(src.degree());
        let mut cur = dst.one();
        for _ in 0..src.degree() {
            images.push(cur.clone());
            cur = dst.mul(&cur, &root);
        }
        Embedding {
            src: src.clone(),
            dst: dst.clone(),
            images,
        }
    }

    pub fn source(&self) -> &FieldCtx {
        &self.src
    }

    pub fn target(&self) -> &FieldCtx {
        &self.dst
    }

    pub fn apply(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.dst.zero();
        for (&c, img) in x.coeffs().iter().zip(&self.images) {
            if c != 0 {
                acc = self.dst.add(&acc, &self.dst.scale(img, c));
            }
        }
        acc
    }
}

/// Embeds one element; see [`Embedding`].
pub fn embed_element(src: &FieldCtx, dst: &FieldCtx, x: &FieldElem) -> Result<FieldElem> {
    Ok(Embedding::new(src, dst)?.apply(x))
}

fn check_compatible(src: &FieldCtx, dst: &FieldCtx) -> Result<()> {
    if src.p() != dst.p() {
        return Err(Error::FieldMismatch(format!(
            "characteristics {} and {} differ",
            src.p(),
            dst.p()
        )));
    }
    if !dst.degree().is_multiple_of(src.degree()) {
        return Err(Error::FieldMismatch(format!(
            "degree {} does not divide {}",
            src.degree(),
            dst.degree()
        )));
    }
    Ok(())
}

/// Finds one root by equal-degree splitting, then returns its conjugates.
fn roots_of_modulus(src: &FieldCtx, dst: &FieldCtx) -> Result<Vec<FieldElem>> {
    let modulus = src.modulus().ok_or(Error::NoRootFound)?;
    let n = src.degree();
    let mut g = Poly::from_prime_coeffs(dst, modulus);
    let half = (dst.order() - BigUint::one()) >> 1u32;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut attempts = 0;
    while g.degree() != Some(1) {
        attempts += 1;
        if attempts > 256 {
            return Err(Error::NoRootFound);
        }
        let delta: Vec<u64> = (0..dst.degree()).map(|_| rng.gen_range(0..dst.p())).collect();
        let shifted = Poly::from_elems(dst, &[dst.element(&delta)?, dst.one()]);
        let w = poly::powmod(dst, &shifted, &half, &g)?;
        let w = poly::sub(dst, &w, &Poly::one(dst));
        let h = poly::gcd(dst, &g, &w);
        if let Some(dh) = h.degree() {
            if dh >= 1 && dh < g.degree().unwrap() {
                g = h;
            }
        }
    }
    let root = dst.neg(&g.coeff_elem(dst, 0));
    let roots: Vec<_> = (0..n as u64).map(|j| dst.frobenius(&root, j)).collect();
    let check = Poly::from_prime_coeffs(dst, modulus);
    if roots.iter().any(|r| !poly::eval(dst, &check, r).is_zero()) {
        return Err(Error::NoRootFound);
    }
    Ok(roots)
}
