//! Recursive Golay-pair constructor.
//!
//! A sequence is identified with the coefficient vector of its polynomial:
//! element `n` is the coefficient of `z^n`. Upsampling by `k` maps
//! coefficient `n` to `n*k`, polynomial multiplication is convolution, and
//! multiplying by `z^m` prepends `m` zeros. Given pairs `(a, b)` and
//! `(c, d)`, the constructor forms
//!
//! ```text
//! f = theta1 * A(z^k) C(z^l) + theta2 * B(z^k) D(z^l) z^m
//! g = theta1 * A(z^k) Dr(z^l) - theta2 * B(z^k) Cr(z^l) z^m
//! ```
//!
//! where `Dr`, `Cr` are the reverse-conjugate sequences. The output is
//! re-verified before being returned as a pair.

use super::{ComplexSeq, GaussInt, GolayPair, ZERO};
use crate::error::{Error, Result};

/// Parameters for [`golay_construct`]: two unit phases, two upsampling
/// factors, and a zero-pad shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremParams {
    theta1: GaussInt,
    theta2: GaussInt,
    k: usize,
    l: usize,
    m: usize,
}

impl TheoremParams {
    pub fn new(theta1: GaussInt, theta2: GaussInt, k: usize, l: usize, m: usize) -> Result<Self> {
        if !theta1.is_unit() || !theta2.is_unit() {
            return Err(Error::Config(
                "theta1 and theta2 must be unit-modulus Gaussian integers".into(),
            ));
        }
        if k == 0 || l == 0 {
            return Err(Error::Config("upsampling factors must be >= 1".into()));
        }
        Ok(Self {
            theta1,
            theta2,
            k,
            l,
            m,
        })
    }

    /// `theta1 = theta2 = 1`, `k = l = 1`, shift `m`.
    pub fn shift_only(m: usize) -> Self {
        Self {
            theta1: super::ONE,
            theta2: super::ONE,
            k: 1,
            l: 1,
            m,
        }
    }

    pub fn theta1(&self) -> GaussInt {
        self.theta1
    }

    pub fn theta2(&self) -> GaussInt {
        self.theta2
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

fn upsample(seq: &ComplexSeq, k: usize) -> Vec<GaussInt> {
    let mut out = vec![ZERO; (seq.len() - 1) * k + 1];
    for (n, &e) in seq.elements().iter().enumerate() {
        out[n * k] = e;
    }
    out
}

fn convolve(a: &[GaussInt], b: &[GaussInt]) -> Vec<GaussInt> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

/// `theta * u + theta2 * v * z^m`, zero-extended to a common length.
fn combine(
    theta1: GaussInt,
    u: &[GaussInt],
    sign_theta2: GaussInt,
    v: &[GaussInt],
    m: usize,
) -> Vec<GaussInt> {
    let len = u.len().max(v.len() + m);
    let mut out = vec![ZERO; len];
    for (n, &e) in u.iter().enumerate() {
        out[n] = out[n] + theta1 * e;
    }
    for (n, &e) in v.iter().enumerate() {
        out[n + m] = out[n + m] + sign_theta2 * e;
    }
    out
}

/// Build a new Golay pair from two existing pairs.
///
/// The result can cover non-contiguous spectral supports (the shift `m`
/// inserts zeros between the two terms), which is what makes the recursion
/// useful for multi-channel mapping. Overlapping supports may produce
/// elements outside the unit-modulus alphabet; that is legal here and only
/// rejected when the sequence is mapped to subcarriers.
pub fn golay_construct(
    ab: &GolayPair,
    cd: &GolayPair,
    params: &TheoremParams,
) -> Result<GolayPair> {
    let a_up = upsample(ab.a(), params.k);
    let b_up = upsample(ab.b(), params.k);
    let c_up = upsample(cd.a(), params.l);
    let d_up = upsample(cd.b(), params.l);
    let c_rev = upsample(&cd.a().reverse_conjugate(), params.l);
    let d_rev = upsample(&cd.b().reverse_conjugate(), params.l);

    let f = combine(
        params.theta1,
        &convolve(&a_up, &c_up),
        params.theta2,
        &convolve(&b_up, &d_up),
        params.m,
    );
    let g = combine(
        params.theta1,
        &convolve(&a_up, &d_rev),
        -params.theta2,
        &convolve(&b_up, &c_rev),
        params.m,
    );

    GolayPair::new(ComplexSeq::new(f)?, ComplexSeq::new(g)?)
}
