//! Vertex and facet counts.
//!
//! `a_n` counts binary painted trees with `n` leaves. It satisfies
//! `a_n = C(n-1) + sum_{i=1}^{n-1} a_i a_{n-i}` with `a_0 = 0`, and has the
//! closed form `a_n = (1/n) sum_{k=1}^n binom(2n-k-1, n-1) binom(2k-2, k-1)`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::painted_trees::FacetTree;
use crate::rational::Q;

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Catalan number `C(n) = binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

/// `a_0, …, a_max` by the recursion.
pub fn vertex_counts_recursive(max: usize) -> Vec<BigUint> {
    let mut a = vec![BigUint::zero()];
    for n in 1..=max {
        let mut value = catalan(n as u64 - 1);
        for i in 1..n {
            value += &a[i] * &a[n - i];
        }
        a.push(value);
    }
    a
}

pub fn vertex_count_recursive(n: usize) -> BigUint {
    vertex_counts_recursive(n).pop().unwrap()
}

pub fn vertex_count_closed(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    let n64 = n as u64;
    let sum: BigUint = (1..=n64)
        .map(|k| binomial(2 * n64 - k - 1, n64 - 1) * binomial(2 * k - 2, k - 1))
        .sum();
    let (q, r) = sum.div_rem(&BigUint::from(n64));
    debug_assert!(r.is_zero());
    q
}

pub fn lower_facet_count(n: usize) -> BigUint {
    if n < 2 {
        return BigUint::zero();
    }
    BigUint::from(n * (n - 1) / 2)
}

pub fn upper_facet_count(n: usize) -> BigUint {
    if n < 2 {
        return BigUint::zero();
    }
    (BigUint::one() << (n - 1)) - BigUint::one()
}

/// `n(n-1)/2 + 2^(n-1) - 1`, zero below two leaves.
pub fn facet_count(n: usize) -> BigUint {
    lower_facet_count(n) + upper_facet_count(n)
}

/// `S(m) = m(m+1)/2`; `S(n-1)` is the coordinate sum of Loday's points.
pub fn triangular(m: usize) -> BigUint {
    BigUint::from(m) * BigUint::from(m + 1) / BigUint::from(2u32)
}

/// Number of binary painted trees refining a facet tree, from the product
/// structure of the facet: `a_r * C(s-1)` for `l(k,s)` and
/// `C(t-1) * a_{r_1} * … * a_{r_t}` for `u(t; r_1, …, r_t)`.
pub fn facet_vertex_count(f: &FacetTree) -> BigUint {
    match f {
        FacetTree::Lower { s, n, .. } => vertex_count_recursive(n + 1 - s) * catalan(*s as u64 - 1),
        FacetTree::Upper { parts } => {
            let a = vertex_counts_recursive(*parts.iter().max().unwrap());
            parts
                .iter()
                .fold(catalan(parts.len() as u64 - 1), |acc, &r| acc * &a[r])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub vertex_counts: Vec<BigUint>,
    pub facet_counts: Vec<BigUint>,
}

impl CountTable {
    pub fn new(max: usize) -> Self {
        CountTable {
            vertex_counts: vertex_counts_recursive(max),
            facet_counts: (0..=max).map(facet_count).collect(),
        }
    }
}

/// Truncated power series with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Q>,
}

impl Series {
    pub fn zero(degree: usize) -> Self {
        Series { coeffs: vec![Q::zero(); degree + 1] }
    }

    /// The monomial `x` truncated at `degree`.
    pub fn x(degree: usize) -> Self {
        let mut s = Self::zero(degree);
        if degree >= 1 {
            s.coeffs[1] = Q::one();
        }
        s
    }

    pub fn one(degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = Q::one();
        s
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn add(&self, other: &Series) -> Series {
        Series {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let d = self.degree();
        let mut out = Self::zero(d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(d + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// `self(inner(x))`; requires `inner` to have zero constant term.
    pub fn compose(&self, inner: &Series) -> Series {
        assert!(inner.coeffs[0].is_zero());
        let d = self.degree();
        // Horner: (((c_d) inner + c_{d-1}) inner + …) + c_0
        let mut out = Self::zero(d);
        for c in self.coeffs.iter().rev() {
            out = out.mul(inner);
            out.coeffs[0] += c;
        }
        out
    }
}

/// The Catalan generating function `c(x)`, solving `c = 1 + x c^2` by
/// fixed-point iteration (each pass fixes one more coefficient).
pub fn catalan_series(degree: usize) -> Series {
    let x = Series::x(degree);
    let one = Series::one(degree);
    let mut c = one.clone();
    for _ in 0..=degree {
        c = one.add(&x.mul(&c.mul(&c)));
    }
    c
}

/// Coefficients of `A(x)` solving `A = x c(x) + A^2`.
pub fn vertex_series(degree: usize) -> Series {
    let xc = Series::x(degree).mul(&catalan_series(degree));
    let mut a = Series::zero(degree);
    for _ in 0..=degree {
        a = xc.add(&a.mul(&a));
    }
    a
}

/// `A(x) = x c(x) c(x c(x))`: the Catalan transform of `C(n-1)`.
pub fn vertex_series_by_transform(degree: usize) -> Series {
    let c = catalan_series(degree);
    let xc = Series::x(degree).mul(&c);
    xc.mul(&c.compose(&xc))
}
