use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{ComplexMatrix, KernelError, Tolerance, ONE, ZERO};

/// Dense univariate polynomial over ℂ, coefficients lowest degree first.
///
/// Trailing (leading-degree) exact zeros are trimmed, so the zero
/// polynomial is the empty coefficient list.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![ONE] }
    }

    /// `X`
    pub fn x() -> Self {
        Self {
            coeffs: vec![ZERO, ONE],
        }
    }

    /// Monic polynomial with the given roots, `∏ (X − ρ)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| {
            acc.mul(&Self {
                coeffs: vec![-r, ONE],
            })
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == ONE
    }

    pub fn monic(&self) -> Self {
        let lc = self.leading();
        if lc == ZERO {
            return Self::zero();
        }
        let mut m = Self::new(self.coeffs.iter().map(|c| c / lc).collect());
        if let Some(last) = m.coeffs.last_mut() {
            *last = ONE;
        }
        m
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(ZERO)
                        + other.coeffs.get(i).copied().unwrap_or(ZERO)
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * x + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let n = a.size();
        let mut acc = ComplexMatrix::zeros(n);
        for c in self.coeffs.iter().rev() {
            acc = acc.matmul(a);
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    /// Monic polynomial whose roots are `λ` times the roots of `self`:
    /// `λ^m · p(X/λ)` for monic `p` of degree `m`. This is the minimal
    /// polynomial of `λb` when `self` is that of `b`.
    pub fn dilate(&self, lambda: Complex64) -> Self {
        let Some(m) = self.degree() else {
            return Self::zero();
        };
        let p = self.monic();
        let mut pow = ONE;
        let mut out = vec![ZERO; m + 1];
        for i in (0..=m).rev() {
            out[i] = p.coeffs[i] * pow;
            pow *= lambda;
        }
        Self::new(out)
    }

    /// Roots by eigenvalues of the balanced companion matrix, each polished
    /// with a few guarded Newton steps.
    pub fn roots(&self) -> Vec<Complex64> {
        let Some(m) = self.degree() else {
            return Vec::new();
        };
        if m == 0 {
            return Vec::new();
        }
        let p = self.monic();
        if m == 1 {
            return vec![-p.coeffs[0]];
        }
        let mut companion = DMatrix::<Complex64>::zeros(m, m);
        for i in 1..m {
            companion[(i, i - 1)] = ONE;
        }
        for i in 0..m {
            companion[(i, m - 1)] = -p.coeffs[i];
        }
        balance(&mut companion);
        let eig = nalgebra::linalg::Schur::new(companion)
            .eigenvalues()
            .expect("complex Schur form is triangular");
        let derivative = p.derivative();
        eig.iter()
            .map(|&z| polish_root(&p, &derivative, z))
            .collect()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    /// Sylvester matrix of `self` (degree m) and `other` (degree k),
    /// size `(m+k) × (m+k)`, coefficients highest degree first.
    pub fn sylvester(&self, other: &Self) -> DMatrix<Complex64> {
        let m = self.degree().unwrap_or(0);
        let k = other.degree().unwrap_or(0);
        let size = m + k;
        let mut s = DMatrix::<Complex64>::zeros(size, size);
        for r in 0..k {
            for (d, c) in self.coeffs.iter().rev().enumerate() {
                s[(r, r + d)] = *c;
            }
        }
        for r in 0..m {
            for (d, c) in other.coeffs.iter().rev().enumerate() {
                s[(k + r, r + d)] = *c;
            }
        }
        s
    }

    /// Resultant magnitude and its value normalized by the Hadamard bound
    /// on the Sylvester determinant (the product of row norms), so the
    /// normalized value lies in `[0, 1]`.
    pub fn resultant(&self, other: &Self) -> Resultant {
        let s = self.sylvester(other);
        if s.nrows() == 0 {
            return Resultant {
                magnitude: 1.0,
                normalized: 1.0,
            };
        }
        let det = s.clone().lu().determinant().norm();
        let hadamard: f64 = s.row_iter().map(|r| r.norm()).product();
        Resultant {
            magnitude: det,
            normalized: if hadamard > 0.0 { det / hadamard } else { 0.0 },
        }
    }

    /// Bézout pair `(s, t)` with `s·self + t·other = 1`, `deg s < deg other`,
    /// `deg t < deg self`, from the linear system on coefficients.
    pub fn bezout(&self, other: &Self, tol: &Tolerance) -> Result<(Self, Self), KernelError> {
        let (Some(m), Some(k)) = (self.degree(), other.degree()) else {
            return Err(KernelError::NotCoprime(0.0));
        };
        if m == 0 {
            return Ok((Self::new(vec![ONE / self.coeffs[0]]), Self::zero()));
        }
        if k == 0 {
            return Ok((Self::zero(), Self::new(vec![ONE / other.coeffs[0]])));
        }
        let size = m + k;
        let mut sys = DMatrix::<Complex64>::zeros(size, size);
        for i in 0..k {
            for (d, c) in self.coeffs.iter().enumerate() {
                sys[(i + d, i)] = *c;
            }
        }
        for j in 0..m {
            for (d, c) in other.coeffs.iter().enumerate() {
                sys[(j + d, k + j)] = *c;
            }
        }
        let sv = sys.singular_values();
        let hi = sv.max();
        let lo = sv.min();
        let margin = if hi > 0.0 { lo / hi } else { 0.0 };
        if !(margin > tol.rank_rel) {
            return Err(KernelError::NotCoprime(margin));
        }
        let mut rhs = DVector::<Complex64>::zeros(size);
        rhs[0] = ONE;
        let sol = sys
            .lu()
            .solve(&rhs)
            .ok_or(KernelError::NotCoprime(margin))?;
        let s = Self::new(sol.iter().take(k).copied().collect());
        let t = Self::new(sol.iter().skip(k).copied().collect());
        Ok((s, t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resultant {
    pub magnitude: f64,
    pub normalized: f64,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

fn polish_root(p: &Polynomial, dp: &Polynomial, mut z: Complex64) -> Complex64 {
    let mut val = p.eval(z).norm();
    for _ in 0..3 {
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let cand = z - p.eval(z) / d;
        let cand_val = p.eval(cand).norm();
        if cand_val < val {
            z = cand;
            val = cand_val;
        } else {
            break;
        }
    }
    z
}

/// Parlett–Reinsch diagonal balancing with powers of two.
fn balance(a: &mut DMatrix<Complex64>) {
    let n = a.nrows();
    let radix = 2.0_f64;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            let mut rr = r;
            while cc < rr / radix {
                cc *= radix;
                rr /= radix;
                f *= radix;
            }
            while cc >= rr * radix {
                cc /= radix;
                rr *= radix;
                f /= radix;
            }
            if (cc + rr) < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Minimal polynomial by the first linear dependence in the Krylov family
/// `I, a, a², …` of the norm-scaled matrix, rescaled back afterwards.
pub fn minimal_polynomial(a: &ComplexMatrix, tol: &Tolerance) -> Polynomial {
    let n = a.size();
    if n == 0 {
        return Polynomial::one();
    }
    let scale = a.singular_values()[0];
    if scale == 0.0 {
        return Polynomial::x();
    }
    let a_hat = a.scale(Complex64::new(1.0 / scale, 0.0));
    let mut powers = vec![ComplexMatrix::identity(n)];
    let mut unit_powers: Vec<Vec<Complex64>> = vec![unit(powers[0].as_slice())];
    for d in 1..=n {
        let next = powers[d - 1].matmul(&a_hat);
        unit_powers.push(unit(next.as_slice()));
        powers.push(next);
        let rank = super::rank_and_basis(&unit_powers, tol)
            .expect("Krylov vectors share a length")
            .rank;
        if rank <= d {
            return krylov_relation(&powers, d, scale);
        }
    }
    // Cayley–Hamilton guarantees dependence at d = n; reaching here means
    // the rank test was fooled by roundoff, so take the degree-n relation.
    krylov_relation(&powers, n, scale)
}

fn unit(v: &[Complex64]) -> Vec<Complex64> {
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nrm == 0.0 {
        v.to_vec()
    } else {
        v.iter().map(|z| z / nrm).collect()
    }
}

/// Least-squares solve of `â^d = Σ_{i<d} c_i â^i`, returned as the monic
/// polynomial in the unscaled variable.
fn krylov_relation(powers: &[ComplexMatrix], d: usize, scale: f64) -> Polynomial {
    let len = powers[0].as_slice().len();
    let lhs = DMatrix::from_fn(len, d, |i, j| powers[j].as_slice()[i]);
    let rhs = DVector::from_column_slice(powers[d].as_slice());
    let svd = lhs.svd(true, true);
    let c = svd
        .solve(&rhs, 1e-14)
        .expect("both singular vector sets requested");
    let mut coeffs = Vec::with_capacity(d + 1);
    for (i, ci) in c.iter().enumerate() {
        coeffs.push(-ci * scale.powi((d - i) as i32));
    }
    coeffs.push(ONE);
    Polynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(p: &Polynomial, expected: &[f64], eps: f64) -> bool {
        p.coeffs().len() == expected.len()
            && p.coeffs()
                .iter()
                .zip(expected)
                .all(|(a, b)| (a - c(*b)).norm() < eps)
    }

    #[test]
    fn minimal_polynomial_examples() {
        let tol = Tolerance::default();
        let p = minimal_polynomial(&ComplexMatrix::identity(3), &tol);
        assert!(close(&p, &[-1.0, 1.0], 1e-12), "{p:?}");

        let j = crate::linalg::standard_skew_form(1);
        let p = minimal_polynomial(&j, &tol);
        assert!(close(&p, &[1.0, 0.0, 1.0], 1e-12), "{p:?}");

        // (X − 1)(X − 2) = X² − 3X + 2
        let d = ComplexMatrix::from_diagonal(&[c(1.0), c(2.0), c(2.0)]);
        let p = minimal_polynomial(&d, &tol);
        assert!(close(&p, &[2.0, -3.0, 1.0], 1e-10), "{p:?}");
    }

    #[test]
    fn zero_and_nilpotent() {
        let tol = Tolerance::default();
        let p = minimal_polynomial(&ComplexMatrix::zeros(3), &tol);
        assert_eq!(p, Polynomial::x());
        let n = ComplexMatrix::unit(3, 0, 1);
        let p = minimal_polynomial(&n, &tol);
        assert!(close(&p, &[0.0, 0.0, 1.0], 1e-12), "{p:?}");
    }

    #[test]
    fn roots_of_known_polynomials() {
        let p = Polynomial::from_real(&[6.0, -5.0, 1.0]); // (X−2)(X−3)
        let mut r: Vec<f64> = p.roots().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] - 2.0).abs() < 1e-12 && (r[1] - 3.0).abs() < 1e-12);
        let q = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        for z in q.roots() {
            assert!((z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12);
        }
    }

    #[test]
    fn dilation_scales_roots() {
        let q = Polynomial::from_real(&[-1.0, 1.0]); // X − 1
        assert_eq!(q.dilate(c(2.0)), Polynomial::from_real(&[-2.0, 1.0]));
        let q = Polynomial::from_real(&[3.0, -4.0, 1.0]); // (X−1)(X−3)
        let d = q.dilate(c(2.0)); // (X−2)(X−6)
        assert!(close(&d, &[12.0, -8.0, 1.0], 1e-12));
    }

    #[test]
    fn resultant_detects_common_roots() {
        let p = Polynomial::from_real(&[2.0, -3.0, 1.0]);
        let q = Polynomial::from_real(&[3.0, -4.0, 1.0]);
        assert!(p.resultant(&q.dilate(c(2.0))).magnitude < 1e-10);
        // ∏ (ρ − 3σ) over ρ ∈ {1,2}, σ ∈ {1,3} = (−2)(−8)(−1)(−7) = 112
        let r = p.resultant(&q.dilate(c(3.0)));
        assert!((r.magnitude - 112.0).abs() < 1e-9, "{r:?}");
        assert!(r.normalized > 0.0 && r.normalized <= 1.0);
    }

    #[test]
    fn bezout_identity() {
        let tol = Tolerance::default();
        let p = Polynomial::from_real(&[-1.0, 1.0]);
        let q = Polynomial::from_real(&[-2.0, 1.0]);
        let (s, t) = p.bezout(&q, &tol).unwrap();
        assert!(close(&s, &[1.0], 1e-12) && close(&t, &[-1.0], 1e-12));
        let one = s.mul(&p).add(&t.mul(&q));
        assert!(close(&one, &[1.0], 1e-12));
        assert!(matches!(
            p.bezout(&p, &tol),
            Err(KernelError::NotCoprime(_))
        ));
    }
}
