//! Truncated bivariate Taylor series of the data rate.
//!
//! The rate `R(theta_rx, theta_tx)` is analytic, so around a chosen center
//! we can carry its Taylor data up to a total-degree cap `D` and do exact
//! arithmetic on these jets: sums, Cauchy products, and — because the
//! non-constant part of a jet is nilpotent — `exp` and `log1p` as *finite*
//! sums. Composing those pieces along the definition of `R` yields the
//! degree-`D` Taylor polynomial of the rate, whose partial derivatives feed
//! the truncation stage.
//!
//! Coefficients are stored densely over the triangular exponent set
//! `{(a, b) : a + b <= D}` in the canonical monomial order, which keeps the
//! Cauchy product simple and `O(1)`-indexed.

use std::cmp::Ordering;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{BeamAngles, ChannelMatrix, RateParams};
use crate::scalar::Scalar;

/// Which steering angle a series coefficient axis refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Rx,
    Tx,
}

/// Canonical monomial order: ascending total degree, ties broken by
/// ascending tx-exponent. With exponents written `(a, b)` for
/// `u^a * v^b` (u = rx offset, v = tx offset), the order starts
/// `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...`.
pub struct MonomialOrder;

impl MonomialOrder {
    /// Comparison consistent with the storage layout.
    pub fn cmp(lhs: (usize, usize), rhs: (usize, usize)) -> Ordering {
        (lhs.0 + lhs.1, lhs.1).cmp(&(rhs.0 + rhs.1, rhs.1))
    }

    /// Position of `(a, b)` in the canonical enumeration.
    pub fn rank(exponent: (usize, usize)) -> usize {
        let d = exponent.0 + exponent.1;
        d * (d + 1) / 2 + exponent.1
    }

    /// All exponent pairs with total degree `<= cap`, in canonical order.
    pub fn exponents(cap: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(Self::len(cap));
        for d in 0..=cap {
            for b in 0..=d {
                out.push((d - b, b));
            }
        }
        out
    }

    /// Number of monomials of total degree `<= cap`.
    pub fn len(cap: usize) -> usize {
        (cap + 1) * (cap + 2) / 2
    }
}

/// Bivariate Taylor polynomial of total degree `<= degree_cap`, in local
/// coordinates `(u, v) = (theta_rx, theta_tx) - center`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<T: Scalar> {
    degree_cap: usize,
    center: BeamAngles<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> TruncatedSeries<T> {
    /// The zero series.
    pub fn zeros(degree_cap: usize, center: BeamAngles<T>) -> Self {
        Self {
            degree_cap,
            center,
            coeffs: vec![Complex::new(T::zero(), T::zero()); MonomialOrder::len(degree_cap)],
        }
    }

    /// Constant series.
    pub fn constant(value: Complex<T>, degree_cap: usize, center: BeamAngles<T>) -> Self {
        let mut s = Self::zeros(degree_cap, center);
        s.coeffs[0] = value;
        s
    }

    /// Taylor series of `sin` along one variable around the center:
    /// `sin(c + u) = sum_m sin(c + m*pi/2) * u^m / m!`.
    pub fn sin_shifted(var: Variable, center: BeamAngles<T>, degree_cap: usize) -> Self {
        let c = match var {
            Variable::Rx => center.theta_rx,
            Variable::Tx => center.theta_tx,
        };
        // Derivative cycle sin -> cos -> -sin -> -cos.
        let cycle = [c.sin(), c.cos(), -c.sin(), -c.cos()];
        let mut s = Self::zeros(degree_cap, center);
        let mut inv_fact = T::one();
        for m in 0..=degree_cap {
            if m > 0 {
                inv_fact /= T::from_usize(m).unwrap();
            }
            let value = Complex::new(cycle[m % 4] * inv_fact, T::zero());
            match var {
                Variable::Rx => s.set_coeff(m, 0, value),
                Variable::Tx => s.set_coeff(0, m, value),
            }
        }
        s
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn center(&self) -> BeamAngles<T> {
        self.center
    }

    /// Coefficient of `u^a v^b`; zero beyond the cap.
    pub fn coeff(&self, a: usize, b: usize) -> Complex<T> {
        if a + b > self.degree_cap {
            Complex::new(T::zero(), T::zero())
        } else {
            self.coeffs[MonomialOrder::rank((a, b))]
        }
    }

    pub fn set_coeff(&mut self, a: usize, b: usize, value: Complex<T>) {
        assert!(
            a + b <= self.degree_cap,
            "exponent ({a},{b}) beyond cap {}",
            self.degree_cap
        );
        self.coeffs[MonomialOrder::rank((a, b))] = value;
    }

    /// Coefficients paired with exponents, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), Complex<T>)> + '_ {
        MonomialOrder::exponents(self.degree_cap)
            .into_iter()
            .zip(self.coeffs.iter().copied())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re == T::zero() && c.im == T::zero())
    }

    /// Largest coefficient magnitude.
    pub fn max_magnitude(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), |acc, m| if m > acc { m } else { acc })
    }

    /// Largest absolute imaginary part across coefficients.
    pub fn max_abs_imag(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.im.abs())
            .fold(T::zero(), |acc, m| if m > acc { m } else { acc })
    }

    fn check_compatible(&self, rhs: &Self, op: &str) -> Result<()> {
        if self.degree_cap != rhs.degree_cap {
            return Err(Error::Domain(format!(
                "{op}: degree caps differ ({} vs {})",
                self.degree_cap, rhs.degree_cap
            )));
        }
        if self.center != rhs.center {
            return Err(Error::Domain(format!("{op}: centers differ")));
        }
        Ok(())
    }

    /// Coefficient-wise sum; caps and centers must agree.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs, "series add")?;
        let mut out = self.clone();
        for (c, r) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *c += *r;
        }
        Ok(out)
    }

    /// Coefficient-wise difference.
    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs, "series sub")?;
        let mut out = self.clone();
        for (c, r) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *c -= *r;
        }
        Ok(out)
    }

    /// Scale every coefficient by a complex constant.
    pub fn scale(&self, k: Complex<T>) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= k;
        }
        out
    }

    /// Cauchy product truncated at the shared cap.
    ///
    /// Storage is ordered by ascending total degree, so the slots with total
    /// degree `<= d` are exactly the first `MonomialOrder::len(d)` entries;
    /// that prefix property bounds the inner loop without an explicit
    /// degree test.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs, "series mul")?;
        let cap = self.degree_cap;
        let exps = MonomialOrder::exponents(cap);
        let mut out = Self::zeros(cap, self.center);
        let zero = T::zero();
        for (i, &(a1, b1)) in exps.iter().enumerate() {
            let c1 = self.coeffs[i];
            if c1.re == zero && c1.im == zero {
                continue;
            }
            let budget = MonomialOrder::len(cap - (a1 + b1));
            for (j, &(a2, b2)) in exps.iter().take(budget).enumerate() {
                let c2 = rhs.coeffs[j];
                if c2.re == zero && c2.im == zero {
                    continue;
                }
                let k = MonomialOrder::rank((a1 + a2, b1 + b2));
                out.coeffs[k] += c1 * c2;
            }
        }
        Ok(out)
    }

    /// `exp` of a series with zero constant term: the argument is nilpotent
    /// in the truncated algebra, so `sum_k self^k / k!` terminates at
    /// `k = degree_cap`.
    pub fn exp(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.re != T::zero() || c0.im != T::zero() {
            return Err(Error::Domain(
                "series exp requires a zero constant term".into(),
            ));
        }
        let one = Complex::new(T::one(), T::zero());
        let mut result = Self::constant(one, self.degree_cap, self.center);
        let mut term = Self::constant(one, self.degree_cap, self.center);
        for k in 1..=self.degree_cap {
            term = term.mul(self)?;
            if term.is_zero() {
                break;
            }
            term = term.scale(Complex::new(
                T::one() / T::from_usize(k).unwrap(),
                T::zero(),
            ));
            result = result.add(&term)?;
        }
        Ok(result)
    }

    /// `log(1 + self)` for a series with zero constant term:
    /// `sum_k (-1)^{k+1} self^k / k`, again a finite sum.
    pub fn log1p(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.re != T::zero() || c0.im != T::zero() {
            return Err(Error::Domain(
                "series log1p requires a zero constant term".into(),
            ));
        }
        let mut result = Self::zeros(self.degree_cap, self.center);
        let mut power = Self::constant(
            Complex::new(T::one(), T::zero()),
            self.degree_cap,
            self.center,
        );
        let mut sign = T::one();
        for k in 1..=self.degree_cap {
            power = power.mul(self)?;
            if power.is_zero() {
                break;
            }
            result = result
                .add(&power.scale(Complex::new(sign / T::from_usize(k).unwrap(), T::zero())))?;
            sign = -sign;
        }
        Ok(result)
    }

    /// Formal partial derivative; the cap drops by one (a constant series
    /// keeps cap 0).
    pub fn partial(&self, var: Variable) -> Self {
        let new_cap = self.degree_cap.saturating_sub(1);
        let mut out = Self::zeros(new_cap, self.center);
        for (a, b) in MonomialOrder::exponents(new_cap) {
            let (src, factor) = match var {
                Variable::Rx => ((a + 1, b), a + 1),
                Variable::Tx => ((a, b + 1), b + 1),
            };
            let c = self.coeff(src.0, src.1);
            out.set_coeff(a, b, c.scale(T::from_usize(factor).unwrap()));
        }
        out
    }

    /// Restriction to a lower cap (drops high-degree terms).
    pub fn restricted(&self, new_cap: usize) -> Result<Self> {
        if new_cap > self.degree_cap {
            return Err(Error::Domain(format!(
                "cannot restrict cap {} to larger cap {new_cap}",
                self.degree_cap
            )));
        }
        let mut out = Self::zeros(new_cap, self.center);
        out.coeffs
            .copy_from_slice(&self.coeffs[..MonomialOrder::len(new_cap)]);
        Ok(out)
    }

    /// Coefficient-wise complex conjugate. Because the variables are real,
    /// this is the series of the conjugated function.
    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = c.conj();
        }
        out
    }

    /// Evaluate at complex local offsets.
    pub fn eval(&self, d_rx: Complex<T>, d_tx: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        let mut pow_rx = Vec::with_capacity(self.degree_cap + 1);
        let mut pow_tx = Vec::with_capacity(self.degree_cap + 1);
        pow_rx.push(one);
        pow_tx.push(one);
        for k in 1..=self.degree_cap {
            pow_rx.push(pow_rx[k - 1] * d_rx);
            pow_tx.push(pow_tx[k - 1] * d_tx);
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for ((a, b), c) in self.iter() {
            acc += c * pow_rx[a] * pow_tx[b];
        }
        acc
    }

    /// Evaluate at real local offsets.
    pub fn eval_real(&self, d_rx: T, d_tx: T) -> Complex<T> {
        self.eval(Complex::new(d_rx, T::zero()), Complex::new(d_tx, T::zero()))
    }

    /// CSV rows `deg_rx,deg_tx,coeff_real,coeff_imag`, degree-ordered.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("deg_rx,deg_tx,coeff_real,coeff_imag\n");
        for ((a, b), c) in self.iter() {
            out.push_str(&format!("{a},{b},{},{}\n", c.re, c.im));
        }
        out
    }
}

/// Degree-`cap` Taylor series of the data rate around `center`.
///
/// Follows the definition of `R`: per-antenna phase factors
/// `exp(±j*pi*k*sin(theta))` become `exp(constant) * exp(nilpotent)` jets,
/// the array gain `g` is their channel-weighted sum, and
/// `R = log2(1 + gain*|g|^2)` is split as
/// `ln(1 + gain*s0) + log1p(gain*(|g|^2 - s0)/(1 + gain*s0))` with `s0` the
/// constant term of `|g|^2`, so the `log1p` argument is nilpotent.
pub fn rate_series<T: Scalar>(
    h: &ChannelMatrix<T>,
    params: &RateParams<T>,
    center: BeamAngles<T>,
    degree_cap: usize,
) -> Result<TruncatedSeries<T>> {
    if degree_cap < 2 {
        return Err(Error::Domain(format!(
            "rate series needs degree_cap >= 2, got {degree_cap}"
        )));
    }
    if !center.theta_rx.is_finite() || !center.theta_tx.is_finite() {
        return Err(Error::Domain("expansion center must be finite".into()));
    }
    let pi = T::PI();
    let zero = T::zero();

    // Nilpotent sine jets: sin(c + u) - sin(c).
    let sin_rx = TruncatedSeries::sin_shifted(Variable::Rx, center, degree_cap);
    let sin_tx = TruncatedSeries::sin_shifted(Variable::Tx, center, degree_cap);
    let nil_rx = sin_rx.sub(&TruncatedSeries::constant(
        sin_rx.coeff(0, 0),
        degree_cap,
        center,
    ))?;
    let nil_tx = sin_tx.sub(&TruncatedSeries::constant(
        sin_tx.coeff(0, 0),
        degree_cap,
        center,
    ))?;
    let sin_c_rx = center.theta_rx.sin();
    let sin_c_tx = center.theta_tx.sin();

    // Per-antenna phase jets. Receive side enters conjugated:
    // conj(w_rx[k]) = exp(-j*pi*k*sin(theta_rx)) / sqrt(n_rx).
    let phase_jets = |nil: &TruncatedSeries<T>,
                      sin_c: T,
                      sign: T,
                      n: usize|
     -> Result<Vec<TruncatedSeries<T>>> {
        (0..n)
            .map(|k| {
                let w = Complex::new(zero, sign * pi * T::from_usize(k).unwrap());
                let constant = (w * Complex::new(sin_c, zero)).exp();
                Ok(nil.scale(w).exp()?.scale(constant))
            })
            .collect()
    };
    let rx_jets = phase_jets(&nil_rx, sin_c_rx, -T::one(), h.n_rx())?;
    let tx_jets = phase_jets(&nil_tx, sin_c_tx, T::one(), h.n_tx())?;

    // Array gain g = sum_{k,l} conj(w_rx[k]) H[k,l] w_tx[l].
    let mut g = TruncatedSeries::zeros(degree_cap, center);
    for (k, rx) in rx_jets.iter().enumerate() {
        for (l, tx) in tx_jets.iter().enumerate() {
            g = g.add(&rx.mul(tx)?.scale(h.entry(k, l)))?;
        }
    }
    let norm =
        T::one() / (T::from_usize(h.n_rx()).unwrap() * T::from_usize(h.n_tx()).unwrap()).sqrt();
    g = g.scale(Complex::new(norm, zero));

    // |g|^2 and the log split. |g|^2 is real-valued, so its coefficients'
    // imaginary parts are pure rounding noise; averaging with the conjugate
    // cancels them exactly and keeps the rest of the chain real.
    let gg = g.mul(&g.conjugate())?;
    let half = Complex::new(T::one() / (T::one() + T::one()), zero);
    let gg = gg.add(&gg.conjugate())?.scale(half);
    let s0 = gg.coeff(0, 0);
    let gain = params.gain();
    let denom = T::one() + gain * s0.re;
    let nil = gg
        .sub(&TruncatedSeries::constant(s0, degree_cap, center))?
        .scale(Complex::new(gain / denom, zero));
    let ln_r = nil.log1p()?.add(&TruncatedSeries::constant(
        Complex::new(denom.ln(), zero),
        degree_cap,
        center,
    ))?;
    Ok(ln_r.scale(Complex::new(T::one() / T::LN_2(), zero)))
}
