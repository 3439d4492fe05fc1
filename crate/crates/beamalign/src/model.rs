//! Channel model for a mmWave link with uniform linear arrays.
//!
//! Both ends steer analog beams with phase-shifter weights
//! `w[k] = exp(j*pi*k*sin(theta)) / sqrt(N)` (half-wavelength spacing), and
//! the link quality is the spectral efficiency
//! `R = log2(1 + gain * |w_rx^H H w_tx|^2)`. This module owns the channel
//! container, the direct rate evaluation, a finite-difference gradient used
//! as a reference, and the exhaustive beam-sweeping baseline.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A transmit/receive steering-angle pair, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamAngles<T> {
    pub theta_rx: T,
    pub theta_tx: T,
}

impl<T: Scalar> BeamAngles<T> {
    pub fn new(theta_rx: T, theta_tx: T) -> Self {
        Self { theta_rx, theta_tx }
    }
}

/// Link-budget constants `alpha1` (transmit power), `alpha2` (antenna gain
/// product) and `alpha3` (noise power). Only the ratio
/// `alpha1 * alpha2 / alpha3` enters the rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams<T> {
    alpha1: T,
    alpha2: T,
    alpha3: T,
}

impl<T: Scalar> RateParams<T> {
    /// All three constants must be finite and strictly positive.
    pub fn new(alpha1: T, alpha2: T, alpha3: T) -> Result<Self> {
        for (name, v) in [("alpha1", alpha1), ("alpha2", alpha2), ("alpha3", alpha3)] {
            if !v.is_finite() || v <= T::zero() {
                return Err(Error::Domain(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(Self {
            alpha1,
            alpha2,
            alpha3,
        })
    }

    /// Effective SNR scale `alpha1 * alpha2 / alpha3`.
    pub fn gain(&self) -> T {
        self.alpha1 * self.alpha2 / self.alpha3
    }
}

impl<T: Scalar> Default for RateParams<T> {
    /// Unit constants: the rate reduces to `log2(1 + |g|^2)`.
    fn default() -> Self {
        Self::new(T::one(), T::one(), T::one()).unwrap()
    }
}

/// Dense complex channel matrix, `n_rx` rows by `n_tx` columns, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix<T> {
    n_rx: usize,
    n_tx: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> ChannelMatrix<T> {
    /// Rayleigh-fading channel: entries i.i.d. `CN(0, 1)`, realized as
    /// `(n1 + j*n2) / sqrt(2)` with standard-normal draws from a ChaCha8
    /// stream seeded by `seed`, filled row-major. The draw happens in `f64`
    /// so the same seed yields the same channel in every instantiation.
    pub fn seeded(n_rx: usize, n_tx: usize, seed: u64) -> Result<Self> {
        if n_rx == 0 || n_tx == 0 {
            return Err(Error::Domain(format!(
                "channel dimensions must be positive, got {n_rx}x{n_tx}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let entries = (0..n_rx * n_tx)
            .map(|_| {
                let n1: f64 = rng.sample(StandardNormal);
                let n2: f64 = rng.sample(StandardNormal);
                Complex::new(
                    T::from_f64_lossy(n1 * inv_sqrt2),
                    T::from_f64_lossy(n2 * inv_sqrt2),
                )
            })
            .collect();
        Ok(Self {
            n_rx,
            n_tx,
            entries,
        })
    }

    /// Wraps explicit entries (row-major). Lengths must agree and every
    /// entry must be finite.
    pub fn from_entries(n_rx: usize, n_tx: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if n_rx == 0 || n_tx == 0 {
            return Err(Error::Domain(format!(
                "channel dimensions must be positive, got {n_rx}x{n_tx}"
            )));
        }
        if entries.len() != n_rx * n_tx {
            return Err(Error::Domain(format!(
                "expected {} entries for a {n_rx}x{n_tx} channel, got {}",
                n_rx * n_tx,
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::Domain("channel entries must be finite".into()));
        }
        Ok(Self {
            n_rx,
            n_tx,
            entries,
        })
    }

    /// All-zero channel (useful to exercise degenerate paths).
    pub fn zeros(n_rx: usize, n_tx: usize) -> Result<Self> {
        Self::from_entries(
            n_rx,
            n_tx,
            vec![Complex::new(T::zero(), T::zero()); n_rx * n_tx],
        )
    }

    /// Identity channel on `n` antennas.
    pub fn identity(n: usize) -> Result<Self> {
        let mut entries = vec![Complex::new(T::zero(), T::zero()); n * n];
        for k in 0..n {
            entries[k * n + k] = Complex::new(T::one(), T::zero());
        }
        Self::from_entries(n, n, entries)
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn entry(&self, k: usize, l: usize) -> Complex<T> {
        self.entries[k * self.n_tx + l]
    }
}

/// ULA steering vector `w[k] = exp(j*pi*k*sin(theta)) / sqrt(n)` for
/// `k = 0..n`.
pub fn steering_vector<T: Scalar>(theta: T, n: usize) -> Result<Vec<Complex<T>>> {
    if n == 0 {
        return Err(Error::Domain(
            "steering vector needs n >= 1 antennas".into(),
        ));
    }
    if !theta.is_finite() {
        return Err(Error::Domain(format!(
            "steering angle must be finite, got {theta}"
        )));
    }
    let scale = T::one() / T::from_usize(n).unwrap().sqrt();
    let phase = T::PI() * theta.sin();
    Ok((0..n)
        .map(|k| {
            let kp = T::from_usize(k).unwrap() * phase;
            Complex::new(scale * kp.cos(), scale * kp.sin())
        })
        .collect())
}

/// Inner product `sum_k conj(w_rx[k]) * sum_l H[k,l] * w_tx[l]`, shared by
/// the direct evaluation and the sweeping baseline so both produce
/// bit-identical rates for identical angles.
fn array_gain<T: Scalar>(
    h: &ChannelMatrix<T>,
    w_rx: &[Complex<T>],
    w_tx: &[Complex<T>],
) -> Complex<T> {
    let mut g = Complex::new(T::zero(), T::zero());
    for (k, wr) in w_rx.iter().enumerate() {
        let mut row = Complex::new(T::zero(), T::zero());
        for (l, wt) in w_tx.iter().enumerate() {
            row += h.entry(k, l) * *wt;
        }
        g += wr.conj() * row;
    }
    g
}

/// Rate for explicit beamforming vectors. Lengths must match the channel.
pub fn rate_from_vectors<T: Scalar>(
    h: &ChannelMatrix<T>,
    params: &RateParams<T>,
    w_rx: &[Complex<T>],
    w_tx: &[Complex<T>],
) -> Result<T> {
    if w_rx.len() != h.n_rx() || w_tx.len() != h.n_tx() {
        return Err(Error::Domain(format!(
            "beamformer lengths {}x{} do not match channel {}x{}",
            w_rx.len(),
            w_tx.len(),
            h.n_rx(),
            h.n_tx()
        )));
    }
    let g = array_gain(h, w_rx, w_tx);
    Ok((T::one() + params.gain() * g.norm_sqr()).log2())
}

/// Spectral efficiency `log2(1 + gain * |w_rx^H H w_tx|^2)` at a steering
/// pair. Always finite and nonnegative for finite inputs.
pub fn data_rate<T: Scalar>(h: &ChannelMatrix<T>, params: &RateParams<T>, at: BeamAngles<T>) -> T {
    let w_rx = steering_vector(at.theta_rx, h.n_rx()).expect("valid rx steering");
    let w_tx = steering_vector(at.theta_tx, h.n_tx()).expect("valid tx steering");
    rate_from_vectors(h, params, &w_rx, &w_tx).expect("dimensions match by construction")
}

/// Central-difference estimate of `(dR/dtheta_rx, dR/dtheta_tx)`.
/// `step` must be small and positive; `O(step^2)` accuracy.
pub fn rate_gradient_fd<T: Scalar>(
    h: &ChannelMatrix<T>,
    params: &RateParams<T>,
    at: BeamAngles<T>,
    step: T,
) -> (T, T) {
    debug_assert!(step > T::zero() && step.is_finite());
    let two_h = step + step;
    let d_rx = (data_rate(h, params, BeamAngles::new(at.theta_rx + step, at.theta_tx))
        - data_rate(h, params, BeamAngles::new(at.theta_rx - step, at.theta_tx)))
        / two_h;
    let d_tx = (data_rate(h, params, BeamAngles::new(at.theta_rx, at.theta_tx + step))
        - data_rate(h, params, BeamAngles::new(at.theta_rx, at.theta_tx - step)))
        / two_h;
    (d_rx, d_tx)
}

/// Exhaustive beam sweep over the uniform grid `theta_i = 2*pi*i / n_grid`,
/// `i = 0..n_grid`, on both ends. Returns the rate-maximizing pair; ties go
/// to the lexicographically smallest `(theta_rx, theta_tx)`.
pub fn exhaustive_search<T: Scalar>(
    h: &ChannelMatrix<T>,
    params: &RateParams<T>,
    n_grid: usize,
) -> Result<(BeamAngles<T>, T)> {
    if n_grid < 2 {
        return Err(Error::Domain(format!(
            "sweep grid needs at least 2 points per axis, got {n_grid}"
        )));
    }
    let step = (T::PI() + T::PI()) / T::from_usize(n_grid).unwrap();
    let angles: Vec<T> = (0..n_grid)
        .map(|i| T::from_usize(i).unwrap() * step)
        .collect();
    let rx_rows: Vec<Vec<Complex<T>>> = angles
        .iter()
        .map(|&a| steering_vector(a, h.n_rx()).expect("grid angle is finite"))
        .collect();
    let tx_rows: Vec<Vec<Complex<T>>> = angles
        .iter()
        .map(|&a| steering_vector(a, h.n_tx()).expect("grid angle is finite"))
        .collect();

    let mut best = BeamAngles::new(angles[0], angles[0]);
    let mut best_rate = T::neg_infinity();
    for (i, w_rx) in rx_rows.iter().enumerate() {
        for (j, w_tx) in tx_rows.iter().enumerate() {
            let r = rate_from_vectors(h, params, w_rx, w_tx)?;
            // Strict improvement keeps the first (lexicographically
            // smallest) maximizer.
            if r > best_rate {
                best_rate = r;
                best = BeamAngles::new(angles[i], angles[j]);
            }
        }
    }
    Ok((best, best_rate))
}
