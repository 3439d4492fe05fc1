//! All isolated common roots of the truncated system p1 = p2 = 0.
//!
//! The route is a hidden-variable resultant: treat the tx offset `y` as a
//! parameter, write both polynomials as univariate in the rx offset `x`,
//! and form the Sylvester matrix `S(y)`, a matrix polynomial whose
//! determinant vanishes exactly at the `y` coordinates of common roots.
//! `det S(y) = 0` is linearized into a generalized eigenvalue problem by
//! the block-companion construction; a shift-invert transform turns that
//! pencil into an ordinary eigenproblem (which also deflates infinite
//! eigenvalues: they map to zero and are discarded). Each `y` candidate
//! then yields `x` candidates two ways — from the monomial structure of the
//! near-null vector of `S(y0)`, and from the univariate slice `p(x, y0)` —
//! and every candidate is polished with damped Newton steps and kept only
//! if both residuals clear a relative tolerance — measured against the
//! polynomial's largest coefficient and against the backward-error scale at
//! the point, whichever is stricter.
//!
//! Threshold truncation routinely drops every low-order term, leaving both
//! polynomials divisible by a monomial `x^c y^d`. The coordinate lines that
//! monomial contributes are solution *components*, not isolated roots, and
//! the torus bound never counts them; the shared monomial content is
//! therefore divided out up front and the content-free system is solved.
//! Any remaining positive-dimensional solution set (a genuinely shared
//! curve component) makes the resultant vanish identically; that is
//! detected and reported as an error rather than a root list.

use nalgebra::{DMatrix, DVector, RealField, Schur, SVD};
use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::model::BeamAngles;
use crate::scalar::Scalar;
use crate::truncate::SparsePolynomial;

/// Tolerances and iteration budget for `solve_system`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<T> {
    /// Residual acceptance threshold. A candidate passes when each residual
    /// is below this factor times the polynomial's largest coefficient
    /// magnitude and times the backward-error scale at the point (the sum of
    /// absolute monomial values there, floored at epsilon times the largest
    /// coefficient), whichever is smaller.
    pub residual_tol: T,
    /// Euclidean distance in C^2 under which two roots count as duplicates.
    pub cluster_tol: T,
    /// Damped Newton iterations per candidate.
    pub newton_iters: usize,
    /// Threshold below which a local coordinate counts as zero (torus
    /// membership reporting).
    pub zero_coord_tol: T,
}

impl<T: Scalar> Default for SolveOptions<T> {
    fn default() -> Self {
        Self {
            residual_tol: T::exp10(-8),
            cluster_tol: T::exp10(-7),
            newton_iters: 10,
            zero_coord_tol: T::exp10(-9),
        }
    }
}

/// One common root in global coordinates, with per-polynomial residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub theta_rx: Complex<T>,
    pub theta_tx: Complex<T>,
    pub residual_p1: T,
    pub residual_p2: T,
}

/// Solver output: deduplicated roots sorted by `(Re theta_tx, Re theta_rx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet<T> {
    pub roots: Vec<Root<T>>,
    center: BeamAngles<T>,
}

impl<T: Scalar> RootSet<T> {
    pub fn new(roots: Vec<Root<T>>, center: BeamAngles<T>) -> Self {
        Self { roots, center }
    }

    pub fn center(&self) -> BeamAngles<T> {
        self.center
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Roots with both local coordinates away from zero — the ones the
    /// Bernstein–Kushnirenko torus bound counts.
    pub fn torus_root_count(&self, tol: T) -> usize {
        self.roots
            .iter()
            .filter(|r| {
                let u = r.theta_rx - Complex::new(self.center.theta_rx, T::zero());
                let v = r.theta_tx - Complex::new(self.center.theta_tx, T::zero());
                u.norm() > tol && v.norm() > tol
            })
            .count()
    }

    /// Complement of `torus_root_count`: roots with a zero local
    /// coordinate, reported separately from the torus bound.
    pub fn zero_local_coordinate_count(&self, tol: T) -> usize {
        self.len() - self.torus_root_count(tol)
    }
}

/// What `newton_polish` did with its iteration budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolishOutcome {
    /// Residual reached the noise floor or the budget ran out while still
    /// making progress.
    Converged,
    /// No damped step could reduce the residual.
    Stalled,
    /// The Jacobian became numerically singular; best-so-far returned.
    SingularJacobian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolishResult<T> {
    pub point: (Complex<T>, Complex<T>),
    pub residual: T,
    pub outcome: PolishOutcome,
}

fn c_zero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Polished candidate in local coordinates with its two residuals.
type Scored<T> = ((Complex<T>, Complex<T>), T, T);

/// Joint residual magnitude `sqrt(|p1|^2 + |p2|^2)` at a point.
fn joint_residual<T: Scalar>(
    p1: &SparsePolynomial<T>,
    p2: &SparsePolynomial<T>,
    pt: (Complex<T>, Complex<T>),
) -> T {
    let r1 = p1.eval(pt.0, pt.1).norm_sqr();
    let r2 = p2.eval(pt.0, pt.1).norm_sqr();
    Float::sqrt(r1 + r2)
}

/// Damped Newton refinement on the 2x2 system. The returned point never has
/// a larger joint residual than the start; if no step helps, the input
/// comes back unchanged.
pub fn newton_polish<T: Scalar>(
    p1: &SparsePolynomial<T>,
    p2: &SparsePolynomial<T>,
    start: (Complex<T>, Complex<T>),
    max_iter: usize,
) -> PolishResult<T> {
    debug_assert!(max_iter >= 1);
    let d1x = p1.partial(crate::series::Variable::Rx);
    let d1y = p1.partial(crate::series::Variable::Tx);
    let d2x = p2.partial(crate::series::Variable::Rx);
    let d2y = p2.partial(crate::series::Variable::Tx);

    let mut best = start;
    let mut best_res = joint_residual(p1, p2, start);
    let mut cur = start;
    let mut cur_res = best_res;
    let mut outcome = PolishOutcome::Converged;

    for _ in 0..max_iter.max(1) {
        // Noise floor of the evaluation at the current point: iterating
        // below it only chases rounding error.
        let floor =
            (pointwise_scale(p1, cur.0, cur.1) + pointwise_scale(p2, cur.0, cur.1)) * T::epsilon();
        if cur_res <= floor {
            break;
        }
        let f1 = p1.eval(cur.0, cur.1);
        let f2 = p2.eval(cur.0, cur.1);
        let a = d1x.eval(cur.0, cur.1);
        let b = d1y.eval(cur.0, cur.1);
        let c = d2x.eval(cur.0, cur.1);
        let d = d2y.eval(cur.0, cur.1);
        let det = a * d - b * c;
        let det_scale = a.norm() * d.norm() + b.norm() * c.norm();
        if det.norm() <= det_scale * T::epsilon() * T::from_f64_lossy(8.0) || det_scale == T::zero()
        {
            outcome = PolishOutcome::SingularJacobian;
            break;
        }
        // Cramer solve of J * delta = f.
        let dx = (f1 * d - b * f2) / det;
        let dy = (a * f2 - f1 * c) / det;

        let mut damping = T::one();
        let mut accepted = false;
        for _ in 0..8 {
            let lam = Complex::new(damping, T::zero());
            let trial = (cur.0 - dx * lam, cur.1 - dy * lam);
            let trial_res = joint_residual(p1, p2, trial);
            if trial_res < cur_res {
                cur = trial;
                cur_res = trial_res;
                accepted = true;
                break;
            }
            damping /= T::one() + T::one();
        }
        if !accepted {
            outcome = PolishOutcome::Stalled;
            break;
        }
        if cur_res < best_res {
            best = cur;
            best_res = cur_res;
        }
    }
    PolishResult {
        point: best,
        residual: best_res,
        outcome,
    }
}

/// Keeps near-real roots inside a closed box, returning their real parts.
pub fn filter_real_domain<T: Scalar>(
    rs: &RootSet<T>,
    imag_tol: T,
    domain: (BeamAngles<T>, BeamAngles<T>),
) -> Vec<BeamAngles<T>> {
    debug_assert!(imag_tol > T::zero());
    let (lo, hi) = domain;
    rs.roots
        .iter()
        .filter(|r| Float::abs(r.theta_rx.im) <= imag_tol && Float::abs(r.theta_tx.im) <= imag_tol)
        .map(|r| BeamAngles::new(r.theta_rx.re, r.theta_tx.re))
        .filter(|a| {
            a.theta_rx >= lo.theta_rx
                && a.theta_rx <= hi.theta_rx
                && a.theta_tx >= lo.theta_tx
                && a.theta_tx <= hi.theta_tx
        })
        .collect()
}

/// Divides out the monomial content `x^c y^d` shared by *both*
/// polynomials. Only the shared content carries common coordinate-line
/// components; per-polynomial content must stay (its axis intersections
/// with the other polynomial are honest isolated roots).
fn strip_common_content<T: Scalar>(
    p1: &SparsePolynomial<T>,
    p2: &SparsePolynomial<T>,
) -> (SparsePolynomial<T>, SparsePolynomial<T>) {
    let min_exp = |p: &SparsePolynomial<T>| {
        p.terms()
            .iter()
            .fold((usize::MAX, usize::MAX), |(a0, b0), &((a, b), _)| {
                (a0.min(a), b0.min(b))
            })
    };
    let (a1, b1) = min_exp(p1);
    let (a2, b2) = min_exp(p2);
    let c = a1.min(a2);
    let d = b1.min(b2);
    if c == 0 && d == 0 {
        return (p1.clone(), p2.clone());
    }
    let divide = |p: &SparsePolynomial<T>| {
        let terms: Vec<((usize, usize), T)> = p
            .terms()
            .iter()
            .map(|&((a, b), v)| ((a - c, b - d), v))
            .collect();
        SparsePolynomial::new(terms, p.center()).expect("monomial division keeps terms valid")
    };
    (divide(p1), divide(p2))
}

/// Coefficient magnitude bound of `p` at `(x, y)`: largest coefficient
/// times the monomial growth. Used to make vanishing tests relative.
fn eval_scale<T: Scalar>(p: &SparsePolynomial<T>, x_mag: T, y_mag: T) -> T {
    let gx = Float::powi(Float::max(T::one(), x_mag), p.deg_rx() as i32);
    let gy = Float::powi(Float::max(T::one(), y_mag), p.deg_tx() as i32);
    p.max_coeff_magnitude() * gx * gy
}

/// Backward-error scale of one evaluation: the sum of absolute monomial
/// values at the point. A residual at or below `tol` times this is
/// indistinguishable from an exact zero under `tol`-sized coefficient
/// perturbations.
fn pointwise_scale<T: Scalar>(p: &SparsePolynomial<T>, u: Complex<T>, v: Complex<T>) -> T {
    let (um, vm) = (u.norm(), v.norm());
    p.terms()
        .iter()
        .map(|&((a, b), c)| Float::abs(c) * Float::powi(um, a as i32) * Float::powi(vm, b as i32))
        .sum()
}

/// Dense coefficient table `t[j][d]` = coefficient of `x^j y^d`.
fn coeff_table<T: Scalar>(p: &SparsePolynomial<T>) -> Vec<Vec<T>> {
    let mut t = vec![vec![T::zero(); p.deg_tx() + 1]; p.deg_rx() + 1];
    for &((a, b), c) in p.terms() {
        t[a][b] = c;
    }
    t
}

/// Coefficients of the univariate slice `p(x, y0)` in ascending powers of
/// `x`.
fn x_slice<T: Scalar>(p: &SparsePolynomial<T>, y0: Complex<T>) -> Vec<Complex<T>> {
    let mut pow = Vec::with_capacity(p.deg_tx() + 1);
    pow.push(Complex::new(T::one(), T::zero()));
    for d in 1..=p.deg_tx() {
        let prev = pow[d - 1];
        pow.push(prev * y0);
    }
    let mut cs = vec![c_zero::<T>(); p.deg_rx() + 1];
    for &((a, b), c) in p.terms() {
        cs[a] += pow[b].scale(c);
    }
    cs
}

/// Coefficients of the univariate slice `p(x0, y)` in ascending powers of
/// `y`.
fn y_slice<T: Scalar>(p: &SparsePolynomial<T>, x0: Complex<T>) -> Vec<Complex<T>> {
    let mut pow = Vec::with_capacity(p.deg_rx() + 1);
    pow.push(Complex::new(T::one(), T::zero()));
    for d in 1..=p.deg_rx() {
        let prev = pow[d - 1];
        pow.push(prev * x0);
    }
    let mut cs = vec![c_zero::<T>(); p.deg_tx() + 1];
    for &((a, b), c) in p.terms() {
        cs[b] += pow[a].scale(c);
    }
    cs
}

/// Roots of a dense univariate polynomial given in ascending coefficient
/// order, via the eigenvalues of its companion matrix. Near-zero leading
/// coefficients are trimmed (their roots lie at infinity).
fn companion_roots<T: Scalar + RealField>(cs: &[Complex<T>]) -> Vec<Complex<T>> {
    let max_mag = cs.iter().map(|c| c.norm()).fold(T::zero(), Float::max);
    if max_mag == T::zero() {
        return Vec::new();
    }
    let trim = max_mag * T::exp10(-12);
    let mut deg = cs.len() - 1;
    while deg > 0 && cs[deg].norm() <= trim {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    let lead = cs[deg];
    let mut comp = DMatrix::<Complex<T>>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = Complex::new(T::one(), T::zero());
    }
    for (i, c) in cs.iter().take(deg).enumerate() {
        comp[(i, deg - 1)] = -*c / lead;
    }
    let eps = Float::max(T::epsilon(), T::exp10(-13));
    match Schur::try_new(comp, eps, 100_000) {
        Some(schur) => schur
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .unwrap_or_default(),
        None => Vec::new(),
    }
}

/// True when the horizontal line `y = y0` lies in the zero set of both
/// polynomials (sampled at generic x values, relative tolerance).
fn line_is_common<T: Scalar>(
    p1: &SparsePolynomial<T>,
    p2: &SparsePolynomial<T>,
    y0: Complex<T>,
) -> bool {
    let samples = [
        Complex::new(T::from_f64_lossy(0.83), T::from_f64_lossy(0.19)),
        Complex::new(T::from_f64_lossy(-1.7), T::from_f64_lossy(0.41)),
        Complex::new(T::from_f64_lossy(2.23), T::from_f64_lossy(-0.57)),
    ];
    let tol = T::exp10(-9);
    samples.iter().all(|&x| {
        let s1 = eval_scale(p1, x.norm(), y0.norm());
        let s2 = eval_scale(p2, x.norm(), y0.norm());
        p1.eval(x, y0).norm() <= tol * s1 && p2.eval(x, y0).norm() <= tol * s2
    })
}

/// Sylvester coefficient matrices together with the `y` candidates they
/// produced.
type PencilCandidates<T> = (Vec<DMatrix<T>>, Vec<Complex<T>>);

/// `y` candidates from the linearized Sylvester pencil, via shift-invert
/// and a dense Schur decomposition.
fn pencil_y_candidates<T: Scalar + RealField>(
    p1: &SparsePolynomial<T>,
    p2: &SparsePolynomial<T>,
    m1: usize,
    m2: usize,
    dy: usize,
) -> Result<PencilCandidates<T>> {
    let k = m1 + m2;
    let t1 = coeff_table(p1);
    let t2 = coeff_table(p2);

    // Sylvester blocks S(y) = sum_d s_mats[d] y^d. Columns carry descending
    // x powers, so a right null vector has the monomial layout
    // [x^{K-1}, ..., x, 1].
    let mut s_mats = vec![DMatrix::<T>::zeros(k, k); dy + 1];
    for r in 0..m2 {
        for j in 0..=m1 {
            for (d, row) in s_mats.iter_mut().enumerate() {
                if d < t1[m1 - j].len() {
                    row[(r, r + j)] = t1[m1 - j][d];
                }
            }
        }
    }
    for r in 0..m1 {
        for j in 0..=m2 {
            for (d, row) in s_mats.iter_mut().enumerate() {
                if d < t2[m2 - j].len() {
                    row[(m2 + r, r + j)] = t2[m2 - j][d];
                }
            }
        }
    }

    // Row-only scaling to unit max magnitude: truncated Taylor coefficients
    // span many orders, and scaling rows (unlike columns) leaves the right
    // kernel's monomial structure intact.
    for row in 0..k {
        let mut max = T::zero();
        for mat in &s_mats {
            for col in 0..k {
                max = Float::max(max, Float::abs(mat[(row, col)]));
            }
        }
        if max > T::zero() {
            let inv = T::one() / max;
            for mat in &mut s_mats {
                for col in 0..k {
                    mat[(row, col)] *= inv;
                }
            }
        }
    }

    // Block-companion pencil: det(A - y B) = +/- det S(y).
    let n = k * dy;
    let mut a = DMatrix::<T>::zeros(n, n);
    let mut b = DMatrix::<T>::identity(n, n);
    for blk in 0..dy.saturating_sub(1) {
        for i in 0..k {
            a[(blk * k + i, (blk + 1) * k + i)] = T::one();
        }
    }
    for (blk, mat) in s_mats.iter().take(dy).enumerate() {
        for r in 0..k {
            for c in 0..k {
                a[((dy - 1) * k + r, blk * k + c)] = -mat[(r, c)];
            }
        }
    }
    for r in 0..k {
        for c in 0..k {
            b[((dy - 1) * k + r, (dy - 1) * k + c)] = s_mats[dy][(r, c)];
        }
    }

    // A shared polynomial factor makes det S(y) vanish identically, and in
    // floating point such a pencil can still slip past the LU pivot test
    // and emit garbage eigenvalues. Probe the rank of S(y) at generic
    // complex points first: rank-deficient everywhere means a
    // positive-dimensional component.
    let probes = [
        Complex::new(T::from_f64_lossy(0.37), T::from_f64_lossy(0.21)),
        Complex::new(T::from_f64_lossy(-1.3), T::from_f64_lossy(0.7)),
        Complex::new(T::from_f64_lossy(2.9), T::from_f64_lossy(-1.1)),
    ];
    let eps = Float::max(T::epsilon(), T::exp10(-13));
    let deficient_everywhere = probes.iter().all(|&y| {
        let s = assemble_complex(&s_mats, y);
        match SVD::try_new(s, false, false, eps, 100_000) {
            Some(svd) => {
                let sv = svd.singular_values;
                let hi = sv.iter().copied().fold(T::zero(), Float::max);
                let lo = sv.iter().copied().fold(T::infinity(), Float::min);
                lo <= hi * T::exp10(-12)
            }
            None => false,
        }
    });
    if deficient_everywhere {
        return Err(Error::NonIsolatedRoots);
    }

    // Shift-invert: eigenvalues theta of (A - mu B)^{-1} B give
    // y = mu + 1/theta; theta near zero corresponds to infinite y
    // (including the pencil's infinite eigenvalues) and is discarded.
    let shifts = [
        0.618_033_988_75,
        -1.2207,
        2.5129,
        -0.3456,
        5.0111,
        -7.3,
        0.1234,
        11.7,
    ];
    let theta_cut = T::exp10(-8);
    let y_cap = T::exp10(9);
    for &mu in &shifts {
        let mu_t = T::from_f64_lossy(mu);
        let m = &a - &(&b * mu_t);
        let lu = m.lu();
        if !lu.is_invertible() {
            continue;
        }
        let Some(t) = lu.solve(&b) else { continue };
        let Some(schur) = Schur::try_new(t, eps, 100_000) else {
            continue;
        };
        let mut ys = Vec::new();
        for theta in schur.complex_eigenvalues().iter() {
            if theta.norm() <= theta_cut {
                continue;
            }
            let y = Complex::new(mu_t, T::zero()) + Complex::new(T::one(), T::zero()) / theta;
            if y.norm() <= y_cap {
                ys.push(y);
            }
        }
        return Ok((s_mats, ys));
    }

    // The rank probe above ruled out an identically vanishing resultant,
    // so a shift-invert failure at every mu is a numerical dead end.
    Err(Error::DegenerateSystem(
        "linearization pencil singular for every trial shift".into(),
    ))
}

/// Evaluate the matrix polynomial at a complex point.
fn assemble_complex<T: Scalar + RealField>(
    s_mats: &[DMatrix<T>],
    y: Complex<T>,
) -> DMatrix<Complex<T>> {
    let k = s_mats[0].nrows();
    let mut out = DMatrix::<Complex<T>>::zeros(k, k);
    let mut pow = Complex::new(T::one(), T::zero());
    for mat in s_mats {
        for r in 0..k {
            for c in 0..k {
                out[(r, c)] += pow.scale(mat[(r, c)]);
            }
        }
        pow *= y;
    }
    out
}

/// `x` candidate from the near-null vector of `S(y0)`: three regularized
/// inverse-iteration steps, then the least-squares ratio of consecutive
/// entries of the monomial vector.
fn null_vector_ratio<T: Scalar + RealField>(
    s_mats: &[DMatrix<T>],
    y0: Complex<T>,
) -> Option<Complex<T>> {
    let k = s_mats[0].nrows();
    if k < 2 {
        return None;
    }
    let s = assemble_complex(s_mats, y0);
    let scale = s.iter().map(|c| c.norm()).fold(T::zero(), Float::max);
    if scale == T::zero() {
        return None;
    }
    let mut m = s;
    let reg = scale * T::exp10(-13);
    for i in 0..k {
        m[(i, i)] += Complex::new(reg, T::zero());
    }
    let lu = m.lu();
    if !lu.is_invertible() {
        return None;
    }
    let mut v = DVector::<Complex<T>>::from_element(k, Complex::new(T::one(), T::zero()));
    for _ in 0..3 {
        v = lu.solve(&v)?;
        let nrm = v.norm();
        if nrm <= T::zero() || !nrm.is_finite() {
            return None;
        }
        v = v.unscale(nrm);
    }
    let mut num = c_zero::<T>();
    let mut den = T::zero();
    for i in 0..k - 1 {
        num += v[i] * v[i + 1].conj();
        den += v[i + 1].norm_sqr();
    }
    if den > T::zero() {
        Some(num.unscale(den))
    } else {
        None
    }
}

/// All isolated common roots of `p1 = p2 = 0`, polished and filtered.
/// Shared monomial content is divided out first, so coordinate-line
/// components created by truncation are dropped rather than reported;
/// residuals refer to the content-free system actually solved.
pub fn solve_system<T: Scalar + RealField>(
    p1: &SparsePolynomial<T>,
    p2: &SparsePolynomial<T>,
    opts: &SolveOptions<T>,
) -> Result<RootSet<T>> {
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::Domain(
            "cannot solve a system containing the zero polynomial".into(),
        ));
    }
    if p1.center() != p2.center() {
        return Err(Error::Domain(
            "system polynomials expanded around different centers".into(),
        ));
    }
    if !(opts.residual_tol > T::zero() && opts.cluster_tol > T::zero()) {
        return Err(Error::Domain("solver tolerances must be positive".into()));
    }
    let (p1s, p2s) = strip_common_content(p1, p2);
    let (p1, p2) = (&p1s, &p2s);
    let m1 = p1.deg_rx();
    let m2 = p2.deg_rx();
    let dy = p1.deg_tx().max(p2.deg_tx());
    let center = p1.center();

    let mut candidates: Vec<(Complex<T>, Complex<T>)> = Vec::new();

    if m1 == 0 && m2 == 0 {
        // Neither depends on x: any common y is a whole horizontal line.
        let ys = companion_roots(&y_slice(p1, c_zero()));
        for y0 in ys {
            let other = p2.eval(c_zero(), y0).norm();
            if other <= T::exp10(-9) * eval_scale(p2, T::zero(), y0.norm()) {
                return Err(Error::NonIsolatedRoots);
            }
        }
        return Ok(RootSet::new(Vec::new(), center));
    }
    if dy == 0 {
        // Neither depends on y: any common x is a vertical line.
        let xs = companion_roots(&x_slice(p1, c_zero()));
        for x0 in xs {
            let other = p2.eval(x0, c_zero()).norm();
            if other <= T::exp10(-9) * eval_scale(p2, x0.norm(), T::zero()) {
                return Err(Error::NonIsolatedRoots);
            }
        }
        return Ok(RootSet::new(Vec::new(), center));
    }

    if m1 == 0 || m2 == 0 {
        // Exactly one polynomial is x-free: its y roots select horizontal
        // lines, on which the other polynomial turns univariate.
        let (q, r) = if m1 == 0 { (p1, p2) } else { (p2, p1) };
        for y0 in companion_roots(&y_slice(q, c_zero())) {
            let cs = x_slice(r, y0);
            let slice_scale = cs.iter().map(|c| c.norm()).fold(T::zero(), Float::max);
            if slice_scale <= T::exp10(-10) * eval_scale(r, T::one(), y0.norm()) {
                if line_is_common(p1, p2, y0) {
                    return Err(Error::NonIsolatedRoots);
                }
                continue;
            }
            for x0 in companion_roots(&cs) {
                candidates.push((x0, y0));
            }
        }
    } else {
        let (s_mats, ys) = pencil_y_candidates(p1, p2, m1, m2, dy)?;
        for y0 in ys {
            if let Some(x0) = null_vector_ratio(&s_mats, y0) {
                candidates.push((x0, y0));
            }
            let mut sliced = false;
            for p in [p1, p2] {
                let cs = x_slice(p, y0);
                let slice_scale = cs.iter().map(|c| c.norm()).fold(T::zero(), Float::max);
                if slice_scale <= T::exp10(-10) * eval_scale(p, T::one(), y0.norm()) {
                    continue;
                }
                for x0 in companion_roots(&cs) {
                    candidates.push((x0, y0));
                }
                sliced = true;
                break;
            }
            if !sliced && line_is_common(p1, p2, y0) {
                return Err(Error::NonIsolatedRoots);
            }
        }
    }

    // Polish, filter by relative residual, deduplicate, sort, shift.
    //
    // Acceptance is the tighter of two relative gates: residual against the
    // largest coefficient magnitude, and residual against the backward-error
    // scale at the point itself. On systems whose monomials are all tiny near
    // the candidate, the first gate alone would wave through plateau points
    // that merely have a small function value; a genuine root also clears the
    // pointwise gate because Newton drives it to the evaluation noise floor.
    // The pointwise scale is floored at epsilon times the largest
    // coefficient: at a root near the local origin every monomial collapses,
    // and a residual below that floor is as zero as the arithmetic can say.
    let scale1 = p1.max_coeff_magnitude();
    let scale2 = p2.max_coeff_magnitude();
    let mut polished: Vec<Scored<T>> = Vec::new();
    for cand in candidates {
        let pr = newton_polish(p1, p2, cand, opts.newton_iters);
        let r1 = p1.eval(pr.point.0, pr.point.1).norm();
        let r2 = p2.eval(pr.point.0, pr.point.1).norm();
        let pw1 = Float::max(
            pointwise_scale(p1, pr.point.0, pr.point.1),
            scale1 * T::epsilon(),
        );
        let pw2 = Float::max(
            pointwise_scale(p2, pr.point.0, pr.point.1),
            scale2 * T::epsilon(),
        );
        let gate1 = Float::min(scale1, pw1);
        let gate2 = Float::min(scale2, pw2);
        if r1 <= opts.residual_tol * gate1 && r2 <= opts.residual_tol * gate2 {
            polished.push((pr.point, r1, r2));
        }
    }

    // Deterministic clustering: best residual first claims its cluster.
    // Besides plain distance, two nearby candidates merge when the point
    // halfway between them is as good a root as the worse of the two — a
    // root of multiplicity m under coefficient noise of size `residual_tol`
    // smears into a cloud of radius about `residual_tol^(1/m)` whose interior
    // sits at the same noise floor as its members, whereas between genuinely
    // distinct roots the residual climbs orders of magnitude above what
    // Newton achieved at the endpoints. The sqrt radius covers double roots;
    // beyond it two candidates are taken at face value, which keeps a far
    // pair straddling an unrelated third root from collapsing into it.
    let key = |e: &Scored<T>| (e.1 + e.2, (e.0 .1.re, e.0 .1.im), (e.0 .0.re, e.0 .0.im));
    polished.sort_by(|x, y| {
        key(x)
            .partial_cmp(&key(y))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let half = Complex::new(T::one() / (T::one() + T::one()), T::zero());
    let slack = T::from_f64_lossy(16.0);
    let cloud_radius = Float::sqrt(opts.residual_tol);
    let mut reps: Vec<Scored<T>> = Vec::new();
    for cand in polished {
        let dup = reps.iter().any(|r| {
            let dx = r.0 .0 - cand.0 .0;
            let dyv = r.0 .1 - cand.0 .1;
            let dist = Float::sqrt(dx.norm_sqr() + dyv.norm_sqr());
            if dist <= opts.cluster_tol {
                return true;
            }
            if dist > cloud_radius {
                return false;
            }
            let mid = ((r.0 .0 + cand.0 .0) * half, (r.0 .1 + cand.0 .1) * half);
            p1.eval(mid.0, mid.1).norm() <= slack * Float::max(r.1, cand.1)
                && p2.eval(mid.0, mid.1).norm() <= slack * Float::max(r.2, cand.2)
        });
        if !dup {
            reps.push(cand);
        }
    }
    reps.sort_by(|x, y| {
        let kx = (x.0 .1.re, x.0 .0.re, x.0 .1.im, x.0 .0.im);
        let ky = (y.0 .1.re, y.0 .0.re, y.0 .1.im, y.0 .0.im);
        kx.partial_cmp(&ky).unwrap_or(std::cmp::Ordering::Equal)
    });

    let roots = reps
        .into_iter()
        .map(|(pt, r1, r2)| Root {
            theta_rx: pt.0 + Complex::new(center.theta_rx, T::zero()),
            theta_tx: pt.1 + Complex::new(center.theta_tx, T::zero()),
            residual_p1: r1,
            residual_p2: r2,
        })
        .collect();
    Ok(RootSet::new(roots, center))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C64 = Complex<f64>;

    fn center_zero() -> BeamAngles<f64> {
        BeamAngles::new(0.0, 0.0)
    }

    fn poly(terms: &[((usize, usize), f64)]) -> SparsePolynomial<f64> {
        SparsePolynomial::new(terms.to_vec(), center_zero()).unwrap()
    }

    fn real_root_pairs(rs: &RootSet<f64>) -> Vec<(f64, f64)> {
        rs.roots
            .iter()
            .map(|r| (r.theta_rx.re, r.theta_tx.re))
            .collect()
    }

    /// Expand prod_j (x - r_j) * prod_k (y - s_k) into a term list.
    fn grid_product(rs: &[f64], ss: &[f64]) -> SparsePolynomial<f64> {
        let expand = |roots: &[f64]| -> Vec<f64> {
            let mut cs = vec![1.0];
            for &r in roots {
                let mut next = vec![0.0; cs.len() + 1];
                for (i, &c) in cs.iter().enumerate() {
                    next[i] -= r * c;
                    next[i + 1] += c;
                }
                cs = next;
            }
            cs
        };
        let cx = expand(rs);
        let cy = expand(ss);
        let mut terms = Vec::new();
        for (a, &ca) in cx.iter().enumerate() {
            for (b, &cb) in cy.iter().enumerate() {
                let c = ca * cb;
                if c != 0.0 {
                    terms.push(((a, b), c));
                }
            }
        }
        poly(&terms)
    }

    #[test]
    fn test_01_parabola_and_line() {
        // x^2 - 1 = 0, y - x = 0 -> (1,1), (-1,-1).
        let p1 = poly(&[((2, 0), 1.0), ((0, 0), -1.0)]);
        let p2 = poly(&[((0, 1), 1.0), ((1, 0), -1.0)]);
        let rs = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
        let got = real_root_pairs(&rs);
        assert_eq!(got.len(), 2);
        assert!((got[0].0 + 1.0).abs() < 1e-10 && (got[0].1 + 1.0).abs() < 1e-10);
        assert!((got[1].0 - 1.0).abs() < 1e-10 && (got[1].1 - 1.0).abs() < 1e-10);
        for r in &rs.roots {
            assert!(r.theta_rx.im.abs() < 1e-10 && r.theta_tx.im.abs() < 1e-10);
        }
    }

    #[test]
    fn test_02_circle_and_diagonal() {
        // x^2 + y^2 - 1 = 0, x - y = 0 -> (+-1/sqrt(2), +-1/sqrt(2)).
        let p1 = poly(&[((2, 0), 1.0), ((0, 2), 1.0), ((0, 0), -1.0)]);
        let p2 = poly(&[((1, 0), 1.0), ((0, 1), -1.0)]);
        let rs = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
        let got = real_root_pairs(&rs);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(got.len(), 2);
        assert!((got[0].0 + s).abs() < 1e-10 && (got[0].1 + s).abs() < 1e-10);
        assert!((got[1].0 - s).abs() < 1e-10 && (got[1].1 - s).abs() < 1e-10);
    }

    #[test]
    fn test_03_root_set_is_sorted_and_residual_bounded() {
        let p1 = grid_product(&[-0.8, 0.3, 1.1], &[0.5]);
        let p2 = grid_product(&[0.9], &[-0.4, 0.7]);
        let opts = SolveOptions::default();
        let rs = solve_system(&p1, &p2, &opts).unwrap();
        // Count: 3 vertical lines x cross 2 horizontal -> 6, plus 1x1 -> 1.
        assert_eq!(rs.len(), 7);
        let s1 = p1.max_coeff_magnitude();
        let s2 = p2.max_coeff_magnitude();
        for w in rs.roots.windows(2) {
            let ka = (w[0].theta_tx.re, w[0].theta_rx.re);
            let kb = (w[1].theta_tx.re, w[1].theta_rx.re);
            assert!(ka <= kb, "roots out of order");
        }
        for r in &rs.roots {
            assert!(r.residual_p1 <= opts.residual_tol * s1);
            assert!(r.residual_p2 <= opts.residual_tol * s2);
        }
        // No near-duplicates.
        for i in 0..rs.len() {
            for j in (i + 1)..rs.len() {
                let a = &rs.roots[i];
                let b = &rs.roots[j];
                let d = ((a.theta_rx - b.theta_rx).norm_sqr()
                    + (a.theta_tx - b.theta_tx).norm_sqr())
                .sqrt();
                assert!(d > opts.cluster_tol);
            }
        }
    }

    #[test]
    fn test_04_planted_grid_products_recall() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..20 {
            let sep_draw = |rng: &mut ChaCha8Rng, n: usize| -> Vec<f64> {
                let mut vals: Vec<f64> = Vec::new();
                while vals.len() < n {
                    let v = rng.gen_range(-1.5..1.5);
                    if vals.iter().all(|&w: &f64| (w - v).abs() > 0.2) {
                        vals.push(v);
                    }
                }
                vals
            };
            let r1 = sep_draw(&mut rng, 2);
            let s1 = sep_draw(&mut rng, 1);
            let r2 = sep_draw(&mut rng, 1);
            let s2 = sep_draw(&mut rng, 2);
            // Keep the two root grids apart so intersections are simple.
            if r1.iter().any(|a| r2.iter().any(|b| (a - b).abs() < 0.2))
                || s1.iter().any(|a| s2.iter().any(|b| (a - b).abs() < 0.2))
            {
                continue;
            }
            let p1 = grid_product(&r1, &s1);
            let p2 = grid_product(&r2, &s2);
            let rs = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
            let mut planted: Vec<(f64, f64)> = Vec::new();
            for &x in &r1 {
                for &y in &s2 {
                    planted.push((x, y));
                }
            }
            for &x in &r2 {
                for &y in &s1 {
                    planted.push((x, y));
                }
            }
            assert_eq!(rs.len(), planted.len(), "trial {trial}");
            for (px, py) in planted {
                let hit = rs.roots.iter().any(|r| {
                    (r.theta_rx - C64::new(px, 0.0)).norm() < 1e-8
                        && (r.theta_tx - C64::new(py, 0.0)).norm() < 1e-8
                });
                assert!(hit, "trial {trial}: missing planted root ({px},{py})");
            }
        }
    }

    #[test]
    fn test_05_x_free_polynomial_path() {
        // y^2 - 1 = 0 (x-free), x - y = 0 -> (1,1), (-1,-1).
        let p1 = poly(&[((0, 2), 1.0), ((0, 0), -1.0)]);
        let p2 = poly(&[((1, 0), 1.0), ((0, 1), -1.0)]);
        let rs = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
        let got = real_root_pairs(&rs);
        assert_eq!(got.len(), 2);
        assert!((got[0].0 + 1.0).abs() < 1e-10);
        assert!((got[1].0 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn test_06_positive_dimensional_components_detected() {
        // Shared polynomial factor x - y: the whole diagonal solves both.
        let p1 = poly(&[((2, 0), 1.0), ((1, 1), -1.0), ((1, 0), 1.0), ((0, 1), -1.0)]);
        let p2 = poly(&[((1, 1), 1.0), ((1, 0), 2.0), ((0, 2), -1.0), ((0, 1), -2.0)]);
        assert_eq!(
            solve_system(&p1, &p2, &SolveOptions::default()),
            Err(Error::NonIsolatedRoots)
        );
        // Both x-free with a common y root.
        let q1 = poly(&[((0, 1), 1.0), ((0, 0), -1.0)]); // y - 1
        let q2 = poly(&[((0, 1), 2.0), ((0, 0), -2.0)]); // 2y - 2
        assert_eq!(
            solve_system(&q1, &q2, &SolveOptions::default()),
            Err(Error::NonIsolatedRoots)
        );
        // Both y-free with a common x root.
        let r1 = poly(&[((2, 0), 1.0), ((0, 0), -1.0)]); // x^2 - 1
        let r2 = poly(&[((1, 0), 1.0), ((0, 0), -1.0)]); // x - 1
        assert_eq!(
            solve_system(&r1, &r2, &SolveOptions::default()),
            Err(Error::NonIsolatedRoots)
        );
    }

    #[test]
    fn test_06b_shared_monomial_content_is_deflated() {
        // p1 = y(x^2 - 1), p2 = y(x - y): the line y = 0 comes from the
        // shared monomial factor and is dropped; the torus roots survive.
        let p1 = poly(&[((2, 1), 1.0), ((0, 1), -1.0)]);
        let p2 = poly(&[((1, 1), 1.0), ((0, 2), -1.0)]);
        let rs = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
        let got = real_root_pairs(&rs);
        assert_eq!(got.len(), 2);
        assert!((got[0].0 + 1.0).abs() < 1e-10 && (got[0].1 + 1.0).abs() < 1e-10);
        assert!((got[1].0 - 1.0).abs() < 1e-10 && (got[1].1 - 1.0).abs() < 1e-10);
        // Purely monomial overlap leaves a constant quotient: no roots.
        let m1 = poly(&[((1, 1), 2.0)]);
        let m2 = poly(&[((2, 3), 1.0)]);
        assert!(solve_system(&m1, &m2, &SolveOptions::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn test_07_disjoint_univariate_systems_have_no_roots() {
        // y - 1 and 2y + 3 share no y; x^2 - 1 and x - 3 share no x.
        let p1 = poly(&[((0, 1), 1.0), ((0, 0), -1.0)]);
        let p2 = poly(&[((0, 1), 2.0), ((0, 0), 3.0)]);
        assert!(solve_system(&p1, &p2, &SolveOptions::default())
            .unwrap()
            .is_empty());
        let q1 = poly(&[((2, 0), 1.0), ((0, 0), -1.0)]);
        let q2 = poly(&[((1, 0), 1.0), ((0, 0), -3.0)]);
        assert!(solve_system(&q1, &q2, &SolveOptions::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn test_08_rejects_invalid_inputs() {
        let p = poly(&[((1, 0), 1.0)]);
        let empty = SparsePolynomial::<f64>::new(vec![], center_zero()).unwrap();
        assert!(matches!(
            solve_system(&p, &empty, &SolveOptions::default()),
            Err(Error::Domain(_))
        ));
        let shifted =
            SparsePolynomial::new(vec![((0, 1), 1.0)], BeamAngles::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            solve_system(&p, &shifted, &SolveOptions::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn test_09_roots_reported_in_global_coordinates() {
        // Same system as test_01 but expanded around (pi, pi): local roots
        // (+-1, +-1) shift by the center.
        let center = BeamAngles::new(std::f64::consts::PI, std::f64::consts::PI);
        let p1 = SparsePolynomial::new(vec![((2, 0), 1.0), ((0, 0), -1.0)], center).unwrap();
        let p2 = SparsePolynomial::new(vec![((0, 1), 1.0), ((1, 0), -1.0)], center).unwrap();
        let rs = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
        let got = real_root_pairs(&rs);
        assert!((got[0].0 - (std::f64::consts::PI - 1.0)).abs() < 1e-10);
        assert!((got[1].0 - (std::f64::consts::PI + 1.0)).abs() < 1e-10);
        assert_eq!(rs.torus_root_count(1e-9), 2);
    }

    #[test]
    fn test_10_zero_local_coordinate_roots_counted_separately() {
        // x * y - 0 ... use p1 = x, p2 = y: single root at the origin, not
        // a torus root.
        let p1 = poly(&[((1, 0), 1.0)]);
        let p2 = poly(&[((0, 1), 1.0)]);
        let rs = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs.torus_root_count(1e-9), 0);
        assert_eq!(rs.zero_local_coordinate_count(1e-9), 1);
    }

    #[test]
    fn test_11_swapped_variables_give_swapped_roots() {
        let p1 = grid_product(&[0.4, -0.9], &[0.2]);
        let p2 = grid_product(&[-0.3], &[0.8, -0.6]);
        let swap = |p: &SparsePolynomial<f64>| {
            let terms: Vec<((usize, usize), f64)> =
                p.terms().iter().map(|&((a, b), c)| ((b, a), c)).collect();
            SparsePolynomial::new(terms, center_zero()).unwrap()
        };
        let rs = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
        let rs_swapped = solve_system(&swap(&p1), &swap(&p2), &SolveOptions::default()).unwrap();
        assert_eq!(rs.len(), rs_swapped.len());
        for r in &rs.roots {
            let hit = rs_swapped.roots.iter().any(|s| {
                (s.theta_rx - r.theta_tx).norm() < 1e-8 && (s.theta_tx - r.theta_rx).norm() < 1e-8
            });
            assert!(hit, "missing swapped image of {r:?}");
        }
    }

    #[test]
    fn test_12_determinism() {
        let p1 = grid_product(&[-0.8, 0.3, 1.1], &[0.5]);
        let p2 = grid_product(&[0.9], &[-0.4, 0.7]);
        let a = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
        let b = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn test_13_polish_leaves_exact_root_unchanged() {
        let p1 = poly(&[((2, 0), 1.0), ((0, 0), -1.0)]);
        let p2 = poly(&[((0, 1), 1.0), ((1, 0), -1.0)]);
        let start = (C64::new(1.0, 0.0), C64::new(1.0, 0.0));
        let r = newton_polish(&p1, &p2, start, 10);
        assert_eq!(r.point, start);
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.outcome, PolishOutcome::Converged);
    }

    #[test]
    fn test_14_polish_quadratic_convergence_near_root() {
        let p1 = poly(&[((2, 0), 1.0), ((0, 2), 1.0), ((0, 0), -1.0)]);
        let p2 = poly(&[((1, 0), 1.0), ((0, 1), -1.0)]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let start = (C64::new(s + 1e-3, 0.0), C64::new(s - 1e-3, 0.0));
        let r = newton_polish(&p1, &p2, start, 6);
        assert!(r.residual < 1e-12, "residual {}", r.residual);
        assert!((r.point.0 - C64::new(s, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn test_15_polish_flags_singular_jacobian() {
        // p1 = x^2, p2 = y^2: Jacobian vanishes at the double root (0,0).
        let p1 = poly(&[((2, 0), 1.0)]);
        let p2 = poly(&[((0, 2), 1.0)]);
        let start = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        // Exactly at the root the residual floor triggers first, so start
        // at a point where the Jacobian is singular but residual isn't 0.
        let r = newton_polish(&p1, &p2, start, 5);
        assert_eq!(r.point, start);
        let off = (C64::new(0.0, 0.0), C64::new(0.5, 0.0));
        let r2 = newton_polish(&p1, &p2, off, 5);
        assert_eq!(r2.outcome, PolishOutcome::SingularJacobian);
    }

    #[test]
    fn test_16_polish_recovers_perturbed_planted_roots() {
        let p1 = grid_product(&[-0.7, 0.6], &[0.9]);
        let p2 = grid_product(&[1.2], &[-0.2, 0.4]);
        let mut planted: Vec<(f64, f64)> = Vec::new();
        for &x in &[-0.7, 0.6] {
            for &y in &[-0.2, 0.4] {
                planted.push((x, y));
            }
        }
        planted.push((1.2, 0.9));
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut converged = 0;
        let mut total = 0;
        for &(px, py) in &planted {
            for _ in 0..20 {
                let start = (
                    C64::new(px + rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3)),
                    C64::new(py + rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3)),
                );
                let r = newton_polish(&p1, &p2, start, 12);
                total += 1;
                if (r.point.0 - C64::new(px, 0.0)).norm() < 1e-6
                    && (r.point.1 - C64::new(py, 0.0)).norm() < 1e-6
                {
                    converged += 1;
                }
            }
        }
        assert!(
            converged * 100 >= total * 99,
            "{converged}/{total} converged"
        );
    }

    #[test]
    fn test_17_filter_real_domain() {
        let center = center_zero();
        let mk = |rx: C64, tx: C64| Root {
            theta_rx: rx,
            theta_tx: tx,
            residual_p1: 0.0,
            residual_p2: 0.0,
        };
        let rs = RootSet::new(
            vec![
                mk(C64::new(1.0, 1e-12), C64::new(2.0, 0.0)),
                mk(C64::new(1.0, 0.5), C64::new(2.0, 0.0)),
                mk(C64::new(-1.0, 0.0), C64::new(2.0, 0.0)),
                mk(C64::new(5.0, 0.0), C64::new(6.0, -1e-9)),
            ],
            center,
        );
        let tp = 2.0 * std::f64::consts::PI;
        let kept = filter_real_domain(
            &rs,
            1e-6,
            (BeamAngles::new(0.0, 0.0), BeamAngles::new(tp, tp)),
        );
        assert_eq!(kept.len(), 2);
        assert!((kept[0].theta_rx - 1.0).abs() < 1e-12 && (kept[0].theta_tx - 2.0).abs() < 1e-12);
        assert!((kept[1].theta_rx - 5.0).abs() < 1e-12 && (kept[1].theta_tx - 6.0).abs() < 1e-12);
    }

    #[test]
    fn test_18_torus_count_within_bkk_bound() {
        use crate::polytope::root_bound_eta;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..15 {
            let d1 = rng.gen_range(1..4usize);
            let d2 = rng.gen_range(1..4usize);
            let dense = |d: usize, rng: &mut ChaCha8Rng| {
                let mut terms = Vec::new();
                for a in 0..=d {
                    for b in 0..=(d - a) {
                        terms.push(((a, b), rng.gen_range(-1.0..1.0)));
                    }
                }
                poly(&terms)
            };
            let p1 = dense(d1, &mut rng);
            let p2 = dense(d2, &mut rng);
            let eta = root_bound_eta(&p1.support(), &p2.support()).unwrap();
            let rs = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
            assert!(
                rs.torus_root_count(1e-9) as u64 <= eta,
                "trial {trial}: {} > {eta}",
                rs.torus_root_count(1e-9)
            );
        }
    }

    #[test]
    fn test_19_multiple_root_collapses_to_one_representative() {
        // (x - y)^2 and x + y - 0.8 meet only at the double root
        // (0.4, 0.4); the eigenvalue stage smears it into a cloud of
        // near-roots that the clustering must fuse back together.
        let p1 = poly(&[((2, 0), 1.0), ((1, 1), -2.0), ((0, 2), 1.0)]);
        let p2 = poly(&[((1, 0), 1.0), ((0, 1), 1.0), ((0, 0), -0.8)]);
        let rs = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
        assert_eq!(rs.len(), 1, "{:?}", rs.roots);
        let r = &rs.roots[0];
        assert!((r.theta_rx - Complex::new(0.4, 0.0)).norm() < 1e-4);
        assert!((r.theta_tx - Complex::new(0.4, 0.0)).norm() < 1e-4);
    }
}
