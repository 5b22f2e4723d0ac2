//! Parallel transport along parametric paths on the torus and the punctured
//! plane.
//!
//! Points are complex numbers; on the torus `x + iy` is read modulo 1 in both
//! coordinates. Transport solves `dv/dt + A(ẋ(t)) v = 0` on `[0, 1]` and
//! returns the fundamental matrix `g` with `v(1) = g v(0)`.

use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::algebra::anti_hermitian_tolerance;
use crate::error::{Error, Result};
use crate::gauge::Connection;
use crate::grid_forms::LieForm;
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// Minimum distance between a path and any pole.
pub const POLE_MARGIN: f64 = 1e-6;
/// Minimum number of integration steps.
pub const MIN_STEPS: usize = 100;
/// Closure gap accepted for closed paths.
pub const CLOSURE_TOLERANCE: f64 = 1e-12;

/// Parametric path `[0, 1] → ℂ` from a small set of families.
#[derive(Clone, Debug, PartialEq)]
pub enum ParametricPath<T> {
    /// Straight line `start + t·direction`; on the torus the generator loops
    /// are the cases `direction ∈ ℤ²`.
    Line { start: Complex<T>, direction: Complex<T> },
    /// `center + radius·e^{2πi·winding·t}`.
    Circle { center: Complex<T>, radius: T, winding: i32 },
    Reverse(Box<ParametricPath<T>>),
    /// First path on `[0, ½]`, second on `[½, 1]`.
    Concat(Box<ParametricPath<T>>, Box<ParametricPath<T>>),
}

impl<T: Real> ParametricPath<T> {
    /// Loop winding `winding` times around the torus along axis 0 (x) or 1 (y).
    pub fn torus_generator(axis: usize, base: (T, T), winding: i32) -> Self {
        let w = T::lit(winding as f64);
        let direction = if axis == 0 { Complex::new(w, T::zero()) } else { Complex::new(T::zero(), w) };
        ParametricPath::Line { start: Complex::new(base.0, base.1), direction }
    }

    pub fn circle(center: Complex<T>, radius: T, winding: i32) -> Self {
        ParametricPath::Circle { center, radius, winding }
    }

    pub fn segment(from: Complex<T>, to: Complex<T>) -> Self {
        ParametricPath::Line { start: from, direction: to - from }
    }

    pub fn reversed(&self) -> Self {
        ParametricPath::Reverse(Box::new(self.clone()))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Self) -> Self {
        ParametricPath::Concat(Box::new(self.clone()), Box::new(next.clone()))
    }

    pub fn position(&self, t: T) -> Complex<T> {
        match self {
            ParametricPath::Line { start, direction } => start + direction * t,
            ParametricPath::Circle { center, radius, winding } => {
                let phase = T::lit(std::f64::consts::TAU * *winding as f64) * t;
                center + Complex::from_polar(*radius, phase)
            }
            ParametricPath::Reverse(p) => p.position(T::one() - t),
            ParametricPath::Concat(a, b) => {
                let half = T::lit(0.5);
                if t <= half {
                    a.position(t / half)
                } else {
                    b.position((t - half) / half)
                }
            }
        }
    }

    pub fn velocity(&self, t: T) -> Complex<T> {
        match self {
            ParametricPath::Line { direction, .. } => *direction,
            ParametricPath::Circle { radius, winding, .. } => {
                let omega = T::lit(std::f64::consts::TAU * *winding as f64);
                Complex::from_polar(*radius * omega, omega * t) * Complex::i()
            }
            ParametricPath::Reverse(p) => -p.velocity(T::one() - t),
            ParametricPath::Concat(a, b) => {
                let half = T::lit(0.5);
                let two = T::lit(2.0);
                if t < half {
                    a.velocity(t / half) * two
                } else {
                    b.velocity((t - half) / half) * two
                }
            }
        }
    }

    /// Smooth pieces with their parameter spans; concatenation joints are the
    /// only places where the velocity may jump.
    pub fn pieces(&self) -> Vec<(ParametricPath<T>, T)> {
        match self {
            ParametricPath::Concat(a, b) => {
                let half = T::lit(0.5);
                a.pieces().into_iter().chain(b.pieces()).map(|(p, s)| (p, s * half)).collect()
            }
            ParametricPath::Reverse(p) => {
                p.pieces().into_iter().rev().map(|(leaf, s)| (ParametricPath::Reverse(Box::new(leaf)), s)).collect()
            }
            leaf => vec![(leaf.clone(), T::one())],
        }
    }

    /// Endpoint gap, measured modulo the integer lattice when `periodic`.
    pub fn closure_gap(&self, periodic: bool) -> T {
        let d = self.position(T::one()) - self.position(T::zero());
        if periodic {
            let wrap = |v: T| (v - v.round()).abs();
            wrap(d.re).hypot(wrap(d.im))
        } else {
            d.norm()
        }
    }

    pub fn is_closed(&self, periodic: bool) -> bool {
        self.closure_gap(periodic) <= T::lit(CLOSURE_TOLERANCE)
    }
}

/// Matrix-valued 1-form evaluated on tangent vectors, `A(z, ż)`.
pub trait Potential<T: Real> {
    fn dim(&self) -> usize;

    /// Whether positions are read on the torus (modulo 1).
    fn periodic(&self) -> bool;

    fn eval(&self, z: Complex<T>, v: Complex<T>) -> Result<CMatrix<T>>;
}

type TorusCoefficients<T> = Arc<dyn Fn(T, T) -> [CMatrix<T>; 2] + Send + Sync>;

/// Torus potential `Ex dx + Ey dy` given by closed-form coefficients.
#[derive(Clone)]
pub struct AnalyticTorusPotential<T> {
    dim: usize,
    coefficients: TorusCoefficients<T>,
}

impl<T: Real> AnalyticTorusPotential<T> {
    pub fn new(dim: usize, f: impl Fn(T, T) -> [CMatrix<T>; 2] + Send + Sync + 'static) -> Self {
        Self { dim, coefficients: Arc::new(f) }
    }

    pub fn constant(ex: CMatrix<T>, ey: CMatrix<T>) -> Self {
        Self::new(ex.dim(), move |_, _| [ex, ey])
    }

    pub fn coefficients(&self, x: T, y: T) -> [CMatrix<T>; 2] {
        (self.coefficients)(x, y)
    }

    /// Exact gauge transform `G E G⁻¹ − (dG) G⁻¹` for a unitary field `G` with
    /// known partial derivatives `[∂x G, ∂y G]`.
    pub fn gauge_transformed(
        &self,
        g: impl Fn(T, T) -> CMatrix<T> + Send + Sync + 'static,
        dg: impl Fn(T, T) -> [CMatrix<T>; 2] + Send + Sync + 'static,
    ) -> Self {
        let base = self.coefficients.clone();
        Self::new(self.dim, move |x, y| {
            let gm = g(x, y);
            let ginv = gm.adjoint();
            let e = base(x, y);
            let d = dg(x, y);
            [gm * e[0] * ginv - d[0] * ginv, gm * e[1] * ginv - d[1] * ginv]
        })
    }
}

impl<T: Real> Potential<T> for AnalyticTorusPotential<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn periodic(&self) -> bool {
        true
    }

    fn eval(&self, z: Complex<T>, v: Complex<T>) -> Result<CMatrix<T>> {
        let [ex, ey] = self.coefficients(z.re, z.im);
        Ok(ex.scale(v.re) + ey.scale(v.im))
    }
}

/// Grid connection with bilinear interpolation between nodes.
#[derive(Clone, Debug)]
pub struct GridPotential<T> {
    potential: LieForm<T>,
}

impl<T: Real> GridPotential<T> {
    pub fn new(c: &Connection<T>) -> Self {
        Self { potential: c.potential().clone() }
    }

    fn interpolate(&self, comp: usize, x: T, y: T) -> CMatrix<T> {
        let grid = self.potential.grid();
        let n = T::of_usize(grid.n());
        let (sx, sy) = ((x - x.floor()) * n, (y - y.floor()) * n);
        let (fx, fy) = (sx.floor(), sy.floor());
        let (ax, ay) = (sx - fx, sy - fy);
        let j = fx.to_usize().unwrap_or(0) % grid.n();
        let l = fy.to_usize().unwrap_or(0) % grid.n();
        let i00 = grid.index(j, l);
        let i10 = grid.shifted(i00, 1, 0);
        let i01 = grid.shifted(i00, 0, 1);
        let i11 = grid.shifted(i00, 1, 1);
        let one = T::one();
        let p = &self.potential;
        p.at(comp, i00).scale((one - ax) * (one - ay))
            + p.at(comp, i10).scale(ax * (one - ay))
            + p.at(comp, i01).scale((one - ax) * ay)
            + p.at(comp, i11).scale(ax * ay)
    }
}

impl<T: Real> Potential<T> for GridPotential<T> {
    fn dim(&self) -> usize {
        self.potential.dim()
    }

    fn periodic(&self) -> bool {
        true
    }

    fn eval(&self, z: Complex<T>, v: Complex<T>) -> Result<CMatrix<T>> {
        Ok(self.interpolate(0, z.re, z.im).scale(v.re) + self.interpolate(1, z.re, z.im).scale(v.im))
    }
}

/// Pole of a meromorphic coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pole<T> {
    pub location: Complex<T>,
    pub order: u32,
}

type PlaneCoefficient<T> = Arc<dyn Fn(Complex<T>) -> CMatrix<T> + Send + Sync>;

/// Potential `a(z) dz` with rational matrix coefficient on `ℂ ∖ poles`.
#[derive(Clone)]
pub struct MeromorphicPotential<T> {
    dim: usize,
    poles: Vec<Pole<T>>,
    coefficient: PlaneCoefficient<T>,
}

impl<T: Real> MeromorphicPotential<T> {
    pub fn new(dim: usize, poles: Vec<Pole<T>>, f: impl Fn(Complex<T>) -> CMatrix<T> + Send + Sync + 'static) -> Self {
        Self { dim, poles, coefficient: Arc::new(f) }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, Vec::new(), move |_| CMatrix::zeros(dim))
    }

    /// Scalar `β = (−k/z) dz`.
    pub fn aharonov_bohm(k: Complex<T>) -> Self {
        Self::diagonal_simple_pole(&[k])
    }

    /// `diag(−k₁, …, −k_m) dz / z`.
    pub fn diagonal_simple_pole(ks: &[Complex<T>]) -> Self {
        let diag: Vec<Complex<T>> = ks.iter().map(|k| -k).collect();
        let residue = CMatrix::diagonal(&diag);
        let origin = Pole { location: Complex::new(T::zero(), T::zero()), order: 1 };
        Self::new(ks.len(), vec![origin], move |z| residue.scale_c(z.inv()))
    }

    pub fn poles(&self) -> &[Pole<T>] {
        &self.poles
    }

    /// Poles of order above one fall outside the Fuchsian setting.
    pub fn has_higher_order_poles(&self) -> bool {
        self.poles.iter().any(|p| p.order > 1)
    }

    pub fn coefficient(&self, z: Complex<T>) -> CMatrix<T> {
        (self.coefficient)(z)
    }

    fn nearest_pole(&self, z: Complex<T>) -> Option<(T, Complex<T>)> {
        self.poles
            .iter()
            .map(|p| ((z - p.location).norm(), p.location))
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
    }

    /// Smallest distance from `path` to a pole, sampled at `samples + 1` points.
    pub fn path_clearance(&self, path: &ParametricPath<T>, samples: usize) -> Option<(T, Complex<T>)> {
        (0..=samples)
            .filter_map(|s| self.nearest_pole(path.position(T::of_usize(s) / T::of_usize(samples))))
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
    }
}

impl<T: Real> Potential<T> for MeromorphicPotential<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn periodic(&self) -> bool {
        false
    }

    fn eval(&self, z: Complex<T>, v: Complex<T>) -> Result<CMatrix<T>> {
        if let Some((d, p)) = self.nearest_pole(z) {
            if d <= T::lit(POLE_MARGIN) {
                return Err(Error::PoleProximity { distance: d.as_f64(), pole_re: p.re.as_f64(), pole_im: p.im.as_f64() });
            }
        }
        Ok(self.coefficient(z).scale_c(v))
    }
}

fn check_steps(steps: usize) -> Result<()> {
    if steps < MIN_STEPS {
        return Err(Error::TooFewSteps(steps));
    }
    Ok(())
}

fn sample<T: Real, P: Potential<T> + ?Sized>(pot: &P, path: &ParametricPath<T>, t: T) -> Result<CMatrix<T>> {
    let a = pot.eval(path.position(t), path.velocity(t))?;
    if !a.is_finite() {
        return Err(Error::NonFinite { t: t.as_f64() });
    }
    Ok(a)
}

/// Classical RK4 for `Y' = rhs(A(t), Y)` on `[0, 1]`, restarted at every
/// concatenation joint. `observe` sees `(t, Y(t))` after every step.
fn rk4_run<T: Real, P: Potential<T> + ?Sized>(
    pot: &P,
    path: &ParametricPath<T>,
    steps: usize,
    y0: CMatrix<T>,
    rhs: impl Fn(&CMatrix<T>, &CMatrix<T>) -> CMatrix<T>,
    mut observe: impl FnMut(T, &CMatrix<T>),
) -> Result<CMatrix<T>> {
    check_steps(steps)?;
    let two = T::lit(2.0);
    let mut y = y0;
    observe(T::zero(), &y);
    let mut offset = T::zero();
    for (piece, span) in path.pieces() {
        let piece_steps = (T::of_usize(steps) * span).round().to_usize().unwrap_or(1).max(1);
        let h = T::one() / T::of_usize(piece_steps);
        let half = h * T::lit(0.5);
        let sixth = h / T::lit(6.0);
        let mut a_start = sample(pot, &piece, T::zero())?;
        for s in 0..piece_steps {
            let t = T::of_usize(s) * h;
            let a_mid = sample(pot, &piece, t + half)?;
            let a_end = sample(pot, &piece, T::of_usize(s + 1) * h)?;
            let k1 = rhs(&a_start, &y);
            let k2 = rhs(&a_mid, &(y + k1.scale(half)));
            let k3 = rhs(&a_mid, &(y + k2.scale(half)));
            let k4 = rhs(&a_end, &(y + k3.scale(h)));
            y += (k1 + k2.scale(two) + k3.scale(two) + k4).scale(sixth);
            a_start = a_end;
            observe(offset + span * T::of_usize(s + 1) * h, &y);
        }
        offset = offset + span;
    }
    Ok(y)
}

/// Fundamental solution of `dv/dt + A(ẋ) v = 0` along `path`.
pub fn parallel_transport<T: Real, P: Potential<T> + ?Sized>(
    pot: &P,
    path: &ParametricPath<T>,
    steps: usize,
) -> Result<CMatrix<T>> {
    rk4_run(pot, path, steps, CMatrix::identity(pot.dim()), |a, v| -(*a * *v), |_, _| {})
}

/// Holonomy around a closed path and its gauge-invariant trace.
#[derive(Clone, Debug, PartialEq)]
pub struct WilsonLoop<T> {
    pub matrix: CMatrix<T>,
    pub trace: Complex<T>,
}

pub fn wilson_loop<T: Real, P: Potential<T> + ?Sized>(
    pot: &P,
    path: &ParametricPath<T>,
    steps: usize,
) -> Result<WilsonLoop<T>> {
    let gap = path.closure_gap(pot.periodic());
    if gap > T::lit(CLOSURE_TOLERANCE) {
        return Err(Error::OpenPath { gap: gap.as_f64() });
    }
    let matrix = parallel_transport(pot, path, steps)?;
    Ok(WilsonLoop { matrix, trace: matrix.trace() })
}

/// Aharonov-Bohm monodromy of `β = (−k/z) dz` around the `winding`-fold unit circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AharonovBohmRecord {
    pub k: [f64; 2],
    pub winding: i32,
    pub steps: usize,
    pub monodromy: [f64; 2],
    pub expected: [f64; 2],
    pub error: f64,
    /// Flux under the identification `k = −Φ/2π`.
    pub flux: [f64; 2],
}

pub fn aharonov_bohm_monodromy<T: Real>(k: Complex<T>, winding: i32, steps: usize) -> Result<AharonovBohmRecord> {
    let pot = MeromorphicPotential::aharonov_bohm(k);
    let circle = ParametricPath::circle(Complex::new(T::zero(), T::zero()), T::one(), winding);
    let g = parallel_transport(&pot, &circle, steps)?[(0, 0)];
    let two_pi = T::lit(std::f64::consts::TAU);
    let expected = (k * Complex::new(T::zero(), two_pi * T::lit(winding as f64))).exp();
    let pair = |z: Complex<T>| [z.re.as_f64(), z.im.as_f64()];
    Ok(AharonovBohmRecord {
        k: pair(k),
        winding,
        steps,
        monodromy: pair(g),
        expected: pair(expected),
        error: (g - expected).norm().as_f64(),
        flux: pair(-k * two_pi),
    })
}

/// `exp(iπΛσ₃) = diag(e^{iπΛ}, e^{−iπΛ})`.
pub fn aharonov_casher_phase<T: Real>(lambda: T) -> CMatrix<T> {
    let phase = T::PI() * lambda;
    CMatrix::diagonal(&[Complex::from_polar(T::one(), phase), Complex::from_polar(T::one(), -phase)])
}

/// Single-pole potential `−(Λ/2) σ₃ dz/z` whose unit-circle transport is
/// [`aharonov_casher_phase`].
pub fn aharonov_casher_potential<T: Real>(lambda: T) -> MeromorphicPotential<T> {
    let k = lambda * T::lit(0.5);
    MeromorphicPotential::diagonal_simple_pole(&[Complex::new(k, T::zero()), Complex::new(-k, T::zero())])
}

/// Spin trajectory sampled at every integration step.
#[derive(Clone, Debug, PartialEq)]
pub struct WongTrajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<CMatrix<T>>,
}

impl<T: Real> WongTrajectory<T> {
    pub fn last(&self) -> &CMatrix<T> {
        self.states.last().expect("trajectory has the initial state")
    }

    /// `max_t |⟨I(t), I(t)⟩ − ⟨I₀, I₀⟩|`.
    pub fn norm_drift(&self) -> T {
        let n0 = self.states[0].re_inner(&self.states[0]);
        self.states.iter().map(|s| (s.re_inner(s) - n0).abs()).fold(T::zero(), T::max)
    }
}

/// Integrates `dI/dt + [A(ẋ), I] = 0` from `i0`.
pub fn wong_evolve<T: Real, P: Potential<T> + ?Sized>(
    pot: &P,
    path: &ParametricPath<T>,
    i0: &CMatrix<T>,
    steps: usize,
) -> Result<WongTrajectory<T>> {
    if i0.dim() != pot.dim() {
        return Err(Error::DimensionMismatch { expected: pot.dim(), found: i0.dim() });
    }
    let deviation = i0.anti_hermitian_defect();
    if deviation > anti_hermitian_tolerance::<T>() {
        return Err(Error::NotAntiHermitian { deviation: deviation.as_f64() });
    }
    let mut states = Vec::with_capacity(steps + 1);
    let mut times = Vec::with_capacity(steps + 1);
    rk4_run(pot, path, steps, *i0, |a, i| -a.commutator(i), |t, y| {
        times.push(t);
        states.push(*y);
    })?;
    Ok(WongTrajectory { times, states })
}

/// Transport matrices around each generator loop.
pub fn monodromy_representation<T: Real, P: Potential<T> + ?Sized>(
    pot: &P,
    loops: &[ParametricPath<T>],
    steps: usize,
) -> Result<Vec<CMatrix<T>>> {
    loops.iter().map(|l| wilson_loop(pot, l, steps).map(|w| w.matrix)).collect()
}

/// `‖T(a·b) − T(b)T(a)‖_max`, zero for a representation of loop composition.
pub fn homomorphism_defect<T: Real, P: Potential<T> + ?Sized>(
    pot: &P,
    a: &ParametricPath<T>,
    b: &ParametricPath<T>,
    steps: usize,
) -> Result<T> {
    let ta = parallel_transport(pot, a, steps)?;
    let tb = parallel_transport(pot, b, steps)?;
    let tab = parallel_transport(pot, &a.then(b), 2 * steps)?;
    Ok((tab - tb * ta).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PauliBasis;
    use crate::grid_forms::TorusGrid;
    use std::f64::consts::{PI, TAU};

    fn e(a: usize) -> CMatrix<f64> {
        *PauliBasis::<f64>::new().e[a].matrix()
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn path_geometry() {
        let circle = ParametricPath::circle(c(1.0, 2.0), 0.5, 2);
        assert!((circle.position(0.125) - c(1.0, 2.5)).norm() < 1e-14);
        assert!((circle.velocity(0.0) - c(0.0, 2.0 * TAU * 0.5)).norm() < 1e-12);
        assert!(circle.is_closed(false));
        let gen = ParametricPath::torus_generator(1, (0.25, 0.25), 1);
        assert!(gen.is_closed(true) && !gen.is_closed(false));
        let seg = ParametricPath::segment(c(0.0, 0.0), c(1.0, 1.0));
        assert_eq!(seg.reversed().position(0.0), c(1.0, 1.0));
        assert_eq!(seg.reversed().velocity(0.3), c(-1.0, -1.0));
        let both = seg.then(&seg.reversed());
        assert!(both.is_closed(false));
        assert_eq!(both.velocity(0.75), c(-2.0, -2.0));
    }

    #[test]
    fn transport_examples() {
        let zero = AnalyticTorusPotential::constant(CMatrix::zeros(2), CMatrix::zeros(2));
        let gen = ParametricPath::torus_generator(0, (0.0, 0.0), 1);
        assert_eq!(parallel_transport(&zero, &gen, 100).unwrap(), CMatrix::identity(2));

        let pot = AnalyticTorusPotential::constant(e(0).scale(PI), CMatrix::zeros(2));
        let g = parallel_transport(&pot, &gen, 1000).unwrap();
        assert!((g + CMatrix::identity(2)).max_abs() < 1e-8);

        let ab = MeromorphicPotential::aharonov_bohm(c(0.5, 0.0));
        let circle = ParametricPath::circle(c(0.0, 0.0), 1.0, 1);
        let g = parallel_transport(&ab, &circle, 1000).unwrap()[(0, 0)];
        assert!((g + 1.0).norm() < 1e-8);
    }

    #[test]
    fn transport_rejects_bad_input() {
        let ab = MeromorphicPotential::aharonov_bohm(c(0.5, 0.0));
        let through = ParametricPath::segment(c(-1.0, 0.0), c(1.0, 0.0));
        assert!(matches!(parallel_transport(&ab, &through, 100), Err(Error::PoleProximity { .. })));
        let circle = ParametricPath::circle(c(0.0, 0.0), 1.0, 1);
        assert_eq!(parallel_transport(&ab, &circle, 99), Err(Error::TooFewSteps(99)));
        let nan = MeromorphicPotential::new(1, vec![], |_| CMatrix::scalar(c(f64::NAN, 0.0)));
        assert!(matches!(parallel_transport(&nan, &circle, 100), Err(Error::NonFinite { .. })));
        let (d, _) = ab.path_clearance(&through, 1000).unwrap();
        assert!(d < 1e-12);
    }

    #[test]
    fn transport_is_fourth_order() {
        let pot = AnalyticTorusPotential::constant(e(0).scale(3.0 * PI), e(1).scale(1.3));
        let path = ParametricPath::Line { start: c(0.1, 0.2), direction: c(1.0, 1.0) };
        let exact = (e(0).scale(3.0 * PI) + e(1).scale(1.3)).scale(-1.0).exp();
        let errs: Vec<f64> =
            [100, 200, 400].iter().map(|&s| (parallel_transport(&pot, &path, s).unwrap() - exact).max_abs()).collect();
        assert!(errs.windows(2).all(|w| w[0] / w[1] >= 14.0), "{errs:?}");
    }

    #[test]
    fn unitarity_and_reversal() {
        let pot = AnalyticTorusPotential::new(2, |x: f64, y: f64| {
            [e(0).scale((TAU * y).sin()) + e(2).scale(0.3), e(1).scale((TAU * x).cos())]
        });
        let path = ParametricPath::circle(c(0.3, 0.6), 0.2, 1).then(&ParametricPath::segment(c(0.5, 0.6), c(0.9, 0.1)));
        let g = parallel_transport(&pot, &path, 1000).unwrap();
        assert!(g.unitarity_defect() < 1e-8);
        let back = parallel_transport(&pot, &path.reversed(), 1000).unwrap();
        assert!((back * g - CMatrix::identity(2)).max_abs() < 1e-8);
    }

    #[test]
    fn wilson_loop_examples_and_gauge_covariance() {
        let gen = ParametricPath::torus_generator(0, (0.25, 0.25), 1);
        let zero = AnalyticTorusPotential::constant(CMatrix::zeros(3), CMatrix::zeros(3));
        assert!((wilson_loop(&zero, &gen, 100).unwrap().trace - c(3.0, 0.0)).norm() < 1e-15);
        let pot = AnalyticTorusPotential::constant(e(0).scale(PI), CMatrix::zeros(2));
        assert!((wilson_loop(&pot, &gen, 1000).unwrap().trace - c(-2.0, 0.0)).norm() < 1e-8);
        let open = ParametricPath::segment(c(0.0, 0.0), c(0.5, 0.0));
        assert!(matches!(wilson_loop(&pot, &open, 100), Err(Error::OpenPath { .. })));

        let curved = AnalyticTorusPotential::new(2, |x: f64, y: f64| {
            [e(1).scale((TAU * y).cos()), e(0).scale((TAU * x).sin())]
        });
        // G = exp(f e₃), f = sin(2πx) + cos(2πy)
        let f = |x: f64, y: f64| (TAU * x).sin() + (TAU * y).cos();
        let g = move |x: f64, y: f64| e(2).scale(f(x, y)).exp();
        let dg = move |x: f64, y: f64| {
            let gm = e(2).scale(f(x, y)).exp();
            [e(2).scale(TAU * (TAU * x).cos()) * gm, e(2).scale(-TAU * (TAU * y).sin()) * gm]
        };
        let transformed = curved.gauge_transformed(g, dg);
        let lp = ParametricPath::circle(c(0.4, 0.4), 0.3, 1);
        let w0 = wilson_loop(&curved, &lp, 1000).unwrap();
        let w1 = wilson_loop(&transformed, &lp, 1000).unwrap();
        assert!((w0.trace - w1.trace).norm() < 1e-6);
        let base = g(0.7, 0.4);
        assert!((w1.matrix - base * w0.matrix * base.adjoint()).max_abs() < 1e-6);
    }

    #[test]
    fn grid_potential_matches_analytic_at_second_order() {
        let f = |x: f64, y: f64| [e(1).scale((TAU * y).cos()), e(0).scale((TAU * x).sin())];
        let analytic = AnalyticTorusPotential::new(2, f);
        let lp = ParametricPath::circle(c(0.4, 0.4), 0.3, 1);
        let exact = parallel_transport(&analytic, &lp, 2000).unwrap();
        let errs: Vec<f64> = [32, 64]
            .iter()
            .map(|&n| {
                let g = TorusGrid::new(n).unwrap();
                let conn = Connection::from_fn(g, 2, |comp, x, y| f(x, y)[comp]).unwrap();
                (parallel_transport(&GridPotential::new(&conn), &lp, 2000).unwrap() - exact).max_abs()
            })
            .collect();
        assert!(errs[0] / errs[1] > 3.0, "{errs:?}");
    }

    #[test]
    fn aharonov_bohm_examples() {
        assert!(aharonov_bohm_monodromy(c(0.0, 0.0), 1, 1000).unwrap().error < 1e-14);
        let r = aharonov_bohm_monodromy(c(0.5, 0.0), 1, 1000).unwrap();
        assert!((c(r.monodromy[0], r.monodromy[1]) + 1.0).norm() < 1e-8);
        assert!((r.flux[0] + PI).abs() < 1e-15);
        let r = aharonov_bohm_monodromy(c(0.37, 0.0), 2, 2000).unwrap();
        let oracle = c((1.48 * PI).cos(), (1.48 * PI).sin());
        assert!((c(r.monodromy[0], r.monodromy[1]) - oracle).norm() < 1e-8);
        for k in [0.5, 0.37, -1.2] {
            for n in [1, 2, -1] {
                assert!(aharonov_bohm_monodromy(c(k, 0.0), n, 1000 * n.unsigned_abs() as usize).unwrap().error <= 1e-8);
            }
        }
    }

    #[test]
    fn aharonov_casher_examples() {
        assert_eq!(aharonov_casher_phase(0.0), CMatrix::identity(2));
        assert!((aharonov_casher_phase(1.0) + CMatrix::identity(2)).max_abs() < 1e-15);
        let target = CMatrix::diagonal(&[Complex::from_polar(1.0, PI / 4.0), Complex::from_polar(1.0, -PI / 4.0)]);
        assert!((aharonov_casher_phase(0.25) - target).max_abs() < 1e-15);
        let circle = ParametricPath::circle(c(0.0, 0.0), 1.0, 1);
        let g = parallel_transport(&aharonov_casher_potential(0.25), &circle, 1000).unwrap();
        assert!((g - target).max_abs() < 1e-8);
    }

    #[test]
    fn wong_examples() {
        let pot = AnalyticTorusPotential::constant(e(2), CMatrix::zeros(2));
        let path = ParametricPath::segment(c(0.0, 0.0), c(1.0, 0.0));
        let traj = wong_evolve(&pot, &path, &e(0), 1000).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let expect = e(0).scale((2.0 * t).cos()) + e(1).scale((2.0 * t).sin());
            assert!((*s - expect).max_abs() < 1e-8);
        }
        assert!(traj.norm_drift() < 1e-9);

        let zero = AnalyticTorusPotential::constant(CMatrix::zeros(2), CMatrix::zeros(2));
        assert_eq!(*wong_evolve(&zero, &path, &e(1), 100).unwrap().last(), e(1));

        let flat = AnalyticTorusPotential::constant(e(0).scale(PI), CMatrix::zeros(2));
        let small = ParametricPath::circle(c(0.3, 0.4), 0.1, 1);
        let i0 = e(1) + e(2).scale(0.5);
        assert!((*wong_evolve(&flat, &small, &i0, 1000).unwrap().last() - i0).max_abs() < 1e-7);

        assert!(wong_evolve(&zero, &path, &CMatrix::identity(2), 100).is_err());
    }

    #[test]
    fn wong_is_adjoint_transport() {
        let pot = AnalyticTorusPotential::new(2, |x: f64, y: f64| {
            [e(0).scale((TAU * y).sin()) + e(2), e(1).scale(2.0 * (TAU * x).cos())]
        });
        let path = ParametricPath::circle(c(0.5, 0.5), 0.25, 2);
        let i0 = e(0).scale(0.3) + e(1);
        let traj = wong_evolve(&pot, &path, &i0, 1000).unwrap();
        let g = parallel_transport(&pot, &path, 1000).unwrap();
        assert!((*traj.last() - g * i0 * g.adjoint()).max_abs() < 1e-7);
        assert!(traj.norm_drift() < 1e-9);
    }

    #[test]
    fn monodromy_representation_examples() {
        let k = c(0.3, 0.0);
        let pot = MeromorphicPotential::aharonov_bohm(k);
        let l1 = ParametricPath::circle(c(0.0, 0.0), 1.0, 1);
        let l2 = ParametricPath::circle(c(0.0, 0.0), 1.0, 2);
        let reps = monodromy_representation(&pot, &[l1.clone(), l2], 2000).unwrap();
        let one = (c(0.0, TAU) * k).exp();
        assert!((reps[0][(0, 0)] - one).norm() < 1e-8);
        assert!((reps[1][(0, 0)] - one * one).norm() < 1e-8);
        assert!(homomorphism_defect(&pot, &l1, &l1, 1000).unwrap() < 1e-6);

        let zero = MeromorphicPotential::<f64>::zero(2);
        assert_eq!(monodromy_representation(&zero, std::slice::from_ref(&l1), 100).unwrap()[0], CMatrix::identity(2));

        let diag = MeromorphicPotential::diagonal_simple_pole(&[c(0.2, 0.0), c(-0.7, 0.0)]);
        let g = monodromy_representation(&diag, std::slice::from_ref(&l1), 1000).unwrap()[0];
        assert!((g[(0, 0)] - (c(0.0, TAU * 0.2)).exp()).norm() < 1e-8);
        assert!((g[(1, 1)] - (c(0.0, -TAU * 0.7)).exp()).norm() < 1e-8);

        let crossing = ParametricPath::circle(c(1.0, 0.0), 1.0, 1);
        assert!(matches!(monodromy_representation(&pot, &[crossing], 1000), Err(Error::PoleProximity { .. })));
        assert!(!pot.has_higher_order_poles());
        let second = MeromorphicPotential::new(1, vec![Pole { location: c(0.0, 0.0), order: 2 }], |z| {
            CMatrix::scalar(z.powi(-2))
        });
        assert!(second.has_higher_order_poles());
    }

    #[test]
    fn two_pole_monodromy_composes() {
        let poles = [c(-0.5, 0.0), c(0.5, 0.0)];
        let (k1, k2) = (c(0.2, 0.0), c(0.45, 0.0));
        let pot = MeromorphicPotential::new(
            1,
            poles.iter().map(|&p| Pole { location: p, order: 1 }).collect(),
            move |z| CMatrix::scalar(-(k1 / (z - poles[0])) - k2 / (z - poles[1])),
        );
        let a = ParametricPath::circle(poles[0], 0.3, 1);
        let b = ParametricPath::circle(poles[1], 0.3, 1);
        let big = ParametricPath::circle(c(0.0, 0.0), 2.0, 1);
        let ta = parallel_transport(&pot, &a, 1000).unwrap()[(0, 0)];
        let tb = parallel_transport(&pot, &b, 1000).unwrap()[(0, 0)];
        let tbig = parallel_transport(&pot, &big, 2000).unwrap()[(0, 0)];
        assert!((ta - (c(0.0, TAU) * k1).exp()).norm() < 1e-8);
        assert!((tbig - ta * tb).norm() < 1e-8);
    }
}
