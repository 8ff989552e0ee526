//! Floating-point Weierstrass engine: `zeta`, `wp`, quasi-periods, the
//! elliptic combinations `g_p`, `g_q`, and the 2x2 matrix consistency
//! equation `A(z/q) B(z) = B(z/p) A(z)`.
//!
//! Evaluation goes through theta series with analytic argument reduction,
//! which reaches well below the default tolerance of 1e-8; the direct
//! Eisenstein-style truncated sums are kept as an independent evaluation
//! route with an explicit integral-comparison tail bound, and the test suite
//! cross-checks the two. All numeric contracts are residual bounds, never
//! exact equality.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

const TWO_PI_I: Complex64 = Complex64::new(0.0, std::f64::consts::TAU);

/// A numeric period lattice `Z w1 + Z w2` with `Im(w2/w1) > 0`.
#[derive(Clone, Copy, Debug)]
pub struct ComplexLattice {
    pub omega1: Complex64,
    pub omega2: Complex64,
}

impl ComplexLattice {
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        if omega1.norm() == 0.0 || omega2.norm() == 0.0 {
            return Err(Error::invalid_input("lattice periods must be nonzero"));
        }
        let tau = omega2 / omega1;
        if tau.im <= 0.0 || tau.im.is_nan() {
            return Err(Error::invalid_input(
                "periods must satisfy Im(omega2/omega1) > 0",
            ));
        }
        Ok(ComplexLattice { omega1, omega2 })
    }

    pub fn tau(&self) -> Complex64 {
        self.omega2 / self.omega1
    }

    /// Area of the fundamental parallelogram.
    pub fn covolume(&self) -> f64 {
        (self.omega1.conj() * self.omega2).im.abs()
    }

    /// Real coordinates `(a, b)` with `z = a w1 + b w2`.
    pub fn real_coords(&self, z: Complex64) -> (f64, f64) {
        let det = self.omega1.re * self.omega2.im - self.omega1.im * self.omega2.re;
        let a = (z.re * self.omega2.im - z.im * self.omega2.re) / det;
        let b = (self.omega1.re * z.im - self.omega1.im * z.re) / det;
        (a, b)
    }

    /// Nearest lattice point by rounded coordinates (checking the four
    /// surrounding corners), and the distance to it.
    pub fn dist_to_lattice(&self, z: Complex64) -> f64 {
        let (a, b) = self.real_coords(z);
        let mut best = f64::INFINITY;
        for da in [-1.0, 0.0, 1.0] {
            for db in [-1.0, 0.0, 1.0] {
                let m = a.round() + da;
                let n = b.round() + db;
                let d = (z - m * self.omega1 - n * self.omega2).norm();
                best = best.min(d);
            }
        }
        best
    }

    /// `z = z0 + m w1 + n w2` with coordinates of `z0` in `[-1/2, 1/2)`.
    fn reduce(&self, z: Complex64) -> (Complex64, i64, i64) {
        let (a, b) = self.real_coords(z);
        let m = a.round();
        let n = b.round();
        (z - m * self.omega1 - n * self.omega2, m as i64, n as i64)
    }

    /// Integer coordinates of a lattice vector, if `z` is one (within a
    /// relative tolerance scaled to the period sizes).
    pub fn integer_coords(&self, z: Complex64) -> Option<(i64, i64)> {
        let (a, b) = self.real_coords(z);
        let (m, n) = (a.round(), b.round());
        let err = (z - m * self.omega1 - n * self.omega2).norm();
        let scale = self.omega1.norm().min(self.omega2.norm());
        if err < 1e-9 * scale {
            Some((m as i64, n as i64))
        } else {
            None
        }
    }
}

/// Accuracy knobs: `radius` bounds the direct Eisenstein sums, `tol` is the
/// target residual for all verification contracts, and `pole_guard` is the
/// minimum allowed distance from any evaluated argument to the lattice.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TruncationPolicy {
    pub radius: f64,
    pub tol: f64,
    pub pole_guard: f64,
}

impl TruncationPolicy {
    pub fn new(radius: f64, tol: f64, pole_guard: f64) -> Self {
        TruncationPolicy {
            radius,
            tol,
            pole_guard,
        }
    }

    /// Default guard for arguments dilated by factors up to `pq`:
    /// `0.05 * min(|w1|, |w2|) / pq`.
    pub fn for_dilations(lat: &ComplexLattice, pq: u32, radius: f64, tol: f64) -> Self {
        let guard = 0.05 * lat.omega1.norm().min(lat.omega2.norm()) / pq as f64;
        TruncationPolicy {
            radius,
            tol,
            pole_guard: guard,
        }
    }
}

/// Theta-series values `(theta1, theta1', theta1'')` at `u`.
fn theta1_suite(u: Complex64, q: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
    let mut th = Complex64::ZERO;
    let mut thp = Complex64::ZERO;
    let mut thpp = Complex64::ZERO;
    let qln = q.norm().ln();
    let im_u = u.im.abs();
    let mut small_streak = 0;
    for n in 0..256u32 {
        let k = 2 * n + 1; // odd frequency
        let half = n as f64 + 0.5;
        let qpow = q.powf(half * half);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let arg = (k as f64) * u;
        let (s, c) = (arg.sin(), arg.cos());
        th += sign * qpow * s;
        thp += sign * (k as f64) * qpow * c;
        thpp -= sign * ((k * k) as f64) * qpow * s;
        // term magnitude bound |q|^{(n+1/2)^2} e^{(2n+1)|Im u|}
        let bound = (half * half * qln + (k as f64) * im_u).exp() * ((k * k) as f64);
        if bound < 1e-18 * (1.0 + th.norm()) {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok((2.0 * th, 2.0 * thp, 2.0 * thpp));
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::domain(
        "theta series did not converge; argument too far from the fundamental domain",
    ))
}

/// Per-lattice constants and evaluators. Construction computes the theta
/// moments at 0 and the two quasi-periods; `eta2` comes from an unreduced
/// `2 zeta(w2/2)` so the Legendre relation stays a genuine runtime check
/// rather than an identity of the implementation.
pub struct WeierstrassEngine {
    lat: ComplexLattice,
    q: Complex64,
    eta1: Complex64,
    eta2: Complex64,
}

impl WeierstrassEngine {
    pub fn new(lat: ComplexLattice) -> Result<Self> {
        let tau = lat.tau();
        let q = (Complex64::new(0.0, std::f64::consts::PI) * tau).exp();
        // moments theta1'(0) and theta1'''(0)
        let mut thp0 = Complex64::ZERO;
        let mut thppp0 = Complex64::ZERO;
        for n in 0..64u32 {
            let k = (2 * n + 1) as f64;
            let half = n as f64 + 0.5;
            let qpow = q.powf(half * half);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            thp0 += sign * k * qpow;
            thppp0 -= sign * k * k * k * qpow;
            if qpow.norm() < 1e-20 {
                break;
            }
        }
        let pi = std::f64::consts::PI;
        let eta1 = -(pi * pi) / (3.0 * lat.omega1) * (thppp0 / thp0);
        let mut engine = WeierstrassEngine {
            lat,
            q,
            eta1,
            eta2: Complex64::ZERO,
        };
        engine.eta2 = 2.0 * engine.zeta_base(lat.omega2 / 2.0)?;
        Ok(engine)
    }

    pub fn lattice(&self) -> &ComplexLattice {
        &self.lat
    }

    /// Quasi-period for the first period: `zeta(z + w1) - zeta(z)`.
    pub fn eta1(&self) -> Complex64 {
        self.eta1
    }

    pub fn eta2(&self) -> Complex64 {
        self.eta2
    }

    /// Theta-quotient form of `zeta`, valid near the fundamental domain.
    fn zeta_base(&self, z: Complex64) -> Result<Complex64> {
        let pi_w = Complex64::new(std::f64::consts::PI, 0.0) / self.lat.omega1;
        let u = pi_w * z;
        let (th, thp, _) = theta1_suite(u, self.q)?;
        Ok(self.eta1 * z / self.lat.omega1 + pi_w * (thp / th))
    }

    fn guard(&self, z: Complex64, t: &TruncationPolicy) -> Result<()> {
        if self.lat.dist_to_lattice(z) < t.pole_guard {
            return Err(Error::domain(format!(
                "argument {z} is within the pole guard of a lattice point"
            )));
        }
        Ok(())
    }

    /// `zeta(z)`: odd, with `zeta(z + w) - zeta(z) = eta(w)`. Arguments are
    /// reduced into the fundamental cell and corrected by quasi-periods.
    pub fn zeta(&self, z: Complex64, t: &TruncationPolicy) -> Result<Complex64> {
        self.guard(z, t)?;
        let (z0, m, n) = self.lat.reduce(z);
        Ok(self.zeta_base(z0)? + (m as f64) * self.eta1 + (n as f64) * self.eta2)
    }

    /// `wp(z) = -zeta'(z)`: even and fully periodic.
    pub fn wp(&self, z: Complex64, t: &TruncationPolicy) -> Result<Complex64> {
        self.guard(z, t)?;
        let (z0, _, _) = self.lat.reduce(z);
        let pi_w = Complex64::new(std::f64::consts::PI, 0.0) / self.lat.omega1;
        let u = pi_w * z0;
        let (th, thp, thpp) = theta1_suite(u, self.q)?;
        let g = thp / th;
        Ok(-self.eta1 / self.lat.omega1 - pi_w * pi_w * (thpp / th - g * g))
    }

    /// Quasi-period `eta(w)` for a lattice vector `w`: computed as
    /// `2 zeta(w/2)` when `w/2` is not itself a lattice point, and by
    /// additivity over the generators otherwise.
    pub fn eta(&self, omega: Complex64, t: &TruncationPolicy) -> Result<Complex64> {
        let Some((m, n)) = self.lat.integer_coords(omega) else {
            return Err(Error::invalid_input("eta requires a lattice vector"));
        };
        if m == 0 && n == 0 {
            return Err(Error::invalid_input("eta(0) is undefined"));
        }
        if m % 2 != 0 || n % 2 != 0 {
            return Ok(2.0 * self.zeta(omega / 2.0, t)?);
        }
        Ok((m as f64) * self.eta1 + (n as f64) * self.eta2)
    }

    /// `(g_p(z), g_q(z)) = (p zeta(qz) - zeta(pqz), q zeta(pz) - zeta(pqz))`.
    pub fn g_pair(
        &self,
        p: u32,
        q: u32,
        z: Complex64,
        t: &TruncationPolicy,
    ) -> Result<(Complex64, Complex64)> {
        let zq = self.zeta((q as f64) * z, t)?;
        let zp = self.zeta((p as f64) * z, t)?;
        let zpq = self.zeta(((p * q) as f64) * z, t)?;
        Ok(((p as f64) * zq - zpq, (q as f64) * zp - zpq))
    }

    /// `g_p` alone; its poles are only at `(1/q)L` and `(1/pq)L`.
    pub fn g_p(&self, p: u32, q: u32, z: Complex64, t: &TruncationPolicy) -> Result<Complex64> {
        let zq = self.zeta((q as f64) * z, t)?;
        let zpq = self.zeta(((p * q) as f64) * z, t)?;
        Ok((p as f64) * zq - zpq)
    }

    /// `g_q` alone; its poles are only at `(1/p)L` and `(1/pq)L`.
    pub fn g_q(&self, p: u32, q: u32, z: Complex64, t: &TruncationPolicy) -> Result<Complex64> {
        let zp = self.zeta((p as f64) * z, t)?;
        let zpq = self.zeta(((p * q) as f64) * z, t)?;
        Ok((q as f64) * zp - zpq)
    }

    /// Max-entry modulus of `A(z/q) B(z) - B(z/p) A(z)` for the upper
    /// triangular pair `A = [[1, g_p], [0, p]]`, `B = [[1, g_q], [0, q]]`.
    pub fn consistency_residual(
        &self,
        p: u32,
        q: u32,
        z: Complex64,
        t: &TruncationPolicy,
    ) -> Result<f64> {
        let (pf, qf) = (p as f64, q as f64);
        let a_at = |w: Complex64, t: &TruncationPolicy| -> Result<[[Complex64; 2]; 2]> {
            let gp = self.g_p(p, q, w, t)?;
            Ok([
                [Complex64::ONE, gp],
                [Complex64::ZERO, Complex64::new(pf, 0.0)],
            ])
        };
        let b_at = |w: Complex64, t: &TruncationPolicy| -> Result<[[Complex64; 2]; 2]> {
            let gq = self.g_q(p, q, w, t)?;
            Ok([
                [Complex64::ONE, gq],
                [Complex64::ZERO, Complex64::new(qf, 0.0)],
            ])
        };
        let lhs = mat2_mul(a_at(z / qf, t)?, b_at(z, t)?);
        let rhs = mat2_mul(b_at(z / pf, t)?, a_at(z, t)?);
        let mut max = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                max = max.max((lhs[i][j] - rhs[i][j]).norm());
            }
        }
        Ok(max)
    }

    /// Both consistency products collapse to the same scalar form
    /// `[[1, pq zeta(z) - zeta(pq z)], [0, pq]]`; the residual of each
    /// product against it is a stronger check than their mutual difference.
    pub fn scalar_reduction_residual(
        &self,
        p: u32,
        q: u32,
        z: Complex64,
        t: &TruncationPolicy,
    ) -> Result<f64> {
        let (pf, qf) = (p as f64, q as f64);
        let pq = pf * qf;
        let top = pq * self.zeta(z, t)? - self.zeta(pq * z, t)?;
        let target = [
            [Complex64::ONE, top],
            [Complex64::ZERO, Complex64::new(pq, 0.0)],
        ];
        let mut max = 0.0f64;
        let gp_zq = self.g_p(p, q, z / qf, t)?;
        let gq_z = self.g_q(p, q, z, t)?;
        let lhs = mat2_mul(
            [
                [Complex64::ONE, gp_zq],
                [Complex64::ZERO, Complex64::new(pf, 0.0)],
            ],
            [
                [Complex64::ONE, gq_z],
                [Complex64::ZERO, Complex64::new(qf, 0.0)],
            ],
        );
        let gq_zp = self.g_q(p, q, z / pf, t)?;
        let gp_z = self.g_p(p, q, z, t)?;
        let rhs = mat2_mul(
            [
                [Complex64::ONE, gq_zp],
                [Complex64::ZERO, Complex64::new(qf, 0.0)],
            ],
            [
                [Complex64::ONE, gp_z],
                [Complex64::ZERO, Complex64::new(pf, 0.0)],
            ],
        );
        for prod in [lhs, rhs] {
            for i in 0..2 {
                for j in 0..2 {
                    max = max.max((prod[i][j] - target[i][j]).norm());
                }
            }
        }
        Ok(max)
    }
}

fn mat2_mul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Direct Eisenstein-style truncated sum for `zeta`, summing lattice points
/// with `|w| <= radius`. Slowly convergent; used as the independent
/// cross-check route for the theta evaluators.
pub fn zeta_direct(z: Complex64, lat: &ComplexLattice, radius: f64) -> Complex64 {
    let mut acc = 1.0 / z;
    for omega in lattice_points_in_disk(lat, radius) {
        acc += 1.0 / (z - omega) + 1.0 / omega + z / (omega * omega);
    }
    acc
}

/// Direct truncated sum for `wp`.
pub fn wp_direct(z: Complex64, lat: &ComplexLattice, radius: f64) -> Complex64 {
    let mut acc = 1.0 / (z * z);
    for omega in lattice_points_in_disk(lat, radius) {
        let d = z - omega;
        acc += 1.0 / (d * d) - 1.0 / (omega * omega);
    }
    acc
}

/// Tail bound for the truncated `zeta` sum: each dropped term is
/// `z^2 / (w^2 (z - w))`, and comparison of the lattice sum with the
/// integral `int_R^inf r^{-2} dr` (point density `2 pi r / covol`) gives
/// `2 pi |z|^2 / (covol (R - |z|))`, doubled for boundary slack.
pub fn zeta_direct_tail_bound(lat: &ComplexLattice, z_abs: f64, radius: f64) -> f64 {
    assert!(radius > 2.0 * z_abs, "radius must dominate the argument");
    2.0 * std::f64::consts::TAU * z_abs * z_abs / (lat.covolume() * (radius - z_abs))
}

fn lattice_points_in_disk(lat: &ComplexLattice, radius: f64) -> Vec<Complex64> {
    // |m w1 + n w2| >= sigma_min * |(m, n)|, so a box of side radius /
    // sigma_min covers the disk
    let a = lat.omega1;
    let b = lat.omega2;
    let g11 = a.norm_sqr();
    let g22 = b.norm_sqr();
    let g12 = (a.conj() * b).re;
    let tr = g11 + g22;
    let det = g11 * g22 - g12 * g12;
    let sigma_min_sq = (tr - (tr * tr - 4.0 * det).sqrt()) / 2.0;
    let bound = (radius / sigma_min_sq.sqrt()).ceil() as i64;
    let mut pts = Vec::new();
    for m in -bound..=bound {
        for n in -bound..=bound {
            if m == 0 && n == 0 {
                continue;
            }
            let w = (m as f64) * a + (n as f64) * b;
            if w.norm() <= radius {
                pts.push(w);
            }
        }
    }
    pts
}

/// What to test for ellipticity.
#[derive(Clone, Debug)]
pub enum FnDescriptor {
    /// `g_p(z) = p zeta(qz) - zeta(pq z)`
    GP {
        p: u32,
        q: u32,
    },
    /// `g_q(z) = q zeta(pz) - zeta(pq z)`
    GQ {
        p: u32,
        q: u32,
    },
    /// The quasi-periodic `zeta` itself (expected to fail by `|eta|`).
    Zeta,
    Constant(f64),
    /// A general combination `sum c_i zeta(k_i z)`.
    ZetaCombination(Vec<(Complex64, u32)>),
}

impl FnDescriptor {
    fn dilations(&self) -> Vec<u32> {
        match self {
            FnDescriptor::GP { p, q } => vec![*q, p * q],
            FnDescriptor::GQ { p, q } => vec![*p, p * q],
            FnDescriptor::Zeta => vec![1],
            FnDescriptor::Constant(_) => vec![],
            FnDescriptor::ZetaCombination(terms) => terms.iter().map(|(_, k)| *k).collect(),
        }
    }

    fn eval(
        &self,
        engine: &WeierstrassEngine,
        z: Complex64,
        t: &TruncationPolicy,
    ) -> Result<Complex64> {
        match self {
            FnDescriptor::GP { p, q } => engine.g_p(*p, *q, z, t),
            FnDescriptor::GQ { p, q } => engine.g_q(*p, *q, z, t),
            FnDescriptor::Zeta => engine.zeta(z, t),
            FnDescriptor::Constant(c) => Ok(Complex64::new(*c, 0.0)),
            FnDescriptor::ZetaCombination(terms) => {
                let mut acc = Complex64::ZERO;
                for (c, k) in terms {
                    acc += c * engine.zeta((*k as f64) * z, t)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Max residual `|f(z + w) - f(z)|` over random fundamental-domain probes
/// and both periods.
#[derive(Clone, Debug, Serialize)]
pub struct EllipticityReport {
    pub max_residual: f64,
    pub argmax_re: f64,
    pub argmax_im: f64,
    pub samples: usize,
    pub tol: f64,
    pub pass: bool,
}

/// Samples a probe whose dilated arguments all stay clear of the poles.
/// Bounded retries; pole-crowded policies produce a domain error.
pub fn sample_probe(
    rng: &mut ChaCha8Rng,
    lat: &ComplexLattice,
    dilations: &[u32],
    t: &TruncationPolicy,
) -> Result<Complex64> {
    for _ in 0..200 {
        let a: f64 = rng.random();
        let b: f64 = rng.random();
        let z = a * lat.omega1 + b * lat.omega2;
        let clear = dilations
            .iter()
            .all(|&k| lat.dist_to_lattice((k as f64) * z) >= t.pole_guard)
            && lat.dist_to_lattice(z) >= t.pole_guard;
        if clear {
            return Ok(z);
        }
    }
    Err(Error::domain("could not sample a probe clear of all poles"))
}

pub fn verify_elliptic(
    desc: &FnDescriptor,
    lat: &ComplexLattice,
    samples: usize,
    seed: u64,
    t: &TruncationPolicy,
) -> Result<EllipticityReport> {
    let engine = WeierstrassEngine::new(*lat)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dil = desc.dilations();
    let mut max_residual = 0.0f64;
    let mut argmax = Complex64::ZERO;
    for _ in 0..samples {
        let z = sample_probe(&mut rng, lat, &dil, t)?;
        let f = desc.eval(&engine, z, t)?;
        for omega in [lat.omega1, lat.omega2] {
            let res = (desc.eval(&engine, z + omega, t)? - f).norm();
            if res > max_residual {
                max_residual = res;
                argmax = z;
            }
        }
    }
    Ok(EllipticityReport {
        max_residual,
        argmax_re: argmax.re,
        argmax_im: argmax.im,
        samples,
        tol: t.tol,
        pass: max_residual < t.tol,
    })
}

/// One named residual check inside a verification suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub max_residual: f64,
    pub bound: f64,
    pub pass: bool,
    pub argmax_re: f64,
    pub argmax_im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<SuiteCheck>,
    pub probes: usize,
    pub seed: u64,
    pub policy: TruncationPolicy,
    pub pass: bool,
}

/// The full verification suite for one lattice and one dilation pair:
/// quasi-periodicity of `zeta` for both periods, the Legendre relation,
/// ellipticity of `g_p` and `g_q`, the matrix consistency equation and its
/// scalar reduction, the finite-difference law `zeta' = -wp`, and agreement
/// of the theta route with the direct Eisenstein sums within their tail
/// bound.
pub fn verification_suite(
    lat: &ComplexLattice,
    p: u32,
    q: u32,
    probes: usize,
    seed: u64,
    t: &TruncationPolicy,
) -> Result<SuiteReport> {
    let engine = WeierstrassEngine::new(*lat)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<SuiteCheck> = Vec::new();
    let sweep = |name: &str,
                 bound: f64,
                 rng: &mut ChaCha8Rng,
                 dil: &[u32],
                 n: usize,
                 sample_t: &TruncationPolicy,
                 f: &mut dyn FnMut(Complex64) -> Result<f64>|
     -> Result<SuiteCheck> {
        let mut max = 0.0f64;
        let mut argmax = Complex64::ZERO;
        for _ in 0..n {
            let z = sample_probe(rng, lat, dil, sample_t)?;
            let r = f(z)?;
            if r > max {
                max = r;
                argmax = z;
            }
        }
        Ok(SuiteCheck {
            name: name.to_string(),
            max_residual: max,
            bound,
            pass: max < bound,
            argmax_re: argmax.re,
            argmax_im: argmax.im,
        })
    };

    checks.push(sweep(
        "zeta_quasi_periodicity",
        t.tol,
        &mut rng,
        &[1],
        probes,
        t,
        &mut |z| {
            let base = engine.zeta(z, t)?;
            let r1 = (engine.zeta(z + lat.omega1, t)? - base - engine.eta1()).norm();
            let r2 = (engine.zeta(z + lat.omega2, t)? - base - engine.eta2()).norm();
            Ok(r1.max(r2))
        },
    )?);

    let legendre = (engine.eta1() * lat.omega2 - engine.eta2() * lat.omega1 - TWO_PI_I).norm();
    checks.push(SuiteCheck {
        name: "legendre_relation".into(),
        max_residual: legendre,
        bound: t.tol,
        pass: legendre < t.tol,
        argmax_re: 0.0,
        argmax_im: 0.0,
    });

    for (name, desc) in [
        ("g_p_elliptic", FnDescriptor::GP { p, q }),
        ("g_q_elliptic", FnDescriptor::GQ { p, q }),
    ] {
        let dil = desc.dilations();
        checks.push(sweep(name, t.tol, &mut rng, &dil, probes, t, &mut |z| {
            let f = desc.eval(&engine, z, t)?;
            let r1 = (desc.eval(&engine, z + lat.omega1, t)? - f).norm();
            let r2 = (desc.eval(&engine, z + lat.omega2, t)? - f).norm();
            Ok(r1.max(r2))
        })?);
    }

    let dil_all = [1, p, q, p * q];
    checks.push(sweep(
        "consistency_equation",
        t.tol,
        &mut rng,
        &dil_all,
        probes,
        t,
        &mut |z| engine.consistency_residual(p, q, z, t),
    )?);
    checks.push(sweep(
        "scalar_reduction",
        t.tol,
        &mut rng,
        &dil_all,
        probes,
        t,
        &mut |z| engine.scalar_reduction_residual(p, q, z, t),
    )?);

    // The centered difference carries a truncation error of order
    // h^2 |zeta'''| ~ h^2 / d^4 at distance d from a pole, so this sweep
    // keeps a wider margin than the evaluation guard.
    let fd_policy = TruncationPolicy {
        pole_guard: t
            .pole_guard
            .max(0.08 * lat.omega1.norm().min(lat.omega2.norm())),
        ..*t
    };
    let fd_t = &fd_policy;
    checks.push(sweep(
        "zeta_derivative_is_minus_wp",
        1e-5,
        &mut rng,
        &[1],
        probes,
        fd_t,
        &mut |z| {
            let h = 1e-5;
            let fd = (engine.zeta(z + h, fd_t)? - engine.zeta(z - h, fd_t)?) / (2.0 * h);
            Ok((fd + engine.wp(z, fd_t)?).norm())
        },
    )?);

    // independent-route agreement on a handful of probes
    let cross_n = probes.clamp(1, 8);
    let mut worst_ratio = 0.0f64;
    let mut argmax = Complex64::ZERO;
    for _ in 0..cross_n {
        let z = sample_probe(&mut rng, lat, &[1], t)?;
        let (z0, _, _) = lat.reduce(z);
        if z0.norm() < t.pole_guard {
            continue;
        }
        let theta_route = engine.zeta(z0, t)?;
        let direct = zeta_direct(z0, lat, t.radius);
        let bound = zeta_direct_tail_bound(lat, z0.norm(), t.radius);
        let ratio = (theta_route - direct).norm() / bound;
        if ratio > worst_ratio {
            worst_ratio = ratio;
            argmax = z0;
        }
    }
    checks.push(SuiteCheck {
        name: "direct_sum_crosscheck".into(),
        max_residual: worst_ratio,
        bound: 1.0,
        pass: worst_ratio < 1.0,
        argmax_re: argmax.re,
        argmax_im: argmax.im,
    });

    let pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport {
        checks,
        probes,
        seed,
        policy: *t,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ComplexLattice {
        ComplexLattice::new(Complex64::ONE, Complex64::I).unwrap()
    }

    fn skew() -> ComplexLattice {
        ComplexLattice::new(Complex64::ONE, Complex64::new(0.3, 1.2)).unwrap()
    }

    fn policy() -> TruncationPolicy {
        TruncationPolicy::for_dilations(&square(), 15, 30.0, 1e-8)
    }

    #[test]
    fn lattice_validation() {
        assert!(ComplexLattice::new(Complex64::ONE, Complex64::new(2.0, 0.0)).is_err());
        assert!(ComplexLattice::new(Complex64::ZERO, Complex64::I).is_err());
        assert!(ComplexLattice::new(Complex64::I, Complex64::ONE).is_err());
    }

    #[test]
    fn zeta_is_odd_and_matches_direct_sum() {
        for lat in [square(), skew()] {
            let t = TruncationPolicy::for_dilations(&lat, 15, 30.0, 1e-8);
            let engine = WeierstrassEngine::new(lat).unwrap();
            let probes = [
                Complex64::new(0.31, 0.17),
                Complex64::new(-0.22, 0.4),
                Complex64::new(0.11, -0.35),
            ];
            for z in probes {
                let v = engine.zeta(z, &t).unwrap();
                let odd = engine.zeta(-z, &t).unwrap();
                assert!((v + odd).norm() < 1e-10, "zeta not odd at {z}");
                // independent route: truncated Eisenstein sum
                let direct = zeta_direct(z, &lat, t.radius);
                let bound = zeta_direct_tail_bound(&lat, z.norm(), t.radius);
                assert!(
                    (v - direct).norm() < bound,
                    "theta vs direct at {z}: {} vs bound {}",
                    (v - direct).norm(),
                    bound
                );
            }
        }
    }

    #[test]
    fn zeta_quasi_periodicity() {
        let lat = square();
        let t = policy();
        let engine = WeierstrassEngine::new(lat).unwrap();
        let z = Complex64::new(0.23, 0.34);
        let d1 = engine.zeta(z + lat.omega1, &t).unwrap() - engine.zeta(z, &t).unwrap();
        assert!((d1 - engine.eta1()).norm() < 1e-10);
        let d2 = engine.zeta(z + lat.omega2, &t).unwrap() - engine.zeta(z, &t).unwrap();
        assert!((d2 - engine.eta2()).norm() < 1e-10);
        // eta1 is a nonzero constant
        assert!(engine.eta1().norm() > 1e-3);
    }

    #[test]
    fn legendre_relation() {
        for lat in [square(), skew()] {
            let engine = WeierstrassEngine::new(lat).unwrap();
            let legendre = engine.eta1() * lat.omega2 - engine.eta2() * lat.omega1;
            assert!(
                (legendre - TWO_PI_I).norm() < 1e-10,
                "legendre residual {}",
                (legendre - TWO_PI_I).norm()
            );
        }
    }

    #[test]
    fn wp_even_periodic_and_derivative_of_minus_zeta() {
        let lat = skew();
        let t = TruncationPolicy::for_dilations(&lat, 15, 30.0, 1e-8);
        let engine = WeierstrassEngine::new(lat).unwrap();
        let z = Complex64::new(0.27, 0.41);
        let wp = engine.wp(z, &t).unwrap();
        assert!((wp - engine.wp(-z, &t).unwrap()).norm() < 1e-10);
        assert!((wp - engine.wp(z + lat.omega1, &t).unwrap()).norm() < 1e-10);
        // finite-difference zeta' vs -wp
        let h = 1e-5;
        let fd = (engine.zeta(z + h, &t).unwrap() - engine.zeta(z - h, &t).unwrap()) / (2.0 * h);
        assert!((fd + wp).norm() < 1e-5);
        // direct-sum route for wp as well
        let direct = wp_direct(z, &lat, 60.0);
        assert!(
            (wp - direct).norm() < 0.05,
            "wp theta vs direct: {}",
            (wp - direct).norm()
        );
    }

    #[test]
    fn eta_additivity_and_oddness() {
        let lat = square();
        let t = policy();
        let engine = WeierstrassEngine::new(lat).unwrap();
        let sum = engine.eta(lat.omega1 + lat.omega2, &t).unwrap();
        let parts = engine.eta(lat.omega1, &t).unwrap() + engine.eta(lat.omega2, &t).unwrap();
        assert!((sum - parts).norm() < 1e-10);
        let neg = engine.eta(-lat.omega1, &t).unwrap();
        assert!((neg + engine.eta(lat.omega1, &t).unwrap()).norm() < 1e-10);
        // measured quasi-period matches eta for a composite vector
        let omega = 2.0 * lat.omega1 + lat.omega2;
        let z = Complex64::new(0.21, 0.13);
        let measured = engine.zeta(z + omega, &t).unwrap() - engine.zeta(z, &t).unwrap();
        assert!((measured - engine.eta(omega, &t).unwrap()).norm() < 1e-9);
        assert!(engine.eta(Complex64::ZERO, &t).is_err());
        assert!(engine.eta(Complex64::new(0.5, 0.0), &t).is_err());
    }

    #[test]
    fn g_pair_elliptic_and_scalar_identity() {
        let lat = square();
        let t = policy();
        let engine = WeierstrassEngine::new(lat).unwrap();
        let (p, q) = (2u32, 3u32);
        let z = Complex64::new(0.29, 0.37);
        let (gp, gq) = engine.g_pair(p, q, z, &t).unwrap();
        // oddness
        let (gp_neg, _) = engine.g_pair(p, q, -z, &t).unwrap();
        assert!((gp + gp_neg).norm() < 1e-9);
        // ellipticity at one probe
        let (gp_shift, gq_shift) = engine.g_pair(p, q, z + lat.omega1, &t).unwrap();
        assert!((gp - gp_shift).norm() < 1e-9);
        assert!((gq - gq_shift).norm() < 1e-9);
        // g_q(z) + q g_p(z/q) == pq zeta(z) - zeta(pq z)
        let (gp_zq, _) = engine.g_pair(p, q, z / (q as f64), &t).unwrap();
        let scalar = 6.0 * engine.zeta(z, &t).unwrap() - engine.zeta(6.0 * z, &t).unwrap();
        assert!((gq + 3.0 * gp_zq - scalar).norm() < 1e-9);
    }

    #[test]
    fn consistency_equation_residuals() {
        for lat in [square(), skew()] {
            let engine = WeierstrassEngine::new(lat).unwrap();
            for (p, q) in [(2u32, 3u32), (3, 5), (2, 5)] {
                let t = TruncationPolicy::for_dilations(&lat, p * q, 30.0, 1e-8);
                let mut rng = ChaCha8Rng::seed_from_u64(11);
                for _ in 0..20 {
                    let z = sample_probe(&mut rng, &lat, &[1, p, q, p * q], &t).unwrap();
                    let res = engine.consistency_residual(p, q, z, &t).unwrap();
                    assert!(res < 1e-8, "(p,q)=({p},{q}) at {z}: {res}");
                    let strong = engine.scalar_reduction_residual(p, q, z, &t).unwrap();
                    assert!(strong < 1e-8, "scalar reduction at {z}: {strong}");
                }
            }
        }
    }

    #[test]
    fn consistency_symmetric_probes() {
        let lat = square();
        let t = policy();
        let engine = WeierstrassEngine::new(lat).unwrap();
        let z = Complex64::new(0.23, 0.0);
        let r1 = engine.consistency_residual(2, 3, z, &t).unwrap();
        let r2 = engine.consistency_residual(2, 3, -z, &t).unwrap();
        assert!((r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn verify_elliptic_reports() {
        let lat = square();
        let t = policy();
        let rep = verify_elliptic(&FnDescriptor::GP { p: 2, q: 3 }, &lat, 25, 7, &t).unwrap();
        assert!(rep.pass, "g_p residual {}", rep.max_residual);
        let rep = verify_elliptic(&FnDescriptor::Constant(4.2), &lat, 10, 7, &t).unwrap();
        assert!(rep.pass);
        // zeta itself fails with residual about |eta|
        let engine = WeierstrassEngine::new(lat).unwrap();
        let rep = verify_elliptic(&FnDescriptor::Zeta, &lat, 25, 7, &t).unwrap();
        assert!(!rep.pass);
        let eta_min = engine.eta1().norm().min(engine.eta2().norm());
        assert!(rep.max_residual > 0.5 * eta_min);
    }

    #[test]
    fn pole_guard_rejects_near_lattice() {
        let lat = square();
        let t = policy();
        let engine = WeierstrassEngine::new(lat).unwrap();
        assert!(engine.zeta(Complex64::new(1e-9, 0.0), &t).is_err());
        assert!(engine
            .zeta(Complex64::new(1.0, 1.0) + Complex64::new(1e-12, 0.0), &t)
            .is_err());
    }

    #[test]
    fn suite_passes_on_both_lattices() {
        for lat in [square(), skew()] {
            let t = TruncationPolicy::for_dilations(&lat, 6, 30.0, 1e-8);
            let rep = verification_suite(&lat, 2, 3, 12, 3, &t).unwrap();
            assert!(rep.pass, "{:#?}", rep.checks);
        }
    }

    #[test]
    fn truncation_self_consistency() {
        // doubling the radius moves the direct sum by less than the
        // documented tail bound at the smaller radius
        let lat = square();
        let z = Complex64::new(0.3, 0.2);
        for r in [20.0, 40.0] {
            let v1 = zeta_direct(z, &lat, r);
            let v2 = zeta_direct(z, &lat, 2.0 * r);
            let bound = zeta_direct_tail_bound(&lat, z.norm(), r);
            assert!(
                (v1 - v2).norm() < bound,
                "radius {r}: {} vs {bound}",
                (v1 - v2).norm()
            );
        }
    }
}
