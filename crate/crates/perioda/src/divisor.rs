//! Divisors on `C/Lambda` in exact rational coordinates: degree and
//! Abel-Jacobi certificates, special-cocycle validation, and the coboundary
//! solver that trivializes a compatible divisor pair.
//!
//! Coordinates are rational pairs with respect to the period basis, so
//! Abel-Jacobi membership tests are exact. Supports are restricted to
//! `M = Q*Lambda`: the whole pipeline only ever produces such supports from
//! such inputs, and one documented consequence is that "principal in K"
//! degenerates to the degree-0 condition. Divisors are certified, never
//! realized as analytic functions.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::point::{Point, Rat};
use crate::reconstruct::{cocycle_witness, reconstruct_periodic, CocycleWitness};
use crate::sparse::{QuasiPeriodicFn, Window};

/// An integer-valued quasi-periodic function of rank 2 with support in
/// `M = Q*Lambda`. Unlike general quasi-periodic functions, a divisor has no
/// independent modification at 0: its `zero_value` always equals its
/// `0`-coset entry.
#[derive(Clone, Debug)]
pub struct Divisor {
    f: QuasiPeriodicFn,
}

impl Divisor {
    pub fn new(f: QuasiPeriodicFn) -> Result<Self> {
        if f.rank() != 2 {
            return Err(Error::invalid_input("divisors live on rank-2 lattices"));
        }
        for (p, v) in f.entries() {
            if !v.is_integer() {
                return Err(Error::invalid_input(format!(
                    "divisor value {v} at {p} is not an integer"
                )));
            }
            if !p.is_rational() {
                return Err(Error::invalid_input(format!(
                    "divisor support must lie in M = Q*Lambda; {p} does not"
                )));
            }
        }
        if *f.zero_value() != f.value_at_zero_coset() {
            return Err(Error::invalid_input(
                "a divisor's value at 0 must equal its 0-coset entry",
            ));
        }
        Ok(Divisor { f })
    }

    /// Builds a divisor from integer multiplicities; the value at 0 is taken
    /// from the resulting 0-coset entry.
    pub fn from_entries(
        lattice: Lattice,
        entries: impl IntoIterator<Item = (Point, i64)>,
    ) -> Result<Self> {
        let f = QuasiPeriodicFn::new(
            lattice,
            entries
                .into_iter()
                .map(|(p, v)| (p, Rat::from_integer(BigInt::from(v)))),
            Rat::zero(),
        )?;
        let zero = f.value_at_zero_coset();
        let f = QuasiPeriodicFn::new(
            f.lattice().clone(),
            f.entries().map(|(p, v)| (p.clone(), v.clone())),
            zero,
        )?;
        Divisor::new(f)
    }

    pub fn zero(lattice: Lattice) -> Result<Self> {
        Divisor::new(QuasiPeriodicFn::zero(lattice))
    }

    pub fn underlying(&self) -> &QuasiPeriodicFn {
        &self.f
    }

    pub fn lattice(&self) -> &Lattice {
        self.f.lattice()
    }

    /// `d(0)` as an integer (the order of the mirrored function at 0).
    pub fn value_at_zero(&self) -> BigInt {
        self.f.zero_value().to_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero_fn()
    }

    /// The divisor `z -> d(m z) - d(z)`, the divisor of `f(mz)/f(z)`.
    pub fn dilate_diff(&self, m: u32) -> Divisor {
        let g = self.f.dilate_diff(m);
        // dilation differences vanish on all of Lambda, so the invariant
        // zero_value == 0-coset entry holds with both sides zero
        Divisor::new(g).expect("dilation difference of a divisor is a divisor")
    }
}

/// Degree of `d` over a fundamental domain of `l`: the entry sum scaled by
/// the index `[Lambda_d : l]`. Requires `d` to be `l`-periodic, i.e. `l` a
/// sublattice of the divisor's lattice.
pub fn degree(d: &Divisor, l: &Lattice) -> Result<BigInt> {
    if !l.is_sublattice_of(d.lattice()) {
        return Err(Error::invalid_input(
            "divisor is not periodic for the requested lattice",
        ));
    }
    let index = d.lattice().index_of_sublattice(l)?;
    let sum: Rat = d.f.entries().map(|(_, v)| v.clone()).sum();
    Ok(index * sum.to_integer())
}

/// `sum z * d(z)` over the `reduce(l, .)`-representatives of one fundamental
/// domain of `l`. Well-defined mod `l`: changing representatives shifts the
/// sum by lattice elements (the multiplicities are integers).
pub fn aj_sum(d: &Divisor, l: &Lattice) -> Result<Point> {
    if !l.is_sublattice_of(d.lattice()) {
        return Err(Error::invalid_input(
            "divisor is not periodic for the requested lattice",
        ));
    }
    let deltas = d.lattice().coset_reps_mod(l)?;
    let mut acc = Point::zero(2);
    for (s, v) in d.f.sorted_entries() {
        for delta in &deltas {
            let rep = l.reduce(&s.add(delta))?;
            acc = acc.add(&rep.scale(v));
        }
    }
    Ok(acc)
}

/// Abel-Jacobi certificate: principal for `l` iff degree 0 and the weighted
/// point sum lies in `l`. `principal_in_k` is the weaker field-level verdict,
/// which for rational supports is exactly the degree condition.
#[derive(Clone, Debug)]
pub struct PrincipalityCertificate {
    pub lattice_used: Lattice,
    pub degree: BigInt,
    pub aj: Point,
    pub verdict: bool,
    pub principal_in_k: bool,
}

pub fn principality_certificate(d: &Divisor, l: &Lattice) -> Result<PrincipalityCertificate> {
    let deg = degree(d, l)?;
    let aj = aj_sum(d, l)?;
    let deg_zero = deg.is_zero();
    let verdict = deg_zero && l.contains(&aj)?;
    Ok(PrincipalityCertificate {
        lattice_used: l.clone(),
        degree: deg,
        aj,
        verdict,
        principal_in_k: deg_zero,
    })
}

/// A 1-cocycle on the free abelian group generated by the two dilations,
/// determined by its values on the generators.
#[derive(Clone, Debug)]
pub struct CocyclePair {
    pub d_sigma: Divisor,
    pub d_tau: Divisor,
    pub p: u32,
    pub q: u32,
}

impl CocyclePair {
    pub fn new(d_sigma: Divisor, d_tau: Divisor, p: u32, q: u32) -> Result<Self> {
        if p < 2 || q < 2 {
            return Err(Error::invalid_input("dilation factors must be >= 2"));
        }
        if !arith::multiplicatively_independent(p as u64, q as u64) {
            return Err(Error::invalid_input(format!(
                "{p} and {q} are multiplicatively dependent"
            )));
        }
        if !d_sigma.lattice().same_lattice(d_tau.lattice()) {
            return Err(Error::invalid_input(
                "cocycle divisors must share one lattice",
            ));
        }
        Ok(CocyclePair {
            d_sigma,
            d_tau,
            p,
            q,
        })
    }
}

/// Outcome of validating a cocycle pair: the commutation identity
/// `d_tau(pz) - d_tau(z) == d_sigma(qz) - d_sigma(z)` checked exactly on
/// cosets, and vanishing at 0 ("special"), which the constant-term identity
/// `p^{d_tau(0)} = q^{d_sigma(0)}` forces under multiplicative independence.
#[derive(Clone, Debug)]
pub struct SpecialCocycleReport {
    pub cocycle_ok: bool,
    pub witness: Option<CocycleWitness>,
    pub sigma_at_zero: BigInt,
    pub tau_at_zero: BigInt,
    pub special: bool,
}

impl SpecialCocycleReport {
    pub fn pass(&self) -> bool {
        self.cocycle_ok && self.special
    }
}

pub fn check_special_cocycle(c: &CocyclePair) -> Result<SpecialCocycleReport> {
    let witness = cocycle_witness(c.d_sigma.underlying(), c.d_tau.underlying(), c.p, c.q);
    let sigma_at_zero = c.d_sigma.value_at_zero();
    let tau_at_zero = c.d_tau.value_at_zero();
    let special = sigma_at_zero.is_zero() && tau_at_zero.is_zero();
    Ok(SpecialCocycleReport {
        cocycle_ok: witness.is_none(),
        witness,
        sigma_at_zero,
        tau_at_zero,
        special,
    })
}

/// Result of trivializing a special cocycle: the divisor `e` with
/// `d_sigma = e(pz) - e(z)` and `d_tau = e(qz) - e(z)` (verified exactly),
/// together with its principality certificate for the shrunk lattice
/// `Lambda' = gcd(p-1, q-1) * lattice_f`.
#[derive(Clone, Debug)]
pub struct CoboundarySolution {
    pub e: Divisor,
    pub certificate: PrincipalityCertificate,
    pub lattice_prime: Lattice,
    pub shrink: u32,
}

/// Solves `d_gamma = gamma(e) - e` for a special cocycle with coprime
/// dilations whose generators are principal divisors for `lattice_f` (the
/// lattice of the ambient elliptic functions).
///
/// The candidate is built by telescoping through the reconstruction routine
/// and fixed at 0 by its constant; principality for `Lambda' = D*lattice_f`
/// is then certified through degree and Abel-Jacobi sums, which the
/// telescoped relations `(p^2-1) sum e` and `(p-1) sum z e(z)` guarantee.
///
/// Specialness is checked directly. The cocycle commutation identity is not
/// scanned up front: a successful reconstruction certificate implies it
/// (both inputs are then dilation differences of one divisor), and on
/// failure the reconstruction routine itself reports a commutation witness.
pub fn solve_coboundary(
    c: &CocyclePair,
    lattice_f: &Lattice,
    window: &Window,
) -> Result<CoboundarySolution> {
    if num_integer::gcd(c.p, c.q) != 1 {
        return Err(Error::invalid_input(
            "coboundary solving requires coprime dilation factors",
        ));
    }
    let sigma_at_zero = c.d_sigma.value_at_zero();
    let tau_at_zero = c.d_tau.value_at_zero();
    if !sigma_at_zero.is_zero() || !tau_at_zero.is_zero() {
        return Err(Error::invalid_input(format!(
            "cocycle is not special: d_sigma(0) = {sigma_at_zero}, d_tau(0) = {tau_at_zero}"
        )));
    }
    for (name, d) in [("d_sigma", &c.d_sigma), ("d_tau", &c.d_tau)] {
        let cert = principality_certificate(d, lattice_f)?;
        if !cert.verdict {
            return Err(Error::invalid_input(format!(
                "{name} is not principal for the given function lattice \
                 (degree {}, aj {})",
                cert.degree, cert.aj
            )));
        }
    }

    let recon = reconstruct_periodic(
        c.d_sigma.underlying(),
        c.d_tau.underlying(),
        c.p,
        c.q,
        window,
    )?;
    let e = Divisor::new(recon.result)
        .map_err(|err| Error::internal(format!("telescoped coboundary is not a divisor: {err}")))?;

    let shrink = num_integer::gcd(c.p - 1, c.q - 1);
    let lattice_prime = lattice_f.scaled_int(shrink);
    let certificate = principality_certificate(&e, &lattice_prime)?;
    if !certificate.verdict {
        return Err(Error::theorem_violation(format!(
            "coboundary divisor failed its Abel-Jacobi certificate for the \
             shrunk lattice (degree {}, aj {})",
            certificate.degree, certificate.aj
        )));
    }
    Ok(CoboundarySolution {
        e,
        certificate,
        lattice_prime,
        shrink,
    })
}

/// The exponent `m = e(0) - ord_0(f)` for which `z^m f(z)` has the divisor
/// value `e(0)` at the origin.
pub fn monomial_shift(e: &Divisor, ord0_f: i64) -> BigInt {
    e.value_at_zero() - BigInt::from(ord0_f)
}
