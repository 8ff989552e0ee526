//! Lattice-quasi-periodic functions with finite coset support, their
//! dilation differences `f(mx) - f(x)`, and lazy telescoping sums
//! `x -> sum_{i>=1} g(x/m^i)`.
//!
//! A [`QuasiPeriodicFn`] stores one exact value per support coset plus an
//! explicit, independent value at the single point `0` (the "modification at
//! 0"): evaluation at `0` returns `zero_value`, never the `0`-coset entry,
//! while evaluation at a nonzero lattice point returns the `0`-coset entry.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::point::{Point, Rat, Scalar};

/// Anything that can be evaluated exactly at a point.
pub trait PointFn {
    fn rank(&self) -> usize;
    fn eval(&self, x: &Point) -> Rat;
}

/// A `Lambda`-periodic function given by finitely many coset entries and an
/// explicit override value at `0`.
#[derive(Clone, Debug)]
pub struct QuasiPeriodicFn {
    lattice: Lattice,
    entries: HashMap<Point, Rat>,
    zero_value: Rat,
}

impl QuasiPeriodicFn {
    /// Builds a function from raw `(point, value)` pairs. Points are reduced
    /// into the fundamental domain, duplicate cosets are summed, and zero
    /// values are dropped.
    pub fn new(
        lattice: Lattice,
        entries: impl IntoIterator<Item = (Point, Rat)>,
        zero_value: Rat,
    ) -> Result<Self> {
        let mut map: HashMap<Point, Rat> = HashMap::new();
        for (p, v) in entries {
            if p.rank() != lattice.rank() {
                return Err(Error::RankMismatch {
                    expected: lattice.rank(),
                    got: p.rank(),
                });
            }
            if v.is_zero() {
                continue;
            }
            let key = lattice.reduce_unchecked(&p);
            let slot = map.entry(key).or_insert_with(Rat::zero);
            *slot += v;
        }
        map.retain(|_, v| !v.is_zero());
        Ok(QuasiPeriodicFn {
            lattice,
            entries: map,
            zero_value,
        })
    }

    pub fn zero(lattice: Lattice) -> Self {
        QuasiPeriodicFn {
            lattice,
            entries: HashMap::new(),
            zero_value: Rat::zero(),
        }
    }

    /// Indicator-style constructor: value 1 on each listed coset, 0 at 0.
    pub fn indicator(lattice: Lattice, points: &[Point]) -> Result<Self> {
        QuasiPeriodicFn::new(
            lattice,
            points.iter().map(|p| (p.clone(), Rat::one())),
            Rat::zero(),
        )
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn zero_value(&self) -> &Rat {
        &self.zero_value
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero_fn(&self) -> bool {
        self.entries.is_empty() && self.zero_value.is_zero()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Point, &Rat)> {
        self.entries.iter()
    }

    /// Entries in ascending key order, for deterministic output.
    pub fn sorted_entries(&self) -> Vec<(&Point, &Rat)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Support cosets as reduced representatives.
    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.entries.keys()
    }

    /// The value on the coset of `x`, ignoring the modification at 0.
    pub fn value_on_coset(&self, x: &Point) -> Rat {
        let key = self.lattice.reduce_unchecked(x);
        self.entries.get(&key).cloned().unwrap_or_else(Rat::zero)
    }

    /// Value of an already-reduced representative.
    pub(crate) fn value_on_reduced(&self, key: &Point) -> Rat {
        self.entries.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn value_at_zero_coset(&self) -> Rat {
        self.entries
            .get(&Point::zero(self.rank()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Re-keys the entries with respect to another basis of the same
    /// lattice, so maps can be compared key-by-key.
    pub fn renormalized_to(&self, lattice: &Lattice) -> Result<Self> {
        if !lattice.same_lattice(&self.lattice) {
            return Err(Error::invalid_input(
                "renormalization requires an equal lattice",
            ));
        }
        QuasiPeriodicFn::new(
            lattice.clone(),
            self.entries.iter().map(|(p, v)| (p.clone(), v.clone())),
            self.zero_value.clone(),
        )
    }

    /// Reinterprets the function over a full-rank sublattice, splitting each
    /// coset into `[Lambda : sub]` sublattice cosets.
    pub fn refine_to(&self, sub: &Lattice) -> Result<Self> {
        let reps = self.lattice.coset_reps_mod(sub)?;
        let mut raw = Vec::with_capacity(self.entries.len() * reps.len());
        for (p, v) in &self.entries {
            for delta in &reps {
                raw.push((p.add(delta), v.clone()));
            }
        }
        QuasiPeriodicFn::new(sub.clone(), raw, self.zero_value.clone())
    }

    /// The dilation difference `x -> f(mx) - f(x)` in closed form over the
    /// same lattice. The support of the result is contained in
    /// `m^{-1}(supp f) union supp f`, finitely many cosets mod `Lambda`.
    pub fn dilate_diff(&self, m: u32) -> QuasiPeriodicFn {
        assert!(m >= 2, "dilation factor must be at least 2");
        let r = self.rank();
        let mr = Rat::from_integer(BigInt::from(m));
        let identity = self.lattice.is_standard_basis();
        let mut acc: HashMap<Point, Rat> = HashMap::with_capacity(
            self.entries.len() * (m as usize).pow(r as u32).saturating_add(1),
        );

        for (s, v) in &self.entries {
            // Pullback part: +v on every coset x with m*x == s (mod Lambda).
            // In basis coordinates these are exactly (sigma + c)/m for digit
            // vectors c in [0,m)^r, already reduced since sigma is in [0,1)^r.
            let sigma = self.lattice.coords(&s.rat_coords());
            let irr_div: Vec<Rat> = s.coords.iter().map(|sc| &sc.irr / &mr).collect();
            // per-coordinate coordinate values (sigma_j + c)/m
            let coord_vals: Vec<Vec<Rat>> = sigma
                .iter()
                .map(|sj| {
                    (0..m)
                        .map(|c| (sj + Rat::from_integer(BigInt::from(c))) / &mr)
                        .collect()
                })
                .collect();
            // for a non-identity basis, precompute column contributions
            let col_contrib: Option<Vec<Vec<Vec<Rat>>>> = if identity {
                None
            } else {
                let b = self.lattice.basis();
                Some(
                    (0..r)
                        .map(|j| {
                            (0..m as usize)
                                .map(|c| {
                                    (0..r).map(|i| &b[i * r + j] * &coord_vals[j][c]).collect()
                                })
                                .collect()
                        })
                        .collect(),
                )
            };

            let mut digits = vec![0usize; r];
            loop {
                let coords: Vec<Scalar> = match &col_contrib {
                    None => (0..r)
                        .map(|j| Scalar::new(coord_vals[j][digits[j]].clone(), irr_div[j].clone()))
                        .collect(),
                    Some(cc) => {
                        let mut rat = vec![Rat::zero(); r];
                        for j in 0..r {
                            for i in 0..r {
                                rat[i] += &cc[j][digits[j]][i];
                            }
                        }
                        rat.into_iter()
                            .zip(irr_div.iter())
                            .map(|(ra, ir)| Scalar::new(ra, ir.clone()))
                            .collect()
                    }
                };
                let key = Point::new(coords);
                *acc.entry(key).or_insert_with(Rat::zero) += v;

                let mut k = r;
                let mut done = true;
                while k > 0 {
                    k -= 1;
                    digits[k] += 1;
                    if digits[k] < m as usize {
                        done = false;
                        break;
                    }
                    digits[k] = 0;
                }
                if done {
                    break;
                }
            }
            // Difference part: -v on the coset of s itself.
            *acc.entry(s.clone()).or_insert_with(Rat::zero) -= v;
        }
        acc.retain(|_, v| !v.is_zero());
        QuasiPeriodicFn {
            lattice: self.lattice.clone(),
            entries: acc,
            zero_value: Rat::zero(),
        }
    }
}

impl PointFn for QuasiPeriodicFn {
    fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Exact evaluation: `zero_value` at the point `0`, the coset entry
    /// elsewhere.
    fn eval(&self, x: &Point) -> Rat {
        if x.is_zero() {
            return self.zero_value.clone();
        }
        self.value_on_coset(x)
    }
}

/// Lazy dilation difference `x -> f(mx) - f(x)` for evaluables that have no
/// closed quasi-periodic form (telescopes in particular).
pub struct DilationDiff<'a, F: PointFn + ?Sized> {
    f: &'a F,
    m: u32,
}

impl<'a, F: PointFn + ?Sized> DilationDiff<'a, F> {
    pub fn new(f: &'a F, m: u32) -> Self {
        assert!(m >= 2);
        DilationDiff { f, m }
    }
}

impl<F: PointFn + ?Sized> PointFn for DilationDiff<'_, F> {
    fn rank(&self) -> usize {
        self.f.rank()
    }

    fn eval(&self, x: &Point) -> Rat {
        self.f.eval(&x.mul_int(self.m)) - self.f.eval(x)
    }
}

/// Translation `x -> f(x + by)`.
pub struct Translated<'a, F: PointFn + ?Sized> {
    f: &'a F,
    by: Point,
}

impl<'a, F: PointFn + ?Sized> Translated<'a, F> {
    pub fn new(f: &'a F, by: Point) -> Self {
        assert_eq!(f.rank(), by.rank());
        Translated { f, by }
    }
}

impl<F: PointFn + ?Sized> PointFn for Translated<'_, F> {
    fn rank(&self) -> usize {
        self.f.rank()
    }

    fn eval(&self, x: &Point) -> Rat {
        self.f.eval(&x.add(&self.by))
    }
}

/// The lazy telescoping sum `x -> sum_{i>=1} g(x/m^i)`, with value 0 at `0`
/// by convention. For every `x != 0` only finitely many terms are nonzero;
/// evaluation truncates at a provably sufficient index.
#[derive(Clone, Debug)]
pub struct TelescopeFn {
    g: QuasiPeriodicFn,
    m: u32,
    m_primes: Vec<(u64, u32)>,
    max_den_vals: Vec<u32>,
    irr_support: Vec<Point>,
}

impl TelescopeFn {
    /// Strict constructor: requires `g(0) = 0` and a vanishing `0`-coset
    /// entry, which every genuine dilation difference satisfies.
    pub fn new(g: QuasiPeriodicFn, m: u32) -> Result<Self> {
        if !g.value_at_zero_coset().is_zero() {
            return Err(Error::invalid_input(
                "telescoping requires a vanishing 0-coset entry",
            ));
        }
        Self::with_lattice_support(g, m)
    }

    /// Permissive constructor: allows a nonzero `0`-coset entry (the sum is
    /// still finite termwise for finitely supported `g`), but still rejects
    /// a nonzero value at the point 0 itself, where the sum would diverge.
    pub fn with_lattice_support(g: QuasiPeriodicFn, m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid_input(
                "telescope dilation factor must be >= 2",
            ));
        }
        if !g.zero_value().is_zero() {
            return Err(Error::invalid_input(
                "telescoping a function with g(0) != 0 diverges",
            ));
        }
        let m_primes = arith::factorize(m as u64);
        // Worst-case denominator valuations over the rational support, one
        // per prime of m; precomputed so i_stop never rescans the support.
        let mut max_den_vals = vec![0u32; m_primes.len()];
        let mut irr_support = Vec::new();
        for s in g.support() {
            if s.is_rational() {
                let sigma = g.lattice().coords(&s.rat_coords());
                for w in &sigma {
                    for (k, &(p, _)) in m_primes.iter().enumerate() {
                        max_den_vals[k] = max_den_vals[k].max(arith::valuation_big(w.denom(), p));
                    }
                }
            } else {
                irr_support.push(s.clone());
            }
        }
        Ok(TelescopeFn {
            g,
            m,
            m_primes,
            max_den_vals,
            irr_support,
        })
    }

    pub fn g(&self) -> &QuasiPeriodicFn {
        &self.g
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// An index beyond which every term `g(x/m^i)` vanishes, for `x != 0`.
    ///
    /// A term can be nonzero only if `x/m^i` lies in a support coset
    /// `s + Lambda`. For rational data, clearing denominators coordinate by
    /// coordinate forces `m^i` to divide fixed integers built from `x` and
    /// `s`, so each prime of `m` bounds `i` through the valuations of the
    /// cleared numerators and the worst support denominator. Alpha-parts
    /// instead pin `i` to the unique exponent solving `x_irr = m^i * s_irr`,
    /// when one exists.
    pub fn i_stop(&self, x: &Point) -> u32 {
        let x_irr = x.irr_coords();
        let x_has_irr = x_irr.iter().any(|c| !c.is_zero());
        let mut best = 0u32;
        if x_has_irr {
            for s in &self.irr_support {
                let s_irr = s.irr_coords();
                let Some(j) = s_irr.iter().position(|c| !c.is_zero()) else {
                    continue;
                };
                if x_irr[j].is_zero() {
                    continue;
                }
                let ratio = &x_irr[j] / &s_irr[j];
                let Some(i) = arith::power_exponent(ratio.numer(), ratio.denom(), self.m as u64)
                else {
                    continue;
                };
                if i >= 1 {
                    best = best.max(i as u32);
                }
            }
            return best;
        }
        if self.g.support_len() == self.irr_support.len() {
            return 0; // no rational support at all
        }
        let coords = self.g.lattice().coords(&x.rat_coords());
        let mut bound = u32::MAX;
        for c in &coords {
            if c.is_zero() {
                continue;
            }
            let mut coord_bound = u32::MAX;
            for (k, &(p, e)) in self.m_primes.iter().enumerate() {
                let va = arith::valuation_big(c.numer(), p);
                coord_bound = coord_bound.min((va + self.max_den_vals[k]) / e);
            }
            bound = bound.min(coord_bound);
        }
        if bound != u32::MAX {
            best = best.max(bound);
        }
        best
    }

    /// Partial sum of the first `terms` telescope terms; the full evaluation
    /// equals `eval_truncated(x, i_stop(x))`.
    pub fn eval_truncated(&self, x: &Point, terms: u32) -> Rat {
        let mut acc = Rat::zero();
        let mut y = x.clone();
        for _ in 0..terms {
            y = y.div_int(self.m);
            let v = self.g.value_on_coset(&y);
            if !v.is_zero() {
                acc += v;
            }
        }
        acc
    }
}

impl PointFn for TelescopeFn {
    fn rank(&self) -> usize {
        self.g.rank()
    }

    fn eval(&self, x: &Point) -> Rat {
        if x.is_zero() {
            return Rat::zero();
        }
        self.eval_truncated(x, self.i_stop(x))
    }
}

/// A finite verification surface: the box `[-B, B]^r` restricted to
/// denominators dividing `D`, plus declared alpha-probe points.
#[derive(Clone, Debug)]
pub struct Window {
    pub bound: u32,
    pub den_cap: u32,
    pub alpha_probes: Vec<Point>,
}

impl Window {
    pub fn new(bound: u32, den_cap: u32) -> Self {
        assert!(bound >= 1 && den_cap >= 1);
        Window {
            bound,
            den_cap,
            alpha_probes: Vec::new(),
        }
    }

    pub fn with_probes(mut self, probes: Vec<Point>) -> Self {
        self.alpha_probes = probes;
        self
    }

    /// All coordinate values `k/d` with `d | D` and `|k/d| <= B`, ordered by
    /// absolute value with the positive representative first. The ordering
    /// determines which inequality witness is reported first.
    pub fn coordinate_values(&self) -> Vec<Rat> {
        let mut set: BTreeSet<Rat> = BTreeSet::new();
        for d in 1..=self.den_cap {
            if !self.den_cap.is_multiple_of(d) {
                continue;
            }
            let lim = (self.bound * d) as i64;
            for k in -lim..=lim {
                set.insert(Rat::new(BigInt::from(k), BigInt::from(d)));
            }
        }
        let mut vals: Vec<Rat> = set.into_iter().collect();
        vals.sort_by(|a, b| (a.abs(), b.is_positive()).cmp(&(b.abs(), a.is_positive())));
        vals
    }

    /// Every rational window point of the given rank, in deterministic
    /// order, followed by the declared alpha-probes of matching rank.
    pub fn points(&self, rank: usize) -> Vec<Point> {
        let vals = self.coordinate_values();
        let mut out = Vec::new();
        let mut idx = vec![0usize; rank];
        loop {
            out.push(Point::from_rats(
                idx.iter().map(|&i| vals[i].clone()).collect(),
            ));
            let mut k = rank;
            let mut done = true;
            while k > 0 {
                k -= 1;
                idx[k] += 1;
                if idx[k] < vals.len() {
                    done = false;
                    break;
                }
                idx[k] = 0;
            }
            if done {
                break;
            }
        }
        out.extend(
            self.alpha_probes
                .iter()
                .filter(|p| p.rank() == rank)
                .cloned(),
        );
        out
    }
}

/// First point of a window where two evaluables disagree.
#[derive(Clone, Debug)]
pub struct WindowWitness {
    pub point: Point,
    pub left: Rat,
    pub right: Rat,
}

/// Exact comparison on a window; `None` means no counterexample was found.
pub fn equal_on_window(
    f1: &dyn PointFn,
    f2: &dyn PointFn,
    w: &Window,
) -> Result<Option<WindowWitness>> {
    if f1.rank() != f2.rank() {
        return Err(Error::RankMismatch {
            expected: f1.rank(),
            got: f2.rank(),
        });
    }
    for p in w.points(f1.rank()) {
        let a = f1.eval(&p);
        let b = f2.eval(&p);
        if a != b {
            return Ok(Some(WindowWitness {
                point: p,
                left: a,
                right: b,
            }));
        }
    }
    Ok(None)
}

/// Exact equality of two quasi-periodic functions as functions on `V`
/// (including the modification at 0). Functions over different lattices are
/// refined to the intersection lattice first.
pub fn equal_on_cosets(f1: &QuasiPeriodicFn, f2: &QuasiPeriodicFn) -> Result<bool> {
    if f1.rank() != f2.rank() {
        return Err(Error::RankMismatch {
            expected: f1.rank(),
            got: f2.rank(),
        });
    }
    if f1.lattice().same_lattice(f2.lattice()) {
        let other;
        let g = if f1.lattice().basis() == f2.lattice().basis() {
            f2
        } else {
            other = f2.renormalized_to(f1.lattice())?;
            &other
        };
        Ok(f1.zero_value == g.zero_value
            && f1.entries.len() == g.entries.len()
            && f1.entries.iter().all(|(k, v)| g.entries.get(k) == Some(v)))
    } else {
        let common = f1.lattice().intersect(f2.lattice())?;
        let a = f1.refine_to(&common)?;
        let b = f2.refine_to(&common)?;
        equal_on_cosets(&a, &b)
    }
}

/// Structural witness that `e(mx) - e(x)` differs from `g(x)` somewhere.
#[derive(Clone, Debug)]
pub struct DilationMismatch {
    pub witness: Point,
    pub expected: Rat,
    pub actual: Rat,
}

/// Exact check that `dilate_diff(e, m) == g` as functions, in time linear in
/// the two supports.
///
/// Pointwise equality on the supports is checked directly; absence of stray
/// support is certified by counting: every coset of `supp(e)` has exactly
/// `m^r` preimage cosets under multiplication by `m`, and each must be
/// accounted for inside `supp(g) union supp(e)`.
pub fn check_dilation_diff_eq(
    e: &QuasiPeriodicFn,
    m: u32,
    g: &QuasiPeriodicFn,
) -> Result<Option<DilationMismatch>> {
    if e.rank() != g.rank() {
        return Err(Error::RankMismatch {
            expected: g.rank(),
            got: e.rank(),
        });
    }
    if !e.lattice().same_lattice(g.lattice()) {
        return Err(Error::invalid_input(
            "dilation-difference check requires functions over the same lattice",
        ));
    }
    let e_local;
    let e = if e.lattice().basis() == g.lattice().basis() {
        e
    } else {
        e_local = e.renormalized_to(g.lattice())?;
        &e_local
    };
    if !g.zero_value().is_zero() {
        // a dilation difference always vanishes at the point 0 itself
        return Ok(Some(DilationMismatch {
            witness: Point::zero(g.rank()),
            expected: g.zero_value().clone(),
            actual: Rat::zero(),
        }));
    }
    let lattice = g.lattice();
    let mut covered: u64 = 0;
    for (x, gv) in g.entries() {
        let emx = e.value_on_reduced(&lattice.mul_reduce(x, m));
        let ex = e.value_on_reduced(x);
        if &emx - &ex != *gv {
            return Ok(Some(DilationMismatch {
                witness: x.clone(),
                expected: gv.clone(),
                actual: emx - ex,
            }));
        }
        if !emx.is_zero() {
            covered += 1;
        }
    }
    for (x, ev) in e.entries() {
        if !g.value_on_reduced(x).is_zero() {
            continue; // handled above
        }
        let emx = e.value_on_reduced(&lattice.mul_reduce(x, m));
        if emx != *ev {
            return Ok(Some(DilationMismatch {
                witness: x.clone(),
                expected: Rat::zero(),
                actual: emx - ev,
            }));
        }
        if !emx.is_zero() {
            covered += 1;
        }
    }
    let expected_cover = (m as u64).pow(e.rank() as u32) * e.support_len() as u64;
    if covered != expected_cover {
        // Some preimage coset carries a nonzero difference outside both
        // supports; locate one for the report.
        for (t, tv) in e.sorted_entries() {
            let half = preimage_cosets(e.lattice(), t, m);
            for x in half {
                if g.value_on_reduced(&x).is_zero() && e.value_on_reduced(&x).is_zero() {
                    return Ok(Some(DilationMismatch {
                        witness: x,
                        expected: Rat::zero(),
                        actual: tv.clone(),
                    }));
                }
            }
        }
        return Err(Error::internal(
            "dilation cover count mismatch without witness",
        ));
    }
    Ok(None)
}

/// The `m^r` reduced cosets `x` with `m*x == t (mod Lambda)`.
pub fn preimage_cosets(lattice: &Lattice, t: &Point, m: u32) -> Vec<Point> {
    let r = lattice.rank();
    let mr = Rat::from_integer(BigInt::from(m));
    let sigma = lattice.coords(&t.rat_coords());
    let irr_div: Vec<Rat> = t.coords.iter().map(|sc| &sc.irr / &mr).collect();
    let mut out = Vec::with_capacity((m as usize).pow(r as u32));
    let mut digits = vec![0u32; r];
    loop {
        let coords: Vec<Rat> = (0..r)
            .map(|j| (&sigma[j] + Rat::from_integer(BigInt::from(digits[j]))) / &mr)
            .collect();
        let rat = if lattice.is_standard_basis() {
            coords
        } else {
            crate::mat::rat_mat_vec(r, lattice.basis(), &coords)
        };
        out.push(Point::new(
            rat.into_iter()
                .zip(irr_div.iter())
                .map(|(ra, ir)| Scalar::new(ra, ir.clone()))
                .collect(),
        ));
        let mut k = r;
        let mut done = true;
        while k > 0 {
            k -= 1;
            digits[k] += 1;
            if digits[k] < m {
                done = false;
                break;
            }
            digits[k] = 0;
        }
        if done {
            return out;
        }
    }
}

/// A finite superset of the support mod `Lambda` of any function whose
/// `p`- and `q`-dilation differences are `g_p` and `g_q`.
///
/// Rational support is intersected between the forward orbit closures
/// `{p^n s : n >= 1}` and `{q^m t : m >= 1}` (eventually periodic, so the
/// breadth-first closure terminates). Alpha-part representatives are matched
/// by solving the exponent equation `p^n s = q^m t`, which multiplicative
/// independence makes unique. The `0`-coset and directly shared support
/// cosets are always included.
pub fn support_cosets(
    g_p: &QuasiPeriodicFn,
    g_q: &QuasiPeriodicFn,
    p: u32,
    q: u32,
) -> Result<BTreeSet<Point>> {
    if !arith::multiplicatively_independent(p as u64, q as u64) {
        return Err(Error::invalid_input(format!(
            "{p} and {q} are multiplicatively dependent"
        )));
    }
    if g_p.rank() != g_q.rank() {
        return Err(Error::RankMismatch {
            expected: g_p.rank(),
            got: g_q.rank(),
        });
    }
    if !g_p.lattice().same_lattice(g_q.lattice()) {
        return Err(Error::invalid_input(
            "support intersection requires one lattice",
        ));
    }
    let g_q_local;
    let g_q = if g_p.lattice().basis() == g_q.lattice().basis() {
        g_q
    } else {
        g_q_local = g_q.renormalized_to(g_p.lattice())?;
        &g_q_local
    };
    let lattice = g_p.lattice();

    let forward_closure = |g: &QuasiPeriodicFn, mult: u32| -> BTreeSet<Point> {
        let mut reached: BTreeSet<Point> = BTreeSet::new();
        let mut frontier: Vec<Point> = g.support().filter(|s| s.is_rational()).cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in frontier {
                let image = lattice.mul_reduce(&x, mult);
                if !reached.contains(&image) {
                    reached.insert(image.clone());
                    next.push(image);
                }
            }
            frontier = next;
        }
        reached
    };

    let a = forward_closure(g_p, p);
    let b = forward_closure(g_q, q);
    let mut out: BTreeSet<Point> = a.intersection(&b).cloned().collect();
    out.insert(Point::zero(g_p.rank()));
    // bookkeeping superset: directly shared support cosets
    for s in g_p.support() {
        if !g_q.value_on_reduced(s).is_zero() {
            out.insert(s.clone());
        }
    }

    // alpha-part matches p^n s == q^m t with n, m >= 1
    let irr_p: Vec<&Point> = g_p.support().filter(|s| !s.is_rational()).collect();
    let irr_q: Vec<&Point> = g_q.support().filter(|t| !t.is_rational()).collect();
    for s in &irr_p {
        for t in &irr_q {
            if let Some((n, m)) = match_dilation_exponents(s, t, p, q) {
                let sp = s.scale(&Rat::from_integer(arith::big_pow(p as u64, n)));
                let tq = t.scale(&Rat::from_integer(arith::big_pow(q as u64, m)));
                let rs = lattice.reduce_unchecked(&sp);
                let rt = lattice.reduce_unchecked(&tq);
                if rs == rt {
                    out.insert(rs);
                }
            }
        }
    }
    Ok(out)
}

/// Solves `p^n * s_irr == q^m * t_irr` with `n, m >= 1`, using the prime
/// valuations of the component ratio. Returns the unique solution if any.
fn match_dilation_exponents(s: &Point, t: &Point, p: u32, q: u32) -> Option<(u32, u32)> {
    let s_irr = s.irr_coords();
    let t_irr = t.irr_coords();
    let j = s_irr.iter().position(|c| !c.is_zero())?;
    if t_irr[j].is_zero() {
        return None;
    }
    // ratio = p^n / q^m must equal t_j / s_j
    let ratio = &t_irr[j] / &s_irr[j];
    if !ratio.is_positive() {
        return None;
    }
    let num = ratio.numer();
    let den = ratio.denom();
    // valuation system: n*v_l(p) - m*v_l(q) = v_l(ratio) over all primes
    let mut primes: Vec<u64> = Vec::new();
    for (pr, _) in arith::factorize(p as u64) {
        primes.push(pr);
    }
    for (pr, _) in arith::factorize(q as u64) {
        if !primes.contains(&pr) {
            primes.push(pr);
        }
    }
    for (pr, _) in arith::factorize(num.magnitude().try_into().ok()?) {
        if !primes.contains(&pr) {
            primes.push(pr);
        }
    }
    for (pr, _) in arith::factorize(den.magnitude().try_into().ok()?) {
        if !primes.contains(&pr) {
            primes.push(pr);
        }
    }
    let rows: Vec<(i64, i64, i64)> = primes
        .iter()
        .map(|&l| {
            let vp = if (p as u64).is_multiple_of(l) {
                arith::valuation_i64(p as i64, l) as i64
            } else {
                0
            };
            let vq = if (q as u64).is_multiple_of(l) {
                arith::valuation_i64(q as i64, l) as i64
            } else {
                0
            };
            let vr = arith::valuation_big(num, l) as i64 - arith::valuation_big(den, l) as i64;
            (vp, -vq, vr)
        })
        .collect();
    // find two independent rows and solve the 2x2 system
    let (n, m) = 'solve: {
        for i in 0..rows.len() {
            for k in i + 1..rows.len() {
                let (a1, b1, c1) = rows[i];
                let (a2, b2, c2) = rows[k];
                let det = a1 * b2 - a2 * b1;
                if det == 0 {
                    continue;
                }
                let n_num = c1 * b2 - c2 * b1;
                let m_num = a1 * c2 - a2 * c1;
                if n_num % det != 0 || m_num % det != 0 {
                    return None;
                }
                break 'solve (n_num / det, m_num / det);
            }
        }
        return None;
    };
    if n < 1 || m < 1 {
        return None;
    }
    let (n, m) = (n as u32, m as u32);
    // verify every component and every valuation row exactly
    let pn = Rat::from_integer(arith::big_pow(p as u64, n));
    let qm = Rat::from_integer(arith::big_pow(q as u64, m));
    for (sj, tj) in s_irr.iter().zip(t_irr.iter()) {
        if (sj * &pn) != (tj * &qm) {
            return None;
        }
    }
    Some((n, m))
}
