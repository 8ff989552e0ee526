//! Seeded random instance generators for the property corpus: quasi-periodic
//! functions, principal divisors, and coprime dilation pairs. Used by the
//! CLI selftest and the acceptance suite, so they live in the library
//! rather than in test code.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::divisor::Divisor;
use crate::lattice::Lattice;
use crate::point::{Point, Rat, Scalar};
use crate::sparse::QuasiPeriodicFn;

fn random_fraction(rng: &mut ChaCha8Rng, den_cap: u32) -> Rat {
    let d = rng.random_range(1..=den_cap) as i64;
    let n = rng.random_range(0..d);
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn random_value(rng: &mut ChaCha8Rng) -> Rat {
    let mut n = 0i64;
    while n == 0 {
        n = rng.random_range(-5..=5);
    }
    let d = rng.random_range(1..=3) as i64;
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// A random function with up to `max_cosets` support cosets, coordinates
/// with denominators at most `den_cap`, and vanishing value at 0 and on the
/// 0-coset; `alpha_points` adds that many extra support cosets with nonzero
/// alpha-parts.
pub fn random_qpf(
    rng: &mut ChaCha8Rng,
    lattice: &Lattice,
    max_cosets: usize,
    den_cap: u32,
    alpha_points: usize,
) -> QuasiPeriodicFn {
    let rank = lattice.rank();
    let n = rng.random_range(1..=max_cosets);
    let mut entries = Vec::new();
    for _ in 0..n {
        let p = Point::from_rats((0..rank).map(|_| random_fraction(rng, den_cap)).collect());
        if p.is_zero() {
            continue; // keep the 0-coset clear
        }
        entries.push((p, random_value(rng)));
    }
    for _ in 0..alpha_points {
        let coords: Vec<Scalar> = (0..rank)
            .map(|j| {
                let irr = if j == 0 {
                    let num = rng.random_range(1..=4);
                    let den = rng.random_range(1..=3);
                    Rat::new(BigInt::from(num), BigInt::from(den))
                } else {
                    Rat::zero()
                };
                Scalar::new(random_fraction(rng, den_cap), irr)
            })
            .collect();
        entries.push((Point::new(coords), random_value(rng)));
    }
    QuasiPeriodicFn::new(lattice.clone(), entries, Rat::zero())
        .expect("generated entries are rank-consistent")
}

/// A coprime pair with both members in `[lo, hi]`.
pub fn coprime_pair(rng: &mut ChaCha8Rng, lo: u32, hi: u32) -> (u32, u32) {
    loop {
        let p = rng.random_range(lo..=hi);
        let q = rng.random_range(lo..=hi);
        if p != q && num_integer::gcd(p, q) == 1 {
            return (p, q);
        }
    }
}

/// A random divisor that is principal for `lattice_f`: degree 0 by a
/// balancing entry, and Abel-Jacobi sum pushed into the lattice by a
/// correcting +1/-1 pair.
pub fn random_principal_divisor(
    rng: &mut ChaCha8Rng,
    lattice: &Lattice,
    lattice_f: &Lattice,
    max_entries: usize,
    den_cap: u32,
) -> Divisor {
    assert_eq!(lattice.rank(), 2);
    let n = rng.random_range(1..=max_entries.max(1));
    let mut entries: Vec<(Point, Rat)> = Vec::new();
    let mut degree = BigInt::zero();
    for _ in 0..n {
        let p = Point::from_rats(vec![
            random_fraction(rng, den_cap),
            random_fraction(rng, den_cap),
        ]);
        let v = {
            let mut v = 0i64;
            while v == 0 {
                v = rng.random_range(-3..=3);
            }
            v
        };
        degree += BigInt::from(v);
        entries.push((p, Rat::from_integer(BigInt::from(v))));
    }
    if !degree.is_zero() {
        let p = Point::from_rats(vec![
            random_fraction(rng, den_cap),
            random_fraction(rng, den_cap),
        ]);
        entries.push((p, Rat::from_integer(-degree)));
    }
    // push the weighted point sum into lattice_f with a +1/-1 pair
    let mut aj = Point::zero(2);
    for (p, v) in &entries {
        aj = aj.add(&p.scale(v));
    }
    let correction = lattice_f
        .reduce(&aj.neg())
        .expect("rank-2 reduction of a rational point");
    entries.push((correction, Rat::from_integer(BigInt::from(1))));
    entries.push((Point::zero(2), Rat::from_integer(BigInt::from(-1))));

    let f = QuasiPeriodicFn::new(lattice.clone(), entries, Rat::zero())
        .expect("generated entries are rank-consistent");
    let zero = f.value_at_zero_coset();
    let f = QuasiPeriodicFn::new(
        lattice.clone(),
        f.entries().map(|(p, v)| (p.clone(), v.clone())),
        zero,
    )
    .expect("re-keying preserves validity");
    Divisor::new(f).expect("construction yields integer values on rational support")
}

/// A random nonzero integer divisor (no principality constraints).
pub fn random_nonzero_divisor(
    rng: &mut ChaCha8Rng,
    lattice: &Lattice,
    max_entries: usize,
    den_cap: u32,
) -> Divisor {
    loop {
        let n = rng.random_range(1..=max_entries.max(1));
        let mut entries = Vec::new();
        for _ in 0..n {
            let p = Point::from_rats(vec![
                random_fraction(rng, den_cap),
                random_fraction(rng, den_cap),
            ]);
            let mut v = 0i64;
            while v == 0 {
                v = rng.random_range(-3..=3);
            }
            entries.push((p, v));
        }
        let d = Divisor::from_entries(lattice.clone(), entries)
            .expect("integer entries on rational points");
        if !d.is_zero() {
            return d;
        }
    }
}
