//! Property tests for the algebraic laws: telescoping round trips, exact
//! truncation, lattice axioms, walk verification, and divisor identities.

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use perioda::divisor::{aj_sum, degree, principality_certificate, Divisor};
use perioda::lattice::{adapted_basis, is_adapted_basis, Lattice};
use perioda::point::{Point, Rat};
use perioda::reconstruct::{equivalence_closure_bruteforce, lemma1_walk, reconstruct_periodic};
use perioda::sparse::{
    equal_on_cosets, equal_on_window, DilationDiff, PointFn, QuasiPeriodicFn, TelescopeFn, Window,
};

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Point coordinates as `(numerator, denominator)` pairs, with a value.
type RawEntry = (Vec<(i64, i64)>, (i64, i64));

/// Raw entries for a random function of the given rank: coordinates `k/d`
/// with small denominators, nonzero small rational values.
fn entry_strategy(rank: usize) -> impl Strategy<Value = Vec<RawEntry>> {
    prop::collection::vec(
        (
            prop::collection::vec((0i64..24, 1i64..=12), rank),
            (1i64..=5, 1i64..=3),
        ),
        1..6,
    )
}

fn build_qpf(lattice: &Lattice, raw: &[RawEntry]) -> QuasiPeriodicFn {
    let entries = raw.iter().filter_map(|(coords, (vn, vd))| {
        let p = Point::from_rats(coords.iter().map(|&(k, d)| rat(k, d)).collect());
        if lattice.reduce(&p).unwrap().is_zero() {
            None // keep the 0-coset clear so telescopes stay strict
        } else {
            Some((p, rat(*vn, *vd)))
        }
    });
    QuasiPeriodicFn::new(lattice.clone(), entries, Rat::zero()).expect("consistent entries")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// telescope(dilate_diff(e, m), m) == e at every nonzero point.
    #[test]
    fn telescoping_round_trip_a(
        (rank, raw, m) in (1usize..=3).prop_flat_map(|rank| {
            (Just(rank), entry_strategy(rank), 2u32..=10)
        }),
    ) {
        let lattice = Lattice::standard(rank);
        let e = build_qpf(&lattice, &raw);
        let g = e.dilate_diff(m);
        let t = TelescopeFn::new(g, m).expect("dilation differences telescope");
        // exact equality on the support cosets and a window
        for (s, v) in e.sorted_entries() {
            prop_assert_eq!(&t.eval(s), v);
        }
        let w = Window::new(2, 4);
        prop_assert!(equal_on_window(&t, &e, &w).unwrap().is_none());
    }

    /// dilate_diff(telescope(g, m), m) == g at every nonzero point.
    #[test]
    fn telescoping_round_trip_b(raw in entry_strategy(1), m in 2u32..=10) {
        let lattice = Lattice::standard(1);
        let g = build_qpf(&lattice, &raw);
        let t = TelescopeFn::new(g.clone(), m).expect("strict support");
        let d = DilationDiff::new(&t, m);
        prop_assert!(equal_on_window(&d, &g, &Window::new(3, 6)).unwrap().is_none());
    }

    /// The truncation index is sufficient: ten extra terms change nothing.
    /// Across the configured cases this exercises over a thousand probes.
    #[test]
    fn i_stop_is_exact(
        raw in entry_strategy(1),
        m in 2u32..=12,
        probes in prop::collection::vec((-400i64..=400, 1i64..=16), 25),
    ) {
        let lattice = Lattice::standard(1);
        let g = build_qpf(&lattice, &raw);
        let t = TelescopeFn::new(g, m).expect("strict support");
        for (k, d) in probes {
            let x = Point::from_rats(vec![rat(k, d)]);
            if x.is_zero() {
                continue;
            }
            let stop = t.i_stop(&x);
            prop_assert_eq!(t.eval_truncated(&x, stop), t.eval_truncated(&x, stop + 10));
        }
    }

    /// Reconstruction is exact for random generating functions (the small
    /// fast version; the acceptance suite runs the full-size sweep).
    #[test]
    fn reconstruction_recovers_generator(raw in entry_strategy(1), seed in 0u64..3) {
        let lattice = Lattice::standard(1);
        let e = build_qpf(&lattice, &raw);
        let pairs = [(2u32, 3u32), (3, 4), (5, 6)];
        let (p, q) = pairs[seed as usize];
        let cert = reconstruct_periodic(&e.dilate_diff(p), &e.dilate_diff(q), p, q, &Window::new(2, 4))
            .expect("round-trip instances reconstruct");
        prop_assert!(equal_on_cosets(&cert.result, &e).unwrap());
    }

    /// reduce is idempotent and lands in the lattice's fundamental domain.
    #[test]
    fn reduce_idempotent_and_member(
        basis in (1i64..=4, 0i64..=3, -3i64..=3, 1i64..=4),
        coords in prop::collection::vec((-40i64..=40, 1i64..=12), 2),
    ) {
        let (a, b, c, d) = basis;
        let l = Lattice::from_int_basis(2, &[a, b, c, a * d + 1]); // determinant nonzero by construction? checked below
        prop_assume!(l.is_ok());
        let l = l.unwrap();
        let x = Point::from_rats(coords.iter().map(|&(k, dd)| rat(k, dd)).collect());
        let r = l.reduce(&x).unwrap();
        prop_assert_eq!(&l.reduce(&r).unwrap(), &r);
        prop_assert!(l.contains(&x.sub(&r)).unwrap());
        let in_domain = l.coords(&r.rat_coords());
        for c in in_domain {
            prop_assert!(c >= Rat::zero() && c < Rat::from_integer(BigInt::from(1)));
        }
    }

    /// join contains both inputs and embeds in every common overlattice.
    #[test]
    fn join_is_smallest_upper_bound(
        b1 in (1i64..=6, -3i64..=3),
        b2 in (1i64..=6, -3i64..=3),
    ) {
        let l1 = Lattice::from_int_basis(1, &[b1.0]).unwrap();
        let l2 = Lattice::from_int_basis(1, &[b2.0]).unwrap();
        let j = l1.join(&l2).unwrap();
        prop_assert!(l1.is_sublattice_of(&j));
        prop_assert!(l2.is_sublattice_of(&j));
        // rank 2 with shears
        let m1 = Lattice::from_int_basis(2, &[b1.0, b1.1, 0, b2.0]).unwrap();
        let m2 = Lattice::from_int_basis(2, &[b2.0, b2.1, 0, b1.0]).unwrap();
        let j = m1.join(&m2).unwrap();
        prop_assert!(m1.is_sublattice_of(&j) && m2.is_sublattice_of(&j));
        // any common overlattice contains the join's generators
        let common = Lattice::standard(2);
        prop_assert!(j.is_sublattice_of(&common));
    }

    /// Adapted bases exist and verify their postcondition across ranks 1-4.
    #[test]
    fn adapted_basis_postcondition(
        rank in 1usize..=4,
        xs in prop::collection::vec(-5i64..=5, 4),
        ys in prop::collection::vec(-5i64..=5, 4),
    ) {
        let x = Point::from_rats(xs[..rank].iter().map(|&k| rat(k, 1)).collect());
        let y = Point::from_rats(ys[..rank].iter().map(|&k| rat(k, 1)).collect());
        prop_assume!(!x.is_zero() && !y.is_zero());
        let l = Lattice::standard(rank);
        let b = adapted_basis(&x, &y, &l).unwrap();
        prop_assert!(is_adapted_basis(&b, &l, &x, &y));
    }

    /// Walks verify their relations for arbitrary valid inputs.
    #[test]
    fn walks_self_verify(
        x in -300i64..=300,
        k in -30i64..=30,
        n in 1i64..=15,
        si in 0usize..4,
        tj in 0usize..4,
    ) {
        let primes = [2u64, 3, 5, 7];
        prop_assume!(si != tj);
        let y = x + k * n;
        prop_assume!(x != 0 && y != 0);
        // lemma1_walk returns an error only for invalid input; the relation
        // checks inside are theorem violations and would fail the test
        let w = lemma1_walk(x, y, n, &[primes[si]], &[primes[tj]]).unwrap();
        prop_assert_eq!(&w.z, &(BigInt::from(x) + &w.s * &w.p * BigInt::from(n)));
    }

    /// Closure classes always refine the residue classes mod N.
    #[test]
    fn closure_refines(range in 20i64..=120, n in 2i64..=12, si in 0usize..3, tj in 0usize..3) {
        let s_sets: [&[u64]; 3] = [&[2], &[5], &[2, 7]];
        let t_sets: [&[u64]; 3] = [&[3], &[11], &[3, 13]];
        let c = equivalence_closure_bruteforce(range, n, s_sets[si], t_sets[tj]).unwrap();
        prop_assert!(c.refines_mod_n());
    }

    /// Degree is lattice-covariant: measuring over an index-k sublattice
    /// multiplies it by k.
    #[test]
    fn degree_covariance(
        entries in prop::collection::vec(((0i64..8, 1i64..=8), (0i64..8, 1i64..=8), -3i64..=3), 1..6),
        scale in 2u32..=4,
    ) {
        let z2 = Lattice::standard(2);
        let d = Divisor::from_entries(
            z2.clone(),
            entries.iter().map(|&((a, b), (c, dd), v)| {
                (Point::from_rats(vec![rat(a, b), rat(c, dd)]), v)
            }),
        )
        .unwrap();
        let sub = z2.scaled_int(scale);
        let index = BigInt::from((scale * scale) as i64);
        prop_assert_eq!(degree(&d, &sub).unwrap(), degree(&d, &z2).unwrap() * index);
    }

    /// The Abel-Jacobi sum is well-defined mod the lattice: an independent
    /// enumeration with shifted representatives differs by a lattice vector
    /// and never changes the verdict.
    #[test]
    fn aj_sum_representative_independence(
        entries in prop::collection::vec(((0i64..6, 1i64..=6), (0i64..6, 1i64..=6), -3i64..=3), 1..6),
        shift in (0i64..=3, 0i64..=3),
    ) {
        let z2 = Lattice::standard(2);
        let d = Divisor::from_entries(
            z2.clone(),
            entries.iter().map(|&((a, b), (c, dd), v)| {
                (Point::from_rats(vec![rat(a, b), rat(c, dd)]), v)
            }),
        )
        .unwrap();
        let aj = aj_sum(&d, &z2).unwrap();
        // independent oracle: representatives shifted into the box
        // [shift, shift + 1)^2 instead of [0, 1)^2
        let offset = Point::from_rats(vec![rat(shift.0, 1), rat(shift.1, 1)]);
        let mut oracle = Point::zero(2);
        for (s, v) in d.underlying().sorted_entries() {
            let rep = z2.reduce(s).unwrap().add(&offset);
            oracle = oracle.add(&rep.scale(v));
        }
        prop_assert!(z2.contains(&aj.sub(&oracle)).unwrap());
        let cert = principality_certificate(&d, &z2).unwrap();
        let oracle_verdict = degree(&d, &z2).unwrap().is_zero() && z2.contains(&oracle).unwrap();
        prop_assert_eq!(cert.verdict, oracle_verdict);
    }
}
