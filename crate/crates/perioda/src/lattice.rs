//! Full-rank lattices in `Q^r` with exact membership, reduction to a
//! fundamental domain, joins, intersections, and adapted bases.
//!
//! A lattice is stored as a rational `r x r` basis matrix whose columns
//! generate it. Integer bases are the common case (sublattices of the
//! reference lattice `Z^r`); rational entries admit scaled lattices such as
//! `(1/2)Z^2`, which the divisor layer needs. The fundamental domain
//! convention is the half-open box `[0,1)^r` in basis coordinates, so coset
//! representatives are unique and comparable exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat::{self, IntMat};
use crate::point::{Point, Rat, Scalar};

/// Fractional part with result in `[0, 1)`.
fn frac_part(r: &Rat) -> Rat {
    Rat::new(r.numer().mod_floor(r.denom()), r.denom().clone())
}

#[derive(Clone)]
pub struct Lattice {
    rank: usize,
    basis: Vec<Rat>, // row-major; columns generate the lattice
    inv: Vec<Rat>,
    det: Rat,
    identity: bool,
}

impl Lattice {
    /// The reference lattice `Z^r`.
    pub fn standard(rank: usize) -> Self {
        let mut basis = vec![Rat::zero(); rank * rank];
        for i in 0..rank {
            basis[i * rank + i] = Rat::one();
        }
        Lattice {
            rank,
            inv: basis.clone(),
            basis,
            det: Rat::one(),
            identity: true,
        }
    }

    pub fn from_basis(rank: usize, basis: Vec<Rat>) -> Result<Self> {
        if rank == 0 || basis.len() != rank * rank {
            return Err(Error::invalid_input(format!(
                "basis must be a {rank}x{rank} matrix"
            )));
        }
        let det = mat::rat_det(rank, &basis);
        if det.is_zero() {
            return Err(Error::invalid_input(
                "lattice basis must have nonzero determinant",
            ));
        }
        let inv = mat::rat_inverse(rank, &basis).expect("nonzero determinant implies invertible");
        let identity = (0..rank * rank).all(|k| {
            if k / rank == k % rank {
                basis[k].is_one()
            } else {
                basis[k].is_zero()
            }
        });
        Ok(Lattice {
            rank,
            basis,
            inv,
            det,
            identity,
        })
    }

    pub fn from_int_basis(rank: usize, entries: &[i64]) -> Result<Self> {
        Self::from_basis(
            rank,
            entries
                .iter()
                .map(|&e| Rat::from_integer(BigInt::from(e)))
                .collect(),
        )
    }

    /// `c * self` for a nonzero rational scale factor.
    pub fn scaled(&self, c: &Rat) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::invalid_input("lattice scale factor must be nonzero"));
        }
        Self::from_basis(self.rank, self.basis.iter().map(|b| b * c).collect())
    }

    pub fn scaled_int(&self, m: u32) -> Self {
        self.scaled(&Rat::from_integer(BigInt::from(m)))
            .expect("nonzero integer scale")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis(&self) -> &[Rat] {
        &self.basis
    }

    pub fn det(&self) -> &Rat {
        &self.det
    }

    pub fn is_standard_basis(&self) -> bool {
        self.identity
    }

    /// The `j`-th basis vector as an ambient point.
    pub fn basis_vector(&self, j: usize) -> Point {
        Point::from_rats(
            (0..self.rank)
                .map(|i| self.basis[i * self.rank + j].clone())
                .collect(),
        )
    }

    fn check_rank(&self, x: &Point) -> Result<()> {
        if x.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: x.rank(),
            });
        }
        Ok(())
    }

    /// Basis coordinates of a rational vector.
    pub fn coords(&self, v: &[Rat]) -> Vec<Rat> {
        if self.identity {
            return v.to_vec();
        }
        mat::rat_mat_vec(self.rank, &self.inv, v)
    }

    /// Ambient rational point from basis coordinates.
    pub fn from_coords(&self, c: &[Rat]) -> Point {
        if self.identity {
            return Point::from_rats(c.to_vec());
        }
        Point::from_rats(mat::rat_mat_vec(self.rank, &self.basis, c))
    }

    /// Membership: requires a vanishing alpha-part and integral basis
    /// coordinates.
    pub fn contains(&self, x: &Point) -> Result<bool> {
        self.check_rank(x)?;
        if !x.is_rational() {
            return Ok(false);
        }
        Ok(self.coords(&x.rat_coords()).iter().all(|c| c.is_integer()))
    }

    /// The unique representative of `x mod self` whose rational basis
    /// coordinates lie in `[0,1)`. Alpha-parts pass through unchanged, since
    /// lattice translations never alter them.
    pub fn reduce(&self, x: &Point) -> Result<Point> {
        self.check_rank(x)?;
        Ok(self.reduce_unchecked(x))
    }

    pub(crate) fn reduce_unchecked(&self, x: &Point) -> Point {
        if self.identity {
            let coords = x
                .coords
                .iter()
                .map(|s| Scalar::new(frac_part(&s.rat), s.irr.clone()))
                .collect();
            return Point::new(coords);
        }
        let c = self.coords(&x.rat_coords());
        let frac: Vec<Rat> = c.iter().map(|ci| ci - ci.floor()).collect();
        let rat = mat::rat_mat_vec(self.rank, &self.basis, &frac);
        Point::new(
            rat.into_iter()
                .zip(x.coords.iter())
                .map(|(r, s)| Scalar::new(r, s.irr.clone()))
                .collect(),
        )
    }

    /// Canonical representative of `m * x` modulo this lattice; equivalent
    /// to `reduce(x.mul_int(m))` but fused for the orbit and verification
    /// loops.
    pub(crate) fn mul_reduce(&self, x: &Point, m: u32) -> Point {
        if self.identity {
            let mb = BigInt::from(m);
            let m_rat = Rat::from_integer(mb.clone());
            let coords = x
                .coords
                .iter()
                .map(|s| {
                    let num = (s.rat.numer() * &mb).mod_floor(s.rat.denom());
                    let irr = if s.irr.is_zero() {
                        Rat::zero()
                    } else {
                        &s.irr * &m_rat
                    };
                    Scalar::new(Rat::new(num, s.rat.denom().clone()), irr)
                })
                .collect();
            return Point::new(coords);
        }
        self.reduce_unchecked(&x.mul_int(m))
    }

    /// Canonical basis: Hermite normal form of the scaled-to-integer basis,
    /// divided back. Two equal lattices canonicalize identically.
    pub fn canonical(&self) -> Lattice {
        let (d, ints) = mat::to_integer_matrix(&self.basis);
        let mut m = IntMat {
            rows: self.rank,
            cols: self.rank,
            a: ints,
        };
        m.col_hnf(None);
        let dr = Rat::from_integer(d);
        let basis: Vec<Rat> =
            m.a.iter()
                .map(|e| Rat::from_integer(e.clone()) / &dr)
                .collect();
        Lattice::from_basis(self.rank, basis).expect("HNF of a full-rank basis is full rank")
    }

    /// Smallest lattice containing both, via the column normal form of the
    /// concatenated bases.
    pub fn join(&self, other: &Lattice) -> Result<Lattice> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: other.rank,
            });
        }
        let r = self.rank;
        let mut all: Vec<Rat> = Vec::with_capacity(2 * r * r);
        for i in 0..r {
            all.extend(self.basis[i * r..(i + 1) * r].iter().cloned());
            all.extend(other.basis[i * r..(i + 1) * r].iter().cloned());
        }
        let (d, ints) = mat::to_integer_matrix(&all);
        let mut m = IntMat {
            rows: r,
            cols: 2 * r,
            a: ints,
        };
        let rank = m.col_hnf(None);
        debug_assert_eq!(rank, r);
        let dr = Rat::from_integer(d);
        let mut basis = vec![Rat::zero(); r * r];
        for i in 0..r {
            for j in 0..r {
                basis[i * r + j] = Rat::from_integer(m.at(i, j).clone()) / &dr;
            }
        }
        Lattice::from_basis(r, basis)
    }

    /// Intersection of two commensurable full-rank lattices.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: other.rank,
            });
        }
        let r = self.rank;
        let mut all: Vec<Rat> = Vec::with_capacity(2 * r * r);
        for i in 0..r {
            all.extend(self.basis[i * r..(i + 1) * r].iter().cloned());
            all.extend(other.basis[i * r..(i + 1) * r].iter().map(|e| -e.clone()));
        }
        let (_, ints) = mat::to_integer_matrix(&all);
        let mut m = IntMat {
            rows: r,
            cols: 2 * r,
            a: ints,
        };
        let mut u = IntMat::identity(2 * r);
        let rank = m.col_hnf(Some(&mut u));
        debug_assert_eq!(rank, r);
        // Columns r..2r of u span the kernel of [B1 | -B2]; their top halves
        // are the coordinates (in B1) of an intersection basis.
        let mut basis = vec![Rat::zero(); r * r];
        for j in 0..r {
            let coeffs: Vec<Rat> = (0..r)
                .map(|i| Rat::from_integer(u.at(i, r + j).clone()))
                .collect();
            let v = mat::rat_mat_vec(r, &self.basis, &coeffs);
            for i in 0..r {
                basis[i * r + j] = v[i].clone();
            }
        }
        Ok(Lattice::from_basis(r, basis)?.canonical())
    }

    /// True iff every basis vector of `self` lies in `other`.
    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        if self.rank != other.rank {
            return false;
        }
        (0..self.rank).all(|j| {
            other
                .coords(
                    &(0..self.rank)
                        .map(|i| self.basis[i * self.rank + j].clone())
                        .collect::<Vec<_>>(),
                )
                .iter()
                .all(|c| c.is_integer())
        })
    }

    /// Set equality of lattices (mutual containment), independent of basis.
    pub fn same_lattice(&self, other: &Lattice) -> bool {
        self.is_sublattice_of(other) && other.is_sublattice_of(self)
    }

    /// Integer coordinate matrix of a sublattice's basis in this basis.
    pub fn sublattice_coords(&self, sub: &Lattice) -> Result<IntMat> {
        if self.rank != sub.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: sub.rank,
            });
        }
        let r = self.rank;
        let mut m = IntMat::zero(r, r);
        for j in 0..r {
            let col: Vec<Rat> = (0..r).map(|i| sub.basis[i * r + j].clone()).collect();
            let c = self.coords(&col);
            for (i, ci) in c.iter().enumerate() {
                if !ci.is_integer() {
                    return Err(Error::invalid_input(
                        "not a sublattice: non-integer coordinates",
                    ));
                }
                *m.at_mut(i, j) = ci.to_integer();
            }
        }
        Ok(m)
    }

    /// `[self : sub]`, the index of a full-rank sublattice.
    pub fn index_of_sublattice(&self, sub: &Lattice) -> Result<BigInt> {
        let m = self.sublattice_coords(sub)?;
        let rats: Vec<Rat> = m.a.iter().map(|e| Rat::from_integer(e.clone())).collect();
        let det = mat::rat_det(self.rank, &rats);
        debug_assert!(det.is_integer());
        Ok(det.to_integer().abs())
    }

    /// A transversal of `self / sub`: ambient representatives, one per coset
    /// of the sublattice, enumerated from the Hermite form's diagonal box.
    pub fn coset_reps_mod(&self, sub: &Lattice) -> Result<Vec<Point>> {
        let mut m = self.sublattice_coords(sub)?;
        m.col_hnf(None);
        let r = self.rank;
        let diag: Vec<BigInt> = (0..r).map(|i| m.at(i, i).clone()).collect();
        if diag.iter().any(|d| d.is_zero()) {
            return Err(Error::invalid_input("sublattice is not full rank"));
        }
        let mut reps = Vec::new();
        let mut c = vec![BigInt::zero(); r];
        loop {
            let coords: Vec<Rat> = c.iter().map(|ci| Rat::from_integer(ci.clone())).collect();
            reps.push(self.from_coords(&coords));
            // odometer over the diagonal box, last coordinate fastest
            let mut k = r;
            loop {
                if k == 0 {
                    return Ok(reps);
                }
                k -= 1;
                c[k] += 1;
                if c[k] < diag[k] {
                    break;
                }
                c[k] = BigInt::zero();
            }
        }
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.same_lattice(other)
    }
}

impl Eq for Lattice {}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice(rank {}, basis ", self.rank)?;
        f.debug_list()
            .entries(self.basis.iter().map(crate::point::rat_to_string))
            .finish()?;
        write!(f, ")")
    }
}

/// Checks the adapted-basis postcondition: `candidate` generates the same
/// lattice as `original`, and every basis coordinate of `x` and `y` in it is
/// nonzero.
pub fn is_adapted_basis(candidate: &Lattice, original: &Lattice, x: &Point, y: &Point) -> bool {
    candidate.same_lattice(original)
        && candidate
            .coords(&x.rat_coords())
            .iter()
            .all(|c| !c.is_zero())
        && candidate
            .coords(&y.rat_coords())
            .iter()
            .all(|c| !c.is_zero())
}

/// A basis of `l` in which all coordinates of `x` and of `y` are nonzero,
/// found by integer shears. `x` and `y` must be nonzero rational points.
pub fn adapted_basis(x: &Point, y: &Point, l: &Lattice) -> Result<Lattice> {
    if x.rank() != l.rank() {
        return Err(Error::RankMismatch {
            expected: l.rank(),
            got: x.rank(),
        });
    }
    if y.rank() != l.rank() {
        return Err(Error::RankMismatch {
            expected: l.rank(),
            got: y.rank(),
        });
    }
    if x.is_zero() || y.is_zero() {
        return Err(Error::invalid_input(
            "adapted basis requires nonzero points",
        ));
    }
    if !x.is_rational() || !y.is_rational() {
        return Err(Error::invalid_input(
            "adapted basis requires points in Q*Lambda",
        ));
    }
    let r = l.rank();
    let mut u = l.coords(&x.rat_coords());
    let mut w = l.coords(&y.rat_coords());
    // v is the unimodular row-operation matrix applied to the coordinate
    // vectors; the new basis is B * v^{-1}.
    let mut v = vec![Rat::zero(); r * r];
    for i in 0..r {
        v[i * r + i] = Rat::one();
    }

    let apply =
        |u: &mut Vec<Rat>, w: &mut Vec<Rat>, v: &mut Vec<Rat>, k: usize, j: usize, t: i64| {
            let tr = Rat::from_integer(BigInt::from(t));
            let d = &u[j] * &tr;
            u[k] += d;
            let d = &w[j] * &tr;
            w[k] += d;
            for col in 0..r {
                let d = &v[j * r + col] * &tr;
                v[k * r + col] += d;
            }
        };

    // Make position 0 nonzero in both vectors.
    if u[0].is_zero() || w[0].is_zero() {
        let mut pivot = (0..r).find(|&j| !u[j].is_zero() && !w[j].is_zero());
        if pivot.is_none() {
            // Supports are disjoint; merge one row of each support.
            let ju = (0..r).find(|&j| !u[j].is_zero()).expect("x is nonzero");
            let jw = (0..r).find(|&j| !w[j].is_zero()).expect("y is nonzero");
            debug_assert_ne!(ju, jw);
            apply(&mut u, &mut w, &mut v, ju, jw, 1);
            pivot = Some(ju);
        }
        let j = pivot.expect("pivot found or constructed");
        if j != 0 && (u[0].is_zero() || w[0].is_zero()) {
            let t = (1..=3)
                .find(|&t| {
                    let tr = Rat::from_integer(BigInt::from(t));
                    !(&u[0] + &u[j] * &tr).is_zero() && !(&w[0] + &w[j] * &tr).is_zero()
                })
                .expect("at most two shear amounts are excluded");
            apply(&mut u, &mut w, &mut v, 0, j, t);
        }
    }
    // Row 0 now has both coordinates nonzero; fix the remaining rows off it.
    for k in 1..r {
        if u[k].is_zero() || w[k].is_zero() {
            let t = (1..=3)
                .find(|&t| {
                    let tr = Rat::from_integer(BigInt::from(t));
                    !(&u[k] + &u[0] * &tr).is_zero() && !(&w[k] + &w[0] * &tr).is_zero()
                })
                .expect("at most two shear amounts are excluded");
            apply(&mut u, &mut w, &mut v, k, 0, t);
        }
    }

    let v_inv = mat::rat_inverse(r, &v).expect("shear products are unimodular");
    let basis = mat::rat_mat_mul(r, l.basis(), &v_inv);
    let out = Lattice::from_basis(r, basis)?;
    debug_assert!(is_adapted_basis(&out, l, x, y));
    Ok(out)
}
