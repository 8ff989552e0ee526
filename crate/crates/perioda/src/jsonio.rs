//! Wire formats. Rationals travel as strings `"num/den"` (reduced, positive
//! denominator; plain `"n"` for integers) so no value is ever corrupted
//! through floats. Points are `{"rat": [...], "irr": [...]}`, lattices are
//! row-major basis matrices with integer entries (strings admit the
//! occasional rational basis), and functions, divisors, and certificates are
//! built from those.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::divisor::{CoboundarySolution, CocyclePair, Divisor, PrincipalityCertificate};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::point::{parse_rat, rat_to_string, Point, Rat, Scalar};
use crate::reconstruct::PeriodicityCertificate;
use crate::sparse::{QuasiPeriodicFn, TelescopeFn, Window};

/// A matrix entry: plain JSON integer, or a string for big or rational
/// values.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumDto {
    Int(i64),
    Str(String),
}

impl NumDto {
    fn to_rat(&self) -> Result<Rat> {
        let parsed = match self {
            NumDto::Int(v) => return Ok(Rat::from_integer((*v).into())),
            NumDto::Str(s) => parse_rat(s),
        };
        parsed.ok_or_else(|| Error::invalid_input(format!("bad rational literal {self:?}")))
    }

    fn from_rat(r: &Rat) -> NumDto {
        if r.is_integer() {
            if let Ok(v) = i64::try_from(r.numer().clone()) {
                return NumDto::Int(v);
            }
        }
        NumDto::Str(rat_to_string(r))
    }
}

fn rat_from_str(s: &str) -> Result<Rat> {
    parse_rat(s).ok_or_else(|| Error::invalid_input(format!("bad rational literal {s:?}")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointDto {
    pub rat: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irr: Option<Vec<String>>,
}

pub fn point_to_dto(p: &Point) -> PointDto {
    let irr = if p.is_rational() {
        None
    } else {
        Some(p.coords.iter().map(|s| rat_to_string(&s.irr)).collect())
    };
    PointDto {
        rat: p.coords.iter().map(|s| rat_to_string(&s.rat)).collect(),
        irr,
    }
}

pub fn point_from_dto(dto: &PointDto) -> Result<Point> {
    let rat: Vec<Rat> = dto
        .rat
        .iter()
        .map(|s| rat_from_str(s))
        .collect::<Result<_>>()?;
    let irr: Vec<Rat> = match &dto.irr {
        None => vec![Rat::zero(); rat.len()],
        Some(v) => {
            if v.len() != rat.len() {
                return Err(Error::invalid_input("point rat/irr length mismatch"));
            }
            v.iter().map(|s| rat_from_str(s)).collect::<Result<_>>()?
        }
    };
    Ok(Point::new(
        rat.into_iter()
            .zip(irr)
            .map(|(r, i)| Scalar::new(r, i))
            .collect(),
    ))
}

pub type LatticeDto = Vec<Vec<NumDto>>;

pub fn lattice_to_dto(l: &Lattice) -> LatticeDto {
    let r = l.rank();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| NumDto::from_rat(&l.basis()[i * r + j]))
                .collect()
        })
        .collect()
}

pub fn lattice_from_dto(dto: &LatticeDto) -> Result<Lattice> {
    let r = dto.len();
    if r == 0 || dto.iter().any(|row| row.len() != r) {
        return Err(Error::invalid_input(
            "lattice basis must be a square matrix",
        ));
    }
    let mut basis = Vec::with_capacity(r * r);
    for row in dto {
        for e in row {
            basis.push(e.to_rat()?);
        }
    }
    Lattice::from_basis(r, basis)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryDto {
    pub point: PointDto,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QpfDto {
    pub lattice: LatticeDto,
    pub entries: Vec<EntryDto>,
    pub zero_value: String,
}

pub fn qpf_to_dto(f: &QuasiPeriodicFn) -> QpfDto {
    QpfDto {
        lattice: lattice_to_dto(f.lattice()),
        entries: f
            .sorted_entries()
            .into_iter()
            .map(|(p, v)| EntryDto {
                point: point_to_dto(p),
                value: rat_to_string(v),
            })
            .collect(),
        zero_value: rat_to_string(f.zero_value()),
    }
}

pub fn qpf_from_dto(dto: &QpfDto) -> Result<QuasiPeriodicFn> {
    let lattice = lattice_from_dto(&dto.lattice)?;
    let entries = dto
        .entries
        .iter()
        .map(|e| Ok((point_from_dto(&e.point)?, rat_from_str(&e.value)?)))
        .collect::<Result<Vec<_>>>()?;
    QuasiPeriodicFn::new(lattice, entries, rat_from_str(&dto.zero_value)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TelescopeDto {
    pub g: QpfDto,
    pub m: u32,
}

pub fn telescope_to_dto(t: &TelescopeFn) -> TelescopeDto {
    TelescopeDto {
        g: qpf_to_dto(t.g()),
        m: t.m(),
    }
}

pub fn telescope_from_dto(dto: &TelescopeDto) -> Result<TelescopeFn> {
    TelescopeFn::new(qpf_from_dto(&dto.g)?, dto.m)
}

/// Divisor wire form: a rank-2 function payload with an `integer` marker.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisorDto {
    #[serde(flatten)]
    pub f: QpfDto,
    #[serde(default = "default_true")]
    pub integer: bool,
}

fn default_true() -> bool {
    true
}

pub fn divisor_to_dto(d: &Divisor) -> DivisorDto {
    DivisorDto {
        f: qpf_to_dto(d.underlying()),
        integer: true,
    }
}

pub fn divisor_from_dto(dto: &DivisorDto) -> Result<Divisor> {
    Divisor::new(qpf_from_dto(&dto.f)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowDto {
    pub bound: u32,
    pub den_cap: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha_probes: Vec<PointDto>,
}

pub fn window_to_dto(w: &Window) -> WindowDto {
    WindowDto {
        bound: w.bound,
        den_cap: w.den_cap,
        alpha_probes: w.alpha_probes.iter().map(point_to_dto).collect(),
    }
}

pub fn window_from_dto(dto: &WindowDto) -> Result<Window> {
    let probes = dto
        .alpha_probes
        .iter()
        .map(point_from_dto)
        .collect::<Result<Vec<_>>>()?;
    Ok(Window::new(dto.bound, dto.den_cap).with_probes(probes))
}

/// Input for `perioda reconstruct`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReconstructInputDto {
    pub g_p: QpfDto,
    pub g_q: QpfDto,
    pub p: u32,
    pub q: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha_probes: Vec<PointDto>,
}

/// Input for `perioda divisor-solve`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleInputDto {
    pub d_sigma: DivisorDto,
    pub d_tau: DivisorDto,
    pub p: u32,
    pub q: u32,
    pub lattice_f: LatticeDto,
}

pub fn cocycle_from_dto(dto: &CocycleInputDto) -> Result<(CocyclePair, Lattice)> {
    let pair = CocyclePair::new(
        divisor_from_dto(&dto.d_sigma)?,
        divisor_from_dto(&dto.d_tau)?,
        dto.p,
        dto.q,
    )?;
    Ok((pair, lattice_from_dto(&dto.lattice_f)?))
}

/// Input for `perioda divisor-check`: either a single divisor with a test
/// lattice, or a cocycle pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DivisorCheckInputDto {
    Principality {
        divisor: DivisorDto,
        lattice: LatticeDto,
    },
    Cocycle(CocycleInputDto),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodicityCertificateDto {
    pub result: QpfDto,
    pub constant_c: String,
    pub window: WindowDto,
    pub cross_telescope_checked: bool,
}

pub fn periodicity_cert_to_dto(c: &PeriodicityCertificate) -> PeriodicityCertificateDto {
    PeriodicityCertificateDto {
        result: qpf_to_dto(&c.result),
        constant_c: rat_to_string(&c.constant_c),
        window: window_to_dto(&c.window_checked),
        cross_telescope_checked: c.cross_telescope_checked,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrincipalityCertificateDto {
    pub lattice_used: LatticeDto,
    pub degree: String,
    pub aj: PointDto,
    pub verdict: bool,
    pub principal_in_k: bool,
}

pub fn principality_cert_to_dto(c: &PrincipalityCertificate) -> PrincipalityCertificateDto {
    PrincipalityCertificateDto {
        lattice_used: lattice_to_dto(&c.lattice_used),
        degree: c.degree.to_string(),
        aj: point_to_dto(&c.aj),
        verdict: c.verdict,
        principal_in_k: c.principal_in_k,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoboundarySolutionDto {
    pub e: DivisorDto,
    pub certificate: PrincipalityCertificateDto,
    pub lattice_prime: LatticeDto,
    pub shrink: u32,
}

pub fn coboundary_solution_to_dto(s: &CoboundarySolution) -> CoboundarySolutionDto {
    CoboundarySolutionDto {
        e: divisor_to_dto(&s.e),
        certificate: principality_cert_to_dto(&s.certificate),
        lattice_prime: lattice_to_dto(&s.lattice_prime),
        shrink: s.shrink,
    }
}
