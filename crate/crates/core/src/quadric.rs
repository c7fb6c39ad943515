//! The parabolic quadric `Q: X0 X4 + X1 X3 + X2^2 = 0` of PG(4,q), its
//! generator lines, and the candidate ovoids
//! `O_4(f) = {(1, x, y, f(x,y), -y^2 - x f(x,y))} ∪ {(0,0,0,0,1)}`.
//!
//! Two independent decisions of the ovoid property live here: the pairwise
//! test on the bilinear form, and the definition itself (every generator
//! meets the set exactly once).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::mvpoly::BivariatePoly;

/// Default largest q for which generators are enumerated.
pub const GENERATOR_GUARD: u32 = 27;
/// Largest q accepted when the caller opts in to bigger enumerations.
pub const GENERATOR_GUARD_MAX: u32 = 81;
/// Largest q for which the quadric point list is materialised.
pub const POINT_GUARD: u32 = 243;

/// A point of PG(4,q) whose first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ProjPoint5([Elem; 5]);

impl ProjPoint5 {
    pub fn new(field: &Field, coords: [Elem; 5]) -> Result<Self> {
        if coords.iter().any(|&c| !field.contains(c)) {
            return Err(Error::FieldMismatch);
        }
        let lead = coords
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .ok_or(Error::ZeroPolynomial)?;
        let s = field.inv(lead)?;
        Ok(ProjPoint5(coords.map(|c| field.mul(c, s))))
    }

    pub fn coords(&self) -> [Elem; 5] {
        self.0
    }
}

#[inline]
fn quadratic_form(field: &Field, v: &[Elem; 5]) -> Elem {
    let a = field.mul(v[0], v[4]);
    let b = field.mul(v[1], v[3]);
    field.add(field.add(a, b), field.square(v[2]))
}

#[inline]
fn bilinear_coords(field: &Field, u: &[Elem; 5], v: &[Elem; 5]) -> Elem {
    let mut acc = field.mul(u[0], v[4]);
    acc = field.add(acc, field.mul(u[4], v[0]));
    acc = field.add(acc, field.mul(u[1], v[3]));
    acc = field.add(acc, field.mul(u[3], v[1]));
    let t = field.mul(u[2], v[2]);
    field.add(acc, field.add(t, t))
}

/// The quadric over a fixed field.
#[derive(Clone, Debug)]
pub struct Quadric {
    field: Field,
}

impl Quadric {
    pub fn new(field: &Field) -> Self {
        Quadric {
            field: field.clone(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `(q + 1)(q^2 + 1)`.
    pub fn num_points(&self) -> u64 {
        let q = self.field.q() as u64;
        (q + 1) * (q * q + 1)
    }

    pub fn on_quadric(&self, p: &ProjPoint5) -> bool {
        quadratic_form(&self.field, &p.0).is_zero()
    }

    /// `B(P,R) = P0 R4 + P4 R0 + P1 R3 + P3 R1 + 2 P2 R2`, the polar form of
    /// the quadratic form (alternating when p = 2).
    pub fn bilinear(&self, p: &ProjPoint5, r: &ProjPoint5) -> Elem {
        bilinear_coords(&self.field, &p.0, &r.0)
    }

    /// Whether the line `PR` lies on the quadric.
    pub fn collinear(&self, p: &ProjPoint5, r: &ProjPoint5) -> Result<bool> {
        if p == r {
            return Err(Error::SamePoint);
        }
        if !self.on_quadric(p) || !self.on_quadric(r) {
            return Err(Error::NotOnQuadric);
        }
        Ok(self.bilinear(p, r).is_zero())
    }

    /// Position of a quadric point in the lexicographic point order.
    pub fn rank(&self, p: &ProjPoint5) -> Result<u32> {
        if !self.on_quadric(p) {
            return Err(Error::NotOnQuadric);
        }
        Ok(self.rank_unchecked(&p.0))
    }

    fn rank_unchecked(&self, c: &[Elem; 5]) -> u32 {
        let q = self.field.q();
        if !c[0].is_zero() {
            1 + q + q * q + (c[1].0 * q + c[2].0) * q + c[3].0
        } else if !c[1].is_zero() {
            1 + q + c[2].0 * q + c[4].0
        } else if !c[3].is_zero() {
            1 + c[4].0
        } else {
            0
        }
    }

    /// Inverse of [`Quadric::rank`].
    pub fn point(&self, rank: u32) -> Result<ProjPoint5> {
        let f = &self.field;
        let q = f.q();
        let z = Elem::ZERO;
        let one = Elem::ONE;
        if rank as u64 >= self.num_points() {
            return Err(Error::ElementOutOfRange {
                index: rank as u64,
                q: q as u64,
            });
        }
        let c = if rank == 0 {
            [z, z, z, z, one]
        } else if rank < 1 + q {
            [z, z, z, one, Elem(rank - 1)]
        } else if rank < 1 + q + q * q {
            let r = rank - 1 - q;
            let x2 = Elem(r / q);
            [z, one, x2, f.neg(f.square(x2)), Elem(r % q)]
        } else {
            let r = rank - 1 - q - q * q;
            let (x1, x2, x3) = (Elem(r / (q * q)), Elem(r / q % q), Elem(r % q));
            let x4 = f.neg(f.add(f.mul(x1, x3), f.square(x2)));
            [one, x1, x2, x3, x4]
        };
        Ok(ProjPoint5(c))
    }

    /// Every point of the quadric in lexicographic order.
    pub fn enumerate_points(&self) -> Result<Vec<ProjPoint5>> {
        self.guard("point enumeration", POINT_GUARD)?;
        (0..self.num_points() as u32).map(|r| self.point(r)).collect()
    }

    fn guard(&self, what: &'static str, limit: u32) -> Result<()> {
        if self.field.q() > limit {
            Err(Error::GuardExceeded {
                what,
                q: self.field.q() as u64,
                limit: limit as u64,
            })
        } else {
            Ok(())
        }
    }

    /// All lines contained in the quadric, with the default guard.
    pub fn enumerate_generators(&self) -> Result<Generators> {
        self.enumerate_generators_with_guard(GENERATOR_GUARD)
    }

    /// All lines contained in the quadric. `guard` may be raised up to
    /// [`GENERATOR_GUARD_MAX`].
    ///
    /// For each point `P` the lines on `Q` through `P` are the joins of `P`
    /// with the conic `Q ∩ P^⊥ ∩ {X_k = 0}`, where `X_k` is the leading
    /// coordinate of `P`. A line is kept only from its smallest point, so
    /// each appears once.
    pub fn enumerate_generators_with_guard(&self, guard: u32) -> Result<Generators> {
        self.guard("generator enumeration", guard.min(GENERATOR_GUARD_MAX))?;
        let q = self.field.q();
        let n = self.num_points() as u32;
        let stride = q as usize + 1;
        let per_point: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .map(|r| self.lines_from(r))
            .collect();
        let mut lines: Vec<Vec<u32>> = per_point
            .into_iter()
            .flat_map(|flat| {
                flat.chunks(stride)
                    .map(<[u32]>::to_vec)
                    .collect::<Vec<_>>()
            })
            .collect();
        lines.sort_unstable();
        lines.dedup();
        Ok(Generators {
            quadric: self.clone(),
            stride,
            ranks: lines.concat(),
        })
    }

    /// Lines through point `r` whose smallest point is `r`, flattened.
    fn lines_from(&self, r: u32) -> Vec<u32> {
        let f = &self.field;
        let p = self.point(r).expect("rank in range").0;
        let lead = p.iter().position(|c| !c.is_zero()).expect("nonzero point");
        let two_p2 = f.add(p[2], p[2]);
        let c = [p[4], p[3], two_p2, p[1], p[0]];
        let m = (0..5)
            .find(|&i| i != lead && !c[i].is_zero())
            .expect("tangent hyperplane differs from the leading-coordinate hyperplane");
        let free: Vec<usize> = (0..5).filter(|&i| i != lead && i != m).collect();
        let inv_cm = f.inv(c[m]).expect("nonzero");

        let mut out = Vec::new();
        let mut line = Vec::with_capacity(f.q() as usize + 1);
        for triple in projective_triples(f) {
            let mut v = [Elem::ZERO; 5];
            let mut acc = Elem::ZERO;
            for (slot, &i) in free.iter().enumerate() {
                v[i] = triple[slot];
                acc = f.add(acc, f.mul(c[i], v[i]));
            }
            v[m] = f.neg(f.mul(acc, inv_cm));
            if !quadratic_form(f, &v).is_zero() {
                continue;
            }
            line.clear();
            line.push(r);
            let mut smallest = true;
            for t in f.elements() {
                let w: [Elem; 5] = std::array::from_fn(|i| f.add(v[i], f.mul(t, p[i])));
                let rank = self.rank_unchecked(&normalize(f, w));
                if rank < r {
                    smallest = false;
                    break;
                }
                line.push(rank);
            }
            if smallest {
                line.sort_unstable();
                out.extend_from_slice(&line);
            }
        }
        out
    }
}

fn normalize(f: &Field, v: [Elem; 5]) -> [Elem; 5] {
    let lead = v.iter().copied().find(|c| !c.is_zero()).expect("nonzero vector");
    if lead == Elem::ONE {
        return v;
    }
    let s = f.inv(lead).expect("nonzero");
    v.map(|c| f.mul(c, s))
}

/// Normalised points of PG(2,q).
fn projective_triples(f: &Field) -> impl Iterator<Item = [Elem; 3]> + '_ {
    let z = Elem::ZERO;
    let one = Elem::ONE;
    let a = f
        .elements()
        .flat_map(move |b| f.elements().map(move |c| [one, b, c]));
    let b = f.elements().map(move |c| [z, one, c]);
    a.chain(b).chain(std::iter::once([z, z, one]))
}

/// A line of PG(4,q) contained in the quadric, keyed by the sorted ranks of
/// its q + 1 points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GeneratorLine {
    pub ranks: Vec<u32>,
}

impl GeneratorLine {
    pub fn points(&self, quadric: &Quadric) -> Vec<ProjPoint5> {
        self.ranks
            .iter()
            .map(|&r| quadric.point(r).expect("rank in range"))
            .collect()
    }

    /// Two distinct points spanning the line.
    pub fn spanning_pair(&self, quadric: &Quadric) -> (ProjPoint5, ProjPoint5) {
        (
            quadric.point(self.ranks[0]).expect("rank in range"),
            quadric.point(self.ranks[1]).expect("rank in range"),
        )
    }
}

/// All generators of the quadric, sorted by canonical key.
#[derive(Clone, Debug)]
pub struct Generators {
    quadric: Quadric,
    stride: usize,
    ranks: Vec<u32>,
}

impl Generators {
    pub fn len(&self) -> usize {
        self.ranks.len() / self.stride
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn quadric(&self) -> &Quadric {
        &self.quadric
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.ranks.chunks(self.stride)
    }

    pub fn line(&self, i: usize) -> GeneratorLine {
        GeneratorLine {
            ranks: self.ranks[i * self.stride..(i + 1) * self.stride].to_vec(),
        }
    }

    /// Decides the ovoid property from the definition: every generator must
    /// contain exactly one point of the candidate. The witness is the first
    /// failing generator in canonical order.
    pub fn check(&self, candidate: &OvoidCandidate) -> Result<GeneratorVerdict> {
        if candidate.field() != self.quadric.field() {
            return Err(Error::FieldMismatch);
        }
        let n = self.quadric.num_points() as usize;
        let mut member = vec![false; n];
        for p in candidate.points() {
            member[self.quadric.rank_unchecked(&p.0) as usize] = true;
        }
        let bad = self
            .ranks
            .par_chunks(self.stride)
            .enumerate()
            .find_map_first(|(i, line)| {
                let hits = line.iter().filter(|&&r| member[r as usize]).count();
                (hits != 1).then_some((i, hits))
            });
        Ok(match bad {
            None => GeneratorVerdict::Ovoid,
            Some((i, meets)) => GeneratorVerdict::Fails {
                line: self.line(i),
                meets,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorVerdict {
    Ovoid,
    /// A generator meeting the candidate in `meets` points (0 or at least 2).
    Fails { line: GeneratorLine, meets: usize },
}

impl GeneratorVerdict {
    pub fn is_ovoid(&self) -> bool {
        matches!(self, GeneratorVerdict::Ovoid)
    }
}

/// Two affine parameters `(x1, y1) < (x2, y2)` whose points of `O_4(f)` are
/// collinear on the quadric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PairWitness {
    pub first: (Elem, Elem),
    pub second: (Elem, Elem),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairwiseVerdict {
    Ovoid,
    Collinear(PairWitness),
}

impl PairwiseVerdict {
    pub fn is_ovoid(&self) -> bool {
        matches!(self, PairwiseVerdict::Ovoid)
    }

    pub fn witness(&self) -> Option<PairWitness> {
        match self {
            PairwiseVerdict::Ovoid => None,
            PairwiseVerdict::Collinear(w) => Some(*w),
        }
    }
}

const DENSE_PAIRWISE_LIMIT: u32 = 1024;

/// Reusable tables for the pairwise test
/// `(y1 - y2)^2 + (x1 - x2)(f(x1,y1) - f(x2,y2)) != 0` over all affine pairs.
///
/// The point at infinity needs no check: its form value against any affine
/// point of `O_4(f)` is 1.
pub struct PairwiseChecker {
    field: Field,
    dense: Option<DenseTables>,
}

struct DenseTables {
    /// `sub[a * q + b] = a - b`
    sub: Vec<u16>,
    /// `negmul[a * q + b] = -(a * b)`
    negmul: Vec<u16>,
    /// `sq[a] = a^2`
    sq: Vec<u16>,
}

impl PairwiseChecker {
    pub fn new(field: &Field) -> Self {
        let q = field.q();
        let dense = (q <= DENSE_PAIRWISE_LIMIT).then(|| {
            let mut sub = Vec::with_capacity((q * q) as usize);
            let mut negmul = Vec::with_capacity((q * q) as usize);
            for a in field.elements() {
                for b in field.elements() {
                    sub.push(field.sub(a, b).0 as u16);
                    negmul.push(field.neg(field.mul(a, b)).0 as u16);
                }
            }
            let sq = field.elements().map(|a| field.square(a).0 as u16).collect();
            DenseTables { sub, negmul, sq }
        });
        PairwiseChecker {
            field: field.clone(),
            dense,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Checks a function given by its value table (`table[x * q + y]`). The
    /// witness is the lexicographically smallest violating pair; it does not
    /// depend on how the rows are scheduled.
    pub fn check_table(&self, table: &[Elem]) -> PairwiseVerdict {
        let q = self.field.q() as usize;
        assert_eq!(table.len(), q * q, "value table must cover GF(q)^2");
        let found = match &self.dense {
            Some(t) => {
                let fs: Vec<u16> = table.iter().map(|e| e.0 as u16).collect();
                (0..q * q)
                    .into_par_iter()
                    .find_map_first(|k1| dense_row(t, &fs, q, k1).map(|k2| (k1, k2)))
            }
            None => (0..q * q)
                .into_par_iter()
                .find_map_first(|k1| self.generic_row(table, q, k1).map(|k2| (k1, k2))),
        };
        match found {
            None => PairwiseVerdict::Ovoid,
            Some((k1, k2)) => PairwiseVerdict::Collinear(PairWitness {
                first: (Elem((k1 / q) as u32), Elem((k1 % q) as u32)),
                second: (Elem((k2 / q) as u32), Elem((k2 % q) as u32)),
            }),
        }
    }

    fn generic_row(&self, table: &[Elem], q: usize, k1: usize) -> Option<usize> {
        let f = &self.field;
        let (x1, y1, f1) = (Elem((k1 / q) as u32), Elem((k1 % q) as u32), table[k1]);
        (k1 + 1..q * q).find(|&k2| {
            let (x2, y2) = (Elem((k2 / q) as u32), Elem((k2 % q) as u32));
            let dy = f.sub(y1, y2);
            let v = f.add(f.square(dy), f.mul(f.sub(x1, x2), f.sub(f1, table[k2])));
            v.is_zero()
        })
    }
}

#[inline]
fn dense_row(t: &DenseTables, fs: &[u16], q: usize, k1: usize) -> Option<usize> {
    let (x1, y1) = (k1 / q, k1 % q);
    let f1 = fs[k1] as usize;
    let sub_x = &t.sub[x1 * q..(x1 + 1) * q];
    let sub_f = &t.sub[f1 * q..(f1 + 1) * q];
    let sub_y = &t.sub[y1 * q..(y1 + 1) * q];
    let sq_dy: Vec<u16> = sub_y.iter().map(|&d| t.sq[d as usize]).collect();
    for x2 in x1..q {
        let dx = sub_x[x2] as usize;
        let row = &t.negmul[dx * q..(dx + 1) * q];
        let start = if x2 == x1 { y1 + 1 } else { 0 };
        let fx = &fs[x2 * q..(x2 + 1) * q];
        for y2 in start..q {
            let df = sub_f[fx[y2] as usize];
            if sq_dy[y2] == row[df as usize] {
                return Some(x2 * q + y2);
            }
        }
    }
    None
}

/// The candidate `O_4(f)`: `q^2` affine points and `(0,0,0,0,1)`.
#[derive(Clone, Debug)]
pub struct OvoidCandidate {
    f: BivariatePoly,
    values: Vec<Elem>,
}

impl OvoidCandidate {
    /// Builds `O_4(f)`; requires `f(0,0) = 0`.
    pub fn new(f: &BivariatePoly) -> Result<Self> {
        let values = f.value_table();
        if !values[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        Ok(OvoidCandidate {
            f: f.clone(),
            values,
        })
    }

    pub fn f(&self) -> &BivariatePoly {
        &self.f
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    /// `f` on the plane, indexed by `x * q + y`.
    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(1, x, y, f(x,y), -y^2 - x f(x,y))`.
    pub fn affine_point(&self, x: Elem, y: Elem) -> ProjPoint5 {
        let field = self.field();
        let q = field.q();
        let fv = self.values[(x.0 * q + y.0) as usize];
        let last = field.neg(field.add(field.square(y), field.mul(x, fv)));
        ProjPoint5([Elem::ONE, x, y, fv, last])
    }

    pub fn infinity() -> ProjPoint5 {
        ProjPoint5([Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ONE])
    }

    /// Affine points in `(x, y)` order followed by the point at infinity.
    pub fn points(&self) -> impl Iterator<Item = ProjPoint5> + '_ {
        let field = self.field();
        field
            .elements()
            .flat_map(move |x| field.elements().map(move |y| self.affine_point(x, y)))
            .chain(std::iter::once(Self::infinity()))
    }

    pub fn is_ovoid_pairwise(&self) -> PairwiseVerdict {
        PairwiseChecker::new(self.field()).check_table(&self.values)
    }

    /// Generator-based decision with the default guard.
    pub fn is_ovoid_by_generators(&self) -> Result<GeneratorVerdict> {
        Quadric::new(self.field()).enumerate_generators()?.check(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, HashSet};

    fn gf(p: u32, h: u32) -> Field {
        Field::gf(p, h).unwrap()
    }

    fn pt(f: &Field, c: [u32; 5]) -> ProjPoint5 {
        ProjPoint5::new(f, c.map(Elem)).unwrap()
    }

    #[test]
    fn quadric_membership() {
        let f = gf(3, 1);
        let qd = Quadric::new(&f);
        assert!(qd.on_quadric(&pt(&f, [1, 0, 0, 0, 0])));
        assert!(qd.on_quadric(&pt(&f, [0, 0, 0, 0, 1])));
        assert!(!qd.on_quadric(&pt(&f, [1, 0, 1, 0, 0])));
        let c = OvoidCandidate::new(&BivariatePoly::parse(&f, "x^2 + x*y").unwrap()).unwrap();
        assert!(c.points().all(|p| qd.on_quadric(&p)));
    }

    #[test]
    fn normalisation() {
        let f = gf(5, 1);
        let p = ProjPoint5::new(&f, [0, 2, 4, 0, 1].map(Elem)).unwrap();
        assert_eq!(p.coords(), [0, 1, 2, 0, 3].map(Elem));
        assert!(ProjPoint5::new(&f, [Elem::ZERO; 5]).is_err());
    }

    #[test]
    fn bilinear_examples() {
        let f = gf(3, 1);
        let qd = Quadric::new(&f);
        let e0 = pt(&f, [1, 0, 0, 0, 0]);
        let e4 = pt(&f, [0, 0, 0, 0, 1]);
        assert_eq!(qd.bilinear(&e0, &e4), Elem::ONE);
        assert_eq!(qd.collinear(&e0, &e4), Ok(false));
        assert_eq!(qd.collinear(&e0, &e0), Err(Error::SamePoint));
        assert_eq!(qd.collinear(&e0, &pt(&f, [1, 0, 1, 0, 0])), Err(Error::NotOnQuadric));
        for p in qd.enumerate_points().unwrap() {
            assert_eq!(qd.bilinear(&p, &p), Elem::ZERO);
        }
    }

    #[test]
    fn bilinear_of_ovoid_points_is_minus_pair_condition() {
        let f = gf(3, 1);
        let qd = Quadric::new(&f);
        let g = BivariatePoly::parse(&f, "x^2 + 2*x*y + y").unwrap();
        let c = OvoidCandidate::new(&g).unwrap();
        for x1 in f.elements() {
            for y1 in f.elements() {
                for x2 in f.elements() {
                    for y2 in f.elements() {
                        let dy = f.sub(y1, y2);
                        let df = f.sub(g.eval(x1, y1).unwrap(), g.eval(x2, y2).unwrap());
                        let cond = f.add(f.square(dy), f.mul(f.sub(x1, x2), df));
                        let b = qd.bilinear(&c.affine_point(x1, y1), &c.affine_point(x2, y2));
                        assert_eq!(b, f.neg(cond));
                    }
                }
                assert_eq!(qd.bilinear(&c.affine_point(x1, y1), &OvoidCandidate::infinity()), Elem::ONE);
            }
        }
    }

    #[test]
    fn point_counts_and_ranks() {
        for (p, h) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)] {
            let f = gf(p, h);
            let q = f.q() as u64;
            let qd = Quadric::new(&f);
            let pts = qd.enumerate_points().unwrap();
            assert_eq!(pts.len() as u64, (q + 1) * (q * q + 1));
            assert!(pts.windows(2).all(|w| w[0] < w[1]), "lexicographic order");
            for (r, p) in pts.iter().enumerate() {
                assert!(qd.on_quadric(p));
                assert_eq!(qd.rank(p).unwrap(), r as u32);
            }
            // brute force over all of PG(4,q)
            let mut brute = 0;
            for idx in 0..q.pow(5) {
                let mut c = [Elem::ZERO; 5];
                let mut r = idx;
                for slot in c.iter_mut().rev() {
                    *slot = Elem((r % q) as u32);
                    r /= q;
                }
                if let Some(lead) = c.iter().find(|e| !e.is_zero()) {
                    if *lead == Elem::ONE && quadratic_form(&f, &c).is_zero() {
                        brute += 1;
                    }
                }
            }
            assert_eq!(brute, pts.len() as u64);
        }
    }

    #[test]
    fn generator_counts_and_incidence() {
        for (p, h) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = gf(p, h);
            let q = f.q() as usize;
            let qd = Quadric::new(&f);
            let gens = qd.enumerate_generators().unwrap();
            assert_eq!(gens.len(), (q + 1) * (q * q + 1), "q = {q}");
            let distinct: HashSet<&[u32]> = gens.iter().collect();
            assert_eq!(distinct.len(), gens.len());
            let mut on_point: HashMap<u32, usize> = HashMap::new();
            for line in gens.iter() {
                assert_eq!(line.len(), q + 1);
                let pts: Vec<_> = line.iter().map(|&r| qd.point(r).unwrap()).collect();
                for a in &pts {
                    assert!(qd.on_quadric(a));
                    for b in &pts {
                        if a != b {
                            assert_eq!(qd.collinear(a, b), Ok(true));
                        }
                    }
                }
                for &r in line {
                    *on_point.entry(r).or_default() += 1;
                }
            }
            assert_eq!(on_point.len() as u64, qd.num_points());
            assert!(on_point.values().all(|&k| k == q + 1));
        }
    }

    #[test]
    fn generator_guard() {
        let f = gf(2, 5);
        let err = Quadric::new(&f).enumerate_generators().unwrap_err();
        assert!(matches!(err, Error::GuardExceeded { q: 32, .. }));
    }

    #[test]
    fn collinear_on_common_generator() {
        let f = gf(3, 1);
        let qd = Quadric::new(&f);
        let gens = qd.enumerate_generators().unwrap();
        let (a, b) = gens.line(17).spanning_pair(&qd);
        assert_eq!(qd.collinear(&a, &b), Ok(true));
    }

    #[test]
    fn candidate_basics() {
        let f = gf(3, 1);
        let c = OvoidCandidate::new(&BivariatePoly::parse(&f, "x").unwrap()).unwrap();
        assert_eq!(c.len(), 10);
        assert_eq!(c.points().count(), 10);
        assert!(c.points().any(|p| p == OvoidCandidate::infinity()));
        assert!(c.points().any(|p| p == pt(&f, [1, 0, 0, 0, 0])));
        let bad = BivariatePoly::parse(&f, "x + 1").unwrap();
        assert_eq!(OvoidCandidate::new(&bad).unwrap_err(), Error::NonzeroConstant);
    }

    #[test]
    fn pairwise_examples() {
        let f = gf(3, 1);
        let c = OvoidCandidate::new(&BivariatePoly::parse(&f, "x").unwrap()).unwrap();
        assert!(c.is_ovoid_pairwise().is_ovoid());

        let c = OvoidCandidate::new(&BivariatePoly::parse(&f, "x^2").unwrap()).unwrap();
        let w = c.is_ovoid_pairwise().witness().unwrap();
        // (0,0) and (2,1): 1 + (-2)(0 - 4) = 9 = 0.
        assert_eq!(w.first, (Elem(0), Elem(0)));
        assert_eq!(w.second, (Elem(2), Elem(1)));
        let qd = Quadric::new(&f);
        // (1,0) and (2,0) also violate: 0 + (1 - 2)(1 - 4) = 3 = 0.
        assert_eq!(qd.collinear(&c.affine_point(Elem(1), Elem(0)), &c.affine_point(Elem(2), Elem(0))), Ok(true));

        let f4 = gf(2, 2);
        let a = f4.trace_one_element().unwrap();
        let g = BivariatePoly::from_terms(&f4, &[(1, 0, a), (0, 1, Elem::ONE)]);
        assert!(OvoidCandidate::new(&g).unwrap().is_ovoid_pairwise().is_ovoid());
    }

    #[test]
    fn generator_oracle_examples() {
        let f = gf(3, 1);
        let c = OvoidCandidate::new(&BivariatePoly::parse(&f, "x").unwrap()).unwrap();
        assert_eq!(c.is_ovoid_by_generators().unwrap(), GeneratorVerdict::Ovoid);
        let c = OvoidCandidate::new(&BivariatePoly::parse(&f, "x^2").unwrap()).unwrap();
        assert!(!c.is_ovoid_by_generators().unwrap().is_ovoid());

        // Kantor, q = 9: -n x^3 with n the canonical non-square.
        let f9 = gf(3, 2);
        let n = f9.canonical_nonsquare().unwrap();
        let g = BivariatePoly::from_terms(&f9, &[(3, 0, f9.neg(n))]);
        let c = OvoidCandidate::new(&g).unwrap();
        assert!(c.is_ovoid_by_generators().unwrap().is_ovoid());
        assert!(c.is_ovoid_pairwise().is_ovoid());
    }

    #[test]
    fn dense_and_generic_pairwise_agree() {
        let f = gf(5, 1);
        let checker = PairwiseChecker::new(&f);
        let generic = PairwiseChecker {
            field: f.clone(),
            dense: None,
        };
        for s in ["x", "2*x", "x^2", "x^3 + y", "3*x + 4*x*y^2"] {
            let c = OvoidCandidate::new(&BivariatePoly::parse(&f, s).unwrap()).unwrap();
            assert_eq!(checker.check_table(c.values()), generic.check_table(c.values()), "{s}");
        }
    }
}
