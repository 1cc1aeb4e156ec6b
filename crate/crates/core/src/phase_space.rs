//! The d×d grid over GF(2^n): points, lines, striations and rays.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::field::{CoordinateMap, Field, FieldElement, FieldSpec};
use crate::tuple::NTuple;

/// One of the `d + 1` families of parallel lines.
///
/// Vertical lines are `q = c`, horizontal lines `p = c` and oblique lines of
/// slope `k` are `ω^k q + p = c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Striation {
    Vertical,
    Horizontal,
    Oblique(u32),
}

impl Striation {
    /// Position in the canonical order V, H, oblique k ascending.
    pub fn index(self) -> usize {
        match self {
            Striation::Vertical => 0,
            Striation::Horizontal => 1,
            Striation::Oblique(k) => 2 + k as usize,
        }
    }

    pub fn from_index(idx: usize) -> Striation {
        match idx {
            0 => Striation::Vertical,
            1 => Striation::Horizontal,
            i => Striation::Oblique((i - 2) as u32),
        }
    }
}

impl fmt::Display for Striation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Striation::Vertical => write!(f, "V"),
            Striation::Horizontal => write!(f, "H"),
            Striation::Oblique(k) => write!(f, "k{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: FieldElement,
    pub p: FieldElement,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { q: FieldElement::ZERO, p: FieldElement::ZERO };

    pub fn new(q: FieldElement, p: FieldElement) -> PhasePoint {
        PhasePoint { q, p }
    }

    pub fn is_origin(self) -> bool {
        self.q.is_zero() && self.p.is_zero()
    }

}

impl std::ops::Add for PhasePoint {
    type Output = PhasePoint;

    fn add(self, other: PhasePoint) -> PhasePoint {
        PhasePoint { q: FieldElement(self.q.0 ^ other.q.0), p: FieldElement(self.p.0 ^ other.p.0) }
    }
}

/// A line in canonical `(striation, intercept)` form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Line {
    pub striation: Striation,
    pub intercept: FieldElement,
}

impl Line {
    pub fn is_ray(&self) -> bool {
        self.intercept.is_zero()
    }

    pub fn ray(striation: Striation) -> Line {
        Line { striation, intercept: FieldElement::ZERO }
    }
}

/// Phase space for a fixed field and tuple assignment. Immutable once built.
#[derive(Debug)]
pub struct PhaseSpace {
    field: Field,
    cmap: CoordinateMap,
    /// For a ray parameter `t`, the coefficients `c` with `t = Σ_j c_j ω^j`
    /// (`j = 1..n`, bit `j - 1`).
    ray_coeffs: Vec<u32>,
}

impl PhaseSpace {
    pub fn new(field: Field, cmap: CoordinateMap) -> Result<PhaseSpace> {
        if cmap.n() != field.n() {
            return Err(invalid("coordinate map and field disagree on n"));
        }
        let n = field.n();
        let d = field.d();
        let mut ray_coeffs = vec![0u32; d];
        for c in 0..d as u32 {
            let t = (0..n)
                .filter(|j| c >> j & 1 == 1)
                .fold(0u32, |acc, j| acc ^ field.omega_pow(j as i64 + 1).0);
            ray_coeffs[t as usize] = c;
        }
        Ok(PhaseSpace { field, cmap, ray_coeffs })
    }

    /// Phase space with the default polynomial and `q0 = p0 = (1,0,…,0)`.
    pub fn standard(n: u32) -> Result<Arc<PhaseSpace>> {
        let field = Field::new(FieldSpec::default_for(n)?);
        let cmap = CoordinateMap::standard(&field);
        Ok(Arc::new(PhaseSpace::new(field, cmap)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn cmap(&self) -> &CoordinateMap {
        &self.cmap
    }

    pub fn n(&self) -> u32 {
        self.field.n()
    }

    pub fn d(&self) -> usize {
        self.field.d()
    }

    pub fn striations(&self) -> impl Iterator<Item = Striation> {
        (0..self.d() + 1).map(Striation::from_index)
    }

    pub fn lines(&self) -> impl Iterator<Item = Line> + '_ {
        self.striations().flat_map(move |s| {
            self.field.elements().map(move |c| Line { striation: s, intercept: c })
        })
    }

    /// All points, lexicographic by (q, p) power index.
    pub fn points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        let d = self.d();
        (0..d * d).map(move |i| self.point_at(i / d, i % d))
    }

    pub fn point_at(&self, q_index: usize, p_index: usize) -> PhasePoint {
        PhasePoint::new(self.field.element_at(q_index), self.field.element_at(p_index))
    }

    pub fn indices_of(&self, a: PhasePoint) -> (usize, usize) {
        (self.field.index_of(a.q), self.field.index_of(a.p))
    }

    pub fn tuples_of(&self, a: PhasePoint) -> (NTuple, NTuple) {
        (self.cmap.q_tuple(a.q), self.cmap.p_tuple(a.p))
    }

    pub fn point_from_tuples(&self, q: NTuple, p: NTuple) -> PhasePoint {
        PhasePoint::new(self.cmap.q_element(q), self.cmap.p_element(p))
    }

    pub fn contains(&self, l: &Line, a: PhasePoint) -> bool {
        self.intercept_through(l.striation, a) == l.intercept
    }

    fn intercept_through(&self, s: Striation, a: PhasePoint) -> FieldElement {
        match s {
            Striation::Vertical => a.q,
            Striation::Horizontal => a.p,
            Striation::Oblique(k) => {
                let wk = self.field.omega_pow(k as i64);
                FieldElement(self.field.mul(wk, a.q).0 ^ a.p.0)
            }
        }
    }

    /// Point of the ray of `s` at parameter `t`: `(0,t)`, `(t,0)` or `(t, ω^k t)`.
    pub fn ray_point(&self, s: Striation, t: FieldElement) -> PhasePoint {
        match s {
            Striation::Vertical => PhasePoint::new(FieldElement::ZERO, t),
            Striation::Horizontal => PhasePoint::new(t, FieldElement::ZERO),
            Striation::Oblique(k) => {
                PhasePoint::new(t, self.field.mul(self.field.omega_pow(k as i64), t))
            }
        }
    }

    /// Ray parameter of a point lying on the ray of `s`.
    pub fn ray_parameter(&self, s: Striation, a: PhasePoint) -> FieldElement {
        match s {
            Striation::Vertical => a.p,
            _ => a.q,
        }
    }

    /// The `n` designated generator points of a ray, at parameters `ω^j`,
    /// `j = 1..n`.
    pub fn ray_generators(&self, s: Striation) -> Vec<PhasePoint> {
        (1..=self.n() as i64)
            .map(|j| self.ray_point(s, self.field.omega_pow(j)))
            .collect()
    }

    /// Generator coefficient mask (bit `j - 1` for generator `j`) of the ray
    /// parameter `t`.
    pub fn ray_coefficients(&self, t: FieldElement) -> u32 {
        self.ray_coeffs[t.0 as usize]
    }

    /// The striation whose ray passes through `a`; `None` for the origin.
    pub fn striation_of_ray_through(&self, a: PhasePoint) -> Option<Striation> {
        if a.is_origin() {
            None
        } else if a.q.is_zero() {
            Some(Striation::Vertical)
        } else if a.p.is_zero() {
            Some(Striation::Horizontal)
        } else {
            let lq = self.field.log(a.q).unwrap() as i64;
            let lp = self.field.log(a.p).unwrap() as i64;
            let order = self.d() as i64 - 1;
            Some(Striation::Oblique((lp - lq).rem_euclid(order) as u32))
        }
    }

    /// The `d` points of a line, ordered by power index of q (then p).
    pub fn points_of_line(&self, l: &Line) -> Vec<PhasePoint> {
        let f = &self.field;
        match l.striation {
            Striation::Vertical => f.elements().map(|t| PhasePoint::new(l.intercept, t)).collect(),
            Striation::Horizontal => f.elements().map(|t| PhasePoint::new(t, l.intercept)).collect(),
            Striation::Oblique(_) => f
                .elements()
                .map(|t| self.ray_point(l.striation, t) + PhasePoint::new(FieldElement::ZERO, l.intercept))
                .collect(),
        }
    }

    pub fn line_in_striation_through(&self, s: Striation, a: PhasePoint) -> Line {
        Line { striation: s, intercept: self.intercept_through(s, a) }
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, a: PhasePoint, b: PhasePoint) -> Result<Line> {
        let s = self
            .striation_of_ray_through(a + b)
            .ok_or_else(|| invalid("line_through requires two distinct points"))?;
        Ok(self.line_in_striation_through(s, a))
    }

    pub fn translate_line(&self, l: &Line, offset: PhasePoint) -> Line {
        let shift = self.intercept_through(l.striation, offset);
        Line { striation: l.striation, intercept: FieldElement(l.intercept.0 ^ shift.0) }
    }

    /// Lexicographically smallest point (by power index) of a line.
    pub fn anchor_point(&self, l: &Line) -> PhasePoint {
        self.points_of_line(l)
            .into_iter()
            .min_by_key(|&a| self.indices_of(a))
            .expect("lines are nonempty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: u32) -> Arc<PhaseSpace> {
        PhaseSpace::standard(n).unwrap()
    }

    #[test]
    fn vertical_ray_points() {
        let ps = space(2);
        let pts = ps.points_of_line(&Line::ray(Striation::Vertical));
        let f = ps.field();
        let expect: Vec<_> = (0..4).map(|i| PhasePoint::new(FieldElement::ZERO, f.element_at(i))).collect();
        assert_eq!(pts, expect);
    }

    #[test]
    fn oblique_zero_ray_is_diagonal() {
        let ps = space(2);
        for a in ps.points_of_line(&Line::ray(Striation::Oblique(0))) {
            assert_eq!(a.q, a.p);
        }
    }

    #[test]
    fn oblique_line_points_satisfy_equation() {
        let ps = space(3);
        let f = ps.field();
        let w = f.omega_pow(1);
        let l = Line { striation: Striation::Oblique(2), intercept: w };
        let pts = ps.points_of_line(&l);
        assert_eq!(pts.len(), 8);
        let w2 = f.omega_pow(2);
        for a in &pts {
            // substitute and check: ω² q + p = ω
            assert_eq!(FieldElement(f.mul(w2, a.q).0 ^ a.p.0), w);
        }
        let distinct: std::collections::HashSet<_> = pts.iter().collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn line_through_examples() {
        let ps = space(2);
        let f = ps.field();
        let o = PhasePoint::ORIGIN;
        let one = FieldElement::ONE;
        assert_eq!(
            ps.line_through(o, PhasePoint::new(FieldElement::ZERO, one)).unwrap(),
            Line::ray(Striation::Vertical)
        );
        assert_eq!(
            ps.line_through(o, PhasePoint::new(one, one)).unwrap(),
            Line::ray(Striation::Oblique(0))
        );
        let a = PhasePoint::new(one, FieldElement::ZERO);
        let b = PhasePoint::new(f.omega_pow(1), one);
        let l = ps.line_through(a, b).unwrap();
        // exhaustive oracle over all d(d+1) lines
        let hits: Vec<Line> = ps
            .lines()
            .filter(|l| {
                let pts = ps.points_of_line(l);
                pts.contains(&a) && pts.contains(&b)
            })
            .collect();
        assert_eq!(hits, vec![l]);
        assert!(ps.line_through(a, a).is_err());
    }

    #[test]
    fn line_in_striation_examples() {
        let ps = space(3);
        let f = ps.field();
        let a = PhasePoint::new(f.omega_pow(3), FieldElement::ZERO);
        assert_eq!(ps.line_in_striation_through(Striation::Horizontal, a), Line::ray(Striation::Horizontal));
        let w = f.omega_pow(1);
        let b = PhasePoint::new(w, f.omega_pow(5));
        assert_eq!(
            ps.line_in_striation_through(Striation::Vertical, b),
            Line { striation: Striation::Vertical, intercept: w }
        );
        for k in 0..7 {
            let l = ps.line_in_striation_through(Striation::Oblique(k), b);
            assert!(ps.points_of_line(&l).contains(&b));
        }
    }

    #[test]
    fn translate_line_examples() {
        let ps = space(2);
        let f = ps.field();
        let l = Line { striation: Striation::Oblique(1), intercept: FieldElement::ONE };
        assert_eq!(ps.translate_line(&l, PhasePoint::ORIGIN), l);
        let v = Line { striation: Striation::Vertical, intercept: f.omega_pow(1) };
        assert_eq!(ps.translate_line(&v, PhasePoint::new(FieldElement::ZERO, f.omega_pow(2))), v);
        // recompute translated point set and re-canonicalize
        let off = PhasePoint::new(FieldElement::ONE, FieldElement::ZERO);
        let moved = ps.translate_line(&l, off);
        let expected_pts: Vec<_> = ps.points_of_line(&l).into_iter().map(|a| a + off).collect();
        for a in &expected_pts {
            assert!(ps.contains(&moved, *a));
        }
        assert_eq!(moved.intercept.0, l.intercept.0 ^ f.omega_pow(1).0);
    }

    #[test]
    fn translation_fixes_line_iff_offset_on_ray() {
        let ps = space(3);
        for l in ps.lines() {
            let ray: Vec<_> = ps.points_of_line(&Line::ray(l.striation));
            for off in ps.points() {
                let same = ps.translate_line(&l, off) == l;
                assert_eq!(same, ray.contains(&off));
            }
        }
    }

    #[test]
    fn incidence_exhaustive_small() {
        for n in 1..=3 {
            let ps = space(n);
            let d = ps.d();
            let lines: Vec<Line> = ps.lines().collect();
            assert_eq!(lines.len(), d * (d + 1));
            let sets: Vec<Vec<PhasePoint>> = lines.iter().map(|l| ps.points_of_line(l)).collect();
            for (i, a) in lines.iter().enumerate() {
                assert_eq!(sets[i].len(), d);
                for (j, b) in lines.iter().enumerate().skip(i + 1) {
                    let common = sets[i].iter().filter(|x| sets[j].contains(x)).count();
                    if a.striation == b.striation {
                        assert_eq!(common, 0);
                    } else {
                        assert_eq!(common, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn rays_generators_span() {
        for n in 1..=6 {
            let ps = space(n);
            for s in ps.striations() {
                let gens = ps.ray_generators(s);
                for g in &gens {
                    assert!(ps.contains(&Line::ray(s), *g));
                }
                for t in ps.field().elements() {
                    let c = ps.ray_coefficients(t);
                    let sum = (0..n).filter(|j| c >> j & 1 == 1).fold(0, |acc, j| {
                        acc ^ ps.ray_parameter(s, gens[j as usize]).0
                    });
                    assert_eq!(sum, t.0);
                }
            }
        }
    }

    #[test]
    fn striation_of_ray_through_consistent() {
        let ps = space(4);
        for a in ps.points().skip(1) {
            let s = ps.striation_of_ray_through(a).unwrap();
            assert!(ps.contains(&Line::ray(s), a));
        }
        assert_eq!(ps.striation_of_ray_through(PhasePoint::ORIGIN), None);
    }
}
