//! Graded semigroups G ⊂ Z_{>0} × Z^n stored section by section.

mod diagnostics;
mod fit;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{lattice_basis, lattice_index, IntegerMatrix, Point};
use crate::laurent::{ExponentVector, FunctionSubspace};
use crate::polytope::Polytope;
use crate::valuation::TermOrder;

pub use diagnostics::{
    approximation_residual, regularization_constant, RegularizationReport, ResidualReport, SemigroupDiagnostics,
    TCoordinates,
};
pub use fit::{hilbert_fit, HilbertFit};

pub type Section = BTreeSet<ExponentVector>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    FromSubspace,
    FromGenerators,
    Sum,
}

/// Lattice T generated by m - d·a over the stored part of G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceLattice {
    pub rank: usize,
    /// Index of T in its saturation Z^n ∩ (T ⊗ Q).
    pub index: BigInt,
    /// Index of T in Z^n, when T has full rank.
    pub full_index: Option<BigInt>,
    pub basis: IntegerMatrix,
}

#[derive(Clone, Debug)]
pub struct GradedSemigroup {
    arity: usize,
    sections: Vec<Section>,
    provenance: Provenance,
    anchor: ExponentVector,
}

/// k-fold sumsets A, A+A, ..., up to d_max.
pub(crate) fn sumsets(a: &Section, d_max: usize, cap: usize) -> Result<Vec<Section>> {
    let mut out: Vec<Section> = Vec::with_capacity(d_max);
    if d_max == 0 {
        return Ok(out);
    }
    out.push(a.clone());
    for _ in 1..d_max {
        let prev = out.last().unwrap();
        let next: Section = prev.iter().flat_map(|x| a.iter().map(move |y| x + y)).collect();
        if next.len() > cap {
            return Err(Error::DimensionCap { dim: next.len(), cap });
        }
        out.push(next);
    }
    Ok(out)
}

pub(crate) fn to_point(e: &ExponentVector) -> Point {
    e.to_rational()
}

pub(crate) fn section_hull(s: &Section) -> Result<Polytope> {
    Polytope::hull(&s.iter().map(to_point).collect::<Vec<_>>())
}

impl GradedSemigroup {
    /// G(L): sections v(L^d \ {0}) for d = 1..=d_max.
    pub fn from_subspace(l: &FunctionSubspace, order: &TermOrder, d_max: usize) -> Result<Self> {
        Self::from_subspace_capped(l, order, d_max, crate::laurent::DEFAULT_DIMENSION_CAP)
    }

    pub fn from_subspace_capped(l: &FunctionSubspace, order: &TermOrder, d_max: usize, cap: usize) -> Result<Self> {
        if d_max == 0 {
            return Err(Error::invalid("d_max must be at least 1"));
        }
        if order.arity() != l.arity() {
            return Err(Error::ArityMismatch { expected: l.arity(), found: order.arity() });
        }
        let sections: Vec<Section> = if l.is_monomial() {
            // values of monomials are their exponents, so sections are sumsets
            let first: Section = order.subspace_values(l)?.into_iter().collect();
            sumsets(&first, d_max, cap)?
        } else {
            let powers = l.powers_capped(d_max, cap)?;
            powers
                .iter()
                .map(|p| Ok(order.subspace_values(p)?.into_iter().collect()))
                .collect::<Result<Vec<_>>>()?
        };
        let anchor = order.min(sections[0].iter()).expect("nonempty").clone();
        Ok(GradedSemigroup { arity: l.arity(), sections, provenance: Provenance::FromSubspace, anchor })
    }

    /// Semigroup generated by {1} × A.
    pub fn from_generators(a: &[ExponentVector], d_max: usize) -> Result<Self> {
        Self::from_generators_capped(a, d_max, usize::MAX)
    }

    pub fn from_generators_capped(a: &[ExponentVector], d_max: usize, cap: usize) -> Result<Self> {
        let first: Section = a.iter().cloned().collect();
        let arity = first.iter().next().ok_or_else(|| Error::invalid("empty generator set"))?.arity();
        if let Some(e) = first.iter().find(|e| e.arity() != arity) {
            return Err(Error::ArityMismatch { expected: arity, found: e.arity() });
        }
        if d_max == 0 {
            return Err(Error::invalid("d_max must be at least 1"));
        }
        let sections = sumsets(&first, d_max, cap)?;
        let anchor = first.iter().next().unwrap().clone();
        Ok(GradedSemigroup { arity, sections, provenance: Provenance::FromGenerators, anchor })
    }

    /// Wraps explicit sections G(1..=d_max); every section must be nonempty.
    pub fn from_sections(arity: usize, sections: Vec<Section>, provenance: Provenance) -> Result<Self> {
        if sections.is_empty() || sections.iter().any(|s| s.is_empty()) {
            return Err(Error::invalid("graded semigroup sections must be nonempty"));
        }
        if let Some(e) = sections.iter().flatten().find(|e| e.arity() != arity) {
            return Err(Error::ArityMismatch { expected: arity, found: e.arity() });
        }
        let anchor = sections[0].iter().next().unwrap().clone();
        Ok(GradedSemigroup { arity, sections, provenance, anchor })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn d_max(&self) -> usize {
        self.sections.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Degree-one element used to translate sections into T.
    pub fn anchor(&self) -> &ExponentVector {
        &self.anchor
    }

    pub fn section(&self, d: usize) -> Result<&Section> {
        if d == 0 || d > self.d_max() {
            return Err(Error::DegreeOutOfRange { degree: d, max: self.d_max() });
        }
        Ok(&self.sections[d - 1])
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn hilbert_function(&self, d: usize) -> Result<usize> {
        Ok(self.section(d)?.len())
    }

    /// H(1), ..., H(d_max).
    pub fn hilbert_values(&self) -> Vec<usize> {
        self.sections.iter().map(BTreeSet::len).collect()
    }

    /// First (d1, d2, point) with a point of G(d1) + G(d2) missing from G(d1 + d2).
    pub fn additivity_violation(&self) -> Option<(usize, usize, ExponentVector)> {
        let dm = self.d_max();
        for d1 in 1..=dm {
            for d2 in d1..=dm - d1 {
                let target = &self.sections[d1 + d2 - 1];
                for x in &self.sections[d1 - 1] {
                    for y in &self.sections[d2 - 1] {
                        let s = x + y;
                        if !target.contains(&s) {
                            return Some((d1, d2, s));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn difference_lattice(&self) -> DifferenceLattice {
        let n = self.arity;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (i, s) in self.sections.iter().enumerate() {
            let shift = self.anchor.scale((i + 1) as i64);
            for m in s {
                let diff = m - &shift;
                if !diff.is_zero() {
                    rows.push(diff.entries().iter().map(|&x| BigInt::from(x)).collect());
                }
            }
        }
        let gens = IntegerMatrix::from_rows(rows, n).expect("rows have the ambient width");
        let basis = lattice_basis(&gens);
        let li = lattice_index(&basis, n).expect("matching width");
        DifferenceLattice { rank: li.rank, index: li.saturation_index, full_index: li.index, basis }
    }

    /// Hull of G(d)/d over d <= upto.
    pub fn newton_body_upto(&self, upto: usize) -> Result<Polytope> {
        if upto == 0 || upto > self.d_max() {
            return Err(Error::DegreeOutOfRange { degree: upto, max: self.d_max() });
        }
        let mut pts: Vec<Point> = Vec::new();
        for (i, s) in self.sections[..upto].iter().enumerate() {
            let d = BigRational::from_integer(BigInt::from(i + 1));
            for v in section_hull(s)?.vertices() {
                pts.push(v.iter().map(|x| x / &d).collect());
            }
        }
        Polytope::hull(&pts)
    }

    /// Δ(G) approximated from all stored sections.
    pub fn newton_body(&self) -> Result<Polytope> {
        self.newton_body_upto(self.d_max())
    }

    /// How far Δ at d_max sticks out of Δ at ⌊d_max/2⌋ (max facet or equation
    /// violation over vertices, Euclidean units); 0 when they agree.
    pub fn convergence_gap(&self) -> Result<f64> {
        let full = self.newton_body()?;
        let half = self.newton_body_upto((self.d_max() / 2).max(1))?;
        Ok(body_excess(&full, &half))
    }

    /// Pointwise sumsets G1(d) + G2(d) over the common degree range.
    pub fn oplus_t(&self, other: &GradedSemigroup) -> Result<GradedSemigroup> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        let d = self.d_max().min(other.d_max());
        let sections = (0..d)
            .map(|i| self.sections[i].iter().flat_map(|x| other.sections[i].iter().map(move |y| x + y)).collect())
            .collect();
        Ok(GradedSemigroup { arity: self.arity, sections, provenance: Provenance::Sum, anchor: &self.anchor + &other.anchor })
    }
}

/// Largest Euclidean violation of `inner`'s constraints by vertices of `outer`.
pub(crate) fn body_excess(outer: &Polytope, inner: &Polytope) -> f64 {
    use crate::exact::to_f64;
    let norm = |a: &[BigInt]| a.iter().map(|x| to_f64(&BigRational::from_integer(x.clone())).powi(2)).sum::<f64>().sqrt();
    let mut worst = 0.0f64;
    for v in outer.vertices() {
        for f in inner.facets() {
            let excess = f.value(v) - &f.offset;
            if excess > BigRational::zero() {
                worst = worst.max(to_f64(&excess) / norm(&f.normal));
            }
        }
        for e in inner.equations() {
            let excess = num_traits::Signed::abs(&(e.value(v) - &e.offset));
            worst = worst.max(to_f64(&excess) / norm(&e.normal));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPolynomial;

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector::from(v)
    }

    fn set1(v: &[i64]) -> Section {
        v.iter().map(|&x| ev(&[x])).collect()
    }

    fn cusp() -> GradedSemigroup {
        let l = FunctionSubspace::from_monomials(1, &[ev(&[0]), ev(&[2]), ev(&[3])]).unwrap();
        GradedSemigroup::from_subspace(&l, &TermOrder::lex(1), 10).unwrap()
    }

    fn square_support(d: usize) -> GradedSemigroup {
        let m = [ev(&[0, 0]), ev(&[1, 0]), ev(&[0, 1]), ev(&[1, 1])];
        GradedSemigroup::from_subspace(&FunctionSubspace::from_monomials(2, &m).unwrap(), &TermOrder::grlex(2), d).unwrap()
    }

    #[test]
    fn line_sections() {
        let l = FunctionSubspace::from_monomials(1, &[ev(&[0]), ev(&[1])]).unwrap();
        let g = GradedSemigroup::from_subspace(&l, &TermOrder::lex(1), 3).unwrap();
        assert_eq!(g.sections(), &[set1(&[0, 1]), set1(&[0, 1, 2]), set1(&[0, 1, 2, 3])]);
    }

    #[test]
    fn cusp_sections() {
        let g = cusp();
        assert_eq!(g.section(1).unwrap(), &set1(&[0, 2, 3]));
        assert_eq!(g.section(2).unwrap(), &set1(&[0, 2, 3, 4, 5, 6]));
        let mut third = set1(&[0]);
        third.extend((2..=9).map(|k| ev(&[k])));
        assert_eq!(g.section(3).unwrap(), &third);
        assert_eq!(g.hilbert_function(4).unwrap(), 12);
        assert!(g.hilbert_function(11).is_err());
    }

    #[test]
    fn generic_path_matches_monomial_path() {
        // span{1 + t, t^2, t^3 - t^2}: same span as monomials {1+t, t^2, t^3}, values {0, 2, 3}
        let polys = vec![
            LaurentPolynomial::from_i64(1, &[(1, &[0]), (1, &[1])]).unwrap(),
            LaurentPolynomial::from_i64(1, &[(1, &[2])]).unwrap(),
            LaurentPolynomial::from_i64(1, &[(1, &[3]), (-1, &[2])]).unwrap(),
        ];
        let l = FunctionSubspace::from_polynomials(1, polys).unwrap();
        let g = GradedSemigroup::from_subspace(&l, &TermOrder::lex(1), 6).unwrap();
        for d in 1..=6 {
            assert_eq!(g.hilbert_function(d).unwrap(), l.power(d).unwrap().dim());
        }
        assert_eq!(g.section(1).unwrap(), &set1(&[0, 2, 3]));
        assert!(g.additivity_violation().is_none());
    }

    #[test]
    fn square_section_two() {
        let g = square_support(2);
        let expected: Section = (0..=2).flat_map(|x| (0..=2).map(move |y| ev(&[x, y]))).collect();
        assert_eq!(g.section(2).unwrap(), &expected);
        for k in 1..=2 {
            assert_eq!(g.hilbert_function(k).unwrap(), (k + 1) * (k + 1));
        }
    }

    #[test]
    fn simplex_hilbert_values() {
        let g = GradedSemigroup::from_generators(&[ev(&[0, 0]), ev(&[1, 0]), ev(&[0, 1])], 8).unwrap();
        for k in 1..=8 {
            assert_eq!(g.hilbert_function(k).unwrap(), (k + 1) * (k + 2) / 2);
        }
    }

    #[test]
    fn difference_lattices() {
        let c = cusp().difference_lattice();
        assert_eq!((c.rank, c.index.clone()), (1, BigInt::from(1)));
        let even = GradedSemigroup::from_generators(&[ev(&[0]), ev(&[2])], 5).unwrap().difference_lattice();
        assert_eq!((even.rank, even.index.clone(), even.full_index.clone()), (1, BigInt::from(2), Some(BigInt::from(2))));
        let sq = square_support(3).difference_lattice();
        assert_eq!((sq.rank, sq.index), (2, BigInt::from(1)));
        let line = GradedSemigroup::from_generators(&[ev(&[0, 0]), ev(&[2, 2])], 3).unwrap().difference_lattice();
        assert_eq!((line.rank, line.index, line.full_index), (1, BigInt::from(2), None));
    }

    #[test]
    fn newton_bodies() {
        let l = FunctionSubspace::from_monomials(1, &[ev(&[0]), ev(&[1])]).unwrap();
        let g = GradedSemigroup::from_subspace(&l, &TermOrder::lex(1), 4).unwrap();
        assert_eq!(g.newton_body().unwrap(), Polytope::from_i64(&[&[0], &[1]]).unwrap());
        assert_eq!(cusp().newton_body().unwrap(), Polytope::from_i64(&[&[0], &[3]]).unwrap());
        let m = [ev(&[0, 0]), ev(&[3, 1]), ev(&[1, 2]), ev(&[1, 1])];
        let lm = FunctionSubspace::from_monomials(2, &m).unwrap();
        for d in 1..=4 {
            let g = GradedSemigroup::from_subspace(&lm, &TermOrder::lex(2), d).unwrap();
            assert_eq!(g.newton_body().unwrap(), Polytope::from_i64(&[&[0, 0], &[3, 1], &[1, 2]]).unwrap());
            assert_eq!(g.convergence_gap().unwrap(), 0.0);
        }
    }

    #[test]
    fn oplus_sections() {
        let l = FunctionSubspace::from_monomials(1, &[ev(&[0]), ev(&[1])]).unwrap();
        let g = GradedSemigroup::from_subspace(&l, &TermOrder::lex(1), 4).unwrap();
        let s = g.oplus_t(&g).unwrap();
        for d in 1..=4 {
            let expected: Section = (0..=2 * d as i64).map(|k| ev(&[k])).collect();
            assert_eq!(s.section(d).unwrap(), &expected);
        }
    }

    #[test]
    fn degree_range_checked() {
        assert_eq!(cusp().section(0).unwrap_err(), Error::DegreeOutOfRange { degree: 0, max: 10 });
    }
}
