//! Similarity dimension via the Moran equation, and the attractor /
//! main-tree dimension comparison.
//!
//! Contraction ratios enter as certified enclosures of |a| computed from the
//! exact |a|^2; the enclosure width is checked to be negligible against the
//! solver tolerance, after which the root of sum(r_i^d) = 1 is found by
//! bracketing bisection with a short Newton polish. The piece interiors of a
//! validated system are disjoint inside the base polygon, which is the open
//! set condition making this the Hausdorff dimension as well.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::system::PolygonalSystem;
use crate::zipper::{extract_arc_zipper, jordan_check, JordanOptions, JordanVerdict};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Certified enclosure of a contraction ratio in (0, 1).
#[derive(Clone, Copy, Debug)]
pub struct RatioEnclosure {
    pub lo: f64,
    pub hi: f64,
}

impl RatioEnclosure {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Enclosure of sqrt of an exact real field element in (0, 1].
pub fn ratio_enclosure(ratio_sq: &Scalar, tol: f64) -> Result<RatioEnclosure> {
    let (re, _) = ratio_sq.evaluate(128);
    let lo_sq = rational_to_f64_down(&re.lo).max(0.0);
    let hi_sq = rational_to_f64_up(&re.hi);
    if hi_sq <= 0.0 {
        return Err(Error::Internal("contraction ratio is not positive".into()));
    }
    let mut lo = lo_sq.sqrt();
    let mut hi = hi_sq.sqrt();
    for _ in 0..4 {
        lo = lo.next_down();
        hi = hi.next_up();
    }
    let lo = lo.max(0.0);
    let enclosure = RatioEnclosure { lo, hi };
    if enclosure.width() >= tol / 10.0 {
        return Err(Error::Internal(format!(
            "ratio enclosure width {} is not negligible against tolerance {tol}",
            enclosure.width()
        )));
    }
    Ok(enclosure)
}

fn rational_to_f64_down(r: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    let v = r.to_f64().unwrap_or(f64::NAN);
    v.next_down()
}

fn rational_to_f64_up(r: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    let v = r.to_f64().unwrap_or(f64::NAN);
    v.next_up()
}

/// The Moran data of a system: one ratio per map.
#[derive(Clone, Debug)]
pub struct MoranInstance {
    pub ratios: Vec<RatioEnclosure>,
    pub tol: f64,
}

impl MoranInstance {
    pub fn from_system(system: &PolygonalSystem, tol: f64) -> Result<Self> {
        let ratios = system
            .maps()
            .iter()
            .map(|m| ratio_enclosure(&m.ratio_sq(), tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(MoranInstance { ratios, tol })
    }

    pub fn from_ratios(ratios: &[f64], tol: f64) -> Self {
        MoranInstance {
            ratios: ratios.iter().map(|&r| RatioEnclosure { lo: r, hi: r }).collect(),
            tol,
        }
    }
}

/// sum(r_i^d) - 1 at the enclosure midpoints.
pub fn moran_residual(instance: &MoranInstance, d: f64) -> f64 {
    instance.ratios.iter().map(|r| r.mid().powf(d)).sum::<f64>() - 1.0
}

/// Unique root of the Moran equation; deterministic for fixed inputs.
pub fn similarity_dimension(instance: &MoranInstance) -> f64 {
    let tol = instance.tol;
    assert!(tol > 0.0, "tolerance must be positive");
    for r in &instance.ratios {
        assert!(r.mid() > 0.0 && r.hi < 1.0, "ratios must lie in (0, 1)");
    }
    let m = instance.ratios.len() as f64;
    if instance.ratios.len() == 1 {
        return 0.0;
    }
    let r_max = instance.ratios.iter().map(RatioEnclosure::mid).fold(0.0, f64::max);
    let mut lo = 0.0f64;
    let mut hi = m.ln() / (1.0 / r_max).ln() + 1.0;
    debug_assert!(moran_residual(instance, hi) < 0.0);
    for _ in 0..200 {
        if hi - lo < tol / 4.0 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if moran_residual(instance, mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut d = 0.5 * (lo + hi);
    for _ in 0..5 {
        let f = moran_residual(instance, d);
        let fp: f64 = instance
            .ratios
            .iter()
            .map(|r| {
                let rm = r.mid();
                rm.powf(d) * rm.ln()
            })
            .sum();
        if fp == 0.0 {
            break;
        }
        let next = d - f / fp;
        if next.is_finite() && next >= lo - tol && next <= hi + tol {
            d = next;
        }
    }
    debug_assert!(moran_residual(instance, d).abs() < tol);
    d
}

/// Dimension comparison between the attractor and its main tree.
#[derive(Clone, Debug)]
pub struct DimensionReport {
    pub dim_attractor: f64,
    pub dim_main_tree: f64,
    pub residual_attractor: f64,
    pub residual_main_tree: f64,
    pub tol: f64,
    /// dim of the main tree is strictly below the attractor dimension.
    pub strictly_smaller: bool,
    pub equal_within_tol: bool,
    /// Jordan verdict of the extracted arc zipper (dichotomy material: the
    /// dimensions coincide exactly when the attractor is a Jordan arc).
    pub arc_jordan: JordanVerdict,
}

pub fn dimension_report(system: &PolygonalSystem, tol: f64) -> Result<DimensionReport> {
    let attractor = MoranInstance::from_system(system, tol)?;
    let dim_attractor = similarity_dimension(&attractor);

    let arc = extract_arc_zipper(system, system.base().len() - 1)?;
    let tree_ratios = arc
        .zipper
        .maps
        .iter()
        .map(|m| ratio_enclosure(&m.ratio_sq(), tol))
        .collect::<Result<Vec<_>>>()?;
    let tree_instance = MoranInstance { ratios: tree_ratios, tol };
    let dim_main_tree = similarity_dimension(&tree_instance);

    if dim_main_tree > dim_attractor + tol {
        return Err(Error::Internal(format!(
            "main tree dimension {dim_main_tree} exceeds attractor dimension {dim_attractor}"
        )));
    }
    let arc_jordan = jordan_check(&arc.zipper, &JordanOptions::default());
    Ok(DimensionReport {
        dim_attractor,
        dim_main_tree,
        residual_attractor: moran_residual(&attractor, dim_attractor).abs(),
        residual_main_tree: moran_residual(&tree_instance, dim_main_tree).abs(),
        tol,
        strictly_smaller: dim_main_tree < dim_attractor - tol,
        equal_within_tol: (dim_attractor - dim_main_tree).abs() <= tol,
        arc_jordan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::symmetry::iterate;

    #[test]
    fn equal_ratio_closed_form() {
        // Five ratios 1/3: d = ln 5 / ln 3.
        let inst = MoranInstance::from_ratios(&[1.0 / 3.0; 5], 1e-12);
        let d = similarity_dimension(&inst);
        let expected = 5f64.ln() / 3f64.ln();
        assert!((d - expected).abs() < 1e-9, "{d} vs {expected}");
        assert!(moran_residual(&inst, d).abs() < 1e-12);
    }

    #[test]
    fn segment_and_point_cases() {
        let inst = MoranInstance::from_ratios(&[0.5, 0.5], 1e-12);
        assert!((similarity_dimension(&inst) - 1.0).abs() < 1e-12);
        let single = MoranInstance::from_ratios(&[0.7], 1e-12);
        assert_eq!(similarity_dimension(&single), 0.0);
    }

    #[test]
    fn adding_a_map_increases_dimension() {
        let base = MoranInstance::from_ratios(&[0.5, 0.4], 1e-12);
        let more = MoranInstance::from_ratios(&[0.5, 0.4, 0.3], 1e-12);
        assert!(similarity_dimension(&more) > similarity_dimension(&base) + 1e-6);
    }

    #[test]
    fn enclosures_from_exact_squares() {
        let system = fixtures::vicsek();
        let inst = MoranInstance::from_system(&system, 1e-12).unwrap();
        assert_eq!(inst.ratios.len(), 5);
        for r in &inst.ratios {
            assert!(r.width() < 1e-13);
            assert!((r.mid() - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn enclosure_of_irrational_ratio() {
        // |a|^2 = (2 + 2 cos 72) / 9, an irrational real element of the
        // order-5 field.
        let a = (&Scalar::one(5) + &Scalar::zeta_pow(5, 1)).div_int(3);
        let enclosure = ratio_enclosure(&a.abs_sq(), 1e-12).unwrap();
        let expected = ((2.0 + 2.0 * (2.0 * std::f64::consts::PI / 5.0).cos()) / 9.0).sqrt();
        assert!(enclosure.width() < 1e-13);
        assert!((enclosure.mid() - expected).abs() < 1e-12);
    }

    #[test]
    fn vicsek_dimension_report() {
        let system = fixtures::vicsek();
        let report = dimension_report(&system, 1e-12).unwrap();
        let expected = 5f64.ln() / 3f64.ln();
        assert!((report.dim_attractor - expected).abs() < 1e-9);
        assert!((report.dim_main_tree - 1.0).abs() < 1e-9);
        assert!(report.strictly_smaller);
        assert!(!report.equal_within_tol);
        assert!(matches!(report.arc_jordan, JordanVerdict::Jordan { .. }));
        assert!(report.residual_attractor < 1e-12);
    }

    #[test]
    fn iteration_preserves_dimension() {
        let system = fixtures::vicsek();
        let base = similarity_dimension(&MoranInstance::from_system(&system, 1e-12).unwrap());
        let it2 = iterate(&system, 2).unwrap();
        let iterated = similarity_dimension(&MoranInstance::from_system(&it2, 1e-12).unwrap());
        assert!((base - iterated).abs() < 2e-12);
    }
}
