//! The versioned test-function battery.
//!
//! Pairing claims quantify over all test functions; a fixed, versioned
//! battery makes the finite check reproducible and its incompleteness
//! explicit. Composition (per dimension): eight smooth compactly supported
//! members, four C1 members, three S-continuous kink members.

use std::sync::Arc;

use serde::Serialize;

use crate::calculus::MultiIndex;
use crate::error::{Error, Result};
use crate::scalefield::profile::{
    BumpProfile, CosineProfile, PiecewiseLinearProfile, PolyBumpProfile, PolyProfile, ProfileNd,
    ProfileRef,
};
use crate::scalefield::{ScaleLadder, SmoothFamily};

/// Regularity class of a battery or member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum BatteryClass {
    /// S-continuous compactly supported; includes non-differentiable members.
    C0SContinuous,
    /// Continuously differentiable with compact support.
    C1c,
    /// Smooth with compact support.
    CInfc,
}

impl BatteryClass {
    pub fn name(&self) -> &'static str {
        match self {
            BatteryClass::C0SContinuous => "c0-s-continuous",
            BatteryClass::C1c => "c1_c",
            BatteryClass::CInfc => "cinf_c",
        }
    }
}

impl std::str::FromStr for BatteryClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c0" | "c0-s-continuous" => Ok(BatteryClass::C0SContinuous),
            "c1" | "c1_c" => Ok(BatteryClass::C1c),
            "cinf" | "cinf_c" | "smooth" => Ok(BatteryClass::CInfc),
            other => Err(Error::UnknownName(format!("battery class '{other}'"))),
        }
    }
}

/// One test function with verified metadata.
#[derive(Debug, Clone)]
pub struct TestMember {
    pub label: String,
    pub class: BatteryClass,
    pub family: SmoothFamily,
    pub support_radius: f64,
    /// Highest derivative order with a certified sup-norm.
    pub cert_order: u32,
    /// `sup_norms[m]` bounds `|d^alpha phi|` over all `|alpha| = m <= cert`.
    pub sup_norms: Vec<f64>,
}

impl TestMember {
    /// Value at the origin (the delta-pairing target).
    pub fn value_at_origin(&self) -> f64 {
        self.family.eval(0, &vec![0.0; self.family.dim()])
    }
}

/// Machine-readable battery description for listings.
#[derive(Debug, Clone, Serialize)]
pub struct BatteryDescription {
    pub version: String,
    pub dimension: usize,
    pub class: String,
    pub members: Vec<MemberDescription>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberDescription {
    pub label: String,
    pub class: String,
    pub support_radius: f64,
    pub cert_order: u32,
    pub sup_norms: Vec<f64>,
}

/// A fixed battery of test functions over one ladder.
#[derive(Debug, Clone)]
pub struct TestBattery {
    dimension: usize,
    class: BatteryClass,
    members: Vec<TestMember>,
    version: String,
}

/// Version identifier of the shipped battery composition.
pub const BATTERY_VERSION: &str = "v1";

impl TestBattery {
    /// The full 15-member pool, usable for order-0 (S-continuous) claims.
    pub fn standard(dimension: usize, ladder: &ScaleLadder) -> Result<Self> {
        TestBattery::new(dimension, BatteryClass::C0SContinuous, ladder)
    }

    /// Pool restricted to members of at least the given regularity.
    pub fn new(dimension: usize, class: BatteryClass, ladder: &ScaleLadder) -> Result<Self> {
        let pool = member_pool(dimension, ladder)?;
        let members: Vec<TestMember> =
            pool.into_iter().filter(|m| m.class >= class).collect();
        Ok(TestBattery {
            dimension,
            class,
            members,
            version: format!("d{dimension}-{BATTERY_VERSION}"),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn class(&self) -> BatteryClass {
        self.class
    }

    pub fn members(&self) -> &[TestMember] {
        &self.members
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn describe(&self) -> BatteryDescription {
        BatteryDescription {
            version: self.version.clone(),
            dimension: self.dimension,
            class: self.class.name().to_string(),
            members: self
                .members
                .iter()
                .map(|m| MemberDescription {
                    label: m.label.clone(),
                    class: m.class.name().to_string(),
                    support_radius: m.support_radius,
                    cert_order: m.cert_order,
                    sup_norms: m.sup_norms.clone(),
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Member pools
// ---------------------------------------------------------------------------

struct MemberSpec {
    label: &'static str,
    class: BatteryClass,
    profile: ProfileNd,
    width: f64,
    center: Vec<f64>,
    cert_order: u32,
}

fn member_pool(dimension: usize, ladder: &ScaleLadder) -> Result<Vec<TestMember>> {
    let specs = match dimension {
        1 => pool_1d(),
        2 => pool_2d(),
        3 => pool_3d(),
        other => {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: other,
            })
        }
    };
    Ok(specs
        .into_iter()
        .map(|spec| build_member(spec, ladder))
        .collect())
}

fn build_member(spec: MemberSpec, ladder: &ScaleLadder) -> TestMember {
    let family = SmoothFamily::standard(
        ladder,
        spec.profile,
        1.0,
        spec.width,
        spec.center.clone(),
        spec.label,
    );
    let support_radius = family.support_radius(0);
    let sup_norms = certify_sup_norms(&family, spec.cert_order, support_radius);
    TestMember {
        label: spec.label.to_string(),
        class: spec.class,
        family,
        support_radius,
        cert_order: spec.cert_order,
        sup_norms,
    }
}

/// Sampled sup-norms per total derivative order, with a 2% safety margin.
fn certify_sup_norms(family: &SmoothFamily, cert_order: u32, radius: f64) -> Vec<f64> {
    let dim = family.dim();
    let samples_per_axis: usize = match dim {
        1 => 201,
        2 => 41,
        _ => 17,
    };
    let mut norms = Vec::with_capacity(cert_order as usize + 1);
    for m in 0..=cert_order {
        let mut worst = 0.0f64;
        for alpha in MultiIndex::all_up_to(dim, m) {
            if alpha.order() != m {
                continue;
            }
            let mut idx = vec![0usize; dim];
            let mut point = vec![0.0f64; dim];
            loop {
                for (axis, &i) in idx.iter().enumerate() {
                    point[axis] =
                        -radius + 2.0 * radius * i as f64 / (samples_per_axis - 1) as f64;
                }
                if let Some(v) = family.try_eval_deriv(0, &alpha, &point) {
                    worst = worst.max(v.abs());
                } else {
                    worst = worst.max(family.eval(0, &point).abs());
                }
                let mut carry = true;
                for i in idx.iter_mut() {
                    if !carry {
                        break;
                    }
                    *i += 1;
                    if *i < samples_per_axis {
                        carry = false;
                    } else {
                        *i = 0;
                    }
                }
                if carry {
                    break;
                }
            }
        }
        norms.push(worst * 1.02);
    }
    norms
}

fn unit_bump() -> ProfileRef {
    Arc::new(BumpProfile::unit_peak())
}

fn radial_unit_bump(dim: usize) -> ProfileNd {
    use crate::scalefield::profile::{RadialG, RadialProfile};
    ProfileNd::Radial(RadialProfile::new(
        RadialG::Bump {
            amp: std::f64::consts::E,
        },
        dim,
    ))
}

fn poly(coeffs: Vec<f64>) -> ProfileRef {
    Arc::new(PolyProfile { coeffs })
}

fn cosine(freq: f64, phase: f64) -> ProfileRef {
    Arc::new(CosineProfile {
        amp: 1.0,
        freq,
        phase,
    })
}

fn sine(freq: f64) -> ProfileRef {
    Arc::new(CosineProfile {
        amp: 1.0,
        freq,
        phase: -std::f64::consts::FRAC_PI_2,
    })
}

fn one() -> ProfileRef {
    poly(vec![1.0])
}

fn pool_1d() -> Vec<MemberSpec> {
    let kink_offset = PiecewiseLinearProfile::new(vec![
        (-1.2, 0.0),
        (-0.6, 0.8),
        (0.2, 1.0),
        (0.9, 0.0),
    ]);
    let kink_trapezoid = PiecewiseLinearProfile::new(vec![
        (-1.0, 0.0),
        (-0.5, 1.0),
        (0.5, 1.0),
        (1.0, 0.0),
    ]);
    vec![
        MemberSpec {
            label: "bump",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Uni(unit_bump()),
            width: 1.0,
            center: vec![0.0],
            cert_order: 4,
        },
        MemberSpec {
            label: "bump-shift",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Uni(unit_bump()),
            width: 0.8,
            center: vec![0.4],
            cert_order: 4,
        },
        MemberSpec {
            label: "bump-narrow",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Uni(unit_bump()),
            width: 0.35,
            center: vec![0.0],
            cert_order: 4,
        },
        MemberSpec {
            label: "bump-wide",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Uni(unit_bump()),
            width: 2.5,
            center: vec![0.0],
            cert_order: 4,
        },
        MemberSpec {
            label: "bump-poly",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Modulated {
                base: Box::new(ProfileNd::Uni(unit_bump())),
                factors: vec![poly(vec![1.0, -1.0, 0.0, 0.5])],
            },
            width: 1.0,
            center: vec![0.0],
            cert_order: 4,
        },
        MemberSpec {
            label: "bump-osc",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Modulated {
                base: Box::new(ProfileNd::Uni(unit_bump())),
                factors: vec![cosine(3.0, 0.0)],
            },
            width: 1.0,
            center: vec![0.0],
            cert_order: 4,
        },
        MemberSpec {
            label: "bump-sin",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Modulated {
                base: Box::new(ProfileNd::Uni(unit_bump())),
                factors: vec![sine(2.0)],
            },
            width: 1.5,
            center: vec![0.0],
            cert_order: 4,
        },
        MemberSpec {
            label: "bump-asym",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Modulated {
                base: Box::new(ProfileNd::Uni(unit_bump())),
                factors: vec![poly(vec![0.3, 0.0, 1.0])],
            },
            width: 1.2,
            center: vec![-0.7],
            cert_order: 4,
        },
        MemberSpec {
            label: "poly2",
            class: BatteryClass::C1c,
            profile: ProfileNd::Uni(Arc::new(PolyBumpProfile::new(2, 1.0))),
            width: 1.0,
            center: vec![0.0],
            cert_order: 1,
        },
        MemberSpec {
            label: "poly2-wide-cos",
            class: BatteryClass::C1c,
            profile: ProfileNd::Modulated {
                base: Box::new(ProfileNd::Uni(Arc::new(PolyBumpProfile::new(2, 1.0)))),
                factors: vec![cosine(1.5, 0.0)],
            },
            width: 1.5,
            center: vec![0.0],
            cert_order: 1,
        },
        MemberSpec {
            label: "poly2-odd",
            class: BatteryClass::C1c,
            profile: ProfileNd::Modulated {
                base: Box::new(ProfileNd::Uni(Arc::new(PolyBumpProfile::new(2, 1.0)))),
                factors: vec![poly(vec![0.0, 1.0])],
            },
            width: 1.0,
            center: vec![0.0],
            cert_order: 1,
        },
        MemberSpec {
            label: "poly2-lin",
            class: BatteryClass::C1c,
            profile: ProfileNd::Modulated {
                base: Box::new(ProfileNd::Uni(Arc::new(PolyBumpProfile::new(2, 1.0)))),
                factors: vec![poly(vec![1.0, 0.5])],
            },
            width: 1.0,
            center: vec![0.0],
            cert_order: 1,
        },
        MemberSpec {
            label: "kink-half",
            class: BatteryClass::C0SContinuous,
            profile: ProfileNd::Uni(Arc::new(PiecewiseLinearProfile::triangle(2.0, 1.0))),
            width: 1.0,
            center: vec![0.0],
            cert_order: 0,
        },
        MemberSpec {
            label: "kink-offset",
            class: BatteryClass::C0SContinuous,
            profile: ProfileNd::Uni(Arc::new(kink_offset)),
            width: 1.0,
            center: vec![0.0],
            cert_order: 0,
        },
        MemberSpec {
            label: "kink-trapezoid",
            class: BatteryClass::C0SContinuous,
            profile: ProfileNd::Uni(Arc::new(kink_trapezoid)),
            width: 1.0,
            center: vec![0.0],
            cert_order: 0,
        },
    ]
}

fn separable(parts: Vec<ProfileRef>) -> ProfileNd {
    ProfileNd::Separable(parts)
}

fn pool_2d() -> Vec<MemberSpec> {
    let tri = |r: f64| -> ProfileRef { Arc::new(PiecewiseLinearProfile::triangle(r, 1.0)) };
    let trap = || -> ProfileRef {
        Arc::new(PiecewiseLinearProfile::new(vec![
            (-1.0, 0.0),
            (-0.5, 1.0),
            (0.5, 1.0),
            (1.0, 0.0),
        ]))
    };
    let pb2 = || -> ProfileRef { Arc::new(PolyBumpProfile::new(2, 1.0)) };
    vec![
        MemberSpec {
            label: "rbump",
            class: BatteryClass::CInfc,
            profile: radial_unit_bump(2),
            width: 1.0,
            center: vec![0.0, 0.0],
            cert_order: 3,
        },
        MemberSpec {
            label: "rbump-wide",
            class: BatteryClass::CInfc,
            profile: radial_unit_bump(2),
            width: 2.0,
            center: vec![0.0, 0.0],
            cert_order: 3,
        },
        MemberSpec {
            label: "rbump-shift",
            class: BatteryClass::CInfc,
            profile: radial_unit_bump(2),
            width: 1.0,
            center: vec![0.3, -0.2],
            cert_order: 3,
        },
        MemberSpec {
            label: "bump-prod",
            class: BatteryClass::CInfc,
            profile: separable(vec![unit_bump(), unit_bump()]),
            width: 1.3,
            center: vec![0.0, 0.0],
            cert_order: 3,
        },
        MemberSpec {
            label: "rbump-poly",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Modulated {
                base: Box::new(radial_unit_bump(2)),
                factors: vec![poly(vec![1.0, 0.5]), poly(vec![1.0, -1.0 / 3.0])],
            },
            width: 1.0,
            center: vec![0.0, 0.0],
            cert_order: 3,
        },
        MemberSpec {
            label: "rbump-osc",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Modulated {
                base: Box::new(radial_unit_bump(2)),
                factors: vec![cosine(2.0, 0.0), cosine(1.0, 0.0)],
            },
            width: 1.0,
            center: vec![0.0, 0.0],
            cert_order: 3,
        },
        MemberSpec {
            label: "rbump-sin",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Modulated {
                base: Box::new(radial_unit_bump(2)),
                factors: vec![sine(2.0), one()],
            },
            width: 1.2,
            center: vec![0.0, 0.0],
            cert_order: 3,
        },
        MemberSpec {
            label: "bump-aniso",
            class: BatteryClass::CInfc,
            profile: separable(vec![unit_bump(), unit_bump()]),
            width: 0.9,
            center: vec![0.2, 0.3],
            cert_order: 3,
        },
        MemberSpec {
            label: "poly2-prod",
            class: BatteryClass::C1c,
            profile: separable(vec![pb2(), pb2()]),
            width: 1.0,
            center: vec![0.0, 0.0],
            cert_order: 1,
        },
        MemberSpec {
            label: "poly2-prod-cos",
            class: BatteryClass::C1c,
            profile: ProfileNd::Modulated {
                base: Box::new(separable(vec![pb2(), pb2()])),
                factors: vec![cosine(1.0, 0.0), one()],
            },
            width: 1.4,
            center: vec![0.0, 0.0],
            cert_order: 1,
        },
        MemberSpec {
            label: "poly2-prod-odd",
            class: BatteryClass::C1c,
            profile: ProfileNd::Modulated {
                base: Box::new(separable(vec![pb2(), pb2()])),
                factors: vec![poly(vec![0.0, 1.0]), one()],
            },
            width: 1.0,
            center: vec![0.0, 0.0],
            cert_order: 1,
        },
        MemberSpec {
            label: "poly2-prod-shift",
            class: BatteryClass::C1c,
            profile: separable(vec![pb2(), pb2()]),
            width: 1.1,
            center: vec![-0.3, 0.2],
            cert_order: 1,
        },
        MemberSpec {
            label: "kink-pyramid",
            class: BatteryClass::C0SContinuous,
            profile: separable(vec![tri(2.0), tri(2.0)]),
            width: 1.0,
            center: vec![0.0, 0.0],
            cert_order: 0,
        },
        MemberSpec {
            label: "kink-aniso",
            class: BatteryClass::C0SContinuous,
            profile: separable(vec![tri(1.4), tri(0.9)]),
            width: 1.0,
            center: vec![0.0, 0.0],
            cert_order: 0,
        },
        MemberSpec {
            label: "kink-plateau",
            class: BatteryClass::C0SContinuous,
            profile: separable(vec![trap(), trap()]),
            width: 1.0,
            center: vec![0.0, 0.0],
            cert_order: 0,
        },
    ]
}

fn pool_3d() -> Vec<MemberSpec> {
    let tri = |r: f64| -> ProfileRef { Arc::new(PiecewiseLinearProfile::triangle(r, 1.0)) };
    let trap = || -> ProfileRef {
        Arc::new(PiecewiseLinearProfile::new(vec![
            (-1.0, 0.0),
            (-0.5, 1.0),
            (0.5, 1.0),
            (1.0, 0.0),
        ]))
    };
    let pb2 = || -> ProfileRef { Arc::new(PolyBumpProfile::new(2, 1.0)) };
    vec![
        MemberSpec {
            label: "rbump",
            class: BatteryClass::CInfc,
            profile: radial_unit_bump(3),
            width: 1.0,
            center: vec![0.0; 3],
            cert_order: 2,
        },
        MemberSpec {
            label: "rbump-wide",
            class: BatteryClass::CInfc,
            profile: radial_unit_bump(3),
            width: 1.6,
            center: vec![0.0; 3],
            cert_order: 2,
        },
        MemberSpec {
            label: "rbump-shift",
            class: BatteryClass::CInfc,
            profile: radial_unit_bump(3),
            width: 1.1,
            center: vec![0.25, -0.15, 0.1],
            cert_order: 2,
        },
        MemberSpec {
            label: "bump-prod",
            class: BatteryClass::CInfc,
            profile: separable(vec![unit_bump(), unit_bump(), unit_bump()]),
            width: 1.2,
            center: vec![0.0; 3],
            cert_order: 2,
        },
        MemberSpec {
            label: "rbump-poly",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Modulated {
                base: Box::new(radial_unit_bump(3)),
                factors: vec![poly(vec![1.0, 0.4]), one(), poly(vec![1.0, -0.3])],
            },
            width: 1.0,
            center: vec![0.0; 3],
            cert_order: 2,
        },
        MemberSpec {
            label: "rbump-osc",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Modulated {
                base: Box::new(radial_unit_bump(3)),
                factors: vec![cosine(1.5, 0.0), cosine(1.0, 0.0), one()],
            },
            width: 1.0,
            center: vec![0.0; 3],
            cert_order: 2,
        },
        MemberSpec {
            label: "rbump-sin",
            class: BatteryClass::CInfc,
            profile: ProfileNd::Modulated {
                base: Box::new(radial_unit_bump(3)),
                factors: vec![sine(1.5), one(), one()],
            },
            width: 1.2,
            center: vec![0.0; 3],
            cert_order: 2,
        },
        MemberSpec {
            label: "bump-aniso",
            class: BatteryClass::CInfc,
            profile: separable(vec![unit_bump(), unit_bump(), unit_bump()]),
            width: 0.9,
            center: vec![0.15, 0.2, -0.1],
            cert_order: 2,
        },
        MemberSpec {
            label: "poly2-prod",
            class: BatteryClass::C1c,
            profile: separable(vec![pb2(), pb2(), pb2()]),
            width: 1.0,
            center: vec![0.0; 3],
            cert_order: 1,
        },
        MemberSpec {
            label: "poly2-prod-cos",
            class: BatteryClass::C1c,
            profile: ProfileNd::Modulated {
                base: Box::new(separable(vec![pb2(), pb2(), pb2()])),
                factors: vec![cosine(1.0, 0.0), one(), one()],
            },
            width: 1.3,
            center: vec![0.0; 3],
            cert_order: 1,
        },
        MemberSpec {
            label: "poly2-prod-odd",
            class: BatteryClass::C1c,
            profile: ProfileNd::Modulated {
                base: Box::new(separable(vec![pb2(), pb2(), pb2()])),
                factors: vec![poly(vec![0.0, 1.0]), one(), one()],
            },
            width: 1.0,
            center: vec![0.0; 3],
            cert_order: 1,
        },
        MemberSpec {
            label: "poly2-prod-shift",
            class: BatteryClass::C1c,
            profile: separable(vec![pb2(), pb2(), pb2()]),
            width: 1.1,
            center: vec![-0.2, 0.15, 0.1],
            cert_order: 1,
        },
        MemberSpec {
            label: "kink-pyramid",
            class: BatteryClass::C0SContinuous,
            profile: separable(vec![tri(2.0), tri(2.0), tri(2.0)]),
            width: 1.0,
            center: vec![0.0; 3],
            cert_order: 0,
        },
        MemberSpec {
            label: "kink-aniso",
            class: BatteryClass::C0SContinuous,
            profile: separable(vec![tri(1.4), tri(0.9), tri(1.2)]),
            width: 1.0,
            center: vec![0.0; 3],
            cert_order: 0,
        },
        MemberSpec {
            label: "kink-plateau",
            class: BatteryClass::C0SContinuous,
            profile: separable(vec![trap(), trap(), trap()]),
            width: 1.0,
            center: vec![0.0; 3],
            cert_order: 0,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalefield::make_ladder;

    #[test]
    fn standard_battery_has_fifteen_members_in_three_classes() {
        let ladder = make_ladder(4, 6, 2.0).unwrap();
        for dim in 1..=3 {
            let battery = TestBattery::standard(dim, &ladder).unwrap();
            assert_eq!(battery.members().len(), 15, "dim {dim}");
            let smooth = battery
                .members()
                .iter()
                .filter(|m| m.class == BatteryClass::CInfc)
                .count();
            let c1 = battery
                .members()
                .iter()
                .filter(|m| m.class == BatteryClass::C1c)
                .count();
            let kinks = battery
                .members()
                .iter()
                .filter(|m| m.class == BatteryClass::C0SContinuous)
                .count();
            assert_eq!((smooth, c1, kinks), (8, 4, 3), "dim {dim}");
        }
    }

    #[test]
    fn class_restriction_filters() {
        let ladder = make_ladder(4, 6, 2.0).unwrap();
        let c1 = TestBattery::new(1, BatteryClass::C1c, &ladder).unwrap();
        assert_eq!(c1.members().len(), 12);
        let smooth = TestBattery::new(1, BatteryClass::CInfc, &ladder).unwrap();
        assert_eq!(smooth.members().len(), 8);
    }

    #[test]
    fn members_are_compactly_supported() {
        let ladder = make_ladder(4, 6, 2.0).unwrap();
        for dim in 1..=2 {
            let battery = TestBattery::standard(dim, &ladder).unwrap();
            for m in battery.members() {
                assert!(m.support_radius.is_finite(), "{}", m.label);
                // vanishing beyond the declared radius
                let x = vec![m.support_radius + 0.05; dim];
                assert_eq!(m.family.eval(0, &x), 0.0, "{}", m.label);
            }
        }
    }

    #[test]
    fn sup_norms_bound_sampled_values() {
        // independent spot check of certified metadata
        let ladder = make_ladder(4, 6, 2.0).unwrap();
        let battery = TestBattery::standard(1, &ladder).unwrap();
        for m in battery.members() {
            for i in 0..400 {
                let x = -m.support_radius + 2.0 * m.support_radius * i as f64 / 399.0;
                assert!(
                    m.family.eval(0, &[x]).abs() <= m.sup_norms[0] + 1e-12,
                    "{} at {x}",
                    m.label
                );
            }
        }
    }

    #[test]
    fn version_identifier_is_stable() {
        let ladder = make_ladder(4, 6, 2.0).unwrap();
        let a = TestBattery::standard(1, &ladder).unwrap();
        let b = TestBattery::standard(1, &ladder).unwrap();
        assert_eq!(a.version(), b.version());
        assert_eq!(a.version(), "d1-v1");
    }

    #[test]
    fn origin_values_vary_across_members() {
        let ladder = make_ladder(4, 6, 2.0).unwrap();
        let battery = TestBattery::standard(1, &ladder).unwrap();
        let values: Vec<f64> = battery
            .members()
            .iter()
            .map(|m| m.value_at_origin())
            .collect();
        // at least one member vanishes at the origin, at least one peaks at 1
        assert!(values.iter().any(|v| v.abs() < 1e-12));
        assert!(values.iter().any(|v| (v - 1.0).abs() < 1e-12));
    }
}
