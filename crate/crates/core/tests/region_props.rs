mod common;

use dof_core::{symmetric_sum_dof, AntennaConfig, CsitMode, DoFPoint, DoFRegion, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = AntennaConfig> {
    (1i64..=6, prop::collection::vec(1i64..=6, 2..=5)).prop_map(|(m, n)| AntennaConfig::new(m, &n).unwrap())
}

fn active(region: &DoFRegion, v: &DoFPoint) -> usize {
    let planes = v.coords().iter().filter(|c| c.is_zero()).count();
    planes
        + region
            .halfspaces()
            .iter()
            .filter(|h| h.lhs(v.coords()) == h.rhs())
            .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn no_csit_inside_delayed(cfg in config()) {
        let none = DoFRegion::no_csit(&cfg);
        let delayed = DoFRegion::delayed_csit(&cfg);
        prop_assert!(none.is_subset(&delayed).unwrap());
        prop_assert_eq!(none.equals(&delayed).unwrap(), cfg.m() <= cfg.n()[1]);
    }

    #[test]
    fn raw_outer_reduces_to_delayed(cfg in config()) {
        let reduced = DoFRegion::raw_outer(&cfg).remove_redundant().unwrap();
        prop_assert!(reduced.equals(&DoFRegion::delayed_csit(&cfg)).unwrap());
        prop_assert!(reduced.halfspaces().len() <= cfg.k());
    }

    #[test]
    fn vertices_are_feasible_and_tight(cfg in config()) {
        for region in [DoFRegion::no_csit(&cfg), DoFRegion::delayed_csit(&cfg)] {
            for v in region.vertices().unwrap() {
                prop_assert!(region.contains(&v).unwrap());
                prop_assert!(active(&region, &v) >= cfg.k());
            }
        }
    }

    #[test]
    fn sum_maximizer_is_on_the_boundary(cfg in config(), num in 1i64..20, den in 1i64..20) {
        let region = DoFRegion::delayed_csit(&cfg);
        let best = region.max_sum_dof().unwrap();
        let eps = Rational::new(num, den);
        for v in region.vertices().unwrap().into_iter().filter(|v| v.sum() == best) {
            let bumped: Vec<Rational> = v.coords().iter().map(|c| c + eps).collect();
            prop_assert!(!region.contains(&DoFPoint::new(bumped).unwrap()).unwrap());
        }
    }

    #[test]
    fn json_round_trip(cfg in config()) {
        let region = DoFRegion::delayed_csit(&cfg);
        let back = DoFRegion::from_json(&region.to_json()).unwrap();
        prop_assert_eq!(back, region);
    }
}

#[test]
fn symmetric_regions_match_formula() {
    for k in 2..=5u32 {
        for n in 1..=3u32 {
            for m in 1..=7u32 {
                let cfg = AntennaConfig::new(i64::from(m), &vec![i64::from(n); k as usize]).unwrap();
                for (mode, region) in [
                    (CsitMode::NoCsit, DoFRegion::no_csit(&cfg)),
                    (CsitMode::Delayed, DoFRegion::delayed_csit(&cfg)),
                ] {
                    assert_eq!(
                        region.max_sum_dof().unwrap(),
                        symmetric_sum_dof(m, n, k, mode),
                        "{cfg} {mode:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn adding_a_receiver_lowers_delayed_sum_dof() {
    for n in 1..=4u32 {
        for m in n + 1..=3 * n {
            for k in 2..10u32 {
                assert!(
                    symmetric_sum_dof(m, n, k + 1, CsitMode::Delayed) < symmetric_sum_dof(m, n, k, CsitMode::Delayed)
                );
            }
        }
    }
}

#[test]
fn vertices_match_basis_oracle() {
    for cfg in common::all_configs(3, 4) {
        for region in [
            DoFRegion::no_csit(&cfg),
            DoFRegion::delayed_csit(&cfg),
            DoFRegion::raw_outer(&cfg),
        ] {
            assert_eq!(region.vertices().unwrap(), common::basis_vertices(&region), "{cfg}");
        }
    }
}

#[test]
fn asymmetric_corner() {
    let cfg = AntennaConfig::new(3, &[1, 2]).unwrap();
    let v = DoFRegion::delayed_csit(&cfg).vertices().unwrap();
    let corner = DoFPoint::new(vec![Rational::new(12, 7), Rational::new(3, 7)]).unwrap();
    assert!(v.contains(&corner));
    assert_eq!(corner.sum(), Rational::new(15, 7));
    assert!(Rational::one() < corner.sum());
}
