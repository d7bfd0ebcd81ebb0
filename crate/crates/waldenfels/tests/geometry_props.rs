//! Property tests for domain geometry: Lipschitz distance, shrink nesting,
//! unit normals with certified tangent balls.

use proptest::prelude::*;
use waldenfels::geometry::{
    generalized_normals, implicit_registry, interior_ball_radius, shrink, BallResolution,
    DomainSpec,
};

fn sample_domains() -> Vec<DomainSpec> {
    vec![
        DomainSpec::ball(vec![0.3, -0.2], 0.9),
        DomainSpec::boxdom(vec![-1.0, -0.5], vec![0.5, 1.5]),
        DomainSpec::annulus(vec![0.0, 0.0], 0.4, 1.1),
        implicit_registry("disc-minus-wedge").unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn delta_one_lipschitz(
        ax in -1.2f64..1.2, ay in -1.2f64..1.2,
        bx in -1.2f64..1.2, by in -1.2f64..1.2,
        which in 0usize..4,
    ) {
        let dom = &sample_domains()[which];
        let a = [ax, ay];
        let b = [bx, by];
        let dist = ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt();
        prop_assert!((dom.delta_d(&a) - dom.delta_d(&b)).abs() <= dist + 1e-9);
    }

    // shrink(shrink(D,r),s) ⊆ shrink(D, r+s) pointwise
    #[test]
    fn shrink_nesting(
        r in 0.01f64..0.2, s in 0.01f64..0.2,
        px in -1.2f64..1.2, py in -1.2f64..1.2,
        which in 0usize..3,
    ) {
        let dom = &sample_domains()[which];
        let p = [px, py];
        let (Some(inner), Some(outer)) = (
            shrink(dom, r).and_then(|d| shrink(&d, s)),
            shrink(dom, r + s),
        ) else {
            return Ok(());
        };
        if inner.contains(&p) {
            prop_assert!(outer.signed_distance(&p) <= 1e-9);
        }
    }
}

#[test]
fn normals_are_unit_and_certified() {
    let res = BallResolution::default();
    for dom in sample_domains() {
        // pick a boundary point by projecting a generic exterior direction
        let probe = [0.77, 0.31];
        let xhat = {
            // bisect along the ray from an interior anchor
            let (lo, hi) = dom.bounding_box();
            let cx = (lo[0] + hi[0]) / 2.0;
            let cy = (lo[1] + hi[1]) / 2.0;
            let anchor = [[cx, cy], [cx + 0.75, cy], [cx - 0.5, cy], [cx, cy - 0.5]]
                .into_iter()
                .find(|p| dom.contains(p))
                .unwrap_or_else(|| panic!("no anchor inside {:?}", dom.variant));
            let mut t_lo = 0.0;
            let mut t_hi = 4.0;
            for _ in 0..60 {
                let t = 0.5 * (t_lo + t_hi);
                let p = [anchor[0] + t * probe[0], anchor[1] + t * probe[1]];
                if dom.contains(&p) {
                    t_lo = t;
                } else {
                    t_hi = t;
                }
            }
            [anchor[0] + t_lo * probe[0], anchor[1] + t_lo * probe[1]]
        };
        let normals = generalized_normals(&dom, &xhat, &res).unwrap();
        let frak_r = interior_ball_radius(&dom, &xhat, &res).unwrap();
        for n in &normals {
            let len: f64 = n.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((len - 1.0).abs() < 1e-12);
            if frak_r > 1e-3 {
                // the certified tangent ball lies inside D on a dense sample
                let r = frak_r * 0.9;
                let c = [xhat[0] - r * n[0], xhat[1] - r * n[1]];
                for k in 0..64 {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
                    let p = [c[0] + 0.999 * r * th.cos(), c[1] + 0.999 * r * th.sin()];
                    assert!(
                        dom.signed_distance(&p) <= 1e-7,
                        "tangent ball escapes {:?} at {p:?}",
                        dom.variant
                    );
                }
            }
        }
    }
}
