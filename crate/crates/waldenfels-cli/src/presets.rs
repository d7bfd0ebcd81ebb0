//! Bundled reference scenarios: the operator presets paired with their
//! reference domains and grid spacings.

use waldenfels::field::ScalarCoeff;
use waldenfels::geometry::{implicit_registry, DomainSpec};
use waldenfels::operator::{presets as op, OperatorSpec};

/// A named bundle: operator, domain, spacing, and the ellipticity constant
/// recorded for the bundle's compact closure.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub name: &'static str,
    pub operator: OperatorSpec,
    pub domain: DomainSpec,
    pub h: f64,
    pub lambda: f64,
}

pub fn interval() -> DomainSpec {
    DomainSpec::ball(vec![0.0], 1.0)
}

pub fn disc() -> DomainSpec {
    DomainSpec::ball(vec![0.0, 0.0], 1.0)
}

/// The bundled operator presets on their reference domains; these back the
/// randomized verification suites.
pub fn operator_bundles() -> Vec<Bundle> {
    vec![
        Bundle {
            name: "laplacian-1d",
            operator: op::laplacian(1),
            domain: interval(),
            h: 0.01,
            lambda: 1.0,
        },
        Bundle {
            name: "laplacian-2d",
            operator: op::laplacian(2),
            domain: disc(),
            h: 1.0 / 24.0,
            lambda: 1.0,
        },
        Bundle {
            name: "anisotropic-2d",
            operator: op::anisotropic(2),
            domain: DomainSpec::boxdom(vec![-1.0, -1.0], vec![1.0, 1.0]),
            h: 1.0 / 16.0,
            lambda: 0.75,
        },
        Bundle {
            name: "two-point-jump-1d",
            operator: op::two_point_jump(1, 0.5, 1.0),
            domain: interval(),
            h: 0.01,
            lambda: 1.0,
        },
        Bundle {
            name: "truncated-stable-1d",
            operator: op::truncated_stable(1, 0.8, 0.05, 0.4, 0.02),
            domain: interval(),
            h: 0.01,
            lambda: 1.0,
        },
    ]
}

/// The interval bundle with constant killing `c`.
pub fn with_killing(mut bundle: Bundle, c: f64) -> Bundle {
    bundle.operator.coeffs.c = ScalarCoeff::constant(c);
    bundle
}

pub fn bundle_by_name(name: &str) -> Option<Bundle> {
    operator_bundles().into_iter().find(|b| b.name == name)
}

/// The cusp negative-control domain for the `δ_D` degradation study.
pub fn cusp_domain() -> DomainSpec {
    implicit_registry("spike").expect("registry entry")
}

pub fn suite_names() -> &'static [&'static str] {
    &["paper-core", "smoke"]
}

pub fn list_presets() -> String {
    let mut s = String::new();
    s.push_str("operator presets (core):\n");
    for name in [
        "laplacian",
        "anisotropic",
        "two-point-jump",
        "truncated-stable",
    ] {
        s.push_str(&format!("  {name}\n"));
    }
    s.push_str("scenario bundles:\n");
    for b in operator_bundles() {
        s.push_str(&format!(
            "  {} (h = {}, lambda = {})\n",
            b.name, b.h, b.lambda
        ));
    }
    s.push_str("implicit domains: spike, disc-minus-wedge, disc-minus-cusp\n");
    s.push_str("suites: paper-core, smoke\n");
    s
}
