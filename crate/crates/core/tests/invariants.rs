use freewreath_core::freeconv::nsv_check;
use freewreath_core::graphs::{
    automorphism_group, classical_spectral_measure, disjoint_union, magic_biunitary_check, named_graph,
    quantum_measure, rectangle,
};
use freewreath_core::measures::{moments_of, nu};
use freewreath_core::verify::{run_all, Params, REGISTRY};
use freewreath_core::{CatalogMeasure, MomentSequence};

fn cat(name: &str, order: usize) -> MomentSequence {
    moments_of(&name.parse::<CatalogMeasure>().unwrap(), order).unwrap()
}

/// Every in-scope identity the verification runner must cover.
const MANIFEST: [&str; 15] = [
    "thm21",
    "thm22_moments",
    "prop41",
    "lemma41",
    "thm42_nsv",
    "thm51",
    "cor61",
    "prop72",
    "prop73",
    "prop82",
    "prop83_quadratic",
    "prop85_quadratic",
    "distributivity_fails",
    "theta_positivity",
    "bell_moments",
];

#[test]
fn registry_matches_manifest() {
    assert_eq!(REGISTRY, MANIFEST);
    let reports = run_all(&Params::new()).unwrap();
    let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, MANIFEST);
}

#[test]
fn eta_collapses_from_four_on() {
    let four = cat("eta:4", 14);
    for n in 5..=20 {
        assert_eq!(cat(&format!("eta:{n}"), 14), four, "eta:{n}");
    }
}

#[test]
fn poisson_is_the_limit_of_fixed_point_laws() {
    let poisson = cat("poisson", 8);
    for n in 1..=10u32 {
        let m = nu(n).moments(8);
        for k in 0..=(n as usize).min(8) {
            assert_eq!(m.get(k), poisson.get(k), "nu({n}) m_{k}");
        }
    }
}

#[test]
fn nsv_holds_for_catalog_measures() {
    for name in ["dirac:1", "eta:2", "eta:3", "eta:4", "uniform_group:4", "dihedral:5"] {
        let m = cat(name, 10);
        for n in 2..=5 {
            assert!(nsv_check(&m, n, 10).unwrap().equal, "{name} n={n}");
        }
    }
}

#[test]
fn quantum_moments_are_dominated_by_classical() {
    let rr = disjoint_union(&rectangle(), 2).unwrap();
    let quantum = quantum_measure(&rr, 10).unwrap().moments;
    let classical = classical_spectral_measure(&rr).unwrap().moments(10);
    for k in 0..=10 {
        assert!(quantum.get(k) <= classical.get(k), "m_{k}");
    }
}

#[test]
fn catalog_graphs_have_magic_automorphism_groups() {
    for name in ["simplex:4", "ngon:5", "ngon:6", "cube", "rectangle", "two_rectangles", "edgeless:3"] {
        let g = automorphism_group(&named_graph(name).unwrap()).unwrap();
        assert!(magic_biunitary_check(&g), "{name}");
    }
}
