use fieldlang::FieldExpr;
use gfvc::fields::{parse_vec, ExprField, FieldRef};
use gfvc::gfc1d::{gfi_interval, ExprProfile};
use gfvc::geometry::{Box3D, Description, Patch, PiecewiseSimpleLine, PolygonalChain, SimpleLine3D, SimpleRegion2D};
use gfvc::gfint::{circulation, double_gfi, flux_box, line_gfi, surface_gfi, volume_gfi};
use gfvc::vectorops::{grad_field, KernelTriple};
use gfvc::QuadSpec;
use proptest::prelude::*;

const H15: f64 = 1.1283791670955126;
const FOUR_OVER_PI: f64 = 1.2732395447351628;

fn spec() -> QuadSpec {
    QuadSpec::default()
}

fn half() -> KernelTriple {
    KernelTriple::power_rl(0.5).unwrap()
}

fn classical() -> KernelTriple {
    KernelTriple::classical()
}

fn seg(a: [f64; 3], b: [f64; 3]) -> PiecewiseSimpleLine {
    PiecewiseSimpleLine::new(vec![SimpleLine3D::segment(a, b).unwrap()], false)
}

fn unit_square() -> SimpleRegion2D {
    SimpleRegion2D::rectangle(0, 1, (0.0, 1.0), (0.0, 1.0))
}

fn scalar(s: &str) -> FieldRef {
    ExprField::parse(s).unwrap()
}

#[test]
fn line_integrals() {
    let f = parse_vec(["1", "0", "0"]).unwrap();
    let r = line_gfi(&classical(), &f, &seg([0.0; 3], [2.0, 0.0, 0.0]), &spec()).unwrap();
    assert!((r.value - 2.0).abs() < 1e-14);
    let r = line_gfi(&half(), &f, &seg([0.0; 3], [1.0, 0.0, 0.0]), &spec()).unwrap();
    assert!((r.value - H15).abs() < 1e-12);
    let r = line_gfi(&half(), &f, &seg([1.0, 0.0, 0.0], [0.0; 3]), &spec()).unwrap();
    assert!((r.value + H15).abs() < 1e-12);
}

#[test]
fn circulations() {
    let boundary = unit_square().boundary(&FieldExpr::num(0.0)).unwrap();
    let f = parse_vec(["-y", "x", "0"]).unwrap();
    let r = circulation(&classical(), &f, &boundary, &spec()).unwrap();
    assert!((r.value - 2.0).abs() < 1e-14);
    let r = circulation(&half(), &f, &boundary, &spec()).unwrap();
    assert!((r.value - 2.2567583341910252).abs() < 1e-10, "{r:?}");
    let c = parse_vec(["2", "-3", "1"]).unwrap();
    let r = circulation(&half(), &c, &boundary, &spec()).unwrap();
    assert!(r.value.abs() < 1e-14);

    let open = seg([0.0; 3], [1.0, 0.0, 0.0]);
    assert!(circulation(&half(), &f, &open, &spec()).is_err());
}

#[test]
fn double_integrals() {
    let one = ExprField::constant(1.0);
    let r = double_gfi(&classical(), &one, &unit_square(), [0.0; 3], &spec()).unwrap();
    assert!((r.value - 1.0).abs() < 1e-14);
    let r = double_gfi(&half(), &one, &unit_square(), [0.0; 3], &spec()).unwrap();
    assert!((r.value - FOUR_OVER_PI).abs() < 1e-10, "{r:?}");
    let tri = SimpleRegion2D::new(
        Description {
            outer_axis: 0,
            inner_axis: 1,
            outer: (0.0, 1.0),
            inner_lo: FieldExpr::num(0.0),
            inner_hi: FieldExpr::var(0),
        },
        None,
    );
    let r = double_gfi(&classical(), &one, &tri, [0.0; 3], &spec()).unwrap();
    assert!((r.value - 0.5).abs() < 1e-14);
}

#[test]
fn surface_integrals_and_flux() {
    let up = Patch::flat(2, 0.0, unit_square(), 1.0);
    let f = parse_vec(["0", "0", "1"]).unwrap();
    let r = surface_gfi(&classical(), &f, &[up.clone()], &spec()).unwrap();
    assert!((r.value - 1.0).abs() < 1e-14);
    let r = surface_gfi(&half(), &f, &[up.clone()], &spec()).unwrap();
    assert!((r.value - FOUR_OVER_PI).abs() < 1e-10);
    let tangent = parse_vec(["x", "y", "0"]).unwrap();
    assert_eq!(surface_gfi(&half(), &tangent, &[up], &spec()).unwrap().value, 0.0);

    // A flat x = 0 patch gives the double GFI of F_x(0, y, z).
    let side = Patch::flat(0, 0.0, SimpleRegion2D::rectangle(1, 2, (0.0, 1.0), (0.0, 2.0)), 1.0);
    let g = parse_vec(["1+x+y*z", "0", "0"]).unwrap();
    let a = surface_gfi(&half(), &g, &[side.clone()], &spec()).unwrap().value;
    let b = double_gfi(&half(), &scalar("1+y*z"), &side.region, [0.0; 3], &spec()).unwrap().value;
    assert!((a - b).abs() < 1e-12);

    let f = parse_vec(["x", "0", "0"]).unwrap();
    let r = flux_box(&half(), &f, &Box3D::unit(), &spec()).unwrap();
    assert!((r.value - FOUR_OVER_PI).abs() < 1e-10);
    let f = parse_vec(["x", "y", "z"]).unwrap();
    let r = flux_box(&classical(), &f, &Box3D::unit(), &spec()).unwrap();
    assert!((r.value - 3.0).abs() < 1e-13);
    assert_eq!(r.contributions.len(), 6);
    assert_eq!(r.value, r.contributions.iter().sum::<f64>());
}

#[test]
fn volume_integrals() {
    let one = ExprField::constant(1.0);
    let r = volume_gfi(&classical(), &one, &Box3D::unit(), &spec()).unwrap();
    assert!((r.value - 1.0).abs() < 1e-14);
    let r = volume_gfi(&half(), &one, &Box3D::unit(), &spec()).unwrap();
    assert!((r.value - 1.4366969769407632).abs() < 1e-9, "{r:?}");
    let dz = gfvc::fields::axis_gfd(&half()[2], &scalar("z"), 2, &spec().tightened()).unwrap();
    let r = volume_gfi(&half(), &dz, &Box3D::unit(), &spec()).unwrap();
    assert!((r.value - FOUR_OVER_PI).abs() < 1e-8, "{r:?}");
}

#[test]
fn classical_kernels_give_ordinary_integrals() {
    let k = classical();
    let lines = [
        (["y", "x", "0"], [0.0, 0.0, 0.0], [1.0, 2.0, 0.0], 2.0),
        (["x^2", "0", "z"], [0.0, 1.0, 0.0], [3.0, 1.0, 2.0], 9.0 + 2.0),
        (["1", "1", "1"], [1.0, 1.0, 1.0], [2.0, 3.0, 4.0], 6.0),
        (["z", "0", "x"], [0.0; 3], [1.0, 0.0, 1.0], 1.0),
        (["0", "y^3", "0"], [0.0; 3], [0.0, 2.0, 0.0], 4.0),
    ];
    for (f, a, b, expected) in lines {
        let v = line_gfi(&k, &parse_vec(f).unwrap(), &seg(a, b), &spec()).unwrap().value;
        assert!((v - expected).abs() < 1e-8 * expected.abs().max(1.0), "{f:?}: {v}");
    }
    let b = Box3D::new([0.0; 3], [1.0, 2.0, 3.0]);
    let volumes = [("1", 6.0), ("x", 3.0), ("x*y*z", 4.5), ("z^2", 18.0), ("x+y+z", 3.0 + 6.0 + 9.0)];
    for (f, expected) in volumes {
        let v = volume_gfi(&k, &scalar(f), &b, &spec()).unwrap().value;
        assert!((v - expected).abs() < 1e-8 * expected, "{f}: {v}");
    }
    let sq = SimpleRegion2D::rectangle(0, 1, (0.0, 2.0), (0.0, 1.0));
    let areas = [("1", 2.0), ("x", 2.0), ("y", 1.0), ("x*y", 1.0), ("x^2", 8.0 / 3.0)];
    for (f, expected) in areas {
        let v = double_gfi(&k, &scalar(f), &sq, [0.0; 3], &spec()).unwrap().value;
        assert!((v - expected).abs() < 1e-8 * expected, "{f}: {v}");
    }
}

#[test]
fn gradient_fields_have_zero_circulation_on_rectangles() {
    let kt = half();
    let g = grad_field(&kt, &scalar("x^2*y+y^3"), &spec().tightened()).unwrap();
    let loop_ = SimpleRegion2D::rectangle(0, 1, (0.2, 1.0), (0.1, 0.9)).boundary(&FieldExpr::num(0.0)).unwrap();
    let r = circulation(&kt, &g, &loop_, &spec()).unwrap();
    assert!(r.value.abs() < 1e-5, "{r:?}");
}

#[test]
fn line_integrals_add_over_concatenation() {
    let f = parse_vec(["x*y+1", "x^2", "z+y"]).unwrap();
    let chain = PolygonalChain::new(vec![[0.0; 3], [1.0, 0.0, 0.0], [1.0, 2.0, 0.0], [1.0, 2.0, 1.0]]);
    let whole = line_gfi(&half(), &f, &PiecewiseSimpleLine::from_chain(&chain).unwrap(), &spec()).unwrap();
    let parts: f64 = chain
        .vertices
        .windows(2)
        .map(|w| line_gfi(&half(), &f, &seg(w[0], w[1]), &spec()).unwrap().value)
        .sum();
    assert_eq!(whole.value, parts);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn product_integrands_separate(p in 0.0f64..2.0, q in 0.0f64..2.0, r in 0.0f64..2.0, hi in 0.5f64..2.0) {
        let kt = half();
        let f = scalar(&format!("x^{p}*y^{q}*z^{r}"));
        let b = Box3D::new([0.0; 3], [hi, 1.0, hi]);
        let v = volume_gfi(&kt, &f, &b, &spec()).unwrap().value;
        let one = |e: f64, top: f64| {
            let prof = ExprProfile::parse(&format!("x^{e}")).unwrap();
            gfi_interval(&kt[0], &prof, 0.0, top, &spec()).unwrap()
        };
        let expected = one(p, hi) * one(q, 1.0) * one(r, hi);
        prop_assert!((v - expected).abs() < 1e-8 * expected.abs(), "{} vs {}", v, expected);
    }
}
