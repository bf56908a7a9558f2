use elastogreen::bimaterial::{gamma_plus, BimaterialGreen};
use elastogreen::fd_oracle::Grid;
use elastogreen::geometry::{hausdorff_distance, modified_distance, DistanceMethod, VoxelSet};
use elastogreen::kelvin::kelvin_matrix;
use elastogreen::materials::{material_from_poisson, MaterialPair};
use elastogreen::par::{self, Mode};
use elastogreen::Vec3;
use proptest::prelude::*;

fn material() -> impl Strategy<Value = (f64, f64)> {
    (0.5..3.0f64, 0.0..0.45f64)
}

fn pair_from(h: (f64, f64), i: (f64, f64)) -> MaterialPair {
    MaterialPair::unchecked(material_from_poisson(h.0, h.1).unwrap(), material_from_poisson(i.0, i.1).unwrap())
}

fn point(below: bool) -> impl Strategy<Value = Vec3> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.1..2.0f64).prop_map(move |(a, b, c)| Vec3::new(a, b, if below { -c } else { c }))
}

fn rel(a: &elastogreen::Mat3, b: &elastogreen::Mat3) -> f64 {
    (a - b).norm() / b.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kelvin_is_reciprocal(m in material(), x in point(true), y in point(false)) {
        let mat = material_from_poisson(m.0, m.1).unwrap();
        let a = kelvin_matrix(&x, &y, &mat).unwrap();
        let b = kelvin_matrix(&y, &x, &mat).unwrap().transpose();
        prop_assert!(rel(&a, &b) < 1e-14);
    }

    #[test]
    fn half_space_green_is_reciprocal_in_host(h in material(), i in material(), x in point(true), y in point(true)) {
        prop_assume!((x - y).norm() > 1e-3);
        let pair = pair_from(h, i);
        let a = gamma_plus(&x, &y, &pair).unwrap();
        let b = gamma_plus(&y, &x, &pair).unwrap().transpose();
        prop_assert!(rel(&a, &b) < 1e-10, "{}", rel(&a, &b));
    }

    #[test]
    fn half_space_green_is_reciprocal_across_interface(h in material(), i in material(), x in point(false), y in point(true)) {
        let green = BimaterialGreen::new(pair_from(h, i)).with_reflected_sources();
        let a = green.matrix(&x, &y).unwrap();
        let b = green.matrix(&y, &x).unwrap().transpose();
        prop_assert!(rel(&a, &b) < 1e-10, "{}", rel(&a, &b));
    }

    #[test]
    fn green_scales_inversely_with_distance(h in material(), i in material(), x in point(true), y in point(true), k in 0.1..10.0f64) {
        prop_assume!((x - y).norm() > 1e-3);
        let pair = pair_from(h, i);
        let a = gamma_plus(&(x * k), &(y * k), &pair).unwrap() * k;
        let b = gamma_plus(&x, &y, &pair).unwrap();
        prop_assert!(rel(&a, &b) < 1e-11);
    }

    #[test]
    fn hausdorff_is_symmetric_and_bounds_modified(r1 in 0.2..0.7f64, r2 in 0.2..0.7f64, cx in -0.15..0.15f64) {
        let g = Grid::new(25, -1.0, 1.0).unwrap();
        let a = VoxelSet::ball(g, Vec3::new(cx, 0.0, 0.0), r1);
        let b = VoxelSet::ball(g, Vec3::zeros(), r2);
        let dab = hausdorff_distance(&a, &b, DistanceMethod::Auto).unwrap();
        let dba = hausdorff_distance(&b, &a, DistanceMethod::Auto).unwrap();
        prop_assert_eq!(dab, dba);
        let m = modified_distance(&a, &b, DistanceMethod::Auto).unwrap();
        prop_assert!(m <= dab + 2.0 * a.voxel_diagonal());
    }

    #[test]
    fn reductions_do_not_depend_on_mode(n in 1usize..20_000, seed in 0u64..1000) {
        let f = |i: usize| ((i as u64 * 2654435761 + seed) % 1000) as f64 / 7.0 - 60.0;
        par::set_mode(Mode::Sequential);
        let s = par::sum_range(n, f);
        par::set_mode(Mode::Parallel);
        let p = par::sum_range(n, f);
        prop_assert_eq!(s.to_bits(), p.to_bits());
    }
}
