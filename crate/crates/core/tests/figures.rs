use spintomo::figures::*;
use spintomo::kernels::{delta_kernel_trace, kernel_trace, KernelPoint};
use spintomo::tomography::PhasePoint;
use spintomo::*;
use std::f64::consts::{PI, TAU};

#[test]
fn ids_round_trip() {
    for id in FigureId::ALL {
        assert_eq!(id.to_string().parse::<FigureId>().unwrap(), id);
    }
    assert!("fig2".parse::<FigureId>().is_err());
}

#[test]
fn fixed_axes_are_unit() {
    for id in FigureId::ALL {
        for (_, n) in FigureSpec::of(id).fixed {
            let c = n.cartesian();
            assert!((c[0] * c[0] + c[1] * c[1] + c[2] * c[2] - 1.0).abs() < 1e-15);
        }
    }
}

#[test]
fn coarse_grids_match_traces() {
    for id in FigureId::ALL {
        let spec = FigureSpec::of(id);
        let g = figure_grid(&spec, 7, 9).unwrap();
        assert_eq!(g.rows.len(), 63);
        for r in &g.rows {
            let n1 = UnitAxis::new(r.theta1, r.phi1).unwrap();
            let x1 = PhasePoint::from_twice(spec.twice_m1, n1);
            let expected = match spec.kernel {
                FigureKernel::Delta => {
                    let (m2, n2) = spec.fixed[0];
                    delta_kernel_trace(spec.spin, &PhasePoint::from_twice(m2, n2), &x1)
                }
                FigureKernel::Star => {
                    let (m3, n3) = spec.fixed[0];
                    let (m2, n2) = spec.fixed[1];
                    let p = KernelPoint::new(PhasePoint::from_twice(m3, n3), PhasePoint::from_twice(m2, n2), x1);
                    kernel_trace(spec.spin, &p)
                }
            };
            assert!((Complex64::new(r.re, r.im) - expected).norm() < 1e-10, "{id}");
        }
    }
}

#[test]
fn grid_endpoints() {
    let (t, p) = grid_angles(90, 180).unwrap();
    assert_eq!(t[0], 0.0);
    assert_eq!(t[89], PI);
    assert!(p[179] < TAU);
    assert!(grid_angles(1, 5).is_err());
}
