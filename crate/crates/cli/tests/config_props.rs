use dimer_coamoeba_cli::RunConfig;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #[test]
    fn config_round_trips(
        tol in 1e-12f64..1.0,
        residual in 1e-15f64..1e-3,
        radial in 1usize..2000,
        angular in 1usize..512,
        lo in 1e-6f64..1.0,
        span in 1.0001f64..1e6,
        steps in 1usize..100_000,
        re in -1e3f64..1e3,
        im in -1e3f64..1e3,
        ec2 in any::<bool>(),
    ) {
        let mut c = RunConfig::default();
        c.tolerance = tol;
        c.residual = residual;
        c.radial = radial;
        c.angular = angular;
        c.modulus_range = (lo, lo * span);
        c.steps = steps;
        c.collection = if ec2 { "ec2".into() } else { "ec".into() };
        c.params.insert("t".into(), Complex64::new(re, im));
        c.out_dir = "figs/out".into();
        prop_assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
    }
}
