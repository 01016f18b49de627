use proptest::prelude::*;

use dvpp_sfc::agc::allocate_sfc;
use dvpp_sfc::blocks::{BlockKind, LtiBlock};
use dvpp_sfc::dvpp::{compute_participation_factors, Dvpp, WindUnit};
use dvpp_sfc::gde::synthesize_three_phase;
use dvpp_sfc::network::TieLine;
use dvpp_sfc::scenario::{builtin_scenarios, EventSchedule};

fn block_kind() -> impl Strategy<Value = BlockKind> {
    prop_oneof![
        (0.1..5.0, 0.05..10.0).prop_map(|(gain, time_constant)| BlockKind::FirstOrderLag {
            gain,
            time_constant
        }),
        (0.1..5.0).prop_map(|gain| BlockKind::Integrator { gain }),
        (0.1..5.0, -2.0..10.0, 0.05..10.0).prop_map(|(gain, t_num, t_den)| BlockKind::LeadLag {
            gain,
            t_num,
            t_den
        }),
    ]
}

/// Factors that sum to one, with a nonzero last entry.
fn factors() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01..1.0f64, 1..7).prop_map(|w| {
        let s: f64 = w.iter().sum();
        let mut k: Vec<f64> = w.iter().map(|x| x / s).collect();
        let head: f64 = k[..k.len() - 1].iter().sum();
        let n = k.len();
        k[n - 1] = 1.0 - head;
        k
    })
}

proptest! {
    #[test]
    fn factors_sum_to_one_and_stay_in_range(p in prop::collection::vec(0.0..100.0f64, 1..8)) {
        let d = compute_participation_factors(&p).unwrap();
        prop_assert_eq!(d.len(), p.len());
        prop_assert!(d.iter().all(|x| (0.0..=1.0).contains(x)));
        if p.iter().sum::<f64>() > 0.0 {
            prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        } else {
            prop_assert!(d.iter().all(|x| *x == 0.0));
        }
    }

    #[test]
    fn allocation_conserves_the_command(cmd in -0.3..0.3f64, k in factors()) {
        let parts = allocate_sfc(cmd, &k).unwrap();
        prop_assert!((parts.iter().sum::<f64>() - cmd).abs() < 1e-15);
        for (p, f) in parts.iter().zip(&k) {
            prop_assert!((p - cmd * f).abs() < 1e-12);
        }
    }

    #[test]
    fn allocation_is_linear(a in -0.3..0.3f64, b in -0.3..0.3f64, k in factors()) {
        let pa = allocate_sfc(a, &k).unwrap();
        let pb = allocate_sfc(b, &k).unwrap();
        let pab = allocate_sfc(a + b, &k).unwrap();
        for i in 0..k.len() {
            prop_assert!((pab[i] - pa[i] - pb[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn blocks_superpose(
        kind in block_kind(),
        u1 in prop::collection::vec(-1.0..1.0f64, 50),
        u2 in prop::collection::vec(-1.0..1.0f64, 50),
        a in -2.0..2.0f64,
    ) {
        let run = |u: &dyn Fn(usize) -> f64| {
            let mut b = LtiBlock::new(kind).unwrap();
            (0..50).map(|k| b.advance(u(k), u(k + 1), 0.01).unwrap()).collect::<Vec<_>>()
        };
        let at = |v: &Vec<f64>, k: usize| v[k.min(v.len() - 1)];
        let y1 = run(&|k| at(&u1, k));
        let y2 = run(&|k| at(&u2, k));
        let y = run(&|k| a * at(&u1, k) + at(&u2, k));
        for k in 0..50 {
            prop_assert!((y[k] - a * y1[k] - y2[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn stable_blocks_settle_to_dc_gain(kind in block_kind(), u in -1.0..1.0f64) {
        let mut b = LtiBlock::new(kind).unwrap();
        if let Some(g) = b.dc_gain() {
            b.settle_at(u);
            let y = b.step(u, 0.01).unwrap();
            prop_assert!((y - g * u).abs() < 1e-12);
        }
    }

    #[test]
    fn three_phase_identities(v in 0.0..3.0f64, theta in -1e4..1e4f64) {
        let (a, b, c) = synthesize_three_phase(v, theta);
        prop_assert!((a + b + c).abs() < 1e-9);
        prop_assert!((a * a + b * b + c * c - 1.5 * v * v).abs() < 1e-9);
    }

    #[test]
    fn tie_flow_is_antisymmetric(dfs in prop::collection::vec((-0.1..0.1f64, -0.1..0.1f64), 1..50)) {
        let mut l = TieLine::new("t", 0, 1, 0.05).unwrap();
        for (f1, f2) in dfs {
            l.step(f1, f2, 0.01);
            prop_assert_eq!(l.export_from(0), -l.export_from(1));
            prop_assert_eq!(l.export_from(2), 0.0);
        }
    }

    #[test]
    fn plant_outputs_stay_within_headroom(
        cmds in prop::collection::vec(-10.0..10.0f64, 1..400),
        avail in 3.5..4.1f64,
    ) {
        let units = vec![
            WindUnit::new("a", 4.1, 3.5, avail, 0.5).unwrap(),
            WindUnit::new("b", 4.1, 3.5, 4.1, 0.5).unwrap(),
        ];
        let mut d = Dvpp::new(units, 0.1, 4.0).unwrap();
        for c in cmds {
            d.step(c, 0.01).unwrap();
            for u in d.units() {
                prop_assert!(u.p_out() >= 0.0 && u.p_out() <= u.headroom_ceiling() + 1e-12);
            }
            let df = d.d_filtered();
            prop_assert!((df.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn every_event_fires_once(dt in 0.001..0.2f64, name in prop::sample::select(vec!["nominal", "wt2-trip", "two-area", "short-circuit"])) {
        let cfg = builtin_scenarios().remove(name).unwrap();
        let mut sys = cfg.build_system().unwrap();
        let mut sched = EventSchedule::new(&cfg.events, &sys, dt).unwrap();
        let total = sched.pending();
        let mut fired = 0;
        for k in 0..=(cfg.duration / dt).ceil() as u64 {
            fired += sched.apply_due(k, &mut sys);
        }
        prop_assert_eq!(fired, total);
    }
}
