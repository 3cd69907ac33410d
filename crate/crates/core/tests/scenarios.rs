use num_bigint::BigUint;
use thermal_jcm::analysis::{log_beta_grid, sample_trajectory, zero_scan, EpsilonSchedule, SamplingPlan};
use thermal_jcm::diophantine::{blue_curves, CandidateSet, Source};
use thermal_jcm::oracle::{evolve_and_trace, oracle_a_elements, BasisOrdering, FockTruncation};
use thermal_jcm::{a_elements, BlochVector, Error, ModelParams, SeriesConfig};

// Reference values from an independent dense matrix exponential (80 photons).
#[test]
fn frozen_matrix_elements() {
    let cfg = SeriesConfig::default();
    let cases = [
        (2, 1.0, 1.0, [2.42251346143736224e-01, 1.02550128691799636e-01, -9.59595626280036751e-02]),
        (3, 2.0, 5.0, [8.59773864380438235e-01, 3.47585838892494614e-04, 9.22556358709701763e-01]),
    ];
    for (l, beta, t, [a00, a11, a01]) in cases {
        let p = ModelParams::normalized(l, beta).unwrap();
        let a = a_elements(t, &p, &cfg).unwrap();
        let o = oracle_a_elements(&p, t, &FockTruncation::for_params(&p, 1e-14).unwrap()).unwrap();
        for got in [a, o] {
            assert!((got.a0000 - a00).abs() < 1e-12, "l={l}: {got:?}");
            assert!((got.a1100 - a11).abs() < 1e-12, "l={l}: {got:?}");
            assert!((got.a0101 - a01).abs() < 1e-12, "l={l}: {got:?}");
        }
    }
}

// With the field in vacuum the excited-atom component still exchanges
// energy with the field, so the reduced state is mixed:
// S(t) = (cos t, 0, -sin^2 t) for l = 1.
#[test]
fn zero_temperature_is_vacuum_rabi() {
    let p = ModelParams::normalized(1, f64::INFINITY).unwrap();
    let frames = sample_trajectory(&p, &SamplingPlan::new(4.0, 500), &SeriesConfig::default()).unwrap();
    let trunc = FockTruncation::for_params(&p, 1e-12).unwrap();
    for f in frames.iter().step_by(50) {
        let want = BlochVector::new(f.t.cos(), 0.0, -f.t.sin().powi(2));
        assert!(f.bloch.max_abs_diff(&want) < 1e-12);
        let o = evolve_and_trace(&BlochVector::PLUS_X, &p, f.t, &trunc, BasisOrdering::AtomMajor).unwrap();
        assert!(f.bloch.max_abs_diff(&o) < 1e-12);
    }
}

#[test]
fn scan_always_reports_origin() {
    let p = ModelParams::normalized(2, 1.0).unwrap();
    let sched = EpsilonSchedule { n0: 1000, ..EpsilonSchedule::published(2).unwrap() };
    let grid = log_beta_grid(5, 0.5, 5.0).unwrap();
    let hits = zero_scan(&p, &SamplingPlan::new(4.0, 0), &sched, &grid, &SeriesConfig::default()).unwrap();
    for beta in grid {
        let h = hits.iter().find(|h| h.beta == beta && h.n == 0).expect("origin hit");
        assert!((h.sx - 1.0).abs() < 1e-12);
    }
    assert!(matches!(
        zero_scan(&p, &SamplingPlan::new(4.0, 0), &sched, &[0.4], &SeriesConfig::default()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn l1_curve_crosses_red_points() {
    let cfg = SeriesConfig::default();
    let p = ModelParams::normalized(1, 3.5).unwrap();
    let sched = EpsilonSchedule::published(1).unwrap();
    let hits = zero_scan(&p, &SamplingPlan::new(4.0, 0), &sched, &[3.5], &cfg).unwrap();
    let mut set = CandidateSet::new();
    set.insert(BigUint::from(19_601u32), Source::Enumerated);
    let curve = blue_curves(&set, &[p], 1, &cfg).unwrap();
    let sx = curve[0].sx;
    let nearest = hits.iter().map(|h| (h.sx - sx).abs()).fold(f64::INFINITY, f64::min);
    assert!(nearest < 1e-3, "S_x(19601 pi) = {sx}, nearest red point {nearest}");
}
