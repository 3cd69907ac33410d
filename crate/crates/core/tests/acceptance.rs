//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! ```text
//! cargo test --release -p thermal-jcm --test acceptance
//! ```

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::SymmetricEigen;
use num_bigint::BigUint;
use thermal_jcm::analysis::{
    panel_betas, reflection_asymmetry, sample_trajectory_from, scale_invariance_check,
    weyl_discrepancy, weyl_sum_closed, weyl_sum_direct, zero_scan, EpsilonSchedule, PointCloud, SamplingPlan,
    Thresholds,
};
use thermal_jcm::diophantine::{
    blue_curves, bloch_at_q_pi, build_candidate_set, convergents, expand_surd, filter_candidates, Arithmetic,
    CandidateSet, CandidateSpec, FilterSpec,
};
use thermal_jcm::model::eigen_d;
use thermal_jcm::oracle::{build_c2, evolve_and_trace, BasisOrdering, FockTruncation};
use thermal_jcm::{BlochVector, ModelParams, SeriesConfig, ThermalSeries};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn big(s: &str) -> BigUint {
    s.parse().expect("decimal literal")
}

fn set_of(items: &[&str]) -> BTreeSet<BigUint> {
    items.iter().map(|s| big(s)).collect()
}

fn members(set: &CandidateSet) -> BTreeSet<BigUint> {
    set.members().cloned().collect()
}

// Filtered sets at beta = 2 recomputed independently with 120-digit
// arithmetic, for both evaluation modes of the filter cosines.
const L2_FLOAT64: &[&str] = &[
    "0", "15731042", "1117014753", "1934726305", "48199896002", "79315912984", "42037733184721",
    "57424611447841", "99462344632562", "156886956080403", "214311567528244", "2185153408467161",
    "17518018695676876157085", "3398405325496471121307213", "345573825847647202301571289328355",
];
const L2_CERTIFIED: &[&str] = &[
    "0", "15731042", "1117014753", "1934726305", "48199896002", "79315912984", "42037733184721",
    "57424611447841", "99462344632562", "114849222895682", "156886956080403", "214311567528244",
    "37746084314912758705537", "2265603550330980747538142", "3094872004656335742165753",
    "42631861976477576445474162255", "275576687858478528454426341217", "593785237693434633354326844689",
    "53460456908408730071670997389697", "1604407492489955336783484248535599",
    "608874652118118643505740145419712871135124",
];
const L1_FLOAT64: &[&str] = &[
    "0", "19601", "33461", "470832", "665857", "1136689", "1607521", "2744210", "3215042", "15994428",
    "18738638", "768398401", "10812186007", "21624372014", "44560482149", "126036076402", "152139002499",
    "627013566048", "8822750406821", "12477253282759", "21300003689580", "30122754096401", "51422757785981",
    "299713796309065",
];
const L1_CERTIFIED_EXTRA: &[&str] = &[
    "847718631141214", "1180872205318713601", "5616228332641321147898", "46292552162781456490001",
    "1572584048032918633353217", "53421565080956452077519377", "220167382952941249990598278",
    "1814760628704486452002305601",
];
const L4_FLOAT64: &[&str] = &[
    "0", "733831", "31622993", "63245986", "133957148", "236291303", "267914296", "299537289", "465117430",
    "567451585", "599074578", "701408733", "13888945017644", "80250321908183544", "160500643816367088",
    "862687519539670318898535192",
    "1993897912399885357671412394343531314226136204978318341499808204",
];
const L4_CERTIFIED_EXTRA: &[&str] = &[
    "1180338100274285475", "39480548439736446334", "632468516021498696744161",
    "9273853844735993106095069260699853880", "18547707689471986212190138521399707760",
    "20736967610227460801435597887129636001",
];
const L3_BOTH: &[&str] = &[
    "0", "20", "287", "307", "594", "614", "772", "1059", "1079", "1366", "1386", "1653", "1673", "1960", "1980",
];

fn criterion_1() -> Outcome {
    let goldens = [
        (3u64, 12usize, "3691", "2131"),
        (3, 13, "5042", "2911"),
        (3, 14, "13775", "7953"),
        (2, 12, "47321", "33461"),
        (2, 13, "114243", "80782"),
        (2, 14, "275807", "195025"),
    ];
    let mut bad = Vec::new();
    for (m, idx, p, q) in goldens {
        let c = convergents(&expand_surd(m, 1, idx).unwrap());
        let got = &c[idx];
        if got.index != idx || got.p != big(p) || got.q != big(q) {
            bad.push(format!("sqrt{m}({idx}) = {}/{}", got.p, got.q));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "6/6 convergents exact".into() } else { bad.join("; ") })
}

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (l, want) in [(2u32, 243usize), (1, 91), (4, 323)] {
        let n = build_candidate_set(&CandidateSpec::published(l).unwrap()).unwrap().len();
        pass &= n == want;
        parts.push(format!("l={l}: {n} (want {want})"));
    }
    let m3 = build_candidate_set(&CandidateSpec::published(3).unwrap()).unwrap();
    let want3: BTreeSet<BigUint> = (0u32..=2000).map(BigUint::from).collect();
    let ok3 = members(&m3) == want3;
    pass &= ok3;
    parts.push(format!("l=3: {{0..=2000}} {}", if ok3 { "exact" } else { "MISMATCH" }));
    outcome(pass, parts.join(", "))
}

fn criterion_3() -> Outcome {
    let cases: [(u32, f64, Vec<&str>, Vec<&str>, Vec<&str>); 4] = [
        (2, 0.05, L2_FLOAT64.to_vec(), L2_CERTIFIED.to_vec(), vec!["0", "15731042", "1117014753"]),
        (
            1,
            0.0035,
            L1_FLOAT64.to_vec(),
            L1_FLOAT64.iter().chain(L1_CERTIFIED_EXTRA).copied().collect(),
            vec!["0", "19601", "33461", "470832"],
        ),
        (
            4,
            0.04,
            L4_FLOAT64.to_vec(),
            L4_FLOAT64[..13].iter().chain(L4_CERTIFIED_EXTRA).copied().collect(),
            vec![],
        ),
        (3, 0.003, L3_BOTH.to_vec(), L3_BOTH.to_vec(), vec![]),
    ];
    let published = [(2u32, 15usize), (1, 24), (4, 17), (3, 15)];
    let mut pass = true;
    let mut parts = Vec::new();
    let cutoff = BigUint::from(1_000_000_000_000u64);
    for ((l, eps, float_set, cert_set, listed), (_, want)) in cases.into_iter().zip(published) {
        let params = ModelParams::normalized(l, 2.0).unwrap();
        let mset = build_candidate_set(&CandidateSpec::published(l).unwrap()).unwrap();
        let spec = FilterSpec::new(2.0, eps);
        let f64_set = members(&filter_candidates(&mset, &params, &spec.with_arithmetic(Arithmetic::Float64)).unwrap());
        let cert = members(&filter_candidates(&mset, &params, &spec).unwrap());
        let published_ok = f64_set.len() == want && set_of(&listed).is_subset(&f64_set) && f64_set == set_of(&float_set);
        let cert_ok = cert == set_of(&cert_set);
        let small = |s: &BTreeSet<BigUint>| s.iter().filter(|q| **q < cutoff).cloned().collect::<BTreeSet<_>>();
        let agree = small(&f64_set) == small(&cert);
        pass &= published_ok && cert_ok && agree;
        parts.push(format!(
            "l={l}: float64 {} (want {want}){}, certified {}{}{}",
            f64_set.len(),
            if published_ok { "" } else { " MISMATCH" },
            cert.len(),
            if cert_ok { "" } else { " MISMATCH vs 120-digit reference" },
            if agree { "" } else { ", modes DISAGREE below 1e12" },
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_4() -> Outcome {
    let cfg = SeriesConfig::default();
    let starts = [BlochVector::PLUS_X, BlochVector::new(0.3, -0.4, 0.5)];
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for l in 1..=4 {
        for beta in [0.5, 1.0, 2.0, 5.0] {
            let p = ModelParams::normalized(l, beta).unwrap();
            let series = ThermalSeries::new(&p, &cfg).unwrap();
            let trunc = FockTruncation::for_params(&p, 1e-12).unwrap();
            for t in [0.5, 1.0, 5.0, 20.0, 40.0] {
                for s0 in &starts {
                    let model = series.bloch(s0, t);
                    let oracle = evolve_and_trace(s0, &p, t, &trunc, BasisOrdering::AtomMajor).unwrap();
                    let d = model.max_abs_diff(&oracle);
                    if d > worst {
                        worst = d;
                        at = format!("l={l} beta={beta} t={t}");
                    }
                }
            }
        }
    }
    outcome(worst <= 1e-8, format!("max |model - oracle| = {worst:.2e} at {at} (tol 1e-8)"))
}

fn criterion_5() -> Outcome {
    let p = ModelParams::normalized(2, 1.0).unwrap();
    let d: Vec<f64> = (0..3).map(|n| eigen_d(n, &p)).collect();
    let golden_ok = d == [2.0, 6.0, 12.0];
    let mut worst: f64 = 0.0;
    for l in 1..=4 {
        let p = ModelParams::normalized(l, 1.0).unwrap();
        let trunc = FockTruncation { n_max: 24, tolerance: 1.0 };
        let c = build_c2(&p, &trunc, BasisOrdering::PhotonMajor);
        let mut got: Vec<f64> = SymmetricEigen::new(&c * &c).eigenvalues.iter().copied().collect();
        got.sort_by(f64::total_cmp);
        let l = l as usize;
        let mut want: Vec<f64> = vec![0.0; 2 * l];
        for n in 0..=(trunc.n_max - l) as u64 {
            want.extend([eigen_d(n, &p); 2]);
        }
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            worst = worst.max((g - w).abs() / w.max(1.0));
        }
    }
    outcome(
        golden_ok && worst <= 1e-10,
        format!("D_0..2 = {d:?}; eig(C2^2) vs D_n max rel. error {worst:.1e} (tol 1e-10)"),
    )
}

fn cloud(l: u32, beta: f64, plan: &SamplingPlan, s0: &BlochVector) -> PointCloud {
    let p = ModelParams::normalized(l, beta).unwrap();
    PointCloud::from_frames(&sample_trajectory_from(s0, &p, plan, &SeriesConfig::default()).unwrap())
}

const CLOUD_N: u64 = 400_000;
const BINS: usize = 64;

fn criterion_6() -> Outcome {
    let plan = SamplingPlan::new(4.0, CLOUD_N).with_scale(1.2);
    let mut pass = true;
    let mut parts = Vec::new();
    for l in 1..=4 {
        let (ba, bb) = panel_betas(l).unwrap();
        let thr = Thresholds::calibrated(l).unwrap().scale_invariance;
        let p = ModelParams::normalized(l, ba).unwrap();
        let r = scale_invariance_check(&p, &plan, &SeriesConfig::default(), BINS, thr, bb).unwrap();
        pass &= r.pass && r.control_pass;
        parts.push(format!(
            "l={l}: d={:.3} ctrl={:.3} thr={:.3}{}",
            r.distance,
            r.control_distance,
            thr,
            if r.pass && r.control_pass { "" } else { " FAIL" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let plan = SamplingPlan::new(4.0, CLOUD_N);
    let mut pass = true;
    let mut parts = Vec::new();
    for l in 1..=4 {
        let (ba, _) = panel_betas(l).unwrap();
        let thr = Thresholds::calibrated(l).unwrap().symmetry;
        let c = cloud(l, ba, &plan, &BlochVector::PLUS_X);
        let a = reflection_asymmetry(&c, BINS).unwrap();
        let ok = if l == 3 { a > thr } else { a < thr };
        pass &= ok;
        parts.push(format!("l={l}: {a:.3}{}", if ok { "" } else { " FAIL" }));
        if l == 3 {
            let union = c.union(&cloud(l, ba, &plan, &BlochVector::MINUS_X));
            let u = reflection_asymmetry(&union, BINS).unwrap();
            pass &= u < thr;
            parts.push(format!("l=3 union: {u:.3}{}", if u < thr { "" } else { " FAIL" }));
        }
    }
    let thr = Thresholds::calibrated(1).unwrap().symmetry;
    outcome(pass, format!("{} (thr {thr:.3})", parts.join(", ")))
}

fn criterion_8() -> Outcome {
    let step = 4.0;
    let sizes = [10_000u64, 100_000, 1_000_000];
    let mut worst_diff: f64 = 0.0;
    let mut maxima = Vec::new();
    let mut bound_ok = true;
    for &n in &sizes {
        let terms = n + 1;
        for m in (-8i64..=8).filter(|&m| m != 0) {
            let d = weyl_sum_direct(step, terms, m);
            let c = weyl_sum_closed(step, terms, m).unwrap();
            worst_diff = worst_diff.max((d - c).norm() / terms as f64);
        }
        let r = weyl_discrepancy(&SamplingPlan::new(step, n), 8).unwrap();
        let min_gap = (1..=8)
            .map(|m| (num_complex::Complex64::new(1.0, 0.0) - num_complex::Complex64::from_polar(1.0, m as f64 * step)).norm())
            .fold(f64::INFINITY, f64::min);
        bound_ok &= r.max <= 10.0 / (n as f64 * min_gap);
        maxima.push(r.max);
    }
    // Least-squares slope of log(max) against log(N).
    let xs: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = maxima.iter().map(|m| m.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let slope_ok = (-1.15..=-0.85).contains(&slope);
    outcome(
        worst_diff <= 1e-12 && slope_ok && bound_ok,
        format!(
            "direct vs closed {worst_diff:.1e} (tol 1e-12); max |sum| = {:.2e}, {:.2e}, {:.2e}; slope {slope:.3} (want -1 +- 0.15); geometric bound {}",
            maxima[0],
            maxima[1],
            maxima[2],
            if bound_ok { "holds" } else { "VIOLATED" }
        ),
    )
}

fn criterion_9() -> Outcome {
    let l = 2;
    let beta = 2.0;
    let cfg = SeriesConfig::default();
    let params = ModelParams::normalized(l, beta).unwrap();
    let spec = FilterSpec::new(beta, FilterSpec::published_epsilon(l).unwrap());
    let mset = build_candidate_set(&CandidateSpec::published(l).unwrap()).unwrap();
    let mtilde = filter_candidates(&mset, &params, &spec).unwrap();
    let bound = spec.implied_sz_bound(l);
    let mut worst_sz: f64 = 0.0;
    for q in mtilde.members() {
        worst_sz = worst_sz.max(bloch_at_q_pi(q, &params, 1, &cfg).unwrap().sz.abs());
    }
    let bound_ok = worst_sz < bound;

    let sched = EpsilonSchedule::published(l).unwrap();
    let hits = zero_scan(&params, &SamplingPlan::new(4.0, 0), &sched, &[beta], &cfg).unwrap();
    let curves = blue_curves(&mtilde, &[params], 1, &cfg).unwrap();
    let red: Vec<f64> = hits.iter().map(|h| h.sx).collect();
    let nearest = |x: f64| red.iter().map(|r| (r - x).abs()).fold(f64::INFINITY, f64::min);
    // Blue points carry |S_z| up to the filter epsilon, red points up to the
    // scan epsilon, so blue values are matched to the red bands at the
    // filter's epsilon scale.
    let band = spec.epsilon;
    let in_band = curves.iter().all(|c| nearest(c.sx) < band);
    let close = 1e-3;
    let crossings = curves.iter().filter(|c| c.q != BigUint::from(0u32) && nearest(c.sx) < close).count();
    let covered = red.iter().filter(|&&r| curves.iter().any(|c| (c.sx - r).abs() < close)).count();
    let strict_subset = covered < red.len();
    outcome(
        bound_ok && in_band && crossings > 0 && strict_subset && !red.is_empty(),
        format!(
            "|M~| = {}, max |S_z(q pi)| = {worst_sz:.4} < {bound:.4}; {} red hits; all blue S_x within {band} of red; \
             {crossings} nonzero q within {close:.0e} of a red point; {covered}/{} red points on blue curves",
            mtilde.len(),
            red.len(),
            red.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("continued-fraction goldens", criterion_1),
        ("candidate-set cardinalities", criterion_2),
        ("filtered-set reproduction", criterion_3),
        ("oracle equivalence", criterion_4),
        ("D/D' goldens and C2^2 spectrum", criterion_5),
        ("scale invariance", criterion_6),
        ("reflection symmetry", criterion_7),
        ("Weyl equidistribution", criterion_8),
        ("zero-scan / blue-curve consistency", criterion_9),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if let Some(f) = &filter {
            if !name.contains(f.as_str()) && *f != id.to_string() {
                continue;
            }
        }
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {id} [{}] {name} ({:.1}s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
