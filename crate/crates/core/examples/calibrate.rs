//! Recomputes the cloud-comparison thresholds stored in
//! `analysis::Thresholds::calibrated`.
//!
//! ```text
//! cargo run --release -p thermal-jcm --example calibrate
//! ```

use thermal_jcm::analysis::{
    calibrate_midpoint, cloud_distance, panel_betas, reflection_asymmetry, sample_trajectory, PointCloud,
    SamplingPlan,
};
use thermal_jcm::{ModelParams, SeriesConfig};

const N: u64 = 400_000;
const BINS: usize = 64;

fn cloud(l: u32, beta: f64, plan: &SamplingPlan) -> PointCloud {
    let p = ModelParams::normalized(l, beta).unwrap();
    PointCloud::from_frames(&sample_trajectory(&p, plan, &SeriesConfig::default()).unwrap())
}

fn main() {
    let plan = SamplingPlan::new(4.0, N);
    let scaled = plan.with_scale(1.2);
    let mut asym = Vec::new();
    println!("l  scale_dist  control_dist  midpoint  asymmetry");
    for l in 1..=4 {
        let (ba, bb) = panel_betas(l).unwrap();
        let base = cloud(l, ba, &plan);
        let d_scale = cloud_distance(&base, &cloud(l, ba, &scaled), BINS).unwrap();
        let d_ctrl = cloud_distance(&base, &cloud(l, bb, &plan), BINS).unwrap();
        let a = reflection_asymmetry(&base, BINS).unwrap();
        asym.push(a);
        println!(
            "{l}  {d_scale:.4}      {d_ctrl:.4}        {:.4}    {a:.4}",
            calibrate_midpoint(d_scale, d_ctrl)
        );
    }
    let symmetric = asym[0].max(asym[1]).max(asym[3]);
    println!("symmetry threshold: {:.4}", calibrate_midpoint(symmetric, asym[2]));
}
