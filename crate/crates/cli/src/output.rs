//! CSV, report and plot-script writers.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rollsim_core::integrate::{Channel, Trajectory};

use crate::run::{RunOutput, RunReport};

/// CSV columns after `t`, in order.
pub const CSV_CHANNELS: [Channel; 11] = [
    Channel::Theta,
    Channel::SphereVelocity,
    Channel::Gamma,
    Channel::CoreVelocity,
    Channel::Tau,
    Channel::Energy,
    Channel::SphereY,
    Channel::CoreY,
    Channel::CoreZ,
    Channel::MomentumY,
    Channel::MomentumZ,
];

pub const CSV_HEADER: &str = "t,theta,theta_dot,gamma,gamma_dot,tau,energy,sphere_y,core_y,core_z,p_y,p_z";

/// Every value in `{:.16e}` (17 significant digits), LF line endings.
pub fn csv_string(traj: &Trajectory) -> String {
    let mut out = String::with_capacity((traj.len() + 1) * 12 * 24);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for i in 0..traj.len() {
        write!(out, "{:.16e}", traj.times[i]).unwrap();
        for ch in CSV_CHANNELS {
            write!(out, ",{:.16e}", traj.value(ch, i)).unwrap();
        }
        out.push('\n');
    }
    out
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), |v| format!("{v:.6}"))
}

pub fn render_text(report: &RunReport) -> String {
    let mut s = String::new();
    let f = &report.final_state;
    writeln!(s, "scenario      {}", report.scenario).unwrap();
    writeln!(s, "model         {:?}", report.model).unwrap();
    writeln!(s, "samples       {} (to t = {} s)", report.samples, report.t_end).unwrap();
    writeln!(
        s,
        "final state   theta {:.6}  theta_dot {:.6}  gamma {:.6}  gamma_dot {:.6}",
        f.theta, f.theta_dot, f.gamma, f.gamma_dot
    )
    .unwrap();
    writeln!(s, "displacement  {:.6} rad", report.displacement).unwrap();
    writeln!(s, "energy        {:.9} -> {:.9} J", report.energy_start, report.energy_end).unwrap();
    for r in &report.ripple {
        writeln!(
            s,
            "ripple        {:<16} window [{}, {}]  mean {:.6}  uphill {:.6}  downhill {:.6}  ratio {}  crossings {}",
            r.channel.name(),
            r.window.0,
            r.window.1,
            r.mean,
            r.uphill_amplitude,
            r.downhill_amplitude,
            fmt_opt(r.ratio),
            r.mean_crossings
        )
        .unwrap();
    }
    for st in &report.settle {
        writeln!(s, "settle        {:<16} |x| < {}  t = {}", st.channel.name(), st.threshold, fmt_opt(st.time))
            .unwrap();
    }
    if let Some(w) = &report.waving {
        writeln!(
            s,
            "waving        {}  (peak-to-peak {:.6} / |mean| {:.6} = {:.3}, {} crossings)",
            if w.waving { "yes" } else { "no" },
            w.peak_to_peak,
            w.mean.abs(),
            w.excursion_ratio,
            w.mean_crossings
        )
        .unwrap();
    }
    for n in &report.notes {
        writeln!(s, "note          {n}").unwrap();
    }
    s
}

/// Gnuplot script with a displacement panel over a velocity panel.
pub fn plot_script(name: &str, csv_file: &str) -> String {
    format!(
        r#"# {name}: displacement and velocity panels
# gnuplot -e "outfile='{name}.png'" {name}.gp
if (!exists("outfile")) outfile = "{name}.png"
set terminal pngcairo size 900,900
set output outfile
set datafile separator ","
set key autotitle columnhead
set grid
set multiplot layout 2,1 title "{name}"
set ylabel "rad"
plot "{csv_file}" using 1:2 with lines title "theta", \
     "" using 1:4 with lines title "gamma"
set xlabel "t (s)"
set ylabel "rad/s"
plot "{csv_file}" using 1:3 with lines title "theta_dot", \
     "" using 1:5 with lines title "gamma_dot"
unset multiplot
"#
    )
}

#[derive(Debug, Clone)]
pub struct Artifacts {
    pub csv: PathBuf,
    pub report_text: PathBuf,
    pub report_json: PathBuf,
    pub plot: PathBuf,
}

pub fn write_trajectory_csv(dir: &Path, file: &str, traj: &Trajectory) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(file);
    fs::write(&path, csv_string(traj))?;
    Ok(path)
}

pub fn write_run(dir: &Path, output: &RunOutput) -> io::Result<Artifacts> {
    let name = &output.report.scenario;
    let csv_name = format!("{name}.csv");
    let csv = write_trajectory_csv(dir, &csv_name, &output.trajectory)?;
    let report_text = dir.join(format!("{name}_report.txt"));
    fs::write(&report_text, render_text(&output.report))?;
    let report_json = dir.join(format!("{name}_report.json"));
    let json = serde_json::to_string_pretty(&output.report).map_err(io::Error::other)?;
    fs::write(&report_json, json + "\n")?;
    let plot = dir.join(format!("{name}.gp"));
    fs::write(&plot, plot_script(name, &csv_name))?;
    Ok(Artifacts { csv, report_text, report_json, plot })
}
