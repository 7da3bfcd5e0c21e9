//! CSV and SVG output for sweeps and benchmark histograms.

use super::benchmark::RunReport;
use super::sweep::{Parameter, SweepPoint};

/// `parameter,value,ba`, one row per point.
pub fn sweep_csv(parameter: Parameter, points: &[SweepPoint]) -> String {
    let mut out = String::from("parameter,value,ba\n");
    for p in points {
        out.push_str(&format!("{},{},{}\n", parameter.symbol(), p.value, p.ba));
    }
    out
}

const W: f64 = 480.0;
const H: f64 = 320.0;
const PAD: f64 = 40.0;

fn frame(title: &str, body: &str, x_label: &str, y_label: &str) -> String {
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
            "<text x=\"{cx}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>\n",
            "<line x1=\"{p}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n",
            "<line x1=\"{p}\" y1=\"{p}\" x2=\"{p}\" y2=\"{b}\" stroke=\"black\"/>\n",
            "<text x=\"{cx}\" y=\"{xl}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{x_label}</text>\n",
            "<text x=\"12\" y=\"{cy}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 12 {cy})\">{y_label}</text>\n",
            "{body}</svg>\n"
        ),
        w = W,
        h = H,
        cx = W / 2.0,
        cy = H / 2.0,
        p = PAD,
        b = H - PAD,
        r = W - PAD,
        xl = H - 8.0,
        title = title,
        x_label = x_label,
        y_label = y_label,
        body = body,
    )
}

/// Line plot of balanced accuracy against the swept parameter.
pub fn sweep_svg(parameter: Parameter, points: &[SweepPoint]) -> String {
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.value), hi.max(p.value))
        });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let x = |v: f64| PAD + (v - lo) / span * (W - 2.0 * PAD);
    let y = |ba: f64| H - PAD - ba * (H - 2.0 * PAD);
    let path: Vec<String> = points
        .iter()
        .map(|p| format!("{:.2},{:.2}", x(p.value), y(p.ba)))
        .collect();
    let mut body = format!(
        "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>\n",
        path.join(" ")
    );
    for p in points {
        body.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>\n",
            x(p.value),
            y(p.ba)
        ));
    }
    frame(
        &format!("Balanced accuracy vs {}", parameter.symbol()),
        &body,
        parameter.symbol(),
        "BA",
    )
}

/// Bar chart of the relative-frequency histogram of a run.
pub fn histogram_svg(report: &RunReport) -> String {
    let bins = report.histogram.len().max(1) as f64;
    let peak = report
        .histogram
        .iter()
        .copied()
        .fold(0.0, f64::max)
        .max(1e-12);
    let bw = (W - 2.0 * PAD) / bins;
    let mut body = String::new();
    for (i, f) in report.histogram.iter().enumerate() {
        let h = f / peak * (H - 2.0 * PAD);
        body.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"steelblue\" stroke=\"white\"/>\n",
            PAD + i as f64 * bw,
            H - PAD - h,
            bw,
            h
        ));
    }
    let title = format!(
        "BA {:.2}% ± {:.2} (n = {})",
        report.mean * 100.0,
        report.std_dev * 100.0,
        report.ba.len()
    );
    frame(&title, &body, "balanced accuracy", "relative frequency")
}
