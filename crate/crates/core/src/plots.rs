//! Plain-file plots: CSV tables and an SVG of `S(φ)` on the unit circle.

use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::analysis::AnalysisReport;
use crate::atinfinity::{self, CircleValueClusterSet};
use crate::error::Result;

pub fn clusters_csv(set: &CircleValueClusterSet) -> String {
    let mut s = String::from("re,im,angle_deg,members,final_spread,accepted\n");
    for (c, accepted) in set
        .clusters
        .iter()
        .map(|c| (c, true))
        .chain(set.transient.iter().map(|c| (c, false)))
    {
        let spread = c.spread_per_radius.last().map(|p| p.1).unwrap_or(0.0);
        let _ = writeln!(
            s,
            "{:.12},{:.12},{:.9},{},{:.3e},{}",
            c.center.re,
            c.center.im,
            c.angle_degrees(),
            c.member_count,
            spread,
            accepted
        );
    }
    s
}

/// Unit circle with accepted clusters as filled dots and transient ones as
/// open circles.
pub fn circle_svg(set: &CircleValueClusterSet, title: &str) -> String {
    let (w, r, c) = (400.0, 150.0, 200.0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w}" viewBox="0 0 {w} {w}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<line x1="20" y1="{c}" x2="380" y2="{c}" stroke="silver"/>"#);
    let _ = writeln!(s, r#"<line x1="{c}" y1="20" x2="{c}" y2="380" stroke="silver"/>"#);
    let _ = writeln!(s, r#"<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="black"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="10" y="16" font-family="monospace" font-size="12">{}</text>"#,
        escape(title)
    );
    for cl in &set.clusters {
        let (x, y) = (c + r * cl.center.re, c - r * cl.center.im);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="5" fill="crimson"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-family="monospace" font-size="11">{:.2}°</text>"#,
            x + 8.0,
            y - 6.0,
            cl.angle_degrees()
        );
    }
    for cl in &set.transient {
        let (x, y) = (c + r * cl.center.re, c - r * cl.center.im);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="none" stroke="gray"/>"#
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes `s_phi_clusters.csv`, `s_phi_circle.svg` and one
/// `flow_<k>.csv` per traced path into `dir`.
pub fn emit_plots(report: &AnalysisReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let p = dir.join("s_phi_clusters.csv");
    fs::write(&p, clusters_csv(&report.s_phi))?;
    written.push(p);
    let p = dir.join("s_phi_circle.svg");
    fs::write(&p, circle_svg(&report.s_phi, &format!("S(phi) estimate: {}", report.input.name)))?;
    written.push(p);
    for (k, path) in report.flow_paths.iter().enumerate() {
        let p = dir.join(format!("flow_{k}.csv"));
        let mut out = BufWriter::new(fs::File::create(&p)?);
        atinfinity::write_csv(path, &mut out)?;
        written.push(p);
    }
    Ok(written)
}
