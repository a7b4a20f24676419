//! CSV schemas for search results, contour maps, and simulation traces.
//! Writers and strict readers live together so the schema stays in one place.

use anyhow::{bail, Context, Result};
use rollgait_core::search::ScoredDesign;
use rollgait_core::sim::{SimTrace, TraceRecord};
use rollgait_core::statics::MomentField;
use std::path::Path;

pub const RESULTS_HEADER: &str = "seed,j1,j2,max_radius,com_y,com_z,joint_y,joint_z,design_path";
pub const CONTOUR_HEADER: &str = "theta,dphi,arm_front,arm_rear";
pub const TRACE_HEADER: &str = "t,theta_g,omega,com_y,com_z,leg_front,leg_rear,cmd_front,cmd_rear,duty_front,duty_rear,theta_hat,state,contact_leg,contact_y,contact_z,event";

pub fn write_results_csv(
    path: &Path,
    scored: &[ScoredDesign],
    design_paths: &[String],
) -> Result<()> {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for (s, dp) in scored.iter().zip(design_paths) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.seed,
            s.score.j1,
            s.score.j2,
            s.score.max_leg_radius,
            s.design.body.com_offset.y,
            s.design.body.com_offset.z,
            s.design.body.joint_offset.y,
            s.design.body.joint_offset.z,
            dp
        ));
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn write_contour_csv(path: &Path, field: &MomentField) -> Result<()> {
    let mut out = String::from(CONTOUR_HEADER);
    out.push('\n');
    for (i, th) in field.theta.iter().enumerate() {
        for (j, d) in field.dphi.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                th, d, field.arm_front[i][j], field.arm_rear[i][j]
            ));
        }
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn write_trace_csv(path: &Path, trace: &SimTrace) -> Result<()> {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in &trace.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{:?},{},{},{}\n",
            r.t,
            r.theta_g,
            r.omega,
            r.com_y,
            r.com_z,
            r.leg_front,
            r.leg_rear,
            r.cmd_front,
            r.cmd_rear,
            r.duty_front,
            r.duty_rear,
            r.theta_hat,
            r.state,
            r.contact_leg,
            r.contact_y,
            r.contact_z,
            r.event.replace(',', ";")
        ));
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Strict trace reader: the header must match the shipped schema exactly.
pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRecord>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != TRACE_HEADER {
        bail!("{}: unexpected trace header '{header}'", path.display());
    }
    let mut records = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 17 {
            bail!("{}:{}: expected 17 fields, got {}", path.display(), ln + 2, f.len());
        }
        let num = |i: usize| -> Result<f64> {
            f[i].parse::<f64>()
                .with_context(|| format!("{}:{}: field {}", path.display(), ln + 2, i))
        };
        records.push(TraceRecord {
            t: num(0)?,
            theta_g: num(1)?,
            omega: num(2)?,
            com_y: num(3)?,
            com_z: num(4)?,
            leg_front: num(5)?,
            leg_rear: num(6)?,
            cmd_front: num(7)?,
            cmd_rear: num(8)?,
            duty_front: num(9)?,
            duty_rear: num(10)?,
            theta_hat: num(11)?,
            state: f[12].to_string(),
            contact_leg: if f[13] == "Rear" {
                rollgait_core::geometry::Side::Rear
            } else {
                rollgait_core::geometry::Side::Front
            },
            contact_y: num(14)?,
            contact_z: num(15)?,
            event: f[16].to_string(),
        });
    }
    Ok(records)
}
