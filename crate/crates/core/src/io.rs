//! Versioned file formats.
//!
//! Design and controller files are self-describing JSON with explicit unit
//! tags. Internal math is SI (meters, radians); files written by this module
//! carry `"m"`/`"rad"` tags so a load→save round trip is value-identical,
//! and loaders accept `"mm"`/`"deg"` for hand-authored inputs.

use crate::control::ControllerConfig;
use crate::error::{Error, Result};
use crate::geometry::RobotDesign;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DESIGN_FORMAT_VERSION: &str = "1";
pub const CONTROLLER_FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize, Deserialize)]
struct UnitTags {
    length: String,
    angle: String,
}

impl Default for UnitTags {
    fn default() -> Self {
        UnitTags {
            length: "m".into(),
            angle: "rad".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DesignFile {
    format_version: String,
    units: UnitTags,
    design: RobotDesign,
}

fn length_scale(tag: &str) -> Result<f64> {
    match tag {
        "m" => Ok(1.0),
        "mm" => Ok(1e-3),
        other => Err(Error::Format(format!("unknown length unit '{other}'"))),
    }
}

fn angle_scale(tag: &str) -> Result<f64> {
    match tag {
        "rad" => Ok(1.0),
        "deg" => Ok(std::f64::consts::PI / 180.0),
        other => Err(Error::Format(format!("unknown angle unit '{other}'"))),
    }
}

fn rescale_design(design: &mut RobotDesign, ls: f64, asc: f64) {
    if ls == 1.0 && asc == 1.0 {
        return;
    }
    let b = &mut design.body;
    b.width *= ls;
    b.height *= ls;
    b.com_offset = b.com_offset * ls;
    b.joint_offset = b.joint_offset * ls;
    b.body_inertia *= ls * ls;
    for leg in [&mut design.front_leg, &mut design.rear_leg] {
        for p in &mut leg.keypoints {
            *p = *p * ls;
        }
        for r in &mut leg.radius {
            *r *= ls;
        }
        for a in &mut leg.phi {
            *a *= asc;
        }
        leg.dphi_range = (leg.dphi_range.0 * asc, leg.dphi_range.1 * asc);
    }
}

/// Serialize a design with SI unit tags.
pub fn design_to_json(design: &RobotDesign) -> Result<String> {
    let file = DesignFile {
        format_version: DESIGN_FORMAT_VERSION.into(),
        units: UnitTags::default(),
        design: design.clone(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Parse a design file, honoring its unit tags and validating invariants.
pub fn design_from_json(text: &str) -> Result<RobotDesign> {
    let file: DesignFile = serde_json::from_str(text)?;
    if file.format_version != DESIGN_FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported design format version '{}'",
            file.format_version
        )));
    }
    let mut design = file.design;
    rescale_design(
        &mut design,
        length_scale(&file.units.length)?,
        angle_scale(&file.units.angle)?,
    );
    design.body.validate()?;
    design.front_leg.validate()?;
    design.rear_leg.validate()?;
    if design.rear_leg.mirrored == design.front_leg.mirrored {
        return Err(Error::Format("legs must mirror each other".into()));
    }
    Ok(design)
}

pub fn save_design(design: &RobotDesign, path: &Path) -> Result<()> {
    std::fs::write(path, design_to_json(design)?)?;
    Ok(())
}

pub fn load_design(path: &Path) -> Result<RobotDesign> {
    design_from_json(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ControllerFile {
    format_version: String,
    units: UnitTags,
    controller: ControllerConfig,
}

pub fn controller_to_json(cfg: &ControllerConfig) -> Result<String> {
    let file = ControllerFile {
        format_version: CONTROLLER_FORMAT_VERSION.into(),
        units: UnitTags::default(),
        controller: cfg.clone(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn controller_from_json(text: &str) -> Result<ControllerConfig> {
    let file: ControllerFile = serde_json::from_str(text)?;
    if file.format_version != CONTROLLER_FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported controller format version '{}'",
            file.format_version
        )));
    }
    if file.units.angle != "rad" {
        return Err(Error::Format("controller files must use radians".into()));
    }
    Ok(file.controller)
}

pub fn save_controller(cfg: &ControllerConfig, path: &Path) -> Result<()> {
    std::fs::write(path, controller_to_json(cfg)?)?;
    Ok(())
}

pub fn load_controller(path: &Path) -> Result<ControllerConfig> {
    controller_from_json(&std::fs::read_to_string(path)?)
}
