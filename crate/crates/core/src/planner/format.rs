//! Text form of an [`AugmentationPlan`]:
//!
//! ```text
//! states 7
//! root U1 V1
//! add V2 V6 entanglement close-path
//! ```
//!
//! `#` starts a comment. `states` and `root` appear exactly once; `add` lines
//! keep their order.

use thiserror::Error;

use super::{AugmentationPlan, PlannedEdge, Reason};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("plan line {line}: {message}")]
pub struct PlanParseError {
    pub line: usize,
    pub message: String,
}

pub(super) fn plan_to_text(p: &AugmentationPlan) -> String {
    let mut out = format!("states {}\nroot {} {}\n", p.n, p.root, p.drive_attachment);
    for e in &p.added_edges {
        out.push_str(&format!(
            "add {} {} entanglement {}\n",
            e.src, e.dst, e.reason
        ));
    }
    out
}

pub fn parse_plan(text: &str) -> Result<AugmentationPlan, PlanParseError> {
    let mut n = None;
    let mut root = None;
    let mut added_edges = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let err = |message: String| PlanParseError { line, message };
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["states", count] => {
                if n.is_some() {
                    return Err(err("duplicate `states` line".into()));
                }
                n = Some(
                    count
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad state count \"{count}\"")))?,
                );
            }
            ["root", driver, attachment] => {
                if root.is_some() {
                    return Err(err("duplicate `root` line".into()));
                }
                root = Some((driver.to_string(), attachment.to_string()));
            }
            ["add", src, dst, "entanglement", reason] => {
                let reason = Reason::parse(reason)
                    .ok_or_else(|| err(format!("unknown reason \"{reason}\"")))?;
                added_edges.push(PlannedEdge {
                    src: src.to_string(),
                    dst: dst.to_string(),
                    reason,
                });
            }
            _ => return Err(err(format!("unrecognized line \"{}\"", content.trim()))),
        }
    }
    let missing = |what: &str| PlanParseError {
        line: last_line,
        message: format!("missing `{what}` line"),
    };
    let n = n.ok_or_else(|| missing("states"))?;
    let (root, drive_attachment) = root.ok_or_else(|| missing("root"))?;
    Ok(AugmentationPlan {
        added_edges,
        root,
        drive_attachment,
        n,
    })
}
