//! File formats, the graph expression language and result reporting for the
//! `pst` command-line tool.

pub mod expr;
pub mod format;
pub mod report;

pub use expr::{build, eval_expr, parse_expr, ExprError, GraphExpr, ParseError};
pub use format::{parse_graph, write_graph, FormatError};

use std::io::Write;
use std::path::Path;

/// Writes `contents` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = std::fs::File::create(&tmp)?;
    f.write_all(contents)?;
    f.sync_all()?;
    drop(f);
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}
