//! Provenance header written at the top of every CSV file.

use std::io::{self, Write};

/// Writes `# bogospec <version> <command>` followed by one `# key = value`
/// line per entry, in the given order.
pub fn write_header<W: Write>(out: &mut W, command: &str, entries: &[(String, String)]) -> io::Result<()> {
    writeln!(out, "# bogospec {} {command}", crate::VERSION)?;
    for (k, v) in entries {
        writeln!(out, "# {k} = {v}")?;
    }
    Ok(())
}

/// Strips leading `#` lines, returning the remaining text.
pub fn strip_header(text: &str) -> &str {
    let mut rest = text;
    while rest.starts_with('#') {
        rest = match rest.find('\n') {
            Some(i) => &rest[i + 1..],
            None => "",
        };
    }
    rest
}
