//! A minimal unified-diff engine: parsing, rendering, generation from line
//! LCS, and strict application.
//!
//! Parsing validates hunk-header syntax and that each hunk body matches its
//! declared line counts; whether context lines actually match a target file
//! is only decided at apply time.

use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

/// Path used on the absent side of file creations and deletions.
pub const DEV_NULL: &str = "/dev/null";

#[derive(Debug, Error, PartialEq)]
pub enum DiffError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Error, PartialEq)]
pub enum ApplyError {
    #[error("{path}: file is required by the diff but missing")]
    MissingFile { path: String },
    #[error("{path}: diff creates a file that already exists")]
    AlreadyExists { path: String },
    #[error("{path}: hunk at old line {old_start}: {detail}")]
    HunkMismatch {
        path: String,
        old_start: u64,
        detail: String,
    },
}

fn parse_error(line: usize, message: impl Into<String>) -> DiffError {
    DiffError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffLine {
    Context(String),
    Remove(String),
    Add(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hunk {
    pub old_start: u64,
    pub old_count: u64,
    pub new_start: u64,
    pub new_count: u64,
    pub section: Option<String>,
    pub lines: Vec<DiffLine>,
}

impl Hunk {
    /// One past the last old line the hunk covers (0-based).
    fn old_end(&self) -> u64 {
        if self.old_count == 0 {
            self.old_start
        } else {
            self.old_start - 1 + self.old_count
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileDiff {
    pub old_path: String,
    pub new_path: String,
    pub old_missing_newline: bool,
    pub new_missing_newline: bool,
    pub hunks: Vec<Hunk>,
}

impl FileDiff {
    pub fn is_creation(&self) -> bool {
        self.old_path == DEV_NULL
    }

    pub fn is_deletion(&self) -> bool {
        self.new_path == DEV_NULL
    }

    /// The path the diff effectively describes.
    pub fn target_path(&self) -> &str {
        if self.is_deletion() {
            &self.old_path
        } else {
            &self.new_path
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnifiedDiff {
    pub files: Vec<FileDiff>,
}

fn hunk_header_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@(?: (.*))?$").expect("static regex")
    })
}

fn strip_file_header(raw: &str) -> String {
    // Strip an optional timestamp after a tab, then the a/ or b/ prefix.
    let path = raw.split('\t').next().unwrap_or(raw).trim_end();
    if path == DEV_NULL {
        return path.to_string();
    }
    path.strip_prefix("a/")
        .or_else(|| path.strip_prefix("b/"))
        .unwrap_or(path)
        .to_string()
}

fn is_noise_header(line: &str) -> bool {
    line.starts_with("diff ")
        || line.starts_with("index ")
        || line.starts_with("new file mode")
        || line.starts_with("deleted file mode")
        || line.starts_with("old mode")
        || line.starts_with("new mode")
        || line.starts_with("similarity index")
        || line.starts_with("rename from")
        || line.starts_with("rename to")
}

/// Parses unified-diff text. The empty string is a valid, empty diff.
pub fn parse(text: &str) -> Result<UnifiedDiff, DiffError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut files = Vec::new();
    let mut i = 0;

    while i < lines.len() {
        let line = lines[i];
        if line.is_empty() || is_noise_header(line) {
            i += 1;
            continue;
        }
        if let Some(old_raw) = line.strip_prefix("--- ") {
            let header_line = i;
            i += 1;
            let new_raw = lines
                .get(i)
                .and_then(|l| l.strip_prefix("+++ "))
                .ok_or_else(|| parse_error(header_line + 2, "expected +++ header"))?;
            let mut file = FileDiff {
                old_path: strip_file_header(old_raw),
                new_path: strip_file_header(new_raw),
                old_missing_newline: false,
                new_missing_newline: false,
                hunks: Vec::new(),
            };
            i += 1;
            while i < lines.len() && lines[i].starts_with("@@") {
                let (hunk, consumed) = parse_hunk(&lines, i, &mut file)?;
                if let Some(previous) = file.hunks.last() {
                    if hunk.old_end() < previous.old_end()
                        || (hunk.old_count > 0 && hunk.old_start <= previous.old_end())
                    {
                        return Err(parse_error(i + 1, "hunks overlap or are out of order"));
                    }
                }
                file.hunks.push(hunk);
                i += consumed;
            }
            files.push(file);
            continue;
        }
        return Err(parse_error(i + 1, format!("unexpected content: {line:?}")));
    }

    Ok(UnifiedDiff { files })
}

fn parse_hunk(
    lines: &[&str],
    start: usize,
    file: &mut FileDiff,
) -> Result<(Hunk, usize), DiffError> {
    let caps = hunk_header_re().captures(lines[start]).ok_or_else(|| {
        parse_error(start + 1, format!("malformed hunk header: {:?}", lines[start]))
    })?;
    let parse_num = |m: Option<regex::Match>| -> u64 {
        m.map(|v| v.as_str().parse().unwrap_or(1)).unwrap_or(1)
    };
    let mut hunk = Hunk {
        old_start: parse_num(caps.get(1)),
        old_count: parse_num(caps.get(2)),
        new_start: parse_num(caps.get(3)),
        new_count: parse_num(caps.get(4)),
        section: caps.get(5).map(|m| m.as_str().to_string()),
        lines: Vec::new(),
    };
    if hunk.old_count > 0 && hunk.old_start == 0 {
        return Err(parse_error(start + 1, "old start must be 1-based"));
    }
    if hunk.new_count > 0 && hunk.new_start == 0 {
        return Err(parse_error(start + 1, "new start must be 1-based"));
    }

    let mut old_seen = 0u64;
    let mut new_seen = 0u64;
    let mut i = start + 1;
    while old_seen < hunk.old_count || new_seen < hunk.new_count {
        let body = lines
            .get(i)
            .ok_or_else(|| parse_error(i + 1, "hunk body shorter than declared counts"))?;
        let (prefix, rest) = if body.is_empty() {
            // Tolerate the fully-empty context lines some tools emit.
            (' ', "")
        } else {
            let mut chars = body.chars();
            (chars.next().expect("non-empty"), chars.as_str())
        };
        match prefix {
            ' ' => {
                if old_seen >= hunk.old_count || new_seen >= hunk.new_count {
                    return Err(parse_error(i + 1, "hunk body exceeds declared counts"));
                }
                hunk.lines.push(DiffLine::Context(rest.to_string()));
                old_seen += 1;
                new_seen += 1;
            }
            '-' => {
                if old_seen >= hunk.old_count {
                    return Err(parse_error(i + 1, "hunk body exceeds declared counts"));
                }
                hunk.lines.push(DiffLine::Remove(rest.to_string()));
                old_seen += 1;
            }
            '+' => {
                if new_seen >= hunk.new_count {
                    return Err(parse_error(i + 1, "hunk body exceeds declared counts"));
                }
                hunk.lines.push(DiffLine::Add(rest.to_string()));
                new_seen += 1;
            }
            '\\' => apply_newline_marker(file, &hunk, i + 1)?,
            other => {
                return Err(parse_error(
                    i + 1,
                    format!("unexpected hunk line prefix {other:?}"),
                ));
            }
        }
        i += 1;
    }
    // A marker may also follow the final hunk line.
    if lines.get(i).is_some_and(|body| body.starts_with('\\')) {
        apply_newline_marker(file, &hunk, i + 1)?;
        i += 1;
    }
    Ok((hunk, i - start))
}

fn apply_newline_marker(file: &mut FileDiff, hunk: &Hunk, line_no: usize) -> Result<(), DiffError> {
    match hunk.lines.last() {
        Some(DiffLine::Remove(_)) => file.old_missing_newline = true,
        Some(DiffLine::Add(_)) => file.new_missing_newline = true,
        Some(DiffLine::Context(_)) => {
            file.old_missing_newline = true;
            file.new_missing_newline = true;
        }
        None => return Err(parse_error(line_no, "newline marker before any hunk line")),
    }
    Ok(())
}

fn side_prefix(path: &str, side: char) -> String {
    if path == DEV_NULL {
        path.to_string()
    } else {
        format!("{side}/{path}")
    }
}

fn render_range(start: u64, count: u64) -> String {
    if count == 1 {
        format!("{start}")
    } else {
        format!("{start},{count}")
    }
}

/// Renders a diff back to text with `a/`–`b/` prefixes and LF line endings.
pub fn render(diff: &UnifiedDiff) -> String {
    let mut out = String::new();
    for file in &diff.files {
        render_file(file, &mut out);
    }
    out
}

pub fn render_file(file: &FileDiff, out: &mut String) {
    out.push_str("--- ");
    out.push_str(&side_prefix(&file.old_path, 'a'));
    out.push('\n');
    out.push_str("+++ ");
    out.push_str(&side_prefix(&file.new_path, 'b'));
    out.push('\n');
    for (hunk_index, hunk) in file.hunks.iter().enumerate() {
        let last_hunk = hunk_index + 1 == file.hunks.len();
        out.push_str(&format!(
            "@@ -{} +{} @@",
            render_range(hunk.old_start, hunk.old_count),
            render_range(hunk.new_start, hunk.new_count)
        ));
        if let Some(section) = &hunk.section {
            out.push(' ');
            out.push_str(section);
        }
        out.push('\n');

        let last_old = hunk
            .lines
            .iter()
            .rposition(|l| matches!(l, DiffLine::Context(_) | DiffLine::Remove(_)));
        let last_new = hunk
            .lines
            .iter()
            .rposition(|l| matches!(l, DiffLine::Context(_) | DiffLine::Add(_)));
        for (index, line) in hunk.lines.iter().enumerate() {
            let (prefix, text) = match line {
                DiffLine::Context(t) => (' ', t),
                DiffLine::Remove(t) => ('-', t),
                DiffLine::Add(t) => ('+', t),
            };
            out.push(prefix);
            out.push_str(text);
            out.push('\n');
            let mark_old = last_hunk && file.old_missing_newline && last_old == Some(index);
            let mark_new = last_hunk && file.new_missing_newline && last_new == Some(index);
            if mark_old || mark_new {
                out.push_str("\\ No newline at end of file\n");
            }
        }
    }
}

/// Splits text into lines, reporting whether the final line lacks a
/// terminating newline. The empty string yields no lines.
pub fn split_lines(text: &str) -> (Vec<&str>, bool) {
    if text.is_empty() {
        return (Vec::new(), false);
    }
    let mut lines: Vec<&str> = text.split('\n').collect();
    let missing_newline = match lines.last() {
        Some(&"") => {
            lines.pop();
            false
        }
        _ => true,
    };
    (lines, missing_newline)
}

fn join_lines(lines: &[String], missing_newline: bool) -> String {
    if lines.is_empty() {
        return String::new();
    }
    let mut out = lines.join("\n");
    if !missing_newline {
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OpTag {
    Equal,
    Replace,
    Delete,
    Insert,
}

type Opcode = (OpTag, usize, usize, usize, usize);

/// Above this many DP cells the LCS is skipped and the whole file treated as
/// replaced; the result is still a correct (just non-minimal) diff.
const LCS_CELL_LIMIT: usize = 4_000_000;

fn opcodes(old: &[&str], new: &[&str]) -> Vec<Opcode> {
    let n = old.len();
    let m = new.len();

    // Trim common prefix and suffix before the quadratic part.
    let mut prefix = 0;
    while prefix < n && prefix < m && old[prefix] == new[prefix] {
        prefix += 1;
    }
    let mut suffix = 0;
    while suffix < n - prefix && suffix < m - prefix && old[n - 1 - suffix] == new[m - 1 - suffix] {
        suffix += 1;
    }
    let core_old = &old[prefix..n - suffix];
    let core_new = &new[prefix..m - suffix];

    let mut ops: Vec<Opcode> = Vec::new();
    if prefix > 0 {
        ops.push((OpTag::Equal, 0, prefix, 0, prefix));
    }
    for (tag, i1, i2, j1, j2) in core_opcodes(core_old, core_new) {
        ops.push((tag, i1 + prefix, i2 + prefix, j1 + prefix, j2 + prefix));
    }
    if suffix > 0 {
        // The core never ends in an Equal run (suffix trimming is maximal),
        // so the suffix becomes its own opcode.
        ops.push((OpTag::Equal, n - suffix, n, m - suffix, m));
    }
    ops
}

fn core_opcodes(old: &[&str], new: &[&str]) -> Vec<Opcode> {
    let n = old.len();
    let m = new.len();
    if n == 0 && m == 0 {
        return Vec::new();
    }
    if n == 0 {
        return vec![(OpTag::Insert, 0, 0, 0, m)];
    }
    if m == 0 {
        return vec![(OpTag::Delete, 0, n, 0, 0)];
    }
    if (n + 1).saturating_mul(m + 1) > LCS_CELL_LIMIT {
        return vec![(OpTag::Replace, 0, n, 0, m)];
    }

    let width = m + 1;
    let mut table = vec![0u32; (n + 1) * width];
    for i in 1..=n {
        for j in 1..=m {
            table[i * width + j] = if old[i - 1] == new[j - 1] {
                table[(i - 1) * width + (j - 1)] + 1
            } else {
                table[(i - 1) * width + j].max(table[i * width + (j - 1)])
            };
        }
    }

    // Walk back collecting matched pairs, then fold runs into opcodes.
    let mut matches = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 && j > 0 {
        if old[i - 1] == new[j - 1] && table[i * width + j] == table[(i - 1) * width + (j - 1)] + 1
        {
            matches.push((i - 1, j - 1));
            i -= 1;
            j -= 1;
        } else if table[(i - 1) * width + j] >= table[i * width + (j - 1)] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    matches.reverse();

    let mut ops = Vec::new();
    let (mut oi, mut nj) = (0usize, 0usize);
    let push_gap = |ops: &mut Vec<Opcode>, oi: usize, i: usize, nj: usize, j: usize| {
        if oi < i && nj < j {
            ops.push((OpTag::Replace, oi, i, nj, j));
        } else if oi < i {
            ops.push((OpTag::Delete, oi, i, nj, j));
        } else if nj < j {
            ops.push((OpTag::Insert, oi, i, nj, j));
        }
    };
    let mut k = 0;
    while k < matches.len() {
        let (mi, mj) = matches[k];
        push_gap(&mut ops, oi, mi, nj, mj);
        let mut run = 1;
        while k + run < matches.len() && matches[k + run] == (mi + run, mj + run) {
            run += 1;
        }
        ops.push((OpTag::Equal, mi, mi + run, mj, mj + run));
        oi = mi + run;
        nj = mj + run;
        k += run;
    }
    push_gap(&mut ops, oi, n, nj, m);
    ops
}

fn grouped_opcodes(mut ops: Vec<Opcode>, context: usize) -> Vec<Vec<Opcode>> {
    if ops.is_empty() {
        return Vec::new();
    }
    if let Some(first) = ops.first_mut() {
        if first.0 == OpTag::Equal {
            first.1 = first.1.max(first.2.saturating_sub(context));
            first.3 = first.3.max(first.4.saturating_sub(context));
        }
    }
    if let Some(last) = ops.last_mut() {
        if last.0 == OpTag::Equal {
            last.2 = last.2.min(last.1 + context);
            last.4 = last.4.min(last.3 + context);
        }
    }

    let mut groups = Vec::new();
    let mut group: Vec<Opcode> = Vec::new();
    for (tag, i1, i2, j1, j2) in ops {
        if tag == OpTag::Equal && i2 - i1 > 2 * context && !group.is_empty() {
            group.push((tag, i1, i1 + context, j1, j1 + context));
            groups.push(std::mem::take(&mut group));
            group.push((tag, i2 - context, i2, j2 - context, j2));
            continue;
        }
        group.push((tag, i1, i2, j1, j2));
    }
    if group.iter().any(|op| op.0 != OpTag::Equal) {
        groups.push(group);
    }
    groups
}

/// Computes the unified diff between two versions of one file.
///
/// `old_text`/`new_text` of `None` mean the file is absent on that side,
/// producing a creation or deletion entry. Returns `None` when both sides
/// are identical.
pub fn diff_file(
    path: &str,
    old_text: Option<&str>,
    new_text: Option<&str>,
    context: usize,
) -> Option<FileDiff> {
    if old_text == new_text {
        return None;
    }
    let (old_lines, old_missing) = split_lines(old_text.unwrap_or(""));
    let (new_lines, new_missing) = split_lines(new_text.unwrap_or(""));

    let mut ops = opcodes(&old_lines, &new_lines);

    // When only one side lacks the trailing newline but the final lines read
    // the same, the last line still changed; force it into the diff so the
    // newline markers stay unambiguous.
    if old_missing != new_missing && old_lines.last() == new_lines.last() && !old_lines.is_empty()
    {
        if let Some(last) = ops.last_mut() {
            debug_assert_eq!(last.0, OpTag::Equal);
            if last.0 == OpTag::Equal {
                let (_, i1, i2, j1, j2) = *last;
                if i2 - i1 == 1 {
                    last.0 = OpTag::Replace;
                } else {
                    last.2 = i2 - 1;
                    last.4 = j2 - 1;
                    ops.push((OpTag::Replace, i2 - 1, i2, j2 - 1, j2));
                }
            }
        }
    }

    let groups = grouped_opcodes(ops, context);

    let mut hunks = Vec::new();
    for group in groups {
        let first = group.first().expect("non-empty group");
        let last = group.last().expect("non-empty group");
        let old_count = (last.2 - first.1) as u64;
        let new_count = (last.4 - first.3) as u64;
        let mut hunk = Hunk {
            old_start: if old_count == 0 {
                first.1 as u64
            } else {
                first.1 as u64 + 1
            },
            old_count,
            new_start: if new_count == 0 {
                first.3 as u64
            } else {
                first.3 as u64 + 1
            },
            new_count,
            section: None,
            lines: Vec::new(),
        };
        for (tag, i1, i2, j1, j2) in group {
            match tag {
                OpTag::Equal => {
                    for line in &old_lines[i1..i2] {
                        hunk.lines.push(DiffLine::Context(line.to_string()));
                    }
                }
                OpTag::Replace | OpTag::Delete | OpTag::Insert => {
                    for line in &old_lines[i1..i2] {
                        hunk.lines.push(DiffLine::Remove(line.to_string()));
                    }
                    for line in &new_lines[j1..j2] {
                        hunk.lines.push(DiffLine::Add(line.to_string()));
                    }
                }
            }
        }
        hunks.push(hunk);
    }

    let touches_old_eof = hunks
        .last()
        .map(|h| h.old_end() as usize == old_lines.len())
        .unwrap_or(false);
    let touches_new_eof = hunks
        .last()
        .map(|h| {
            let end = if h.new_count == 0 {
                h.new_start
            } else {
                h.new_start - 1 + h.new_count
            };
            end as usize == new_lines.len()
        })
        .unwrap_or(false);

    Some(FileDiff {
        old_path: if old_text.is_none() {
            DEV_NULL.to_string()
        } else {
            path.to_string()
        },
        new_path: if new_text.is_none() {
            DEV_NULL.to_string()
        } else {
            path.to_string()
        },
        old_missing_newline: old_text.is_some() && old_missing && touches_old_eof,
        new_missing_newline: new_text.is_some() && new_missing && touches_new_eof,
        hunks,
    })
}

/// Applies one file's hunks to its old content.
///
/// Returns the new content, or `None` when the diff deletes the file.
/// Context and removed lines must match the target exactly.
pub fn apply_file(file: &FileDiff, old_text: Option<&str>) -> Result<Option<String>, ApplyError> {
    let path = file.target_path();
    let mismatch = |old_start: u64, detail: String| ApplyError::HunkMismatch {
        path: path.to_string(),
        old_start,
        detail,
    };
    if file.is_creation() && old_text.is_some() {
        return Err(ApplyError::AlreadyExists {
            path: path.to_string(),
        });
    }
    if !file.is_creation() && old_text.is_none() {
        return Err(ApplyError::MissingFile {
            path: path.to_string(),
        });
    }

    let (old_lines, old_missing) = split_lines(old_text.unwrap_or(""));
    let mut out: Vec<String> = Vec::new();
    let mut pos = 0usize;

    for hunk in &file.hunks {
        let hunk_pos = if hunk.old_count == 0 {
            hunk.old_start as usize
        } else {
            (hunk.old_start as usize).saturating_sub(1)
        };
        if hunk_pos < pos || hunk_pos > old_lines.len() {
            return Err(mismatch(hunk.old_start, "hunk position out of range".into()));
        }
        while pos < hunk_pos {
            out.push(old_lines[pos].to_string());
            pos += 1;
        }
        for line in &hunk.lines {
            match line {
                DiffLine::Context(expected) | DiffLine::Remove(expected) => {
                    let actual = old_lines.get(pos).ok_or_else(|| {
                        mismatch(hunk.old_start, "file ends before hunk does".into())
                    })?;
                    if actual != expected {
                        return Err(mismatch(
                            hunk.old_start,
                            format!("expected {expected:?}, found {actual:?}"),
                        ));
                    }
                    if matches!(line, DiffLine::Context(_)) {
                        out.push(expected.clone());
                    }
                    pos += 1;
                }
                DiffLine::Add(added) => out.push(added.clone()),
            }
        }
    }
    let covered_old_eof = pos == old_lines.len();
    while pos < old_lines.len() {
        out.push(old_lines[pos].to_string());
        pos += 1;
    }

    if file.is_deletion() {
        if !out.is_empty() {
            return Err(mismatch(
                file.hunks.first().map(|h| h.old_start).unwrap_or(0),
                "deletion diff does not remove every line".into(),
            ));
        }
        return Ok(None);
    }

    // When the hunks never reach the end of the old file, the tail (and its
    // newline-ness) is carried over unchanged.
    let missing_newline = if covered_old_eof {
        file.new_missing_newline
    } else {
        old_missing
    };
    Ok(Some(join_lines(&out, missing_newline)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(old: &str, new: &str) {
        let file = diff_file("f.txt", Some(old), Some(new), 3);
        match file {
            None => assert_eq!(old, new),
            Some(file) => {
                let rendered = render(&UnifiedDiff { files: vec![file] });
                let parsed = parse(&rendered).unwrap();
                assert_eq!(parsed.files.len(), 1);
                let applied = apply_file(&parsed.files[0], Some(old)).unwrap().unwrap();
                assert_eq!(applied, new, "diff was:\n{rendered}");
            }
        }
    }

    #[test]
    fn identical_files_produce_no_diff() {
        assert!(diff_file("f", Some("a\nb\n"), Some("a\nb\n"), 3).is_none());
    }

    #[test]
    fn one_line_change_has_expected_headers() {
        let file = diff_file("src/x.c", Some("a\nb\nc\n"), Some("a\nB\nc\n"), 3).unwrap();
        let text = render(&UnifiedDiff { files: vec![file] });
        assert!(text.starts_with("--- a/src/x.c\n+++ b/src/x.c\n@@ -1,3 +1,3 @@\n"));
        assert!(text.contains("\n-b\n+B\n"));
    }

    #[test]
    fn apply_reverses_generate() {
        roundtrip("a\nb\nc\n", "a\nB\nc\n");
        roundtrip("", "new content\n");
        roundtrip("x\n", "");
        roundtrip("1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n", "1\nX\n3\n4\n5\n6\n7\n8\nY\n10\n");
        roundtrip("no newline", "no newline at all");
        roundtrip("ends\nwith\nnewline\n", "ends\nwithout\nnewline");
        roundtrip("a\nb", "a\nb\n");
        roundtrip("a\nb\n", "a\nb");
        roundtrip("same tail", "prefix\nsame tail");
        roundtrip("x\ny\nz\n", "x\ny\nz\nw");
    }

    #[test]
    fn change_far_from_missing_newline_tail_round_trips() {
        let old = "a\nb\nc\nd\ne\nf\ng\nh\ni\nj\nk\nno-newline-tail";
        let new = "A\nb\nc\nd\ne\nf\ng\nh\ni\nj\nk\nno-newline-tail";
        roundtrip(old, new);
    }

    #[test]
    fn context_mismatch_fails_application() {
        let file = diff_file("f", Some("a\nb\nc\n"), Some("a\nB\nc\n"), 3).unwrap();
        let err = apply_file(&file, Some("a\nz\nc\n")).unwrap_err();
        assert!(matches!(err, ApplyError::HunkMismatch { .. }));
    }

    #[test]
    fn creation_and_deletion_use_dev_null() {
        let created = diff_file("f", None, Some("hello\n"), 3).unwrap();
        assert!(created.is_creation());
        assert_eq!(created.old_path, DEV_NULL);
        assert_eq!(apply_file(&created, None).unwrap().unwrap(), "hello\n");
        assert!(apply_file(&created, Some("existing")).is_err());

        let deleted = diff_file("f", Some("bye\n"), None, 3).unwrap();
        assert!(deleted.is_deletion());
        assert_eq!(apply_file(&deleted, Some("bye\n")).unwrap(), None);
    }

    #[test]
    fn hunk_counts_must_match_body() {
        let bad = "--- a/f\n+++ b/f\n@@ -1,2 +1,2 @@\n-a\n+b\n";
        assert!(parse(bad).is_err());

        let overrun = "--- a/f\n+++ b/f\n@@ -1 +1 @@\n-a\n-b\n+c\n";
        assert!(parse(overrun).is_err());
    }

    #[test]
    fn malformed_header_is_rejected() {
        let bad = "--- a/f\n+++ b/f\n@@ -x +1 @@\n";
        assert!(parse(bad).is_err());
    }

    #[test]
    fn parse_accepts_git_noise_headers() {
        let text = "diff --git a/f b/f\nindex 123..456 100644\n--- a/f\n+++ b/f\n@@ -1 +1 @@\n-a\n+b\n";
        let diff = parse(text).unwrap();
        assert_eq!(diff.files.len(), 1);
        assert_eq!(diff.files[0].old_path, "f");
    }

    #[test]
    fn section_heading_is_preserved() {
        let text = "--- a/f\n+++ b/f\n@@ -1 +1 @@ int main(void)\n-a\n+b\n";
        let diff = parse(text).unwrap();
        assert_eq!(
            diff.files[0].hunks[0].section.as_deref(),
            Some("int main(void)")
        );
    }

    #[test]
    fn distant_changes_split_into_hunks() {
        let old = (1..=30).map(|i| format!("line{i}\n")).collect::<String>();
        let new = old.replace("line2\n", "LINE2\n").replace("line28\n", "LINE28\n");
        let file = diff_file("f", Some(&old), Some(&new), 3).unwrap();
        assert_eq!(file.hunks.len(), 2);
        let rendered = render(&UnifiedDiff { files: vec![file] });
        let parsed = parse(&rendered).unwrap();
        let applied = apply_file(&parsed.files[0], Some(&old)).unwrap().unwrap();
        assert_eq!(applied, new);
    }

    #[test]
    fn overlapping_hunks_rejected() {
        let text = "--- a/f\n+++ b/f\n@@ -1,3 +1,3 @@\n a\n-b\n+B\n c\n@@ -2,2 +2,2 @@\n-b\n+X\n c\n";
        assert!(parse(text).is_err());
    }
}
