use std::fmt::Write;

/// Shortest decimal rendering that parses back to the same bits. Integral
/// values print without a fractional part (`1`, not `1.0`).
pub fn format_f64(x: f64) -> String {
    let mut s = String::new();
    push_f64(&mut s, x);
    s
}

pub(crate) fn push_f64(out: &mut String, x: f64) {
    write!(out, "{x}").unwrap();
}

pub(crate) fn push_usize(out: &mut String, x: usize) {
    write!(out, "{x}").unwrap();
}

/// Numbered lines (1-based) with a trailing CR removed. A final newline does
/// not start an extra line, so `"a\n"` has one line and `"\n"` has one empty
/// line.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_terminator('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l))
}

pub(crate) fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split_ascii_whitespace()
}

pub(crate) fn parse_f64(tok: &str) -> Option<f64> {
    tok.parse().ok()
}

pub(crate) fn parse_index(tok: &str) -> Option<usize> {
    if tok.bytes().all(|b| b.is_ascii_digit()) {
        tok.parse().ok()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_splitting() {
        assert_eq!(lines("").count(), 0);
        assert_eq!(lines("\n").collect::<Vec<_>>(), vec![(1, "")]);
        assert_eq!(lines("1\r\n0").collect::<Vec<_>>(), vec![(1, "1"), (2, "0")]);
        assert_eq!(lines("\n\n").count(), 2);
    }

    #[test]
    fn float_rendering() {
        assert_eq!(format_f64(1.0), "1");
        assert_eq!(format_f64(0.5), "0.5");
        assert_eq!(format_f64(-1.25), "-1.25");
        assert_eq!(format_f64(300.0), "300");
        assert_eq!(format_f64(0.1 + 0.2), "0.30000000000000004");
    }

    #[test]
    fn index_rejects_signs() {
        assert_eq!(parse_index("12"), Some(12));
        assert_eq!(parse_index("+1"), None);
        assert_eq!(parse_index("-1"), None);
        assert_eq!(parse_index(""), None);
    }
}
