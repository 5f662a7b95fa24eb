//! Plain-text number and table formatting.

const INTEGER_SNAP: f64 = 1e-9;
const SIGNIFICANT: usize = 12;

/// An exact integer when within `1e-9` of one, else 12 significant digits.
pub fn number(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let r = v.round();
    if (v - r).abs() <= INTEGER_SNAP && r.abs() < 1e15 {
        return format!("{}", r as i64);
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{:.*e}", SIGNIFICANT - 1, v)
    }
}

/// Right-aligned columns under a header, with left-aligned row labels.
pub fn aligned(header: &[String], rows: &[(String, Vec<String>)]) -> String {
    let label_w = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for (_, cells) in rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |label: &str, cells: &[String]| {
        let mut s = format!("{label:<label_w$}");
        for (c, w) in cells.iter().zip(&widths) {
            s.push_str(&format!("  {c:>w$}"));
        }
        s.trim_end().to_string()
    };
    let mut out = line("", header);
    out.push('\n');
    for (label, cells) in rows {
        out.push_str(&line(label, cells));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::number;

    #[test]
    fn snaps_to_integers() {
        assert_eq!(number(1.0 + 1e-12), "1");
        assert_eq!(number(-2.0), "-2");
        assert_eq!(number(-1e-13), "0");
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(number(std::f64::consts::PI), "3.14159265359");
        assert_eq!(number(0.5), "0.5");
        assert_eq!(number(-0.0123456789012345), "-0.0123456789012");
        assert_eq!(number(1.5e20), "1.50000000000e20");
    }
}
