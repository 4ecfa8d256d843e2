//! Expected classification results, keyed by catalog triple id.

use crate::scalar::{Bindings, Rat};

/// Catalog file holding the triples of each superdimension.
pub fn triple_file(dims: (usize, usize)) -> Option<&'static str> {
    match dims {
        (2, 2) => Some("table2.sd"),
        (4, 2) => Some("table4.sd"),
        (2, 4) => Some("table7.sd"),
        _ => None,
    }
}

fn rats(v: &[(i64, i64)]) -> Vec<Rat> {
    v.iter().map(|&(n, d)| Rat::frac(n, d)).collect()
}

/// Default values of the continuous parameter `param` of triple `id`.
/// Sign and discrete parameters run over all their branches instead.
pub fn sample_values(id: &str, param: &str) -> Vec<Rat> {
    let v: &[(i64, i64)] = match (id, param) {
        ("MT42_6" | "MT42_7" | "MT42_8", "p") => &[(2, 1), (3, 1), (5, 2), (-2, 1), (0, 1)],
        ("MT42_10" | "MT42_14", "kappa") => &[(1, 1), (2, 1), (1, 2)],
        ("MT24_4" | "MT24_5" | "MT24_6" | "MT24_7" | "MT24_8", "p") => &[(1, 2), (1, 3), (-1, 2), (0, 1)],
        ("MT24_27" | "MT24_28" | "MT24_29", "p") => &[(1, 1), (2, 1), (1, 2)],
        ("MT24_8" | "MT24_16" | "MT24_17", "kappa") => &[(0, 1), (1, 1), (2, 1)],
        ("MT24_26", "kappa") => &[(0, 1), (1, 1), (-1, 1)],
        ("MT24_28", "kappa") => &[(0, 1), (1, 1), (1, 2)],
        ("MT24_31", "kappa") => &[(-1, 1), (0, 1), (1, 2)],
        _ => &[(2, 1), (3, 1), (5, 2)],
    };
    rats(v)
}

fn val(b: &Bindings, k: &str) -> Rat {
    b.get(k).cloned().unwrap_or_default()
}

fn is(b: &Bindings, k: &str, v: i64) -> bool {
    val(b, k) == Rat::int(v)
}

fn row(id: &str, prefix: &str) -> Option<u32> {
    id.strip_prefix(prefix)?.parse().ok()
}

/// Class of the double of `MT22_*` triples.
pub fn thm1_class(id: &str) -> Option<String> {
    let c = match row(id, "MT22_")? {
        1 => "(A11|A11)",
        2 => "(N11|A11)",
        3..=5 => "(S11|A11)",
        _ => return None,
    };
    Some(c.to_string())
}

/// Class of the double of `MT42_*` triples at `b`.
pub fn thm2_class(id: &str, b: &Bindings) -> Option<String> {
    let r = row(id, "MT42_")?;
    let p = val(b, "p");
    let c = match r {
        1 => "I".to_string(),
        2 => "II".to_string(),
        3..=5 => "III".to_string(),
        6 | 8 if p.is_zero() => "IV_0".to_string(),
        7 if p.is_zero() => "V".to_string(),
        6..=8 => format!("VI[|p|={}]", p.abs()),
        9 | 11..=13 => "VII".to_string(),
        10 => format!("IV[kappa={}]", val(b, "kappa")),
        14 => format!("VIII[kappa={}]", val(b, "kappa")),
        _ => return None,
    };
    Some(c)
}

/// Class of the double of `MT24_*` triples at `b`.
pub fn thm3_class(id: &str, b: &Bindings) -> Option<String> {
    let r = row(id, "MT24_")?;
    let p = val(b, "p");
    let kappa = val(b, "kappa");
    let c = match r {
        1 => "I".to_string(),
        2 => "X".to_string(),
        3 if is(b, "eps", 1) => "IX".to_string(),
        3 => "III".to_string(),
        4..=8 if !p.is_zero() => format!("II[|p|={}]", p.abs()),
        6 | 8 => "VI".to_string(),
        4 | 5 | 7 => "II[|p|=0]".to_string(),
        9..=13 => "II[|p|=1]".to_string(),
        14 => "IV".to_string(),
        15 if is(b, "delta", 0) => "II[|p|=1]".to_string(),
        15 => "IV".to_string(),
        16 | 17 if kappa.is_zero() => "II[|p|=1]".to_string(),
        16 | 17 => "IV".to_string(),
        18 | 20 | 21 => "III".to_string(),
        19 | 22 => "VII".to_string(),
        23..=26 => "IV".to_string(),
        27..=29 => format!("V[p={p}]"),
        30 => "V[p=0]".to_string(),
        31 if kappa == Rat::int(-1) => "V[p=0]".to_string(),
        31 => "VIII".to_string(),
        _ => return None,
    };
    Some(c)
}

/// Expected class for any catalog triple id.
pub fn expected_class(id: &str, b: &Bindings) -> Option<String> {
    thm1_class(id).or_else(|| thm2_class(id, b)).or_else(|| thm3_class(id, b))
}

/// One row of the commutant table for superdimension (4,2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutantRow {
    pub class: &'static str,
    pub dims: [usize; 3],
    /// Superdimension of `C1` where the table distinguishes it.
    pub c1: Option<(usize, usize)>,
}

pub fn table5_row(id: &str, b: &Bindings) -> Option<CommutantRow> {
    let r = row(id, "MT42_")?;
    let p0 = val(b, "p").is_zero();
    let (class, dims, c1) = match r {
        1 => ("I", [0, 0, 0], None),
        2 => ("II", [2, 0, 0], None),
        3..=5 => ("III", [3, 1, 0], Some((1, 2))),
        6 | 8 if p0 => ("IV_0", [3, 1, 0], Some((3, 0))),
        7 if p0 => ("V", [4, 1, 0], None),
        6..=8 => ("VI_p", [5, 1, 0], None),
        9 | 11..=13 => ("VII", [5, 3, 0], None),
        10 => ("IV_kappa", [3, 3, 3], None),
        14 => ("VIII_kappa", [5, 5, 5], None),
        _ => return None,
    };
    Some(CommutantRow { class, dims, c1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_dependence() {
        let b = Bindings::new().with("p", Rat::int(-2));
        assert_eq!(thm2_class("MT42_7", &b).unwrap(), "VI[|p|=2]");
        let b0 = Bindings::new().with("p", Rat::zero());
        assert_eq!(thm2_class("MT42_7", &b0).unwrap(), "V");
        assert_eq!(thm3_class("MT24_8", &b0).unwrap(), "VI");
        assert_eq!(thm3_class("MT24_5", &b0).unwrap(), "II[|p|=0]");
        assert_eq!(table5_row("MT42_8", &b0).unwrap().c1, Some((3, 0)));
        assert!(expected_class("MT99_1", &b).is_none());
    }
}
