//! Named groups, each with a short presentation on its generators.

use crate::error::{Error, Result};
use crate::fp::{realize, Presentation, PresentedGroup, Word};
use crate::perm::{PermGroup, Permutation};

/// Every preset name, smallest groups first.
pub const NAMES: &[&str] = &[
    "C1", "C2", "C3", "V4", "C4", "C5", "S3", "C6", "C7", "C2xC4", "C2^3", "D4", "Q8", "C8", "C9", "D5", "C10",
    "C11", "A4", "D6", "C12", "C13", "C14", "C15", "D8", "Q16", "C16", "S4", "A5", "S5", "SL25", "S6",
];

fn p(s: &str, n: usize) -> Permutation {
    Permutation::parse_cycles(s, n).expect("preset cycle")
}

fn cycle(n: usize) -> Permutation {
    Permutation::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect()).expect("cycle")
}

fn pres(labels: &[&str], relators: &[String]) -> Presentation {
    let r: Vec<&str> = relators.iter().map(|s| s.as_str()).collect();
    Presentation::parse(labels, &r).expect("preset presentation")
}

fn cyclic(n: usize) -> (PermGroup, Presentation) {
    if n == 1 {
        return (PermGroup::trivial(1), Presentation::new(0, vec![]).unwrap());
    }
    (
        PermGroup::new(n, vec![cycle(n)]).unwrap(),
        pres(&["a"], &[format!("a^{n}")]),
    )
}

fn dihedral(n: usize) -> (PermGroup, Presentation) {
    let s = Permutation::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect()).unwrap();
    (
        PermGroup::new(n, vec![cycle(n), s]).unwrap(),
        pres(&["r", "s"], &[format!("r^{n}"), "s^2".into(), "(r s)^2".into()]),
    )
}

fn symmetric(n: usize) -> (PermGroup, Presentation) {
    let mut rels = vec![format!("a^{n}"), "b^2".into(), format!("(a b)^{}", n - 1)];
    rels.push("(b^-1 a^-1 b a)^3".into());
    for j in 2..=n.saturating_sub(2) {
        rels.push(format!("(b^-1 a^-{j} b a^{j})^2"));
    }
    (PermGroup::symmetric(n), pres(&["a", "b"], &rels))
}

fn from_presentation(p: Presentation) -> (PermGroup, Presentation) {
    let (g, _) = realize(&p, 10_000).expect("preset presentation enumerates");
    (g, p)
}

fn build(name: &str) -> Option<(PermGroup, Presentation)> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    Some(match name {
        "V4" => (
            PermGroup::new(4, vec![p("(1 2)(3 4)", 4), p("(1 3)(2 4)", 4)]).unwrap(),
            pres(&["a", "b"], &s(&["a^2", "b^2", "(a b)^2"])),
        ),
        "C2xC4" => (
            PermGroup::new(6, vec![p("(1 2)", 6), p("(3 4 5 6)", 6)]).unwrap(),
            pres(&["a", "b"], &s(&["a^2", "b^4", "a^-1 b^-1 a b"])),
        ),
        "C2^3" => (
            PermGroup::new(6, vec![p("(1 2)", 6), p("(3 4)", 6), p("(5 6)", 6)]).unwrap(),
            pres(
                &["a", "b", "c"],
                &s(&["a^2", "b^2", "c^2", "a^-1 b^-1 a b", "a^-1 c^-1 a c", "b^-1 c^-1 b c"]),
            ),
        ),
        "S3" => (
            PermGroup::new(3, vec![p("(1 2 3)", 3), p("(1 2)", 3)]).unwrap(),
            pres(&["a", "b"], &s(&["a^3", "b^2", "(a b)^2"])),
        ),
        "D4" => dihedral(4),
        "D5" => dihedral(5),
        "D6" => dihedral(6),
        "D8" => dihedral(8),
        "Q8" => from_presentation(pres(&["a", "b"], &s(&["a^4", "a^2 b^-2", "b^-1 a b a"]))),
        "Q16" => from_presentation(pres(&["a", "b"], &s(&["a^8", "a^4 b^-2", "b^-1 a b a"]))),
        "A4" => (
            PermGroup::new(4, vec![p("(1 2 3)", 4), p("(1 2)(3 4)", 4)]).unwrap(),
            pres(&["a", "b"], &s(&["a^3", "b^2", "(a b)^3"])),
        ),
        "A5" => (
            PermGroup::new(5, vec![p("(1 2)(3 4)", 5), p("(1 3 5)", 5)]).unwrap(),
            pres(&["a", "b"], &s(&["a^2", "b^3", "(a b)^5"])),
        ),
        "S4" => symmetric(4),
        "S5" => symmetric(5),
        "S6" => symmetric(6),
        "SL25" => from_presentation(pres(&["a", "b"], &s(&["a^2 b^-3", "a^2 (b^-1 a)^-5"]))),
        _ => {
            let n: usize = name.strip_prefix('C')?.parse().ok()?;
            if (1..=16).contains(&n) {
                cyclic(n)
            } else {
                return None;
            }
        }
    })
}

fn canonical(name: &str) -> String {
    let upper = name.trim().to_ascii_uppercase();
    for (alias, target) in [("Z/", "C"), ("Z", "C")] {
        if let Some(rest) = upper.strip_prefix(alias) {
            if rest.chars().all(|c| c.is_ascii_digit()) && !rest.is_empty() {
                return format!("{target}{rest}");
            }
        }
    }
    match upper.as_str() {
        "C2XC4" => "C2xC4".into(),
        "SL(2,5)" | "2.A5" => "SL25".into(),
        "C2XC2" | "K4" => "V4".into(),
        "C2XC2XC2" => "C2^3".into(),
        _ => upper,
    }
}

/// The named preset, with a presentation on exactly its generators.
pub fn preset(name: &str) -> Result<PresentedGroup> {
    let key = canonical(name);
    let (group, presentation) =
        build(&key).ok_or_else(|| Error::invalid(format!("unknown preset group {name:?}")))?;
    PresentedGroup::new(group, presentation)
}

/// Just the permutation group of a preset.
pub fn preset_group(name: &str) -> Result<PermGroup> {
    let key = canonical(name);
    build(&key)
        .map(|(g, _)| g)
        .ok_or_else(|| Error::invalid(format!("unknown preset group {name:?}")))
}

/// An element of `g` written as `e`/`1`/`()`, in cycle notation, or as a
/// word in the presentation labels.
pub fn parse_element(g: &PresentedGroup, text: &str) -> Result<Permutation> {
    let t = text.trim();
    let degree = g.group().degree();
    let elem = match t {
        "e" | "1" | "()" | "id" => Permutation::identity(degree),
        _ if t.chars().all(|c| c.is_ascii_digit() || c.is_whitespace() || "(),".contains(c)) => {
            Permutation::parse_cycles(t, degree)?
        }
        _ => {
            let w = Word::parse(t, g.presentation().labels())?;
            w.evaluate(g.group().generators(), degree)?
        }
    };
    if elem.degree() != degree {
        return Err(Error::invalid(format!("{t:?} moves points beyond degree {degree}")));
    }
    if !g.group().contains(&elem) {
        return Err(Error::invalid(format!("{t:?} is not in the group")));
    }
    Ok(elem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let expect = [
            ("C1", 1),
            ("C7", 7),
            ("V4", 4),
            ("C2xC4", 8),
            ("C2^3", 8),
            ("S3", 6),
            ("D4", 8),
            ("D5", 10),
            ("D6", 12),
            ("D8", 16),
            ("Q8", 8),
            ("Q16", 16),
            ("A4", 12),
            ("S4", 24),
            ("A5", 60),
            ("S5", 120),
            ("SL25", 120),
            ("S6", 720),
        ];
        for (name, order) in expect {
            assert_eq!(preset(name).unwrap().group().order(), order, "{name}");
        }
    }

    #[test]
    fn every_preset_is_consistent() {
        for name in NAMES {
            let pg = preset(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(pg.presentation().generator_count(), pg.group().generators().len());
        }
    }

    #[test]
    fn aliases_and_unknown_names() {
        assert_eq!(preset_group("Z/4").unwrap().order(), 4);
        assert_eq!(preset_group("z6").unwrap().order(), 6);
        assert_eq!(preset_group("s3").unwrap().order(), 6);
        assert!(preset("C17").is_err());
        assert!(preset("X9").is_err());
    }

    #[test]
    fn structure_spot_checks() {
        let sl = preset_group("SL25").unwrap();
        assert!(sl.is_perfect());
        assert_eq!(sl.center().unwrap().order(), 2);
        assert!(preset_group("A5").unwrap().is_perfect());
        let q16 = preset_group("Q16").unwrap();
        let inv = q16.elements().unwrap().iter().filter(|e| e.order() == 2).count();
        assert_eq!(inv, 1);
    }

    #[test]
    fn element_syntax() {
        let d4 = preset("D4").unwrap();
        assert!(parse_element(&d4, "e").unwrap().is_identity());
        assert_eq!(parse_element(&d4, "r^2").unwrap(), Permutation::parse_cycles("(1 3)(2 4)", 4).unwrap());
        assert_eq!(parse_element(&d4, "(2 4)").unwrap(), d4.group().generators()[1]);
        assert!(parse_element(&d4, "(1 2)").is_err());
        assert!(parse_element(&d4, "t").is_err());
        assert!(parse_element(&d4, "(1 5)").is_err());
    }
}
