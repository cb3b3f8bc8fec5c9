//! Torsion-class labels for the three structure groups.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Group {
    SU3,
    G2,
    Spin7,
}

/// An element of a torsion-class lattice: the set of irreducible components
/// allowed to be nonzero, as a bit mask.
///
/// Bits per group:
/// * SU(3): 0 W1+ (π₀), 1 W1− (σ₀), 2 W2+ (π₂), 3 W2− (σ₂), 4 W3 (ν₃), 5 W4 (ν₁), 6 W5 (π₁)
/// * G₂: bit `i−1` is Xi (τ₀, τ₂, τ₃, τ₁ for X1..X4)
/// * Spin(7): 0 Y1 (λ₁), 1 Y2 (λ₅)
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassLabel {
    pub group: Group,
    pub mask: u8,
    /// `false` when a proper sub-class also contains the structure
    /// (only X1⊕X2, which coincides with X1 ∪ X2 on connected manifolds).
    pub strict: bool,
    /// Named structures the torsion qualifies for (e.g. "half-flat").
    pub names: Vec<String>,
}

const SU3_COMPONENTS: [&str; 7] = ["W1+", "W1-", "W2+", "W2-", "W3", "W4", "W5"];

pub mod su3_bits {
    pub const PI0: u8 = 1 << 0;
    pub const SIGMA0: u8 = 1 << 1;
    pub const PI2: u8 = 1 << 2;
    pub const SIGMA2: u8 = 1 << 3;
    pub const NU3: u8 = 1 << 4;
    pub const NU1: u8 = 1 << 5;
    pub const PI1: u8 = 1 << 6;
}

pub mod g2_bits {
    pub const X1: u8 = 1 << 0;
    pub const X2: u8 = 1 << 1;
    pub const X3: u8 = 1 << 2;
    pub const X4: u8 = 1 << 3;
    pub const ALL: u8 = X1 | X2 | X3 | X4;
}

pub mod spin7_bits {
    pub const Y1: u8 = 1 << 0;
    pub const Y2: u8 = 1 << 1;
}

impl ClassLabel {
    pub fn su3(mask: u8) -> Self {
        use su3_bits::*;
        let mut names = Vec::new();
        if mask == 0 {
            names.push("Calabi-Yau".into());
        }
        if mask == SIGMA0 {
            names.push("nearly Kähler".into());
        }
        if mask & (PI0 | PI1 | NU1 | PI2) == 0 {
            names.push("half-flat".into());
        }
        if mask & (PI1 | NU1 | SIGMA2) == 0 {
            names.push("nearly half-flat".into());
        }
        if mask & SIGMA0 != 0 && mask & !(SIGMA0 | SIGMA2) == 0 {
            names.push("coupled".into());
        }
        ClassLabel {
            group: Group::SU3,
            mask,
            strict: true,
            names,
        }
    }

    pub fn g2(mask: u8) -> Self {
        use g2_bits::*;
        let name = match mask {
            0 => Some("parallel"),
            X1 => Some("nearly parallel"),
            X2 => Some("closed"),
            X3 => Some("coclosed of pure type"),
            X4 => Some("locally conformal parallel"),
            m if m == X1 | X3 => Some("coclosed"),
            _ => None,
        };
        ClassLabel {
            group: Group::G2,
            mask,
            strict: mask != X1 | X2,
            names: name.into_iter().map(String::from).collect(),
        }
    }

    pub fn spin7(mask: u8) -> Self {
        let name = match mask {
            0 => "parallel",
            1 => "locally conformal parallel",
            2 => "balanced",
            _ => "general",
        };
        ClassLabel {
            group: Group::Spin7,
            mask,
            strict: true,
            names: vec![name.into()],
        }
    }

    /// Parses the display form (`"X1⊕X3"`, `"X1+X3"`, `"P"`, `"X"`, `"Y1"`,
    /// `"W1-+W3"`, `"{0}"`).
    pub fn parse(group: Group, text: &str) -> Option<Self> {
        let text = text.trim();
        let parts: Vec<String> = if text.contains('⊕') {
            text.split('⊕').map(|s| s.trim().to_string()).collect()
        } else {
            // '+' separates, but W1+ carries one as part of its name.
            let mut out = Vec::new();
            let mut cur = String::new();
            for ch in text.chars() {
                if ch == '+' && !(cur == "W1" || cur == "W2") {
                    out.push(std::mem::take(&mut cur));
                } else {
                    cur.push(ch);
                }
            }
            out.push(cur);
            out.into_iter().map(|s| s.trim().to_string()).collect()
        };
        let mut mask = 0u8;
        match group {
            Group::G2 | Group::Spin7 => {
                let (letter, width) = if group == Group::G2 { ('X', 4) } else { ('Y', 2) };
                if parts.len() == 1 && parts[0] == "P" {
                    return Some(Self::for_group(group, 0));
                }
                if parts.len() == 1 && parts[0] == letter.to_string() {
                    return Some(Self::for_group(group, (1u8 << width) - 1));
                }
                for p in parts {
                    let i: u8 = p.strip_prefix(letter)?.parse().ok()?;
                    if i == 0 || i > width {
                        return None;
                    }
                    mask |= 1 << (i - 1);
                }
            }
            Group::SU3 => {
                if parts.len() == 1 && parts[0] == "{0}" {
                    return Some(Self::su3(0));
                }
                for p in parts {
                    let i = SU3_COMPONENTS.iter().position(|c| *c == p)?;
                    mask |= 1 << i;
                }
            }
        }
        Some(Self::for_group(group, mask))
    }

    pub fn for_group(group: Group, mask: u8) -> Self {
        match group {
            Group::SU3 => Self::su3(mask),
            Group::G2 => Self::g2(mask),
            Group::Spin7 => Self::spin7(mask),
        }
    }

    pub fn contains(&self, bit: u8) -> bool {
        self.mask & bit != 0
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self.group {
            Group::SU3 => {
                if self.mask == 0 {
                    return f.write_str("{0}");
                }
                (0..7)
                    .filter(|i| self.mask & (1 << i) != 0)
                    .map(|i| SU3_COMPONENTS[i].to_string())
                    .collect()
            }
            Group::G2 => {
                if self.mask == 0 {
                    return f.write_str("P");
                }
                if self.mask == g2_bits::ALL {
                    return f.write_str("X");
                }
                (0..4)
                    .filter(|i| self.mask & (1 << i) != 0)
                    .map(|i| format!("X{}", i + 1))
                    .collect()
            }
            Group::Spin7 => {
                if self.mask == 0 {
                    return f.write_str("P");
                }
                (0..2)
                    .filter(|i| self.mask & (1 << i) != 0)
                    .map(|i| format!("Y{}", i + 1))
                    .collect()
            }
        };
        f.write_str(&parts.join("⊕"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_agree() {
        for m in 0..16 {
            let l = ClassLabel::g2(m);
            assert_eq!(ClassLabel::parse(Group::G2, &l.to_string()), Some(l));
        }
        for m in 0..128 {
            let l = ClassLabel::su3(m);
            assert_eq!(ClassLabel::parse(Group::SU3, &l.to_string()), Some(l));
        }
        assert_eq!(ClassLabel::parse(Group::SU3, "W1-+W3").unwrap().mask, 0b10010);
        assert_eq!(ClassLabel::parse(Group::G2, "X1+X3").unwrap().mask, 0b0101);
    }

    #[test]
    fn names() {
        assert_eq!(ClassLabel::g2(1).names, ["nearly parallel"]);
        assert_eq!(ClassLabel::g2(0b0101).names, ["coclosed"]);
        assert!(!ClassLabel::g2(0b0011).strict);
        let nk = ClassLabel::su3(su3_bits::SIGMA0);
        assert!(nk.names.iter().any(|n| n == "nearly Kähler"));
        assert!(nk.names.iter().any(|n| n == "coupled"));
    }
}
