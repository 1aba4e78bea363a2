use std::fmt;

/// A symbol of the differential polynomial ring, together with its
/// derivation behaviour.
///
/// The derive(Ord) order is the fixed total order used for canonical
/// forms everywhere: `Indep < Z < Param < Coef < CompCoef < XiJet < EtaJet`,
/// with `Coef(j, k)` ordered by `(j, k)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum JetVar {
    /// Independent variable `x` of the source equation.
    Indep,
    /// Independent variable `z` of the transformed equation.
    Z,
    /// Group parameter or other symbolic constant (derivative zero).
    Param(String),
    /// `Coef(j, k)` is `d^k a_j / dx^k`.
    Coef(u32, u32),
    /// `CompCoef(j, k)` is `d^k a_j / dx^k` evaluated at `x = xi(z)`.
    CompCoef(u32, u32),
    /// `XiJet(k)` is `d^k xi / dz^k`.
    XiJet(u32),
    /// `EtaJet(k)` is `d^k eta / dz^k`.
    EtaJet(u32),
}

impl JetVar {
    pub fn param(name: &str) -> Self {
        JetVar::Param(name.to_string())
    }

    /// Weight `j + k` when the variable is a coefficient jet, else `None`.
    pub fn weight(&self) -> Option<i64> {
        match self {
            JetVar::Coef(j, k) => Some((*j + *k) as i64),
            _ => None,
        }
    }

    /// Jet order `k` for coefficient jets.
    pub fn coef_order(&self) -> Option<u32> {
        match self {
            JetVar::Coef(_, k) => Some(*k),
            _ => None,
        }
    }
}

fn jet_suffix(f: &mut fmt::Formatter<'_>, k: u32) -> fmt::Result {
    match k {
        0 => Ok(()),
        1 => write!(f, "'"),
        2 => write!(f, "''"),
        _ => write!(f, "^({k})"),
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetVar::Indep => write!(f, "x"),
            JetVar::Z => write!(f, "z"),
            JetVar::Param(s) => write!(f, "{s}"),
            JetVar::Coef(j, k) => {
                write!(f, "a{j}")?;
                jet_suffix(f, *k)
            }
            JetVar::CompCoef(j, k) => {
                write!(f, "ab{j}")?;
                jet_suffix(f, *k)
            }
            JetVar::XiJet(k) => {
                write!(f, "xi")?;
                jet_suffix(f, *k)
            }
            JetVar::EtaJet(k) => {
                write!(f, "eta")?;
                jet_suffix(f, *k)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_order_is_fixed() {
        let x = JetVar::Indep;
        let a3 = JetVar::Coef(3, 0);
        let a3p = JetVar::Coef(3, 1);
        let a4 = JetVar::Coef(4, 0);
        let k1 = JetVar::param("k1");
        assert!(x < k1);
        assert!(k1 < a3);
        assert!(a3 < a3p);
        assert!(a3p < a4);
        assert!(a4 < JetVar::CompCoef(3, 0));
        assert!(JetVar::CompCoef(5, 2) < JetVar::XiJet(0));
        assert!(JetVar::XiJet(9) < JetVar::EtaJet(0));
    }

    #[test]
    fn display_spellings() {
        assert_eq!(JetVar::Coef(3, 0).to_string(), "a3");
        assert_eq!(JetVar::Coef(3, 1).to_string(), "a3'");
        assert_eq!(JetVar::Coef(3, 2).to_string(), "a3''");
        assert_eq!(JetVar::Coef(5, 3).to_string(), "a5^(3)");
        assert_eq!(JetVar::XiJet(1).to_string(), "xi'");
        assert_eq!(JetVar::CompCoef(4, 0).to_string(), "ab4");
    }
}
