use std::fmt;

use crate::scalar::Var;

/// Spectral label attached to a generator, e.g. `lam` in `T[1,2]@lam`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Var);

impl Label {
    pub fn new(name: &str) -> Self {
        Label(Var::new(name))
    }

    pub fn name(&self) -> &'static str {
        self.0.name()
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum GenKind {
    /// Matrix coordinate `T_i^j`.
    T,
    /// Bosonic plane coordinate `e_i`.
    E,
    /// Grassmann plane coordinate `xi_i`.
    Xi,
    /// Quantum determinant `D`.
    Det,
    /// Its inverse `Dbar`.
    DetInv,
    Custom(Label),
}

/// A free generator. Spectral labels are part of the identity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Generator {
    pub kind: GenKind,
    pub idx: [u8; 2],
    pub label: Option<Label>,
}

impl Generator {
    /// `T_i^j` with 1-based indices.
    pub fn t(i: usize, j: usize) -> Self {
        Generator {
            kind: GenKind::T,
            idx: [i as u8, j as u8],
            label: None,
        }
    }

    pub fn t_labeled(i: usize, j: usize, label: Option<Label>) -> Self {
        Generator {
            kind: GenKind::T,
            idx: [i as u8, j as u8],
            label,
        }
    }

    pub fn e(i: usize) -> Self {
        Generator {
            kind: GenKind::E,
            idx: [i as u8, 0],
            label: None,
        }
    }

    pub fn xi(i: usize) -> Self {
        Generator {
            kind: GenKind::Xi,
            idx: [i as u8, 0],
            label: None,
        }
    }

    pub fn det() -> Self {
        Generator {
            kind: GenKind::Det,
            idx: [0, 0],
            label: None,
        }
    }

    pub fn det_inv() -> Self {
        Generator {
            kind: GenKind::DetInv,
            idx: [0, 0],
            label: None,
        }
    }

    pub fn custom(name: &str) -> Self {
        Generator {
            kind: GenKind::Custom(Label::new(name)),
            idx: [0, 0],
            label: None,
        }
    }

    pub fn is_t(&self) -> bool {
        self.kind == GenKind::T
    }

    /// Row and column of a matrix coordinate (1-based).
    pub fn ij(&self) -> (usize, usize) {
        (self.idx[0] as usize, self.idx[1] as usize)
    }

    /// Plane coordinate index (1-based).
    pub fn index(&self) -> usize {
        self.idx[0] as usize
    }

    /// Short name `a, b, c, d` for an unlabeled 2x2 matrix coordinate.
    pub fn abcd(&self) -> Option<char> {
        if self.kind != GenKind::T || self.label.is_some() {
            return None;
        }
        match self.idx {
            [1, 1] => Some('a'),
            [1, 2] => Some('b'),
            [2, 1] => Some('c'),
            [2, 2] => Some('d'),
            _ => None,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::T => write!(f, "T[{},{}]", self.idx[0], self.idx[1])?,
            GenKind::E => write!(f, "e[{}]", self.idx[0])?,
            GenKind::Xi => write!(f, "xi[{}]", self.idx[0])?,
            GenKind::Det => f.write_str("D")?,
            GenKind::DetInv => f.write_str("Dbar")?,
            GenKind::Custom(name) => write!(f, "{name}")?,
        }
        if let Some(l) = self.label {
            write!(f, "@{l}")?;
        }
        Ok(())
    }
}
