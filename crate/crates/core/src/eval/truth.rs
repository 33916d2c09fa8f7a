use std::fmt;

/// Three-valued truth with Kleene connectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Truth {
    False,
    Null,
    True,
}

impl Truth {
    pub const ALL: [Truth; 3] = [Truth::True, Truth::False, Truth::Null];

    /// Kleene conjunction: the minimum under False < Null < True.
    pub fn and(self, other: Truth) -> Truth {
        self.min(other)
    }

    /// Kleene disjunction: the maximum under False < Null < True.
    pub fn or(self, other: Truth) -> Truth {
        self.max(other)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Null => Truth::Null,
        }
    }

    pub fn is_true(self) -> bool {
        self == Truth::True
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "True",
            Truth::False => "False",
            Truth::Null => "Null",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::Truth::{self, False, Null, True};

    #[test]
    fn kleene_tables() {
        let and = [
            (True, True, True),
            (True, False, False),
            (True, Null, Null),
            (False, False, False),
            (False, Null, False),
            (Null, Null, Null),
        ];
        for (a, b, r) in and {
            assert_eq!(a.and(b), r);
            assert_eq!(b.and(a), r);
        }
        let or = [
            (True, True, True),
            (True, False, True),
            (True, Null, True),
            (False, False, False),
            (False, Null, Null),
            (Null, Null, Null),
        ];
        for (a, b, r) in or {
            assert_eq!(a.or(b), r);
            assert_eq!(b.or(a), r);
        }
        assert_eq!(Truth::ALL.map(Truth::not), [False, True, Null]);
    }
}
