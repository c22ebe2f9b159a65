//! AAMI EC57 five-class beat taxonomy.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// The five AAMI beat classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AamiLabel {
    N,
    S,
    V,
    F,
    Q,
}

impl AamiLabel {
    pub const ALL: [AamiLabel; 5] = [
        AamiLabel::N,
        AamiLabel::S,
        AamiLabel::V,
        AamiLabel::F,
        AamiLabel::Q,
    ];

    /// Stable class index used for model outputs and tie-breaking.
    pub fn index(self) -> usize {
        match self {
            AamiLabel::N => 0,
            AamiLabel::S => 1,
            AamiLabel::V => 2,
            AamiLabel::F => 3,
            AamiLabel::Q => 4,
        }
    }

    pub fn from_index(idx: usize) -> Option<AamiLabel> {
        AamiLabel::ALL.get(idx).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AamiLabel::N => "N",
            AamiLabel::S => "S",
            AamiLabel::V => "V",
            AamiLabel::F => "F",
            AamiLabel::Q => "Q",
        }
    }
}

impl std::fmt::Display for AamiLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Beat-symbol -> AAMI class table. The default is the standard EC57
/// grouping; a config file may override individual entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AamiMap {
    map: BTreeMap<char, AamiLabel>,
}

impl Default for AamiMap {
    fn default() -> Self {
        use AamiLabel::*;
        let entries = [
            ('N', N),
            ('L', N),
            ('R', N),
            ('e', N),
            ('j', N),
            ('A', S),
            ('a', S),
            ('J', S),
            ('S', S),
            ('V', V),
            ('E', V),
            ('F', F),
            ('/', Q),
            ('f', Q),
            ('Q', Q),
        ];
        AamiMap {
            map: entries.into_iter().collect(),
        }
    }
}

impl AamiMap {
    /// Map one MIT symbol; `None` for non-beat annotations.
    pub fn lookup(&self, symbol: char) -> Option<AamiLabel> {
        self.map.get(&symbol).copied()
    }

    /// Apply overrides from config: `{"B": "N"}` adds or replaces entries.
    pub fn with_overrides(mut self, overrides: &BTreeMap<String, String>) -> crate::Result<Self> {
        for (sym, class) in overrides {
            let mut chars = sym.chars();
            let (c, rest) = (chars.next(), chars.next());
            let c = match (c, rest) {
                (Some(c), None) => c,
                _ => {
                    return Err(crate::EcgError::Config(format!(
                        "AAMI override key '{sym}' must be a single character"
                    )))
                }
            };
            let label = match class.as_str() {
                "N" => AamiLabel::N,
                "S" => AamiLabel::S,
                "V" => AamiLabel::V,
                "F" => AamiLabel::F,
                "Q" => AamiLabel::Q,
                other => {
                    return Err(crate::EcgError::Config(format!(
                        "unknown AAMI class '{other}'"
                    )))
                }
            };
            self.map.insert(c, label);
        }
        Ok(self)
    }
}

/// Standard-table lookup with the default map.
pub fn map_to_aami(symbol: char) -> Option<AamiLabel> {
    AamiMap::default().lookup(symbol)
}
