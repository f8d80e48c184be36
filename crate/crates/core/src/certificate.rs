//! Sufficient conditions for zero entropy and certificates built on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::periodicity::{maximal_extensions, GeneratorCatalog};
use crate::tile::{GroupElement, Tile, TileSet};

/// The five zero-entropy criteria, in the order they are tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Proposition {
    #[serde(rename = "4.1")]
    UniqueBottomLeft,
    #[serde(rename = "4.2")]
    MonotoneExceptR,
    #[serde(rename = "4.3")]
    DiagonalDecreasing,
    #[serde(rename = "4.4")]
    RestrictedSides,
    #[serde(rename = "4.5")]
    AnnularFour,
}

impl Proposition {
    pub const ALL: [Proposition; 5] = [
        Proposition::UniqueBottomLeft,
        Proposition::MonotoneExceptR,
        Proposition::DiagonalDecreasing,
        Proposition::RestrictedSides,
        Proposition::AnnularFour,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Proposition::UniqueBottomLeft => "4.1",
            Proposition::MonotoneExceptR => "4.2",
            Proposition::DiagonalDecreasing => "4.3",
            Proposition::RestrictedSides => "4.4",
            Proposition::AnnularFour => "4.5",
        }
    }

    pub fn from_label(label: &str) -> Option<Proposition> {
        Proposition::ALL.into_iter().find(|p| p.label() == label)
    }

    /// The hypothesis on `set` itself, without any symmetry.
    pub fn holds_on(self, set: TileSet) -> bool {
        match self {
            Proposition::UniqueBottomLeft => check_prop_41(set),
            Proposition::MonotoneExceptR => check_prop_42(set),
            Proposition::DiagonalDecreasing => check_prop_43(set),
            Proposition::RestrictedSides => check_prop_44(set),
            Proposition::AnnularFour => set.is_subset_of(annular_four()),
        }
    }

    /// First group element `g` whose image `g·set` satisfies the hypothesis.
    pub fn holds_up_to_symmetry(self, set: TileSet) -> Option<GroupElement> {
        GroupElement::all().find(|g| self.holds_on(g.apply_set(set)))
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `{O, E1, Ē2, R}`.
fn annular_four() -> TileSet {
    TileSet::from_psis(&[1, 4, 5, 14])
}

/// The map `tile -> (bottom, left)` is injective on the set.
pub fn check_prop_41(set: TileSet) -> bool {
    let mut seen = 0u8;
    for tile in set.iter() {
        let key = 1 << (2 * tile.bottom() + tile.left());
        if seen & key != 0 {
            return false;
        }
        seen |= key;
    }
    true
}

/// Every tile other than `R = (0,0,1,1)` has `top <= bottom` and
/// `left <= right`.
pub fn check_prop_42(set: TileSet) -> bool {
    let r = Tile::new(0, 0, 1, 1);
    set.iter()
        .filter(|&t| t != r)
        .all(|t| t.top() <= t.bottom() && t.left() <= t.right())
}

/// No tile has `(bottom, left) = (0, 1)` and none has `(top, right) = (1, 0)`.
pub fn check_prop_43(set: TileSet) -> bool {
    set.iter()
        .all(|t| (t.bottom(), t.left()) != (0, 1) && (t.top(), t.right()) != (1, 0))
}

/// `(left, right)` is never `(1, 0)`, and tiles sharing `(left, right)` of
/// `(0, 0)` or of `(1, 1)` have distinct bottom colors.
pub fn check_prop_44(set: TileSet) -> bool {
    let mut bottoms = [0u8; 2];
    for tile in set.iter() {
        let class = match (tile.left(), tile.right()) {
            (1, 0) => return false,
            (0, 1) => continue,
            (l, _) => l as usize,
        };
        let key = 1 << tile.bottom();
        if bottoms[class] & key != 0 {
            return false;
        }
        bottoms[class] |= key;
    }
    true
}

/// The set lies inside some image of `{O, E1, Ē2, R}`.
pub fn check_prop_45(set: TileSet) -> bool {
    Proposition::AnnularFour.holds_up_to_symmetry(set).is_some()
}

/// Evidence that a set has zero entropy: `group_element` maps the set (or
/// the maximal extension `container` holding it) onto one satisfying the
/// cited proposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCertificate {
    pub proposition: Proposition,
    pub group_element: GroupElement,
    pub container: Option<TileSet>,
}

impl ZeroCertificate {
    /// Re-checks the certificate against `set`.
    pub fn verify(&self, set: TileSet) -> bool {
        let target = match self.container {
            Some(container) if set.is_subset_of(container) => container,
            Some(_) => return false,
            None => set,
        };
        self.proposition
            .holds_on(self.group_element.apply_set(target))
    }
}

/// Looks for a proposition whose hypothesis holds on an image of a
/// maximal extension containing `set`, or failing that on an image of
/// `set` itself. Propositions are tried in numeric order.
pub fn certify_zero(set: TileSet, catalog: &GeneratorCatalog) -> Option<ZeroCertificate> {
    let union = catalog.decompose(set).cycle_union();
    let containers: Vec<TileSet> = maximal_extensions(union, catalog)
        .expect("a cycle union is always a valid input")
        .into_iter()
        .filter(|c| set.is_subset_of(*c))
        .collect();
    for proposition in Proposition::ALL {
        for &container in &containers {
            if let Some(g) = proposition.holds_up_to_symmetry(container) {
                return Some(ZeroCertificate {
                    proposition,
                    group_element: g,
                    container: Some(container),
                });
            }
        }
        if let Some(g) = proposition.holds_up_to_symmetry(set) {
            return Some(ZeroCertificate {
                proposition,
                group_element: g,
                container: None,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(psis: &[u8]) -> TileSet {
        TileSet::from_psis(psis)
    }

    #[test]
    fn prop_41_examples() {
        assert!(Proposition::UniqueBottomLeft
            .holds_up_to_symmetry(s(&[3, 5, 10]))
            .is_some());
        assert!(check_prop_41(s(&[3, 5, 10])));
        assert!(check_prop_41(TileSet::EMPTY));
        // O and E4 both have (b, l) = (0, 0).
        assert!(!check_prop_41(s(&[1, 2])));
    }

    #[test]
    fn prop_42_examples() {
        assert!(Proposition::MonotoneExceptR
            .holds_up_to_symmetry(s(&[1, 2, 3, 4, 7, 8, 12]))
            .is_some());
        assert!(check_prop_42(s(&[4])));
        assert!(!check_prop_42(s(&[7])));
    }

    #[test]
    fn prop_43_examples() {
        assert!(Proposition::DiagonalDecreasing
            .holds_up_to_symmetry(s(&[2, 3, 4, 7, 8, 10, 12]))
            .is_some());
        assert!(check_prop_43(TileSet::EMPTY));
        assert!(!check_prop_43(s(&[5])));
    }

    #[test]
    fn prop_44_examples() {
        assert!(Proposition::RestrictedSides
            .holds_up_to_symmetry(s(&[2, 5, 9, 10, 13, 14]))
            .is_some());
        assert!(check_prop_44(TileSet::EMPTY));
        // O and E2 share (l, r) = (0, 0) and bottom color 0.
        assert!(!check_prop_44(s(&[1, 3])));
        // E4 has (l, r) = (0, 1) and does not collide with O.
        assert!(check_prop_44(s(&[1, 2])));
    }

    #[test]
    fn prop_45_examples() {
        assert!(check_prop_45(s(&[1, 4, 5, 14])));
        assert!(check_prop_45(TileSet::EMPTY));
        assert!(!check_prop_45(TileSet::FULL));
    }

    #[test]
    fn certificates() {
        let catalog = GeneratorCatalog::standard();
        let cert = certify_zero(s(&[1, 4, 5, 14]), catalog).unwrap();
        assert_eq!(cert.proposition, Proposition::AnnularFour);
        assert!(cert.verify(s(&[1, 4, 5, 14])));

        assert!(certify_zero(TileSet::EMPTY, catalog).is_some());
        assert!(certify_zero(s(&[1, 6, 7, 10, 11, 16]), catalog).is_none());
    }

    #[test]
    fn labels_round_trip() {
        for p in Proposition::ALL {
            assert_eq!(Proposition::from_label(p.label()), Some(p));
        }
    }
}
