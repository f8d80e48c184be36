//! Two-symbol Wang tiles, tile sets and the 32-element symmetry group.
//!
//! A tile carries one color in `{0, 1}` on each of its bottom, left, top and
//! right edges. Tiles are numbered `1..=16` by the counting function
//! `psi(b, l, t, r) = 1 + 8b + 4l + 2t + r`; a [`TileSet`] stores bit
//! `psi - 1` for each member.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Classical tile names, indexed by `psi - 1`.
const NAMES: [&str; 16] = [
    "O", "E4", "E2", "R", "E1", "I", "T", "Ē3", "E3", "B", "J", "Ē1", "L", "Ē2", "Ē4", "E",
];

/// A single Wang tile with edge colors `(bottom, left, top, right)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile(u8);

impl Tile {
    pub const fn new(b: u8, l: u8, t: u8, r: u8) -> Tile {
        assert!(
            b < 2 && l < 2 && t < 2 && r < 2,
            "edge colors must be 0 or 1"
        );
        Tile(8 * b + 4 * l + 2 * t + r)
    }

    /// Tile with counting-function index `psi` in `1..=16`.
    pub fn from_psi(psi: u8) -> Option<Tile> {
        (1..=16).contains(&psi).then(|| Tile(psi - 1))
    }

    pub fn from_name(name: &str) -> Option<Tile> {
        let canonical = match name.strip_suffix("bar") {
            Some(stem) if stem.len() == 2 && stem.starts_with('E') => {
                format!("Ē{}", &stem[1..])
            }
            _ => name.to_string(),
        };
        NAMES
            .iter()
            .position(|n| *n == canonical)
            .map(|i| Tile(i as u8))
    }

    pub const fn psi(self) -> u8 {
        self.0 + 1
    }

    /// Zero-based index `psi - 1`, also the bit position inside a [`TileSet`].
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn bottom(self) -> u8 {
        (self.0 >> 3) & 1
    }

    pub const fn left(self) -> u8 {
        (self.0 >> 2) & 1
    }

    pub const fn top(self) -> u8 {
        (self.0 >> 1) & 1
    }

    pub const fn right(self) -> u8 {
        self.0 & 1
    }

    pub const fn edges(self) -> (u8, u8, u8, u8) {
        (self.bottom(), self.left(), self.top(), self.right())
    }

    pub fn name(self) -> &'static str {
        NAMES[self.index()]
    }

    pub fn all() -> impl Iterator<Item = Tile> {
        (0..16).map(Tile)
    }
}

impl fmt::Debug for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (b, l, t, r) = self.edges();
        write!(f, "{}({}{}{}{})", self.name(), b, l, t, r)
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A subset of the 16 tiles, stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TileSet(u16);

impl TileSet {
    pub const EMPTY: TileSet = TileSet(0);
    pub const FULL: TileSet = TileSet(u16::MAX);

    pub const fn from_mask(mask: u16) -> TileSet {
        TileSet(mask)
    }

    pub const fn mask(self) -> u16 {
        self.0
    }

    /// Builds a set from counting-function indices.
    ///
    /// Panics on an index outside `1..=16`; use [`parse_tileset`] for
    /// untrusted input.
    pub fn from_psis(psis: &[u8]) -> TileSet {
        psis.iter()
            .map(|&p| Tile::from_psi(p).unwrap_or_else(|| panic!("tile index {p} out of range")))
            .collect()
    }

    pub const fn contains(self, tile: Tile) -> bool {
        self.0 >> tile.0 & 1 == 1
    }

    pub const fn with(self, tile: Tile) -> TileSet {
        TileSet(self.0 | 1 << tile.0)
    }

    pub const fn without(self, tile: Tile) -> TileSet {
        TileSet(self.0 & !(1 << tile.0))
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn is_subset_of(self, other: TileSet) -> bool {
        self.0 & other.0 == self.0
    }

    pub const fn union(self, other: TileSet) -> TileSet {
        TileSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: TileSet) -> TileSet {
        TileSet(self.0 & other.0)
    }

    pub const fn difference(self, other: TileSet) -> TileSet {
        TileSet(self.0 & !other.0)
    }

    pub const fn complement(self) -> TileSet {
        TileSet(!self.0)
    }

    /// Members in ascending counting-function order.
    pub fn iter(self) -> impl Iterator<Item = Tile> {
        Tile::all().filter(move |t| self.contains(*t))
    }

    pub fn psis(self) -> Vec<u8> {
        self.iter().map(Tile::psi).collect()
    }

    /// Every subset of the 16 tiles, in mask order.
    pub fn all() -> impl Iterator<Item = TileSet> {
        (0..=u16::MAX).map(TileSet)
    }
}

impl FromIterator<Tile> for TileSet {
    fn from_iter<I: IntoIterator<Item = Tile>>(iter: I) -> Self {
        iter.into_iter().fold(TileSet::EMPTY, TileSet::with)
    }
}

impl fmt::Debug for TileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TileSet{:?}", self.psis())
    }
}

impl fmt::Display for TileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, tile) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(tile.name())?;
        }
        f.write_str("}")
    }
}

impl Serialize for TileSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.psis().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TileSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let psis = Vec::<u8>::deserialize(deserializer)?;
        let mut set = TileSet::EMPTY;
        for psi in psis {
            let tile = Tile::from_psi(psi).ok_or_else(|| {
                serde::de::Error::custom(format!("tile index {psi} out of range"))
            })?;
            set = set.with(tile);
        }
        Ok(set)
    }
}

/// An element `(tau, eta_h, eta_v)` of the symmetry group acting on tiles.
///
/// `tau = m^reflected * rho^rotation` is an element of the dihedral group of
/// the unit square. `rho` sends `(b, l, t, r)` to `(r, b, l, t)` and `m`
/// (reflection about the vertical axis) sends it to `(b, r, t, l)`.
/// `swap_horizontal` exchanges the two colors on bottom/top edges and
/// `swap_vertical` on left/right edges. The action applies `tau` first, then
/// the horizontal color swap, then the vertical one.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct GroupElement {
    pub rotation: u8,
    pub reflected: bool,
    pub swap_horizontal: bool,
    pub swap_vertical: bool,
}

pub const GROUP_ORDER: usize = 32;

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        rotation: 0,
        reflected: false,
        swap_horizontal: false,
        swap_vertical: false,
    };

    /// Position of this element in [`GroupElement::all`].
    pub const fn index(self) -> usize {
        ((((self.reflected as usize) * 4 + (self.rotation as usize % 4)) * 2
            + self.swap_horizontal as usize)
            * 2)
            + self.swap_vertical as usize
    }

    pub const fn from_index(index: usize) -> GroupElement {
        GroupElement {
            rotation: ((index >> 2) & 3) as u8,
            reflected: (index >> 4) & 1 == 1,
            swap_horizontal: (index >> 1) & 1 == 1,
            swap_vertical: index & 1 == 1,
        }
    }

    pub fn all() -> impl Iterator<Item = GroupElement> {
        (0..GROUP_ORDER).map(GroupElement::from_index)
    }

    fn act(self, tile: Tile) -> Tile {
        let (mut b, mut l, mut t, mut r) = tile.edges();
        for _ in 0..self.rotation % 4 {
            (b, l, t, r) = (r, b, l, t);
        }
        if self.reflected {
            (l, r) = (r, l);
        }
        if self.swap_horizontal {
            (b, t) = (1 - b, 1 - t);
        }
        if self.swap_vertical {
            (l, r) = (1 - l, 1 - r);
        }
        Tile::new(b, l, t, r)
    }

    pub fn apply(self, tile: Tile) -> Tile {
        Tile(table().perms[self.index()][tile.index()])
    }

    pub fn apply_set(self, set: TileSet) -> TileSet {
        set.iter().map(|t| self.apply(t)).collect()
    }

    /// The element acting as `self` after `first`.
    pub fn compose(self, first: GroupElement) -> GroupElement {
        GroupElement::from_index(table().compose[self.index()][first.index()] as usize)
    }

    pub fn inverse(self) -> GroupElement {
        GroupElement::from_index(table().inverse[self.index()] as usize)
    }

    /// Permutation of tile indices (`psi - 1`) realized by this element.
    pub fn permutation(self) -> [u8; 16] {
        table().perms[self.index()]
    }
}

impl Default for GroupElement {
    fn default() -> Self {
        GroupElement::IDENTITY
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tau = match (self.reflected, self.rotation % 4) {
            (false, 0) => "I".to_string(),
            (false, 1) => "ρ".to_string(),
            (false, k) => format!("ρ^{k}"),
            (true, 0) => "m".to_string(),
            (true, 1) => "mρ".to_string(),
            (true, k) => format!("mρ^{k}"),
        };
        let h = if self.swap_horizontal { "swap" } else { "id" };
        let v = if self.swap_vertical { "swap" } else { "id" };
        write!(f, "({tau}, η_h={h}, η_v={v})")
    }
}

struct GroupTable {
    perms: [[u8; 16]; GROUP_ORDER],
    compose: [[u8; GROUP_ORDER]; GROUP_ORDER],
    inverse: [u8; GROUP_ORDER],
}

fn table() -> &'static GroupTable {
    static TABLE: OnceLock<GroupTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut perms = [[0u8; 16]; GROUP_ORDER];
        for (g, perm) in perms.iter_mut().enumerate() {
            let element = GroupElement::from_index(g);
            for tile in Tile::all() {
                perm[tile.index()] = element.act(tile).0;
            }
        }
        let lookup = |p: &[u8; 16]| {
            perms
                .iter()
                .position(|q| q == p)
                .expect("symmetry group is closed under composition") as u8
        };
        let mut compose = [[0u8; GROUP_ORDER]; GROUP_ORDER];
        let mut inverse = [0u8; GROUP_ORDER];
        for outer in 0..GROUP_ORDER {
            for inner in 0..GROUP_ORDER {
                let mut p = [0u8; 16];
                for (x, slot) in p.iter_mut().enumerate() {
                    *slot = perms[outer][perms[inner][x] as usize];
                }
                let c = lookup(&p);
                compose[outer][inner] = c;
                if c == 0 {
                    inverse[outer] = inner as u8;
                }
            }
        }
        GroupTable {
            perms,
            compose,
            inverse,
        }
    })
}

/// Image of `tile` under `g`.
pub fn apply_group_element(tile: Tile, g: GroupElement) -> Tile {
    g.apply(tile)
}

/// Distinct images of `set` under the group, sorted by mask.
pub fn orbit(set: TileSet) -> Vec<TileSet> {
    let mut images: Vec<TileSet> = GroupElement::all().map(|g| g.apply_set(set)).collect();
    images.sort_unstable();
    images.dedup();
    images
}

/// The image with the smallest mask; constant on each orbit.
pub fn canonicalize(set: TileSet) -> TileSet {
    canonical_form(set).0
}

/// Canonical image together with the first group element producing it.
pub fn canonical_form(set: TileSet) -> (TileSet, GroupElement) {
    GroupElement::all()
        .map(|g| (g.apply_set(set), g))
        .min_by_key(|(image, g)| (*image, g.index()))
        .expect("group is nonempty")
}

/// Group elements fixing `set`.
pub fn stabilizer(set: TileSet) -> Vec<GroupElement> {
    GroupElement::all()
        .filter(|g| g.apply_set(set) == set)
        .collect()
}

/// Some `g` with `g·from == to`, if the two sets are equivalent.
pub fn transporter(from: TileSet, to: TileSet) -> Option<GroupElement> {
    GroupElement::all().find(|g| g.apply_set(from) == to)
}

/// Output notation for [`format_tileset`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TileSetStyle {
    /// Classical names, e.g. `O,E1,Ē2`.
    Names,
    /// Counting-function indices, e.g. `1,5,14`.
    Indices,
    /// Sixteen-bit mask, e.g. `0x2011`.
    Hex,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown tile name `{0}`")]
    UnknownName(String),
    #[error("tile index {0} is outside 1..=16")]
    IndexOutOfRange(i64),
    #[error("tile `{0}` listed more than once")]
    Duplicate(String),
    #[error("invalid hex mask `{0}`")]
    BadHex(String),
}

/// Parses a comma-separated list of tile indices or names, a `0x` mask, or
/// the keyword `ALL`.
pub fn parse_tileset(text: &str) -> Result<TileSet, ParseError> {
    let text = text.trim();
    let text = text
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(text)
        .trim();
    if text.is_empty() {
        return Ok(TileSet::EMPTY);
    }
    if text.eq_ignore_ascii_case("all") {
        return Ok(TileSet::FULL);
    }
    if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        return u16::from_str_radix(hex, 16)
            .map(TileSet::from_mask)
            .map_err(|_| ParseError::BadHex(text.to_string()));
    }
    let mut set = TileSet::EMPTY;
    for token in text.split(',').map(str::trim) {
        let tile = if token.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
            let value: i64 = token
                .parse()
                .map_err(|_| ParseError::UnknownName(token.to_string()))?;
            u8::try_from(value)
                .ok()
                .and_then(Tile::from_psi)
                .ok_or(ParseError::IndexOutOfRange(value))?
        } else {
            Tile::from_name(token).ok_or_else(|| ParseError::UnknownName(token.to_string()))?
        };
        if set.contains(tile) {
            return Err(ParseError::Duplicate(token.to_string()));
        }
        set = set.with(tile);
    }
    Ok(set)
}

pub fn format_tileset(set: TileSet, style: TileSetStyle) -> String {
    match style {
        TileSetStyle::Names => set.iter().map(Tile::name).collect::<Vec<_>>().join(","),
        TileSetStyle::Indices => set
            .iter()
            .map(|t| t.psi().to_string())
            .collect::<Vec<_>>()
            .join(","),
        TileSetStyle::Hex => format!("0x{:04x}", set.mask()),
    }
}

impl FromStr for TileSet {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tileset(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(names: &[&str]) -> TileSet {
        names.iter().map(|n| Tile::from_name(n).unwrap()).collect()
    }

    #[test]
    fn name_matrix_matches_numbering() {
        let names = [
            ["O", "E2", "E4", "R"],
            ["E3", "J", "B", "Ē1"],
            ["E1", "T", "I", "Ē3"],
            ["L", "Ē4", "Ē2", "E"],
        ];
        let psis = [
            [1, 3, 2, 4],
            [9, 11, 10, 12],
            [5, 7, 6, 8],
            [13, 15, 14, 16],
        ];
        for (row_n, row_p) in names.iter().zip(psis) {
            for (name, psi) in row_n.iter().zip(row_p) {
                assert_eq!(Tile::from_name(name).unwrap().psi(), psi, "{name}");
            }
        }
    }

    #[test]
    fn psi_encodes_edges() {
        for tile in Tile::all() {
            let (b, l, t, r) = tile.edges();
            assert_eq!(tile.psi(), 1 + 8 * b + 4 * l + 2 * t + r);
            assert_eq!(Tile::new(b, l, t, r), tile);
        }
        assert_eq!(Tile::from_name("T").unwrap().edges(), (0, 1, 1, 0));
        assert_eq!(Tile::from_name("R").unwrap().edges(), (0, 0, 1, 1));
    }

    #[test]
    fn rotation_fixes_uniform_tile() {
        let rho = GroupElement {
            rotation: 1,
            ..GroupElement::IDENTITY
        };
        let o = Tile::from_psi(1).unwrap();
        assert_eq!(apply_group_element(o, rho), o);
    }

    #[test]
    fn vertical_color_swap_sends_e1_to_e4() {
        let g = GroupElement {
            swap_vertical: true,
            ..GroupElement::IDENTITY
        };
        let e1 = Tile::from_name("E1").unwrap();
        let image = apply_group_element(e1, g);
        assert_eq!(image.edges(), (0, 0, 0, 1));
        assert_eq!(image.psi(), 2);
        assert_eq!(image.name(), "E4");
    }

    #[test]
    fn identity_acts_trivially() {
        for tile in Tile::all() {
            assert_eq!(GroupElement::IDENTITY.apply(tile), tile);
        }
    }

    #[test]
    fn dihedral_relations() {
        let rho = GroupElement {
            rotation: 1,
            ..GroupElement::IDENTITY
        };
        let m = GroupElement {
            reflected: true,
            ..GroupElement::IDENTITY
        };
        let rho4 = rho.compose(rho).compose(rho).compose(rho);
        assert_eq!(rho4, GroupElement::IDENTITY);
        assert_eq!(m.compose(m), GroupElement::IDENTITY);
        assert_eq!(m.compose(rho).compose(m), rho.inverse());
    }

    #[test]
    fn thirty_two_distinct_actions() {
        let mut perms: Vec<_> = GroupElement::all().map(GroupElement::permutation).collect();
        perms.sort_unstable();
        perms.dedup();
        assert_eq!(perms.len(), GROUP_ORDER);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(named(&["I"])), named(&["O"]));
        assert_eq!(canonicalize(TileSet::EMPTY), TileSet::EMPTY);
        assert_eq!(canonicalize(named(&["E2", "E3"])), named(&["E1", "E4"]));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit(named(&["O"])), {
            let mut v = vec![named(&["O"]), named(&["I"]), named(&["J"]), named(&["E"])];
            v.sort();
            v
        });
        let bt = orbit(named(&["B", "T"]));
        assert_eq!(bt.len(), 2);
        assert!(bt.contains(&named(&["L", "R"])));
        assert_eq!(orbit(named(&["E1", "E2", "B"])).len(), 16);
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_tileset("1,6,11").unwrap(), named(&["O", "I", "J"]));
        assert_eq!(parse_tileset("O,E").unwrap(), TileSet::from_psis(&[1, 16]));
        assert_eq!(parse_tileset("").unwrap(), TileSet::EMPTY);
        assert_eq!(parse_tileset("ALL").unwrap(), TileSet::FULL);
        assert_eq!(
            parse_tileset("0x0021").unwrap(),
            TileSet::from_psis(&[1, 6])
        );
        assert_eq!(
            parse_tileset("E1bar, Ē2").unwrap(),
            TileSet::from_psis(&[12, 14])
        );
        assert_eq!(
            parse_tileset("{1, 4}").unwrap(),
            TileSet::from_psis(&[1, 4])
        );
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_tileset("Q"), Err(ParseError::UnknownName("Q".into())));
        assert_eq!(parse_tileset("17"), Err(ParseError::IndexOutOfRange(17)));
        assert_eq!(parse_tileset("0"), Err(ParseError::IndexOutOfRange(0)));
        assert_eq!(parse_tileset("1,O"), Err(ParseError::Duplicate("O".into())));
        assert!(matches!(parse_tileset("0xZZ"), Err(ParseError::BadHex(_))));
    }

    #[test]
    fn set_operations() {
        let a = TileSet::from_psis(&[1, 2, 3]);
        let b = TileSet::from_psis(&[3, 4]);
        assert_eq!(a.union(b), TileSet::from_psis(&[1, 2, 3, 4]));
        assert_eq!(a.intersection(b), TileSet::from_psis(&[3]));
        assert_eq!(a.difference(b), TileSet::from_psis(&[1, 2]));
        assert!(TileSet::from_psis(&[1, 3]).is_subset_of(a));
        assert_eq!(a.len(), 3);
    }
}
