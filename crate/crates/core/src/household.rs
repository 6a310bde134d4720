//! Generated household domains in three sizes.
//!
//! The robot walks between objects, grabs and places things with either
//! hand, opens containers, switches and plugs in appliances, and cleans or
//! cuts items using tools (`faucet` for washing, `rag` for wiping,
//! `kitchenknife` for cutting).

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{Domain, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Size {
    Small,
    Medium,
    Large,
}

impl Size {
    pub const ALL: [Size; 3] = [Size::Small, Size::Medium, Size::Large];

    pub fn as_str(self) -> &'static str {
        match self {
            Size::Small => "small",
            Size::Medium => "medium",
            Size::Large => "large",
        }
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Size {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Size::ALL
            .into_iter()
            .find(|z| z.as_str() == s)
            .ok_or_else(|| format!("unknown domain size `{s}` (expected small, medium or large)"))
    }
}

const G: &str = "GRABBABLE";
const S: &str = "SURFACES";
const C: &str = "CONTAINERS";
const SW: &str = "HAS_SWITCH";
const P: &str = "HAS_PLUG";
const CUT: &str = "CUTABLE";
const W: &str = "WASHABLE";

/// `(object, categories, first size that includes it)`.
const OBJECTS: &[(&str, &[&str], Size)] = &[
    ("apple", &[G, CUT, W], Size::Small),
    ("bread", &[G, CUT], Size::Small),
    ("cup", &[G, W], Size::Small),
    ("rag", &[G], Size::Small),
    ("kitchenknife", &[G], Size::Small),
    ("candle", &[G, SW], Size::Small),
    ("table", &[S], Size::Small),
    ("counter", &[S], Size::Small),
    ("fridge", &[C], Size::Small),
    ("microwave", &[C, SW, P], Size::Small),
    ("faucet", &[SW], Size::Small),
    ("peach", &[G, CUT, W], Size::Medium),
    ("banana", &[G, CUT, W], Size::Medium),
    ("plate", &[G, W], Size::Medium),
    ("book", &[G], Size::Medium),
    ("desk", &[S], Size::Medium),
    ("sofa", &[S], Size::Medium),
    ("cabinet", &[C], Size::Medium),
    ("dishwasher", &[C, SW, P], Size::Medium),
    ("tv", &[SW, P], Size::Medium),
    ("lamp", &[SW, P], Size::Medium),
    ("carrot", &[G, CUT, W], Size::Large),
    ("cucumber", &[G, CUT, W], Size::Large),
    ("milk", &[G], Size::Large),
    ("juice", &[G], Size::Large),
    ("chips", &[G], Size::Large),
    ("cupcake", &[G], Size::Large),
    ("mug", &[G, W], Size::Large),
    ("bowl", &[G, W], Size::Large),
    ("fork", &[G, W], Size::Large),
    ("toothbrush", &[G, W], Size::Large),
    ("towel", &[G], Size::Large),
    ("pillow", &[G], Size::Large),
    ("remote", &[G], Size::Large),
    ("phone", &[G, SW], Size::Large),
    ("bed", &[S], Size::Large),
    ("nightstand", &[S], Size::Large),
    ("bookshelf", &[S], Size::Large),
    ("kitchentable", &[S], Size::Large),
    ("box", &[C], Size::Large),
    ("drawer", &[C], Size::Large),
    ("oven", &[C, SW, P], Size::Large),
    ("garbagecan", &[C], Size::Large),
    ("toaster", &[SW, P], Size::Large),
    ("computer", &[SW, P], Size::Large),
    ("radio", &[SW, P], Size::Large),
    ("lightswitch", &[SW], Size::Large),
];

const CATEGORIES: [&str; 7] = [G, S, C, SW, P, CUT, W];

const PREDICATES: &str = "\
  IsNear(ALL)
  IsLeftHolding(GRABBABLE)
  IsRightHolding(GRABBABLE)
  IsLeftHandEmpty
  IsRightHandEmpty
  IsOn(GRABBABLE, SURFACES)
  IsIn(GRABBABLE, CONTAINERS)
  IsOpen(CONTAINERS)
  IsClose(CONTAINERS)
  IsSwitchedOn(HAS_SWITCH)
  IsSwitchedOff(HAS_SWITCH)
  IsPowered(HAS_SWITCH)
  IsPlugged(HAS_PLUG)
  IsUnplugged(HAS_PLUG)
  IsClean(ALL)
  IsCut(CUTABLE)
";

const ACTIONS: &str = "\
  Walk(x: ALL)
    add: IsNear(x)
    mutex: IsNear
    cost: 5
  LeftGrab(x: GRABBABLE)
    pre: IsNear(x), IsLeftHandEmpty
    add: IsLeftHolding(x)
    del: IsLeftHandEmpty, IsOn(x, *), IsIn(x, *)
    cost: 2
  RightGrab(x: GRABBABLE)
    pre: IsNear(x), IsRightHandEmpty
    add: IsRightHolding(x)
    del: IsRightHandEmpty, IsOn(x, *), IsIn(x, *)
    cost: 2
  LeftPut(x: GRABBABLE, y: SURFACES)
    pre: IsLeftHolding(x), IsNear(y)
    add: IsOn(x, y), IsLeftHandEmpty
    del: IsLeftHolding(x), IsOn(x, *), IsIn(x, *)
    cost: 2
  RightPut(x: GRABBABLE, y: SURFACES)
    pre: IsRightHolding(x), IsNear(y)
    add: IsOn(x, y), IsRightHandEmpty
    del: IsRightHolding(x), IsOn(x, *), IsIn(x, *)
    cost: 2
  LeftPutIn(x: GRABBABLE, y: CONTAINERS)
    pre: IsLeftHolding(x), IsNear(y), IsOpen(y)
    add: IsIn(x, y), IsLeftHandEmpty
    del: IsLeftHolding(x), IsOn(x, *), IsIn(x, *)
    cost: 3
  RightPutIn(x: GRABBABLE, y: CONTAINERS)
    pre: IsRightHolding(x), IsNear(y), IsOpen(y)
    add: IsIn(x, y), IsRightHandEmpty
    del: IsRightHolding(x), IsOn(x, *), IsIn(x, *)
    cost: 3
  Open(x: CONTAINERS)
    pre: IsNear(x), IsClose(x)
    add: IsOpen(x)
    del: IsClose(x)
    cost: 3
  Close(x: CONTAINERS)
    pre: IsNear(x), IsOpen(x)
    add: IsClose(x)
    del: IsOpen(x)
    cost: 3
  SwitchOn(x: HAS_SWITCH)
    pre: IsNear(x), IsSwitchedOff(x), IsPowered(x)
    add: IsSwitchedOn(x)
    del: IsSwitchedOff(x)
    cost: 4
  SwitchOff(x: HAS_SWITCH)
    pre: IsNear(x), IsSwitchedOn(x)
    add: IsSwitchedOff(x)
    del: IsSwitchedOn(x)
    cost: 4
  PlugIn(x: HAS_PLUG)
    pre: IsNear(x), IsUnplugged(x)
    add: IsPlugged(x), IsPowered(x)
    del: IsUnplugged(x)
    cost: 3
  PlugOut(x: HAS_PLUG)
    pre: IsNear(x), IsPlugged(x), IsSwitchedOff(x)
    add: IsUnplugged(x)
    del: IsPlugged(x), IsPowered(x)
    cost: 3
  Cut(x: CUTABLE)
    pre: IsNear(x), IsLeftHolding(kitchenknife)
    add: IsCut(x)
    cost: 6
  Wash(x: WASHABLE)
    pre: IsRightHolding(x), IsNear(faucet), IsSwitchedOn(faucet)
    add: IsClean(x)
    cost: 6
  Wipe(x: SURFACES)
    pre: IsNear(x), IsLeftHolding(rag)
    add: IsClean(x)
    cost: 6
";

fn objects(size: Size) -> impl Iterator<Item = &'static (&'static str, &'static [&'static str], Size)> {
    OBJECTS.iter().filter(move |o| o.2 <= size)
}

fn members(size: Size, cat: &str) -> Vec<&'static str> {
    objects(size).filter(|o| o.1.contains(&cat)).map(|o| o.0).collect()
}

/// Domain text for the given size.
pub fn domain_text(size: Size) -> String {
    let mut out = format!("DOMAIN household-{size}\nCATEGORIES\n  {}\nOBJECTS\n", CATEGORIES.join(", "));
    for (name, cats, _) in objects(size) {
        let _ = writeln!(out, "  {name}: {}", cats.join(", "));
    }
    out.push_str("PREDICATES\n");
    out.push_str(PREDICATES);
    out.push_str("ACTIONS\n");
    out.push_str(ACTIONS);
    out
}

pub fn domain(size: Size) -> Domain {
    Domain::parse(&domain_text(size)).expect("household domains parse")
}

/// Literal names of the reference scene: robot near the first surface,
/// hands empty, every grabbable on a surface, containers closed, appliances
/// off and unplugged.
pub fn base_scene(size: Size) -> Vec<String> {
    let surfaces = members(size, S);
    let mut out = vec![
        format!("IsNear({})", surfaces[0]),
        "IsLeftHandEmpty".to_string(),
        "IsRightHandEmpty".to_string(),
    ];
    for (i, g) in members(size, G).iter().enumerate() {
        out.push(format!("IsOn({g},{})", surfaces[i % surfaces.len()]));
    }
    for c in members(size, C) {
        out.push(format!("IsClose({c})"));
    }
    let plugs = members(size, P);
    for s in members(size, SW) {
        out.push(format!("IsSwitchedOff({s})"));
        if !plugs.contains(&s) {
            out.push(format!("IsPowered({s})"));
        }
    }
    for p in plugs {
        out.push(format!("IsUnplugged({p})"));
    }
    out
}

/// A random scene: robot near a random object, hands empty, grabbables on
/// random surfaces or inside random containers, containers randomly open,
/// appliances randomly plugged in and switched on.
pub fn random_scene(size: Size, domain: &Domain, rng: &mut impl Rng) -> State {
    let all: Vec<&str> = objects(size).map(|o| o.0).collect();
    let surfaces = members(size, S);
    let containers = members(size, C);
    let plugs = members(size, P);
    let mut lits = vec![
        format!("IsNear({})", all.choose(rng).expect("objects exist")),
        "IsLeftHandEmpty".to_string(),
        "IsRightHandEmpty".to_string(),
    ];
    for g in members(size, G) {
        if rng.random_bool(0.25) {
            lits.push(format!("IsIn({g},{})", containers.choose(rng).expect("containers exist")));
        } else {
            lits.push(format!("IsOn({g},{})", surfaces.choose(rng).expect("surfaces exist")));
        }
    }
    for c in containers {
        lits.push(format!("{}({c})", if rng.random_bool(0.3) { "IsOpen" } else { "IsClose" }));
    }
    for s in members(size, SW) {
        let has_plug = plugs.contains(&s);
        let plugged = !has_plug || rng.random_bool(0.4);
        if has_plug {
            lits.push(format!("{}({s})", if plugged { "IsPlugged" } else { "IsUnplugged" }));
        }
        if plugged {
            lits.push(format!("IsPowered({s})"));
        }
        let on = plugged && rng.random_bool(0.2);
        lits.push(format!("{}({s})", if on { "IsSwitchedOn" } else { "IsSwitchedOff" }));
    }
    lits.iter()
        .map(|l| domain.parse_literal(l).expect("scene literals exist"))
        .collect()
}

/// Predicates that make sense as task goals.
pub const GOAL_PREDICATES: [&str; 8] = [
    "IsOn",
    "IsIn",
    "IsOpen",
    "IsClose",
    "IsSwitchedOn",
    "IsSwitchedOff",
    "IsClean",
    "IsCut",
];
