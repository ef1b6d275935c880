//! Bundled common-name table for frequently seen ash types, with their
//! reference ranks from the public census (ordered by decreasing frequency).

use super::objects::{canonical_code, AshType};
use crate::fxhash::FxHashMap;
use std::sync::OnceLock;

pub struct NamedAsh {
    pub name: &'static str,
    /// Rank of the type in the public reference census.
    pub catagolue_rank: u32,
    pub art: &'static str,
}

impl NamedAsh {
    pub fn cells(&self) -> Vec<(i32, i32)> {
        let seed = crate::genome::Seed::from_art(self.art).expect("bundled art is valid");
        seed.live_offsets().map(|(r, c)| (c as i32, r as i32)).collect()
    }

    pub fn ash_type(&self) -> AshType {
        let obj = super::objects::identify_free(&self.cells(), 8);
        canonical_code(&obj)
    }
}

pub const NAMED_ASH: &[NamedAsh] = &[
    NamedAsh { name: "block", catagolue_rank: 1, art: "oo\noo" },
    NamedAsh { name: "blinker", catagolue_rank: 2, art: "ooo" },
    NamedAsh {
        name: "beehive",
        catagolue_rank: 3,
        art: ".oo.
              o..o
              .oo.",
    },
    NamedAsh {
        name: "glider",
        catagolue_rank: 4,
        art: ".o.
              ..o
              ooo",
    },
    NamedAsh {
        name: "loaf",
        catagolue_rank: 5,
        art: ".oo.
              o..o
              .o.o
              ..o.",
    },
    NamedAsh {
        name: "boat",
        catagolue_rank: 6,
        art: "oo.
              o.o
              .o.",
    },
    NamedAsh {
        name: "ship",
        catagolue_rank: 7,
        art: "oo.
              o.o
              .oo",
    },
    NamedAsh {
        name: "tub",
        catagolue_rank: 8,
        art: ".o.
              o.o
              .o.",
    },
    NamedAsh {
        name: "pond",
        catagolue_rank: 9,
        art: ".oo.
              o..o
              o..o
              .oo.",
    },
    NamedAsh {
        name: "long boat",
        catagolue_rank: 10,
        art: "oo..
              o.o.
              .o.o
              ..o.",
    },
    NamedAsh {
        name: "toad",
        catagolue_rank: 11,
        art: ".ooo
              ooo.",
    },
    NamedAsh {
        name: "ship-tie",
        catagolue_rank: 12,
        art: "oo....
              o.o...
              .oo...
              ...oo.
              ...o.o
              ....oo",
    },
    NamedAsh {
        name: "beacon",
        catagolue_rank: 13,
        art: "oo..
              o...
              ...o
              ..oo",
    },
    NamedAsh {
        name: "barge",
        catagolue_rank: 14,
        art: ".o..
              o.o.
              .o.o
              ..o.",
    },
    NamedAsh {
        name: "half-bakery",
        catagolue_rank: 15,
        art: ".oo.....
              o..o....
              .o.o....
              ..o.oo..
              ...o..o.
              ....o.o.
              .....o..",
    },
    NamedAsh {
        name: "mango",
        catagolue_rank: 16,
        art: ".oo..
              o..o.
              .o..o
              ..oo.",
    },
    NamedAsh {
        name: "pulsar",
        catagolue_rank: 21,
        art: "..ooo...ooo..
              .............
              o....o.o....o
              o....o.o....o
              o....o.o....o
              ..ooo...ooo..
              .............
              ..ooo...ooo..
              o....o.o....o
              o....o.o....o
              o....o.o....o
              .............
              ..ooo...ooo..",
    },
    NamedAsh {
        name: "integral sign",
        catagolue_rank: 25,
        art: "...oo
              ..o.o
              ..o..
              o.o..
              oo...",
    },
    NamedAsh {
        name: "loop",
        catagolue_rank: 49,
        art: ".o....
              o.o...
              .o.o..
              ..o.o.
              ...o.o
              ....o.",
    },
];

fn name_map() -> &'static FxHashMap<String, &'static str> {
    static MAP: OnceLock<FxHashMap<String, &'static str>> = OnceLock::new();
    MAP.get_or_init(|| {
        NAMED_ASH.iter().map(|e| (e.ash_type().code().to_owned(), e.name)).collect()
    })
}

fn rank_map() -> &'static FxHashMap<&'static str, u32> {
    static MAP: OnceLock<FxHashMap<&'static str, u32>> = OnceLock::new();
    MAP.get_or_init(|| NAMED_ASH.iter().map(|e| (e.name, e.catagolue_rank)).collect())
}

pub(super) fn lookup_name(code: &str) -> Option<&'static str> {
    name_map().get(code).copied()
}

/// Reference-census rank for a named type, if the name is bundled.
pub fn reference_rank(name: &str) -> Option<u32> {
    rank_map().get(name).copied()
}
