use std::sync::OnceLock;

use crate::error::Result;
use crate::group::SpreadStabilizerGroup;
use crate::projgeom::Pg3;
use crate::spreadcore::{RegularSpread, Spread};

/// Geometry tables for one field order, shared by every computation.
pub struct Context {
    pg: Pg3,
    regular: RegularSpread,
    group: OnceLock<SpreadStabilizerGroup>,
}

impl Context {
    pub fn new(q: u32) -> Result<Self> {
        let pg = Pg3::new(q)?;
        let regular = RegularSpread::build(&pg)?;
        Ok(Self {
            pg,
            regular,
            group: OnceLock::new(),
        })
    }

    pub fn q(&self) -> u32 {
        self.pg.q()
    }

    pub fn pg(&self) -> &Pg3 {
        &self.pg
    }

    pub fn regular(&self) -> &RegularSpread {
        &self.regular
    }

    pub fn regular_spread(&self) -> Spread {
        self.regular.spread(&self.pg)
    }

    /// Built on first use; at q = 7 this holds 235200 permutations.
    pub fn group(&self) -> &SpreadStabilizerGroup {
        self.group.get_or_init(|| SpreadStabilizerGroup::build(&self.regular))
    }
}
