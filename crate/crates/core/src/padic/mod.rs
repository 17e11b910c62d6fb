//! p-adic numbers and finite extension towers of `Q_p`.

mod element;
mod expr;
mod field;
mod hensel;
mod number;

pub use element::{LocalFieldElement, Valuation};
pub use field::{LayerKind, LocalField};
pub use hensel::{
    hensel_lift, jr_integer_test, lift_residue, nth_root, poly_derivative, poly_eval,
    teichmuller_lift,
};
pub use number::PadicNumber;

pub(crate) use field::binom;

use crate::error::Result;
use crate::finite::ResidueElement;

/// Anything with a valuation and a residue map.
pub trait Valued {
    fn valuation_of(&self) -> Result<Valuation>;
    fn residue_of(&self) -> Result<ResidueElement>;
}

impl Valued for PadicNumber {
    fn valuation_of(&self) -> Result<Valuation> {
        self.valuation()
    }

    fn residue_of(&self) -> Result<ResidueElement> {
        Ok(ResidueElement {
            rep: vec![self.residue()?],
        })
    }
}

impl Valued for LocalFieldElement {
    fn valuation_of(&self) -> Result<Valuation> {
        self.valuation()
    }

    fn residue_of(&self) -> Result<ResidueElement> {
        self.residue()
    }
}

pub fn valuation_of<T: Valued>(x: &T) -> Result<Valuation> {
    x.valuation_of()
}

pub fn residue_of<T: Valued>(x: &T) -> Result<ResidueElement> {
    x.residue_of()
}
