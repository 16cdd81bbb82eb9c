use anyhow::{bail, Result};
use clap::ValueEnum;

use hensel_core::field::{is_prime, Field};
use hensel_core::ring::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "lowercase")]
pub enum Suite {
    Units,
    P1,
    Complex,
    Orbits,
    Qcomplex,
    E1,
    Bloch,
    Congruence,
    Abelian,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Units => "units",
            Suite::P1 => "p1",
            Suite::Complex => "complex",
            Suite::Orbits => "orbits",
            Suite::Qcomplex => "qcomplex",
            Suite::E1 => "e1",
            Suite::Bloch => "bloch",
            Suite::Congruence => "congruence",
            Suite::Abelian => "abelian",
            Suite::All => "all",
        }
    }

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Units,
                Suite::P1,
                Suite::Complex,
                Suite::Orbits,
                Suite::Qcomplex,
                Suite::E1,
                Suite::Bloch,
                Suite::Congruence,
                Suite::Abelian,
            ],
            s => vec![s],
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub characteristic: u32,
    pub ext: u32,
    pub vars: usize,
    pub trunc: usize,
    pub prime: u32,
    pub second_prime: Option<u32>,
    pub n: usize,
    pub dmax: usize,
    pub seed: u64,
    pub suite: Suite,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.characteristic as u64) {
            bail!("--char must be prime, got {}", self.characteristic);
        }
        if !(1..=3).contains(&self.ext) {
            bail!("--ext must be 1, 2 or 3, got {}", self.ext);
        }
        if self.vars == 0 {
            bail!("--vars must be at least 1");
        }
        if self.trunc == 0 {
            bail!("--trunc must be at least 1");
        }
        for (flag, p) in [("--prime", Some(self.prime)), ("--second-prime", self.second_prime)]
        {
            let Some(p) = p else { continue };
            if !is_prime(p as u64) {
                bail!("{flag} must be prime, got {p}");
            }
            if p == self.characteristic {
                bail!("{flag} must differ from the characteristic {p}");
            }
        }
        if !(2..=4).contains(&self.n) {
            bail!("--n must be between 2 and 4, got {}", self.n);
        }
        if self.dmax == 0 || self.dmax > 8 {
            bail!("--dmax must be between 1 and 8, got {}", self.dmax);
        }
        Ok(())
    }

    pub fn build_ring(&self) -> Result<Ring> {
        let field = if self.ext == 1 {
            Field::prime(self.characteristic)?
        } else {
            Field::extension_default(self.characteristic, self.ext)?
        };
        Ok(Ring::new(field, self.vars, self.trunc)?)
    }
}
