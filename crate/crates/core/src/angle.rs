//! Angle expressions: decimals (`0.5`, `-1e-3`) or rational multiples of π
//! (`pi`, `-pi/3`, `5*pi/12`, `2pi/3`, `π/6`).
//!
//! Multiples of π are kept as reduced fractions so that arc boundaries are
//! detected exactly, before any rounding.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::Error;
use crate::states::{arc_of, Arc};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    /// `num·π/den`, reduced, `den > 0`.
    PiMultiple { num: i64, den: i64 },
    Radians(f64),
}

impl Angle {
    pub fn pi_multiple(num: i64, den: i64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::Format("zero denominator in angle".into()));
        }
        let g = num.gcd(&den).max(1);
        let s = den.signum();
        Ok(Angle::PiMultiple {
            num: s * num / g,
            den: s * den / g,
        })
    }

    pub fn radians(self) -> f64 {
        match self {
            Angle::PiMultiple { num, den } => num as f64 * PI / den as f64,
            Angle::Radians(x) => x,
        }
    }

    /// Arc membership, exact for multiples of π.
    pub fn arc(self) -> Arc {
        match self {
            Angle::PiMultiple { num, den } => {
                // num/den = j/3 with j odd  ⇔  3·num = j·den
                let three_num = 3 * i128::from(num);
                let den = i128::from(den);
                if three_num % den == 0 && (three_num / den) % 2 != 0 {
                    return Arc::Boundary;
                }
                arc_of(self.radians())
            }
            Angle::Radians(x) => arc_of(x),
        }
    }
}

fn parse_int(s: &str, whole: &str) -> Result<i64, Error> {
    s.parse()
        .map_err(|_| Error::Format(format!("cannot parse angle '{whole}'")))
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self, Error> {
        let s: String = input
            .trim()
            .to_lowercase()
            .replace('π', "pi")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        let Some(pos) = s.find("pi") else {
            let x: f64 = s
                .parse()
                .map_err(|_| Error::Format(format!("cannot parse angle '{input}'")))?;
            if !x.is_finite() {
                return Err(Error::Format(format!("angle '{input}' is not finite")));
            }
            return Ok(Angle::Radians(x));
        };
        let head = s[..pos].trim_end_matches('*');
        let tail = &s[pos + 2..];
        let num = match head {
            "" | "+" => 1,
            "-" => -1,
            h => parse_int(h, input)?,
        };
        let den = match tail.strip_prefix('/') {
            Some(d) => parse_int(d, input)?,
            None if tail.is_empty() => 1,
            None => return Err(Error::Format(format!("cannot parse angle '{input}'"))),
        };
        Angle::pi_multiple(num, den)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Angle::PiMultiple { num: 0, .. } => f.write_str("0*pi"),
            Angle::PiMultiple { num, den } => {
                match num {
                    1 => f.write_str("pi")?,
                    -1 => f.write_str("-pi")?,
                    k => write!(f, "{k}*pi")?,
                }
                if den != 1 {
                    write!(f, "/{den}")?;
                }
                Ok(())
            }
            Angle::Radians(x) => write!(f, "{x:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        let a: Angle = "pi/6".parse().unwrap();
        assert_eq!(a, Angle::PiMultiple { num: 1, den: 6 });
        assert_eq!("-pi/3".parse::<Angle>().unwrap().arc(), Arc::Boundary);
        assert_eq!("2*pi/3".parse::<Angle>().unwrap().arc(), Arc::Plus);
        assert_eq!("10*pi/12".parse::<Angle>().unwrap(), Angle::PiMultiple { num: 5, den: 6 });
        assert_eq!("pi".parse::<Angle>().unwrap().arc(), Arc::Boundary);
        assert_eq!("0.25".parse::<Angle>().unwrap(), Angle::Radians(0.25));
        assert!("pix".parse::<Angle>().is_err());
        assert!("pi/0".parse::<Angle>().is_err());
    }

    #[test]
    fn round_trips() {
        for s in ["pi", "-pi/3", "5*pi/12", "0*pi", "0.1", "-3.5e-7", "7*pi"] {
            let a: Angle = s.parse().unwrap();
            assert_eq!(a.to_string().parse::<Angle>().unwrap(), a, "{s}");
        }
    }
}
