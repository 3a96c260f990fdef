use std::str::FromStr;

use ncint::curve::{geometric_grid, linear_grid};

/// `lo:hi:count[:log]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub log: bool,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let log = match parts.len() {
            3 => false,
            4 if parts[3] == "log" => true,
            4 if parts[3] == "lin" => false,
            _ => return Err(format!("grid {s:?} is not lo:hi:count[:log]")),
        };
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad grid bound {p:?}"))
        };
        let (lo, hi) = (num(parts[0])?, num(parts[1])?);
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("bad grid count {:?}", parts[2]))?;
        if !(lo.is_finite() && hi.is_finite()) || count == 0 {
            return Err(format!(
                "grid {s:?} needs finite bounds and a positive count"
            ));
        }
        if count > 1 && hi <= lo {
            return Err(format!("grid {s:?} needs lo < hi"));
        }
        if log && lo <= 0.0 {
            return Err(format!("log grid {s:?} needs lo > 0"));
        }
        Ok(Self { lo, hi, count, log })
    }
}

impl GridSpec {
    pub fn points(&self) -> ncint::Result<Vec<f64>> {
        if self.count == 1 {
            return Ok(vec![self.lo]);
        }
        if self.log {
            geometric_grid(self.lo, self.hi, self.count)
        } else {
            linear_grid(self.lo, self.hi, self.count)
        }
    }
}
