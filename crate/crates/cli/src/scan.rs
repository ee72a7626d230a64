use std::fmt;
use std::str::FromStr;

/// `min:max:steps` or `min:max:steps:log`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub log: bool,
}

impl ScanSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        if n == 1 {
            return vec![self.min];
        }
        let (lo, hi) = if self.log { (self.min.ln(), self.max.ln()) } else { (self.min, self.max) };
        (0..n)
            .map(|i| {
                // pin the endpoints so they are reproduced exactly
                let x = if i == 0 {
                    lo
                } else if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                };
                if !self.log {
                    x
                } else if i == 0 {
                    self.min
                } else if i == n - 1 {
                    self.max
                } else {
                    x.exp()
                }
            })
            .collect()
    }
}

impl FromStr for ScanSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let log = match parts.len() {
            3 => false,
            4 if parts[3].eq_ignore_ascii_case("log") => true,
            4 if parts[3].eq_ignore_ascii_case("lin") => false,
            _ => return Err(format!("scan `{s}` must look like min:max:steps or min:max:steps:log")),
        };
        let num = |x: &str| x.parse::<f64>().map_err(|_| format!("scan `{s}`: `{x}` is not a number"));
        let (min, max) = (num(parts[0])?, num(parts[1])?);
        let steps: usize = parts[2]
            .parse()
            .map_err(|_| format!("scan `{s}`: steps `{}` is not a positive integer", parts[2]))?;
        if steps == 0 {
            return Err(format!("scan `{s}`: steps must be at least 1"));
        }
        if !(min.is_finite() && max.is_finite()) || !(min < max) {
            return Err(format!("scan `{s}`: need finite min < max"));
        }
        if log && !(min > 0.0) {
            return Err(format!("scan `{s}`: log spacing needs min > 0"));
        }
        Ok(ScanSpec { min, max, steps, log })
    }
}

impl fmt::Display for ScanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.steps)?;
        if self.log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_spaces() {
        let s: ScanSpec = "0.05:3.09:200".parse().unwrap();
        let v = s.values();
        assert_eq!(v.len(), 200);
        assert_eq!((v[0], v[199]), (0.05, 3.09));
        let l: ScanSpec = "1:100:3:log".parse().unwrap();
        let v = l.values();
        assert_eq!(v[0], 1.0);
        assert!((v[1] - 10.0).abs() < 1e-12);
        assert_eq!(v[2], 100.0);
        assert_eq!("2:3:1".parse::<ScanSpec>().unwrap().values(), vec![2.0]);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["1:2", "2:1:5", "1:2:0", "0:1:5:log", "a:1:2", "1:2:3:cubic", "1:1:4"] {
            assert!(bad.parse::<ScanSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        let s: ScanSpec = "0.5:2:7:log".parse().unwrap();
        assert_eq!(s.to_string().parse::<ScanSpec>().unwrap(), s);
    }
}
