//! Piecewise-linear colormaps for scalar-field rendering.

use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Colormap {
    #[default]
    Viridis,
    Jet,
    Coolwarm,
    Grayscale,
}

const VIRIDIS: [[f64; 3]; 9] = [
    [0.267004, 0.004874, 0.329415],
    [0.282623, 0.140926, 0.457517],
    [0.253935, 0.265254, 0.529983],
    [0.206756, 0.371758, 0.553117],
    [0.163625, 0.471133, 0.558148],
    [0.127568, 0.566949, 0.550556],
    [0.134692, 0.658636, 0.517649],
    [0.266941, 0.748751, 0.440573],
    [0.993248, 0.906157, 0.143936],
];

const JET: [[f64; 3]; 9] = [
    [0.0, 0.0, 0.5],
    [0.0, 0.0, 1.0],
    [0.0, 0.5, 1.0],
    [0.0, 1.0, 1.0],
    [0.5, 1.0, 0.5],
    [1.0, 1.0, 0.0],
    [1.0, 0.5, 0.0],
    [1.0, 0.0, 0.0],
    [0.5, 0.0, 0.0],
];

const COOLWARM: [[f64; 3]; 3] = [
    [0.229806, 0.298718, 0.753683],
    [0.865003, 0.865003, 0.865003],
    [0.705673, 0.015556, 0.150233],
];

const GRAYSCALE: [[f64; 3]; 2] = [[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]];

impl Colormap {
    fn stops(self) -> &'static [[f64; 3]] {
        match self {
            Colormap::Viridis => &VIRIDIS,
            Colormap::Jet => &JET,
            Colormap::Coolwarm => &COOLWARM,
            Colormap::Grayscale => &GRAYSCALE,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Colormap::Viridis => "viridis",
            Colormap::Jet => "jet",
            Colormap::Coolwarm => "coolwarm",
            Colormap::Grayscale => "grayscale",
        }
    }

    /// Colour at parameter `t`, clamped to [0, 1].
    pub fn sample(self, t: f64) -> [f64; 3] {
        let stops = self.stops();
        let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
        let x = t * (stops.len() - 1) as f64;
        let i = (x.floor() as usize).min(stops.len() - 2);
        let f = x - i as f64;
        let (a, b) = (stops[i], stops[i + 1]);
        if f == 1.0 {
            return b;
        }
        [
            a[0] + (b[0] - a[0]) * f,
            a[1] + (b[1] - a[1]) * f,
            a[2] + (b[2] - a[2]) * f,
        ]
    }

    /// Maps `values` over their own [min, max]; a constant field maps to the
    /// low end of the colormap.
    pub fn map_values(self, values: &[f64]) -> Vec<[f64; 3]> {
        let (lo, hi) = values
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let span = hi - lo;
        values
            .iter()
            .map(|&v| {
                let t = if span > 0.0 { (v - lo) / span } else { 0.0 };
                self.sample(t)
            })
            .collect()
    }

    pub fn endpoints(self) -> ([f64; 3], [f64; 3]) {
        let s = self.stops();
        (s[0], s[s.len() - 1])
    }
}

impl FromStr for Colormap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "viridis" => Ok(Colormap::Viridis),
            "jet" => Ok(Colormap::Jet),
            "coolwarm" => Ok(Colormap::Coolwarm),
            "grayscale" | "greyscale" | "gray" => Ok(Colormap::Grayscale),
            other => Err(Error::InvalidParameter(format!("unknown colormap '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_hit_exactly() {
        for cm in [Colormap::Viridis, Colormap::Jet, Colormap::Coolwarm, Colormap::Grayscale] {
            let (lo, hi) = cm.endpoints();
            let c = cm.map_values(&[0.0, 42.0]);
            assert_eq!(c[0], lo);
            assert_eq!(c[1], hi);
        }
    }

    #[test]
    fn constant_field_single_colour() {
        let c = Colormap::Jet.map_values(&[3.0; 5]);
        assert!(c.iter().all(|x| *x == c[0]));
    }

    #[test]
    fn names_parse() {
        assert_eq!("Viridis".parse::<Colormap>().unwrap(), Colormap::Viridis);
        assert!("rainbow".parse::<Colormap>().is_err());
    }
}
