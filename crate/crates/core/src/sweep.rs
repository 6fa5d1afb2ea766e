//! Rate grids over one or two of `η`, `F`, `q` and distance, and the
//! eight-variant summary table.
//!
//! Rows come out row-major over the axes (the last axis varies fastest), and
//! within a grid point in the order the variants were given.

use alloc::vec::Vec;
use core::fmt;

use crate::channel::{global_efficiency, ChannelParams};
use crate::error::{check_range, Error, Result};
use crate::rates::{secret_rate, ProtocolConfig, Variant};
use crate::thresholds::{efficiency_threshold, max_distance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum AxisName {
    Eta,
    Fidelity,
    /// Flip probability; varies only the noise pre-processing variants.
    Q,
    /// Source-to-user distance in km; `η` follows from the channel model.
    Distance,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::Eta => "eta",
            AxisName::Fidelity => "F",
            AxisName::Q => "q",
            AxisName::Distance => "d",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "eta" => Some(AxisName::Eta),
            "F" | "fidelity" => Some(AxisName::Fidelity),
            "q" => Some(AxisName::Q),
            "d" | "distance" => Some(AxisName::Distance),
            _ => None,
        }
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Axis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(name: AxisName, min: f64, max: f64, points: usize) -> Self {
        Self {
            name,
            min,
            max,
            points,
        }
    }

    /// Evenly spaced values from `min` to `max` inclusive.
    pub fn values(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
    /// Used when no axis varies `F`.
    pub fidelity: f64,
    /// Used when no axis varies `η` or distance.
    pub eta: f64,
    pub variants: Vec<Variant>,
    pub channel: Option<ChannelParams>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidSweep("one or two axes are required"));
        }
        if self.variants.is_empty() {
            return Err(Error::InvalidSweep("at least one variant is required"));
        }
        for axis in &self.axes {
            if axis.points < 2 {
                return Err(Error::InvalidSweep("an axis needs at least two points"));
            }
            check_range("axis min", axis.min, f64::MIN, f64::MAX)?;
            check_range("axis max", axis.max, f64::MIN, f64::MAX)?;
            if axis.min >= axis.max {
                return Err(Error::InvalidSweep("axis min must be below max"));
            }
        }
        if self.axes.len() == 2 {
            let (a, b) = (self.axes[0].name, self.axes[1].name);
            if a == b {
                return Err(Error::InvalidSweep("axes must be distinct"));
            }
            let pair = |x, y| (a == x && b == y) || (a == y && b == x);
            if pair(AxisName::Eta, AxisName::Distance) {
                return Err(Error::InvalidSweep("eta and distance cannot both vary"));
            }
        }
        if self.has_axis(AxisName::Distance) && self.channel.is_none() {
            return Err(Error::InvalidSweep(
                "a distance axis needs channel parameters",
            ));
        }
        Ok(())
    }

    fn has_axis(&self, name: AxisName) -> bool {
        self.axes.iter().any(|a| a.name == name)
    }

    /// Number of rows [`run_sweep`] produces.
    pub fn row_count(&self) -> usize {
        self.axes.iter().map(|a| a.points).product::<usize>() * self.variants.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    /// One value per axis, in axis order.
    pub axis_values: Vec<f64>,
    pub variant: Variant,
    pub rate: f64,
    pub s_value: f64,
    pub effective_qber: f64,
}

fn evaluate(spec: &SweepSpec, point: &[f64], variant: &Variant) -> Result<SweepRow> {
    let mut fidelity = spec.fidelity;
    let mut eta = spec.eta;
    let mut v = *variant;
    for (axis, &value) in spec.axes.iter().zip(point) {
        match axis.name {
            AxisName::Fidelity => fidelity = value,
            AxisName::Eta => eta = value,
            AxisName::Q => {
                if v.strategy.noise_preprocessing() {
                    v.q = value;
                }
            }
            AxisName::Distance => {
                let params = spec.channel.as_ref().ok_or(Error::InvalidSweep(
                    "a distance axis needs channel parameters",
                ))?;
                eta = global_efficiency(value, params)?;
            }
        }
    }
    let report = secret_rate(&ProtocolConfig::from_variant(&v, fidelity, eta)?)?;
    Ok(SweepRow {
        axis_values: point.to_vec(),
        variant: v,
        rate: report.rate,
        s_value: report.s_value,
        effective_qber: report.effective_qber,
    })
}

/// Evaluates every variant at every grid point.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let values: Vec<Vec<f64>> = spec.axes.iter().map(Axis::values).collect();
    let mut rows = Vec::with_capacity(spec.row_count());
    let mut point = Vec::with_capacity(values.len());
    match values.as_slice() {
        [xs] => {
            for &x in xs {
                point.clear();
                point.push(x);
                for v in &spec.variants {
                    rows.push(evaluate(spec, &point, v)?);
                }
            }
        }
        [xs, ys] => {
            for &x in xs {
                for &y in ys {
                    point.clear();
                    point.extend([x, y]);
                    for v in &spec.variants {
                        rows.push(evaluate(spec, &point, v)?);
                    }
                }
            }
        }
        _ => unreachable!("validated axis count"),
    }
    Ok(rows)
}

/// Premises of the eight-variant summary. Rates and thresholds use
/// `fidelity`; distances use `distance_fidelity`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Table1Inputs {
    pub fidelity: f64,
    pub q: f64,
    pub eta: f64,
    pub distance_fidelity: f64,
    pub channel: ChannelParams,
}

impl Default for Table1Inputs {
    fn default() -> Self {
        Self {
            fidelity: 0.98,
            q: 0.05,
            eta: 0.98,
            distance_fidelity: 1.0,
            channel: ChannelParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Table1Row {
    pub variant: Variant,
    pub rate: f64,
    pub delta_threshold: f64,
    pub eta_threshold: f64,
    pub max_distance_km: f64,
}

/// Rate, noise tolerance, efficiency threshold and maximum distance for the
/// eight variants in [`Variant::table_order`].
pub fn table1(inputs: &Table1Inputs) -> Result<Vec<Table1Row>> {
    Variant::table_order(inputs.q)
        .iter()
        .map(|v| {
            let config = ProtocolConfig::from_variant(v, inputs.fidelity, inputs.eta)?;
            let rate = secret_rate(&config)?.rate;
            let eta_threshold = efficiency_threshold(v, inputs.fidelity)?;
            let delta_threshold = crate::rates::raw_qber(
                inputs.fidelity,
                eta_threshold,
                v.strategy.post_selection(),
            )?;
            let max_distance_km = max_distance(v, inputs.distance_fidelity, &inputs.channel)?.km;
            Ok(Table1Row {
                variant: *v,
                rate,
                delta_threshold,
                eta_threshold,
                max_distance_km,
            })
        })
        .collect()
}
