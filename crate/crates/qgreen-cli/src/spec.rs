//! Channel specification wire format: a tagged JSON document that
//! parses into a validated channel. Complex numbers are [re, im] pairs,
//! angles are radians.

use qgreen::nalgebra::{Matrix3, Vector3};
use qgreen::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qgreen::gaussian::CanonicalParams;
use qgreen::green::{green_from_kraus, GreenFn};
use qgreen::hybrid::Mat2;
use qgreen::oracle::{
    choi_from_tt, cp_check, kraus_from_tt, AffineChannelData, KrausSet,
};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ChannelSpec {
    #[serde(rename = "kraus")]
    Kraus {
        /// Each operator is a 2×2 row-major matrix of [re, im] pairs.
        operators: Vec<[[(f64, f64); 2]; 2]>,
    },
    #[serde(rename = "tT")]
    Affine { t: [f64; 3], #[serde(rename = "T")] big_t: [[f64; 3]; 3] },
    #[serde(rename = "gaussian_canonical")]
    GaussianCanonical { theta: f64, phi: f64, q: f64 },
}

/// A parsed and validated channel, carrying every representation the
/// report builders need.
pub struct Channel {
    pub spec: ChannelSpec,
    pub kraus: KrausSet,
    pub green: GreenFn,
    pub canonical: Option<CanonicalParams>,
}

impl ChannelSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Validation(format!("malformed channel spec: {e}")))
    }

    pub fn load(path: &str) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {path}: {e}")))?;
        Self::from_json(&text)
    }

    /// Validate and build every channel representation.
    pub fn realize(self) -> Result<Channel, CliError> {
        match &self {
            ChannelSpec::Kraus { operators } => {
                if operators.is_empty() {
                    return Err(CliError::Validation("empty Kraus operator list".into()));
                }
                let ops: Vec<Mat2> = operators
                    .iter()
                    .map(|m| {
                        Mat2::new(
                            cpx(m[0][0]),
                            cpx(m[0][1]),
                            cpx(m[1][0]),
                            cpx(m[1][1]),
                        )
                    })
                    .collect();
                let kraus = KrausSet::new(ops)
                    .map_err(|e| CliError::Validation(e.to_string()))?;
                let green = green_from_kraus(&kraus);
                Ok(Channel {
                    spec: self,
                    kraus,
                    green,
                    canonical: None,
                })
            }
            ChannelSpec::Affine { t, big_t } => {
                let data = AffineChannelData::new(
                    Vector3::from_row_slice(t),
                    Matrix3::from_fn(|i, j| big_t[i][j]),
                );
                let (psd, min_eig) = cp_check(&choi_from_tt(&data));
                if !psd {
                    return Err(CliError::Validation(format!(
                        "affine map is not completely positive: min Choi eigenvalue {min_eig:.6e}"
                    )));
                }
                let kraus = kraus_from_tt(&data)
                    .map_err(|e| CliError::Validation(e.to_string()))?;
                let green = green_from_kraus(&kraus);
                Ok(Channel {
                    spec: self,
                    kraus,
                    green,
                    canonical: None,
                })
            }
            ChannelSpec::GaussianCanonical { theta, phi, q } => {
                let params = CanonicalParams::new(*theta, *phi, *q)
                    .map_err(|e| CliError::Validation(e.to_string()))?;
                let kraus = params
                    .dilation_kraus()
                    .map_err(|e| CliError::Internal(e.to_string()))?;
                Ok(Channel {
                    spec: self,
                    kraus,
                    green: params.to_green(),
                    canonical: Some(params),
                })
            }
        }
    }
}

pub fn cpx(pair: (f64, f64)) -> Complex64 {
    Complex64::new(pair.0, pair.1)
}
