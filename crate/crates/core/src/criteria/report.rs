use std::fmt;

use serde::{Deserialize, Serialize};

use super::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CriterionId {
    IcNu,
    Aic,
    Bic,
    /// Evidence information `h(x^N) = -ln q(x^N)`; lower is better like every
    /// other criterion.
    LogEvidence,
    PseudoBfTerm,
    Fractional,
    PosteriorBfTerm,
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CriterionId::IcNu => "IC_NU",
            CriterionId::Aic => "AIC",
            CriterionId::Bic => "BIC",
            CriterionId::LogEvidence => "LOG_EVIDENCE",
            CriterionId::PseudoBfTerm => "PSEUDO_BF_TERM",
            CriterionId::Fractional => "FRACTIONAL",
            CriterionId::PosteriorBfTerm => "POSTERIOR_BF_TERM",
        };
        f.write_str(s)
    }
}

/// One criterion evaluated for one model. Serializes to a flat JSON object;
/// non-finite floats are written as the strings `"inf"`, `"-inf"`, `"nan"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion_id: CriterionId,
    pub model_id: String,
    pub free_dims: usize,
    #[serde(with = "ext_float")]
    pub value: f64,
    #[serde(with = "ext_float::option")]
    pub complexity: Option<f64>,
    pub n_train: Option<usize>,
    pub n_gen: Option<usize>,
    #[serde(with = "ext_float::option")]
    pub nu: Option<f64>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
    pub exhaustive: Option<bool>,
}

impl CriterionReport {
    pub fn new(criterion_id: CriterionId, model_id: impl Into<String>, free_dims: usize, value: f64) -> Self {
        Self {
            criterion_id,
            model_id: model_id.into(),
            free_dims,
            value,
            complexity: None,
            n_train: None,
            n_gen: None,
            nu: None,
            budget: None,
            seed: None,
            exhaustive: None,
        }
    }

    pub fn with_complexity(mut self, complexity: f64) -> Self {
        self.complexity = Some(complexity);
        self
    }

    pub fn with_partition(mut self, partition: Partition) -> Self {
        self.n_train = Some(partition.n_train());
        self.n_gen = Some(partition.n_gen());
        self.nu = Some(partition.nu());
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = Some(nu);
        self
    }

    pub fn partition(&self) -> Option<Partition> {
        Partition::new(self.n_train?, self.n_gen?).ok()
    }

    /// Goodness-of-fit part of an IC-form criterion.
    pub fn fit_term(&self) -> Option<f64> {
        self.complexity.map(|c| self.value - c)
    }
}

pub(crate) mod ext_float {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    struct ExtFloat;

    impl Visitor<'_> for ExtFloat {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => other.parse().map_err(E::custom),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(ExtFloat)
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(x) => super::serialize(x, s),
                None => s.serialize_none(),
            }
        }

        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super")] f64);

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_flat_and_round_trips() {
        let r = CriterionReport::new(CriterionId::IcNu, "alt", 1, 12.345_678_901_234_567)
            .with_complexity(f64::INFINITY)
            .with_partition(Partition::postdictive(10).unwrap());
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["criterion_id"], "IC_NU");
        assert_eq!(json["complexity"], "inf");
        assert_eq!(json["nu"], "inf");
        assert_eq!(json["n_train"], 0);
        let back: CriterionReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }
}
