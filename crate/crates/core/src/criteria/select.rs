use std::cmp::Ordering;

use crate::error::{Error, Result};

use super::CriterionReport;

/// The report with the smallest value. Exact ties go to the smaller model,
/// then to the lexicographically smaller label.
pub fn select_model(reports: &[CriterionReport]) -> Result<&CriterionReport> {
    let first = reports
        .first()
        .ok_or_else(|| Error::invalid("reports", "need at least one report"))?;
    if let Some(other) = reports.iter().find(|r| r.criterion_id != first.criterion_id) {
        return Err(Error::MixedCriteria {
            first: first.criterion_id.to_string(),
            second: other.criterion_id.to_string(),
        });
    }
    if let Some(bad) = reports.iter().find(|r| r.value.is_nan()) {
        return Err(Error::domain("model selection", format!("criterion for `{}` is NaN", bad.model_id)));
    }
    Ok(reports
        .iter()
        .min_by(|a, b| {
            a.value
                .partial_cmp(&b.value)
                .unwrap_or(Ordering::Equal)
                .then(a.free_dims.cmp(&b.free_dims))
                .then_with(|| a.model_id.cmp(&b.model_id))
        })
        .expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::CriterionId;

    fn report(id: CriterionId, label: &str, k: usize, value: f64) -> CriterionReport {
        CriterionReport::new(id, label, k, value)
    }

    #[test]
    fn minimum_wins() {
        let rs = [report(CriterionId::Aic, "a", 0, 3.0), report(CriterionId::Aic, "b", 1, 2.5)];
        assert_eq!(select_model(&rs).unwrap().model_id, "b");
    }

    #[test]
    fn ties_prefer_fewer_parameters_then_label() {
        let rs = [
            report(CriterionId::Bic, "zeta", 2, 1.0),
            report(CriterionId::Bic, "beta", 1, 1.0),
            report(CriterionId::Bic, "alpha", 1, 1.0),
        ];
        assert_eq!(select_model(&rs).unwrap().model_id, "alpha");
    }

    #[test]
    fn infinite_complexity_never_wins() {
        let rs = [report(CriterionId::IcNu, "alt", 1, f64::INFINITY), report(CriterionId::IcNu, "null", 0, 1e300)];
        assert_eq!(select_model(&rs).unwrap().model_id, "null");
    }

    #[test]
    fn mixed_ids_rejected() {
        let rs = [report(CriterionId::Aic, "a", 0, 1.0), report(CriterionId::Bic, "b", 0, 1.0)];
        assert!(matches!(select_model(&rs), Err(Error::MixedCriteria { .. })));
        assert!(select_model(&[]).is_err());
    }
}
