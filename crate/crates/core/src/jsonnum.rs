//! Serde helper: JSON has no NaN, so emit null for "no value claimed".

use serde::Serializer;

pub(crate) fn nan_as_null<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    if x.is_nan() {
        serializer.serialize_none()
    } else {
        serializer.serialize_f64(*x)
    }
}
