use crate::cohomology::CanonicalRing;
use crate::curve::CurvePoint;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{vec_is_zero, Matrix, Vector};

/// Upper bound on the number of `(g-1)`-subsets whose rank is checked.
pub const GPP_SUBSET_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GppVerdict {
    /// At least `g` rational zeros found, all simple and in general position.
    VerifiedOnSample,
    /// No violation found, but fewer than `g` rational zeros were available.
    Indeterminate,
    /// A multiple zero or a dependent subset was found.
    Fails,
}

impl GppVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            GppVerdict::VerifiedOnSample => "verified_on_sample",
            GppVerdict::Indeterminate => "indeterminate",
            GppVerdict::Fails => "fails",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GppReport<K: Field> {
    pub verdict: GppVerdict,
    pub zeros: Vec<CurvePoint<K>>,
    pub reason: Option<String>,
    pub subsets_checked: usize,
    /// All subsets of size `min(g-1, #zeros)` were checked.
    pub exhaustive: bool,
}

/// Tests the rational zeros of `φ` among the scanned points (all affine points
/// for exhaustively scanned curves) and the `extra` points.
pub fn gpp_check<K: Field>(ring: &CanonicalRing<K>, phi: &[K::Elem], extra: &[CurvePoint<K>]) -> Result<GppReport<K>> {
    let k = ring.field();
    if vec_is_zero(k, phi) {
        return Err(Error::Precondition("φ must be nonzero".into()));
    }
    let g = ring.genus();
    let form = ring.canonical_form(phi);
    let mut candidates = ring.curve().all_affine_points().unwrap_or_default();
    for p in extra {
        if !candidates.iter().any(|c| c.coords == p.coords) {
            candidates.push(p.clone());
        }
    }
    let mut zeros = Vec::new();
    for p in candidates {
        if !k.is_zero(&form.eval(&p.coords)) {
            continue;
        }
        let v = ring.curve().local_expansion(&p, 4)?.eval_form(&form).valuation();
        if v.map_or(true, |v| v >= 2) {
            let reason = Some(format!("φ has a multiple zero at {}", p.display(k)));
            zeros.push(p);
            return Ok(GppReport { verdict: GppVerdict::Fails, zeros, reason, subsets_checked: 0, exhaustive: false });
        }
        zeros.push(p);
    }

    let evals: Vec<Vector<K>> = zeros.iter().map(|p| ring.curve().evaluate_basis(p, 1)).collect();
    let size = (g - 1).min(evals.len());
    let mut subsets_checked = 0;
    let mut exhaustive = true;
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if subsets_checked == GPP_SUBSET_CAP {
            exhaustive = false;
            break;
        }
        let cols: Vec<Vector<K>> = idx.iter().map(|&i| evals[i].clone()).collect();
        subsets_checked += 1;
        if Matrix::from_cols(k, g, &cols).rank() < size {
            let pts: Vec<String> = idx.iter().map(|&i| zeros[i].display(k)).collect();
            return Ok(GppReport {
                verdict: GppVerdict::Fails,
                zeros,
                reason: Some(format!("zeros {} impose dependent conditions", pts.join(", "))),
                subsets_checked,
                exhaustive: false,
            });
        }
        if !next_combination(&mut idx, evals.len()) {
            break;
        }
    }
    let verdict = if zeros.len() >= g { GppVerdict::VerifiedOnSample } else { GppVerdict::Indeterminate };
    Ok(GppReport { verdict, zeros, reason: None, subsets_checked, exhaustive })
}

/// Advances `idx` to the next increasing subset of `0..n`; false when exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let r = idx.len();
    for i in (0..r).rev() {
        if idx[i] < n - r + i {
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::tests::ring;
    use crate::linalg::Subspace;

    #[test]
    fn combinations_enumerate_binomial() {
        let mut idx = vec![0, 1, 2];
        let mut n = 1;
        while next_combination(&mut idx, 6) {
            n += 1;
        }
        assert_eq!(n, 20);
    }

    #[test]
    fn double_zero_fails() {
        // on the Fermat quartic the tangent line at p meets C doubly at p
        let r = ring("x^4+y^4+z^4");
        let k = *r.field();
        let p = r.curve().find_points(1, 2).unwrap().remove(0);
        let f = r.curve().equation();
        let tangent: Vec<u64> = (0..3).map(|v| f.partial(v).eval(&p.coords)).collect();
        // canonical basis of a quartic is the linear forms
        let phi = r.canonical_space().reduce(&crate::poly::Form::linear(&k, [tangent[0], tangent[1], tangent[2]]));
        let rep = gpp_check(&r, &phi, &[]).unwrap();
        assert_eq!(rep.verdict, GppVerdict::Fails);
        assert!(rep.reason.unwrap().contains("multiple zero"));
    }

    #[test]
    fn zero_form_is_rejected() {
        let r = ring("x^4+y^4+z^4");
        assert!(matches!(gpp_check(&r, &[0, 0, 0], &[]), Err(Error::Precondition(_))));
    }

    #[test]
    fn sextic_form_through_nine_points() {
        let r = ring("x^6+y^6+z^6");
        let mut verified = 0;
        for seed in 0..8 {
            let pts = r.curve().find_points(9, seed).unwrap();
            let evals: Vec<_> = pts.iter().map(|p| r.curve().evaluate_basis(p, 1)).collect();
            let w = Subspace::from_vectors(r.field(), 10, &evals).annihilator();
            if w.dim() != 1 {
                continue;
            }
            let rep = gpp_check(&r, &w.basis()[0], &[]).unwrap();
            assert!(rep.zeros.len() >= 9);
            if rep.verdict == GppVerdict::VerifiedOnSample {
                verified += 1;
                assert!(rep.exhaustive);
            }
        }
        assert!(verified > 0);
    }
}
