//! Curve intake, class construction and the per-class tasks.

use std::sync::Arc;

use ivhs_core::quadrics::{qij_tensor, quadric_span_rank};
use ivhs_core::{
    alpha2_table, cup_matrix, gpp_check, hankel_data, ic2_check, ks_annihilating, ks_from_tails, nilpotent_and_sl2,
    psi_string, quadrics_qij, rank1_geometry, realize_functional, schiffer, splitting_shift, stratum, triple_quadric,
    verify_cocycle, xi_phi_filtration, Alpha2Table, CanonicalRing, CupMatrix, CurvePoint, Error, Field, KSClass, Matrix,
    MlOptions, PlaneCurve, Poly, Form, QuadricCert, Result, Subspace, TailEntry, TailRep, Vector, XiPhiFiltration,
};
use rand::Rng;
use serde_json::{json, Value};

use crate::scenario::{template_forms, Elem, KsSpec, PhiSpec};
use crate::util;

/// Number of random splitting shifts compared by the filtration task.
pub const SHIFTS_PER_CLASS: usize = 2;
/// Rational points used for the pointwise check of quadrics.
pub const POINTWISE_SAMPLES: usize = 8;
/// Basis triples certified by the quadrics task.
pub const TRIPLE_LIMIT: usize = 10;

pub struct Lab<K: Field> {
    pub field: K,
    pub ring: Arc<CanonicalRing<K>>,
    pub hash: String,
    pub seed: u64,
    /// Points given in the scenario.
    pub points: Vec<CurvePoint<K>>,
}

#[derive(Clone, Debug)]
pub struct BuiltClass<K: Field> {
    pub xi: KSClass<K>,
    /// The tails were produced from a functional by Schiffer realization.
    pub realized: bool,
}

pub fn parse_elem<K: Field>(k: &K, e: &Elem) -> Result<K::Elem> {
    k.parse_elem(&e.as_text())
}

impl<K: Field> Lab<K> {
    pub fn new(field: K, equation: &str, seed: u64, points: &[[Elem; 3]]) -> Result<Self> {
        let poly = Poly::parse(&field, &["x", "y", "z"], equation)?;
        let curve = PlaneCurve::new(&poly, None)?;
        let hash = util::curve_hash(&field, curve.equation());
        let points = points
            .iter()
            .map(|p| {
                let c = [parse_elem(&field, &p[0])?, parse_elem(&field, &p[1])?, parse_elem(&field, &p[2])?];
                curve.point(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Lab { field, ring: Arc::new(CanonicalRing::new(Arc::new(curve))), hash, seed, points })
    }

    pub fn curve(&self) -> &PlaneCurve<K> {
        self.ring.curve()
    }

    pub fn curve_facts(&self) -> Value {
        let c = self.curve();
        json!({
            "equation": util::form(c.equation()),
            "field": self.field.describe(),
            "hash": self.hash,
            "degree": c.degree(),
            "genus": c.genus(),
            "h0K": self.ring.genus(),
            "h02K": self.ring.bicanonical_dim(),
            "smoothness_mode": c.smoothness_mode().as_str(),
            "rational_points": c.rational_point_count(),
        })
    }

    /// `n` distinct rational points: searched over finite fields, taken from
    /// the supplied list otherwise.
    pub fn random_points(&self, n: usize, seed: u64) -> Result<Vec<CurvePoint<K>>> {
        if self.field.order().is_some() {
            return self.curve().find_points(n, seed);
        }
        if self.points.len() < n {
            return Err(Error::NotEnoughPoints { found: self.points.len(), requested: n });
        }
        Ok(self.points[..n].to_vec())
    }

    /// Up to `n` points for sampling checks; never fails.
    pub fn sample_points(&self, n: usize, seed: u64) -> Vec<CurvePoint<K>> {
        match self.random_points(n, seed) {
            Ok(p) => p,
            Err(Error::NotEnoughPoints { found, .. }) if found > 0 => self.random_points(found, seed).unwrap_or_default(),
            Err(_) => self.points.clone(),
        }
    }

    fn random_vector<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vector<K> {
        (0..n).map(|_| self.field.random(rng)).collect()
    }

    pub fn build_class(&self, spec: &KsSpec, label: String, seed: u64) -> Result<BuiltClass<K>> {
        let k = &self.field;
        let ring = &self.ring;
        let mut rng = util::rng(seed, "class", 0);
        let tails_class = |entries: Vec<TailEntry<K>>| -> Result<BuiltClass<K>> {
            let xi = ks_from_tails(ring, TailRep::new(k, entries)?, label.clone())?;
            Ok(BuiltClass { xi, realized: false })
        };
        match spec {
            KsSpec::Schiffer { point, .. } => {
                let p = match point {
                    Some(i) => self
                        .points
                        .get(*i)
                        .cloned()
                        .ok_or_else(|| Error::Precondition(format!("point index {i} out of range")))?,
                    None => self.random_points(1, seed)?.remove(0),
                };
                let mut xi = schiffer(ring, &p)?;
                xi.label = label;
                Ok(BuiltClass { xi, realized: false })
            }
            KsSpec::Secant { count, coeffs, .. } => {
                let pts = self.random_points(*count, seed)?;
                let cs: Vec<K::Elem> = match coeffs {
                    Some(c) if c.len() == *count => c.iter().map(|e| parse_elem(k, e)).collect::<Result<_>>()?,
                    Some(c) => return Err(Error::Precondition(format!("{} coefficients for {count} points", c.len()))),
                    None => (0..*count).map(|_| k.random_nonzero(&mut rng)).collect(),
                };
                tails_class(pts.into_iter().zip(cs).map(|(point, c)| TailEntry { point, coeffs: vec![c] }).collect())
            }
            KsSpec::Tails { orders, .. } => {
                if orders.contains(&0) {
                    return Err(Error::Precondition("tail orders must be positive".into()));
                }
                let pts = self.random_points(orders.len(), seed)?;
                let entries = pts
                    .into_iter()
                    .zip(orders)
                    .map(|(point, &m)| {
                        let mut coeffs: Vec<K::Elem> = (0..m - 1).map(|_| k.random(&mut rng)).collect();
                        coeffs.push(k.random_nonzero(&mut rng));
                        TailEntry { point, coeffs }
                    })
                    .collect();
                tails_class(entries)
            }
            KsSpec::Annihilator { u_dim, .. } => {
                let g = ring.genus();
                let u: Vec<Vector<K>> = (0..*u_dim).map(|_| self.random_vector(g, &mut rng)).collect();
                self.annihilator_class(&u, label, &mut rng, seed)
            }
            KsSpec::AnnihilatorOf { forms, .. } => self.annihilator_of(forms, label, &mut rng, seed),
            KsSpec::Template { name, .. } => {
                let e = self.curve().canonical_degree(1) - 1;
                let forms = template_forms(name, e).ok_or_else(|| Error::Precondition(format!("unknown template `{name}`")))?;
                self.annihilator_of(&forms, label, &mut rng, seed)
            }
            KsSpec::Random { .. } => {
                let f = self.random_vector(ring.bicanonical_dim(), &mut rng);
                self.realize(&f, label, seed)
            }
            KsSpec::Functional { values, .. } => {
                if values.len() != ring.bicanonical_dim() {
                    return Err(Error::Precondition(format!("functional needs {} values", ring.bicanonical_dim())));
                }
                let f = values.iter().map(|e| parse_elem(k, e)).collect::<Result<Vec<_>>>()?;
                Ok(BuiltClass { xi: KSClass::from_functional(f, label), realized: false })
            }
        }
    }

    /// Canonical forms in `x, y, z` and random lines `a, b, c, l, m`.
    fn annihilator_of<R: Rng>(&self, forms: &[String], label: String, rng: &mut R, seed: u64) -> Result<BuiltClass<K>> {
        let k = &self.field;
        let e = self.curve().canonical_degree(1);
        let mut images = vec![Form::linear(k, [k.one(), k.zero(), k.zero()]), Form::linear(k, [k.zero(), k.one(), k.zero()]), Form::linear(k, [k.zero(), k.zero(), k.one()])];
        images.extend((0..5).map(|_| Form::linear(k, [k.random(rng), k.random(rng), k.random(rng)])));
        let u = forms
            .iter()
            .map(|src| {
                let f = Poly::parse(k, &["x", "y", "z", "a", "b", "c", "l", "m"], src)?.substitute_linear(&images)?;
                if f.degree() != e && !f.is_zero() {
                    return Err(Error::Precondition(format!("`{src}` is not a form of degree {e}")));
                }
                Ok(self.ring.canonical_space().reduce(&f))
            })
            .collect::<Result<Vec<_>>>()?;
        self.annihilator_class(&u, label, rng, seed)
    }

    /// A random class whose kernel contains the span of `u`.
    fn annihilator_class<R: Rng>(&self, u: &[Vector<K>], label: String, rng: &mut R, seed: u64) -> Result<BuiltClass<K>> {
        let g = self.ring.genus();
        let span = Subspace::from_vectors(&self.field, g, u);
        let ann = ks_annihilating(&self.ring, &span);
        if ann.dim() == 0 {
            return Err(Error::Precondition(format!("no nonzero class annihilates the given {}-dimensional U", span.dim())));
        }
        let c = self.random_vector(ann.dim(), rng);
        self.realize(&ann.combine(&c), label, seed)
    }

    fn realize(&self, f: &[K::Elem], label: String, seed: u64) -> Result<BuiltClass<K>> {
        let tails = realize_functional(&self.ring, f, util::substream(seed, "realize", 0), &[])?;
        let xi = ks_from_tails(&self.ring, tails, label)?;
        Ok(BuiltClass { xi, realized: true })
    }

    pub fn choose_phi(&self, spec: &PhiSpec, w: &Subspace<K>, seed: u64) -> Result<Vector<K>> {
        let k = &self.field;
        if w.dim() == 0 {
            return Err(Error::Precondition("W_ξ is zero".into()));
        }
        match spec {
            PhiSpec::Random => {
                let mut rng = util::rng(seed, "phi", 0);
                loop {
                    let v = w.combine(&self.random_vector(w.dim(), &mut rng));
                    if v.iter().any(|c| !k.is_zero(c)) {
                        return Ok(v);
                    }
                }
            }
            PhiSpec::BasisIndex { index } => {
                w.basis().get(*index).cloned().ok_or_else(|| Error::Precondition(format!("W_ξ has no basis vector {index}")))
            }
            PhiSpec::Vector { values } => {
                let v = values.iter().map(|e| parse_elem(k, e)).collect::<Result<Vec<_>>>()?;
                if v.len() != self.ring.genus() {
                    return Err(Error::Precondition(format!("φ needs {} coordinates", self.ring.genus())));
                }
                if !w.contains(&v) {
                    return Err(Error::PhiNotInW);
                }
                Ok(v)
            }
        }
    }

    /// Checks `Q(ω(p), ω(p)) = 0` at sample points, independently of the division certificate.
    pub fn pointwise(&self, q: &Matrix<K>, seed: u64) -> Result<usize> {
        let k = &self.field;
        let pts = self.sample_points(POINTWISE_SAMPLES, seed);
        for p in &pts {
            let ev = self.curve().evaluate_basis(p, 1);
            let qv = q.apply(&ev);
            let val = ev.iter().zip(&qv).fold(k.zero(), |acc, (a, b)| k.mul_add(&acc, a, b));
            if !k.is_zero(&val) {
                return Err(Error::InvariantViolation(format!("quadric does not vanish at {}", p.display(k))));
            }
        }
        Ok(pts.len())
    }

    pub fn cert_json(&self, c: &QuadricCert<K>, seed: u64) -> Result<Value> {
        let n = self.pointwise(&c.q, seed)?;
        if !c.check(&self.ring) {
            return Err(Error::CertificateFailure("stored certificate fails re-verification".into()));
        }
        Ok(util::cert(&self.field, c, &self.hash, n))
    }
}

/// A task result: payload and named checks.
pub type TaskOutput = (Value, Vec<Value>);

/// Lazily computed per-class data shared by the per-class tasks.
pub struct ClassRun<K: Field> {
    pub label: String,
    pub seed: u64,
    pub built: Result<BuiltClass<K>>,
    cup: Option<CupMatrix<K>>,
    table: Option<Result<Alpha2Table<K>>>,
    phi: Option<Result<Vector<K>>>,
    filtration: Option<Result<XiPhiFiltration<K>>>,
}

impl<K: Field> ClassRun<K> {
    pub fn new(lab: &Lab<K>, spec: &KsSpec, index: usize) -> Self {
        Self::with_seed(lab, spec, spec.label(index), util::substream(lab.seed, "ks", index as u64))
    }

    pub fn with_seed(lab: &Lab<K>, spec: &KsSpec, label: String, seed: u64) -> Self {
        let built = lab.build_class(spec, label.clone(), seed);
        ClassRun { label, seed, built, cup: None, table: None, phi: None, filtration: None }
    }

    pub fn xi(&self) -> Result<&KSClass<K>> {
        self.built.as_ref().map(|b| &b.xi).map_err(Clone::clone)
    }

    pub fn cup(&mut self, lab: &Lab<K>) -> Result<&CupMatrix<K>> {
        if self.cup.is_none() {
            let c = cup_matrix(&lab.ring, self.xi()?);
            self.cup = Some(c);
        }
        Ok(self.cup.as_ref().unwrap())
    }

    pub fn table(&mut self, lab: &Lab<K>) -> Result<&Alpha2Table<K>> {
        if self.table.is_none() {
            let xi = self.xi()?.clone();
            let opts = MlOptions { seed: util::substream(self.seed, "ml", 0), ..MlOptions::default() };
            self.table = Some(alpha2_table(&lab.ring, &xi, None, opts));
        }
        self.table.as_ref().unwrap().as_ref().map_err(Clone::clone)
    }

    pub fn phi(&mut self, lab: &Lab<K>, spec: &PhiSpec) -> Result<Vector<K>> {
        if self.phi.is_none() {
            let w = self.cup(lab)?.w.clone();
            self.phi = Some(lab.choose_phi(spec, &w, self.seed));
        }
        self.phi.clone().unwrap()
    }

    pub fn filtration(&mut self, lab: &Lab<K>, spec: &PhiSpec) -> Result<&XiPhiFiltration<K>> {
        if self.filtration.is_none() {
            let phi = self.phi(lab, spec)?;
            let f = self.table(lab).and_then(|t| xi_phi_filtration(&t.values, &phi));
            self.filtration = Some(f);
        }
        self.filtration.as_ref().unwrap().as_ref().map_err(Clone::clone)
    }
}

pub fn info<K: Field>(lab: &Lab<K>) -> Result<TaskOutput> {
    let ring = &lab.ring;
    let g = ring.genus();
    let (ic2, expected) = ic2_check(ring);
    let s2 = ring.sym2_map().rank();
    let s3 = ring.sym3_map().rank();
    let n3 = lab.curve().mcanonical_basis(3).dim();
    let result = json!({
        "d": lab.curve().degree(),
        "g": g,
        "h0K": g,
        "h02K": ring.bicanonical_dim(),
        "h03K": n3,
        "sym2_rank": s2,
        "sym3_rank": s3,
        "ic2": ic2,
        "ic2_expected": expected,
        "smoothness_mode": lab.curve().smoothness_mode().as_str(),
        "rational_points": lab.curve().rational_point_count(),
    });
    let checks = vec![
        util::check("h0(2K) = 3g-3", ring.bicanonical_dim() == 3 * g - 3),
        util::check("quadratic normality: rank S2H0(K) -> H0(2K) = 3g-3", s2 == 3 * g - 3),
        util::check("dim I_C(2) = binom(g-2, 2)", ic2 == expected),
        util::check("cubic normality: rank S3H0(K) -> H0(3K) = 5g-5", s3 == 5 * g - 5 && n3 == 5 * g - 5),
    ];
    Ok((result, checks))
}

pub fn stratify<K: Field>(lab: &Lab<K>, run: &mut ClassRun<K>, query: Option<usize>) -> Result<TaskOutput> {
    let k = &lab.field;
    let xi = run.xi()?.clone();
    let rep = stratum(&lab.ring, &xi, query);
    let mut result = json!({
        "rank": rep.rank,
        "w_dim": rep.w_dim,
        "query": query,
        "in_open_stratum": rep.in_open_stratum,
        "secant_witness": rep.secant_witness.as_ref().map(|w| w.iter().map(|(p, m)| json!({"point": util::point(k, p), "order": m})).collect::<Vec<_>>()),
        "realized_tails": run.built.as_ref().map(|b| b.realized).unwrap_or(false),
    });
    let mut checks = vec![util::check("rank + dim W = g", rep.rank + rep.w_dim == lab.ring.genus())];
    if let Some(t) = &xi.tails {
        checks.push(util::check("secant inclusion: rank <= degree of tail divisor", rep.rank <= t.total_order()));
    }
    if rep.rank == 1 {
        match rank1_geometry(&lab.ring, &xi, &lab.points) {
            Ok(geo) => {
                result["base_point"] = util::point(k, &geo.base_point);
                result["w_equals_delta_h0"] = json!(geo.w_equals_delta_h0);
                checks.push(util::check("rank one: W = forms vanishing at the base point", geo.w_equals_delta_h0));
            }
            Err(e @ Error::BasePointNotFound { .. }) => result["base_point_error"] = util::error(&e),
            Err(e) => return Err(e),
        }
    }
    Ok((result, checks))
}

pub fn filtration<K: Field>(lab: &Lab<K>, run: &mut ClassRun<K>, phi_spec: &PhiSpec) -> Result<TaskOutput> {
    let k = lab.field.clone();
    let w_dim = run.cup(lab)?.w.dim();
    let table = run.table(lab)?.clone();
    let triples = verify_cocycle(&table)?;
    let f = run.filtration(lab, phi_spec)?.clone();
    let phi = f.phi.clone();

    let mut rng = util::rng(run.seed, "shift", 0);
    let mut invariant = true;
    for _ in 0..SHIFTS_PER_CLASS {
        let lambda: Vec<K::Elem> = (0..w_dim).map(|_| k.random(&mut rng)).collect();
        let shifted = splitting_shift(&table, &lambda)?;
        let g = xi_phi_filtration(&shifted.values, &phi)?;
        invariant &= g.chain == f.chain;
    }
    let l = f.length;
    let h = &f.partition;
    let result = json!({
        "w_dim": w_dim,
        "denominator_degree": table.denominator.degree(),
        "cocycle_triples": triples,
        "phi": util::vector(&k, &phi),
        "length": l,
        "partition": h,
        "chain_dims": f.chain_dims(),
        "graded_map_ranks": f.graded_maps.iter().map(Matrix::rank).collect::<Vec<_>>(),
        "splitting_invariance_checked": SHIFTS_PER_CLASS,
    });
    let checks = vec![
        util::check("Koszul cocycle identity on all basis triples", true),
        util::check("phi in W^l", f.chain[l].contains(&phi)),
        util::check("sum of h^i = dim W", h.iter().sum::<usize>() == w_dim),
        util::check("h^i >= h^(i+1) for i <= l-2", (0..l.saturating_sub(1)).all(|i| h[i] >= h[i + 1])),
        util::check("gr c^(i) injective", f.graded_maps.iter().enumerate().all(|(i, m)| m.rank() == f.graded_bases[i + 1].len())),
        util::check("filtration independent of the splitting", invariant),
    ];
    Ok((result, checks))
}

pub fn sl2_json<K: Field>(f: &XiPhiFiltration<K>) -> Result<TaskOutput> {
    let r = nilpotent_and_sl2(f)?;
    let result = json!({
        "length": f.length,
        "quotient_dim": r.quotient_dim,
        "jordan_blocks": r.jordan_blocks,
        "weight_dims": r.weight_dims.iter().map(|(n, d)| json!([n, d])).collect::<Vec<_>>(),
        "bigraded": r.bigraded_dims.iter().map(|((a, b), d)| json!([a, b, d])).collect::<Vec<_>>(),
        "lefschetz_ok": r.lefschetz_ok,
        "sl2_relations_ok": r.sl2_relations_ok,
        "multiplicity": {
            "block_counts": r.multiplicity.block_counts,
            "literal_reading": r.multiplicity.literal_reading,
            "difference_reading": r.multiplicity.difference_reading,
        },
    });
    let checks = vec![
        util::check("block sizes sum to dim W/W^l", r.jordan_blocks.iter().sum::<usize>() == r.quotient_dim),
        util::check("Lefschetz: N^n is an isomorphism H^-n -> H^n", r.lefschetz_ok),
        util::check("sl(2) triple relations", r.sl2_relations_ok),
        util::check("dim H^-n = dim H^n", r.weight_dims.iter().all(|(n, d)| r.weight_dims.get(&-n) == Some(d))),
    ];
    Ok((result, checks))
}

pub fn sl2<K: Field>(lab: &Lab<K>, run: &mut ClassRun<K>, phi_spec: &PhiSpec) -> Result<TaskOutput> {
    sl2_json(run.filtration(lab, phi_spec)?)
}

/// Triple quadrics, the ψ-string quadrics and Hankel data for one class.
pub fn quadrics<K: Field>(lab: &Lab<K>, run: &mut ClassRun<K>, phi_spec: &PhiSpec) -> Result<TaskOutput> {
    let k = lab.field.clone();
    let g = lab.ring.genus();
    let table = run.table(lab)?.clone();
    let f = run.filtration(lab, phi_spec)?.clone();
    let b = table.w_basis();
    let mut triples = Vec::new();
    let mut all_verified = true;
    'outer: for i in 0..b.len() {
        for j in i + 1..b.len() {
            for l in j + 1..b.len() {
                if triples.len() == TRIPLE_LIMIT {
                    break 'outer;
                }
                let c = triple_quadric(&lab.ring, &table.values, &b[i], &b[j], &b[l])?;
                all_verified &= c.verified;
                triples.push(json!({"indices": [i, j, l], "cert": lab.cert_json(&c, run.seed)?}));
            }
        }
    }

    // start from the deepest graded piece, or from a basis vector independent of φ
    let start = if f.length >= 1 {
        Some(f.graded_bases[f.length - 1][0].clone())
    } else {
        b.iter().find(|v| Subspace::from_vectors(&k, g, &[f.phi.clone(), (*v).clone()]).dim() == 2).cloned()
    };
    let (string_json, qij_json, hankel_json, string_checks) = match start {
        None => (Value::Null, json!([]), json!({"not_applicable": "dim W = 1"}), vec![]),
        Some(s) => string_quadrics(lab, &table, &f.phi, &s, run.seed)?,
    };
    let (ic2, expected) = ic2_check(&lab.ring);
    let result = json!({
        "ic2": ic2,
        "ic2_expected": expected,
        "triples": triples,
        "string": string_json,
        "qij": qij_json,
        "hankel": hankel_json,
    });
    let mut checks = vec![
        util::check("dim I_C(2) = binom(g-2, 2)", ic2 == expected),
        util::check("triple quadric certificates verify", all_verified),
    ];
    checks.extend(string_checks);
    Ok((result, checks))
}

/// ψ-string from `start`, its `Q_ij` certificates and Hankel data.
pub fn string_quadrics<K: Field>(
    lab: &Lab<K>,
    table: &Alpha2Table<K>,
    phi: &[K::Elem],
    start: &[K::Elem],
    seed: u64,
) -> Result<(Value, Value, Value, Vec<Value>)> {
    let k = &lab.field;
    let g = lab.ring.genus();
    let string = psi_string(&table.values, phi, start, g)?;
    let qs = quadrics_qij(&lab.ring, &table.values, &string)?;
    let mut qij = Vec::new();
    let mut agree = true;
    let mut verified = true;
    for q in &qs {
        agree &= q.ascending_form_agrees;
        verified &= q.cert.verified;
        qij.push(json!({"i": q.i, "j": q.j, "h": util::vector(k, &q.h), "ascending_form_agrees": q.ascending_form_agrees, "cert": lab.cert_json(&q.cert, seed)?}));
    }
    let span = quadric_span_rank(k, &qs.iter().map(|q| &q.cert.q).collect::<Vec<_>>());
    let w_dim = table.w_basis().len();
    let (ic2, expected) = ic2_check(&lab.ring);
    let complete = if w_dim == g - 1 && qs.len() == expected {
        json!({"applicable": true, "count": qs.len(), "span_rank": span, "ic2": ic2, "complete": span == ic2})
    } else {
        json!({"applicable": false, "count": qs.len(), "span_rank": span})
    };
    let mut checks = vec![
        util::check("Q_ij certificates verify", verified),
        util::check("ascending and descending Q_ij forms agree", agree),
    ];
    let hankel = match hankel_data(&table.values, &string) {
        Ok(h) => {
            checks.push(util::check("Hankel anti-diagonals constant", h.hankel_ok));
            checks.push(util::check("Hankel minors equal Q_ij - phi h_ij", h.minor_identity_ok));
            json!({
                "columns": h.rows[0].len(),
                "hankel_ok": h.hankel_ok,
                "independent": h.independent,
                "independent_prefix": h.independent_prefix,
                "minor_identity_ok": h.minor_identity_ok,
            })
        }
        Err(e @ Error::StringTooShort(_)) => json!({"not_applicable": e.to_string()}),
        Err(e) => return Err(e),
    };
    let string_json = json!({
        "length": string.psis.len(),
        "in_w": string.in_w,
        "psis": string.psis.iter().map(|v| util::vector(k, v)).collect::<Vec<_>>(),
        "complete_set": complete,
    });
    Ok((string_json, Value::Array(qij), hankel, checks))
}

pub fn gpp<K: Field>(lab: &Lab<K>, run: &mut ClassRun<K>, phi_spec: &PhiSpec) -> Result<TaskOutput> {
    let k = &lab.field;
    let phi = run.phi(lab, phi_spec)?;
    let r = gpp_check(&lab.ring, &phi, &lab.points)?;
    let result = json!({
        "phi": util::vector(k, &phi),
        "verdict": r.verdict.as_str(),
        "zeros": r.zeros.iter().map(|p| util::point(k, p)).collect::<Vec<_>>(),
        "reason": r.reason,
        "subsets_checked": r.subsets_checked,
        "exhaustive": r.exhaustive,
    });
    Ok((result, vec![]))
}

/// Checks that the string-quadric tensors agree with the triple quadrics
/// without a curve; used by the selftest on synthetic tables.
pub fn qij_tensors_agree<K: Field>(table: &ivhs_core::Alpha2Values<K>, string: &ivhs_core::PsiString<K>) -> Result<usize> {
    let mut n = 0;
    for j in 0..string.top() {
        for i in 0..j {
            let (_, _, agrees) = qij_tensor(table, string, i, j)?;
            if !agrees {
                return Err(Error::InvariantViolation(format!("ascending form of Q_{i}{j} disagrees")));
            }
            n += 1;
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ivhs_core::PrimeField;

    fn sextic() -> Lab<PrimeField> {
        Lab::new(PrimeField::new(101).unwrap(), "x^6+y^6+z^6", 3, &[]).unwrap()
    }

    #[test]
    fn schiffer_run_has_rank_one() {
        let lab = sextic();
        let spec = KsSpec::Schiffer { label: None, point: None };
        let mut run = ClassRun::new(&lab, &spec, 0);
        assert_eq!(run.label, "schiffer#0");
        assert_eq!(run.cup(&lab).unwrap().rank, 1);
    }

    #[test]
    fn annihilator_of_kills_the_given_forms() {
        let lab = sextic();
        let spec = KsSpec::AnnihilatorOf { label: None, forms: vec!["x^3".into(), "l*a^2".into()] };
        let mut run = ClassRun::new(&lab, &spec, 0);
        let w = run.cup(&lab).unwrap().w.clone();
        let x3 = lab.ring.canonical_space().reduce(&Form::monomial(&lab.field, [3, 0, 0]));
        assert!(w.contains(&x3));
    }

    #[test]
    fn wrong_degree_forms_are_rejected() {
        let lab = sextic();
        let spec = KsSpec::AnnihilatorOf { label: None, forms: vec!["x^2".into()] };
        assert!(lab.build_class(&spec, "bad".into(), 0).is_err());
    }

    #[test]
    fn info_matches_genus_formulas() {
        let (v, _) = info(&sextic()).unwrap();
        assert_eq!(v["g"], 10);
        assert_eq!(v["h02K"], 27);
        assert_eq!(v["ic2"], v["ic2_expected"]);
    }
}
