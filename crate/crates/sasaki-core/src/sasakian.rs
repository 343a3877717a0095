//! Sasakian structure fields, their defining identities, and the canonical
//! metric deformation `h = g + rho^2 eta (x) eta`.
//!
//! A Sasakian structure on a (4k+1)-manifold is a contact form `eta`, its
//! Reeb field `xi`, an endomorphism `phi` of the tangent bundle, and a
//! compatible metric `g`. [`StructureAtPoint::axiom_checks`] verifies every
//! defining identity numerically at a point of a model chart. The deformation
//! functions build the family `h = g + rho^2 eta (x) eta` together with its
//! Levi-Civita connection and curvature, the latter organized as a polynomial
//! in `t = rho^2` so each coefficient tensor can be inspected separately.

use crate::chain::{chain_top_skew, PolyMat};
use crate::chart::{fd_partials_with_error, metric_jets, Chart};
use crate::geometry::{covariant_derivative, curvature_at, invert_matrix, CurvatureData};
use crate::models::Model;
use crate::poly::PolyTensor;
use crate::report::CheckRecord;
use crate::tensor::{delta, DenseTensor, Slot};
use crate::tol;

/// Pointwise values of the structure fields, in the index conventions used
/// throughout: `phi_mixed[i][j] = phi_i^j` (lower then upper), `phi_lower`
/// fully covariant.
pub struct StructureTensors {
    pub g: DenseTensor,
    pub g_inv: DenseTensor,
    pub eta: DenseTensor,
    pub xi: DenseTensor,
    pub phi_mixed: DenseTensor,
    pub phi_lower: DenseTensor,
}

impl StructureTensors {
    fn d(&self) -> usize {
        self.g.dim()
    }

    /// `g_{ji} d_k^h - g_{ki} d_j^h`, the curvature of the unit round metric,
    /// in slots `(k, j, i, ^h)`.
    pub fn constant_curvature_pattern(&self) -> DenseTensor {
        let d = self.d();
        let g = self.g.data();
        DenseTensor::from_fn(d, &[Slot::Down, Slot::Down, Slot::Down, Slot::Up], |idx| {
            let (k, j, i, h) = (idx[0], idx[1], idx[2], idx[3]);
            let mut v = 0.0;
            if k == h {
                v += g[j * d + i];
            }
            if j == h {
                v -= g[k * d + i];
            }
            v
        })
    }

    /// `phi_{ki} phi_j^h - phi_k^h phi_{ji} + 2 phi_{kj} phi_i^h`, the
    /// phi-quadratic contact pattern.
    pub fn phi_product_pattern(&self) -> DenseTensor {
        let d = self.d();
        let pl = self.phi_lower.data();
        let pm = self.phi_mixed.data();
        DenseTensor::from_fn(d, &[Slot::Down, Slot::Down, Slot::Down, Slot::Up], |idx| {
            let (k, j, i, h) = (idx[0], idx[1], idx[2], idx[3]);
            pl[k * d + i] * pm[j * d + h] - pm[k * d + h] * pl[j * d + i]
                + 2.0 * pl[k * d + j] * pm[i * d + h]
        })
    }

    /// `g_{ki} eta_j xi^h - g_{ji} eta_k xi^h`.
    pub fn metric_eta_xi_pattern(&self) -> DenseTensor {
        let d = self.d();
        let g = self.g.data();
        let eta = self.eta.data();
        let xi = self.xi.data();
        DenseTensor::from_fn(d, &[Slot::Down, Slot::Down, Slot::Down, Slot::Up], |idx| {
            let (k, j, i, h) = (idx[0], idx[1], idx[2], idx[3]);
            (g[k * d + i] * eta[j] - g[j * d + i] * eta[k]) * xi[h]
        })
    }

    /// `eta_k eta_i d_j^h - eta_j eta_i d_k^h`.
    pub fn eta_eta_delta_pattern(&self) -> DenseTensor {
        let d = self.d();
        let eta = self.eta.data();
        DenseTensor::from_fn(d, &[Slot::Down, Slot::Down, Slot::Down, Slot::Up], |idx| {
            let (k, j, i, h) = (idx[0], idx[1], idx[2], idx[3]);
            let mut v = 0.0;
            if j == h {
                v += eta[k] * eta[i];
            }
            if k == h {
                v -= eta[j] * eta[i];
            }
            v
        })
    }

    /// Coefficient of `-t` in the deformed curvature. Expanding the
    /// curvature of `G_{ij}^k - t (phi_i^k eta_j + phi_j^k eta_i)` with the
    /// covariant derivatives of `phi` and `eta` gives
    /// `-phi_{ki} phi_j^h + phi_k^h phi_{ji} - 2 phi_{kj} phi_i^h`
    /// for the phi-quadratic part, plus `2 (eta eta delta)` plus the
    /// metric-eta-xi block. The finite-difference cross-check pins the sign
    /// of every block.
    pub fn deformation_quadratic_pattern(&self) -> DenseTensor {
        let mut p = self.phi_product_pattern().scale(-1.0);
        p.axpy(2.0, &self.eta_eta_delta_pattern());
        p.axpy(1.0, &self.metric_eta_xi_pattern());
        p
    }

    /// Coefficient of `-t^2` in the deformed curvature.
    pub fn deformation_quartic_pattern(&self) -> DenseTensor {
        self.eta_eta_delta_pattern()
    }

    /// `eta_k d_j^h - eta_j d_k^h` in slots `(k, j, ^h)`, the shape of the
    /// curvature contracted with the Reeb field.
    pub fn xi_contraction_pattern(&self) -> DenseTensor {
        let d = self.d();
        let eta = self.eta.data();
        DenseTensor::from_fn(d, &[Slot::Down, Slot::Down, Slot::Up], |idx| {
            let (k, j, h) = (idx[0], idx[1], idx[2]);
            let mut v = 0.0;
            if j == h {
                v += eta[k];
            }
            if k == h {
                v -= eta[j];
            }
            v
        })
    }
}

/// Everything needed to verify the structure identities at one point: the
/// metric jets and curvature, the structure fields, and their coordinate
/// partials (derivative slot first, flat layout matching
/// [`covariant_derivative`]).
pub struct StructureAtPoint {
    pub model_name: &'static str,
    pub k: usize,
    pub curv: CurvatureData,
    pub st: StructureTensors,
    /// `dg[(m*d + i)*d + j] = d_m g_{ij}`.
    pub dg: Vec<f64>,
    pub d_eta: Vec<f64>,
    pub d_xi: Vec<f64>,
    pub d_phi: Vec<f64>,
    /// Largest finite-difference error estimate among the field partials.
    pub fd_field_error: f64,
}

impl StructureAtPoint {
    pub fn compute(model: &Model, x: &[f64], step: f64) -> StructureAtPoint {
        let d = model.dim;
        let curv = curvature_at(&model.chart, x, step);
        let (dg, _, _) = metric_jets(&model.chart, x, step);
        let eta = DenseTensor::from_data(d, &[Slot::Down], (model.eta)(x));
        let xi = DenseTensor::from_data(d, &[Slot::Up], (model.xi)(x));
        let phi_mixed =
            DenseTensor::from_data(d, &[Slot::Down, Slot::Up], (model.phi_mixed)(x));
        let phi_lower =
            DenseTensor::from_data(d, &[Slot::Down, Slot::Down], (model.phi_lower)(x));
        let (d_eta, e1) = fd_partials_with_error(&*model.eta, x, step);
        let (d_xi, e2) = fd_partials_with_error(&*model.xi, x, step);
        let (d_phi, e3) = fd_partials_with_error(&*model.phi_mixed, x, step);
        let st = StructureTensors {
            g: curv.g.clone(),
            g_inv: curv.g_inv.clone(),
            eta,
            xi,
            phi_mixed,
            phi_lower,
        };
        StructureAtPoint {
            model_name: model.name,
            k: model.k,
            curv,
            st,
            dg,
            d_eta,
            d_xi,
            d_phi,
            fd_field_error: e1.max(e2).max(e3),
        }
    }

    fn dim(&self) -> usize {
        self.curv.dim
    }

    /// The exterior derivative `(d eta)_{ij} = (d_i eta_j - d_j eta_i) / 2`
    /// assembled from the stored partials.
    pub fn d_eta_form(&self) -> DenseTensor {
        let d = self.dim();
        let t = DenseTensor::from_data(d, &[Slot::Down, Slot::Down], self.d_eta.clone());
        t.sub(&t.permute_slots(&[1, 0])).scale(0.5)
    }

    /// Top coefficient of `eta /\ w^{2k}` for a two-form `w`, computed through
    /// the trace-chain enumerator so it stays tractable at every dimension.
    pub fn contact_top(&self, w: &DenseTensor) -> f64 {
        let d = self.dim();
        let eta = self.st.eta.data();
        let wd = w.data();
        let first = |l: usize| PolyMat::from_degrees(1, vec![(0, vec![eta[l]])]);
        let pair = |a: usize, b: usize| PolyMat::from_degrees(1, vec![(0, vec![wd[a * d + b]])]);
        chain_top_skew(d, &first, &pair, false).coeff(0)
    }

    /// Verifies every defining identity of the structure at this point.
    pub fn axiom_checks(&self, point_index: usize) -> Vec<CheckRecord> {
        let d = self.dim();
        let st = &self.st;
        let name = self.model_name;
        let tol = tol::ANALYTIC_IDENTITY;
        let mut out = Vec::new();
        let mut push = |id: &str, residual: f64| {
            out.push(CheckRecord::upper(id, name, residual, tol).with_point(point_index));
        };

        // phi^2 = -id + eta (x) xi
        let phi_sq = st.phi_mixed.contract_product(&st.phi_mixed, &[(1, 0)]);
        let resid = phi_sq
            .add(&delta(d))
            .sub(&st.eta.tensor_product(&st.xi));
        push("phi-squared-identity", resid.max_abs());

        // eta(xi) = 1
        let pairing = st.eta.contract_product(&st.xi, &[(0, 0)]).data()[0];
        push("eta-xi-pairing", (pairing - 1.0).abs());

        // phi(xi) = 0 and eta after phi = 0
        push(
            "phi-kills-xi",
            st.xi.contract_product(&st.phi_mixed, &[(0, 0)]).max_abs(),
        );
        push(
            "phi-kills-eta",
            st.phi_mixed.contract_product(&st.eta, &[(1, 0)]).max_abs(),
        );

        // g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)
        let lowered = st.phi_mixed.lower_slot(1, &st.g);
        let phi_g_phi = lowered.contract_product(&st.phi_mixed, &[(1, 1)]);
        let resid = st
            .g
            .sub(&phi_g_phi)
            .sub(&st.eta.tensor_product(&st.eta));
        push("metric-phi-compatibility", resid.max_abs());

        // g(xi, .) = eta
        let resid = st.xi.contract_product(&st.g, &[(0, 0)]).sub(&st.eta);
        push("metric-xi-duality", resid.max_abs());

        // the covariant phi is antisymmetric and consistent with the mixed one
        let resid = st.phi_lower.add(&st.phi_lower.permute_slots(&[1, 0]));
        push("phi-lower-antisymmetry", resid.max_abs());
        push("phi-lower-matches-mixed", st.phi_lower.sub(&lowered).max_abs());

        // d eta = -phi
        let resid = self.d_eta_form().add(&st.phi_lower);
        push("contact-form-derivative", resid.max_abs());

        // nabla eta = -phi, nabla xi = -phi (mixed)
        let nabla_eta = covariant_derivative(&st.eta, &self.curv.gamma, &self.d_eta);
        push(
            "covariant-eta-identity",
            nabla_eta.add(&st.phi_lower).max_abs(),
        );
        let nabla_xi = covariant_derivative(&st.xi, &self.curv.gamma, &self.d_xi);
        push(
            "covariant-xi-identity",
            nabla_xi.add(&st.phi_mixed).max_abs(),
        );

        // (nabla_m phi)_j^h = g_{mj} xi^h - eta_j d_m^h
        let nabla_phi = covariant_derivative(&st.phi_mixed, &self.curv.gamma, &self.d_phi);
        let g = st.g.data();
        let eta = st.eta.data();
        let xi = st.xi.data();
        let expected = DenseTensor::from_fn(d, &[Slot::Down, Slot::Down, Slot::Up], |idx| {
            let (m, j, h) = (idx[0], idx[1], idx[2]);
            let mut v = g[m * d + j] * xi[h];
            if m == h {
                v -= eta[j];
            }
            v
        });
        push("covariant-phi-identity", nabla_phi.sub(&expected).max_abs());

        // Lie derivative of g along xi vanishes, from raw partials alone
        let dg = &self.dg;
        let d_xi = &self.d_xi;
        let lie = DenseTensor::from_fn(d, &[Slot::Down, Slot::Down], |idx| {
            let (i, j) = (idx[0], idx[1]);
            let mut v = 0.0;
            for m in 0..d {
                v += xi[m] * dg[(m * d + i) * d + j]
                    + g[m * d + j] * d_xi[i * d + m]
                    + g[i * d + m] * d_xi[j * d + m];
            }
            v
        });
        push("xi-killing-lie-derivative", lie.max_abs());

        // contact volume: eta /\ (d eta)^{2k} never vanishes and agrees with
        // eta /\ phi^{2k} (the sign factor (-1)^{2k} is +1 here)
        let top_deta = self.contact_top(&self.d_eta_form());
        let top_phi = self.contact_top(&st.phi_lower);
        out.push(
            CheckRecord::lower(
                "contact-volume-nonvanishing",
                name,
                top_deta.abs(),
                tol::VOLUME_FLOOR,
            )
            .with_point(point_index)
            .with_note(format!("top coefficient {top_deta:.6e}")),
        );
        let mut vol_resid = (top_deta - top_phi).abs() / top_phi.abs().max(1e-300);
        if d == 5 {
            // low rank permits the stronger componentwise comparison
            let deta = self.d_eta_form();
            let w_deta = st.eta.wedge(&deta).wedge(&deta);
            let w_phi = st.eta.wedge(&st.phi_lower).wedge(&st.phi_lower);
            vol_resid = vol_resid
                .max(w_deta.sub(&w_phi).max_abs() / w_phi.max_abs().max(1e-300));
        }
        out.push(
            CheckRecord::upper("contact-volume-matches-phi-power", name, vol_resid, tol)
                .with_point(point_index),
        );
        out
    }
}

/// The deformed metric `h = g + rho^2 eta (x) eta` and its closed-form
/// inverse `h^{-1} = g^{-1} - rho^2/(1+rho^2) xi (x) xi`.
pub fn deform_metric(st: &StructureTensors, rho: f64) -> (DenseTensor, DenseTensor) {
    let t = rho * rho;
    let h = st.g.add(&st.eta.tensor_product(&st.eta).scale(t));
    let h_inv = st
        .g_inv
        .sub(&st.xi.tensor_product(&st.xi).scale(t / (1.0 + t)));
    (h, h_inv)
}

/// Levi-Civita connection of the deformed metric:
/// `G_{ij}^k - rho^2 (phi_i^k eta_j + phi_j^k eta_i)`.
pub fn deformed_christoffel(gamma: &[f64], st: &StructureTensors, rho: f64) -> Vec<f64> {
    let d = st.g.dim();
    let t = rho * rho;
    let phi = st.phi_mixed.data();
    let eta = st.eta.data();
    let mut out = gamma.to_vec();
    for i in 0..d {
        for j in 0..d {
            for h in 0..d {
                out[(i * d + j) * d + h] -=
                    t * (phi[i * d + h] * eta[j] + phi[j * d + h] * eta[i]);
            }
        }
    }
    out
}

/// Curvature of the deformed metric as a polynomial in `t = rho^2`: the
/// undeformed curvature at degree zero, minus the quadratic pattern at degree
/// one, minus the quartic pattern at degree two. Slots `(k, j, i, ^h)`.
pub fn deformed_curvature(riemann: &DenseTensor, st: &StructureTensors) -> PolyTensor {
    let mut rt = PolyTensor::monomial(0, riemann.clone());
    rt.add_term(1, &st.deformation_quadratic_pattern(), -1.0);
    rt.add_term(2, &st.deformation_quartic_pattern(), -1.0);
    rt
}

/// A chart whose metric closure is the deformed metric of the named model,
/// with no analytic jets, so that differentiating it exercises the full
/// finite-difference path independently of the closed-form connection.
pub fn deformed_chart(model_name: &str, k: usize, rho: f64) -> Chart {
    let m = Model::by_name(model_name, k).expect("unknown model name");
    let t = rho * rho;
    let d = m.dim;
    let metric = m.chart.metric;
    let eta = m.eta;
    Chart {
        dim: d,
        metric: Box::new(move |x: &[f64]| {
            let mut g = metric(x);
            let e = eta(x);
            for i in 0..d {
                for j in 0..d {
                    g[i * d + j] += t * e[i] * e[j];
                }
            }
            g
        }),
        metric_partials: None,
        metric_second_partials: None,
    }
}

/// Identities of the deformed curvature that hold coefficient by coefficient
/// in `t`: the first Bianchi identity for each grade, and the symmetries of
/// the grades after lowering the upper slot with the deformed metric itself
/// (treated as the degree-one polynomial `g + t eta (x) eta`, so the lowered
/// object is again graded). Lowering with `g` alone would mix the grades and
/// the pair symmetries would fail degree by degree.
pub fn deformation_grade_checks(sp: &StructureAtPoint, point_index: usize) -> Vec<CheckRecord> {
    let rbar = deformed_curvature(&sp.curv.riemann, &sp.st);
    let name = sp.model_name;
    let mut out = Vec::new();

    let mut bianchi: f64 = 0.0;
    for deg in 0..rbar.num_coeffs() {
        let c = rbar.coeff_or_zero(deg);
        let scale = c.max_abs().max(1.0);
        bianchi = bianchi.max(c.skew_symmetrize(&[0, 1, 2]).max_abs() / scale);
    }
    out.push(
        CheckRecord::upper(
            "deformed-grade-bianchi",
            name,
            bianchi,
            tol::ANALYTIC_IDENTITY,
        )
        .with_point(point_index)
        .with_note("first Bianchi identity, each coefficient of t separately"),
    );

    let lowered = rbar.lower_slot_deformed(3, &sp.st.g, &sp.st.eta);
    let mut pair_anti: f64 = 0.0;
    let mut pair_sym: f64 = 0.0;
    for deg in 0..lowered.num_coeffs() {
        let c = lowered.coeff_or_zero(deg);
        let scale = c.max_abs().max(1.0);
        pair_anti = pair_anti.max(c.add(&c.permute_slots(&[0, 1, 3, 2])).max_abs() / scale);
        pair_sym = pair_sym.max(c.sub(&c.permute_slots(&[2, 3, 0, 1])).max_abs() / scale);
    }
    out.push(
        CheckRecord::upper(
            "deformed-lowered-grade-pair-antisymmetry",
            name,
            pair_anti,
            tol::ANALYTIC_IDENTITY,
        )
        .with_point(point_index)
        .with_note("upper slot lowered with the graded deformed metric"),
    );
    out.push(
        CheckRecord::upper(
            "deformed-lowered-grade-pair-symmetry",
            name,
            pair_sym,
            tol::ANALYTIC_IDENTITY,
        )
        .with_point(point_index),
    );
    out
}

/// Pointwise checks of the deformation at a single `rho`: the closed-form
/// inverse, the Reeb contraction of the curvature, the rescaled Reeb field
/// staying Killing and metric-dual to the rescaled contact form, and the
/// closed-form connection being metric for `h`.
pub fn deformation_checks_at_rho(
    sp: &StructureAtPoint,
    rho: f64,
    point_index: usize,
) -> Vec<CheckRecord> {
    let d = sp.dim();
    let st = &sp.st;
    let name = sp.model_name;
    let t = rho * rho;
    let (h, h_inv) = deform_metric(st, rho);
    let mut out = Vec::new();

    // closed-form inverse against both the identity and Gauss elimination
    let prod = h.contract_product(&h_inv, &[(1, 0)]);
    let id_resid = prod.sub(&delta(d)).max_abs();
    let gauss = invert_matrix(d, h.data());
    let gauss_resid = h_inv
        .data()
        .iter()
        .zip(&gauss)
        .fold(0.0f64, |w, (a, b)| w.max((a - b).abs()));
    out.push(
        CheckRecord::upper(
            "deformed-metric-inverse",
            name,
            id_resid.max(gauss_resid),
            tol::EXACT_ARITHMETIC,
        )
        .with_point(point_index)
        .with_rho(rho),
    );

    // R(., ., xi) = -(1+t)^2 (eta_k d_j^h - eta_j d_k^h)
    let rbar = deformed_curvature(&sp.curv.riemann, st);
    let reval = rbar.eval(t);
    let contracted = st.xi.contract_product(&reval, &[(0, 2)]);
    let scale = (1.0 + t) * (1.0 + t);
    let resid = contracted
        .add(&st.xi_contraction_pattern().scale(scale))
        .max_abs()
        / scale;
    out.push(
        CheckRecord::upper(
            "deformed-xi-contraction",
            name,
            resid,
            tol::ANALYTIC_IDENTITY,
        )
        .with_point(point_index)
        .with_rho(rho),
    );

    // partials of h from the stored jets
    let eta = st.eta.data();
    let xi = st.xi.data();
    let dg = &sp.dg;
    let d_eta = &sp.d_eta;
    let mut dh = vec![0.0; d * d * d];
    for m in 0..d {
        for i in 0..d {
            for j in 0..d {
                dh[(m * d + i) * d + j] = dg[(m * d + i) * d + j]
                    + t * (d_eta[m * d + i] * eta[j] + eta[i] * d_eta[m * d + j]);
            }
        }
    }

    // xi is Killing for h as well
    let d_xi = &sp.d_xi;
    let hd = h.data();
    let lie = DenseTensor::from_fn(d, &[Slot::Down, Slot::Down], |idx| {
        let (i, j) = (idx[0], idx[1]);
        let mut v = 0.0;
        for m in 0..d {
            v += xi[m] * dh[(m * d + i) * d + j]
                + hd[m * d + j] * d_xi[i * d + m]
                + hd[i * d + m] * d_xi[j * d + m];
        }
        v
    });
    out.push(
        CheckRecord::upper(
            "deformed-xi-killing",
            name,
            lie.max_abs() / (1.0 + t),
            tol::ANALYTIC_IDENTITY,
        )
        .with_point(point_index)
        .with_rho(rho),
    );

    // h(xi, .) = (1+t) eta, so the unit Reeb field of h is xi/sqrt(1+t)
    let resid = st
        .xi
        .contract_product(&h, &[(0, 0)])
        .sub(&st.eta.scale(1.0 + t))
        .max_abs()
        / (1.0 + t);
    out.push(
        CheckRecord::upper(
            "deformed-xi-metric-duality",
            name,
            resid,
            tol::ANALYTIC_IDENTITY,
        )
        .with_point(point_index)
        .with_rho(rho),
    );

    // nabla^h h = 0 for the closed-form connection
    let gamma_bar = deformed_christoffel(&sp.curv.gamma, st, rho);
    let parallel = covariant_derivative(&h, &gamma_bar, &dh);
    out.push(
        CheckRecord::upper(
            "deformed-metric-parallel",
            name,
            parallel.max_abs() / (1.0 + t),
            tol::ANALYTIC_IDENTITY,
        )
        .with_point(point_index)
        .with_rho(rho),
    );
    out
}

/// Cross-checks the closed-form deformed connection and curvature against a
/// finite-difference pass over the deformed chart, which shares no code with
/// the closed forms beyond the metric closure itself.
pub fn deformed_fd_checks(
    sp: &StructureAtPoint,
    rho: f64,
    step: f64,
    point_index: usize,
) -> Vec<CheckRecord> {
    let name = sp.model_name;
    let t = rho * rho;
    let chart = deformed_chart(name, sp.k, rho);
    let fd = curvature_at(&chart, &sp.curv.point, step);

    let gamma_bar = deformed_christoffel(&sp.curv.gamma, &sp.st, rho);
    let gamma_scale = gamma_bar.iter().fold(1.0f64, |w, v| w.max(v.abs()));
    let gamma_resid = gamma_bar
        .iter()
        .zip(&fd.gamma)
        .fold(0.0f64, |w, (a, b)| w.max((a - b).abs()))
        / gamma_scale;

    let rbar = deformed_curvature(&sp.curv.riemann, &sp.st).eval(t);
    let r_scale = rbar.max_abs().max(1.0);
    let r_resid = rbar.sub(&fd.riemann).max_abs() / r_scale;

    vec![
        CheckRecord::upper(
            "deformed-connection-finite-difference",
            name,
            gamma_resid,
            tol::FD_CONNECTION,
        )
        .with_point(point_index)
        .with_rho(rho),
        CheckRecord::upper(
            "deformed-curvature-finite-difference",
            name,
            r_resid,
            tol::FD_CURVATURE,
        )
        .with_point(point_index)
        .with_rho(rho),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Model;

    fn assert_all_pass(checks: &[CheckRecord]) {
        for c in checks {
            assert!(
                c.passed,
                "{} failed: residual {:.3e} vs {:.3e}",
                c.id, c.residual, c.tolerance
            );
        }
    }

    #[test]
    fn axioms_hold_on_sphere() {
        let m = Model::by_name("sphere", 1).unwrap();
        for (i, p) in m.sample_points(4, 7).iter().enumerate() {
            let sp = StructureAtPoint::compute(&m, p, 1e-3);
            assert_all_pass(&sp.axiom_checks(i));
        }
    }

    #[test]
    fn axioms_hold_on_heisenberg() {
        let m = Model::by_name("heisenberg", 1).unwrap();
        for (i, p) in m.sample_points(4, 7).iter().enumerate() {
            let sp = StructureAtPoint::compute(&m, p, 1e-3);
            assert_all_pass(&sp.axiom_checks(i));
        }
    }

    #[test]
    fn deformation_checks_pass_on_both_models() {
        for name in ["sphere", "heisenberg"] {
            let m = Model::by_name(name, 1).unwrap();
            let p = &m.sample_points(2, 3)[1];
            let sp = StructureAtPoint::compute(&m, p, 1e-3);
            assert_all_pass(&deformation_grade_checks(&sp, 0));
            for rho in [0.5, 1.0, 1.7] {
                assert_all_pass(&deformation_checks_at_rho(&sp, rho, 0));
            }
        }
    }

    #[test]
    fn deformed_jets_match_finite_differences() {
        for name in ["sphere", "heisenberg"] {
            let m = Model::by_name(name, 1).unwrap();
            let p = &m.sample_points(1, 11)[0];
            let sp = StructureAtPoint::compute(&m, p, 1e-3);
            for rho in [0.5, 2.0] {
                assert_all_pass(&deformed_fd_checks(&sp, rho, 1e-3, 0));
            }
        }
    }

    #[test]
    fn undeformed_limit_recovers_input() {
        let m = Model::by_name("sphere", 1).unwrap();
        let p = &m.sample_points(1, 5)[0];
        let sp = StructureAtPoint::compute(&m, p, 1e-3);
        let (h, h_inv) = deform_metric(&sp.st, 0.0);
        assert!(h.sub(&sp.st.g).max_abs() == 0.0);
        assert!(h_inv.sub(&sp.st.g_inv).max_abs() < 1e-15);
        let rbar = deformed_curvature(&sp.curv.riemann, &sp.st);
        assert!(rbar.eval(0.0).sub(&sp.curv.riemann).max_abs() == 0.0);
    }
}
