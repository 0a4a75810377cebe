#include "qsl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "qsl/rng.hpp"
#include "qsl/runner.hpp"

namespace qsl {

namespace {

constexpr std::uint64_t kVerifySeed = 0x5EEDFACECAFE0001ULL;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Collects named checks for one instance; most checks compare a measured
/// defect against an allowance and keep the worst case seen.
class Checker {
public:
    Checker(std::vector<CheckResult>& out) : out_(out) {}

    void bound(const std::string& name, double measured, double allowed) {
        CheckResult r;
        r.name = name;
        r.pass = measured <= allowed;
        if (!r.pass)
            r.detail = "measured " + fmt(measured) + " exceeds allowed " + fmt(allowed);
        out_.push_back(std::move(r));
    }

    void require(const std::string& name, bool pass, const std::string& detail_on_fail) {
        CheckResult r;
        r.name = name;
        r.pass = pass;
        if (!pass)
            r.detail = detail_on_fail;
        out_.push_back(std::move(r));
    }

private:
    std::vector<CheckResult>& out_;
};

CVector random_unit(Rng& rng, std::size_t dim) {
    CVector x(dim);
    for (Complex& c : x)
        c = rng.standard_complex_gaussian();
    const double n = vec_norm(x);
    for (Complex& c : x)
        c /= n;
    return x;
}

CVector project_and_normalize(const OrthogonalProjector& p, const CVector& x) {
    CVector y = p.matrix() * x;
    const double n = vec_norm(y);
    if (n < 1e-12)
        return {};
    for (Complex& c : y)
        c /= n;
    return y;
}

// Dispersion of a (possibly non-Hermitian) shift H - cI at a unit vector,
// via the modulus form ||(H-c)x||^2 - |<x,(H-c)x>|^2.
double shifted_variance(const ComplexMatrix& h, Complex c, const CVector& x) {
    CVector y = h * x;
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] -= c * x[i];
    const double n = vec_norm(y);
    return n * n - std::norm(dot(x, y));
}

void verify_one(const Instance& inst, const RunConfig& config, std::uint64_t stream_index,
                std::vector<CheckResult>& out) {
    Checker ck(out);
    const HermitianOperator& h = inst.hamiltonian;
    const OrthogonalProjector& p0 = inst.projector;
    const std::size_t dim = h.dim();
    const double hnorm = std::max(std::abs(h.min_eigenvalue()), std::abs(h.max_eigenvalue()));
    Rng rng = Rng::stream(kVerifySeed, stream_index);

    // --- eigensystem health -------------------------------------------------
    {
        const EigenDecomposition& e = h.eigen();
        ComplexMatrix recon(dim, dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const CVector v = e.eigenvectors.column(k);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    recon(i, j) += e.eigenvalues[k] * v[i] * std::conj(v[j]);
        }
        ck.bound("eigen_reconstruction", (recon - h.matrix()).max_abs(), 1e-10 * (1.0 + hnorm));
        ComplexMatrix gram = e.eigenvectors.adjoint() * e.eigenvectors;
        gram -= ComplexMatrix::identity(dim);
        ck.bound("eigen_orthonormality", gram.max_abs(), 1e-10);
    }

    ProjectionPath path(h, p0);
    const double window = 10.0 / (1.0 + hnorm);
    const double tchk = std::min(config.t_max, window);
    const std::vector<double> times = {0.0, 0.231 * tchk, 0.5 * tchk, 0.777 * tchk, tchk};

    // --- propagator ---------------------------------------------------------
    {
        double unit_defect = 0.0;
        for (double t : times) {
            ComplexMatrix u = path.propagator().at(t);
            ComplexMatrix g = u.adjoint() * u;
            g -= ComplexMatrix::identity(dim);
            unit_defect = std::max(unit_defect, g.max_abs());
        }
        ck.bound("propagator_unitarity", unit_defect, 1e-10);

        const double s = times[1], t = times[3];
        ComplexMatrix lhs = path.propagator().at(s) * path.propagator().at(t);
        ck.bound("propagator_group_law", (lhs - path.propagator().at(s + t)).max_abs(), 1e-10);
    }

    // --- path structure -----------------------------------------------------
    std::vector<OrthogonalProjector> pts;
    pts.reserve(times.size());
    for (double t : times)
        pts.push_back(path.at(t));

    {
        bool ranks_ok = true;
        for (const OrthogonalProjector& pt : pts)
            ranks_ok = ranks_ok && pt.rank() == p0.rank();
        ck.require("rank_conservation", ranks_ok, "rank changed along the path");
    }

    const bool trivial = p0.rank() == 0 || p0.rank() == dim;
    {
        double diag_defect = 0.0;
        double skew_defect = 0.0;
        double speed_defect = 0.0;
        const double v0 = commutator_speed(h, p0);
        for (const OrthogonalProjector& pt : pts) {
            ComplexMatrix c = commutator(h, pt);
            ComplexMatrix skew = c.adjoint() + c;
            skew_defect = std::max(skew_defect, skew.max_abs());
            speed_defect = std::max(speed_defect, std::abs(operator_norm(c) - v0));
            if (!trivial) {
                const ComplexMatrix wp = pt.range_basis().vectors();
                const ComplexMatrix wq = complement(pt).range_basis().vectors();
                diag_defect = std::max(diag_defect, (wp.adjoint() * c * wp).max_abs());
                diag_defect = std::max(diag_defect, (wq.adjoint() * c * wq).max_abs());
            } else {
                diag_defect = std::max(diag_defect, c.max_abs());
            }
        }
        ck.bound("commutator_block_structure", diag_defect, 1e-10 * (1.0 + hnorm));
        ck.bound("commutator_skew_adjoint", skew_defect, 1e-12 * (1.0 + hnorm));
        ck.bound("speed_constancy", speed_defect, 1e-10);
    }

    if (!trivial) {
        BlockDecomposition b = block_decompose(h, p0);
        const ComplexMatrix& wp = b.basis_p.vectors();
        const ComplexMatrix& wq = b.basis_q.vectors();
        ComplexMatrix recon = wp * b.p_block * wp.adjoint() + wq * b.q_block * wq.adjoint() +
                              wp * b.coupling_pq * wq.adjoint() + wq * b.coupling_qp * wp.adjoint();
        ck.bound("block_reassembly", (recon - h.matrix()).max_abs(), 1e-10 * (1.0 + hnorm));
        ck.bound("block_coupling_adjoint", (b.coupling_qp.adjoint() - b.coupling_pq).max_abs(),
                 1e-12 * (1.0 + hnorm));
    }

    ck.bound("derivative_defect", derivative_check(path, times[2]), 1e-5 * (1.0 + hnorm));

    // --- metric axioms on subspaces drawn from the path ---------------------
    {
        const OrthogonalProjector& q = pts[0];
        const OrthogonalProjector& r = pts[3];
        const OrthogonalProjector& s = pts[2];

        ck.require("metric_symmetry",
                   maximal_angle(q, r) == maximal_angle(r, q) &&
                       maximal_angle(q, s) == maximal_angle(s, q),
                   "maximal_angle(q,r) != maximal_angle(r,q) bitwise");
        ck.require("metric_identity", maximal_angle(q, q) == 0.0 && maximal_angle(r, r) == 0.0,
                   "maximal_angle(p,p) != 0");

        double tri = 0.0;
        const OrthogonalProjector* triple[3] = {&q, &s, &r};
        for (int i = 0; i < 3; ++i) {
            const auto& a = *triple[i % 3];
            const auto& bb = *triple[(i + 1) % 3];
            const auto& cc = *triple[(i + 2) % 3];
            tri = std::max(tri, maximal_angle(a, bb) - maximal_angle(a, cc) -
                                    maximal_angle(cc, bb));
        }
        ck.bound("metric_triangle", tri, 1e-10);

        double worst_gap = 0.0;
        double eq_defect = 0.0;
        double strict_defect = 0.0;
        bool strict_ok = true;
        for (const OrthogonalProjector* a : {&q, &s}) {
            for (const OrthogonalProjector* bb : {&s, &r}) {
                const double gap = gap_distance(*a, *bb);
                const double angle = maximal_angle(*a, *bb);
                worst_gap = std::max(worst_gap, gap);
                if (!trivial) {
                    const double rel = std::max(relative_angle(*a, *bb), relative_angle(*bb, *a));
                    eq_defect = std::max(eq_defect, std::abs(angle - rel));
                }
                if (gap > 1e-12 && angle <= gap) {
                    strict_ok = false;
                    strict_defect = gap - angle;
                }
            }
        }
        ck.bound("gap_bounded_by_one", worst_gap, 1.0);
        if (!trivial)
            ck.bound("angle_equals_max_relative", eq_defect, 1e-10);
        ck.require("gap_strictly_below_angle", strict_ok,
                   "found gap >= angle by " + fmt(strict_defect));

        if (p0.rank() >= 1) {
            double overlap_defect = 0.0;
            const double cos2 = std::cos(maximal_angle(q, r)) * std::cos(maximal_angle(q, r));
            for (int k = 0; k < 4; ++k) {
                CVector x = project_and_normalize(q, random_unit(rng, dim));
                if (x.empty())
                    continue;
                const CVector rx = r.matrix() * x;
                const double kept = vec_norm(rx) * vec_norm(rx);
                overlap_defect = std::max(overlap_defect, cos2 - kept);
            }
            ck.bound("subspace_overlap_floor", overlap_defect, 1e-10);
        }
    }

    // --- speed bounds along the path -----------------------------------------
    const double v = commutator_speed(h, p0);
    DispersionResult disp;
    if (p0.rank() >= 1)
        disp = subspace_dispersion(h, p0, config.bounds.dispersion);
    const SpectralWidth sw = spectral_width(h);

    {
        double gap_excess = 0.0;
        double angle_excess = 0.0;
        double disp_excess = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            for (std::size_t j = i + 1; j < times.size(); ++j) {
                const double dt = times[j] - times[i];
                const double gap = gap_distance(pts[i], pts[j]);
                const double angle = maximal_angle(pts[i], pts[j]);
                gap_excess = std::max(gap_excess, gap - v * dt);
                angle_excess = std::max(angle_excess, angle - v * dt);
                if (p0.rank() >= 1)
                    disp_excess = std::max(disp_excess, angle - disp.value * dt);
            }
        }
        ck.bound("gap_within_speed_times_dt", gap_excess, 1e-9);
        ck.bound("angle_within_speed_times_dt", angle_excess, 1e-9);
        if (p0.rank() >= 1)
            ck.bound("angle_within_dispersion_times_dt", disp_excess, 1e-6);
    }

    if (p0.rank() >= 1) {
        ck.bound("speed_below_dispersion", v - disp.value, config.bounds.chain_tol);
        ck.bound("dispersion_below_half_width", disp.value - sw.width() / 2.0,
                 config.bounds.chain_tol);
    }
    {
        double var_excess = 0.0;
        double shift_defect = 0.0;
        for (int k = 0; k < 4; ++k) {
            const CVector x = random_unit(rng, dim);
            var_excess = std::max(
                var_excess, energy_variance(h, x) - sw.width() * sw.width() / 4.0);
            const double angle = 2.0 * std::numbers::pi * rng.uniform01();
            const double mag = hnorm * rng.uniform01();
            const Complex c = mag * Complex(std::cos(angle), std::sin(angle));
            shift_defect = std::max(shift_defect,
                                    std::abs(shifted_variance(h.matrix(), c, x) -
                                             shifted_variance(h.matrix(), Complex(0.0), x)));
        }
        ck.bound("variance_below_quarter_width_sq", var_excess, 1e-10);
        ck.bound("variance_shift_invariance", shift_defect, 1e-9 * (1.0 + hnorm * hnorm));
    }

    if (p0.rank() == 1) {
        ck.bound("rank1_speed_equals_dispersion", std::abs(v - disp.value),
                 1e-10 * (1.0 + hnorm));
    }

    // --- crossing times against the three bounds -----------------------------
    const bool reducing = v <= config.bounds.crossing.reducing_threshold;
    const double time_tol = config.bounds.crossing.time_tol_scale * (1.0 + config.t_max);
    CVector psi0;
    if (p0.rank() == 1)
        psi0 = p0.range_basis().vectors().column(0);

    for (double theta : config.theta_list) {
        const std::string suffix = "@theta=" + fmt(theta);
        try {
            BoundReport rep = bound_report(h, p0, theta, config.t_max, config.bounds);
            ck.require("bound_report_consistent" + suffix, true, "");
            if (reducing) {
                ck.require("reducing_unbounded" + suffix,
                           rep.measured.status == CrossingStatus::reducing,
                           std::string("expected status 'reducing', got ") +
                               to_string(rep.measured.status));
            }
            if (p0.rank() == 1 && rep.measured.finite()) {
                // The crossing predicate certifies the slightly smaller angle
                // asin(sin theta - sine_tol), further reduced by one rounding
                // step of the gap evaluation; the dispersion floor holds at
                // every angle, so test it at the certified one.
                const double theta_eff = std::asin(std::clamp(
                    std::sin(theta) - config.bounds.crossing.sine_tol - 1e-12, 0.0, 1.0));
                const double sigma = std::sqrt(energy_variance(h, psi0));
                if (sigma > 0.0)
                    ck.bound("fleming_floor" + suffix,
                             theta_eff / sigma - rep.measured.value, 1e-8 + time_tol);
                if (theta >= std::numbers::pi / 2.0 - 1e-12) {
                    // The mean-energy floor constrains exact orthogonalization
                    // only.  Certify one from the survival amplitude: a real
                    // zero of |<psi0, psi_t>| near the measured time.  A mere
                    // near-touch of angle pi/2 leaves the floor vacuous.
                    const auto amp = [&](double t) {
                        return std::abs(dot(psi0, evolve_state(h, psi0, t)));
                    };
                    const double span =
                        4.0 * (std::numbers::pi / 2.0 - theta_eff) / v + 1e3 * time_tol;
                    double a = std::max(0.0, rep.measured.value - 10.0 * time_tol);
                    double b = std::min(config.t_max, rep.measured.value + span);
                    double best_t = a, best_a = amp(a);
                    for (int i = 1; i <= 32; ++i) {
                        const double t = a + (b - a) * i / 32.0;
                        if (const double val = amp(t); val < best_a) {
                            best_a = val;
                            best_t = t;
                        }
                    }
                    double lo = std::max(a, best_t - (b - a) / 32.0);
                    double hi = std::min(b, best_t + (b - a) / 32.0);
                    while (hi - lo > time_tol) {
                        const double m1 = lo + (hi - lo) / 3.0;
                        const double m2 = hi - (hi - lo) / 3.0;
                        if (amp(m1) < amp(m2))
                            hi = m2;
                        else
                            lo = m1;
                    }
                    best_t = 0.5 * (lo + hi);
                    if (amp(best_t) <= 1e-10) {
                        const double delta = margolus_levitin_delta(h, psi0);
                        if (delta > 0.0)
                            ck.bound("ml_floor" + suffix,
                                     std::numbers::pi / (2.0 * delta) - best_t,
                                     1e-8 + 10.0 * time_tol);
                    }
                }
            }
        } catch (const BoundViolation& e) {
            ck.require("bound_report_consistent" + suffix, false, e.what());
        }
    }

    if (reducing) {
        AngleTrace tr = angle_trace(h, p0, tchk > 0 ? tchk : 1.0, config.resolution,
                                    config.bounds.crossing);
        const double peak =
            tr.angles.empty() ? 0.0 : *std::max_element(tr.angles.begin(), tr.angles.end());
        ck.bound("reducing_trace_flat", peak, 1e-7);
    }

    // --- closed-form two-level comparisons -----------------------------------
    if (config.scenario.type == ScenarioConfig::Type::two_level) {
        TwoLevelScenario sc = two_level(config.scenario.e1, config.scenario.e2);
        double entry_defect = 0.0;
        double lam_defect = 0.0;
        double angle_defect = 0.0;
        for (double t : times) {
            entry_defect =
                std::max(entry_defect, (path.at(t).matrix() - sc.analytic_projection(t)).max_abs());
        }
        for (std::size_t i = 0; i + 1 < times.size(); ++i) {
            const double s = times[i], t = times[i + 1];
            ComplexMatrix diff = path.at(t).matrix() - path.at(s).matrix();
            EigenDecomposition de = hermitian_eigen(diff);
            const double lam = sc.analytic_gap(s, t);
            lam_defect = std::max(lam_defect, std::abs(de.eigenvalues.front() + lam));
            lam_defect = std::max(lam_defect, std::abs(de.eigenvalues.back() - lam));
            if (sc.exact_speed() * (t - s) <= std::numbers::pi / 2.0)
                angle_defect = std::max(angle_defect, std::abs(maximal_angle(path.at(s), path.at(t)) -
                                                               sc.analytic_angle(s, t)));
        }
        ck.bound("two_level_projection_entries", entry_defect, 1e-10);
        ck.bound("two_level_difference_spectrum", lam_defect, 1e-10);
        ck.bound("two_level_linear_angle", angle_defect, 1e-9);
    }
}

}  // namespace

std::size_t VerifyReport::total() const {
    std::size_t n = 0;
    for (const auto& inst : instances)
        n += inst.checks.size();
    return n;
}

std::size_t VerifyReport::failed() const {
    std::size_t n = 0;
    for (const auto& inst : instances)
        for (const CheckResult& c : inst.checks)
            if (!c.pass)
                ++n;
    return n;
}

VerifyReport verify_instances(const RunConfig& config) {
    VerifyReport report;
    const std::vector<Instance> instances = load_instances(config);
    report.instances.reserve(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
        VerifyReport::InstanceChecks ic;
        ic.instance_id = instances[i].id;
        try {
            verify_one(instances[i], config, i, ic.checks);
        } catch (const Error& e) {
            ic.checks.push_back({"no_exception", false, e.what()});
        }
        report.instances.push_back(std::move(ic));
    }
    return report;
}

std::string to_table(const VerifyReport& report) {
    std::size_t name_w = 4;
    std::size_t id_w = 8;
    for (const auto& inst : report.instances) {
        id_w = std::max(id_w, inst.instance_id.size());
        for (const CheckResult& c : inst.checks)
            name_w = std::max(name_w, c.name.size());
    }
    std::ostringstream os;
    const auto pad = [&os](const std::string& s, std::size_t w) {
        os << s;
        for (std::size_t i = s.size(); i < w + 2; ++i)
            os << ' ';
    };
    pad("instance", id_w);
    pad("check", name_w);
    os << "result\n";
    for (const auto& inst : report.instances) {
        for (const CheckResult& c : inst.checks) {
            pad(inst.instance_id, id_w);
            pad(c.name, name_w);
            os << (c.pass ? "pass" : "FAIL");
            if (!c.detail.empty())
                os << "  (" << c.detail << ')';
            os << '\n';
        }
    }
    os << report.total() << " checks, " << (report.total() - report.failed()) << " passed, "
       << report.failed() << " failed\n";
    return os.str();
}

}
