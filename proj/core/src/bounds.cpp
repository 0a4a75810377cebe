#include "qsl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qsl/rng.hpp"

namespace qsl {

namespace {

constexpr double kVarianceFloor = -1e-12;
constexpr double kMlFloor = -1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double x) {
    return std::min(1.0, std::max(0.0, x));
}

// Fast ||P_t - P_0|| along an evolution path.
//
// For equal-rank projectors the nonzero eigenvalues of Q - R are +-sin of
// the principal angles between the ranges, so
//   ||P_t - P_0|| = sqrt(|| I - M(t)* M(t) ||),
// where M(t) = W* U(t) W is the r x r overlap matrix of an orthonormal range
// basis W with its own evolute.  In the eigenbasis U(t) is diagonal phases,
// so one evaluation costs O(n r^2) plus an r x r eigenvalue problem.  The
// complement pair has the same gap, so r can always be min(rank, corank);
// rank 1 reduces to the survival amplitude sqrt(1 - |<psi_0, psi_t>|^2).
class GapEvaluator {
public:
    GapEvaluator(const HermitianOperator& h, const OrthogonalProjector& p) : h_(h) {
        const std::size_t n = p.dim();
        if (p.rank() == 0 || p.rank() == n) {
            frozen_ = true;
            return;
        }
        const SubspaceBasis basis =
            2 * p.rank() <= n ? p.range_basis() : complement(p).range_basis();
        wt_ = h.eigen().eigenvectors.adjoint() * basis.vectors();
        const std::size_t r = wt_.cols();
        if (r == 1) {
            weights_.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                weights_[i] = std::norm(wt_(i, 0));
        }
        overlap_ = ComplexMatrix(r, r);
        gram_ = ComplexMatrix(r, r);
        defect_ = ComplexMatrix(n, r);
        phases_.resize(n);
    }

    double gap(double t) const {
        if (frozen_)
            return 0.0;
        const std::vector<double>& lam = h_.eigen().eigenvalues;
        const std::size_t n = wt_.rows();
        const std::size_t r = wt_.cols();
        if (r == 1)
            return gap_rank1(lam, n, t);
        for (std::size_t i = 0; i < n; ++i)
            phases_[i] = std::exp(Complex(0.0, -lam[i] * t));
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = 0; b < r; ++b) {
                Complex acc(0.0, 0.0);
                for (std::size_t i = 0; i < n; ++i)
                    acc += std::conj(wt_(i, a)) * phases_[i] * wt_(i, b);
                overlap_(a, b) = acc;
            }
        }
        // gram = I - M* M, Hermitian PSD with spectrum sin^2(principal angles)
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = a; b < r; ++b) {
                Complex acc = a == b ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
                for (std::size_t i = 0; i < r; ++i)
                    acc -= std::conj(overlap_(i, a)) * overlap_(i, b);
                if (a == b)
                    acc = Complex(acc.real(), 0.0);
                gram_(a, b) = acc;
                gram_(b, a) = std::conj(acc);
            }
        }
        const double top = hermitian_abs_max_eigenvalue(gram_);  // destroys gram_
        if (top >= 0.25)
            return std::sqrt(clamp01(top));
        // Small angles: forming I - M*M subtracts nearly equal quantities and
        // caps the absolute accuracy of sin^2 at roundoff, which the square
        // root blows up to ~1e-8.  The defect columns B = U(t)W - W M carry
        // the same spectrum through B*B, but their entries are small numbers
        // computed directly, so tiny gaps come out with full precision.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t a = 0; a < r; ++a) {
                Complex acc = phases_[i] * wt_(i, a);
                for (std::size_t b = 0; b < r; ++b)
                    acc -= wt_(i, b) * overlap_(b, a);
                defect_(i, a) = acc;
            }
        }
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = a; b < r; ++b) {
                Complex acc(0.0, 0.0);
                for (std::size_t i = 0; i < n; ++i)
                    acc += std::conj(defect_(i, a)) * defect_(i, b);
                if (a == b)
                    acc = Complex(acc.real(), 0.0);
                gram_(a, b) = acc;
                gram_(b, a) = std::conj(acc);
            }
        }
        return std::sqrt(clamp01(hermitian_abs_max_eigenvalue(gram_)));
    }

private:
    // 1 - |<psi, U(t) psi>|^2 in the cancellation-free pairwise form
    // sum_{j<k} 4 w_j w_k sin^2((lam_j - lam_k) t / 2): every term is
    // nonnegative, so small gaps keep full relative precision.
    double gap_rank1(const std::vector<double>& lam, std::size_t n, double t) const {
        double c = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            if (weights_[j] == 0.0)
                continue;
            for (std::size_t k = j + 1; k < n; ++k) {
                const double s = std::sin(0.5 * (lam[j] - lam[k]) * t);
                c += 4.0 * weights_[j] * weights_[k] * s * s;
            }
        }
        if (c <= 0.5)
            return std::sqrt(clamp01(c));
        // Near a full flip, compute through the survival amplitude instead:
        // the residual |M| enters squared, so 1 - |M|^2 rounds up to exactly
        // 1.0 on the whole window where |M| < 2^-27.  That plateau is what
        // lets a tangential pi/2 crossing be detected at all.
        Complex m(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            m += weights_[i] * std::exp(Complex(0.0, -lam[i] * t));
        return std::sqrt(clamp01(std::max(c, 1.0 - std::norm(m))));
    }

    const HermitianOperator& h_;
    bool frozen_ = false;
    ComplexMatrix wt_;
    std::vector<double> weights_;
    mutable ComplexMatrix overlap_;
    mutable ComplexMatrix gram_;
    mutable ComplexMatrix defect_;
    mutable std::vector<Complex> phases_;
};

std::string format_violation(const char* what, double lhs, double rhs) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": " << lhs << " vs " << rhs;
    return os.str();
}

}  // namespace

const char* to_string(CrossingStatus s) {
    switch (s) {
        case CrossingStatus::reached:
            return "reached";
        case CrossingStatus::reducing:
            return "reducing";
        case CrossingStatus::no_crossing:
            return "no_crossing";
    }
    return "unknown";
}

double commutator_speed(const HermitianOperator& h, const OrthogonalProjector& p) {
    return operator_norm(commutator(h, p));
}

double energy_variance(const HermitianOperator& h, const CVector& psi) {
    if (psi.size() != h.dim())
        throw DimensionMismatch("energy_variance: state length does not match operator");
    if (std::abs(vec_norm(psi) - 1.0) > 1e-10)
        throw NonUnitInput("energy_variance: state is not normalized");
    const CVector hpsi = h.matrix() * psi;
    const double mean = std::real(dot(psi, hpsi));
    double var = 0.0;
    for (const Complex& x : hpsi)
        var += std::norm(x);
    var -= mean * mean;
    if (var < kVarianceFloor)
        throw Error("energy_variance: negative variance beyond roundoff");
    return std::max(0.0, var);
}

SpectralWidth spectral_width(const HermitianOperator& h) {
    return SpectralWidth{h.min_eigenvalue(), h.max_eigenvalue()};
}

double margolus_levitin_delta(const HermitianOperator& h, const CVector& psi) {
    if (psi.size() != h.dim())
        throw DimensionMismatch("margolus_levitin_delta: state length does not match operator");
    if (std::abs(vec_norm(psi) - 1.0) > 1e-10)
        throw NonUnitInput("margolus_levitin_delta: state is not normalized");
    const double mean = std::real(dot(psi, h.matrix() * psi));
    const double delta = mean - h.min_eigenvalue();
    if (delta < kMlFloor)
        throw Error("margolus_levitin_delta: mean energy below the ground level beyond roundoff");
    return std::max(0.0, delta);
}

AngleTrace angle_trace(const HermitianOperator& h, const OrthogonalProjector& p, double t_max,
                       double resolution, const CrossingOptions& opts) {
    if (h.dim() != p.dim())
        throw DimensionMismatch("angle_trace: dimensions differ");
    if (!(t_max > 0.0))
        throw Error("angle_trace: t_max must be positive");
    if (!(resolution > 1e-9) || !(resolution < 0.1))
        throw Error("angle_trace: resolution must lie in (1e-9, 0.1)");

    const double v = commutator_speed(h, p);
    const double dt = std::min(resolution / std::max(v, 1e-30), t_max / 10.0);
    GapEvaluator eval(h, p);

    AngleTrace trace;
    trace.lipschitz = v;
    trace.step = dt;
    const auto n_steps = static_cast<std::size_t>(std::floor(t_max / dt));
    trace.times.reserve(n_steps + 2);
    trace.angles.reserve(n_steps + 2);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        trace.times.push_back(t);
        trace.angles.push_back(std::asin(clamp01(eval.gap(t))));
    }
    if (trace.times.back() < t_max * (1.0 - 1e-12)) {
        trace.times.push_back(t_max);
        trace.angles.push_back(std::asin(clamp01(eval.gap(t_max))));
    }
    return trace;
}

ThetaTime first_crossing_time(const HermitianOperator& h, const OrthogonalProjector& p,
                              double theta, double t_max, const CrossingOptions& opts) {
    if (h.dim() != p.dim())
        throw DimensionMismatch("first_crossing_time: dimensions differ");
    if (!(theta > 0.0) || theta > std::numbers::pi / 2.0 + 1e-15)
        throw InvalidTheta("first_crossing_time: theta must lie in (0, pi/2]");
    if (!(t_max > 0.0))
        throw Error("first_crossing_time: t_max must be positive");

    ThetaTime out;
    out.theta = theta;

    const double v = commutator_speed(h, p);
    if (v <= opts.reducing_threshold) {
        out.status = CrossingStatus::reducing;
        out.value = kInf;
        return out;
    }

    GapEvaluator eval(h, p);
    const double sin_target = std::sin(theta) - opts.sine_tol;
    if (eval.gap(0.0) >= sin_target) {
        out.status = CrossingStatus::reached;
        out.value = out.bracket_lo = out.bracket_hi = 0.0;
        return out;
    }

    // The angle moves at most v per unit time, so a scan at angular
    // resolution res cannot step over a crossing by more than res.  A
    // tangential crossing (the curve touching the target level, as at
    // theta = pi/2) can still slip between samples: both neighbours then sit
    // within v*dt of the target, which is the near-miss cue to search the
    // straddling window for a local maximum before moving on.
    const double res = std::min(opts.resolution, theta / 100.0);
    const double dt = res / v;
    const double time_tol = opts.time_tol_scale * (1.0 + t_max);

    const auto window_peak = [&](double wlo, double whi) {
        // Coarse subsample, then golden-section around the best point; the
        // window spans two scan steps, so the peak is locally smooth.
        constexpr int kProbes = 32;
        double best_t = wlo;
        double best_g = eval.gap(wlo);
        for (int i = 1; i <= kProbes; ++i) {
            const double t = wlo + (whi - wlo) * i / kProbes;
            const double g = eval.gap(t);
            if (g > best_g) {
                best_g = g;
                best_t = t;
            }
        }
        const double cell = (whi - wlo) / kProbes;
        double a = std::max(wlo, best_t - cell);
        double b = std::min(whi, best_t + cell);
        constexpr double kInvPhi = 0.6180339887498949;
        double x1 = b - kInvPhi * (b - a);
        double x2 = a + kInvPhi * (b - a);
        double g1 = eval.gap(x1);
        double g2 = eval.gap(x2);
        while (b - a > time_tol) {
            if (g1 < g2) {
                a = x1;
                x1 = x2;
                g1 = g2;
                x2 = a + kInvPhi * (b - a);
                g2 = eval.gap(x2);
            } else {
                b = x2;
                x2 = x1;
                g2 = g1;
                x1 = b - kInvPhi * (b - a);
                g1 = eval.gap(x1);
            }
            if (g1 > best_g) {
                best_g = g1;
                best_t = x1;
            }
            if (g2 > best_g) {
                best_g = g2;
                best_t = x2;
            }
        }
        return std::pair<double, double>(best_t, best_g);
    };

    double lo = 0.0;
    double hi = -1.0;
    for (double t = dt;; t += dt) {
        if (t > t_max)
            t = t_max;
        const double g = eval.gap(t);
        if (g >= sin_target) {
            hi = t;
            break;
        }
        if (g >= sin_target - v * dt) {
            const auto [peak_t, peak_g] = window_peak(lo, std::min(t + dt, t_max));
            if (peak_g >= sin_target) {
                hi = peak_t;
                break;
            }
        }
        lo = t;
        if (t >= t_max)
            break;
    }
    if (hi < 0.0) {
        out.status = CrossingStatus::no_crossing;
        out.value = kInf;
        return out;
    }

    while (hi - lo > time_tol) {
        const double mid = 0.5 * (lo + hi);
        if (eval.gap(mid) >= sin_target)
            hi = mid;
        else
            lo = mid;
    }
    out.status = CrossingStatus::reached;
    out.value = hi;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    return out;
}

DispersionResult subspace_dispersion(const HermitianOperator& h, const OrthogonalProjector& p,
                                     const DispersionOptions& opts) {
    if (h.dim() != p.dim())
        throw DimensionMismatch("subspace_dispersion: dimensions differ");
    if (p.rank() == 0)
        throw EmptySubspace("subspace_dispersion: subspace is {0}");

    const SubspaceBasis basis = p.range_basis();
    const ComplexMatrix& w = basis.vectors();
    const std::size_t k = basis.rank();

    // Centering the spectrum leaves every dispersion unchanged and keeps the
    // compressed quadratic forms well scaled.
    const double center = 0.5 * (h.min_eigenvalue() + h.max_eigenvalue());
    ComplexMatrix hc = h.matrix();
    for (std::size_t i = 0; i < h.dim(); ++i)
        hc(i, i) -= center;

    const ComplexMatrix hw = hc * w;
    ComplexMatrix g = w.adjoint() * hw;
    ComplexMatrix a = hw.adjoint() * hw;
    // Hermitize to absorb roundoff before the quadratic forms are used.
    g = Complex(0.5, 0.0) * (g + g.adjoint());
    a = Complex(0.5, 0.0) * (a + a.adjoint());

    const auto q_of = [&](const CVector& x) {
        const double quad = std::real(dot(x, a * x));
        const double mean = std::real(dot(x, g * x));
        return quad - mean * mean;
    };

    const auto finish = [&](double q_best, const CVector& x_best) {
        CVector psi = w * x_best;
        const double nrm = vec_norm(psi);
        for (Complex& c : psi)
            c /= nrm;
        const double value = std::sqrt(std::max(0.0, q_best));

        // Internal consistency: the returned state must live in the subspace
        // and reproduce the reported dispersion.
        CVector proj = p.matrix() * psi;
        double resid = 0.0;
        for (std::size_t i = 0; i < proj.size(); ++i)
            resid = std::max(resid, std::abs(proj[i] - psi[i]));
        if (resid > 1e-10)
            throw Error("subspace_dispersion: maximizer left the subspace");
        const double var = energy_variance(h, psi);
        if (std::abs(var - value * value) > 1e-8)
            throw Error("subspace_dispersion: maximizer variance mismatch");

        return DispersionResult{value, std::move(psi), DispersionMethod::gradient_ascent};
    };

    if (k == 1) {
        CVector x{Complex(1.0, 0.0)};
        return finish(q_of(x), x);
    }

    EigenDecomposition a_eig = hermitian_eigen(a);
    const double a_norm =
        std::max(std::abs(a_eig.eigenvalues.front()), std::abs(a_eig.eigenvalues.back()));
    const double tol = opts.grad_tol * (1.0 + a_norm);
    const double alpha0 = 1.0 / (1.0 + a_norm);

    const auto normalize = [](CVector x) {
        const double nrm = vec_norm(x);
        for (Complex& c : x)
            c /= nrm;
        return x;
    };

    const auto ascend = [&](CVector x) {
        double q = q_of(x);
        CVector gx(k), ax(k), tangent(k), y(k);
        const auto matvec = [k](const ComplexMatrix& m, const CVector& v, CVector& out) {
            for (std::size_t i = 0; i < k; ++i) {
                Complex acc(0.0, 0.0);
                for (std::size_t j = 0; j < k; ++j)
                    acc += m(i, j) * v[j];
                out[i] = acc;
            }
        };
        int stalled = 0;
        for (int it = 0; it < opts.iteration_cap; ++it) {
            matvec(g, x, gx);
            const double mean = std::real(dot(x, gx));
            matvec(a, x, ax);
            for (std::size_t i = 0; i < k; ++i)
                tangent[i] = 2.0 * ax[i] - 4.0 * mean * gx[i];
            const double radial = std::real(dot(x, tangent));
            for (std::size_t i = 0; i < k; ++i)
                tangent[i] -= radial * x[i];
            const double tnorm = vec_norm(tangent);
            if (tnorm <= tol)
                break;

            double alpha = alpha0;
            bool stepped = false;
            double qy = q;
            while (alpha > 1e-18) {
                for (std::size_t i = 0; i < k; ++i)
                    y[i] = x[i] + alpha * tangent[i];
                const double nrm = vec_norm(y);
                for (Complex& c : y)
                    c /= nrm;
                matvec(g, y, gx);
                matvec(a, y, ax);
                const double mean_y = std::real(dot(y, gx));
                qy = std::real(dot(y, ax)) - mean_y * mean_y;
                if (qy >= q + opts.armijo * alpha * tnorm * tnorm) {
                    std::swap(x, y);
                    stepped = true;
                    break;
                }
                alpha *= opts.shrink;
            }
            if (!stepped)
                break;
            // In nearly flat directions the gradient tolerance can stay out
            // of reach while accepted gains sink to roundoff level; a run of
            // such no-op steps means the value has converged.
            if (qy - q <= 1e-15 * (1.0 + std::abs(q))) {
                if (++stalled >= 50)
                    { q = qy; break; }
            } else {
                stalled = 0;
            }
            q = qy;
        }
        return std::pair<double, CVector>(q, std::move(x));
    };

    // Start 0 aligns with the strongest coupling direction: the top
    // eigenvector x of (H W)* (I-P) (H W) satisfies
    // dispersion(W x) >= ||(I-P) H W x|| = ||[H, P]||, which pins the
    // commutator-speed comparison independent of optimizer luck.
    ComplexMatrix perp_hw = hw;
    perp_hw -= p.matrix() * hw;
    ComplexMatrix m = hw.adjoint() * perp_hw;
    m = Complex(0.5, 0.0) * (m + m.adjoint());
    EigenDecomposition m_eig = hermitian_eigen(m);

    double best_q = -kInf;
    CVector best_x;
    for (int r = 0; r <= opts.restarts; ++r) {
        CVector x0(k);
        if (r == 0) {
            x0 = m_eig.eigenvectors.column(k - 1);
        } else {
            Rng rng = Rng::stream(opts.seed, static_cast<std::uint64_t>(r - 1));
            for (Complex& c : x0)
                c = rng.standard_complex_gaussian();
            x0 = normalize(std::move(x0));
        }
        auto [q, x] = ascend(std::move(x0));
        if (q > best_q) {
            best_q = q;
            best_x = std::move(x);
        }
    }
    return finish(best_q, best_x);
}

BoundReport bound_report(const HermitianOperator& h, const OrthogonalProjector& p, double theta,
                         double t_max, const BoundOptions& opts) {
    if (h.dim() != p.dim())
        throw DimensionMismatch("bound_report: dimensions differ");
    if (p.rank() == 0)
        throw EmptySubspace("bound_report: subspace is {0}");
    if (!(theta > 0.0) || theta > std::numbers::pi / 2.0 + 1e-15)
        throw InvalidTheta("bound_report: theta must lie in (0, pi/2]");
    if (!(t_max > 0.0))
        throw Error("bound_report: t_max must be positive");

    BoundReport rep;
    rep.theta = theta;

    const SpectralWidth width = spectral_width(h);
    rep.e_min = width.e_min;
    rep.e_max = width.e_max;
    rep.v_hp0 = commutator_speed(h, p);
    rep.delta_e = subspace_dispersion(h, p, opts.dispersion).value;
    if (p.rank() == 1)
        rep.ml_delta = margolus_levitin_delta(h, p.range_basis().vectors().column(0));

    // Proven orderings among the three speeds; a failure here is a defect.
    if (rep.v_hp0 > rep.delta_e + opts.chain_tol)
        throw BoundViolation(
            format_violation("commutator speed exceeds subspace dispersion", rep.v_hp0,
                             rep.delta_e));
    if (rep.delta_e > 0.5 * width.width() + opts.chain_tol)
        throw BoundViolation(format_violation("subspace dispersion exceeds half spectral width",
                                              rep.delta_e, 0.5 * width.width()));

    const double zero = opts.crossing.reducing_threshold;
    rep.bound_commutator = rep.v_hp0 > zero ? theta / rep.v_hp0 : kInf;
    rep.bound_dispersion = rep.delta_e > zero ? theta / rep.delta_e : kInf;
    rep.bound_spectral = width.width() > zero ? 2.0 * theta / width.width() : kInf;

    rep.measured = first_crossing_time(h, p, theta, t_max, opts.crossing);

    rep.saturation_commutator = rep.measured.value / rep.bound_commutator;
    rep.saturation_dispersion = rep.measured.value / rep.bound_dispersion;
    rep.saturation_spectral = rep.measured.value / rep.bound_spectral;

    if (rep.measured.finite()) {
        // The crossing predicate allows sine slack, so the measured time can
        // sit slightly before the crossing of theta itself; compare against
        // the angle the predicate actually certifies.
        const double theta_eff =
            std::asin(clamp01(std::sin(theta) - opts.crossing.sine_tol - 1e-12));
        const double time_tol = opts.crossing.time_tol_scale * (1.0 + t_max);
        const double speeds[3] = {rep.v_hp0, rep.delta_e, 0.5 * width.width()};
        const char* names[3] = {"commutator bound", "dispersion bound", "spectral width bound"};
        for (int i = 0; i < 3; ++i) {
            if (speeds[i] <= zero)
                continue;
            const double lower = theta_eff / speeds[i] - time_tol;
            if (rep.measured.value < lower)
                throw BoundViolation(
                    format_violation(names[i], rep.measured.value, lower));
        }
    }
    return rep;
}

}
