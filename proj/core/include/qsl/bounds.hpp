#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsl/evolution.hpp"
#include "qsl/linalg.hpp"
#include "qsl/subspace.hpp"

namespace qsl {

/// Spectral extent of a Hamiltonian.
struct SpectralWidth {
    double e_min = 0.0;
    double e_max = 0.0;
    double width() const { return e_max - e_min; }
};

enum class DispersionMethod { gradient_ascent, grid_oracle };

/// Largest energy dispersion over unit vectors of a subspace, together with
/// the best state found.
struct DispersionResult {
    double value = 0.0;
    CVector maximizer;
    DispersionMethod method = DispersionMethod::gradient_ascent;
};

enum class CrossingStatus {
    reached,     // the angle met the target before t_max
    reducing,    // the subspace commutes with H; the angle never moves
    no_crossing  // the angle stayed below the target up to t_max
};

const char* to_string(CrossingStatus s);

/// First time the maximal angle from the initial subspace reaches theta.
struct ThetaTime {
    double theta = 0.0;
    CrossingStatus status = CrossingStatus::no_crossing;
    double value = 0.0;       // +infinity unless status == reached
    double bracket_lo = 0.0;  // final bisection bracket when reached
    double bracket_hi = 0.0;
    bool finite() const { return status == CrossingStatus::reached; }
};

/// Sampled curve t -> maximal angle(P_0, P_t).  `lipschitz` is the speed
/// bound used to pick the step, so consecutive samples differ by at most
/// the requested resolution.
struct AngleTrace {
    std::vector<double> times;
    std::vector<double> angles;
    double lipschitz = 0.0;
    double step = 0.0;
};

struct DispersionOptions {
    int restarts = 32;           // random starts, plus one coupling-aligned start
    int iteration_cap = 10000;
    double grad_tol = 1e-10;     // scaled by (1 + norm of the compressed operator)
    double armijo = 1e-4;
    double shrink = 0.5;
    std::uint64_t seed = 0x51A7E0F2D3C4B596ULL;
};

struct CrossingOptions {
    double reducing_threshold = 1e-12;  // commutator speed below this counts as zero
    double sine_tol = 0.0;              // optional slack on sin(theta) in the crossing predicate
    double time_tol_scale = 1e-10;      // bracket width target: scale * (1 + t_max)
    double resolution = 1e-3;           // scan resolution in radians (capped by theta/100)
};

struct BoundOptions {
    DispersionOptions dispersion;
    CrossingOptions crossing;
    double chain_tol = 1e-8;  // tolerance for the speed <= dispersion <= width/2 chain
};

/// Everything the three lower bounds say about one (instance, theta) pair.
/// bound_* entries are infinite when the corresponding speed vanishes.
/// Saturation ratios are measured / bound (NaN when both are infinite).
struct BoundReport {
    double theta = 0.0;
    double v_hp0 = 0.0;    // commutator speed ||[H, P_0]||
    double delta_e = 0.0;  // subspace energy dispersion
    double e_min = 0.0;
    double e_max = 0.0;
    double bound_commutator = 0.0;
    double bound_dispersion = 0.0;
    double bound_spectral = 0.0;
    ThetaTime measured;
    double saturation_commutator = 0.0;
    double saturation_dispersion = 0.0;
    double saturation_spectral = 0.0;
    std::optional<double> ml_delta;  // mean energy above the ground state, rank-1 only
};

/// ||[H, P]||: the speed limit set by the coupling of range(P) to its
/// complement.  Constant along the evolution path.
double commutator_speed(const HermitianOperator& h, const OrthogonalProjector& p);

/// ||H psi||^2 - <psi, H psi>^2 for a unit vector, clamped to >= 0.
double energy_variance(const HermitianOperator& h, const CVector& psi);

/// Maximal energy dispersion over unit vectors of range(P), computed by
/// projected gradient ascent on the unit sphere of the compressed problem
/// (closed form when rank(P) == 1).
DispersionResult subspace_dispersion(const HermitianOperator& h, const OrthogonalProjector& p,
                                     const DispersionOptions& opts = {});

SpectralWidth spectral_width(const HermitianOperator& h);

/// <psi, H psi> - min spec(H), the Margolus-Levitin energy scale.
double margolus_levitin_delta(const HermitianOperator& h, const CVector& psi);

/// Sample the angle curve on [0, t_max] with the given angular resolution
/// (valid range (1e-9, 0.1) radians).
AngleTrace angle_trace(const HermitianOperator& h, const OrthogonalProjector& p, double t_max,
                       double resolution, const CrossingOptions& opts = {});

/// Scan with a Lipschitz-safe step, then bisect.  theta must lie in
/// (0, pi/2].  Returns status `reducing` without scanning when the
/// commutator speed vanishes.
ThetaTime first_crossing_time(const HermitianOperator& h, const OrthogonalProjector& p,
                              double theta, double t_max, const CrossingOptions& opts = {});

/// Assemble all three bounds plus the measured crossing for one instance.
/// Throws BoundViolation if any proven inequality fails beyond tolerance,
/// which would indicate a defect in this library, not a physics discovery.
BoundReport bound_report(const HermitianOperator& h, const OrthogonalProjector& p, double theta,
                         double t_max, const BoundOptions& opts = {});

}
