#ifndef NEUTRAL_CONDUCTIVITY_DISKS_HPP
#define NEUTRAL_CONDUCTIVITY_DISKS_HPP

#include <Eigen/Dense>

#include "neutral/core_model.hpp"

namespace neutral {

struct ConductivityConfig {
    CoatedDisks geometry;
    ConductorPhase core, shell, matrix;
    Vec2 applied_field{1.0, 0.0};
};

/// Mode-1 harmonic solution u = |a| f(r) cos(theta) relative to the applied
/// direction, with f(r) = A r (core), B r + C/r (shell), r + D/r (matrix).
/// D is the exterior dipole coefficient; D = 0 characterizes neutrality.
struct HarmonicSeriesSolution {
    double A, B, C, D;
    ConductivityConfig config;

    double f(double r) const {
        const auto& g = config.geometry;
        if (r <= g.r1) return A * r;
        if (r <= g.r2) return B * r + C / r;
        return r + D / r;
    }
    double df(double r) const {
        const auto& g = config.geometry;
        if (r <= g.r1) return A;
        if (r <= g.r2) return B - C / (r * r);
        return 1.0 - D / (r * r);
    }
    /// Potential at a point (relative to the disk center).
    double u(const Vec2& x) const {
        double r = x.norm();
        Vec2 a = config.applied_field;
        if (r == 0.0) return 0.0;
        return f(r) * a.dot(x) / r;
    }
    double exterior_dipole() const { return D; }
};

/// Left-hand side of the coated-disk neutrality relation
///   r2^2 (s_s + s_c)(s_m - s_s) - r1^2 (s_c - s_s)(s_m + s_s).
/// Zero exactly when the exterior dipole vanishes, equivalently when the
/// two-phase effective conductivity s_s (s_c + s_s + f(s_c - s_s)) /
/// (s_c + s_s - f(s_c - s_s)), f = (r1/r2)^2, equals s_m.  A published form
/// of this relation carries (s_s - s_c) in the r1^2 term; that sign is
/// inconsistent with the exact mode-1 transmission solution (see tests), so
/// the corrected form is used throughout.
inline double neutrality_residual(const ConductivityConfig& cfg) {
    double sc = cfg.core.sigma, ss = cfg.shell.sigma, sm = cfg.matrix.sigma;
    double r1 = cfg.geometry.r1, r2 = cfg.geometry.r2;
    return r2 * r2 * (ss + sc) * (sm - ss) - r1 * r1 * (sc - ss) * (sm + ss);
}

/// Unique sigma_m zeroing the neutrality residual.  Throws if the denominator
/// vanishes or the root is non-positive (no physical neutral matrix).
inline double solve_for_sigma_m(const CoatedDisks& geom, const ConductorPhase& core,
                                const ConductorPhase& shell) {
    double sc = core.sigma, ss = shell.sigma;
    double r1 = geom.r1, r2 = geom.r2;
    double den = r2 * r2 * (ss + sc) - r1 * r1 * (sc - ss);
    if (den == 0.0)
        throw NumericalError("SingularSystem", "neutrality relation degenerate in sigma_m");
    double sm = ss * (r2 * r2 * (ss + sc) + r1 * r1 * (sc - ss)) / den;
    if (!(sm > 0.0))
        throw NumericalError("NonPositiveSolution", "no physical neutral matrix conductivity");
    return sm;
}

/// Direct 4x4 solve of the mode-1 transmission problem (continuity of u and
/// of sigma du/dn at r1 and r2, far field a.x).  Uniform applied fields excite
/// only mode 1 on concentric disks; higher modes are identically zero.
inline HarmonicSeriesSolution solve_disk_conductivity(const ConductivityConfig& cfg) {
    double sc = cfg.core.sigma, ss = cfg.shell.sigma, sm = cfg.matrix.sigma;
    double r1 = cfg.geometry.r1, r2 = cfg.geometry.r2;
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    Eigen::Vector4d rhs = Eigen::Vector4d::Zero();
    // unknowns: A, B, C, D
    M(0, 0) = r1;       M(0, 1) = -r1;      M(0, 2) = -1.0 / r1;                      // u at r1
    M(1, 0) = sc;       M(1, 1) = -ss;      M(1, 2) = ss / (r1 * r1);                 // flux at r1
    M(2, 1) = r2;       M(2, 2) = 1.0 / r2; M(2, 3) = -1.0 / r2;   rhs(2) = r2;      // u at r2
    M(3, 1) = ss;       M(3, 2) = -ss / (r2 * r2);
    M(3, 3) = sm / (r2 * r2);                                      rhs(3) = sm;      // flux at r2
    Eigen::FullPivLU<Eigen::Matrix4d> lu(M);
    if (!lu.isInvertible())
        throw NumericalError("SingularSystem", "conductivity transmission system singular");
    Eigen::Vector4d x = lu.solve(rhs);
    return {x(0), x(1), x(2), x(3), cfg};
}

} // namespace neutral

#endif
