#ifndef NEUTRAL_CORE_MODEL_HPP
#define NEUTRAL_CORE_MODEL_HPP

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "neutral/errors.hpp"

namespace neutral {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Isotropic elastic material in 2D: shear modulus mu and (2D) bulk modulus
/// kappa, both strictly positive.  The elasticity tensor is
/// C_ijkl = (kappa-mu) d_ij d_kl + mu (d_ik d_jl + d_il d_jk).
struct ElasticPhase {
    double mu;
    double kappa;

    ElasticPhase(double mu_, double kappa_) : mu(mu_), kappa(kappa_) {
        if (!(mu > 0.0) || !(kappa > 0.0))
            throw ValidationError("InvalidPhase", "elastic moduli must be positive");
    }
};

struct ConductorPhase {
    double sigma;

    explicit ConductorPhase(double sigma_) : sigma(sigma_) {
        if (!(sigma > 0.0))
            throw ValidationError("InvalidPhase", "conductivity must be positive");
    }
};

/// Concentric coated disks: core |x-center| < r1, shell r1 < |x-center| < r2.
struct CoatedDisks {
    double r1;
    double r2;
    Vec2 center{0.0, 0.0};

    CoatedDisks(double r1_, double r2_, Vec2 c = Vec2::Zero()) : r1(r1_), r2(r2_), center(c) {
        if (!(r1 > 0.0 && r1 < r2))
            throw ValidationError("InvalidGeometry", "need 0 < r1 < r2");
    }
};

/// Closed counterclockwise curve given as a finite Fourier series
///   z(t) = sum_k coeff[k] * exp(i*mode[k]*t),  t in [0, 2pi).
/// Derivatives are exact.  Simplicity and nonvanishing speed are checked by
/// sampling at construction.
class SmoothCurve {
public:
    struct Term { int mode; cplx coeff; };

    explicit SmoothCurve(std::vector<Term> terms) : terms_(std::move(terms)) {
        const int ns = 512;
        double min_speed = 1e300;
        for (int i = 0; i < ns; ++i) {
            double t = 2.0 * M_PI * i / ns;
            min_speed = std::min(min_speed, std::abs(dpoint(t)));
        }
        if (!(min_speed > 1e-12))
            throw ValidationError("DegenerateCurve", "curve speed vanishes");
        // simplicity check by sampling: points at parameter distance s must
        // stay at least a fraction of s * min_speed apart (chord-arc bound);
        // curves with a genuine crossing violate this near the crossing
        const int nc = 512;
        std::vector<cplx> pts(nc);
        for (int i = 0; i < nc; ++i) pts[i] = point(2.0 * M_PI * i / nc);
        for (int i = 0; i < nc; ++i) {
            for (int j = i + 8; j < nc; ++j) {
                int dp = std::min(j - i, nc - (j - i));
                if (dp < 8) continue;
                double sep = 2.0 * M_PI * dp / nc;
                if (std::abs(pts[i] - pts[j]) < 0.1 * sep * min_speed)
                    throw ValidationError("SelfIntersectingCurve", "curve is not simple");
            }
        }
    }

    static SmoothCurve circle(double radius, Vec2 center = Vec2::Zero()) {
        return SmoothCurve({{0, cplx(center.x(), center.y())}, {1, cplx(radius, 0.0)}});
    }

    /// r(t) = radius*(1 + eps*cos(m t)) around center, counterclockwise.
    static SmoothCurve perturbed_circle(double radius, double eps, int m, Vec2 center = Vec2::Zero()) {
        std::vector<Term> t{{0, cplx(center.x(), center.y())},
                            {1, cplx(radius, 0.0)},
                            {1 + m, cplx(radius * eps / 2.0, 0.0)},
                            {1 - m, cplx(radius * eps / 2.0, 0.0)}};
        return SmoothCurve(std::move(t));
    }

    cplx point(double t) const {
        cplx z = 0.0;
        for (const auto& tm : terms_) z += tm.coeff * std::exp(cplx(0.0, tm.mode * t));
        return z;
    }
    cplx dpoint(double t) const {
        cplx z = 0.0;
        for (const auto& tm : terms_)
            z += tm.coeff * cplx(0.0, tm.mode) * std::exp(cplx(0.0, tm.mode * t));
        return z;
    }
    cplx ddpoint(double t) const {
        cplx z = 0.0;
        for (const auto& tm : terms_)
            z += tm.coeff * cplx(0.0, tm.mode) * cplx(0.0, tm.mode) * std::exp(cplx(0.0, tm.mode * t));
        return z;
    }
    /// Outward unit normal for a counterclockwise curve: n = -i z'/|z'|.
    cplx normal(double t) const {
        cplx d = dpoint(t);
        return cplx(0.0, -1.0) * d / std::abs(d);
    }

    const std::vector<Term>& terms() const { return terms_; }

private:
    std::vector<Term> terms_;
};

/// Uniform load h(x) = A x with A symmetric.  "bulk" is A = I, "shear" is
/// trace-free A.  Complexified, h = p z + q conj(z) with p = tr(A)/2 real and
/// q = (A11-A22)/2 + i A12.
struct UniformLoad {
    Mat2 A;

    explicit UniformLoad(const Mat2& A_) : A(A_) {
        if (std::abs(A(0, 1) - A(1, 0)) > 1e-14 * (1.0 + A.norm()))
            throw ValidationError("InvalidLoad", "load matrix must be symmetric");
    }
    static UniformLoad bulk() { return UniformLoad(Mat2::Identity()); }
    /// h(x) = (y, x)^T
    static UniformLoad shear() {
        Mat2 a;
        a << 0.0, 1.0, 1.0, 0.0;
        return UniformLoad(a);
    }

    double p() const { return 0.5 * A.trace(); }
    cplx q() const { return cplx(0.5 * (A(0, 0) - A(1, 1)), A(0, 1)); }
    bool is_bulk() const { return (A - Mat2::Identity()).norm() < 1e-14; }
    bool is_shear() const { return std::abs(A.trace()) < 1e-14; }

    cplx h(cplx z) const { return p() * z + q() * std::conj(z); }
    Vec2 h(const Vec2& x) const { return A * x; }
};

/// Kolosov constant k = 1 + 2 mu / kappa (> 1 for positive moduli).
inline double kolosov_constant(const ElasticPhase& ph) {
    return 1.0 + 2.0 * ph.mu / ph.kappa;
}

/// C : strain for the isotropic tensor above.
inline Mat2 apply_elasticity_tensor(const ElasticPhase& ph, const Mat2& strain) {
    if (std::abs(strain(0, 1) - strain(1, 0)) > 1e-12 * (1.0 + strain.norm()))
        throw ValidationError("NonSymmetricStrain", "strain must be symmetric");
    return (ph.kappa - ph.mu) * strain.trace() * Mat2::Identity() + 2.0 * ph.mu * strain;
}

/// Kelvin-matrix constants alpha1 = (1/mu + 1/(mu+kappa))/2,
/// alpha2 = (1/mu - 1/(mu+kappa))/2.
inline std::pair<double, double> kelvin_params(const ElasticPhase& ph) {
    double a = 1.0 / ph.mu, b = 1.0 / (ph.mu + ph.kappa);
    return {0.5 * (a + b), 0.5 * (a - b)};
}

/// Closed-form constants attached to a bulk-neutral configuration.
///
/// alpha is the constant shell divergence.  The published closed form carries
/// a sign slip; the value consistent with the exact concentric-disk solution
/// (and with Hashin's effective bulk modulus) is
///   alpha = 2 + 2(kappa_m - kappa_s)/(mu_s + kappa_s),
/// with beta = kappa_s * alpha / 2 and kappa_m - beta = mu_s (kappa_m -
/// kappa_s)/(mu_s + kappa_s).
struct NeutralityConstants {
    double alpha;
    double beta;
    double gamma;
    double k_star;
    double k_core, k_shell, k_matrix;
};

inline NeutralityConstants neutrality_constants(const ElasticPhase& core,
                                                const ElasticPhase& shell,
                                                const ElasticPhase& matrix) {
    NeutralityConstants c{};
    c.alpha = 2.0 + 2.0 * (matrix.kappa - shell.kappa) / (shell.mu + shell.kappa);
    c.beta = shell.kappa * c.alpha / 2.0;
    c.gamma = core.mu / (2.0 * shell.kappa + shell.mu);
    c.k_core = kolosov_constant(core);
    c.k_shell = kolosov_constant(shell);
    c.k_matrix = kolosov_constant(matrix);
    c.k_star = (c.k_core - c.gamma) / (1.0 + c.gamma);
    // kappa_m - beta identity (corrected form, see class comment)
    double lhs = matrix.kappa - c.beta;
    double rhs = shell.mu * (matrix.kappa - shell.kappa) / (shell.mu + shell.kappa);
    double scale = std::abs(matrix.kappa) + std::abs(c.beta) + 1.0;
    if (std::abs(lhs - rhs) > 1e-12 * scale)
        throw NumericalError("ConstantIdentityViolation", "kappa_m - beta identity failed");
    return c;
}

/// The moduli hypotheses under which the rigidity theorem applies:
/// mu_c != mu_s, kappa_m != kappa_s, kappa_c < 2 kappa_s + mu_s.
/// Comparisons are exact on the stored doubles.
struct HypothesesReport {
    bool shear_moduli_differ;
    bool bulk_moduli_differ;
    bool core_bulk_small;
    bool all() const { return shear_moduli_differ && bulk_moduli_differ && core_bulk_small; }
};

inline HypothesesReport check_hypotheses(const ElasticPhase& core,
                                         const ElasticPhase& shell,
                                         const ElasticPhase& matrix) {
    return {core.mu != shell.mu, matrix.kappa != shell.kappa,
            core.kappa < 2.0 * shell.kappa + shell.mu};
}

} // namespace neutral

#endif
