#ifndef NEUTRAL_FAR_FIELD_HPP
#define NEUTRAL_FAR_FIELD_HPP

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "neutral/core_model.hpp"

namespace neutral {

/// Far-field content of the disturbance u - h in the matrix region: c1 is the
/// net coefficient of the |x|^-1 decay, c3 of the |x|^-3 decay, gap the RMS of
/// u - h on the larger measurement circle.
struct FarFieldReport {
    cplx c1, c3;
    double gap;
};

/// Laurent coefficients of the decaying matrix potentials recovered from
/// circle samples of the disturbance d(z) = U(z) - H(z).  Per Fourier mode of
/// the circle trace, d has at most two decay orders; modes -1 and +1 are pure
/// r^-1 (giving a_{-1} and b_{-1}), mode -3 pure r^-3 (a_{-3}), and mode +3
/// mixes r^-1 and r^-3, resolved by a two-radius 2x2 solve (b_{-3}).
struct MatrixTailCoefficients {
    cplx a_m1, a_m3; // phi_m coefficients of z^-1, z^-3
    cplx b_m1, b_m3; // psi_m coefficients of z^-1, z^-3
};

inline MatrixTailCoefficients fit_matrix_tail(const std::function<cplx(cplx)>& disturbance,
                                              const ElasticPhase& matrix_phase, double radius_a,
                                              double radius_b, int nq = 256) {
    double Ra = std::min(radius_a, radius_b), Rb = std::max(radius_a, radius_b);
    double km = kolosov_constant(matrix_phase);
    double s = 2.0 * matrix_phase.mu;
    auto mode = [&](double R, int l) {
        cplx acc = 0.0;
        for (int i = 0; i < nq; ++i) {
            double t = 2.0 * M_PI * i / nq;
            acc += disturbance(std::polar(R, t)) * std::exp(cplx(0.0, -l * t));
        }
        return acc / double(nq);
    };
    MatrixTailCoefficients c;
    c.a_m1 = mode(Rb, -1) * s * Rb / km;
    c.b_m1 = -std::conj(mode(Rb, 1) * s * Rb);
    c.a_m3 = mode(Rb, -3) * s * std::pow(Rb, 3) / km;
    Eigen::Matrix2d M;
    M << 1.0 / Ra, -1.0 / std::pow(Ra, 3), 1.0 / Rb, -1.0 / std::pow(Rb, 3);
    cplx ma = mode(Ra, 3) * s, mb = mode(Rb, 3) * s;
    Eigen::Vector2d xr = M.fullPivLu().solve(Eigen::Vector2d(ma.real(), mb.real()));
    Eigen::Vector2d xi = M.fullPivLu().solve(Eigen::Vector2d(ma.imag(), mb.imag()));
    c.b_m3 = std::conj(cplx(xr(1), xi(1)));
    return c;
}

inline FarFieldReport far_field_from_samples(const std::function<cplx(cplx)>& disturbance,
                                             const ElasticPhase& matrix_phase, double radius_a,
                                             double radius_b, int nq = 256) {
    MatrixTailCoefficients c = fit_matrix_tail(disturbance, matrix_phase, radius_a, radius_b, nq);
    double km = kolosov_constant(matrix_phase);
    double s = 2.0 * matrix_phase.mu;
    double Rb = std::max(radius_a, radius_b);
    double gap2 = 0.0;
    for (int i = 0; i < nq; ++i) {
        double t = 2.0 * M_PI * i / nq;
        gap2 += std::norm(disturbance(std::polar(Rb, t)));
    }
    return {(km * c.a_m1 - std::conj(c.b_m1)) / s, (km * c.a_m3 - std::conj(c.b_m3)) / s,
            std::sqrt(gap2 / nq)};
}

} // namespace neutral

#endif
