#ifndef NEUTRAL_KELVIN_BEM_HPP
#define NEUTRAL_KELVIN_BEM_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "neutral/core_model.hpp"
#include "neutral/far_field.hpp"

namespace neutral {

/// Kelvin fundamental solution of 2D isotropic elastostatics,
/// Gamma_ij(x) = (a1/2pi) d_ij log|x| - (a2/2pi) x_i x_j / |x|^2.
struct KelvinKernel {
    ElasticPhase phase;
    double a1, a2;

    explicit KelvinKernel(const ElasticPhase& ph) : phase(ph) {
        std::tie(a1, a2) = kelvin_params(ph);
    }
};

inline Mat2 kelvin_matrix(const KelvinKernel& k, const Vec2& x) {
    double r2 = x.squaredNorm();
    if (!(r2 > 0.0)) throw ValidationError("EvaluationAtOrigin", "Kelvin matrix undefined at 0");
    Mat2 g = (k.a1 / (4.0 * M_PI)) * std::log(r2) * Mat2::Identity();
    g -= (k.a2 / (2.0 * M_PI)) * (x * x.transpose()) / r2;
    return g;
}

/// Traction (at x, with unit normal nx) of the Kelvin column fields centered
/// at y; closed form of (C grad^ Gamma(.-y)) nx applied columnwise:
///   T = mu/(2pi(mu+kappa)) [r n^T - n r^T + (r.n) I]/r^2
///     + kappa/(pi(mu+kappa)) (r.n) r r^T / r^4,  r = x - y, n = nx.
inline Mat2 traction_kernel(const KelvinKernel& k, const Vec2& x, const Vec2& nx, const Vec2& y) {
    Vec2 r = x - y;
    double r2 = r.squaredNorm();
    if (!(r2 > 0.0)) throw ValidationError("EvaluationAtOrigin", "traction kernel undefined at 0");
    double mk = k.phase.mu + k.phase.kappa, rn = r.dot(nx);
    Mat2 t = (k.phase.mu / (2.0 * M_PI * mk)) *
             (r * nx.transpose() - nx * r.transpose() + rn * Mat2::Identity()) / r2;
    t += (k.phase.kappa / (M_PI * mk)) * rn * (r * r.transpose()) / (r2 * r2);
    return t;
}

/// Max-component residual of div_y Gamma(x-y) = -(1/2pi(mu+kappa)) grad_x log|x-y|,
/// the divergence taken by central finite differences.
inline double check_divergence_identity(const KelvinKernel& k, const Vec2& x, const Vec2& y,
                                        double step = 1e-5) {
    if (!((x - y).norm() > 0.0))
        throw ValidationError("EvaluationAtOrigin", "need x != y");
    Vec2 u = x - y;
    Vec2 rhs = -(1.0 / (2.0 * M_PI * (k.phase.mu + k.phase.kappa))) * u / u.squaredNorm();
    double res = 0.0;
    for (int i = 0; i < 2; ++i) {
        double div = 0.0;
        for (int j = 0; j < 2; ++j) {
            Vec2 e = Vec2::Zero();
            e(j) = step;
            div += (kelvin_matrix(k, x - (y + e))(i, j) - kelvin_matrix(k, x - (y - e))(i, j)) /
                   (2.0 * step);
        }
        res = std::max(res, std::abs(div - rhs(i)));
    }
    return res;
}

struct DivDivCheck {
    double value;    // div_x of the disk integral of div_y Gamma(x-y), at x
    double expected; // -1/(mu+kappa) inside the disk, 0 outside
};

/// Evaluates div_x of F(x) = int_{|y|<R} div_y Gamma(x-y) dy by midpoint
/// tensor-grid quadrature and a central difference for the outer divergence.
/// The quadrature sum is pointwise divergence-free in x (each cell contributes
/// a field with zero divergence away from its center), so the distributional
/// value only appears when the difference step straddles cells; half the cell
/// spacing recovers it to ~1e-7 and is the default.
inline DivDivCheck check_divdiv_identity(const KelvinKernel& k, double disk_radius, const Vec2& x,
                                         int cells_per_dim = 100, double fd_step = -1.0) {
    double R = disk_radius;
    if (!(R > 0.0)) throw ValidationError("InvalidGeometry", "disk radius must be positive");
    double cell = 2.0 * R / cells_per_dim;
    if (fd_step <= 0.0) fd_step = 0.5 * cell;
    double pref = -1.0 / (2.0 * M_PI * (k.phase.mu + k.phase.kappa));
    auto F = [&](const Vec2& p) {
        Vec2 acc = Vec2::Zero();
        for (int i = 0; i < cells_per_dim; ++i) {
            for (int j = 0; j < cells_per_dim; ++j) {
                Vec2 yc(-R + (i + 0.5) * cell, -R + (j + 0.5) * cell);
                if (yc.squaredNorm() >= R * R) continue;
                Vec2 u = p - yc;
                acc += u / u.squaredNorm();
            }
        }
        return Vec2(pref * cell * cell * acc);
    };
    double div = 0.0;
    for (int j = 0; j < 2; ++j) {
        Vec2 e = Vec2::Zero();
        e(j) = fd_step;
        div += (F(x + e)(j) - F(x - e)(j)) / (2.0 * fd_step);
    }
    double expected = (x.norm() < R) ? -1.0 / (k.phase.mu + k.phase.kappa) : 0.0;
    return {div, expected};
}

/// Periodic Nystrom discretization of a SmoothCurve: N equispaced parameter
/// nodes with exact derivative data.
struct DiscretizedCurve {
    SmoothCurve curve;
    int N;
    double h; // parameter spacing 2pi/N
    std::vector<double> t;
    std::vector<cplx> z, zp, zpp, nrm; // position, z', z'', outward normal
    std::vector<double> speed;

    DiscretizedCurve(const SmoothCurve& c, int n) : curve(c), N(n), h(2.0 * M_PI / n) {
        if (n < 8 || n % 2 != 0)
            throw ValidationError("InvalidNodeCount", "need an even node count >= 8");
        t.resize(n); z.resize(n); zp.resize(n); zpp.resize(n); nrm.resize(n); speed.resize(n);
        for (int i = 0; i < n; ++i) {
            t[i] = i * h;
            z[i] = c.point(t[i]);
            zp[i] = c.dpoint(t[i]);
            zpp[i] = c.ddpoint(t[i]);
            speed[i] = std::abs(zp[i]);
            nrm[i] = cplx(0.0, -1.0) * zp[i] / speed[i];
        }
    }

    Vec2 node(int i) const { return {z[i].real(), z[i].imag()}; }
    Vec2 normal_at(int i) const { return {nrm[i].real(), nrm[i].imag()}; }
    /// Signed area enclosed (positive for counterclockwise).
    double signed_area() const {
        double a = 0.0;
        for (int i = 0; i < N; ++i) a += (std::conj(z[i]) * zp[i]).imag();
        return 0.5 * a * h;
    }
    /// Winding number about a point off the curve.
    int winding(const Vec2& x) const {
        cplx w(x.x(), x.y());
        double acc = 0.0;
        for (int i = 0; i < N; ++i) acc += (zp[i] / (z[i] - w)).imag();
        return int(std::lround(acc * h / (2.0 * M_PI)));
    }
    double min_node_distance(const Vec2& x) const {
        cplx w(x.x(), x.y());
        double d = 1e300;
        for (int i = 0; i < N; ++i) d = std::min(d, std::abs(z[i] - w));
        return d;
    }
};

namespace detail {

/// Kress quadrature weights for the kernel log(4 sin^2((t-s)/2)) on N
/// equispaced nodes; R[d] with d = (i-j) mod N.
inline std::vector<double> kress_log_weights(int N) {
    std::vector<double> R(N);
    for (int d = 0; d < N; ++d) {
        double th = 2.0 * M_PI * d / N, acc = 0.0;
        for (int m = 1; m < N / 2; ++m) acc += std::cos(m * th) / m;
        R[d] = -(4.0 * M_PI / N) * acc - (4.0 * M_PI / (N * N)) * std::cos(N / 2 * th);
    }
    return R;
}

/// Quadrature weights for p.v. int cot((t-s)/2) f(s) ds on equispaced nodes.
inline std::vector<double> hilbert_pv_weights(int N) {
    std::vector<double> W(N);
    for (int d = 0; d < N; ++d) {
        double th = 2.0 * M_PI * d / N, acc = 0.0;
        for (int m = 1; m < N / 2; ++m) acc += std::sin(m * th);
        W[d] = (4.0 * M_PI / N) * acc + (2.0 * M_PI / N) * std::sin(N / 2 * th);
    }
    return W;
}

} // namespace detail

/// Dense 2N x 2N Nystrom matrix of the on-curve single-layer operator
/// rho -> int Gamma(x(t)-y(s)) rho(s) |y'(s)| ds, log singularity handled by
/// Kress weights.
inline Eigen::MatrixXd single_layer_matrix(const KelvinKernel& k, const DiscretizedCurve& dc) {
    const int N = dc.N;
    std::vector<double> R = detail::kress_log_weights(N);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            int d = (i - j + N) % N;
            Mat2 blk;
            if (i != j) {
                cplx rz = dc.z[i] - dc.z[j];
                Vec2 r(rz.real(), rz.imag());
                double r2 = r.squaredNorm();
                double s2 = 4.0 * std::pow(std::sin(0.5 * (dc.t[i] - dc.t[j])), 2);
                blk = (k.a1 / (4.0 * M_PI)) * std::log(r2 / s2) * Mat2::Identity() -
                      (k.a2 / (2.0 * M_PI)) * (r * r.transpose()) / r2;
            } else {
                cplx tz = dc.zp[i] / dc.speed[i];
                Vec2 tau(tz.real(), tz.imag());
                blk = (k.a1 / (2.0 * M_PI)) * std::log(dc.speed[i]) * Mat2::Identity() -
                      (k.a2 / (2.0 * M_PI)) * (tau * tau.transpose());
            }
            Mat2 full = (k.a1 / (4.0 * M_PI)) * R[d] * Mat2::Identity() + dc.h * blk;
            M.block<2, 2>(2 * i, 2 * j) = full * dc.speed[j];
        }
    }
    return M;
}

/// Dense Nystrom matrix of the principal-value adjoint traction operator K*:
/// rho -> p.v. int T(x(t), n(t), y(s)) rho(s) |y'(s)| ds.  The Cauchy-type
/// antisymmetric part is split off as (1/2)cot((t-s)/2) and integrated with
/// spectral PV weights; the remainder is smooth with curvature diagonal limits.
inline Eigen::MatrixXd traction_pv_matrix(const KelvinKernel& k, const DiscretizedCurve& dc) {
    const int N = dc.N;
    std::vector<double> W = detail::hilbert_pv_weights(N);
    double mk = k.phase.mu + k.phase.kappa;
    double cA = k.phase.mu / (2.0 * M_PI * mk);
    double cB = k.phase.kappa / (M_PI * mk);
    Mat2 J;
    J << 0.0, -1.0, 1.0, 0.0;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
        Vec2 ni = dc.normal_at(i);
        cplx zpi = dc.zp[i];
        double spi = dc.speed[i];
        for (int j = 0; j < N; ++j) {
            int d = (i - j + N) % N;
            double acorr; // smooth remainder of (x'(t).r)/r^2 after cot split
            Mat2 sm;      // smooth (non-Cauchy) part of the kernel
            if (i != j) {
                cplx rz = dc.z[i] - dc.z[j];
                Vec2 r(rz.real(), rz.imag());
                double r2 = r.squaredNorm();
                double xr = zpi.real() * r.x() + zpi.imag() * r.y();
                acorr = xr / r2 - 0.5 / std::tan(0.5 * (dc.t[i] - dc.t[j]));
                double rn = r.dot(ni);
                sm = cA * rn / r2 * Mat2::Identity() + cB * rn * (r * r.transpose()) / (r2 * r2);
            } else {
                acorr = (std::conj(zpi) * dc.zpp[i]).real() / (2.0 * spi * spi);
                double nxpp = -(std::conj(zpi) * dc.zpp[i]).imag() / spi; // n . x''
                cplx tz = zpi / spi;
                Vec2 tau(tz.real(), tz.imag());
                double lim = -nxpp / (2.0 * spi * spi);
                sm = cA * lim * Mat2::Identity() + cB * lim * (tau * tau.transpose());
            }
            Mat2 full = (cA / spi) * (0.5 * W[d] + dc.h * acorr) * J + dc.h * sm;
            M.block<2, 2>(2 * i, 2 * j) = full * dc.speed[j];
        }
    }
    return M;
}

/// Plain periodic-trapezoid single layer at an off-curve point.  When
/// subtract_pole is given, the kernel is Gamma(x-y) - Gamma(x-pole), which
/// removes the log growth (used for the matrix-region representation).
inline Vec2 single_layer(const KelvinKernel& k, const DiscretizedCurve& dc,
                         const Eigen::VectorXd& density, const Vec2& x,
                         const Vec2* subtract_pole = nullptr) {
    Vec2 acc = Vec2::Zero();
    for (int j = 0; j < dc.N; ++j) {
        Mat2 g = kelvin_matrix(k, x - dc.node(j));
        if (subtract_pole) g -= kelvin_matrix(k, x - *subtract_pole);
        acc += g * density.segment<2>(2 * j) * dc.speed[j];
    }
    return acc * dc.h;
}

/// Off-curve traction of a single layer at x with normal nx.
inline Vec2 traction_of_single_layer_at(const KelvinKernel& k, const DiscretizedCurve& dc,
                                        const Eigen::VectorXd& density, const Vec2& x,
                                        const Vec2& nx, const Vec2* subtract_pole = nullptr) {
    Vec2 acc = Vec2::Zero();
    for (int j = 0; j < dc.N; ++j) {
        Mat2 t = traction_kernel(k, x, nx, dc.node(j));
        if (subtract_pole) t -= traction_kernel(k, x, nx, *subtract_pole);
        acc += t * density.segment<2>(2 * j) * dc.speed[j];
    }
    return acc * dc.h;
}

enum class Side { Interior, Exterior };

/// One-sided traction of the layer's own field at a node:
/// (-1/2 I + K*) rho on the interior side, (+1/2 I + K*) rho on the exterior
/// side (jump relation of the single layer, verified against off-curve limits
/// in the test suite).
inline Vec2 traction_of_single_layer(const KelvinKernel& k, const DiscretizedCurve& dc,
                                     const Eigen::VectorXd& density, int node, Side side) {
    if (node < 0 || node >= dc.N)
        throw ValidationError("InvalidNode", "node index out of range");
    Eigen::MatrixXd Ks = traction_pv_matrix(k, dc);
    Eigen::VectorXd t = Ks * density;
    double jump = (side == Side::Interior) ? -0.5 : 0.5;
    return t.segment<2>(2 * node) + jump * density.segment<2>(2 * node);
}

/// Node-doubling resolution estimate for the plain off-curve single layer.
inline Vec2 single_layer_checked(const KelvinKernel& k, const SmoothCurve& curve,
                                 const std::function<Vec2(double)>& density, int nodes,
                                 const Vec2& x, double tol = 1e-8) {
    auto eval = [&](int n) {
        DiscretizedCurve dc(curve, n);
        Eigen::VectorXd rho(2 * n);
        for (int j = 0; j < n; ++j) rho.segment<2>(2 * j) = density(dc.t[j]);
        return single_layer(k, dc, rho, x);
    };
    Vec2 a = eval(nodes), b = eval(2 * nodes);
    if ((a - b).norm() > tol * (1.0 + b.norm()))
        throw NumericalError("QuadratureUnderResolved",
                             "node doubling changes the single layer beyond tolerance");
    return b;
}

/// Transmission problem on smooth curves: core inside ∂D, shell between ∂D
/// and ∂Ω, matrix outside, uniform load at infinity.
struct BemScenario {
    SmoothCurve inner, outer;
    ElasticPhase core, shell, matrix;
    UniformLoad load;
    int nodes = 256;
};

struct BemSolution {
    DiscretizedCurve inner, outer;
    ElasticPhase core, shell, matrix;
    UniformLoad load;
    Vec2 pole;                                        // subtraction point inside D
    Eigen::VectorXd rho_core;                         // core kernel on ∂D
    Eigen::VectorXd rho_shell_inner, rho_shell_outer; // shell kernel on ∂D, ∂Ω
    Eigen::VectorXd rho_matrix;                       // matrix kernel on ∂Ω, pole-subtracted
    double system_residual;
};

/// Four-density single-layer ansatz: each region is h plus single layers
/// (core kernel on ∂D; shell kernel on ∂D and ∂Ω; pole-subtracted matrix
/// kernel on ∂Ω), so the far-field condition is built in and the homogeneous
/// problem solves to zero densities.  Displacement and traction continuity on
/// both interfaces; dense direct solve with a checked discrete residual.
inline BemSolution solve_transmission(const BemScenario& sc) {
    DiscretizedCurve din(sc.inner, sc.nodes), dout(sc.outer, sc.nodes);
    if (din.signed_area() <= 0.0 || dout.signed_area() <= 0.0)
        throw ValidationError("InvalidGeometry", "curves must be counterclockwise");
    // ∂D strictly inside ∂Ω
    double sep = 1e300;
    for (int i = 0; i < din.N; ++i) {
        if (dout.winding(din.node(i)) != 1)
            throw ValidationError("GeometryOverlap", "inner curve not strictly inside outer");
        sep = std::min(sep, dout.min_node_distance(din.node(i)));
    }
    if (sep < 1e-6)
        throw ValidationError("GeometryOverlap", "interfaces touch or nearly touch");

    Vec2 pole = Vec2::Zero();
    for (int i = 0; i < din.N; ++i) pole += din.node(i);
    pole /= din.N;

    KelvinKernel kc(sc.core), ks(sc.shell), km(sc.matrix);
    const int N = sc.nodes, B = 2 * N;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4 * B, 4 * B);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(4 * B);

    // cross-curve evaluation blocks (smooth kernels: plain trapezoid)
    auto fill_cross_S = [](const KelvinKernel& k, const DiscretizedCurve& src,
                           const DiscretizedCurve& tgt, Eigen::Ref<Eigen::MatrixXd> out,
                           double sgn, const Vec2* pole_pt = nullptr) {
        for (int i = 0; i < tgt.N; ++i)
            for (int j = 0; j < src.N; ++j) {
                Mat2 g = kelvin_matrix(k, tgt.node(i) - src.node(j));
                if (pole_pt) g -= kelvin_matrix(k, tgt.node(i) - *pole_pt);
                out.block<2, 2>(2 * i, 2 * j) += sgn * g * src.speed[j] * src.h;
            }
    };
    auto fill_cross_T = [](const KelvinKernel& k, const DiscretizedCurve& src,
                           const DiscretizedCurve& tgt, Eigen::Ref<Eigen::MatrixXd> out,
                           double sgn, const Vec2* pole_pt = nullptr) {
        for (int i = 0; i < tgt.N; ++i)
            for (int j = 0; j < src.N; ++j) {
                Mat2 t = traction_kernel(k, tgt.node(i), tgt.normal_at(i), src.node(j));
                if (pole_pt) t -= traction_kernel(k, tgt.node(i), tgt.normal_at(i), *pole_pt);
                out.block<2, 2>(2 * i, 2 * j) += sgn * t * src.speed[j] * src.h;
            }
    };
    auto add_jump = [](Eigen::Ref<Eigen::MatrixXd> out, double jump) {
        for (int i = 0; i < out.rows(); ++i) out(i, i) += jump;
    };

    // unknown order: [rho_core; rho_shell_inner; rho_shell_outer; rho_matrix]
    // rows 0..B-1: displacement continuity on ∂D (core - shell = 0)
    A.block(0, 0, B, B) = single_layer_matrix(kc, din);
    A.block(0, B, B, B) = -single_layer_matrix(ks, din);
    fill_cross_S(ks, dout, din, A.block(0, 2 * B, B, B), -1.0);
    // rows B..2B-1: traction continuity on ∂D (interior core limit - shell limit)
    A.block(B, 0, B, B) = traction_pv_matrix(kc, din);
    add_jump(A.block(B, 0, B, B), -0.5);
    A.block(B, B, B, B) = -traction_pv_matrix(ks, din);
    add_jump(A.block(B, B, B, B), -0.5); // -(+1/2 I + K*): shell approaches ∂D from outside
    fill_cross_T(ks, dout, din, A.block(B, 2 * B, B, B), -1.0);
    // rows 2B..3B-1: displacement continuity on ∂Ω (shell - matrix = h)
    fill_cross_S(ks, din, dout, A.block(2 * B, B, B, B), 1.0);
    A.block(2 * B, 2 * B, B, B) = single_layer_matrix(ks, dout);
    // matrix kernel is pole-subtracted: S~ = S_self - Gamma(x-pole) correction
    A.block(2 * B, 3 * B, B, B) = -single_layer_matrix(km, dout);
    for (int i = 0; i < N; ++i) {
        Mat2 gp = kelvin_matrix(km, dout.node(i) - pole);
        for (int j = 0; j < N; ++j)
            A.block<2, 2>(2 * (2 * N) + 2 * i, 2 * (3 * N) + 2 * j) += gp * dout.speed[j] * dout.h;
    }
    // rows 3B..4B-1: traction continuity on ∂Ω (shell interior limit - matrix exterior limit)
    fill_cross_T(ks, din, dout, A.block(3 * B, B, B, B), 1.0);
    A.block(3 * B, 2 * B, B, B) = traction_pv_matrix(ks, dout);
    add_jump(A.block(3 * B, 2 * B, B, B), -0.5);
    A.block(3 * B, 3 * B, B, B) = -traction_pv_matrix(km, dout);
    add_jump(A.block(3 * B, 3 * B, B, B), -0.5); // -(+1/2 I + K*)
    for (int i = 0; i < N; ++i) {
        Mat2 tp = traction_kernel(km, dout.node(i), dout.normal_at(i), pole);
        for (int j = 0; j < N; ++j)
            A.block<2, 2>(2 * (3 * N) + 2 * i, 2 * (3 * N) + 2 * j) += tp * dout.speed[j] * dout.h;
    }

    // every region is represented as h plus layers (so the homogeneous problem
    // solves to zero densities); h cancels in the displacement rows, and the
    // traction rows carry the stress-of-h mismatch across each interface
    Mat2 sig_c = apply_elasticity_tensor(sc.core, sc.load.A);
    Mat2 sig_s = apply_elasticity_tensor(sc.shell, sc.load.A);
    Mat2 sig_m = apply_elasticity_tensor(sc.matrix, sc.load.A);
    for (int i = 0; i < N; ++i) {
        rhs.segment<2>(2 * N + 2 * i) = (sig_s - sig_c) * din.normal_at(i);
        rhs.segment<2>(2 * (3 * N) + 2 * i) = (sig_m - sig_s) * dout.normal_at(i);
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd x = lu.solve(rhs);
    double resid = (A * x - rhs).norm() / (1.0 + rhs.norm());
    if (!x.allFinite() || resid > 1e-10)
        throw NumericalError("SingularSystem",
                             "transmission system residual " + std::to_string(resid));
    return {std::move(din), std::move(dout), sc.core,        sc.shell,
            sc.matrix,      sc.load,         pole,           x.segment(0, B),
            x.segment(B, B), x.segment(2 * B, B), x.segment(3 * B, B), resid};
}

/// Field evaluation off both curves, by region.
inline Vec2 evaluate_field(const BemSolution& sol, const Vec2& x) {
    double scale_in = 2.0 * M_PI / sol.inner.N, scale_out = 2.0 * M_PI / sol.outer.N;
    if (sol.inner.min_node_distance(x) < 0.75 * scale_in * sol.inner.speed[0] ||
        sol.outer.min_node_distance(x) < 0.75 * scale_out * sol.outer.speed[0])
        throw ValidationError("PointOnBoundary", "evaluation point too close to an interface");
    KelvinKernel kc(sol.core), ks(sol.shell), km(sol.matrix);
    Vec2 bg = sol.load.h(x);
    if (sol.inner.winding(x) == 1)
        return Vec2(bg + single_layer(kc, sol.inner, sol.rho_core, x));
    if (sol.outer.winding(x) == 1)
        return Vec2(bg + single_layer(ks, sol.inner, sol.rho_shell_inner, x) +
                    single_layer(ks, sol.outer, sol.rho_shell_outer, x));
    return Vec2(bg + single_layer(km, sol.outer, sol.rho_matrix, x, &sol.pole));
}

/// Far-field disturbance analysis on circles of radius R and 1.5R.
inline FarFieldReport neutrality_gap(const BemSolution& sol, double R) {
    double rmax = 0.0;
    for (int i = 0; i < sol.outer.N; ++i) rmax = std::max(rmax, std::abs(sol.outer.z[i]));
    if (!(R > rmax))
        throw ValidationError("InvalidRadius", "measurement circle must enclose the inclusion");
    KelvinKernel km(sol.matrix);
    auto disturbance = [&](cplx z) {
        Vec2 d = single_layer(km, sol.outer, sol.rho_matrix, Vec2(z.real(), z.imag()), &sol.pole);
        return cplx(d.x(), d.y());
    };
    return far_field_from_samples(disturbance, sol.matrix, R, 1.5 * R);
}

} // namespace neutral

#endif
