#ifndef NEUTRAL_NEUTRALITY_LAB_HPP
#define NEUTRAL_NEUTRALITY_LAB_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <functional>
#include <string>
#include <vector>

#include "neutral/core_model.hpp"
#include "neutral/elasticity_disks.hpp"
#include "neutral/kelvin_bem.hpp"

namespace neutral {

// ---------------------------------------------------------------------------
// Root-finding scaffold: mandatory pre-scan for a bracket, then Brent.
// ---------------------------------------------------------------------------

struct ScanTable {
    std::vector<double> x, fx;
};

struct RootFindOptions {
    int scan_samples = 64;
    double obj_tol = 1e-12;
    double x_tol = 1e-13;
    int max_iter = 200;
};

struct RootFindResult {
    double root;
    double f_root;
    ScanTable scan;
};

/// NoSignChange failure carrying the objective scan, so callers can report
/// what was actually sampled.
class NoSignChangeError : public NumericalError {
public:
    ScanTable scan;
    NoSignChangeError(const std::string& msg, ScanTable s)
        : NumericalError("NoSignChange", msg), scan(std::move(s)) {}
};

namespace detail {

inline double brent_root(const std::function<double(double)>& f, double a, double b, double fa,
                         double fb, const RootFindOptions& opt) {
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < opt.max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + opt.x_tol;
        double m = 0.5 * (c - b);
        if (std::abs(fb) < opt.obj_tol || std::abs(m) <= tol) return b;
        if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
            d = e = m; // bisection
        } else {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                double r = fb / fc, t = fa / fc;
                p = s * (2.0 * m * t * (t - r) - (b - a) * (r - 1.0));
                q = (t - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = e = m;
            }
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa;
            d = e = b - a;
        }
    }
    throw NumericalError("RootIterationLimit", "Brent iteration limit reached");
}

} // namespace detail

/// Scan [lo, hi], locate a sign change, refine by Brent.  The scan table is
/// returned with the root (and is available to error reporting via the
/// NoSignChange message).
inline RootFindResult find_bracketed_root(const std::function<double(double)>& f, double lo,
                                          double hi, const RootFindOptions& opt = {}) {
    if (!(lo < hi)) throw ValidationError("InvalidBracket", "need lo < hi");
    ScanTable scan;
    const int n = std::max(2, opt.scan_samples);
    double fmax = 0.0;
    for (int i = 0; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        double v = f(x);
        scan.x.push_back(x);
        scan.fx.push_back(v);
        fmax = std::max(fmax, std::abs(v));
    }
    if (fmax < 1e-13)
        throw NumericalError("DegenerateObjective", "objective vanishes over the whole bracket");
    for (int i = 0; i < n; ++i) {
        double fa = scan.fx[i], fb = scan.fx[i + 1];
        if (fa == 0.0) return {scan.x[i], 0.0, std::move(scan)};
        if ((fa > 0.0) != (fb > 0.0)) {
            double r = detail::brent_root(f, scan.x[i], scan.x[i + 1], fa, fb, opt);
            return {r, f(r), std::move(scan)};
        }
    }
    if (scan.fx.back() == 0.0) return {scan.x.back(), 0.0, std::move(scan)};
    std::string msg = "objective has constant sign on [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]; range [" +
                      std::to_string(*std::min_element(scan.fx.begin(), scan.fx.end())) + ", " +
                      std::to_string(*std::max_element(scan.fx.begin(), scan.fx.end())) + "]";
    throw NoSignChangeError(msg, std::move(scan));
}

// ---------------------------------------------------------------------------
// Neutral-bulk search on concentric disks.
// ---------------------------------------------------------------------------

/// Signed scalar form of the leading far-field coefficient: c1 projected on
/// the phase direction the load excites (real axis for a bulk load, the
/// direction of q otherwise).
inline double signed_c1(const FarFieldReport& ff, const UniformLoad& load) {
    cplx q = load.q();
    cplx dir = (std::abs(q) > 1e-14) ? q / std::abs(q) : cplx(1.0, 0.0);
    return (ff.c1 * std::conj(dir)).real();
}

enum class FreeParameter { CoreMu, CoreKappa, ShellMu, ShellKappa, MatrixMu, MatrixKappa };

struct DiskTemplate {
    CoatedDisks geometry{1.0, 2.0};
    ElasticPhase core{2.0, 1.0}, shell{1.0, 2.0}, matrix{1.0, 1.0};
    int order = 8;
};

inline DiskTemplate with_parameter(DiskTemplate t, FreeParameter p, double v) {
    switch (p) {
        case FreeParameter::CoreMu: t.core = ElasticPhase(v, t.core.kappa); break;
        case FreeParameter::CoreKappa: t.core = ElasticPhase(t.core.mu, v); break;
        case FreeParameter::ShellMu: t.shell = ElasticPhase(v, t.shell.kappa); break;
        case FreeParameter::ShellKappa: t.shell = ElasticPhase(t.shell.mu, v); break;
        case FreeParameter::MatrixMu: t.matrix = ElasticPhase(v, t.matrix.kappa); break;
        case FreeParameter::MatrixKappa: t.matrix = ElasticPhase(t.matrix.mu, v); break;
    }
    return t;
}

struct NeutralRootCertificate {
    double root;
    double objective;
    FarFieldReport far;
    ShellPropertyReport shell;
    CoreLinearityReport core;
    HypothesesReport hypotheses;
    double k_star;
    double alpha, beta;
};

struct FindNeutralResult {
    double root;
    ScanTable scan;
    NeutralRootCertificate certificate;
};

/// Brent search for the parameter value making the bulk-load exterior
/// disturbance vanish; the certificate re-solves at the root.
inline FindNeutralResult find_neutral_bulk(const DiskTemplate& tmpl, FreeParameter param,
                                           double lo, double hi,
                                           const RootFindOptions& opt = {}) {
    if (!(lo > 0.0)) throw ValidationError("InvalidBracket", "moduli brackets must be positive");
    UniformLoad load = UniformLoad::bulk();
    auto solve_at = [&](double v) {
        DiskTemplate t = with_parameter(tmpl, param, v);
        return solve_coated_disk_elasticity(t.geometry, t.core, t.shell, t.matrix, load, t.order);
    };
    double Ra = 2.0 * tmpl.geometry.r2, Rb = 4.0 * tmpl.geometry.r2;
    auto objective = [&](double v) { return signed_c1(far_field(solve_at(v), Ra, Rb), load); };
    RootFindResult rr = find_bracketed_root(objective, lo, hi, opt);
    if (!(rr.root > 0.0))
        throw NumericalError("NonPhysicalRoot", "root is not a positive modulus");

    DiskTemplate at = with_parameter(tmpl, param, rr.root);
    LaurentPotentials pots = solve_at(rr.root);
    FarFieldReport far = far_field(pots, Ra, Rb);
    NeutralityConstants nc = neutrality_constants(at.core, at.shell, at.matrix);
    NeutralRootCertificate cert{rr.root,
                                rr.f_root,
                                far,
                                verify_shell_properties(pots, nc),
                                verify_core_linearity(pots),
                                check_hypotheses(at.core, at.shell, at.matrix),
                                nc.k_star,
                                nc.alpha,
                                nc.beta};
    return {rr.root, std::move(rr.scan), cert};
}

// ---------------------------------------------------------------------------
// Shear infeasibility sweep.
// ---------------------------------------------------------------------------

struct SweepAxis {
    std::string name;
    double lo, hi;
    int count;

    double at(int i) const { return lo + (hi - lo) * i / (count - 1); }
};

struct ShearSweepRow {
    double ratio, core_mu, core_kappa;
    double abs_c1, abs_c3;
};

struct ShearSweepResult {
    std::vector<ShearSweepRow> rows; // lexicographic in (ratio, core_mu, core_kappa)
    double min_max_c;                // min over grid of max(|c1|, |c3|)
    ShearSweepRow argmin;
    // c1 = 0 root curve: per (ratio, core_kappa) slice with a bracketed root
    // in core_mu, the root and |c3| there
    struct RootCurvePoint { double ratio, core_kappa, core_mu_root, abs_c3; };
    std::vector<RootCurvePoint> root_curve;
    double min_root_curve_c3;
};

inline std::array<SweepAxis, 3> default_shear_axes() {
    return {SweepAxis{"ratio", 0.3, 0.9, 20}, SweepAxis{"core_mu", 0.2, 5.0, 20},
            SweepAxis{"core_kappa", 0.2, 5.0, 20}};
}

/// Sweep of the shear-load far field over (r1/r2, core moduli) with a fixed
/// genuine coating (shell shear modulus differs from the matrix, so no choice
/// of core makes the composite trivially homogeneous in shear); records |c1|,
/// |c3| per grid point and the min-max statistic, plus |c3| along the c1 = 0
/// root curve.
inline ShearSweepResult shear_infeasibility_sweep(
    const std::array<SweepAxis, 3>& axes = default_shear_axes(), double r2 = 2.0, int order = 8) {
    for (const auto& a : axes)
        if (a.count < 2 || !(a.lo < a.hi) || !(a.lo > 0.0))
            throw ValidationError("InvalidSweepGrid", "axis " + a.name + " out of range");
    ElasticPhase shell(2.0, 1.5), matrix(1.0, 1.0);
    UniformLoad load = UniformLoad::shear();
    auto far_at = [&](double ratio, double mu_c, double kappa_c) {
        CoatedDisks geom(ratio * r2, r2);
        LaurentPotentials pots = solve_coated_disk_elasticity(
            geom, ElasticPhase(mu_c, kappa_c), shell, matrix, load, order);
        return far_field(pots, 2.0 * r2, 4.0 * r2);
    };
    ShearSweepResult res;
    res.min_max_c = 1e300;
    for (int i = 0; i < axes[0].count; ++i)
        for (int j = 0; j < axes[1].count; ++j)
            for (int k = 0; k < axes[2].count; ++k) {
                double f = axes[0].at(i), mc = axes[1].at(j), kc = axes[2].at(k);
                FarFieldReport ff = far_at(f, mc, kc);
                ShearSweepRow row{f, mc, kc, std::abs(ff.c1), std::abs(ff.c3)};
                res.rows.push_back(row);
                double mx = std::max(row.abs_c1, row.abs_c3);
                if (mx < res.min_max_c) {
                    res.min_max_c = mx;
                    res.argmin = row;
                }
            }
    // c1 = 0 root curve per (ratio, kappa_c) slice, free mu_c
    res.min_root_curve_c3 = 1e300;
    RootFindOptions opt;
    opt.scan_samples = 32;
    for (int i = 0; i < axes[0].count; i += 4)
        for (int k = 0; k < axes[2].count; k += 4) {
            double f = axes[0].at(i), kc = axes[2].at(k);
            try {
                RootFindResult rr = find_bracketed_root(
                    [&](double mc) { return signed_c1(far_at(f, mc, kc), load); }, axes[1].lo,
                    axes[1].hi, opt);
                double c3 = std::abs(far_at(f, rr.root, kc).c3);
                res.root_curve.push_back({f, kc, rr.root, c3});
                res.min_root_curve_c3 = std::min(res.min_root_curve_c3, c3);
            } catch (const NumericalError&) {
                // no c1 root in this slice; nothing to record
            }
        }
    return res;
}

// ---------------------------------------------------------------------------
// Rigidity experiment: perturb the shapes, re-optimize one material
// parameter, and record the achievable gap floor.
// ---------------------------------------------------------------------------

enum class ShapeFamily { OuterCos2, OuterCos3, CoreOffset };

inline const char* family_name(ShapeFamily f) {
    switch (f) {
        case ShapeFamily::OuterCos2: return "outer-cos2";
        case ShapeFamily::OuterCos3: return "outer-cos3";
        default: return "core-offset";
    }
}

struct RigidityRow {
    double eps;
    double kappa_m_root;
    double floor; // neutrality gap at the re-optimized parameter
};

struct RigidityResult {
    ShapeFamily family;
    std::vector<RigidityRow> rows;
};

/// For each perturbation size, root-find the matrix bulk modulus on the
/// signed leading multipole of the BEM solution, then report the residual
/// gap: zero perturbation recovers neutrality, nonzero perturbation leaves a
/// strictly positive floor.
inline RigidityResult rigidity_experiment(ShapeFamily family,
                                          const std::vector<double>& eps_values = {0.0, 0.01, 0.05},
                                          const DiskTemplate& tmpl = {}, int nodes = 96,
                                          double bracket_lo = 1.0, double bracket_hi = 2.6) {
    double r1 = tmpl.geometry.r1, r2 = tmpl.geometry.r2;
    double R = 2.0 * r2 * (1.0 + 0.1);
    UniformLoad load = UniformLoad::bulk();
    RootFindOptions opt;
    opt.scan_samples = 8;
    RigidityResult res{family, {}};
    for (double eps : eps_values) {
        SmoothCurve inner = (family == ShapeFamily::CoreOffset)
                                ? SmoothCurve::circle(r1, Vec2(eps * r1, 0.0))
                                : SmoothCurve::circle(r1);
        SmoothCurve outer = SmoothCurve::circle(r2);
        if (family == ShapeFamily::OuterCos2) outer = SmoothCurve::perturbed_circle(r2, eps, 2);
        if (family == ShapeFamily::OuterCos3) outer = SmoothCurve::perturbed_circle(r2, eps, 3);
        auto gap_report = [&](double kappa_m) {
            BemScenario sc{inner,      outer, tmpl.core, tmpl.shell,
                           ElasticPhase(tmpl.matrix.mu, kappa_m), load, nodes};
            return neutrality_gap(solve_transmission(sc), R);
        };
        RootFindResult rr = find_bracketed_root(
            [&](double km) { return signed_c1(gap_report(km), load); }, bracket_lo, bracket_hi,
            opt);
        res.rows.push_back({eps, rr.root, gap_report(rr.root).gap});
    }
    return res;
}

// ---------------------------------------------------------------------------
// Cauchy-transform machinery (Lemma 3.1 diagnostics).
// ---------------------------------------------------------------------------

/// Plain trapezoidal Cauchy transform C[g](w) = (1/2pi i) int g(z)/(z-w) dz.
/// Requires w at least five node spacings away from the curve.
inline cplx cauchy_transform(const DiscretizedCurve& dc, const std::vector<cplx>& g, cplx w) {
    if (int(g.size()) != dc.N)
        throw ValidationError("SizeMismatch", "boundary data size must match node count");
    double spacing = 0.0, dist = 1e300;
    for (int j = 0; j < dc.N; ++j) {
        spacing = std::max(spacing, dc.h * dc.speed[j]);
        dist = std::min(dist, std::abs(dc.z[j] - w));
    }
    if (dist < 5.0 * spacing)
        throw ValidationError("TooCloseToCurve", "point within five node spacings of the curve");
    cplx acc = 0.0;
    for (int j = 0; j < dc.N; ++j) acc += g[j] * dc.zp[j] / (dc.z[j] - w);
    return acc * dc.h / (2.0 * M_PI * cplx(0.0, 1.0));
}

namespace detail {

/// Spectral (trigonometric) derivative of periodic samples; direct DFT.
inline std::vector<cplx> spectral_derivative(const std::vector<cplx>& f) {
    const int N = int(f.size());
    std::vector<cplx> c(N, 0.0);
    for (int k = 0; k < N; ++k) {
        for (int j = 0; j < N; ++j)
            c[k] += f[j] * std::exp(cplx(0.0, -2.0 * M_PI * k * j / N));
        c[k] /= double(N);
    }
    std::vector<cplx> d(N, 0.0);
    for (int j = 0; j < N; ++j) {
        for (int k = 0; k < N; ++k) {
            int kk = (k <= N / 2) ? k : k - N; // Nyquist derivative dropped
            if (kk == N / 2) continue;
            d[j] += c[k] * cplx(0.0, double(kk)) * std::exp(cplx(0.0, 2.0 * M_PI * k * j / N));
        }
    }
    return d;
}

} // namespace detail

/// One-sided limits of the Cauchy transform at the nodes.  Near-curve values
/// are computed with a second-order Taylor singularity subtraction (the
/// subtracted polynomial has a closed-form transform) and extrapolated to the
/// curve by degree-5 Richardson over normal offsets {1..6} h |z'|.
struct CauchyLimits {
    const DiscretizedCurve& dc;
    std::vector<cplx> g, dg_dz, d2g_dz2;

    CauchyLimits(const DiscretizedCurve& curve, std::vector<cplx> data)
        : dc(curve), g(std::move(data)) {
        if (int(g.size()) != dc.N)
            throw ValidationError("SizeMismatch", "boundary data size must match node count");
        std::vector<cplx> gt = detail::spectral_derivative(g);
        dg_dz.resize(dc.N);
        for (int j = 0; j < dc.N; ++j) dg_dz[j] = gt[j] / dc.zp[j];
        std::vector<cplx> gzt = detail::spectral_derivative(dg_dz);
        d2g_dz2.resize(dc.N);
        for (int j = 0; j < dc.N; ++j) d2g_dz2[j] = gzt[j] / dc.zp[j];
    }

    cplx limit(int node, Side side) const {
        cplx zs = dc.z[node], gs = g[node], g1 = dg_dz[node], g2 = d2g_dz2[node];
        cplx n = dc.nrm[node];
        double step = dc.h * dc.speed[node];
        auto at_offset = [&](double d) {
            cplx w = (side == Side::Interior) ? zs - d * n : zs + d * n;
            cplx acc = 0.0;
            for (int j = 0; j < dc.N; ++j) {
                cplx dz = dc.z[j] - zs;
                cplx p = gs + g1 * dz + 0.5 * g2 * dz * dz;
                acc += (g[j] - p) * dc.zp[j] / (dc.z[j] - w);
            }
            acc *= dc.h / (2.0 * M_PI * cplx(0.0, 1.0));
            if (side == Side::Interior) {
                cplx dw = w - zs;
                acc += gs + g1 * dw + 0.5 * g2 * dw * dw; // C[p](w) = p(w) inside
            }
            return acc;
        };
        // Richardson to offset 0 through nodes m = 1..6 (Lagrange at 0)
        cplx val = 0.0;
        for (int m = 1; m <= 6; ++m) {
            double L = 1.0;
            for (int j = 1; j <= 6; ++j)
                if (j != m) L *= double(-j) / double(m - j);
            val += L * at_offset(m * step);
        }
        return val;
    }
};

struct PlemeljReport {
    std::vector<cplx> interior, exterior;
    double max_jump_residual; // max over nodes of |C- - C+ - g|
};

inline PlemeljReport plemelj_jump_check(const DiscretizedCurve& dc, const std::vector<cplx>& g) {
    CauchyLimits cl(dc, g);
    PlemeljReport rep;
    rep.interior.resize(dc.N);
    rep.exterior.resize(dc.N);
    rep.max_jump_residual = 0.0;
    for (int i = 0; i < dc.N; ++i) {
        rep.interior[i] = cl.limit(i, Side::Interior);
        rep.exterior[i] = cl.limit(i, Side::Exterior);
        rep.max_jump_residual = std::max(
            rep.max_jump_residual, std::abs(rep.interior[i] - rep.exterior[i] - g[i]));
    }
    return rep;
}

/// Does g admit an analytic extension into the interior?  Tests the moment
/// conditions int g(z) f'(z) dz = 0 for f' = z^n and f' = 1/(z-w) at exterior
/// probe points; the witness is the interior Cauchy transform.
struct ExtensionTestResult {
    bool analytic;
    double max_probe; // largest normalized probe integral
    std::vector<std::pair<cplx, cplx>> witness; // (interior point, C[g] value)
};

inline ExtensionTestResult analytic_extension_test(const DiscretizedCurve& dc,
                                                   const std::vector<cplx>& g, int probes = 8,
                                                   double tol = 1e-7) {
    if (int(g.size()) != dc.N)
        throw ValidationError("SizeMismatch", "boundary data size must match node count");
    double rmax = 0.0, gmax = 0.0, len = 0.0;
    cplx centroid = 0.0;
    for (int j = 0; j < dc.N; ++j) {
        rmax = std::max(rmax, std::abs(dc.z[j]));
        gmax = std::max(gmax, std::abs(g[j]));
        len += dc.speed[j] * dc.h;
        centroid += dc.z[j];
    }
    centroid /= double(dc.N);
    double scale = len * (gmax + 1e-300);
    double worst = 0.0;
    auto contour = [&](const std::function<cplx(cplx)>& fp) {
        cplx acc = 0.0;
        for (int j = 0; j < dc.N; ++j) acc += g[j] * fp(dc.z[j]) * dc.zp[j];
        return acc * dc.h;
    };
    for (int n = 0; n < probes; ++n) {
        cplx I = contour([&](cplx z) { return std::pow(z, n); });
        worst = std::max(worst, std::abs(I) / (scale * std::pow(rmax, n)));
    }
    for (int m = 0; m < probes; ++m) {
        cplx w = centroid + 2.0 * rmax * std::exp(cplx(0.0, 2.0 * M_PI * m / probes));
        cplx I = contour([&](cplx z) { return 1.0 / (z - w); });
        worst = std::max(worst, std::abs(I) / (scale / rmax));
    }
    ExtensionTestResult res;
    res.analytic = worst < tol;
    res.max_probe = worst;
    double rin = 1e300;
    for (int j = 0; j < dc.N; ++j) rin = std::min(rin, std::abs(dc.z[j] - centroid));
    for (int m = 0; m < probes; ++m) {
        cplx w = centroid + 0.4 * rin * std::exp(cplx(0.0, 2.0 * M_PI * m / probes));
        res.witness.push_back({w, cauchy_transform(dc, g, w)});
    }
    return res;
}

} // namespace neutral

#endif
