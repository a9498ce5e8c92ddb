#ifndef NEUTRAL_ELASTICITY_DISKS_HPP
#define NEUTRAL_ELASTICITY_DISKS_HPP

#include <algorithm>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "neutral/core_model.hpp"
#include "neutral/far_field.hpp"

namespace neutral {

enum class Region { Core, Shell, Matrix };

/// Kolosov-Muskhelishvili potentials, truncated Laurent series per region:
/// phi(z) = sum_n a_n z^n, psi(z) = sum_n b_n z^n.  Core series are Taylor
/// (n >= 0), matrix series decay apart from the load-pinned linear terms.
struct LaurentPotentials {
    struct RegionPotentials {
        std::map<int, cplx> phi, psi;

        cplx phi_at(cplx z) const { return eval(phi, z, 0); }
        cplx dphi_at(cplx z) const { return eval(phi, z, 1); }
        cplx ddphi_at(cplx z) const { return eval(phi, z, 2); }
        cplx psi_at(cplx z) const { return eval(psi, z, 0); }
        cplx dpsi_at(cplx z) const { return eval(psi, z, 1); }

    private:
        static cplx eval(const std::map<int, cplx>& s, cplx z, int deriv) {
            cplx acc = 0.0;
            for (const auto& [n, c] : s) {
                double fac = 1.0;
                for (int d = 0; d < deriv; ++d) fac *= double(n - d);
                if (fac == 0.0) continue;
                acc += c * fac * std::pow(z, n - deriv);
            }
            return acc;
        }
    };

    RegionPotentials core, shell, matrix;
    CoatedDisks geometry{1.0, 2.0};
    ElasticPhase phase_core{1.0, 1.0}, phase_shell{1.0, 1.0}, phase_matrix{1.0, 1.0};
    UniformLoad load{Mat2::Identity()};
    int truncation_order = 8;

    const RegionPotentials& in(Region r) const {
        switch (r) {
            case Region::Core: return core;
            case Region::Shell: return shell;
            default: return matrix;
        }
    }
    const ElasticPhase& phase(Region r) const {
        switch (r) {
            case Region::Core: return phase_core;
            case Region::Shell: return phase_shell;
            default: return phase_matrix;
        }
    }
    Region region_of(cplx z, double tol = 1e-12) const {
        double r = std::abs(z);
        if (r <= geometry.r1 * (1.0 + tol)) return Region::Core;
        if (r <= geometry.r2 * (1.0 + tol)) return Region::Shell;
        return Region::Matrix;
    }
    void require_in(Region reg, cplx z) const {
        double r = std::abs(z), tol = 1e-10;
        bool ok = true;
        if (reg == Region::Core) ok = r <= geometry.r1 * (1.0 + tol);
        else if (reg == Region::Shell)
            ok = r >= geometry.r1 * (1.0 - tol) && r <= geometry.r2 * (1.0 + tol);
        else ok = r >= geometry.r2 * (1.0 - tol);
        if (!ok) throw ValidationError("PointOutsideRegion", "evaluation point not in region");
    }
};

/// U(z) = u1 + i u2 = (1/2mu)(k phi(z) - z conj(phi'(z)) - conj(psi(z))).
inline cplx displacement(const LaurentPotentials& pots, Region reg, cplx z) {
    pots.require_in(reg, z);
    const auto& p = pots.in(reg);
    const auto& ph = pots.phase(reg);
    double k = kolosov_constant(ph);
    return (k * p.phi_at(z) - z * std::conj(p.dphi_at(z)) - std::conj(p.psi_at(z))) / (2.0 * ph.mu);
}

/// DU = (phi' + conj(phi')) dz + (z conj(phi'') + conj(psi')) dconj(z),
/// evaluated on the direction dz (dconj(z) = conj(dz)).
inline cplx traction_differential(const LaurentPotentials& pots, Region reg, cplx z, cplx dz) {
    pots.require_in(reg, z);
    const auto& p = pots.in(reg);
    cplx dphi = p.dphi_at(z);
    return (dphi + std::conj(dphi)) * dz +
           (z * std::conj(p.ddphi_at(z)) + std::conj(p.dpsi_at(z))) * std::conj(dz);
}

namespace detail {

// One angular block of the concentric-disk transmission system.  The
// coefficient group of block m couples phi indices {m, 2-m} and psi indices
// {-m, m-2}; continuity of U and of T = phi + z conj(phi') + conj(psi) in the
// circle Fourier modes {m, 2-m} closes the block.  Equations are real-linear
// (conjugated unknowns appear), so each complex unknown is split into two
// reals.  The mode-0 block carries one free additive constant of T per
// interface (traction continuity constrains only dT).
struct BlockUnknown {
    int region;      // 0 core, 1 shell, 2 matrix; 3 = interface T constant
    char kind;       // 'a' phi, 'b' psi, 'c' constant (index 0 = dD, 1 = dOm)
    int index;
    bool operator==(const BlockUnknown& o) const {
        return region == o.region && kind == o.kind && index == o.index;
    }
};

struct BlockSolver {
    const ElasticPhase* phases[3];
    double r1, r2;
    cplx pin_a1_m, pin_b1_m; // load-pinned linear matrix coefficients

    bool allow(int region, char kind, int idx) const {
        if (region == 0) return idx >= 0 && !(kind == 'a' && idx == 0); // phi_c const pinned
        if (region == 1) return !(kind == 'b' && idx == 0);             // psi_s const pinned
        return idx <= -1;                                               // matrix decay
    }

    // mode-l coefficient of U (quantity 'U') or T (quantity 'T') at radius r
    // in the given region, as a real-linear functional of the block unknowns.
    // Returns the pinned-load contribution; accumulates (lin, con) pairs.
    cplx mode_functional(int region, int l, double r, char quantity,
                         std::map<std::pair<char, int>, std::pair<cplx, cplx>>& out) const {
        const ElasticPhase& ph = *phases[region];
        double k = kolosov_constant(ph);
        cplx pinned = 0.0;
        auto add = [&](char kind, int idx, cplx lin, cplx con) {
            if (region == 2 && idx == 1) {
                cplx v = (kind == 'a') ? pin_a1_m : pin_b1_m;
                pinned += lin * v + con * std::conj(v);
                return;
            }
            if (!allow(region, kind, idx)) return;
            auto& e = out[{kind, idx}];
            e.first += lin;
            e.second += con;
        };
        double rl = std::pow(r, l), r2l = std::pow(r, 2 - l), rml = std::pow(r, -l);
        if (quantity == 'U') {
            double s = 1.0 / (2.0 * ph.mu);
            add('a', l, k * s * rl, 0.0);
            add('a', 2 - l, 0.0, -double(2 - l) * s * r2l);
            add('b', -l, 0.0, -s * rml);
        } else {
            add('a', l, rl, 0.0);
            add('a', 2 - l, 0.0, double(2 - l) * r2l);
            add('b', -l, 0.0, rml);
        }
        return pinned;
    }

    // Solve block m; writes solved coefficients into the region maps.
    void solve(int m, LaurentPotentials& pots) const {
        int n2 = 2 - m;
        bool has0 = (m == 0 || n2 == 0 || m == 2);
        std::vector<BlockUnknown> unk;
        for (int region = 0; region < 3; ++region) {
            for (auto [kind, idx] : {std::pair<char, int>{'a', m}, {'a', n2}, {'b', -m}, {'b', m - 2}}) {
                if (region == 2 && idx == 1) continue; // pinned by load
                BlockUnknown u{region, kind, idx};
                if (allow(region, kind, idx) &&
                    std::find(unk.begin(), unk.end(), u) == unk.end())
                    unk.push_back(u);
            }
        }
        if (has0) {
            unk.push_back({3, 'c', 0});
            unk.push_back({3, 'c', 1});
        }
        std::vector<int> modes;
        modes.push_back(m);
        if (n2 != m) modes.push_back(n2);
        struct Eq { double r; int regA, regB, l; char quantity; int iface; };
        std::vector<Eq> eqs;
        for (auto [r, ra, rb, iface] : {std::tuple<double, int, int, int>{r1, 0, 1, 0}, {r2, 1, 2, 1}})
            for (int l : modes)
                for (char quantity : {'U', 'T'})
                    eqs.push_back({r, ra, rb, l, quantity, iface});
        const int nc = int(unk.size());
        if (int(eqs.size()) != nc)
            throw NumericalError("SingularBlock", "block " + std::to_string(m) + " not square");

        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * nc, 2 * nc);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * nc);
        for (int ei = 0; ei < nc; ++ei) {
            const Eq& e = eqs[ei];
            std::map<std::pair<char, int>, std::pair<cplx, cplx>> cA, cB;
            cplx pA = mode_functional(e.regA, e.l, e.r, e.quantity, cA);
            cplx pB = mode_functional(e.regB, e.l, e.r, e.quantity, cB);
            cplx rv = pB - pA;
            rhs(2 * ei) = rv.real();
            rhs(2 * ei + 1) = rv.imag();
            auto put = [&](int region, const std::pair<char, int>& key, cplx lin, cplx con) {
                BlockUnknown u{region, key.first, key.second};
                auto it = std::find(unk.begin(), unk.end(), u);
                if (it == unk.end()) return;
                int ji = int(it - unk.begin());
                // lin*x + con*conj(x), x = xr + i xi
                A(2 * ei, 2 * ji) += lin.real() + con.real();
                A(2 * ei, 2 * ji + 1) += -lin.imag() + con.imag();
                A(2 * ei + 1, 2 * ji) += lin.imag() + con.imag();
                A(2 * ei + 1, 2 * ji + 1) += lin.real() - con.real();
            };
            for (const auto& [key, lc] : cA) put(e.regA, key, lc.first, lc.second);
            for (const auto& [key, lc] : cB) put(e.regB, key, -lc.first, -lc.second);
            if (e.quantity == 'T' && e.l == 0 && has0)
                put(3, {'c', e.iface}, cplx(-1.0, 0.0), 0.0);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (!lu.isInvertible())
            throw NumericalError("SingularBlock",
                                 "degenerate phase combination in harmonic block " + std::to_string(m));
        Eigen::VectorXd x = lu.solve(rhs);
        for (int j = 0; j < nc; ++j) {
            const BlockUnknown& u = unk[j];
            if (u.region > 2) continue;
            cplx v(x(2 * j), x(2 * j + 1));
            auto& rp = (u.region == 0) ? pots.core : (u.region == 1) ? pots.shell : pots.matrix;
            auto& series = (u.kind == 'a') ? rp.phi : rp.psi;
            series[u.index] += v;
        }
    }
};

} // namespace detail

/// Exact block-diagonal solve of the coated-disk transmission problem.
/// Assembly is symbolic in the coefficients; N only bounds which harmonic
/// blocks exist.  A bulk load excites only block 1 (coefficients n in {1,-1}),
/// a shear load only block 3 (n in {-1, 3} for phi, {1, -3} for psi); all
/// other blocks solve to zero and their coefficients are dropped.
inline LaurentPotentials solve_coated_disk_elasticity(const CoatedDisks& geometry,
                                                      const ElasticPhase& core,
                                                      const ElasticPhase& shell,
                                                      const ElasticPhase& matrix,
                                                      const UniformLoad& load, int order = 8) {
    if (order < 3) throw ValidationError("InvalidOrder", "truncation order must be >= 3");
    if (geometry.center.norm() != 0.0)
        throw ValidationError("OffCenterGeometry",
                              "series solver requires concentric disks at the origin");
    LaurentPotentials pots;
    pots.geometry = geometry;
    pots.phase_core = core;
    pots.phase_shell = shell;
    pots.phase_matrix = matrix;
    pots.load = load;
    pots.truncation_order = order;
    pots.matrix.phi[1] = matrix.kappa * load.p();
    pots.matrix.psi[1] = -2.0 * matrix.mu * std::conj(load.q());
    detail::BlockSolver bs{{&core, &shell, &matrix}, geometry.r1, geometry.r2,
                           pots.matrix.phi[1], pots.matrix.psi[1]};
    for (int m = 1; m <= order; ++m) bs.solve(m, pots);
    // prune numerically-zero coefficients of unexcited blocks
    auto prune = [](std::map<int, cplx>& s) {
        for (auto it = s.begin(); it != s.end();)
            it = (std::abs(it->second) < 1e-13) ? s.erase(it) : std::next(it);
    };
    for (auto* rp : {&pots.core, &pots.shell, &pots.matrix}) {
        prune(rp->phi);
        prune(rp->psi);
    }
    return pots;
}

inline FarFieldReport far_field(const LaurentPotentials& pots, double radius_a, double radius_b) {
    const auto& g = pots.geometry;
    if (!(radius_a > g.r2 && radius_b > g.r2))
        throw ValidationError("InvalidRadius", "measurement radii must exceed r2");
    const ElasticPhase& pm = pots.phase_matrix;
    double km = kolosov_constant(pm);

    auto coeff = [&](const std::map<int, cplx>& s, int n) {
        auto it = s.find(n);
        return it == s.end() ? cplx(0.0) : it->second;
    };
    cplx a1 = coeff(pots.matrix.phi, -1), a3 = coeff(pots.matrix.phi, -3);
    cplx b1 = coeff(pots.matrix.psi, -1), b3 = coeff(pots.matrix.psi, -3);
    cplx c1_read = (km * a1 - std::conj(b1)) / (2.0 * pm.mu);
    cplx c3_read = (km * a3 - std::conj(b3)) / (2.0 * pm.mu);

    FarFieldReport fit = far_field_from_samples(
        [&](cplx z) { return displacement(pots, Region::Matrix, z) - pots.load.h(z); }, pm,
        radius_a, radius_b);

    double scale = 1.0 + std::abs(c1_read) + std::abs(c3_read);
    if (std::abs(c1_read - fit.c1) > 1e-8 * scale || std::abs(c3_read - fit.c3) > 1e-8 * scale)
        throw NumericalError("FarFieldInconsistent",
                             "coefficient read and circle fit disagree beyond 1e-8");
    return {c1_read, c3_read, fit.gap};
}

/// Pointwise residuals of the shell properties at a bulk-neutral solution:
/// div u = alpha, grad u symmetric, harmonic u, phi_s' = beta.
struct ShellPropertyReport {
    double max_div_residual;
    double max_antisym;
    double max_laplacian;
    double max_dphi_residual;
};

inline ShellPropertyReport verify_shell_properties(const LaurentPotentials& pots,
                                                   const NeutralityConstants& constants,
                                                   int sample_points = 200,
                                                   unsigned seed = 12345) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ur(pots.geometry.r1 * 1.02, pots.geometry.r2 * 0.98);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * M_PI);
    const ElasticPhase& ps = pots.phase_shell;
    double ks = kolosov_constant(ps);
    ShellPropertyReport rep{0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < sample_points; ++i) {
        cplx z = std::polar(ur(rng), ut(rng));
        cplx dphi = pots.shell.dphi_at(z);
        cplx dU_dz = (ks * dphi - std::conj(dphi)) / (2.0 * ps.mu);
        double div_u = 2.0 * dU_dz.real();
        double antisym = 2.0 * dU_dz.imag(); // curl component; |antisym part| of grad u
        double lap = 2.0 * std::abs(pots.shell.ddphi_at(z)) / ps.mu;
        rep.max_div_residual = std::max(rep.max_div_residual, std::abs(div_u - constants.alpha));
        rep.max_antisym = std::max(rep.max_antisym, std::abs(antisym));
        rep.max_laplacian = std::max(rep.max_laplacian, lap);
        rep.max_dphi_residual = std::max(rep.max_dphi_residual, std::abs(dphi - constants.beta));
    }
    return rep;
}

/// Fit u = a x + b over random core points; also check that phi_c' is
/// constant and psi_c constant at the coefficient level.
struct CoreLinearityReport {
    double a;
    cplx b;
    double max_fit_residual;
    double max_phi_tail;  // |a_n|, n >= 2
    double max_psi_tail;  // |b_n|, n >= 1
};

inline CoreLinearityReport verify_core_linearity(const LaurentPotentials& pots,
                                                 int sample_points = 200,
                                                 unsigned seed = 54321) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ur(0.0, pots.geometry.r1 * 0.98);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * M_PI);
    std::vector<cplx> zs(sample_points), us(sample_points);
    for (int i = 0; i < sample_points; ++i) {
        zs[i] = std::polar(ur(rng), ut(rng));
        us[i] = displacement(pots, Region::Core, zs[i]);
    }
    // least squares for u ~ a z + b with a real, b complex
    Eigen::MatrixXd M(2 * sample_points, 3);
    Eigen::VectorXd rhs(2 * sample_points);
    for (int i = 0; i < sample_points; ++i) {
        M(2 * i, 0) = zs[i].real(); M(2 * i, 1) = 1.0; M(2 * i, 2) = 0.0;
        M(2 * i + 1, 0) = zs[i].imag(); M(2 * i + 1, 1) = 0.0; M(2 * i + 1, 2) = 1.0;
        rhs(2 * i) = us[i].real();
        rhs(2 * i + 1) = us[i].imag();
    }
    Eigen::Vector3d sol = M.colPivHouseholderQr().solve(rhs);
    CoreLinearityReport rep{sol(0), cplx(sol(1), sol(2)), 0.0, 0.0, 0.0};
    for (int i = 0; i < sample_points; ++i)
        rep.max_fit_residual =
            std::max(rep.max_fit_residual, std::abs(us[i] - (rep.a * zs[i] + rep.b)));
    for (const auto& [n, c] : pots.core.phi)
        if (n >= 2) rep.max_phi_tail = std::max(rep.max_phi_tail, std::abs(c));
    for (const auto& [n, c] : pots.core.psi)
        if (n >= 1) rep.max_psi_tail = std::max(rep.max_psi_tail, std::abs(c));
    return rep;
}

} // namespace neutral

#endif
