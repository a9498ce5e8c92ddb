#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "neutral/neutrality_lab.hpp"

using namespace neutral;

TEST_CASE("bracketed root finding") {
    RootFindResult r = find_bracketed_root([](double x) { return std::cos(x); }, 0.0, 3.0);
    CHECK(r.root == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    CHECK(std::abs(r.f_root) < 1e-10);
    CHECK(r.scan.x.size() == 65);

    // constant sign: error carries the scan
    try {
        find_bracketed_root([](double x) { return x * x + 1.0; }, 0.0, 1.0);
        FAIL("expected NoSignChangeError");
    } catch (const NoSignChangeError& e) {
        CHECK(e.scan.x.size() == 65);
        CHECK(e.scan.fx.front() == doctest::Approx(1.0));
    }

    CHECK_THROWS_AS(find_bracketed_root([](double) { return 0.0; }, 0.0, 1.0), NumericalError);
    CHECK_THROWS_AS(find_bracketed_root([](double x) { return x; }, 1.0, 0.0), ValidationError);
}

TEST_CASE("neutral matrix bulk modulus for the documented template") {
    FindNeutralResult r = find_neutral_bulk(DiskTemplate{}, FreeParameter::MatrixKappa, 1.0, 2.6);
    CHECK(r.root == doctest::Approx(5.0 / 3.0).epsilon(1e-10));
    const NeutralRootCertificate& c = r.certificate;
    CHECK(std::abs(c.objective) < 1e-11);
    CHECK(std::abs(c.far.c1) < 1e-9);
    CHECK(std::abs(c.far.c3) < 1e-9);
    CHECK(c.far.gap < 1e-9);
    CHECK(c.shell.max_div_residual < 1e-9);
    CHECK(c.shell.max_antisym < 1e-9);
    CHECK(c.shell.max_laplacian < 1e-9);
    CHECK(c.shell.max_dphi_residual < 1e-9);
    CHECK(c.core.max_fit_residual < 1e-9);
    CHECK(c.hypotheses.all());
    CHECK(c.k_star == doctest::Approx(23.0 / 7.0).epsilon(1e-9));
    CHECK(c.alpha == doctest::Approx(16.0 / 9.0).epsilon(1e-9));
}

TEST_CASE("bulk response is insensitive to shear moduli when bulk moduli match") {
    // with equal kappa everywhere a bulk load produces u = x exactly, whatever
    // the shear moduli; the objective is identically zero over the bracket
    DiskTemplate t;
    t.core = ElasticPhase(2.0, 2.0);
    t.shell = ElasticPhase(1.0, 2.0);
    t.matrix = ElasticPhase(3.0, 2.0);
    try {
        find_neutral_bulk(t, FreeParameter::CoreMu, 0.5, 4.0);
        FAIL("expected DegenerateObjective");
    } catch (const NumericalError& e) {
        CHECK(e.code() == "DegenerateObjective");
    }
}

TEST_CASE("thin-shell limit: neutral matrix approaches the core") {
    // as r1 -> r2 the coating disappears and the neutral matrix bulk modulus
    // must approach the core value kappa_c = 1
    double prev = 2.0;
    for (double frac : {0.9, 0.99, 0.999}) {
        DiskTemplate t;
        t.geometry = CoatedDisks(frac * 2.0, 2.0);
        double root = find_neutral_bulk(t, FreeParameter::MatrixKappa, 0.5, 2.6).root;
        CHECK(root < prev);
        CHECK(root > 1.0);
        prev = root;
    }
    CHECK(prev < 1.01);
}

TEST_CASE("shear sweep never reaches neutrality") {
    std::array<SweepAxis, 3> axes{SweepAxis{"ratio", 0.3, 0.9, 5},
                                  SweepAxis{"core_mu", 0.2, 5.0, 5},
                                  SweepAxis{"core_kappa", 0.2, 5.0, 5}};
    ShearSweepResult res = shear_infeasibility_sweep(axes);
    CHECK(res.rows.size() == 125);
    // the coarse grid contains the fine grid's minimizer region, so its
    // min-max statistic is bounded below by the fine-grid floor
    CHECK(res.min_max_c > 0.3);
    for (const auto& p : res.root_curve) {
        CHECK(p.abs_c3 > 0.1);
        CHECK(std::abs(p.core_mu_root - 0.2) > 1e-6); // interior root, not an endpoint
    }
    CHECK(res.min_root_curve_c3 > 0.1);

    axes[0].lo = -0.1;
    CHECK_THROWS_AS(shear_infeasibility_sweep(axes), ValidationError);
}

TEST_CASE("rigidity: perturbing the outer shape leaves a positive gap floor") {
    RigidityResult r = rigidity_experiment(ShapeFamily::OuterCos3, {0.0, 0.03}, DiskTemplate{}, 64);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].kappa_m_root == doctest::Approx(5.0 / 3.0).epsilon(1e-6));
    CHECK(r.rows[0].floor < 1e-10);
    CHECK(r.rows[1].floor > 10.0 * std::max(r.rows[0].floor, 1e-12));
}

TEST_CASE("Cauchy transform on the unit circle") {
    DiscretizedCurve dc(SmoothCurve::circle(1.0), 128);
    std::vector<cplx> zsq(dc.N), zbar(dc.N);
    for (int j = 0; j < dc.N; ++j) {
        zsq[j] = dc.z[j] * dc.z[j];
        zbar[j] = std::conj(dc.z[j]);
    }
    cplx wi(0.3, 0.2), wo(3.0, -1.0);
    CHECK(std::abs(cauchy_transform(dc, zsq, wi) - wi * wi) < 1e-12);
    CHECK(std::abs(cauchy_transform(dc, zsq, wo)) < 1e-12);
    CHECK(std::abs(cauchy_transform(dc, zbar, wi)) < 1e-12);
    CHECK(std::abs(cauchy_transform(dc, zbar, wo) + 1.0 / wo) < 1e-12);
    CHECK_THROWS_AS(cauchy_transform(dc, zsq, cplx(1.01, 0.0)), ValidationError);
}

TEST_CASE("Plemelj jump relation at the nodes") {
    auto residual = [](int N) {
        DiscretizedCurve dc(SmoothCurve::perturbed_circle(1.0, 0.08, 2), N);
        std::vector<cplx> g(N);
        for (int j = 0; j < N; ++j) g[j] = std::conj(dc.z[j]);
        return plemelj_jump_check(dc, g).max_jump_residual;
    };
    double r64 = residual(64), r128 = residual(128), r256 = residual(256);
    CHECK(r256 < 1e-6);
    CHECK(r128 < r64);
    CHECK(r256 < r128);

    // analytic data: interior limit equals the data, exterior limit vanishes
    DiscretizedCurve dc(SmoothCurve::circle(1.0), 128);
    std::vector<cplx> g(dc.N);
    for (int j = 0; j < dc.N; ++j) g[j] = dc.z[j] * dc.z[j];
    PlemeljReport rep = plemelj_jump_check(dc, g);
    CHECK(rep.max_jump_residual < 1e-8);
    for (int j = 0; j < dc.N; j += 16) {
        CHECK(std::abs(rep.interior[j] - g[j]) < 1e-8);
        CHECK(std::abs(rep.exterior[j]) < 1e-8);
    }
}

TEST_CASE("analytic extension test") {
    DiscretizedCurve dc(SmoothCurve::perturbed_circle(1.0, 0.05, 3), 256);
    std::vector<cplx> cube(dc.N), anti(dc.N);
    for (int j = 0; j < dc.N; ++j) {
        cube[j] = std::pow(dc.z[j], 3);
        anti[j] = std::conj(dc.z[j]);
    }
    ExtensionTestResult yes = analytic_extension_test(dc, cube);
    CHECK(yes.analytic);
    for (const auto& [w, val] : yes.witness) CHECK(std::abs(val - w * w * w) < 1e-8);
    ExtensionTestResult no = analytic_extension_test(dc, anti);
    CHECK_FALSE(no.analytic);
}

TEST_CASE("neutral-core boundary trace admits an analytic extension") {
    // eta_1 = z conj(phi_c') + conj(psi_c) on the core boundary: at a neutral
    // solution phi_c' and psi_c are constant, so eta_1 is a linear analytic
    // function of z
    FindNeutralResult fr = find_neutral_bulk(DiskTemplate{}, FreeParameter::MatrixKappa, 1.0, 2.6);
    DiskTemplate t = with_parameter(DiskTemplate{}, FreeParameter::MatrixKappa, fr.root);
    LaurentPotentials pots = solve_coated_disk_elasticity(t.geometry, t.core, t.shell, t.matrix,
                                                          UniformLoad::bulk(), t.order);
    DiscretizedCurve dc(SmoothCurve::circle(t.geometry.r1), 128);
    std::vector<cplx> eta(dc.N);
    for (int j = 0; j < dc.N; ++j)
        eta[j] = dc.z[j] * std::conj(pots.core.dphi_at(dc.z[j])) +
                 std::conj(pots.core.psi_at(dc.z[j]));
    CHECK(analytic_extension_test(dc, eta).analytic);
}
