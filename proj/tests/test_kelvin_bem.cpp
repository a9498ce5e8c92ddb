#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "neutral/elasticity_disks.hpp"
#include "neutral/kelvin_bem.hpp"

using namespace neutral;

namespace {

BemScenario neutral_disk_scenario(int nodes) {
    return {SmoothCurve::circle(1.0), SmoothCurve::circle(2.0),
            ElasticPhase(2.0, 1.0),   ElasticPhase(1.0, 2.0),
            ElasticPhase(1.0, 5.0 / 3.0), UniformLoad::bulk(), nodes};
}

} // namespace

TEST_CASE("Kelvin matrix values and symmetries") {
    KelvinKernel k{ElasticPhase(1.0, 1.0)}; // a1 = 3/4, a2 = 1/4
    Mat2 g = kelvin_matrix(k, Vec2(1.0, 0.0));
    CHECK(g(0, 0) == doctest::Approx(-1.0 / (8.0 * M_PI)).epsilon(1e-13));
    CHECK(g(1, 1) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(g(0, 1) == doctest::Approx(0.0).epsilon(1e-13));
    Mat2 g2 = kelvin_matrix(k, Vec2(0.0, 2.0));
    CHECK(g2(0, 0) == doctest::Approx(0.75 / (2.0 * M_PI) * std::log(2.0)).epsilon(1e-13));
    CHECK(g2(1, 1) ==
          doctest::Approx((0.75 * std::log(2.0) - 0.25) / (2.0 * M_PI)).epsilon(1e-13));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    KelvinKernel kk{ElasticPhase(1.7, 0.6)};
    for (int i = 0; i < 1000; ++i) {
        Vec2 x(u(rng), u(rng));
        if (x.norm() < 1e-3) continue;
        Mat2 a = kelvin_matrix(kk, x);
        CHECK((a - a.transpose()).norm() < 1e-14);                  // symmetric
        CHECK((a - kelvin_matrix(kk, Vec2(-x))).norm() < 1e-14);    // even
    }
    CHECK_THROWS_AS(kelvin_matrix(kk, Vec2::Zero()), ValidationError);
}

TEST_CASE("traction kernel matches finite-difference stress of the columns") {
    KelvinKernel k{ElasticPhase(1.3, 2.1)};
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double step = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        Vec2 x(u(rng), u(rng)), y(u(rng), u(rng));
        if ((x - y).norm() < 0.5) continue;
        double ang = u(rng);
        Vec2 n(std::cos(ang), std::sin(ang));
        Mat2 closed = traction_kernel(k, x, n, y);
        for (int col = 0; col < 2; ++col) {
            // grad of the col-th Kelvin column field by central differences
            Mat2 grad;
            for (int d = 0; d < 2; ++d) {
                Vec2 e = Vec2::Zero();
                e(d) = step;
                Vec2 up = kelvin_matrix(k, x + e - y).col(col);
                Vec2 dn = kelvin_matrix(k, x - e - y).col(col);
                grad.col(d) = (up - dn) / (2.0 * step);
            }
            Mat2 eps = 0.5 * (grad + grad.transpose());
            Vec2 t = apply_elasticity_tensor(k.phase, eps) * n;
            CHECK((t - closed.col(col)).norm() < 1e-8);
        }
    }
}

TEST_CASE("divergence identity of the Kelvin matrix") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-4.0, 4.0), m(0.2, 5.0);
    for (int i = 0; i < 100; ++i) {
        KelvinKernel k{ElasticPhase(m(rng), m(rng))};
        Vec2 x(u(rng), u(rng)), y(u(rng), u(rng));
        if ((x - y).norm() < 0.3) continue;
        CHECK(check_divergence_identity(k, x, y) < 1e-8);
    }
}

TEST_CASE("distributional double divergence over a disk") {
    KelvinKernel k{ElasticPhase(1.0, 2.0)};
    double expect = -1.0 / 3.0;
    for (Vec2 x : {Vec2(0.0, 0.0), Vec2(0.3, -0.2), Vec2(-0.41, 0.37)}) {
        DivDivCheck c = check_divdiv_identity(k, 1.0, x);
        CHECK(c.expected == doctest::Approx(expect));
        CHECK(std::abs(c.value - c.expected) < 1e-3);
    }
    for (Vec2 x : {Vec2(2.0, 0.0), Vec2(-1.3, 1.2)}) {
        DivDivCheck c = check_divdiv_identity(k, 1.0, x);
        CHECK(c.expected == 0.0);
        CHECK(std::abs(c.value) < 1e-3);
    }
    // rotational symmetry of the interior value
    double v1 = check_divdiv_identity(k, 1.0, Vec2(0.4, 0.0)).value;
    double v2 = check_divdiv_identity(k, 1.0, Vec2(0.0, 0.4)).value;
    CHECK(v1 == doctest::Approx(v2).epsilon(1e-6));
}

TEST_CASE("single layer basics") {
    KelvinKernel k{ElasticPhase(1.0, 1.5)};
    SmoothCurve circ = SmoothCurve::circle(1.0);
    DiscretizedCurve dc(circ, 64);
    CHECK(dc.signed_area() == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(dc.winding(Vec2(0.2, 0.1)) == 1);
    CHECK(dc.winding(Vec2(2.0, 0.0)) == 0);

    // zero density gives the zero field
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(2 * dc.N);
    CHECK(single_layer(k, dc, zero, Vec2(3.0, 0.0)).norm() == 0.0);

    // constant density: far away the layer looks like Gamma(x) times the
    // total (length-weighted) density
    Eigen::VectorXd ones = Eigen::VectorXd::Zero(2 * dc.N);
    for (int j = 0; j < dc.N; ++j) ones(2 * j) = 1.0;
    Vec2 x(40.0, 13.0);
    Vec2 far = single_layer(k, dc, ones, x);
    Vec2 approx = kelvin_matrix(k, x) * Vec2(2.0 * M_PI, 0.0);
    CHECK((far - approx).norm() < 1e-2 * approx.norm());

    // node-doubling agreement at a comfortable distance, failure up close
    auto rho = [](double t) { return Vec2(std::cos(t), std::sin(2.0 * t)); };
    Vec2 a = single_layer_checked(k, circ, rho, 32, Vec2(2.0, 0.5), 1e-10);
    Vec2 b = single_layer_checked(k, circ, rho, 64, Vec2(2.0, 0.5), 1e-10);
    CHECK((a - b).norm() < 1e-10);
    CHECK_THROWS_AS(single_layer_checked(k, circ, rho, 16, Vec2(1.01, 0.0), 1e-10),
                    NumericalError);
}

TEST_CASE("on-curve operators reproduce off-curve limits") {
    KelvinKernel k{ElasticPhase(0.9, 1.4)};
    SmoothCurve curve = SmoothCurve::perturbed_circle(1.0, 0.1, 2);
    int N = 128;
    DiscretizedCurve dc(curve, N);
    Eigen::VectorXd rho(2 * N);
    for (int j = 0; j < N; ++j)
        rho.segment<2>(2 * j) = Vec2(std::cos(dc.t[j]), 0.5 * std::sin(3.0 * dc.t[j]));

    // single-layer matrix agrees with a fine off-curve evaluation continued
    // to the curve (single layer is continuous across it)
    Eigen::VectorXd on_curve = single_layer_matrix(k, dc) * rho;
    DiscretizedCurve fine(curve, 1024);
    Eigen::VectorXd rho_fine(2 * fine.N);
    for (int j = 0; j < fine.N; ++j)
        rho_fine.segment<2>(2 * j) =
            Vec2(std::cos(fine.t[j]), 0.5 * std::sin(3.0 * fine.t[j]));
    int node = 17;
    Vec2 x0 = dc.node(node), n0 = dc.normal_at(node);
    // Richardson limit along the normal from outside
    Vec2 s1 = single_layer(k, fine, rho_fine, Vec2(x0 + 0.02 * n0));
    Vec2 s2 = single_layer(k, fine, rho_fine, Vec2(x0 + 0.01 * n0));
    Vec2 lim = 2.0 * s2 - s1;
    CHECK((on_curve.segment<2>(2 * node) - lim).norm() < 2e-4);

    // jump relation: interior minus exterior traction equals -rho exactly
    Vec2 ti = traction_of_single_layer(k, dc, rho, node, Side::Interior);
    Vec2 te = traction_of_single_layer(k, dc, rho, node, Side::Exterior);
    CHECK((ti - te + Vec2(rho.segment<2>(2 * node))).norm() < 1e-13);

    // each one-sided value matches the off-curve Richardson limit
    auto traction_at = [&](double off) {
        Vec2 x = x0 + off * n0;
        return traction_of_single_layer_at(k, fine, rho_fine, x, n0);
    };
    Vec2 text_lim = 2.0 * traction_at(0.01) - traction_at(0.02);
    Vec2 tint_lim = 2.0 * traction_at(-0.01) - traction_at(-0.02);
    CHECK((te - text_lim).norm() < 2e-3);
    CHECK((ti - tint_lim).norm() < 2e-3);

    // force balance: exterior traction integrates to the total density
    Eigen::VectorXd text_all = traction_pv_matrix(k, dc) * rho + 0.5 * rho;
    Vec2 force = Vec2::Zero(), total = Vec2::Zero();
    for (int j = 0; j < N; ++j) {
        force += Vec2(text_all.segment<2>(2 * j)) * dc.speed[j] * dc.h;
        total += Vec2(rho.segment<2>(2 * j)) * dc.speed[j] * dc.h;
    }
    CHECK((force - total).norm() < 1e-8);
}

TEST_CASE("transmission solve: homogeneous problem has zero densities") {
    ElasticPhase ph(1.1, 0.9);
    BemScenario sc{SmoothCurve::circle(1.0), SmoothCurve::circle(2.0),
                   ph, ph, ph, UniformLoad::shear(), 64};
    BemSolution sol = solve_transmission(sc);
    CHECK(sol.rho_core.lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(sol.rho_shell_inner.lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(sol.rho_shell_outer.lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(sol.rho_matrix.lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK((evaluate_field(sol, Vec2(0.4, 0.3)) - sc.load.h(Vec2(0.4, 0.3))).norm() < 1e-9);
}

TEST_CASE("transmission solve agrees with the series solution on disks") {
    BemScenario sc = neutral_disk_scenario(128);
    sc.matrix = ElasticPhase(1.0, 1.2); // deliberately non-neutral
    BemSolution sol = solve_transmission(sc);
    LaurentPotentials series = solve_coated_disk_elasticity(
        CoatedDisks(1.0, 2.0), sc.core, sc.shell, sc.matrix, sc.load, 8);
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> ur(0.1, 4.0), ut(0.0, 2.0 * M_PI);
    int checked = 0;
    for (int i = 0; i < 200 && checked < 100; ++i) {
        cplx z = std::polar(ur(rng), ut(rng));
        if (std::min(std::abs(std::abs(z) - 1.0), std::abs(std::abs(z) - 2.0)) < 0.15) continue;
        Vec2 x(z.real(), z.imag());
        Vec2 u_bem = evaluate_field(sol, x);
        cplx u_series = displacement(series, series.region_of(z), z);
        CHECK((u_bem - Vec2(u_series.real(), u_series.imag())).norm() < 1e-6);
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("neutral disks give a vanishing far-field gap; perturbed shapes do not") {
    BemSolution neutral = solve_transmission(neutral_disk_scenario(128));
    FarFieldReport gn = neutrality_gap(neutral, 4.0);
    CHECK(gn.gap < 1e-8);
    CHECK(std::abs(gn.c1) < 1e-8);

    BemScenario pert = neutral_disk_scenario(128);
    pert.outer = SmoothCurve::perturbed_circle(2.0, 0.05, 2);
    FarFieldReport gp = neutrality_gap(solve_transmission(pert), 4.0);
    CHECK(gp.gap > 1e-5);
}

TEST_CASE("gap is spectrally converged in the node count") {
    BemScenario pert = neutral_disk_scenario(128);
    pert.outer = SmoothCurve::perturbed_circle(2.0, 0.05, 3);
    double g128 = neutrality_gap(solve_transmission(pert), 4.0).gap;
    pert.nodes = 192;
    double g192 = neutrality_gap(solve_transmission(pert), 4.0).gap;
    CHECK(std::abs(g128 - g192) < 1e-9);
}

TEST_CASE("rotation equivariance of the gap") {
    BemScenario sc = neutral_disk_scenario(96);
    sc.outer = SmoothCurve::perturbed_circle(2.0, 0.04, 2);
    sc.load = UniformLoad::shear();
    double g0 = neutrality_gap(solve_transmission(sc), 4.0).gap;

    double th = M_PI / 4.0;
    cplx rot = std::polar(1.0, th);
    auto rotate_curve = [&](const SmoothCurve& c) {
        std::vector<SmoothCurve::Term> terms = c.terms();
        for (auto& t : terms) t.coeff *= rot;
        return SmoothCurve(terms);
    };
    Mat2 Q;
    Q << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    BemScenario rsc = sc;
    rsc.inner = rotate_curve(sc.inner);
    rsc.outer = rotate_curve(sc.outer);
    rsc.load = UniformLoad(Mat2(Q * sc.load.A * Q.transpose()));
    double g1 = neutrality_gap(solve_transmission(rsc), 4.0).gap;
    CHECK(g0 == doctest::Approx(g1).epsilon(1e-8));
}

TEST_CASE("geometry validation") {
    BemScenario sc = neutral_disk_scenario(64);
    sc.inner = SmoothCurve::circle(2.5); // not inside the outer curve
    CHECK_THROWS_AS(solve_transmission(sc), ValidationError);
    BemScenario sc2 = neutral_disk_scenario(64);
    sc2.inner = SmoothCurve::circle(1.0, Vec2(1.2, 0.0)); // pokes through
    CHECK_THROWS_AS(solve_transmission(sc2), ValidationError);
    BemSolution ok = solve_transmission(neutral_disk_scenario(64));
    CHECK_THROWS_AS(evaluate_field(ok, Vec2(1.0, 0.0)), ValidationError);
    CHECK_THROWS_AS(neutrality_gap(ok, 1.5), ValidationError);
}
