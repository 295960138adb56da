#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "shapesum/common.hpp"
#include "shapesum/residual.hpp"

using namespace shapesum;

namespace {

const TauPoint tau_i{cplx(0.0, 1.0)};
const TauPoint tau_2i{cplx(0.0, 2.0)};
const TauPoint tau_a{cplx(0.3, 1.2)};
const TauPoint tau_b{cplx(-0.5, 0.8)};

ShapeSpec sloped() {
    return ShapeSpec::custom({{0.0, 1.0}, {0.5, 0.8}, {1.0, 0.0}});
}

}  // namespace

TEST_CASE("closed forms hit frozen anchors") {
    struct Anchor {
        ShapeSpec shape;
        TauPoint tau;
        cplx expected;
    };
    // Computed independently at 30-digit precision and frozen.
    const std::vector<Anchor> anchors = {
        {ShapeSpec::rectangle(0.25), tau_i, {-0.97991465250745662, 0.0}},
        {ShapeSpec::rectangle(0.25), tau_2i, {-0.92729521800161223, 0.0}},
        {ShapeSpec::rectangle(0.25), tau_a,
         {-0.97287822517794581, -0.013597384274120784}},
        {ShapeSpec::rectangle(0.25), tau_b,
         {-0.99151758370355285, 0.016175041542997536}},
        {ShapeSpec::rectangle(1.0), tau_i, {-pi, 0.0}},
        {ShapeSpec::rectangle(1.0), tau_2i, {-2.214297435588181, 0.0}},
        {ShapeSpec::rectangle(1.0), tau_a,
         {-2.8997340860346725, -0.32200602014594505}},
        {ShapeSpec::rectangle(1.0), tau_b,
         {-3.3621821342901641, 0.62912593595598722}},
        {ShapeSpec::rectangle(4.0), tau_i, {-5.3032706546721299, 0.0}},
        {ShapeSpec::rectangle(4.0), tau_2i, {-2.8928826644962704, 0.0}},
        {ShapeSpec::rectangle(4.0), tau_a,
         {-4.356220935879602, -0.93160261375954689}},
        {ShapeSpec::rectangle(4.0), tau_b,
         {-5.1403126808877753, 2.5408046745898402}},
        {ShapeSpec::disk(), tau_i, {-pi, 0.0}},
        {ShapeSpec::disk(), tau_2i, {-2.0 * pi / 3.0, 0.0}},
        {ShapeSpec::disk(), tau_a, {-2.8038555123316614, -0.382343933499772}},
        {ShapeSpec::disk(), tau_b, {-3.2406113332158325, 0.90016981478217567}},
        {ShapeSpec::diamond(), tau_i, {-pi, 0.0}},
        {ShapeSpec::diamond(), tau_2i, {-1.9587563784238783, 0.0}},
        {ShapeSpec::diamond(), tau_a, {-2.7101017541080698, -0.445205243962294}},
        {ShapeSpec::diamond(), tau_b, {-3.1245372981406944, 1.1456362923000086}},
    };

    for (const auto& a : anchors) {
        CAPTURE(a.shape.describe(), a.tau.value());
        const auto r = residual_closed_form(a.shape, a.tau);
        CHECK(r.method == Method::ClosedForm);
        CHECK(std::abs(r.value - a.expected) <=
              5e-15 * (1.0 + std::abs(a.expected)));
        CHECK(r.error_estimate <= 1e-14 * (1.0 + std::abs(r.value)));
    }
}

TEST_CASE("closed forms reduce to elementary expressions") {
    // Rectangle at tau = i collapses to -4 atan(c).
    for (const double c : {0.25, 0.5, 1.0, 4.0}) {
        const auto r = residual_closed_form(ShapeSpec::rectangle(c), tau_i);
        CHECK(std::abs(r.value - cplx(-4.0 * std::atan(c), 0.0)) <= 1e-14);
    }
    // Diamond at tau = 2i: (4 log 2 - 4 pi) / 5.
    const auto d = residual_closed_form(ShapeSpec::diamond(), tau_2i);
    CHECK(std::abs(d.value - cplx((4.0 * std::log(2.0) - 4.0 * pi) / 5.0, 0.0)) <=
          1e-14);
}

TEST_CASE("boundary integral agrees with closed forms") {
    const std::vector<ShapeSpec> shapes = {
        ShapeSpec::rectangle(0.25), ShapeSpec::rectangle(1.0),
        ShapeSpec::rectangle(4.0), ShapeSpec::disk(), ShapeSpec::diamond()};
    for (const auto& shape : shapes) {
        for (const auto& tau : {tau_i, tau_2i, tau_a}) {
            CAPTURE(shape.describe(), tau.value());
            const auto qi = residual_integral(shape, tau);
            const auto cf = residual_closed_form(shape, tau);
            CHECK(qi.method == Method::Integral);
            CHECK(std::abs(qi.value - cf.value) <= 1e-8);
        }
    }
}

TEST_CASE("conjugation symmetry of the residual") {
    SplitMix64 rng(15);
    for (const auto& shape :
         {ShapeSpec::rectangle(0.7), ShapeSpec::disk(), ShapeSpec::diamond()}) {
        for (int k = 0; k < 4; ++k) {
            const cplx t(rng.uniform(-1.0, 1.0), rng.uniform(0.4, 2.0));
            const cplx lhs =
                residual_closed_form(shape, TauPoint(-std::conj(t))).value;
            const cplx rhs =
                std::conj(residual_closed_form(shape, TauPoint(t)).value);
            CHECK(std::abs(lhs - rhs) <= 1e-13 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("transpose functional equation") {
    CHECK(std::abs(residual_functional_defect(ShapeSpec::disk(), tau_i)) <= 1e-8);
    CHECK(std::abs(residual_functional_defect(ShapeSpec::rectangle(2.0),
                                              TauPoint(cplx(0.4, 1.1)))) <= 1e-8);
    CHECK(std::abs(residual_functional_defect(ShapeSpec::diamond(), tau_a)) <=
          1e-8);
    // Piecewise-linear shapes go through the exact transpose construction.
    CHECK(std::abs(residual_functional_defect(sloped(), tau_i)) <= 1e-8);
    CHECK(std::abs(residual_functional_defect(sloped(), tau_a)) <= 1e-8);
}

TEST_CASE("dilation invariance") {
    const auto diamond_pts = as_custom(ShapeSpec::diamond());
    for (const double s : {0.5, 3.0}) {
        CHECK(std::abs(residual_scaling_defect(diamond_pts, s, tau_i)) <= 1e-9);
        CHECK(std::abs(residual_scaling_defect(diamond_pts, s, tau_2i)) <= 1e-9);
    }
    CHECK(std::abs(residual_scaling_defect(ShapeSpec::rectangle(1.0), 3.0,
                                           tau_2i)) <= 1e-9);

    CHECK_THROWS_AS(residual_scaling_defect(ShapeSpec::disk(), 2.0, tau_i),
                    domain_error);
    CHECK_THROWS_AS(residual_scaling_defect(diamond_pts, 1e5, tau_i),
                    config_error);
}

TEST_CASE("rectangle aspect limits") {
    // Thin: E(rect(c)) ~ -4c as c -> 0.
    const auto thin = residual_closed_form(ShapeSpec::rectangle(1e-4), tau_i);
    CHECK(std::abs(thin.value - cplx(-4e-4, 0.0)) <= 1e-11);

    // Wide: E(rect(c)) -> -2 pi i / tau; at tau = i the residual approaches
    // -2 pi like -4 atan(c) = -2 pi + 4/c + O(c^-3).
    const auto wide = residual_closed_form(ShapeSpec::rectangle(1e3), tau_i);
    CHECK(std::abs(wide.value - cplx(-2.0 * pi + 4e-3, 0.0)) <= 1e-8);
}

TEST_CASE("lattice evaluation of the residual") {
    SumConfig cfg;
    cfg.schedule = {125, 250, 500, 1000};
    const auto r = residual_lattice(ShapeSpec::disk(), tau_i, cfg);
    CHECK(r.method == Method::Lattice);
    CHECK(std::abs(r.value - cplx(-pi, 0.0)) <= 5e-3);
}

TEST_CASE("method selection and guards") {
    CHECK(residual_auto(ShapeSpec::disk(), tau_i).method == Method::ClosedForm);
    CHECK(residual_auto(sloped(), tau_i).method == Method::Integral);
    CHECK_THROWS_AS(residual_closed_form(sloped(), tau_i), domain_error);

    const auto invalid = ShapeSpec::custom({{0.0, 1.0}, {0.5, 1.1}, {1.0, 0.0}});
    CHECK_THROWS_AS(residual_integral(invalid, tau_i), config_error);

    // Integral tolerance knobs are honored.
    QuadratureConfig tight;
    tight.rel_tol = 1e-13;
    const auto qi = residual_integral(ShapeSpec::rectangle(1.0), tau_a, tight);
    const auto cf = residual_closed_form(ShapeSpec::rectangle(1.0), tau_a);
    CHECK(std::abs(qi.value - cf.value) <= 1e-11);
}
