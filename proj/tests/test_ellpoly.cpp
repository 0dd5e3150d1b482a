#include "dwbc/closedform.hpp"
#include "dwbc/ellpoly.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace dwbc;
using namespace dwbc::testing;
using Catch::Matchers::ContainsSubstring;

namespace
{

// n zero sets, each summing to alpha.
std::vector<ComplexFunction> product_basis(Rng& rng, const ThetaContext& ctx, std::size_t n, cplx alpha)
{
    std::vector<ComplexFunction> basis;
    for (std::size_t b = 0; b < n; ++b) {
        auto zs = cell_points(rng, ctx, n);
        cplx partial{};
        for (std::size_t k = 0; k + 1 < n; ++k)
            partial += zs[k];
        zs[n - 1] = alpha - partial;
        basis.push_back([&ctx, zs](cplx x) { return theta_product_poly(ctx, zs, x); });
    }
    return basis;
}

cplx sum(const std::vector<cplx>& xs)
{
    cplx s{};
    for (auto x : xs)
        s += x;
    return s;
}

} // namespace

TEST_CASE("character values", "[ellpoly]")
{
    const Character odd = Character::from_alpha(3, 0.25);
    CHECK(odd.chi_1 == cplx{-1.0, 0.0});
    CHECK(std::abs(odd.chi_tau - (-I)) < 1e-15);
    const Character even = Character::from_alpha(2, 0.0);
    CHECK(even.chi_1 == cplx{1.0, 0.0});
    CHECK(std::abs(even.chi_tau - 1.0) < 1e-15);
    CHECK_THROWS_AS(Character::from_alpha(0, 0.0), InvalidParameter);
}

TEST_CASE("theta products lie in the expected space", "[ellpoly][membership]")
{
    Rng rng(61);
    for (cplx tau : {I, cplx{0.3, 0.8}}) {
        const ThetaContext ctx(tau);
        for (std::size_t n = 1; n <= 5; ++n) {
            const auto zeros = cell_points(rng, ctx, n);
            const auto f = [&](cplx u) { return theta_product_poly(ctx, zeros, u); };
            CHECK(membership_residual(ctx, f, Character::from_alpha(static_cast<int>(n), sum(zeros))) <
                  1e-10);
            CHECK(membership_residual(ctx, f, Character::from_alpha(static_cast<int>(n), sum(zeros) + 0.3)) >
                  1e-3);
        }
    }
}

TEST_CASE("single zero at the origin is theta itself", "[ellpoly]")
{
    const ThetaContext ctx(I);
    const std::vector<cplx> zero{0.0};
    CHECK(theta_product_poly(ctx, zero, cplx{0.3, 0.1}) == ctx(cplx{0.3, 0.1}));
}

TEST_CASE("interpolation reproduces a polynomial", "[ellpoly][interpolation]")
{
    Rng rng(62);
    for (cplx tau : {I, cplx{0.3, 0.8}}) {
        const ThetaContext ctx(tau);
        for (std::size_t n = 1; n <= 5; ++n) {
            const auto zeros = cell_points(rng, ctx, n);
            const cplx alpha = sum(zeros);
            const auto nodes = cell_points(rng, ctx, n);
            std::vector<cplx> values;
            for (auto x : nodes)
                values.push_back(theta_product_poly(ctx, zeros, x));
            for (std::size_t k = 0; k < n; ++k)
                CHECK(relative_difference(interpolate(ctx, nodes, values, alpha, nodes[k]), values[k]) < 1e-12);
            for (int s = 0; s < 20; ++s) {
                const cplx u = cell_point(rng, ctx);
                const cplx expected = theta_product_poly(ctx, zeros, u);
                CHECK(std::abs(interpolate(ctx, nodes, values, alpha, u) - expected) <
                      1e-9 * std::max(1.0, std::abs(expected)));
            }
        }
    }
}

TEST_CASE("interpolation at one node", "[ellpoly][interpolation]")
{
    const ThetaContext ctx(I);
    const std::vector<cplx> node{0.2}, value{1.5};
    const cplx alpha = 0.45, u = 0.33;
    CHECK(relative_difference(interpolate(ctx, node, value, alpha, u), 1.5 * ctx(u - alpha) / ctx(0.2 - alpha)) <
          1e-14);
}

TEST_CASE("degenerate interpolation nodes", "[ellpoly][interpolation]")
{
    const ThetaContext ctx(I);
    const std::vector<cplx> values{1.0, 2.0};
    const std::vector<cplx> coincide{0.2, 1.2};
    CHECK_THROWS_WITH(interpolate(ctx, coincide, values, 0.45, 0.1), ContainsSubstring("coincide modulo Γ"));
    const std::vector<cplx> on_lattice{0.2, 0.25};
    CHECK_THROWS_WITH(interpolate(ctx, on_lattice, values, 0.45 + I, 0.1),
                      ContainsSubstring("sum of nodes - α on lattice Γ"));
    CHECK_THROWS_AS(interpolate(ctx, on_lattice, std::vector<cplx>{1.0}, 0.3, 0.1), InvalidParameter);
}

TEST_CASE("Vandermonde ratio", "[ellpoly][vandermonde]")
{
    Rng rng(63);
    const ThetaContext ctx(I);
    {
        const cplx alpha = 0.37;
        const std::vector<ComplexFunction> basis{[&](cplx x) { return ctx(x - alpha); }};
        CHECK(relative_difference(vandermonde_ratio(ctx, basis, std::vector<cplx>{0.1}, alpha), 1.0) < 1e-14);
    }
    for (std::size_t n = 1; n <= 5; ++n) {
        const cplx alpha = cell_point(rng, ctx);
        const auto basis = product_basis(rng, ctx, n, alpha);
        auto nodes = cell_points(rng, ctx, n);
        const cplx r1 = vandermonde_ratio(ctx, basis, nodes, alpha);
        const cplx r2 = vandermonde_ratio(ctx, basis, cell_points(rng, ctx, n), alpha);
        CHECK(relative_difference(r1, r2) < 1e-8);
        CHECK(std::abs(r1) > 1e-8);
        if (n >= 2) {
            std::swap(nodes[0], nodes[1]);
            CHECK(relative_difference(r1, vandermonde_ratio(ctx, basis, nodes, alpha)) < 1e-12);
        }
    }
}

TEST_CASE("Vandermonde ratio rejects mismatched sizes", "[ellpoly][vandermonde]")
{
    const ThetaContext ctx(I);
    const std::vector<ComplexFunction> basis{[&](cplx x) { return ctx(x); }};
    CHECK_THROWS_AS(vandermonde_ratio(ctx, basis, std::vector<cplx>{0.1, 0.2}, 0.0), InvalidParameter);
}

TEST_CASE("G-function addition formula", "[ellpoly][addition]")
{
    Rng rng(64);
    for (cplx tau : {I, cplx{0.3, 0.8}}) {
        const ThetaContext ctx(tau);
        for (std::size_t n = 1; n <= 5; ++n) {
            std::vector<cplx> lambdas(n);
            for (auto& l : lambdas)
                l = rng.complex_box(0.05, 0.2, -0.05, 0.05);
            const auto us = rng.spectral(n);
            const cplx v = rng.spectral();
            const double res = addition_formula_residual(ctx, lambdas, us, v);
            CHECK(res < (n == 1 ? 1e-15 : 1e-9));
            CHECK(addition_formula_residual(ctx, lambdas, us, v, 0.1) > 1e-3);
        }
    }
}

TEST_CASE("addition formula guards", "[ellpoly][addition]")
{
    const ThetaContext ctx(I);
    const std::vector<cplx> lambdas{0.3, 0.7}, us{0.1, 0.4};
    CHECK_THROWS_WITH(addition_formula_residual(ctx, lambdas, us, 0.2), ContainsSubstring("θ(λ₀)"));
    CHECK_THROWS_AS(addition_formula_residual(ctx, lambdas, std::vector<cplx>{0.1}, 0.2), InvalidParameter);
}

TEST_CASE("Q_j interpolation", "[ellpoly][qj]")
{
    Rng rng(65);
    const ThetaContext ctx(I);
    for (auto [n, j] : {std::pair<std::size_t, std::size_t>{3, 2}, {5, 4}, {2, 2}, {4, 3}}) {
        for (int s = 0; s < 5; ++s) {
            const auto us = rng.spectral(n);
            const cplx lam = rng.complex_box(0.2, 0.45, -0.05, 0.05);
            const cplx h = rng.complex_box(0.1, 0.25, -0.05, 0.05);
            CHECK(qj_interpolation_residual(ctx, us, lam, h, j, rng.spectral()) < 1e-9);
            CHECK(qj_interpolation_residual(ctx, us, lam, h, j, us[1]) < 1e-12);
        }
    }
}

TEST_CASE("Q_j argument checks", "[ellpoly][qj]")
{
    const ThetaContext ctx(I);
    const std::vector<cplx> us{0.1, 0.3, 0.6};
    CHECK_THROWS_AS(qj_interpolation_residual(ctx, us, 0.31, 0.17, 1, 0.2), InvalidParameter);
    CHECK_THROWS_AS(qj_interpolation_residual(ctx, us, 0.31, 0.17, 4, 0.2), InvalidParameter);
    CHECK_THROWS_AS(qj_interpolation_residual(ctx, std::vector<cplx>{0.1}, 0.31, 0.17, 2, 0.2),
                    InvalidParameter);
    CHECK_THROWS_AS(qj_interpolation_residual(ctx, us, 1.0, 0.17, 2, 0.2), DegenerateParameter);
}

TEST_CASE("partition function is an elliptic polynomial in each spectral parameter", "[ellpoly][membership]")
{
    Rng rng(66);
    for (cplx tau : {I, cplx{0.3, 0.8}}) {
        const ThetaContext ctx(tau);
        for (std::size_t n = 1; n <= 3; ++n) {
            const EllipticParams p = draw_elliptic(rng, ctx, n);
            const double scale = std::abs(z_sos_elliptic(ctx, p));
            const int deg = static_cast<int>(n);
            auto in_u = [&](cplx x) {
                EllipticParams q = p;
                q.u[n - 1] = x;
                return z_sos_elliptic(ctx, q) / scale;
            };
            auto in_v = [&](cplx x) {
                EllipticParams q = p;
                q.v[n - 1] = x;
                return z_sos_elliptic(ctx, q) / scale;
            };
            CHECK(membership_residual(ctx, in_u, Character::from_alpha(deg, p.lambda + sum(p.v))) < 1e-9);
            CHECK(membership_residual(ctx, in_v, Character::from_alpha(deg, -p.lambda + sum(p.u))) < 1e-9);
        }
    }
}
