#ifndef DWBC_ELLPOLY_HPP
#define DWBC_ELLPOLY_HPP

// Elliptic polynomials: the spaces Theta_n(chi) of entire functions with
//
//   phi(u + 1)   = chi(1) phi(u)
//   phi(u + tau) = chi(tau) exp(-2 pi i n u - pi i n tau) phi(u)
//
// and the identities built on them (Vandermonde-type determinant,
// interpolation through n nodes, the G-function addition formula and the
// Q_j interpolation). Everything here is a numerical constructor or a
// residual checker.

#include "dwbc/errors.hpp"
#include "dwbc/linalg.hpp"
#include "dwbc/random.hpp"
#include "dwbc/theta.hpp"

#include <algorithm>
#include <functional>
#include <span>
#include <sstream>
#include <vector>

namespace dwbc
{

// chi(1) = (-1)^n, chi(tau) = (-1)^n exp(2 pi i alpha).
struct Character
{
    int degree_n = 1;
    cplx alpha{};
    cplx chi_1{};
    cplx chi_tau{};

    static Character from_alpha(int n, cplx alpha)
    {
        if (n < 1)
            throw InvalidParameter("Character: degree must be positive");
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return {n, alpha, cplx{sign, 0.0}, sign * std::exp(2.0 * pi * I * alpha)};
    }
};

using ComplexFunction = std::function<cplx(cplx)>;

// prod_k theta(u - a_k): an element of Theta_n(chi) with alpha = sum a_k.
inline cplx theta_product_poly(const ThetaContext& ctx, std::span<const cplx> zeros, cplx u)
{
    cplx r = 1.0;
    for (auto a : zeros)
        r *= ctx(u - a);
    return r;
}

inline constexpr std::size_t default_membership_samples = 25;

// Largest translation defect of f over `samples` points, each normalised by
// max(1, |f(u)|). The points u = x + y tau, x, y uniform in [-1, 0), place u
// and its translates u + 1, u + tau symmetrically about the origin cell,
// which keeps the multiplier exp(-2 pi i n u - pi i n tau) of moderate size.
inline double membership_residual(const ThetaContext& ctx, const ComplexFunction& f,
                                  const Character& chi,
                                  std::size_t samples = default_membership_samples,
                                  std::uint64_t seed = 0x5eed)
{
    Rng rng(seed);
    const cplx tau = ctx.tau();
    const double n = chi.degree_n;
    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const cplx u = rng.uniform(-1.0, 0.0) + rng.uniform(-1.0, 0.0) * tau;
        const cplx fu = f(u);
        const double norm = std::max(1.0, std::abs(fu));
        const cplx shift_1 = f(u + 1.0) - chi.chi_1 * fu;
        const cplx shift_tau =
            f(u + tau) - chi.chi_tau * std::exp(-2.0 * pi * I * n * u - pi * I * n * tau) * fu;
        worst = std::max({worst, std::abs(shift_1) / norm, std::abs(shift_tau) / norm});
    }
    return worst;
}

namespace detail
{

inline void require_generic_nodes(const ThetaContext& ctx, std::span<const cplx> nodes, cplx alpha)
{
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
            if (is_on_lattice(ctx, nodes[a] - nodes[b])) {
                std::ostringstream os;
                os << "nodes " << b + 1 << " and " << a + 1 << " coincide modulo Γ";
                throw DegenerateNodes(os.str());
            }
    cplx sum{};
    for (auto x : nodes)
        sum += x;
    if (is_on_lattice(ctx, sum - alpha))
        throw DegenerateNodes("sum of nodes - α on lattice Γ");
}

} // namespace detail

// Interpolation of an element of Theta_n(chi), chi(tau) = (-1)^n e^{2 pi i alpha},
// from its values at n nodes:
//
//   P(u) = sum_i P(u_i) th(u_i - u + alpha - S)/th(alpha - S) prod_{k != i} th(u_k - u)/th(u_k - u_i),
//   S = sum_m u_m.
inline cplx interpolate(const ThetaContext& ctx, std::span<const cplx> nodes,
                        std::span<const cplx> values, cplx alpha, cplx u)
{
    if (nodes.size() != values.size() || nodes.empty())
        throw InvalidParameter("interpolate: need as many values as nodes (n >= 1)");
    detail::require_generic_nodes(ctx, nodes, alpha);
    cplx sum_nodes{};
    for (auto x : nodes)
        sum_nodes += x;
    const cplx shift = alpha - sum_nodes;
    const cplx th_shift = ctx(shift);
    cplx result{};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        cplx term = values[i] * ctx(nodes[i] - u + shift) / th_shift;
        for (std::size_t k = 0; k < nodes.size(); ++k)
            if (k != i)
                term *= ctx(nodes[k] - u) / ctx(nodes[k] - nodes[i]);
        result += term;
    }
    return result;
}

// det[phi_j(u_i)] / (th(sum u_k - alpha) prod_{i<j} th(u_i - u_j)); a
// node-independent constant for a basis of Theta_n(chi).
inline cplx vandermonde_ratio(const ThetaContext& ctx, std::span<const ComplexFunction> basis,
                              std::span<const cplx> nodes, cplx alpha)
{
    const std::size_t n = basis.size();
    if (n == 0 || nodes.size() != n)
        throw InvalidParameter("vandermonde_ratio: need n basis functions and n nodes");
    detail::require_generic_nodes(ctx, nodes, alpha);
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = basis[j](nodes[i]);
    cplx sum_nodes{};
    for (auto x : nodes)
        sum_nodes += x;
    cplx denom = ctx(sum_nodes - alpha);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            denom *= ctx(nodes[i] - nodes[j]);
    return PartialPivotLU(m).determinant() / denom;
}

// G_lam(x) = th(x + lam) / (th(x) th(lam)).
inline cplx g_function(const ThetaContext& ctx, cplx lam, cplx x)
{
    return ctx(x + lam) / (ctx(x) * ctx(lam));
}

// |LHS - RHS| / max(1, |LHS|) for
//   prod_i G_{lam_i}(u_i - v) = sum_i prod_{j != i} G_{lam_j}(u_j - u_i) G_{lam_0}(u_i - v),
// lam_0 = sum_i lam_i. `lambda0_perturbation` is added to lam_0 on the
// right-hand side (zero for the identity itself).
inline double addition_formula_residual(const ThetaContext& ctx, std::span<const cplx> lambdas,
                                        std::span<const cplx> us, cplx v,
                                        cplx lambda0_perturbation = 0.0)
{
    const std::size_t n = lambdas.size();
    if (n == 0 || us.size() != n)
        throw InvalidParameter("addition_formula_residual: need n lambdas and n points");
    cplx lam0{};
    for (auto l : lambdas)
        lam0 += l;
    lam0 += lambda0_perturbation;
    require_off_lattice(ctx, lam0, "θ(λ₀)");
    for (std::size_t i = 0; i < n; ++i) {
        require_off_lattice(ctx, lambdas[i], "θ(λ_" + std::to_string(i + 1) + ")");
        require_off_lattice(ctx, us[i] - v, "θ(u_" + std::to_string(i + 1) + " - v)");
        for (std::size_t j = 0; j < i; ++j)
            require_off_lattice(ctx, us[i] - us[j], "θ(u_" + std::to_string(i + 1) + " - u_" +
                                                        std::to_string(j + 1) + ")");
    }
    cplx lhs = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        lhs *= g_function(ctx, lambdas[i], us[i] - v);
    cplx rhs{};
    for (std::size_t i = 0; i < n; ++i) {
        cplx t = g_function(ctx, lam0, us[i] - v);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                t *= g_function(ctx, lambdas[j], us[j] - us[i]);
        rhs += t;
    }
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

// Q_j(u) = th(u_j - u + lam - (n - 2j + 2) h)/th(u_j - u + h)
//          * prod_{k=2}^{j-1} th(u_k - u - h)/th(u_k - u + h)
// with 1-based node labels u_1..u_n (us[0] = u_1 is not a node).
inline cplx q_function(const ThetaContext& ctx, std::span<const cplx> us, cplx lambda, cplx hbar,
                       std::size_t j, cplx u)
{
    const double n = static_cast<double>(us.size());
    const double jj = static_cast<double>(j);
    cplx q = ctx(us[j - 1] - u + lambda - (n - 2.0 * jj + 2.0) * hbar) / ctx(us[j - 1] - u + hbar);
    for (std::size_t k = 2; k < j; ++k)
        q *= ctx(us[k - 1] - u - hbar) / ctx(us[k - 1] - u + hbar);
    return q;
}

// Residual (normalised by max(1, |Q_j(u)|)) of
//   Q_j(u) = sum_{i=2}^n Q_j(u_i) th(u_i - u + lam)/th(lam)
//            * prod_{k=2}^n th(u_k - u_i + h)/th(u_k - u + h) prod_{k != i} th(u_k - u)/th(u_k - u_i).
inline double qj_interpolation_residual(const ThetaContext& ctx, std::span<const cplx> us,
                                        cplx lambda, cplx hbar, std::size_t j, cplx u)
{
    const std::size_t n = us.size();
    if (n < 2 || j < 2 || j > n)
        throw InvalidParameter("qj_interpolation_residual: need n >= 2 and j in [2, n]");
    require_off_lattice(ctx, lambda, "θ(λ)");
    for (std::size_t k = 2; k <= n; ++k) {
        require_off_lattice(ctx, us[k - 1] - u + hbar, "θ(u_" + std::to_string(k) + " - u + ħ)");
        for (std::size_t l = 2; l < k; ++l) {
            require_off_lattice(ctx, us[k - 1] - us[l - 1], "θ(u_" + std::to_string(k) + " - u_" +
                                                                std::to_string(l) + ")");
            require_off_lattice(ctx, us[k - 1] - us[l - 1] + hbar,
                                "θ(u_" + std::to_string(k) + " - u_" + std::to_string(l) + " + ħ)");
            require_off_lattice(ctx, us[l - 1] - us[k - 1] + hbar,
                                "θ(u_" + std::to_string(l) + " - u_" + std::to_string(k) + " + ħ)");
        }
    }
    const cplx direct = q_function(ctx, us, lambda, hbar, j, u);
    const cplx th_lam = ctx(lambda);
    cplx interp{};
    for (std::size_t i = 2; i <= n; ++i) {
        const cplx ui = us[i - 1];
        cplx t = q_function(ctx, us, lambda, hbar, j, ui) * ctx(ui - u + lambda) / th_lam;
        for (std::size_t k = 2; k <= n; ++k) {
            const cplx uk = us[k - 1];
            t *= ctx(uk - ui + hbar) / ctx(uk - u + hbar);
            if (k != i)
                t *= ctx(uk - u) / ctx(uk - ui);
        }
        interp += t;
    }
    return std::abs(direct - interp) / std::max(1.0, std::abs(direct));
}

} // namespace dwbc

#endif
