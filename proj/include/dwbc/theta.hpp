#ifndef DWBC_THETA_HPP
#define DWBC_THETA_HPP

// Odd theta function normalised by
//
//   theta(u+1)   = -theta(u)
//   theta(u+tau) = -exp(-2 pi i u - pi i tau) theta(u)
//   theta'(0)    = 1
//
// i.e. theta(u) = theta_1(pi u, e^{pi i tau}) / (pi theta_1'(0)). It is
// evaluated from the triple-product form
//
//   theta(u) = sin(pi u)/pi * prod_{k>=1} (1 - p^k e^{2 pi i u})(1 - p^k e^{-2 pi i u}) / (1 - p^k)^2
//
// with p = e^{2 pi i tau}, after reducing u into the cell
// |Re u| <= 1/2, |Im u| <= Im(tau)/2 with the quasi-periodicity factors.

#include "dwbc/errors.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace dwbc
{

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Lattice-hit tolerance shared by every guard in the library.
inline constexpr double lattice_tolerance = 1e-10;

inline cplx ipow(cplx x, std::size_t k)
{
    cplx r = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        r *= x;
    return r;
}

class ThetaContext
{
public:
    static constexpr int default_max_terms = 4096;

    explicit ThetaContext(cplx tau, int max_terms = default_max_terms)
        : tau_(tau)
    {
        if (!(tau.imag() > 0.0)) {
            std::ostringstream os;
            os << "ThetaContext: Im(tau) must be > 0, got tau = " << tau;
            throw InvalidParameter(os.str());
        }
        if (max_terms < 1)
            throw InvalidParameter("ThetaContext: max_terms must be positive");
        nome_ = std::exp(2.0 * pi * I * tau);
        const double r = std::abs(nome_); // = exp(-2 pi Im tau) < 1
        const double log_r = -2.0 * pi * tau.imag();
        int terms = static_cast<int>(std::ceil(std::log(1e-16) / log_r));
        if (terms < 1)
            terms = 1;
        if (terms > max_terms) {
            if (max_terms * log_r > std::log(1e-12)) {
                std::ostringstream os;
                os << "ThetaContext: |p| = " << r << " too close to 1; " << max_terms
                   << " product factors cannot reach 1e-12";
                throw InvalidParameter(os.str());
            }
            terms = max_terms;
        }
        powers_.resize(static_cast<std::size_t>(terms));
        norms_.resize(static_cast<std::size_t>(terms));
        cplx pk = 1.0;
        for (int k = 0; k < terms; ++k) {
            pk *= nome_;
            powers_[static_cast<std::size_t>(k)] = pk;
            norms_[static_cast<std::size_t>(k)] = 1.0 / ((1.0 - pk) * (1.0 - pk));
        }
    }

    cplx tau() const noexcept { return tau_; }
    cplx nome() const noexcept { return nome_; }
    int truncation_terms() const noexcept { return static_cast<int>(powers_.size()); }

    cplx operator()(cplx u) const
    {
        // u = u0 + m + k tau
        const double k = std::round(u.imag() / tau_.imag());
        const cplx shifted = u - k * tau_;
        const double m = std::round(shifted.real());
        const cplx u0 = shifted - m;

        cplx value = reduced(u0);
        if (k != 0.0)
            value *= std::exp(-2.0 * pi * I * k * u0 - pi * I * (k * k) * tau_);
        // (-1)^(m+k)
        if (std::fmod(std::abs(m + k), 2.0) == 1.0)
            value = -value;
        return value;
    }

private:
    cplx reduced(cplx u0) const
    {
        const cplx e = std::exp(2.0 * pi * I * u0);
        const cplx e_inv = 1.0 / e;
        cplx prod = std::sin(pi * u0) / pi;
        for (std::size_t k = 0; k < powers_.size(); ++k)
            prod *= (1.0 - powers_[k] * e) * (1.0 - powers_[k] * e_inv) * norms_[k];
        return prod;
    }

    cplx tau_;
    cplx nome_;
    std::vector<cplx> powers_;
    std::vector<cplx> norms_;
};

inline cplx theta(const ThetaContext& ctx, cplx u)
{
    return ctx(u);
}

// Central difference with h = eps^{1/3}.
inline double theta_derivative_step()
{
    return std::cbrt(std::numeric_limits<double>::epsilon());
}

inline cplx theta_deriv_at_zero(const ThetaContext& ctx)
{
    const double h = theta_derivative_step();
    return (ctx(cplx{h, 0.0}) - ctx(cplx{-h, 0.0})) / (2.0 * h);
}

// True iff x lies within tol of m + n tau for integers |m|, |n| <= window.
inline bool is_on_lattice(const ThetaContext& ctx, cplx x, double tol = lattice_tolerance,
                          int window = 50)
{
    const cplx tau = ctx.tau();
    const double n0 = std::round(x.imag() / tau.imag());
    for (double n = n0 - 1; n <= n0 + 1; n += 1.0) {
        if (std::abs(n) > window)
            continue;
        const cplx y = x - n * tau;
        const double m0 = std::round(y.real());
        for (double m = m0 - 1; m <= m0 + 1; m += 1.0) {
            if (std::abs(m) > window)
                continue;
            if (std::abs(y - m) < tol)
                return true;
        }
    }
    return false;
}

// Throws DegenerateParameter naming the offending theta argument.
inline void require_off_lattice(const ThetaContext& ctx, cplx x, const std::string& what)
{
    if (is_on_lattice(ctx, x)) {
        std::ostringstream os;
        os << what << " on lattice Γ (argument " << x << ")";
        throw DegenerateParameter(os.str());
    }
}

} // namespace dwbc

#endif
