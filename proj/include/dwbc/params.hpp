#ifndef DWBC_PARAMS_HPP
#define DWBC_PARAMS_HPP

#include "dwbc/errors.hpp"
#include "dwbc/theta.hpp"

#include <complex>
#include <optional>
#include <sstream>
#include <vector>

namespace dwbc
{

// Additive parameters of the elliptic SOS model: u_i on the vertical lines,
// v_j on the horizontal lines, dynamical parameter lambda = hbar * d_nn and
// anisotropy hbar. Index k of u/v holds u_{k+1}/v_{k+1}.
struct EllipticParams
{
    std::vector<cplx> u;
    std::vector<cplx> v;
    cplx lambda{};
    cplx hbar{};

    std::size_t size() const noexcept { return u.size(); }
};

// Multiplicative parameters z = e^{2 pi i u}, w = e^{2 pi i v}, q = e^{pi i hbar},
// mu = e^{2 pi i lambda}. mu is absent for the non-dynamical models.
struct TrigParams
{
    std::vector<cplx> z;
    std::vector<cplx> w;
    cplx q{};
    std::optional<cplx> mu;

    std::size_t size() const noexcept { return z.size(); }
};

inline void require_square(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        std::ostringstream os;
        os << what << ": parameter lists have different lengths (" << a << " vs " << b << ")";
        throw InvalidParameter(os.str());
    }
    if (a == 0)
        throw InvalidParameter(std::string(what) + ": lattice size n must be >= 1");
}

inline void require_size_cap(std::size_t n, std::size_t cap, const char* route)
{
    if (n > cap) {
        std::ostringstream os;
        os << route << ": n = " << n << " exceeds size cap " << cap;
        throw SizeCapExceeded(os.str());
    }
}

inline std::string shift_label(const char* base, long k)
{
    std::ostringstream os;
    os << "θ(" << base;
    if (k > 0)
        os << "+" << k << "ħ";
    else if (k < 0)
        os << k << "ħ";
    os << ")";
    return os.str();
}

// Checks the EllipticParams invariants: equal lengths, hbar off-lattice and
// lambda + k hbar off-lattice for k in [-2n, 2n].
inline void validate(const ThetaContext& ctx, const EllipticParams& p)
{
    require_square(p.u.size(), p.v.size(), "EllipticParams");
    if (is_on_lattice(ctx, p.hbar))
        throw DegenerateParameter("ħ on lattice Γ: θ(ħ) = 0 kills every c-weight");
    const long n = static_cast<long>(p.size());
    if (is_on_lattice(ctx, p.lambda))
        throw DegenerateParameter("λ on lattice Γ: denominator θ(λ) vanishes");
    for (long k = -2 * n; k <= 2 * n; ++k)
        require_off_lattice(ctx, p.lambda + static_cast<double>(k) * p.hbar, shift_label("λ", k));
}

inline void validate(const TrigParams& p)
{
    require_square(p.z.size(), p.w.size(), "TrigParams");
    if (p.q == cplx{})
        throw InvalidParameter("q = 0");
    if (std::abs(p.q * p.q - 1.0) < 1e-12)
        throw DegenerateParameter("q² = 1: q - 1/q vanishes and kills every c-weight");
    if (p.mu) {
        cplx q2k = 1.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (std::abs(*p.mu * q2k - 1.0) < 1e-12) {
                std::ostringstream os;
                os << "μ q^" << 2 * k << " = 1: denominator (1 - μ q^{2(m-1)}) vanishes";
                throw DegenerateParameter(os.str());
            }
            q2k *= p.q * p.q;
        }
    }
}

// The trigonometric images of elliptic parameters.
inline TrigParams to_multiplicative(const EllipticParams& p)
{
    TrigParams t;
    for (auto x : p.u)
        t.z.push_back(std::exp(2.0 * pi * I * x));
    for (auto x : p.v)
        t.w.push_back(std::exp(2.0 * pi * I * x));
    t.q = std::exp(pi * I * p.hbar);
    t.mu = std::exp(2.0 * pi * I * p.lambda);
    return t;
}

} // namespace dwbc

#endif
