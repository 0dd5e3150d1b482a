#ifndef DWBC_RMATRIX_HPP
#define DWBC_RMATRIX_HPP

// Boltzmann-weight matrices on C^2 (x) C^2.
//
// Entries are R^{alpha beta}_{gamma delta} with alpha the top edge, beta the
// right edge, gamma the bottom edge and delta the left edge of a vertex.
// Rows are indexed by (alpha, beta), columns by (gamma, delta), both in the
// order (++, +-, -+, --). Every matrix here has the six-vertex pattern
//
//     [ a  0    0    0 ]
//     [ 0  b    cbar 0 ]
//     [ 0  c    bbar 0 ]
//     [ 0  0    0    a ]

#include "dwbc/errors.hpp"
#include "dwbc/linalg.hpp"
#include "dwbc/theta.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace dwbc
{

enum class Sign : int
{
    plus = 1,
    minus = -1
};

constexpr int value(Sign s) noexcept { return static_cast<int>(s); }
constexpr Sign sign_of(int s) noexcept { return s > 0 ? Sign::plus : Sign::minus; }

// Position of a sign in one C^2 factor: + -> 0, - -> 1.
constexpr std::size_t bit(Sign s) noexcept { return s == Sign::plus ? 0 : 1; }

class RMatrix4
{
public:
    using Entries = std::array<std::array<cplx, 4>, 4>;

    RMatrix4() = default;
    explicit RMatrix4(const Entries& e) : m_(e) {}

    static RMatrix4 six_vertex(cplx a, cplx b, cplx bbar, cplx c, cplx cbar)
    {
        RMatrix4 r;
        r.m_[0][0] = a;
        r.m_[1][1] = b;
        r.m_[1][2] = cbar;
        r.m_[2][1] = c;
        r.m_[2][2] = bbar;
        r.m_[3][3] = a;
        return r;
    }

    static constexpr std::size_t index(Sign first, Sign second) noexcept
    {
        return 2 * bit(first) + bit(second);
    }

    cplx& operator()(std::size_t row, std::size_t col) { return m_[row][col]; }
    const cplx& operator()(std::size_t row, std::size_t col) const { return m_[row][col]; }

    // R^{alpha beta}_{gamma delta}
    const cplx& entry(Sign alpha, Sign beta, Sign gamma, Sign delta) const
    {
        return m_[index(alpha, beta)][index(gamma, delta)];
    }

    cplx a() const { return m_[0][0]; }
    cplx b() const { return m_[1][1]; }
    cplx bbar() const { return m_[2][2]; }
    cplx c() const { return m_[2][1]; }
    cplx cbar() const { return m_[1][2]; }

    const Entries& entries() const noexcept { return m_; }

    double max_abs_difference(const RMatrix4& other) const
    {
        double d = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                d = std::max(d, std::abs(m_[i][j] - other.m_[i][j]));
        return d;
    }

    double max_abs() const
    {
        double d = 0.0;
        for (const auto& row : m_)
            for (const auto& x : row)
                d = std::max(d, std::abs(x));
        return d;
    }

    RMatrix4 scaled(cplx s) const
    {
        RMatrix4 r = *this;
        for (auto& row : r.m_)
            for (auto& x : row)
                x *= s;
        return r;
    }

private:
    Entries m_{};
};

struct SosWeights
{
    cplx a, b, bbar, c, cbar;
};

// Elliptic SOS weights at spectral difference x and dynamical argument
// lam = hbar * d (d the height of the face upper-left of the vertex).
inline SosWeights sos_weights(const ThetaContext& ctx, cplx x, cplx lam, cplx hbar)
{
    require_off_lattice(ctx, lam, "θ(ħd) (dynamical argument)");
    const cplx th_x = ctx(x);
    const cplx th_h = ctx(hbar);
    const cplx th_lam = ctx(lam);
    return {
        ctx(x + hbar),
        th_x * ctx(lam + hbar) / th_lam,
        th_x * ctx(lam - hbar) / th_lam,
        ctx(x + lam) * th_h / th_lam,
        ctx(x - lam) * th_h / ctx(-lam),
    };
}

inline RMatrix4 sos_rmatrix(const ThetaContext& ctx, cplx x, cplx lam, cplx hbar)
{
    const auto w = sos_weights(ctx, x, lam, hbar);
    return RMatrix4::six_vertex(w.a, w.b, w.bbar, w.c, w.cbar);
}

inline RMatrix4 sixv_rmatrix(cplx z, cplx w, cplx q)
{
    if (q == cplx{})
        throw InvalidParameter("six-vertex weights: q = 0");
    const cplx qi = 1.0 / q;
    const cplx b = z - w;
    return RMatrix4::six_vertex(q * z - qi * w, b, b, (q - qi) * z, (q - qi) * w);
}

// Trigonometric dynamical (SOS) weights, mu = e^{2 pi i lambda}.
inline RMatrix4 trig_sos_rmatrix(cplx z, cplx w, cplx mu, cplx q)
{
    if (q == cplx{})
        throw InvalidParameter("trigonometric SOS weights: q = 0");
    if (std::abs(mu - 1.0) < 1e-12)
        throw DegenerateParameter("trigonometric SOS weights: μ = 1 (denominator μ - 1 vanishes)");
    const cplx qi = 1.0 / q;
    const cplx dq = q - qi;
    return RMatrix4::six_vertex(z * q - w * qi,
                                (z - w) * (mu * q - qi) / (mu - 1.0),
                                (z - w) * (mu * qi - q) / (mu - 1.0),
                                (z * mu - w) * dq / (mu - 1.0),
                                (z - w * mu) * dq / (1.0 - mu));
}

// mu -> infinity limit of trig_sos_rmatrix.
inline RMatrix4 trig_nondyn_rmatrix(cplx z, cplx w, cplx q)
{
    if (q == cplx{})
        throw InvalidParameter("trigonometric weights: q = 0");
    const cplx qi = 1.0 / q;
    return RMatrix4::six_vertex(z * q - w * qi, q * (z - w), qi * (z - w), (q - qi) * z,
                                (q - qi) * w);
}

// b -> rho b, bbar -> bbar / rho.
inline RMatrix4 gauge_rescale(const RMatrix4& r, cplx rho)
{
    if (rho == cplx{})
        throw InvalidParameter("gauge_rescale: rho = 0");
    RMatrix4 out = r;
    out(1, 1) *= rho;
    out(2, 2) /= rho;
    return out;
}

// Max-norm of [H (x) 1 + 1 (x) H, R] with H = diag(1, -1).
inline double ice_rule_residual(const RMatrix4& r)
{
    static constexpr std::array<double, 4> charge{2.0, 0.0, 0.0, -2.0};
    double res = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            res = std::max(res, std::abs((charge[i] - charge[j]) * r(i, j)));
    return res;
}

namespace detail
{

// Embeds a two-space operator into C^2 (x) C^2 (x) C^2 acting on spaces
// (first, second), 0-based; state index = 4 s0 + 2 s1 + s2.
inline DenseMatrix embed3(const RMatrix4& r, int first, int second)
{
    DenseMatrix out(8, 8);
    const int other = 3 - first - second;
    auto bit_of = [](std::size_t state, int space) { return (state >> (2 - space)) & 1U; };
    for (std::size_t row = 0; row < 8; ++row)
        for (std::size_t col = 0; col < 8; ++col) {
            if (bit_of(row, other) != bit_of(col, other))
                continue;
            const std::size_t ri = 2 * bit_of(row, first) + bit_of(row, second);
            const std::size_t ci = 2 * bit_of(col, first) + bit_of(col, second);
            out(row, col) = r(ri, ci);
        }
    return out;
}

// Spectral projector of H^{(space)} onto eigenvalue s.
inline DenseMatrix sector_projector3(int space, int s)
{
    DenseMatrix out(8, 8);
    for (std::size_t state = 0; state < 8; ++state) {
        const bool plus = ((state >> (2 - space)) & 1U) == 0;
        if ((s > 0) == plus)
            out(state, state) = 1.0;
    }
    return out;
}

} // namespace detail

// Residual of the dynamical Yang-Baxter equation
//
//   R12(lam) R13(lam + hbar H2) R23(lam) = R23(lam + hbar H1) R13(lam) R12(lam + hbar H3)
//
// for a family `family(a, b, shift)` returning R^{(ab)}(t_a - t_b) at the
// dynamical argument shifted by `shift` units of hbar, (a, b) in
// {(1,2), (1,3), (2,3)}. Operator-valued arguments are expanded over the two
// eigen-sectors of H^{(k)}. Families that ignore `shift` reduce this to the
// ordinary Yang-Baxter equation.
template <class Family>
double dybe_residual(Family&& family)
{
    using detail::embed3;
    using detail::sector_projector3;
    auto shifted = [&](int a, int b, int by_space) {
        DenseMatrix sum(8, 8);
        for (int s : {1, -1})
            sum = sum + embed3(family(a, b, s), a - 1, b - 1) * sector_projector3(by_space - 1, s);
        return sum;
    };
    const DenseMatrix lhs =
        embed3(family(1, 2, 0), 0, 1) * shifted(1, 3, 2) * embed3(family(2, 3, 0), 1, 2);
    const DenseMatrix rhs =
        shifted(2, 3, 1) * embed3(family(1, 3, 0), 0, 2) * shifted(1, 2, 3);
    return (lhs - rhs).max_abs();
}

inline double dybe_residual(const ThetaContext& ctx, cplx t1, cplx t2, cplx t3, cplx lam,
                            cplx hbar)
{
    const std::array<cplx, 3> t{t1, t2, t3};
    return dybe_residual([&](int a, int b, int shift) {
        return sos_rmatrix(ctx, t[a - 1] - t[b - 1], lam + static_cast<double>(shift) * hbar, hbar);
    });
}

// Trigonometric dynamical version: lam -> lam + hbar is mu -> mu q^2.
inline double trig_dybe_residual(cplx z1, cplx z2, cplx z3, cplx mu, cplx q)
{
    const std::array<cplx, 3> z{z1, z2, z3};
    return dybe_residual([&](int a, int b, int shift) {
        const cplx m = shift == 0 ? mu : shift > 0 ? mu * q * q : mu / (q * q);
        return trig_sos_rmatrix(z[a - 1], z[b - 1], m, q);
    });
}

inline double trig_nondyn_ybe_residual(cplx z1, cplx z2, cplx z3, cplx q)
{
    const std::array<cplx, 3> z{z1, z2, z3};
    return dybe_residual(
        [&](int a, int b, int) { return trig_nondyn_rmatrix(z[a - 1], z[b - 1], q); });
}

} // namespace dwbc

#endif
