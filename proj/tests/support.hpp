#ifndef DWBC_TESTS_SUPPORT_HPP
#define DWBC_TESTS_SUPPORT_HPP

#include "dwbc/dwbc.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace dwbc::testing
{

// Elliptic draw: u, v from the spectral box, lambda and hbar from small
// boxes well away from the lattice; redrawn until the parameter invariants hold.
inline EllipticParams draw_elliptic(Rng& rng, const ThetaContext& ctx, std::size_t n)
{
    for (;;) {
        EllipticParams p;
        p.u = rng.spectral(n);
        p.v = rng.spectral(n);
        p.lambda = rng.complex_box(0.2, 0.45, -0.05, 0.05);
        p.hbar = rng.complex_box(0.1, 0.25, -0.05, 0.05);
        try {
            validate(ctx, p);
            return p;
        } catch (const DegenerateParameter&) {
        }
    }
}

// Six-vertex draw in multiplicative variables: z, w on (near) the unit circle.
inline TrigParams draw_six_vertex(Rng& rng, std::size_t n, cplx q)
{
    TrigParams t;
    for (auto x : rng.spectral(n))
        t.z.push_back(std::exp(2.0 * pi * I * x));
    for (auto x : rng.spectral(n))
        t.w.push_back(std::exp(2.0 * pi * I * x));
    t.q = q;
    return t;
}

// A point of the fundamental cell x + y tau, x, y in [-1/2, 1/2).
inline cplx cell_point(Rng& rng, const ThetaContext& ctx)
{
    return rng.uniform(-0.5, 0.5) + rng.uniform(-0.5, 0.5) * ctx.tau();
}

inline std::vector<cplx> cell_points(Rng& rng, const ThetaContext& ctx, std::size_t n)
{
    std::vector<cplx> out(n);
    for (auto& x : out)
        x = cell_point(rng, ctx);
    return out;
}

inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n)
{
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t k = n; k > 1; --k)
        std::swap(perm[k - 1], perm[rng.next_u64() % k]);
    return perm;
}

template <class T>
std::vector<T> permuted(const std::vector<T>& xs, const std::vector<std::size_t>& perm)
{
    std::vector<T> out(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k)
        out[k] = xs[perm[k]];
    return out;
}

inline double max_rel_entry(const RMatrix4& a, const RMatrix4& b)
{
    return a.max_abs_difference(b) / std::max(a.max_abs(), b.max_abs());
}

} // namespace dwbc::testing

#endif
