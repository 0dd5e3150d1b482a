#ifndef DWBC_RANDOM_HPP
#define DWBC_RANDOM_HPP

// Reproducible parameter draws. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; doubles are formed from the top 53
// bits so the draws are bit-identical on every conforming implementation
// (std::uniform_real_distribution is not).

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace dwbc
{

class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::complex<double> complex_box(double re_lo, double re_hi, double im_lo, double im_hi)
    {
        const double re = uniform(re_lo, re_hi);
        const double im = uniform(im_lo, im_hi);
        return {re, im};
    }

    // The documented spectral-parameter box: [0.1, 0.9] + i[-0.05, 0.05].
    std::complex<double> spectral() { return complex_box(0.1, 0.9, -0.05, 0.05); }

    std::vector<std::complex<double>> spectral(std::size_t n)
    {
        std::vector<std::complex<double>> out(n);
        for (auto& x : out)
            x = spectral();
        return out;
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace dwbc

#endif
