#ifndef DWBC_TOOLS_CLI_HPP
#define DWBC_TOOLS_CLI_HPP

#include "dwbc/dwbc.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dwbc::cli
{

enum class Command
{
    compute,
    check,
    bench
};

enum class Model
{
    sos_elliptic,
    sos_trig,
    six_vertex
};

enum class Route
{
    enumerate,
    transfer,
    sum,
    determinant,
    all
};

enum class Format
{
    text,
    json
};

inline constexpr int exit_pass = 0;
inline constexpr int exit_parameter_error = 1;
inline constexpr int exit_tolerance_failure = 2;

inline constexpr double default_tolerance = 1e-9;
inline constexpr double proxy_tolerance = 1e-6;

struct RunConfig
{
    Command command = Command::compute;
    std::string suite = "all";
    Model model = Model::sos_elliptic;
    Route route = Route::all;
    std::size_t n = 3;
    std::uint64_t seed = 1;
    std::vector<cplx> u, v, z, w; // explicit lists; empty means seed-generated
    cplx tau{0.0, 1.0};
    cplx lambda{0.31, 0.0};
    cplx hbar{0.17, 0.0};
    cplx q{1.3, 0.0};
    std::optional<cplx> mu; // defaults to exp(2 pi i lambda)
    double tolerance = default_tolerance;
    Format format = Format::text;
    bool parallel = false;
};

// Accepts "i", "-i", "2.5", "0.3-0.1i", "4i" and "[re, im]".
cplx parse_complex(const std::string& token);

// A list of complex numbers: either one token per entry or a single json
// array of [re, im] pairs.
std::vector<cplx> parse_complex_list(const std::vector<std::string>& tokens);

std::string to_string(Model m);
std::string to_string(Route r);
std::string to_string(Command c);

// Runs the tool on argv-style arguments (without the program name) and
// returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dwbc::cli

#endif
