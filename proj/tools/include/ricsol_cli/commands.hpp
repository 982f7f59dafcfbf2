#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ricsol::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitSingular = 3;

// "9,9,9": one count per chart axis, each ≥ 3. Throws ParseError.
std::vector<int> parse_counts(const std::string& text, int dim);
// "lo:hi,lo:hi,...". Throws ParseError.
std::vector<std::pair<double, double>> parse_box(const std::string& text, int dim);

// Runs one command line; the report goes to --out (atomically) and a summary to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ricsol::cli
