#pragma once

#include <string>
#include <vector>

namespace hvdp::checks {

// Published reference values the acceptance criteria compare against.
namespace published {
inline constexpr double amplitude = 2.0;
inline constexpr double square_hannay = 0.0104;
inline constexpr double square_geometric = 0.0103;
inline constexpr double ellipse_hannay = 0.0147;
inline constexpr double ellipse_geometric = 0.013;
}  // namespace published

struct Criterion {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    double budget = 0.0;  // wall-clock limit in seconds, 0 for none
    std::vector<std::string> details;
};

struct Options {
    unsigned threads = 1;
};

inline constexpr int kCriteria = 10;

// Runs criterion id (1..10). Numerical failures are reported as a failed
// criterion with the error text in details, never thrown.
Criterion run(int id, const Options& opt = {});

// "[PASS] 4 ..." style single line plus indented detail lines.
std::string format(const Criterion& c, bool with_details = true);

}  // namespace hvdp::checks
