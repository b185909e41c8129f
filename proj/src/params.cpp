#include "hvdp/params.hpp"

#include <cmath>
#include <string>

#include "hvdp/errors.hpp"

namespace hvdp {

void validate(const Params& p) {
    if (!std::isfinite(p.omega) || !(p.omega > 0.0))
        throw InvalidArgument("omega must be finite and > 0, got " + std::to_string(p.omega));
    if (!std::isfinite(p.eps) || p.eps < 0.0)
        throw InvalidArgument("eps must be finite and >= 0, got " + std::to_string(p.eps));
}

}  // namespace hvdp
