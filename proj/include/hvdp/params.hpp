#pragma once

namespace hvdp {

// lambda = (omega, eps) for x'' + eps (x^2 - 1) x' + omega^2 x = 0.
struct Params {
    double omega = 1.0;
    double eps = 0.0;
};

// Throws InvalidArgument unless omega > 0, eps >= 0 and both are finite.
void validate(const Params& p);

}  // namespace hvdp
