#pragma once

// The per-module invariant suites behind `stretchline verify`. Each suite
// draws its randomness from a stream derived from the root seed, so runs
// are reproducible byte-for-byte.

#include "stretchline/report.hpp"

#include <cstdint>

namespace stretchline::verify {

report::Report verify_hyp2(std::uint64_t seed, double tol);
report::Report verify_collar(std::uint64_t seed, double tol);
report::Report verify_constants(std::uint64_t seed, double tol);
report::Report verify_surface(std::uint64_t seed, double tol);
report::Report verify_analysis(std::uint64_t seed, double tol);

// Circular-order crossing test used as the independent route against
// geodesics_cross: sorts the four boundary points by angle after a Cayley
// transform.
bool interleave_oracle(const hyp2::HGeodesic& g1, const hyp2::HGeodesic& g2);

} // namespace stretchline::verify
