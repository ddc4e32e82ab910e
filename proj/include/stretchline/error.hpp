#pragma once

#include <stdexcept>
#include <string>

namespace stretchline {

// Every throwing path in the library uses one of these. Verifier
// "hypothesis failed" is distinct from an actual conclusion violation:
// the former means the input does not satisfy a lemma's premises, the
// latter is always reported through a certificate, never thrown.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

struct intersecting_error : std::runtime_error {
    explicit intersecting_error(const std::string& what) : std::runtime_error(what) {}
};

struct asymptotic_error : std::runtime_error {
    explicit asymptotic_error(const std::string& what) : std::runtime_error(what) {}
};

struct hypothesis_failed : std::runtime_error {
    explicit hypothesis_failed(const std::string& what) : std::runtime_error(what) {}
};

struct not_applicable : std::runtime_error {
    explicit not_applicable(const std::string& what) : std::runtime_error(what) {}
};

struct not_crossing : std::runtime_error {
    explicit not_crossing(const std::string& what) : std::runtime_error(what) {}
};

struct not_hyperbolic : std::runtime_error {
    explicit not_hyperbolic(const std::string& what) : std::runtime_error(what) {}
};

struct combinatorics_error : std::runtime_error {
    explicit combinatorics_error(const std::string& what) : std::runtime_error(what) {}
};

struct incomplete_structure : std::runtime_error {
    explicit incomplete_structure(const std::string& what) : std::runtime_error(what) {}
};

struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

struct state_error : std::runtime_error {
    explicit state_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace stretchline
