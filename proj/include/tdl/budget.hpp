#pragma once

#include <cstdint>
#include <string>

#include "tdl/error.hpp"

namespace tdl {

/// Upper bound on the number of candidates an exhaustive scan may visit.
/// Scans that would exceed it throw TooLarge instead of falling back to sampling.
struct Budget {
    static constexpr std::uint64_t kDefault = 100'000'000;

    std::uint64_t max_candidates = kDefault;

    void require(std::uint64_t candidates, const std::string& what) const
    {
        if (candidates > max_candidates)
            throw Error(ErrorCode::TooLarge,
                        what + " needs " + std::to_string(candidates) +
                            " candidates, budget is " + std::to_string(max_candidates));
    }
};

/// base^exp, saturating at UINT64_MAX so that budget checks stay meaningful.
constexpr std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > UINT64_MAX / base)
            return UINT64_MAX;
        r *= base;
    }
    return r;
}

} // namespace tdl
