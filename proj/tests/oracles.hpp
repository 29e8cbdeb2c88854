#pragma once

// Independent reference computations used to freeze expected values. None of
// these go through the engine's own selection or scheduling code.

#include "overlap/rules.hpp"

#include <cstdint>
#include <vector>

namespace overlap::oracle {

/// Euclid by repeated subtraction, written directly.
inline std::uint64_t subtraction_gcd(std::uint64_t x, std::uint64_t y)
{
    while (x != y) {
        if (x > y)
            x -= y;
        else
            y -= x;
    }
    return x;
}

/// Entries that no other entry beats, provided they are enabled at all.
inline std::vector<rules::FitnessEntry> best_by_definition(
    const std::vector<rules::FitnessEntry>& registry)
{
    std::vector<rules::FitnessEntry> out;
    for (const auto& e : registry) {
        if (e.fitness.value == 0)
            continue;
        bool beaten = false;
        for (const auto& other : registry)
            beaten = beaten || other.fitness.value > e.fitness.value;
        if (!beaten)
            out.push_back(e);
    }
    return out;
}

inline std::vector<rules::FitnessEntry> down_to_by_definition(
    const std::vector<rules::FitnessEntry>& registry, std::uint32_t threshold)
{
    std::vector<rules::FitnessEntry> out;
    for (const auto& e : registry)
        if (e.fitness.value != 0 && e.fitness.value >= threshold)
            out.push_back(e);
    return out;
}

} // namespace overlap::oracle
