#pragma once

#include <array>
#include <cstdint>

namespace civicpulse {

// Exact accumulator for finite doubles: a wide fixed-point register in the
// style of a Kulisch accumulator. Adding and merging are exact, so the
// represented value is independent of summation order, and value() rounds
// that exact sum to the nearest double (ties to even) once. This is what
// makes binned sums bit-identical whether a corpus is aggregated whole or in
// shards that are merged later.
//
// Capacity: the full finite double range with full subnormal resolution,
// plus ~2^86 worth of headroom above the largest double, so no realistic
// sequence of adds can overflow the register.
class ExactSum {
public:
    // x must be finite; throws PipelineError otherwise.
    void add(double x);

    // Exact, associative, commutative.
    void merge(const ExactSum& other);

    // The exact sum rounded once to the nearest double.
    double value() const;

    bool operator==(const ExactSum& other) const = default;

private:
    static constexpr int kLimbs = 35;          // 35 * 64 = 2240 bits
    static constexpr int kFractionBits = 1130; // LSB weight = 2^-1130

    using Limbs = std::array<std::uint64_t, kLimbs>;

    // Positive and negative magnitudes accumulate separately; the signed
    // value is (pos - neg) * 2^-kFractionBits.
    Limbs pos_{};
    Limbs neg_{};

    static void accumulate(Limbs& limbs, std::uint64_t mantissa, int bitpos);
};

}  // namespace civicpulse
