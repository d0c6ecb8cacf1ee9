#include "civicpulse/exactsum.hpp"

#include <cmath>

#include "civicpulse/errors.hpp"

namespace civicpulse {

namespace {

// Highest set bit position (0-based), or -1 for zero.
template <std::size_t N>
int top_bit(const std::array<std::uint64_t, N>& limbs) {
    for (int i = static_cast<int>(N) - 1; i >= 0; --i) {
        if (limbs[static_cast<std::size_t>(i)] != 0) {
            return i * 64 + 63 - __builtin_clzll(limbs[static_cast<std::size_t>(i)]);
        }
    }
    return -1;
}

// Bits [lo, hi] inclusive as an integer; hi - lo <= 62.
template <std::size_t N>
std::uint64_t bit_range(const std::array<std::uint64_t, N>& limbs, int lo, int hi) {
    std::uint64_t out = 0;
    for (int b = hi; b >= lo; --b) {
        const int limb = b / 64;
        const int off = b % 64;
        const std::uint64_t bit =
            (limbs[static_cast<std::size_t>(limb)] >> off) & 1u;
        out = (out << 1) | bit;
    }
    return out;
}

template <std::size_t N>
bool any_bit_below(const std::array<std::uint64_t, N>& limbs, int pos) {
    if (pos <= 0) return false;
    const int full = pos / 64;
    for (int i = 0; i < full; ++i) {
        if (limbs[static_cast<std::size_t>(i)] != 0) return true;
    }
    const int rest = pos % 64;
    if (rest > 0 &&
        (limbs[static_cast<std::size_t>(full)] & ((std::uint64_t{1} << rest) - 1)) != 0) {
        return true;
    }
    return false;
}

// a -= b, assuming a >= b.
template <std::size_t N>
void subtract(std::array<std::uint64_t, N>& a, const std::array<std::uint64_t, N>& b) {
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const std::uint64_t bi = b[i] + borrow;
        borrow = (bi < b[i]) ? 1 : (a[i] < bi ? 1 : 0);
        a[i] -= bi;
    }
}

template <std::size_t N>
int compare(const std::array<std::uint64_t, N>& a, const std::array<std::uint64_t, N>& b) {
    for (int i = static_cast<int>(N) - 1; i >= 0; --i) {
        const std::size_t u = static_cast<std::size_t>(i);
        if (a[u] != b[u]) return a[u] < b[u] ? -1 : 1;
    }
    return 0;
}

}  // namespace

void ExactSum::accumulate(Limbs& limbs, std::uint64_t mantissa, int bitpos) {
    // The low word lands at bitpos/64; the carry loop guards everything above.
    if (bitpos < 0 || bitpos >= kLimbs * 64) {
        throw PipelineError("ExactSum: magnitude out of range");
    }
    const int limb = bitpos / 64;
    const int off = bitpos % 64;
    unsigned __int128 wide = static_cast<unsigned __int128>(mantissa) << off;
    std::uint64_t carry_word = static_cast<std::uint64_t>(wide);
    std::size_t at = static_cast<std::size_t>(limb);
    // Add the low word, then the high word, propagating carries upward.
    std::uint64_t before = limbs[at];
    limbs[at] += carry_word;
    std::uint64_t carry = (limbs[at] < before) ? 1 : 0;
    std::uint64_t high = static_cast<std::uint64_t>(wide >> 64) + carry;
    ++at;
    while (high != 0) {
        if (at >= limbs.size()) throw PipelineError("ExactSum: magnitude overflow");
        before = limbs[at];
        limbs[at] += high;
        high = (limbs[at] < before) ? 1 : 0;
        ++at;
    }
}

void ExactSum::add(double x) {
    if (!std::isfinite(x)) throw PipelineError("ExactSum: non-finite addend");
    if (x == 0.0) return;

    int exp = 0;
    const double mag = std::frexp(std::fabs(x), &exp);  // mag in [0.5, 1)
    const std::uint64_t mantissa =
        static_cast<std::uint64_t>(std::ldexp(mag, 53));  // exact, in [2^52, 2^53)
    const int bitpos = exp - 53 + kFractionBits;          // >= 4 for all finite doubles
    accumulate(x > 0.0 ? pos_ : neg_, mantissa, bitpos);
}

void ExactSum::merge(const ExactSum& other) {
    for (int i = 0; i < kLimbs; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        if (other.pos_[u] != 0) accumulate(pos_, other.pos_[u], i * 64);
        if (other.neg_[u] != 0) accumulate(neg_, other.neg_[u], i * 64);
    }
}

double ExactSum::value() const {
    const int cmp = compare(pos_, neg_);
    if (cmp == 0) return 0.0;

    Limbs mag = cmp > 0 ? pos_ : neg_;
    subtract(mag, cmp > 0 ? neg_ : pos_);
    const double sign = cmp > 0 ? 1.0 : -1.0;

    const int high = top_bit(mag);
    // Value = mag * 2^-kFractionBits; its leading bit has exponent e_top.
    const int e_top = high - kFractionBits;

    int keep_from;  // lowest retained bit; below it: guard + sticky
    if (e_top < -1022) {
        // Subnormal result: round directly onto the 2^-1074 grid to avoid
        // double rounding. (Unreachable for realistic sentiment sums, but
        // correct regardless.)
        keep_from = -1074 + kFractionBits;
        if (high < keep_from) {
            // Entire magnitude sits below half of the smallest subnormal?
            // Delegate the final rounding to ldexp on the exact low bits.
            return sign * std::ldexp(static_cast<double>(bit_range(mag, 0, high)),
                                     -kFractionBits);
        }
    } else {
        keep_from = high - 52;
        if (keep_from <= 0) {
            // 53 or fewer significant bits: exactly representable.
            return sign * std::ldexp(static_cast<double>(bit_range(mag, 0, high)),
                                     -kFractionBits);
        }
    }

    std::uint64_t mantissa = bit_range(mag, keep_from, high);
    const bool guard = keep_from > 0 && bit_range(mag, keep_from - 1, keep_from - 1) != 0;
    const bool sticky = any_bit_below(mag, keep_from - 1);
    if (guard && (sticky || (mantissa & 1u))) {
        ++mantissa;  // round half to even
    }
    return sign * std::ldexp(static_cast<double>(mantissa), keep_from - kFractionBits);
}

}  // namespace civicpulse
