#pragma once
// Signed fixed-point (Q-format) values and the exact integer conversions the
// hardware model is built on. All datapath arithmetic downstream of quantize()
// is integer-exact; the only rounding in this module is the documented
// round-half-away-from-zero in quantize() and the floor in truncate_to().

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dctif {

struct QFormat {
    int int_bits = 0;   // integer bits, sign excluded
    int frac_bits = 1;  // fraction bits

    constexpr int width() const { return 1 + int_bits + frac_bits; }
    constexpr std::int64_t max_raw() const {
        return (std::int64_t{1} << (width() - 1)) - 1;
    }
    constexpr std::int64_t min_raw() const {
        return -(std::int64_t{1} << (width() - 1));
    }
    double resolution() const { return std::ldexp(1.0, -frac_bits); }

    friend constexpr bool operator==(const QFormat& a, const QFormat& b) {
        return a.int_bits == b.int_bits && a.frac_bits == b.frac_bits;
    }
};

inline void validate_format(const QFormat& fmt) {
    if (fmt.int_bits < 0 || fmt.frac_bits < 1 || fmt.width() > 32)
        throw std::invalid_argument(
            "QFormat out of range: Q" + std::to_string(fmt.int_bits) + "." +
            std::to_string(fmt.frac_bits) + " (need int_bits >= 0, frac_bits >= 1, width <= 32)");
}

struct FxpValue {
    std::int64_t raw = 0;
    QFormat format;
};

// Round half away from zero, the quantization rule used everywhere a real
// enters the model. Symmetric about zero so it cannot bias tanh's oddness.
inline std::int64_t round_half_away(double x) {
    return std::llround(x);
}

// raw = clamp(round_half_away(x * 2^frac)); saturates at the format extremes.
inline FxpValue quantize(double x, const QFormat& fmt) {
    validate_format(fmt);
    const double scaled = std::ldexp(x, fmt.frac_bits);
    std::int64_t raw;
    if (scaled >= static_cast<double>(fmt.max_raw()))
        raw = fmt.max_raw();
    else if (scaled <= static_cast<double>(fmt.min_raw()))
        raw = fmt.min_raw();
    else
        raw = round_half_away(scaled);
    if (raw > fmt.max_raw()) raw = fmt.max_raw();
    if (raw < fmt.min_raw()) raw = fmt.min_raw();
    return {raw, fmt};
}

inline double to_real(const FxpValue& v) {
    return std::ldexp(static_cast<double>(v.raw), -v.format.frac_bits);
}

// Format conversion. Dropping fraction bits floors toward -inf (arithmetic
// shift, i.e. hardware bit drop); widening the fraction is exact. The result
// is re-clamped into the destination format.
inline FxpValue truncate_to(const FxpValue& v, const QFormat& fmt) {
    validate_format(fmt);
    std::int64_t raw = v.raw;
    if (v.format.frac_bits >= fmt.frac_bits)
        raw >>= (v.format.frac_bits - fmt.frac_bits);
    else
        raw <<= (fmt.frac_bits - v.format.frac_bits);
    if (raw > fmt.max_raw()) raw = fmt.max_raw();
    if (raw < fmt.min_raw()) raw = fmt.min_raw();
    return {raw, fmt};
}

}  // namespace dctif
