#pragma once
// DCT interpolation filter (DCTIF) coefficient generation.
//
// A filter of N tabs interpolates f(i + r*alpha), alpha = 1/2^j, from N
// consecutive stored samples. The real-valued weight of tap m (0-based within
// the frame) at fractional index t is taken from the orthonormal DCT-II basis:
//
//   h_m(t) = 1/N + (2/N) * sum_{k=1}^{N-1} cos(pi k (2m+1) / 2N)
//                                        * cos(pi k (2t+1) / 2N)
//
// Even frames of 2M tabs span sample offsets -(M-1)..M around the base sample
// i; odd frames of 2M+1 tabs span -M..M around their centre sample.
//
// Two centering rules are provided:
//  * EvenFrame   — the even-frame formula across the full frame. Combined
//                  with a cosine smoothing window this yields the
//                  high-accuracy engine filters.
//  * NearestOdd  — positions off the interval midpoint use an (N-1)-tap odd
//                  filter centred on the nearest sample, zero-padded into the
//                  N-tab frame; the midpoint (and 2-tab frames) use the even
//                  formula. With no smoothing window this reproduces the
//                  reference coefficient table exactly (see
//                  docs/accuracy_notes.md for the window-search evidence).
//
// Finalization: optional cosine window -> renormalize to unit sum -> scale by
// 2^s -> round half away from zero -> largest-remainder correction until the
// integer sum is exactly 2^s.

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fixedpoint.hpp"

namespace dctif {

struct DctifParams {
    int tab_count = 4;    // 2..7
    int j = 2;            // alpha = 1/2^j, 1 <= j <= 6
    int s = 4;            // integer coefficients sum to 2^s, 1 <= s <= 8
    int window_size = 0;  // cosine smoothing window W; 0 = no smoothing
};

struct FractionalPosition {
    int r = 1;  // 1 <= r <= 2^j - 1
    int j = 2;
    double value() const { return std::ldexp(static_cast<double>(r), -j); }
};

struct RealCoefficients {
    std::vector<double> values;
};

struct CoefficientSet {
    DctifParams params;
    FractionalPosition position;
    std::vector<int> values;  // sum == 2^s
};

enum class PositionRule { EvenFrame, NearestOdd };

inline void validate_params(const DctifParams& p) {
    if (p.tab_count < 2 || p.tab_count > 7)
        throw std::invalid_argument("tab_count must be in [2, 7], got " +
                                    std::to_string(p.tab_count));
    if (p.j < 1 || p.j > 6)
        throw std::invalid_argument("j must be in [1, 6], got " + std::to_string(p.j));
    if (p.s < 1 || p.s > 8)
        throw std::invalid_argument("s must be in [1, 8], got " + std::to_string(p.s));
    if (p.window_size != 0 && p.window_size < p.tab_count - 1)
        throw std::invalid_argument("window_size must be 0 (none) or >= tab_count - 1, got " +
                                    std::to_string(p.window_size));
}

inline void validate_position(const DctifParams& p, const FractionalPosition& pos) {
    if (pos.j != p.j)
        throw std::invalid_argument("position j does not match params j");
    if (pos.r < 1 || pos.r >= (1 << pos.j))
        throw std::invalid_argument("r must be in [1, 2^j - 1], got " + std::to_string(pos.r));
}

// Tap offsets n relative to the base sample i: even 2M tabs -> -(M-1)..M,
// odd 2M+1 tabs -> -M..M.
inline std::vector<int> frame_offsets(int tab_count) {
    std::vector<int> out;
    const int m = tab_count / 2;
    const int lo = (tab_count % 2 == 0) ? -(m - 1) : -m;
    for (int n = lo; n <= m; ++n) out.push_back(n);
    return out;
}

namespace detail {

inline double dct2_weight(int n_points, int m, double t) {
    const double pi = std::numbers::pi;
    double acc = 1.0 / n_points;
    for (int k = 1; k < n_points; ++k)
        acc += (2.0 / n_points) * std::cos(pi * k * (2 * m + 1) / (2.0 * n_points)) *
               std::cos(pi * k * (2 * t + 1) / (2.0 * n_points));
    return acc;
}

// Full-frame weights for a frame of n_points at fractional index t (measured
// from the frame's first tap).
inline std::vector<double> frame_weights(int n_points, double t) {
    std::vector<double> w(n_points);
    for (int m = 0; m < n_points; ++m) w[m] = dct2_weight(n_points, m, t);
    return w;
}

}  // namespace detail

inline RealCoefficients generate_raw_coefficients(const DctifParams& p,
                                                  const FractionalPosition& pos,
                                                  PositionRule rule = PositionRule::EvenFrame) {
    validate_params(p);
    validate_position(p, pos);
    const double ra = pos.value();
    const int m = p.tab_count / 2;

    if (p.tab_count % 2 == 1)  // odd frame centred on the base sample
        return {detail::frame_weights(p.tab_count, ra + m)};

    const bool midpoint = (pos.r * 2 == (1 << pos.j));
    if (rule == PositionRule::EvenFrame || midpoint || p.tab_count == 2)
        return {detail::frame_weights(p.tab_count, ra + (m - 1))};

    // NearestOdd: (N-1)-tap odd sub-filter centred on the nearest sample,
    // zero-padded to the N-tab frame on the far side.
    const int sub = p.tab_count - 1;
    const int ms = sub / 2;
    std::vector<double> vals;
    if (ra < 0.5) {  // centred on i: occupies frame slots 0..N-2
        vals = detail::frame_weights(sub, ra + ms);
        vals.push_back(0.0);
    } else {  // centred on i+1: occupies frame slots 1..N-1
        vals = detail::frame_weights(sub, (ra - 1.0) + ms);
        vals.insert(vals.begin(), 0.0);
    }
    return {vals};
}

// Cosine smoothing window w_n = cos(pi (n - r*alpha) / (W - 1)) over tap
// offsets n. window_size 0 is the identity. The window must stay strictly
// positive over every nonzero tap, otherwise the configuration is rejected
// (a zero/negative window weight would corrupt the renormalization).
inline RealCoefficients apply_window(const RealCoefficients& raw, const DctifParams& p,
                                     const FractionalPosition& pos) {
    if (p.window_size == 0) return raw;
    const double ra = pos.value();
    const auto offsets = frame_offsets(p.tab_count);
    std::vector<double> out(raw.values.size());
    for (std::size_t idx = 0; idx < raw.values.size(); ++idx) {
        const double w =
            std::cos(std::numbers::pi * (offsets[idx] - ra) / (p.window_size - 1));
        if (raw.values[idx] != 0.0 && w <= 0.0)
            throw std::invalid_argument(
                "window_size " + std::to_string(p.window_size) +
                " is non-positive over the filter support at r=" + std::to_string(pos.r));
        out[idx] = raw.values[idx] * w;
    }
    return {out};
}

// Window -> renormalize -> scale by 2^s -> round half away from zero ->
// largest-remainder correction so the integer sum is exactly 2^s.
inline CoefficientSet finalize_coefficients(const RealCoefficients& raw, const DctifParams& p,
                                            const FractionalPosition& pos) {
    validate_params(p);
    validate_position(p, pos);
    const RealCoefficients windowed = apply_window(raw, p, pos);

    double total = 0.0;
    for (double v : windowed.values) total += v;
    if (!(total > 0.0))
        throw std::invalid_argument("windowed coefficients have non-positive sum");

    const double scale = std::ldexp(1.0, p.s) / total;
    std::vector<double> scaled(windowed.values.size());
    std::vector<int> ints(windowed.values.size());
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        scaled[i] = windowed.values[i] * scale;
        ints[i] = static_cast<int>(round_half_away(scaled[i]));
        sum += ints[i];
    }

    std::int64_t deficit = (std::int64_t{1} << p.s) - sum;
    while (deficit != 0) {
        // Move one unit toward the entry with the largest rounding residual in
        // the needed direction (leftmost on ties) — the minimal perturbation.
        std::size_t best = 0;
        double best_resid = (deficit > 0) ? -1e300 : 1e300;
        for (std::size_t i = 0; i < ints.size(); ++i) {
            const double resid = scaled[i] - ints[i];
            if ((deficit > 0 && resid > best_resid) || (deficit < 0 && resid < best_resid)) {
                best_resid = resid;
                best = i;
            }
        }
        ints[best] += (deficit > 0) ? 1 : -1;
        deficit += (deficit > 0) ? -1 : 1;
    }
    return {p, pos, ints};
}

inline CoefficientSet make_coefficient_set(const DctifParams& p, const FractionalPosition& pos,
                                           PositionRule rule = PositionRule::EvenFrame) {
    return finalize_coefficients(generate_raw_coefficients(p, pos, rule), p, pos);
}

// All positions r in [1, 2^j - 1], keyed by r.
inline std::map<int, CoefficientSet> coefficient_table(
    const DctifParams& p, PositionRule rule = PositionRule::EvenFrame) {
    validate_params(p);
    std::map<int, CoefficientSet> out;
    for (int r = 1; r < (1 << p.j); ++r)
        out.emplace(r, make_coefficient_set(p, FractionalPosition{r, p.j}, rule));
    return out;
}

// ---------------------------------------------------------------------------
// Reference coefficient table (golden vectors): 4- and 6-tab filters at
// alpha = 1/4 for s = 4 and s = 5. Reproduced exactly by the NearestOdd rule
// with no smoothing window.
// ---------------------------------------------------------------------------
struct GoldenVector {
    int tab_count;
    int s;
    int r;  // j = 2 throughout
    std::vector<int> values;
};

inline const std::vector<GoldenVector>& golden_vectors() {
    static const std::vector<GoldenVector> table = {
        {4, 4, 1, {-2, 15, 3, 0}},        {4, 4, 2, {-2, 10, 10, -2}},
        {4, 4, 3, {0, 3, 15, -2}},        {4, 5, 1, {-3, 29, 6, 0}},
        {4, 5, 2, {-3, 19, 19, -3}},      {4, 5, 3, {0, 6, 29, -3}},
        {6, 4, 1, {1, -2, 14, 4, -1, 0}}, {6, 4, 2, {1, -3, 10, 10, -3, 1}},
        {6, 4, 3, {0, -1, 4, 14, -2, 1}}, {6, 5, 1, {1, -5, 29, 9, -2, 0}},
        {6, 5, 2, {1, -5, 20, 20, -5, 1}},{6, 5, 3, {0, -2, 9, 29, -5, 1}},
    };
    return table;
}

struct GoldenCheckResult {
    int matched = 0;
    int total = 0;
    std::vector<std::string> mismatches;
    bool ok() const { return matched == total; }
};

inline GoldenCheckResult golden_check() {
    GoldenCheckResult res;
    for (const auto& g : golden_vectors()) {
        ++res.total;
        DctifParams p{g.tab_count, 2, g.s, 0};
        const auto set = make_coefficient_set(p, {g.r, 2}, PositionRule::NearestOdd);
        if (set.values == g.values) {
            ++res.matched;
        } else {
            std::string msg = "tabs=" + std::to_string(g.tab_count) + " s=" + std::to_string(g.s) +
                              " r=" + std::to_string(g.r) + " got {";
            for (std::size_t i = 0; i < set.values.size(); ++i)
                msg += (i ? "," : "") + std::to_string(set.values[i]);
            msg += "}";
            res.mismatches.push_back(msg);
        }
    }
    return res;
}

}  // namespace dctif
