#pragma once
// Bit-exact software model of the three-region tanh approximation hardware:
// region decoder, sample memory, address decoder, DCTIF interpolation
// datapath (single-shot and two-cycle pair-accumulation forms), and the
// output multiplexer.
//
// Conventions, chosen once and asserted by tests:
//  * Inputs are signed fixed point; the sign is folded out first and re-applied
//    by negation at the end, so evaluation is odd-symmetric at the code level.
//    The most-negative input code has no positive counterpart; its magnitude
//    saturates to the maximum positive code.
//  * The sample memory stores |tanh| magnitudes only — one word per sample of
//    width sample_fmt.frac_bits. A logical sample index below zero reflects:
//    lookup(-k) = -lookup(k), exact because tanh is odd.
//  * Region thresholds are snapped outward onto the input grid (pass end
//    floored, saturation start ceiled) so the analytic region guarantees
//    survive quantization.
//  * Saturation drives every magnitude bit of the output port high (the
//    maximum positive output code).
//  * The interpolation dot product adds a rounding offset 2^(s-1) before the
//    arithmetic right shift by s.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "coeffgen.hpp"
#include "fixedpoint.hpp"
#include "regions.hpp"

namespace dctif {

struct SampleTable {
    std::vector<std::int64_t> codes;  // |tanh| magnitude words
    int first_index = 0;              // logical sample index of codes[0] (>= 0)
    double base = 0.0;                // x of codes[0]
    double spacing = 0.0;             // 2^-g between samples
    int g = 0;
    int guard = 0;                    // per-side padding allowance, ceil(tabs/2)
    QFormat sample_fmt;               // Q0.f; stored word width = f (magnitude only)

    int word_bits() const { return sample_fmt.frac_bits; }
    bool empty() const { return codes.empty(); }

    std::int64_t lookup(int k) const {
        if (k < 0) return -lookup(-k);  // odd-symmetry reflection
        const int idx = k - first_index;
        if (idx < 0 || idx >= static_cast<int>(codes.size()))
            throw std::out_of_range("sample index " + std::to_string(k) +
                                    " outside stored table");
        return codes[static_cast<std::size_t>(idx)];
    }
};

struct EngineConfig {
    DctifParams params;
    PositionRule rule = PositionRule::EvenFrame;
    double eps_max = 1e-5;
    QFormat in_fmt{3, 6};
    QFormat sample_fmt{0, 17};
    QFormat out_fmt{0, 17};
    std::string name;  // optional preset label carried into reports
};

struct ApproxEngine {
    EngineConfig cfg;
    RegionBoundaries bounds;        // analytic (unsnapped) boundaries
    std::int64_t pass_code = 0;     // |code| <= pass_code  -> Pass
    std::int64_t sat_code = 0;      // |code| >= sat_code   -> Saturation
    SampleTable table;
    std::vector<CoefficientSet> coeff_by_r;  // index r-1, r in [1, 2^j - 1]
    int lo_tap = 0;
    int hi_tap = 0;

    int j() const { return cfg.params.j; }
    int s() const { return cfg.params.s; }
    double granularity() const { return cfg.in_fmt.resolution(); }
};

inline ApproxEngine build_engine(const EngineConfig& cfg) {
    validate_params(cfg.params);
    validate_format(cfg.in_fmt);
    validate_format(cfg.sample_fmt);
    validate_format(cfg.out_fmt);

    ApproxEngine e;
    e.cfg = cfg;

    // Input granularity must equal spacing * alpha: spacing = 2^-(frac - j).
    const int g = cfg.in_fmt.frac_bits - cfg.params.j;
    if (g < 0)
        throw std::invalid_argument(
            "input format too coarse: frac_bits must be >= j so the sample grid "
            "spacing 2^-(frac_bits - j) exists");

    e.bounds = compute_boundaries(cfg.eps_max);
    e.pass_code = static_cast<std::int64_t>(
        std::floor(std::ldexp(e.bounds.pass_end, cfg.in_fmt.frac_bits)));
    e.sat_code = static_cast<std::int64_t>(
        std::ceil(std::ldexp(e.bounds.sat_start, cfg.in_fmt.frac_bits)));

    const auto offsets = frame_offsets(cfg.params.tab_count);
    e.lo_tap = offsets.front();
    e.hi_tap = offsets.back();

    e.table.g = g;
    e.table.spacing = std::ldexp(1.0, -g);
    e.table.guard = (cfg.params.tab_count + 1) / 2;
    e.table.sample_fmt = cfg.sample_fmt;

    const std::int64_t first_pr = e.pass_code + 1;
    const std::int64_t last_pr = std::min(e.sat_code - 1, cfg.in_fmt.max_raw());
    if (first_pr <= last_pr) {
        const int i_lo = static_cast<int>(first_pr >> cfg.params.j);
        const int i_hi = static_cast<int>(last_pr >> cfg.params.j);
        const int store_lo = std::max(0, i_lo + e.lo_tap);
        const int store_hi = i_hi + e.hi_tap;
        e.table.first_index = store_lo;
        e.table.base = store_lo * e.table.spacing;
        e.table.codes.reserve(static_cast<std::size_t>(store_hi - store_lo + 1));
        for (int k = store_lo; k <= store_hi; ++k) {
            const double x = k * e.table.spacing;
            e.table.codes.push_back(quantize(std::tanh(x), cfg.sample_fmt).raw);
        }
        for (int r = 1; r < (1 << cfg.params.j); ++r)
            e.coeff_by_r.push_back(
                make_coefficient_set(cfg.params, FractionalPosition{r, cfg.params.j}, cfg.rule));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Address decoding
// ---------------------------------------------------------------------------
struct AddressInfo {
    bool at_sample = false;
    int base_index = 0;                // sample index i
    int r = 0;                         // fractional position (0 when at_sample)
    std::vector<int> sample_indices;   // the tab_count window, or {i} at a sample
};

// Precondition: |x| lies in the processing region of the engine.
inline AddressInfo address_decode(const FxpValue& x, const ApproxEngine& e) {
    if (!(x.format == e.cfg.in_fmt))
        throw std::invalid_argument("address_decode: input format mismatch");
    std::int64_t u = x.raw < 0 ? -x.raw : x.raw;
    if (u > e.cfg.in_fmt.max_raw()) u = e.cfg.in_fmt.max_raw();
    if (u <= e.pass_code || u >= e.sat_code)
        throw std::invalid_argument("address_decode: input is not in the processing region");

    AddressInfo info;
    info.base_index = static_cast<int>(u >> e.j());
    info.r = static_cast<int>(u & ((std::int64_t{1} << e.j()) - 1));
    info.at_sample = (info.r == 0);
    if (info.at_sample) {
        info.sample_indices = {info.base_index};
    } else {
        for (int n = e.lo_tap; n <= e.hi_tap; ++n)
            info.sample_indices.push_back(info.base_index + n);
    }
    return info;
}

// ---------------------------------------------------------------------------
// Interpolation datapath
// ---------------------------------------------------------------------------
namespace detail {
inline FxpValue finish_accumulator(std::int64_t acc, int s, const QFormat& sample_fmt,
                                   const QFormat& out_fmt) {
    acc += std::int64_t{1} << (s - 1);
    acc >>= s;  // arithmetic shift: round-half-up of the scaled sum
    return truncate_to(FxpValue{acc, sample_fmt}, out_fmt);
}
}  // namespace detail

// Single-shot integer dot product.
inline FxpValue interpolate(const std::vector<FxpValue>& samples, const CoefficientSet& cs,
                            const QFormat& out_fmt) {
    if (samples.size() != cs.values.size())
        throw std::invalid_argument("interpolate: sample/coefficient count mismatch");
    std::int64_t acc = 0;
    for (std::size_t t = 0; t < samples.size(); ++t)
        acc += static_cast<std::int64_t>(cs.values[t]) * samples[t].raw;
    return detail::finish_accumulator(acc, cs.params.s, samples.empty() ? QFormat{0, 1}
                                                                        : samples[0].format,
                                      out_fmt);
}

struct TwoCycleResult {
    FxpValue value;
    int cycles = 0;
};

// Pair-accumulation form: taps are grouped into pairs; each model cycle the
// shared adder folds one pair's partial sum into the accumulator. The rounding
// offset and shift apply once at the end, so the result is bit-identical to
// the single-shot dot product (asserted exhaustively by tests).
inline TwoCycleResult interpolate_two_cycle(const std::vector<FxpValue>& samples,
                                            const CoefficientSet& cs, const QFormat& out_fmt) {
    if (samples.size() != cs.values.size())
        throw std::invalid_argument("interpolate: sample/coefficient count mismatch");
    std::int64_t acc = 0;
    int cycles = 0;
    for (std::size_t t = 0; t < samples.size(); t += 2) {
        std::int64_t pair = static_cast<std::int64_t>(cs.values[t]) * samples[t].raw;
        if (t + 1 < samples.size())
            pair += static_cast<std::int64_t>(cs.values[t + 1]) * samples[t + 1].raw;
        acc += pair;
        ++cycles;
    }
    return {detail::finish_accumulator(acc, cs.params.s,
                                       samples.empty() ? QFormat{0, 1} : samples[0].format,
                                       out_fmt),
            cycles};
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------
struct EvalTrace {
    FxpValue out;
    Region region = Region::Pass;
    bool at_sample = false;
    int cycles = 1;
};

inline EvalTrace evaluate_traced(const FxpValue& x, const ApproxEngine& e) {
    if (!(x.format == e.cfg.in_fmt))
        throw std::invalid_argument("evaluate: input format mismatch");
    const bool neg = x.raw < 0;
    std::int64_t u = neg ? -x.raw : x.raw;
    if (u > e.cfg.in_fmt.max_raw()) u = e.cfg.in_fmt.max_raw();  // most-negative code

    EvalTrace t;
    if (u <= e.pass_code) {
        t.region = Region::Pass;
        t.out = truncate_to(FxpValue{u, e.cfg.in_fmt}, e.cfg.out_fmt);
    } else if (u >= e.sat_code) {
        t.region = Region::Saturation;
        t.out = FxpValue{e.cfg.out_fmt.max_raw(), e.cfg.out_fmt};
    } else {
        t.region = Region::Processing;
        const int i = static_cast<int>(u >> e.j());
        const int r = static_cast<int>(u & ((std::int64_t{1} << e.j()) - 1));
        if (r == 0) {
            t.at_sample = true;
            t.out = truncate_to(FxpValue{e.table.lookup(i), e.cfg.sample_fmt}, e.cfg.out_fmt);
        } else {
            std::vector<FxpValue> window;
            window.reserve(static_cast<std::size_t>(e.hi_tap - e.lo_tap + 1));
            for (int n = e.lo_tap; n <= e.hi_tap; ++n)
                window.push_back(FxpValue{e.table.lookup(i + n), e.cfg.sample_fmt});
            const auto res = interpolate_two_cycle(window, e.coeff_by_r[static_cast<std::size_t>(r - 1)],
                                                   e.cfg.out_fmt);
            t.out = res.value;
            t.cycles = res.cycles;
        }
    }
    if (neg) t.out.raw = -t.out.raw;
    return t;
}

inline FxpValue evaluate(const FxpValue& x, const ApproxEngine& e) {
    return evaluate_traced(x, e).out;
}

// Convenience: quantize a real input, evaluate, return the real output.
inline double evaluate_real(double x, const ApproxEngine& e) {
    return to_real(evaluate(quantize(x, e.cfg.in_fmt), e));
}

}  // namespace dctif
