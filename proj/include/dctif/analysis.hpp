#pragma once
// Error and cost characterization: exhaustive per-code error metrics, memory
// accounting, real-input supremum scans, and deterministic (optionally
// parallel) parameter sweeps.

#include <cmath>
#include <cstdint>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "hwmodel.hpp"

namespace dctif {

struct ErrorReport {
    EngineConfig config;
    bool ok = true;            // false when the sweep skipped an invalid config
    std::string note;          // reason when skipped
    double max_err = 0.0;      // max |approx - tanh| over every input code
    double mean_abs_err = 0.0; // mean of the same over every input code
    double argmax_x = 0.0;     // input where the max occurs
    std::int64_t memory_bits = 0;
    std::int64_t samples_count = 0;
};

inline std::int64_t memory_footprint(const ApproxEngine& e) {
    return static_cast<std::int64_t>(e.table.codes.size()) * e.table.word_bits();
}

// Exhaustive over every non-negative input code (code-level odd symmetry makes
// negative codes redundant; that symmetry is asserted separately). Errors are
// measured on the real-valued reconstruction against double-precision tanh of
// the code's real value.
inline ErrorReport max_error(const ApproxEngine& e) {
    ErrorReport rep;
    rep.config = e.cfg;
    rep.memory_bits = memory_footprint(e);
    rep.samples_count = static_cast<std::int64_t>(e.table.codes.size());

    const std::int64_t max_code = e.cfg.in_fmt.max_raw();
    double total = 0.0;
    for (std::int64_t u = 0; u <= max_code; ++u) {
        const FxpValue in{u, e.cfg.in_fmt};
        const double x = to_real(in);
        const double err = std::abs(to_real(evaluate(in, e)) - std::tanh(x));
        total += err;
        if (err > rep.max_err) {
            rep.max_err = err;
            rep.argmax_x = x;
        }
    }
    rep.mean_abs_err = total / static_cast<double>(max_code + 1);
    return rep;
}

// Supremum of |approx(x) - tanh(x)| over real (unquantized) x in [0, x_max],
// scanned on a dense grid plus every code-boundary midpoint. This includes the
// input-quantization contribution that per-code sweeps exclude; it is the
// right bound when arbitrary reals are fed through quantize() (e.g. by the
// neural-network study).
inline double real_input_sup_error(const ApproxEngine& e, int grid_points = 400000,
                                   double x_max = 0.0) {
    if (x_max <= 0.0)
        x_max = std::ldexp(1.0, e.cfg.in_fmt.int_bits);
    double worst = 0.0;
    for (int i = 0; i <= grid_points; ++i) {
        const double x = x_max * i / grid_points;
        const double err = std::abs(evaluate_real(x, e) - std::tanh(x));
        if (err > worst) worst = err;
    }
    // Half-granularity offsets are the quantization worst case; scan the code
    // midpoints of the processing region explicitly as well.
    const double gran = e.granularity();
    for (std::int64_t u = 0; u <= e.cfg.in_fmt.max_raw(); ++u) {
        const double x = (u + 0.4999999) * gran;
        if (x > x_max) break;
        const double err = std::abs(evaluate_real(x, e) - std::tanh(x));
        if (err > worst) worst = err;
    }
    return worst;
}

// One report per config, in input order. Invalid configurations are skipped
// and flagged rather than aborting the sweep. Entries are independent, so the
// sweep fans out across hardware threads; results are merged by input index,
// keeping the output deterministic.
inline std::vector<ErrorReport> sweep(const std::vector<EngineConfig>& grid,
                                      bool parallel = true) {
    std::vector<ErrorReport> out(grid.size());
    auto run_one = [&grid](std::size_t idx) -> ErrorReport {
        try {
            return max_error(build_engine(grid[idx]));
        } catch (const std::exception& ex) {
            ErrorReport rep;
            rep.config = grid[idx];
            rep.ok = false;
            rep.note = ex.what();
            return rep;
        }
    };
    if (!parallel || grid.size() < 2) {
        for (std::size_t i = 0; i < grid.size(); ++i) out[i] = run_one(i);
        return out;
    }
    std::vector<std::future<ErrorReport>> futs;
    futs.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        futs.push_back(std::async(std::launch::async, run_one, i));
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = futs[i].get();
    return out;
}

}  // namespace dctif
