#pragma once
// Small fully-connected networks with pluggable tanh implementations, used to
// measure how activation-approximation accuracy affects training and testing.
//
// Fixed training recipe (kept deliberately plain so runs are reproducible):
// per-sample SGD, learning rate 0.01, MSE loss (one-hot targets for
// classification), Xavier-uniform weight init with zero biases, tanh on every
// layer including the output, activation derivative computed as 1 - f(x)^2
// with f the possibly-approximate activation itself (the forward value a
// hardware path would feed back). All randomness flows through the portable
// mt19937_64 helpers, so a seed pins the whole run.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "datasets.hpp"
#include "hwmodel.hpp"
#include "presets.hpp"

namespace dctif {

struct MlpArchitecture {
    int input_dim = 1;
    int hidden_layers = 4;
    int neurons_per_layer = 5;
    int output_dim = 1;
};

inline void validate_arch(const MlpArchitecture& a) {
    if (a.input_dim < 1 || a.hidden_layers < 1 || a.neurons_per_layer < 1 || a.output_dim < 1)
        throw std::invalid_argument("architecture dimensions must all be >= 1");
}

// "4x5" -> 4 hidden layers of 5 neurons.
inline MlpArchitecture parse_arch(const std::string& text, int input_dim, int output_dim) {
    const auto x = text.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= text.size())
        throw std::invalid_argument("architecture must look like '4x5', got '" + text + "'");
    MlpArchitecture a;
    a.input_dim = input_dim;
    a.output_dim = output_dim;
    a.hidden_layers = std::stoi(text.substr(0, x));
    a.neurons_per_layer = std::stoi(text.substr(x + 1));
    validate_arch(a);
    return a;
}

// ---------------------------------------------------------------------------
// Activation
// ---------------------------------------------------------------------------
struct ActivationSpec {
    enum class Kind { Exact, Engine };
    Kind kind = Kind::Exact;
    const ApproxEngine* engine = nullptr;  // borrowed; caller keeps it alive

    static ActivationSpec exact() { return {}; }
    static ActivationSpec approx(const ApproxEngine& e) {
        ActivationSpec s;
        s.kind = Kind::Engine;
        s.engine = &e;
        return s;
    }

    double operator()(double z) const {
        return kind == Kind::Exact ? std::tanh(z) : evaluate_real(z, *engine);
    }
};

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------
struct Hyperparams {
    int epochs = 10000;
    double lr = 0.01;
    std::uint64_t seed = 7;
    int patience = 500;        // early stop: epochs without improvement
    double min_improve = 1e-9; // required epoch-loss improvement
};

struct Model {
    MlpArchitecture arch;
    // One matrix per layer, row-major (rows = out, cols = in + 1; bias last).
    std::vector<std::vector<double>> weights;
    bool diverged = false;
    int stop_epoch = 0;  // epochs actually run
    double final_train_loss = 0.0;
    std::vector<double> loss_trace;  // mean train loss per epoch
};

namespace detail {
inline std::vector<int> layer_sizes(const MlpArchitecture& a) {
    std::vector<int> sizes{a.input_dim};
    for (int l = 0; l < a.hidden_layers; ++l) sizes.push_back(a.neurons_per_layer);
    sizes.push_back(a.output_dim);
    return sizes;
}
}  // namespace detail

inline Model init_model(const MlpArchitecture& arch, std::mt19937_64& eng) {
    validate_arch(arch);
    Model m;
    m.arch = arch;
    const auto sizes = detail::layer_sizes(arch);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int fan_in = sizes[l], fan_out = sizes[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        std::vector<double> w(static_cast<std::size_t>(fan_out) * (fan_in + 1), 0.0);
        for (int row = 0; row < fan_out; ++row)
            for (int col = 0; col < fan_in; ++col)  // biases stay zero
                w[static_cast<std::size_t>(row) * (fan_in + 1) + col] =
                    (2.0 * portable_uniform(eng) - 1.0) * bound;
        m.weights.push_back(std::move(w));
    }
    return m;
}

inline Model init_model(const MlpArchitecture& arch, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    return init_model(arch, eng);
}

// Forward pass returning every layer's activations (index 0 = the input).
inline void forward_activations(const Model& m, const std::vector<double>& x,
                                const ActivationSpec& act,
                                std::vector<std::vector<double>>& acts) {
    const auto sizes = detail::layer_sizes(m.arch);
    acts.resize(sizes.size());
    acts[0] = x;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int fan_in = sizes[l], fan_out = sizes[l + 1];
        auto& out = acts[l + 1];
        out.assign(static_cast<std::size_t>(fan_out), 0.0);
        const auto& w = m.weights[l];
        const auto& in = acts[l];
        for (int row = 0; row < fan_out; ++row) {
            const double* wr = w.data() + static_cast<std::size_t>(row) * (fan_in + 1);
            double z = wr[fan_in];  // bias
            for (int col = 0; col < fan_in; ++col) z += wr[col] * in[static_cast<std::size_t>(col)];
            out[static_cast<std::size_t>(row)] = act(z);
        }
    }
}

inline std::vector<double> forward(const Model& m, const std::vector<double>& x,
                                   const ActivationSpec& act) {
    std::vector<std::vector<double>> acts;
    forward_activations(m, x, act, acts);
    return acts.back();
}

// ---------------------------------------------------------------------------
// Training (per-sample SGD over shuffled epochs)
// ---------------------------------------------------------------------------
inline Model train(const MlpArchitecture& arch, const Dataset& ds, const ActivationSpec& act,
                   const Hyperparams& hp) {
    if (!ds.train.empty()) {
        if (static_cast<int>(ds.train.front().x.size()) != arch.input_dim ||
            static_cast<int>(ds.train.front().y.size()) != arch.output_dim)
            throw std::invalid_argument("architecture does not match dataset dimensions");
    }
    std::mt19937_64 eng(hp.seed);
    Model m = init_model(arch, eng);
    const auto sizes = detail::layer_sizes(arch);
    const std::size_t n_layers = sizes.size() - 1;
    const std::size_t n = ds.train.size();

    std::vector<std::vector<double>> acts(sizes.size());
    std::vector<std::vector<double>> delta(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l)
        delta[l].assign(static_cast<std::size_t>(sizes[l + 1]), 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    double best = 1e300;
    int streak = 0;
    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        // Fisher-Yates reshuffle, continuing the seeded stream.
        for (std::size_t i = n; i > 1; --i) {
            const auto jj =
                static_cast<std::size_t>(portable_uniform(eng) * static_cast<double>(i));
            std::swap(order[i - 1], order[jj < i ? jj : i - 1]);
        }
        double loss_sum = 0.0;
        for (std::size_t pick = 0; pick < n; ++pick) {
            const Sample& smp = ds.train[order[pick]];
            forward_activations(m, smp.x, act, acts);

            // Output delta: d(mean squared error)/dz with derivative 1 - f^2.
            const auto& out = acts[n_layers];
            const double inv_k = 1.0 / static_cast<double>(arch.output_dim);
            for (int kk = 0; kk < arch.output_dim; ++kk) {
                const double a = out[static_cast<std::size_t>(kk)];
                const double diff = a - smp.y[static_cast<std::size_t>(kk)];
                loss_sum += diff * diff * inv_k;
                delta[n_layers - 1][static_cast<std::size_t>(kk)] =
                    2.0 * inv_k * diff * (1.0 - a * a);
            }
            // Backpropagate with pre-update weights, then update layer by layer.
            for (std::size_t l = n_layers; l-- > 0;) {
                const int fan_in = sizes[l], fan_out = sizes[l + 1];
                auto& w = m.weights[l];
                if (l > 0) {
                    auto& dprev = delta[l - 1];
                    for (int col = 0; col < fan_in; ++col) {
                        double acc = 0.0;
                        for (int row = 0; row < fan_out; ++row)
                            acc += w[static_cast<std::size_t>(row) * (fan_in + 1) + col] *
                                   delta[l][static_cast<std::size_t>(row)];
                        const double a = acts[l][static_cast<std::size_t>(col)];
                        dprev[static_cast<std::size_t>(col)] = acc * (1.0 - a * a);
                    }
                }
                const auto& in = acts[l];
                for (int row = 0; row < fan_out; ++row) {
                    double* wr = w.data() + static_cast<std::size_t>(row) * (fan_in + 1);
                    const double step = hp.lr * delta[l][static_cast<std::size_t>(row)];
                    for (int col = 0; col < fan_in; ++col)
                        wr[col] -= step * in[static_cast<std::size_t>(col)];
                    wr[fan_in] -= step;  // bias
                }
            }
        }
        const double epoch_loss = n ? loss_sum / static_cast<double>(n) : 0.0;
        m.loss_trace.push_back(epoch_loss);
        m.final_train_loss = epoch_loss;
        m.stop_epoch = epoch + 1;
        if (!std::isfinite(epoch_loss)) {  // divergence is flagged, never thrown
            m.diverged = true;
            break;
        }
        if (epoch_loss < best - hp.min_improve) {
            best = epoch_loss;
            streak = 0;
        } else if (++streak >= hp.patience) {
            break;  // early stop: no meaningful improvement for `patience` epochs
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------
struct Metrics {
    double mse = 0.0;
    double corr = 0.0;      // Pearson correlation, predictions vs targets
    double acc = 0.0;       // percent correct (classification)
    double norm_mse = 0.0;  // mse - mse of the matched exact run
};

inline Metrics evaluate_model(const Model& m, const std::vector<Sample>& data,
                              const ActivationSpec& act) {
    Metrics out;
    if (data.empty()) return out;
    double se = 0.0;
    double sp = 0.0, st = 0.0, spp = 0.0, stt = 0.0, spt = 0.0;
    std::size_t n_vals = 0, correct = 0;
    std::vector<std::vector<double>> acts;
    for (const auto& smp : data) {
        forward_activations(m, smp.x, act, acts);
        const auto& pred = acts.back();
        for (std::size_t k = 0; k < pred.size(); ++k) {
            const double p = pred[k], t = smp.y[k];
            se += (p - t) * (p - t);
            sp += p; st += t; spp += p * p; stt += t * t; spt += p * t;
            ++n_vals;
        }
        if (pred.size() == 1) {
            if ((pred[0] > 0.5) == (smp.y[0] > 0.5)) ++correct;
        } else {
            std::size_t pa = 0, ta = 0;
            for (std::size_t k = 1; k < pred.size(); ++k) {
                if (pred[k] > pred[pa]) pa = k;
                if (smp.y[k] > smp.y[ta]) ta = k;
            }
            if (pa == ta) ++correct;
        }
    }
    const double n = static_cast<double>(n_vals);
    out.mse = se / n;
    const double cov = spt - sp * st / n;
    const double vp = spp - sp * sp / n, vt = stt - st * st / n;
    out.corr = (vp > 0.0 && vt > 0.0) ? cov / std::sqrt(vp * vt) : 0.0;
    out.acc = 100.0 * static_cast<double>(correct) / static_cast<double>(data.size());
    return out;
}

// ---------------------------------------------------------------------------
// Budget study (exact-trained network evaluated under approximations)
// ---------------------------------------------------------------------------
struct StudyRow {
    bool exact = false;
    double budget = 0.0;  // activation max-error budget (0 for the exact row)
    Metrics train;
    Metrics test;
    int stop_epoch = 0;
};

// Trains once with the exact activation, then evaluates the frozen network
// under each budget engine, worst budget first, exact last. norm_mse is
// measured against the exact-evaluation row, which is 0 by construction.
inline std::vector<StudyRow> run_budget_study(const Dataset& ds, const MlpArchitecture& arch,
                                              const Hyperparams& hp,
                                              const std::vector<double>& budgets = budget_levels()) {
    const Model m = train(arch, ds, ActivationSpec::exact(), hp);

    std::vector<ApproxEngine> engines;
    engines.reserve(budgets.size());
    for (double b : budgets) engines.push_back(build_engine(budget_engine_config(b)));

    const Metrics exact_train = evaluate_model(m, ds.train, ActivationSpec::exact());
    const Metrics exact_test = evaluate_model(m, ds.test, ActivationSpec::exact());

    std::vector<StudyRow> rows;
    for (std::size_t i = 0; i < engines.size(); ++i) {
        StudyRow row;
        row.budget = budgets[i];
        const auto act = ActivationSpec::approx(engines[i]);
        row.train = evaluate_model(m, ds.train, act);
        row.test = evaluate_model(m, ds.test, act);
        row.train.norm_mse = row.train.mse - exact_train.mse;
        row.test.norm_mse = row.test.mse - exact_test.mse;
        row.stop_epoch = m.stop_epoch;
        rows.push_back(row);
    }
    StudyRow exact_row;
    exact_row.exact = true;
    exact_row.train = exact_train;
    exact_row.test = exact_test;
    exact_row.stop_epoch = m.stop_epoch;
    rows.push_back(exact_row);
    return rows;
}

}  // namespace dctif
