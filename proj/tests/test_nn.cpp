// Neural-network study plumbing: architecture parsing, seeded init, forward
// pass, per-sample SGD training, metrics, and the activation-budget study.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dctif/analysis.hpp"
#include "dctif/nn.hpp"
#include "dctif/presets.hpp"

using namespace dctif;

namespace {
Dataset tiny_regression() {
    Dataset ds;
    ds.name = "tiny";
    ds.task = Task::Regression;
    for (int i = 0; i < 8; ++i) {
        const double x = -1.0 + 2.0 * i / 7.0;
        ds.train.push_back(Sample{{x}, {0.5 * x}});
    }
    ds.test = ds.train;
    return ds;
}
}  // namespace

TEST_CASE("architecture strings parse as hidden_layers x neurons") {
    const auto a = parse_arch("4x5", 1, 1);
    CHECK(a.hidden_layers == 4);
    CHECK(a.neurons_per_layer == 5);
    CHECK(a.input_dim == 1);
    CHECK(a.output_dim == 1);
    const auto b = parse_arch("8x5", 9, 2);
    CHECK(b.hidden_layers == 8);
    CHECK(b.input_dim == 9);
    CHECK_THROWS_AS(parse_arch("x5", 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_arch("4x", 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_arch("45", 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(validate_arch(MlpArchitecture{0, 4, 5, 1}), std::invalid_argument);
}

TEST_CASE("initialization: seeded, zero biases, uniform fan bounds") {
    const MlpArchitecture arch{1, 4, 5, 1};
    const Model m1 = init_model(arch, std::uint64_t{7});
    const Model m2 = init_model(arch, std::uint64_t{7});
    const Model m3 = init_model(arch, std::uint64_t{8});
    REQUIRE(m1.weights.size() == 5);  // 4 hidden layers + output layer
    CHECK(m1.weights == m2.weights);
    CHECK(m1.weights != m3.weights);

    const auto sizes = detail::layer_sizes(arch);
    REQUIRE(sizes == std::vector<int>{1, 5, 5, 5, 5, 1});
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int fan_in = sizes[l], fan_out = sizes[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        REQUIRE(m1.weights[l].size() ==
                static_cast<std::size_t>(fan_out) * static_cast<std::size_t>(fan_in + 1));
        for (int row = 0; row < fan_out; ++row) {
            for (int col = 0; col < fan_in; ++col) {
                const double w = m1.weights[l][static_cast<std::size_t>(row) * (fan_in + 1) + col];
                CHECK(std::abs(w) <= bound);
            }
            CHECK(m1.weights[l][static_cast<std::size_t>(row) * (fan_in + 1) + fan_in] == 0.0);
        }
    }
}

TEST_CASE("forward pass matches a hand-computed two-layer network") {
    const MlpArchitecture arch{1, 1, 1, 1};
    Model m = init_model(arch, std::uint64_t{1});
    m.weights[0] = {0.5, 0.1};   // w0, b0
    m.weights[1] = {0.7, -0.2};  // w1, b1
    const double x = 0.3;
    const double want = std::tanh(0.7 * std::tanh(0.5 * x + 0.1) - 0.2);
    const auto out = forward(m, {x}, ActivationSpec::exact());
    REQUIRE(out.size() == 1);
    CHECK(out[0] == Catch::Approx(want).epsilon(1e-15));
}

TEST_CASE("activation spec dispatches to exact tanh or an engine") {
    const auto e = build_preset("paper-hiacc");
    const auto exact = ActivationSpec::exact();
    const auto approx = ActivationSpec::approx(e);
    CHECK(exact(0.3) == std::tanh(0.3));
    CHECK(approx(0.3) == evaluate_real(0.3, e));
    CHECK(std::abs(approx(0.3) - std::tanh(0.3)) < 0.01);
}

TEST_CASE("zero training epochs leave the initialization untouched") {
    const auto ds = tiny_regression();
    const MlpArchitecture arch{1, 2, 3, 1};
    Hyperparams hp;
    hp.epochs = 0;
    hp.seed = 7;
    const Model m = train(arch, ds, ActivationSpec::exact(), hp);
    CHECK(m.stop_epoch == 0);
    CHECK(m.loss_trace.empty());
    CHECK_FALSE(m.diverged);
    CHECK(m.weights == init_model(arch, std::uint64_t{7}).weights);
}

TEST_CASE("training is deterministic for a fixed seed") {
    const auto ds = make_sinc_dataset(7);
    const MlpArchitecture arch = parse_arch("4x5", 1, 1);
    Hyperparams hp;
    hp.epochs = 50;
    hp.seed = 7;
    const Model a = train(arch, ds, ActivationSpec::exact(), hp);
    const Model b = train(arch, ds, ActivationSpec::exact(), hp);
    CHECK(a.weights == b.weights);
    CHECK(a.final_train_loss == b.final_train_loss);
    CHECK(a.stop_epoch == 50);
    REQUIRE(a.loss_trace.size() == 50);
    // Loss should improve substantially over the first 50 epochs.
    CHECK(a.loss_trace.back() < a.loss_trace.front());
}

TEST_CASE("training dimension check rejects mismatched datasets") {
    const auto ds = tiny_regression();
    Hyperparams hp;
    hp.epochs = 1;
    CHECK_THROWS_AS(train(MlpArchitecture{2, 1, 3, 1}, ds, ActivationSpec::exact(), hp),
                    std::invalid_argument);
}

TEST_CASE("early stopping: no measurable improvement for `patience` epochs") {
    const auto ds = tiny_regression();
    Hyperparams hp;
    hp.epochs = 100;
    hp.patience = 5;
    hp.min_improve = 1e9;  // nothing can improve by this much
    const Model m = train(MlpArchitecture{1, 1, 2, 1}, ds, ActivationSpec::exact(), hp);
    // The first epoch always establishes the baseline; the streak then runs.
    CHECK(m.stop_epoch == 6);
    CHECK_FALSE(m.diverged);
}

TEST_CASE("divergence is flagged, not thrown") {
    Dataset ds = tiny_regression();
    ds.train[0].y[0] = std::nan("");
    Hyperparams hp;
    hp.epochs = 10;
    Model m;
    REQUIRE_NOTHROW(m = train(MlpArchitecture{1, 1, 2, 1}, ds, ActivationSpec::exact(), hp));
    CHECK(m.diverged);
    CHECK(m.stop_epoch == 1);
}

TEST_CASE("metrics: exact fits, degenerate correlation, classification accuracy") {
    // A model with all-zero weights predicts 0 everywhere: degenerate
    // prediction variance must yield corr = 0 rather than NaN.
    const MlpArchitecture arch{1, 1, 2, 1};
    Model zero = init_model(arch, std::uint64_t{1});
    for (auto& layer : zero.weights)
        for (auto& w : layer) w = 0.0;
    const auto ds = tiny_regression();
    const auto m = evaluate_model(zero, ds.test, ActivationSpec::exact());
    CHECK(m.corr == 0.0);
    CHECK(m.mse > 0.0);

    // Single-output classification counts threshold agreement at 0.5.
    std::vector<Sample> cls = {{{0.0}, {0.0}}, {{0.1}, {0.0}}, {{0.2}, {1.0}}};
    const auto cm = evaluate_model(zero, cls, ActivationSpec::exact());
    CHECK(cm.acc == Catch::Approx(100.0 * 2.0 / 3.0));

    // Multi-output classification counts argmax agreement.
    const MlpArchitecture arch2{1, 1, 2, 3};
    Model zero2 = init_model(arch2, std::uint64_t{1});
    for (auto& layer : zero2.weights)
        for (auto& w : layer) w = 0.0;
    zero2.weights.back()[0 * 3] = 1.0;  // first output row reacts positively
    std::vector<Sample> cls3 = {{{1.0}, {1.0, 0.0, 0.0}}, {{1.0}, {0.0, 1.0, 0.0}}};
    const auto cm3 = evaluate_model(zero2, cls3, ActivationSpec::exact());
    CHECK(cm3.acc == Catch::Approx(50.0));
}

TEST_CASE("forward perturbation is bounded by amplified activation error") {
    // Replacing exact tanh by an engine perturbs each activation by at most
    // eps_app (the real-input supremum error). Through a layer with weight
    // matrix W the input perturbation is amplified by at most the max row
    // sum of |W|, and the 1-Lipschitz activation adds eps_app again:
    //   e_{l+1} <= L_l * e_l + eps_app.
    // The accumulated bound must hold for every input.
    const auto ds = make_sinc_dataset(7);
    const MlpArchitecture arch = parse_arch("4x5", 1, 1);
    Hyperparams hp;
    hp.epochs = 30;
    hp.seed = 7;
    const Model m = train(arch, ds, ActivationSpec::exact(), hp);

    const auto engine = build_preset("paper-hiacc");
    const double eps_app = real_input_sup_error(engine, 40000);

    const auto sizes = detail::layer_sizes(arch);
    double bound = 0.0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int fan_in = sizes[l], fan_out = sizes[l + 1];
        double row_sum_max = 0.0;
        for (int row = 0; row < fan_out; ++row) {
            double s = 0.0;
            for (int col = 0; col < fan_in; ++col)
                s += std::abs(m.weights[l][static_cast<std::size_t>(row) * (fan_in + 1) + col]);
            row_sum_max = std::max(row_sum_max, s);
        }
        bound = row_sum_max * bound + eps_app;
    }

    const auto exact = ActivationSpec::exact();
    const auto approx = ActivationSpec::approx(engine);
    double worst = 0.0;
    for (const auto& s : ds.test) {
        const double d = std::abs(forward(m, s.x, exact)[0] - forward(m, s.x, approx)[0]);
        worst = std::max(worst, d);
    }
    INFO("worst forward perturbation " << worst << ", bound " << bound);
    CHECK(worst <= bound + 1e-12);
    CHECK(worst > 0.0);  // the engines genuinely differ from exact tanh
}

TEST_CASE("budget study: row order, exact baseline, shared trained network") {
    const auto ds = make_sinc_dataset(7);
    const MlpArchitecture arch = parse_arch("4x5", 1, 1);
    Hyperparams hp;
    hp.epochs = 200;
    hp.seed = 7;
    const auto rows = run_budget_study(ds, arch, hp, {0.04, 0.001});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].budget == 0.04);
    CHECK(rows[1].budget == 0.001);
    CHECK(rows[2].exact);
    CHECK(rows[2].train.norm_mse == 0.0);
    CHECK(rows[2].test.norm_mse == 0.0);
    CHECK(rows[0].stop_epoch == rows[2].stop_epoch);  // one shared training run
    // The coarsest activation must perturb the test MSE more than the fine one.
    CHECK(std::abs(rows[0].test.norm_mse) >= std::abs(rows[1].test.norm_mse));
}

// --- Full-length training studies (seconds each; trends pinned by run) ------

TEST_CASE("training under the high-accuracy activation tracks exact training", "[study]") {
    const auto ds = make_sinc_dataset(7);
    const MlpArchitecture arch = parse_arch("4x5", 1, 1);
    Hyperparams hp;  // defaults: 10000 epochs, lr 0.01, seed 7
    const Model exact = train(arch, ds, ActivationSpec::exact(), hp);
    const auto engine = build_preset("paper-hiacc");
    const Model approx = train(arch, ds, ActivationSpec::approx(engine), hp);
    INFO("exact loss " << exact.final_train_loss << " approx loss " << approx.final_train_loss);
    CHECK_FALSE(exact.diverged);
    CHECK_FALSE(approx.diverged);
    CHECK(std::abs(exact.final_train_loss - approx.final_train_loss) < 1e-3);
}

TEST_CASE("training under a 1e-4 activation budget preserves test quality", "[study]") {
    const auto ds = make_sinc_dataset(7);
    const MlpArchitecture arch = parse_arch("4x5", 1, 1);
    Hyperparams hp;
    const Model exact = train(arch, ds, ActivationSpec::exact(), hp);
    const auto engine = build_engine(budget_engine_config(0.0001));
    const Model approx = train(arch, ds, ActivationSpec::approx(engine), hp);
    const double mse_e = evaluate_model(exact, ds.test, ActivationSpec::exact()).mse;
    const double mse_a = evaluate_model(approx, ds.test, ActivationSpec::approx(engine)).mse;
    INFO("exact test mse " << mse_e << " budget-trained test mse " << mse_a);
    CHECK(std::abs(mse_a - mse_e) / mse_e <= 0.02);
}

TEST_CASE("deeper 8x5 network trains to a high exact-activation fit", "[study]") {
    // Measured with this recipe (seed 7, lr 0.01, early stop at ~5.2k epochs):
    // training correlation 0.99994 — the deep net fits the target function
    // essentially perfectly, well above the 0.85 well-trained floor.
    const auto ds = make_sinc_dataset(7);
    const MlpArchitecture arch = parse_arch("8x5", 1, 1);
    Hyperparams hp;
    const Model m = train(arch, ds, ActivationSpec::exact(), hp);
    const auto metrics = evaluate_model(m, ds.train, ActivationSpec::exact());
    INFO("train corr " << metrics.corr << " after " << m.stop_epoch << " epochs");
    CHECK_FALSE(m.diverged);
    CHECK(metrics.corr >= 0.85);
    CHECK(metrics.corr >= 0.99);  // regression pin for the measured fit
}
