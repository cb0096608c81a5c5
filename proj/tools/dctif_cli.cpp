// dctif — coefficient generation, bit-exact evaluation, error/memory sweeps,
// engine dumps, and the NN activation-sensitivity study.
//
// Exit codes: 0 success, 1 golden-check failure, 2 usage/configuration error.
// Every run echoes its fully-resolved configuration as a `# config:` line;
// identical invocations produce identical bytes.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "dctif/dctif.hpp"

namespace {

using namespace dctif;

// Accepts "1/2^j" fractions ("1/4") or the equivalent decimal ("0.25").
int parse_alpha_to_j(const std::string& text) {
    auto fail = [&text]() -> int {
        throw std::invalid_argument("alpha must be 1/2^j with 1 <= j <= 6, got '" + text + "'");
    };
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        const int num = std::stoi(text.substr(0, slash));
        const int den = std::stoi(text.substr(slash + 1));
        if (num != 1 || den < 2) return fail();
        for (int j = 1; j <= 6; ++j)
            if (den == (1 << j)) return j;
        return fail();
    }
    const double v = std::stod(text);
    for (int j = 1; j <= 6; ++j)
        if (std::abs(v - std::ldexp(1.0, -j)) < 1e-12) return j;
    return fail();
}

std::string alpha_text(int j) { return "1/" + std::to_string(1 << j); }

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + out_path);
    out << text;
}

std::string rule_name(PositionRule rule) {
    return rule == PositionRule::NearestOdd ? "nearest-odd" : "even";
}

std::string coeff_csv(const DctifParams& params, PositionRule rule) {
    const auto table = coefficient_table(params, rule);
    std::string text;
    ConfigEcho echo("coeffs");
    echo.kv("tabs", static_cast<long long>(params.tab_count))
        .kv("j", static_cast<long long>(params.j))
        .kv("alpha", alpha_text(params.j))
        .kv("s", static_cast<long long>(params.s))
        .kv("w", static_cast<long long>(params.window_size))
        .kv("rule", rule_name(rule));
    text += echo.str() + "\n";
    text += "tabs,j,r,s,w";
    for (int t = 0; t < params.tab_count; ++t) text += ",c" + std::to_string(t);
    text += "\n";
    for (const auto& [r, set] : table) {
        text += std::to_string(params.tab_count) + "," + std::to_string(params.j) + "," +
                std::to_string(r) + "," + std::to_string(params.s) + "," +
                std::to_string(params.window_size);
        for (int v : set.values) text += "," + std::to_string(v);
        text += "\n";
    }
    return text;
}

int run_golden_check(const std::string& out_path) {
    const auto res = golden_check();
    std::string text = ConfigEcho("coeffs").kv("golden-check", "1").str() + "\n";
    text += "golden coefficient vectors: " + std::to_string(res.matched) + "/" +
            std::to_string(res.total) + " match\n";
    for (const auto& m : res.mismatches) text += "MISMATCH " + m + "\n";
    emit(text, out_path);
    return res.ok() ? 0 : 1;
}

std::string sweep_csv(const std::string& preset_sel, const std::string& grid_file) {
    std::vector<EngineConfig> grid;
    if (!grid_file.empty()) {
        // Grid file: one config per line, `tabs j s w eps` whitespace-separated,
        // '#' comments. Formats default to the high-accuracy preset's.
        std::ifstream in(grid_file);
        if (!in) throw std::runtime_error("cannot open grid file " + grid_file);
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            EngineConfig cfg;
            int w = 0;
            if (!(ls >> cfg.params.tab_count >> cfg.params.j >> cfg.params.s >> w >> cfg.eps_max))
                continue;
            cfg.params.window_size = w;
            cfg.rule = PositionRule::EvenFrame;
            cfg.in_fmt = QFormat{3, 6};
            cfg.sample_fmt = QFormat{0, 17};
            cfg.out_fmt = QFormat{0, 17};
            cfg.name = "file-t" + std::to_string(cfg.params.tab_count) + "-s" +
                       std::to_string(cfg.params.s);
            grid.push_back(cfg);
        }
    } else if (preset_sel == "paper") {
        grid = paper_presets();
    } else if (preset_sel == "grid") {
        grid = trend_grid();
    } else if (preset_sel == "all") {
        grid = paper_presets();
        for (const auto& c : trend_grid()) grid.push_back(c);
        for (const auto& c : exploratory_grid()) grid.push_back(c);
    } else {
        throw std::invalid_argument("unknown preset selection '" + preset_sel +
                                    "' (expected paper, grid, or all)");
    }

    const auto reports = sweep(grid);
    std::string text;
    ConfigEcho echo("sweep");
    echo.kv("presets", grid_file.empty() ? preset_sel : "file")
        .kv("configs", static_cast<long long>(grid.size()));
    if (!grid_file.empty()) echo.kv("grid-file", grid_file);
    text += echo.str() + "\n";
    text += "tabs,j,s,eps,max_err,mean_err,argmax_x,samples,mem_bits\n";
    for (const auto& rep : reports) {
        if (!rep.ok) {
            text += "# skipped " + rep.config.name + ": " + rep.note + "\n";
            continue;
        }
        text += std::to_string(rep.config.params.tab_count) + "," +
                std::to_string(rep.config.params.j) + "," + std::to_string(rep.config.params.s) +
                "," + fmt_double(rep.config.eps_max) + "," + fmt_double(rep.max_err) + "," +
                fmt_double(rep.mean_abs_err) + "," + fmt_double(rep.argmax_x) + "," +
                std::to_string(rep.samples_count) + "," + std::to_string(rep.memory_bits) + "\n";
    }
    return text;
}

std::string eval_text(double x, const std::string& preset) {
    const auto engine = build_preset(preset);
    const double approx = evaluate_real(x, engine);
    const double exact = std::tanh(x);
    std::string text = ConfigEcho("eval").kv("x", x).kv("preset", engine.cfg.name).str() + "\n";
    text += "x       = " + fmt_double(x) + "\n";
    text += "approx  = " + fmt_double(approx, "%.12g") + "\n";
    text += "exact   = " + fmt_double(exact, "%.12g") + "\n";
    text += "abs_err = " + fmt_double(std::abs(approx - exact), "%.6g") + "\n";
    return text;
}

std::string dump_csv(const std::string& preset, const std::string& what) {
    const auto engine = build_preset(preset);
    std::string text;
    ConfigEcho echo("dump");
    echo.kv("preset", engine.cfg.name).kv("what", what);
    text += echo.str() + "\n";
    if (what == "coeffs") {
        text += coeff_csv(engine.cfg.params, engine.cfg.rule);
        return text;
    }
    if (what != "samples")
        throw std::invalid_argument("dump --what must be samples or coeffs, got '" + what + "'");
    text += "index,x,raw,real\n";
    for (std::size_t i = 0; i < engine.table.codes.size(); ++i) {
        const int k = engine.table.first_index + static_cast<int>(i);
        const double x = k * engine.table.spacing;
        const FxpValue v{engine.table.codes[i], engine.cfg.sample_fmt};
        text += std::to_string(k) + "," + fmt_double(x) + "," + std::to_string(v.raw) + "," +
                fmt_double(to_real(v), "%.12g") + "\n";
    }
    return text;
}

struct NnOptions {
    std::string dataset = "sinc";
    std::string arch = "4x5";
    std::string eps = "all";
    std::string mode = "eval";  // eval: train exact once, evaluate under budgets
    std::uint64_t seed = 7;
    int epochs = 10000;
    std::string data_dir;
};

Dataset load_nn_dataset(const NnOptions& opt) {
    if (opt.dataset == "sinc") return make_sinc_dataset(opt.seed);
    if (opt.dataset == "sigmoid") return make_sigmoid_dataset(opt.seed);
    std::string root = opt.data_dir;
    if (root.empty()) {
        if (const char* env = std::getenv("DCTIF_DATA_DIR")) root = env;
    }
    if (root.empty())
        throw std::runtime_error("dataset '" + opt.dataset +
                                 "' needs --data-dir or DCTIF_DATA_DIR");
    if (opt.dataset == "mnist") return load_mnist(root);
    if (opt.dataset == "cancer")
        return load_cancer(root + "/breast-cancer-wisconsin.data", opt.seed);
    throw std::invalid_argument("unknown dataset '" + opt.dataset + "'");
}

std::vector<double> parse_eps_list(const std::string& text) {
    if (text == "all") return budget_levels();
    if (text == "exact") return {};
    std::vector<double> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ','))
        if (!cur.empty()) out.push_back(std::stod(cur));
    for (double b : out) budget_engine_config(b);  // validate early
    return out;
}

std::string nn_row(const std::string& dataset, const std::string& arch, const std::string& eps,
                   std::uint64_t seed, const std::string& phase, const Metrics& m,
                   int stop_epoch) {
    return dataset + "," + arch + "," + eps + "," + std::to_string(seed) + "," + phase + "," +
           fmt_double(m.mse) + "," + fmt_double(m.corr) + "," + fmt_double(m.acc) + "," +
           fmt_double(m.norm_mse) + "," + std::to_string(stop_epoch) + "\n";
}

std::string nn_csv(const NnOptions& opt) {
    const Dataset ds = load_nn_dataset(opt);
    const int in_dim = static_cast<int>(ds.train.front().x.size());
    const int out_dim = static_cast<int>(ds.train.front().y.size());
    const MlpArchitecture arch = parse_arch(opt.arch, in_dim, out_dim);
    Hyperparams hp;
    hp.epochs = opt.epochs;
    hp.seed = opt.seed;
    const auto budgets = parse_eps_list(opt.eps);

    std::string text;
    ConfigEcho echo("nn");
    echo.kv("dataset", ds.name)
        .kv("arch", opt.arch)
        .kv("eps", opt.eps)
        .kv("seed", static_cast<long long>(opt.seed))
        .kv("epochs", static_cast<long long>(opt.epochs))
        .kv("mode", opt.mode)
        .kv("lr", hp.lr);
    if (ds.dropped_records > 0)
        echo.kv("dropped_records", static_cast<long long>(ds.dropped_records));
    text += echo.str() + "\n";
    text += "dataset,arch,eps,seed,phase,mse,corr,acc,norm_mse,stop_epoch\n";

    if (opt.mode == "eval") {
        // Evaluate an exact-trained network under each activation budget.
        const auto rows = run_budget_study(ds, arch, hp, budgets);
        for (const auto& row : rows) {
            const std::string eps = row.exact ? "exact" : fmt_double(row.budget);
            text += nn_row(ds.name, opt.arch, eps, opt.seed, "test", row.test, row.stop_epoch);
        }
        return text;
    }
    if (opt.mode != "train")
        throw std::invalid_argument("nn --mode must be eval or train, got '" + opt.mode + "'");

    // Train a fresh network per activation level (independent runs in
    // parallel); normalized MSE is measured against the exact-trained run.
    std::vector<ApproxEngine> engines;
    for (double b : budgets) engines.push_back(build_engine(budget_engine_config(b)));
    auto train_eval = [&](const ActivationSpec& act) {
        const Model m = train(arch, ds, act, hp);
        Metrics tr = evaluate_model(m, ds.train, act);
        Metrics te = evaluate_model(m, ds.test, act);
        if (m.diverged) tr.corr = te.corr = 0.0;  // flagged run; metrics not meaningful
        return std::tuple<Metrics, Metrics, int, bool>{tr, te, m.stop_epoch, m.diverged};
    };
    std::vector<std::future<std::tuple<Metrics, Metrics, int, bool>>> futs;
    for (const auto& e : engines)
        futs.push_back(std::async(std::launch::async,
                                  [&train_eval, &e] { return train_eval(ActivationSpec::approx(e)); }));
    auto exact_fut = std::async(std::launch::async,
                                [&train_eval] { return train_eval(ActivationSpec::exact()); });
    auto [ex_tr, ex_te, ex_stop, ex_div] = exact_fut.get();
    for (std::size_t i = 0; i < engines.size(); ++i) {
        auto [tr, te, stop, diverged] = futs[i].get();
        tr.norm_mse = tr.mse - ex_tr.mse;
        te.norm_mse = te.mse - ex_te.mse;
        const std::string eps = fmt_double(budgets[i]) + (diverged ? "-diverged" : "");
        text += nn_row(ds.name, opt.arch, eps, opt.seed, "train", tr, stop);
        text += nn_row(ds.name, opt.arch, eps, opt.seed, "test", te, stop);
    }
    text += nn_row(ds.name, opt.arch, "exact", opt.seed, "train", ex_tr, ex_stop);
    text += nn_row(ds.name, opt.arch, "exact", opt.seed, "test", ex_te, ex_stop);
    return text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DCTIF tanh approximation toolkit"};
    app.set_config("--config", "", "key = value configuration file (flags override)");
    app.require_subcommand(1);

    // coeffs ----------------------------------------------------------------
    auto* coeffs = app.add_subcommand("coeffs", "generate integer coefficient tables");
    int c_tabs = 4, c_s = 4, c_w = 0, c_j = 2;
    std::string c_alpha, c_rule = "nearest-odd", c_out;
    bool c_golden = false;
    coeffs->add_option("--tabs", c_tabs, "filter tab count (2..7)");
    coeffs->add_option("--j", c_j, "fractional granularity exponent (alpha = 1/2^j)");
    coeffs->add_option("--alpha", c_alpha, "fractional granularity, e.g. 1/4");
    coeffs->add_option("--s", c_s, "scaling exponent (coefficients sum to 2^s)");
    coeffs->add_option("--w", c_w, "smoothing window size (0 = none)");
    coeffs->add_option("--rule", c_rule, "position rule: nearest-odd (default) or even");
    coeffs->add_option("--out", c_out, "write output to file instead of stdout");
    coeffs->add_flag("--golden-check", c_golden,
                     "verify the embedded reference coefficient table and exit");

    // eval ------------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "evaluate the approximation at one point");
    double e_x = 0.0;
    std::string e_preset = "paper-hiacc", e_out;
    eval->add_option("--x", e_x, "input value")->required();
    eval->add_option("--preset", e_preset, "engine preset (paper-loacc/paper-hiacc)");
    eval->add_option("--out", e_out, "write output to file instead of stdout");

    // sweep -----------------------------------------------------------------
    auto* sw = app.add_subcommand("sweep", "exhaustive error/memory reports");
    std::string s_presets = "paper", s_grid_file, s_out;
    sw->add_option("--presets", s_presets, "paper (default), grid, or all");
    sw->add_option("--grid-file", s_grid_file, "custom grid: lines of 'tabs j s w eps'");
    sw->add_option("--out", s_out, "write output to file instead of stdout");

    // nn --------------------------------------------------------------------
    auto* nn = app.add_subcommand("nn", "activation-sensitivity study");
    NnOptions n_opt;
    std::string n_out;
    nn->add_option("--dataset", n_opt.dataset, "sinc, sigmoid, mnist, or cancer");
    nn->add_option("--arch", n_opt.arch, "hidden layers x neurons, e.g. 4x5");
    nn->add_option("--eps", n_opt.eps, "all, exact, or comma list of budgets");
    nn->add_option("--seed", n_opt.seed, "random seed");
    nn->add_option("--epochs", n_opt.epochs, "training epochs");
    nn->add_option("--mode", n_opt.mode, "eval (exact-trained, default) or train (per budget)");
    nn->add_option("--data-dir", n_opt.data_dir, "dataset root (or DCTIF_DATA_DIR)");
    nn->add_option("--out", n_out, "write output to file instead of stdout");

    // dump ------------------------------------------------------------------
    auto* dump = app.add_subcommand("dump", "dump engine internals as CSV");
    std::string d_preset = "paper-hiacc", d_what = "samples", d_out;
    dump->add_option("--preset", d_preset, "engine preset");
    dump->add_option("--what", d_what, "samples (default) or coeffs");
    dump->add_option("--out", d_out, "write output to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (coeffs->parsed()) {
            if (c_golden) return run_golden_check(c_out);
            if (!c_alpha.empty()) c_j = parse_alpha_to_j(c_alpha);
            DctifParams params{c_tabs, c_j, c_s, c_w};
            PositionRule rule;
            if (c_rule == "even")
                rule = PositionRule::EvenFrame;
            else if (c_rule == "nearest-odd")
                rule = PositionRule::NearestOdd;
            else
                throw std::invalid_argument("--rule must be even or nearest-odd");
            emit(coeff_csv(params, rule), c_out);
        } else if (eval->parsed()) {
            emit(eval_text(e_x, e_preset), e_out);
        } else if (sw->parsed()) {
            emit(sweep_csv(s_presets, s_grid_file), s_out);
        } else if (nn->parsed()) {
            emit(nn_csv(n_opt), n_out);
        } else if (dump->parsed()) {
            emit(dump_csv(d_preset, d_what), d_out);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
