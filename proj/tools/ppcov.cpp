// ppcov command-line driver. Each subcommand validates its flags, computes into a
// staging directory and only then moves the staging directory to --out.

#include "ppcov/csv.hpp"
#include "ppcov/errors.hpp"
#include "ppcov/estimators.hpp"
#include "ppcov/gmvp.hpp"
#include "ppcov/ingest.hpp"
#include "ppcov/ppp.hpp"
#include "ppcov/rng.hpp"
#include "ppcov/simbench.hpp"
#include "ppcov/tuning.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ppcov;

#ifndef PPCOV_VERSION
#define PPCOV_VERSION "0.0.0"
#endif

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Thrown for configuration problems found after CLI11 parsing; maps to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out;
    bool force = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    cmd->add_option("--workers", c.workers, "Worker threads; outputs do not depend on this")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", c.out, "Run directory to create")->required();
    cmd->add_flag("--force", c.force, "Replace an existing run directory");
}

std::vector<Method> parse_methods(const std::string& list) {
    std::vector<Method> out;
    std::stringstream ss(list);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        try {
            const Method m = parse_method(token);
            if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
        } catch (const std::exception&) {
            throw UsageError("unknown method '" + token + "' (expected ppp, iw, thres or samplecov)");
        }
    }
    return out;
}

std::vector<std::string> method_names(const std::vector<Method>& ms) {
    std::vector<std::string> out;
    for (Method m : ms) out.emplace_back(method_name(m));
    return out;
}

// Re-raises library validation errors as usage errors.
template <class F>
auto checked(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

json cv_json(const CvPlan& cv) {
    return {{"n_splits", cv.n_splits},
            {"train_fraction", cv.train_fraction},
            {"grid_gamma", cv.grid_gamma.empty() ? json("default") : json(cv.grid_gamma)},
            {"grid_points", cv.grid_points},
            {"grid_epsilon", cv.grid_epsilon},
            {"objective", std::string(objective_name(cv.objective))},
            {"preserve_diagonal", cv.preserve_diagonal},
            {"seed", cv.seed}};
}

json threshold_json(const ThresholdConfig& t) {
    return {{"gamma", t.gamma}, {"epsilon", t.epsilon}, {"n", t.n}, {"p", t.p}, {"cutoff", t.cutoff()},
            {"preserve_diagonal", t.preserve_diagonal}};
}

// Creates <out> atomically: work happens in a sibling staging directory.
class RunDir {
public:
    RunDir(const Common& c, std::string subcommand) : target_(c.out), subcommand_(std::move(subcommand)) {
        if (fs::exists(target_) && !c.force)
            throw UsageError("run directory '" + target_.string() + "' exists; pass --force to replace it");
        staging_ = target_;
        staging_ += ".partial";
        fs::remove_all(staging_);
        fs::create_directories(staging_);
        meta_["software"] = {{"name", "ppcov"}, {"version", PPCOV_VERSION}};
        meta_["subcommand"] = subcommand_;
        meta_["seed"] = c.seed;
        meta_["rng"] = std::string(rng_family);
        meta_["workers"] = c.workers;
    }
    RunDir(const RunDir&) = delete;
    RunDir& operator=(const RunDir&) = delete;
    ~RunDir() {
        if (!committed_) {
            std::error_code ec;
            fs::remove_all(staging_, ec);
        }
    }

    fs::path file(const std::string& name) const { return staging_ / name; }
    json& meta() { return meta_; }

    void commit() {
        std::ofstream(staging_ / "metadata.json") << meta_.dump(2) << '\n';
        fs::remove_all(target_);
        fs::rename(staging_, target_);
        committed_ = true;
    }

private:
    fs::path target_;
    fs::path staging_;
    std::string subcommand_;
    json meta_;
    bool committed_ = false;
};

void write_matrix_csv(const fs::path& path, const CovMatrix& m, const std::vector<std::string>& ids) {
    csv::Writer w(path);
    std::vector<std::string> header{"asset"};
    header.insert(header.end(), ids.begin(), ids.end());
    w.row(header);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        std::vector<std::string> row{ids[i]};
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(csv::format_double(m(i, j)));
        w.row(row);
    }
    w.close();
}

std::vector<std::string> default_ids(std::size_t p) {
    std::vector<std::string> ids;
    for (std::size_t j = 1; j <= p; ++j) ids.push_back("asset_" + std::to_string(j));
    return ids;
}

// ---- data-facing options shared by estimate, gmvp, tune and backtest ----

struct DataOpts {
    std::string path;
    std::string format = "returns-csv";
    std::string returns = "simple";
    bool uncentered = false;
};

void add_data(CLI::App* cmd, DataOpts& d, bool required = true) {
    auto* opt = cmd->add_option("--data", d.path, "Returns or prices CSV (header of asset ids, first column period id)");
    if (required) opt->required();
    opt->check(CLI::ExistingFile);
    cmd->add_option("--format", d.format, "returns-csv or prices-csv")
        ->check(CLI::IsMember({"returns-csv", "prices-csv"}))
        ->capture_default_str();
    cmd->add_option("--returns", d.returns, "Return definition for prices input")
        ->check(CLI::IsMember({"simple", "log"}))
        ->capture_default_str();
    cmd->add_flag("--uncentered", d.uncentered, "Use the uncentered sample covariance instead of demeaning");
}

ReturnsMatrix load(const DataOpts& d) {
    return load_returns(d.path, parse_input_format(d.format), d.returns == "log" ? ReturnKind::log : ReturnKind::simple);
}

json data_json(const DataOpts& d, const ReturnsMatrix& x) {
    return {{"path", d.path}, {"format", d.format}, {"returns", d.returns}, {"demean", !d.uncentered},
            {"n", x.rows()}, {"p", x.cols()}};
}

struct CvOpts {
    std::size_t splits = 5;
    double train_fraction = 2.0 / 3.0;
    std::size_t grid_points = 21;
    std::vector<double> grid;
    std::string objective = "cov-spectral";
    std::size_t n_cv = 200;
    bool threshold_diagonal = false;
};

void add_cv(CLI::App* cmd, CvOpts& c, const std::string& default_objective) {
    c.objective = default_objective;
    cmd->add_option("--cv-splits", c.splits, "Random train/validation splits")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--cv-train-fraction", c.train_fraction, "Training share per split")->capture_default_str();
    cmd->add_option("--grid-points", c.grid_points, "Points in the default gamma grid")->check(CLI::Range(2, 10000))->capture_default_str();
    cmd->add_option("--grid", c.grid, "Explicit gamma grid (overrides --grid-points)")->delimiter(',');
    cmd->add_option("--objective", c.objective, "cov-spectral or gmvp-variance")
        ->check(CLI::IsMember({"cov-spectral", "gmvp-variance"}))
        ->capture_default_str();
    cmd->add_option("--n-cv", c.n_cv, "Posterior draws per CV split")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_flag("--threshold-diagonal", c.threshold_diagonal,
                  "Apply the cutoff to diagonal entries too (by default variances are kept)");
}

CvPlan make_cv(const CvOpts& c) {
    CvPlan cv;
    cv.n_splits = c.splits;
    cv.train_fraction = c.train_fraction;
    cv.objective = parse_objective(c.objective);
    cv.grid_points = c.grid_points;
    cv.preserve_diagonal = !c.threshold_diagonal;
    if (!c.grid.empty()) cv.grid_gamma = c.grid;
    cv.validate();
    return cv;
}

// ---- subcommands ----

struct SimulateOpts {
    Common common;
    std::string truth = "sigma1";
    std::size_t p = 20;
    std::vector<std::size_t> n{50, 500};
    std::size_t reps = 10;
    std::size_t draws = 500;
    std::string methods = "ppp,iw,thres,samplecov";
    double level = 0.95;
    bool full = false;
    CvOpts cv;
};

int cmd_simulate(const SimulateOpts& o, CLI::App* app) {
    ExperimentPlan plan;
    CvPlan cv;
    checked([&] {
        plan.truth_id = parse_truth(o.truth);
        plan.p = o.p;
        plan.n_list = o.n;
        plan.replications = o.reps;
        plan.n_draws = o.draws;
        if (o.full) {
            // Full-scale settings unless the caller pinned them explicitly.
            if (app->count("--p") == 0) plan.p = 100;
            if (app->count("--reps") == 0) plan.replications = 50;
            if (app->count("--draws") == 0) plan.n_draws = 2000;
        }
        plan.methods = parse_methods(o.methods);
        plan.seed = o.common.seed;
        plan.level = o.level;
        plan.n_cv = o.cv.n_cv;
        plan.workers = o.common.workers;
        plan.validate();
        (void)plan.truth();
        cv = make_cv(o.cv);
        return 0;
    });

    RunDir dir(o.common, "simulate");
    const ResultSet results = run_experiment(plan, cv);
    write_results_csv(dir.file("results.csv"), results);
    emit_tables(results, dir.file(""));
    dir.meta()["plan"] = {{"truth", std::string(truth_name(plan.truth_id))},
                          {"p", plan.p},
                          {"n", plan.n_list},
                          {"replications", plan.replications},
                          {"n_draws", plan.n_draws},
                          {"methods", method_names(plan.methods)},
                          {"level", plan.level},
                          {"n_cv", plan.n_cv}};
    dir.meta()["cv"] = cv_json(cv);
    dir.meta()["cv"].erase("objective");
    dir.meta()["cv"]["objectives"] = {"cov-spectral for covariance error", "gmvp-variance for GMVP metrics"};
    dir.commit();
    return 0;
}

struct EstimateOpts {
    Common common;
    DataOpts data;
    std::string method = "ppp";
    std::optional<double> gamma;
    double epsilon = kDefaultEpsilon;
    std::size_t draws = 2000;
    bool save_draws = true;
    CvOpts cv;
};

int cmd_estimate(const EstimateOpts& o) {
    Method method{};
    checked([&] {
        const auto parsed = parse_methods(o.method);
        if (parsed.size() != 1) throw UsageError("--method takes exactly one of ppp, iw, thres, samplecov");
        method = parsed.front();
        if (o.gamma && *o.gamma < 0.0) throw UsageError("--gamma must be nonnegative");
        if (!(o.epsilon > 0.0)) throw UsageError("--epsilon must be positive");
        if (o.draws < 2) throw UsageError("--draws must be at least 2");
        return 0;
    });
    const ReturnsMatrix data = load(o.data);
    const bool demean = !o.data.uncentered;
    CvPlan cv = checked([&] { return make_cv(o.cv); });
    cv.seed = derive_seed(o.common.seed, {0x43565345ull});

    RunDir dir(o.common, "estimate");
    dir.meta()["data"] = data_json(o.data, data);
    dir.meta()["method"] = std::string(method_name(method));

    const PriorBuilder prior = [demean](const ReturnsMatrix& d) { return default_prior(d, demean); };
    const bool thresholded = method == Method::ppp || method == Method::thres;
    ThresholdConfig cfg{0.0, o.epsilon, data.rows(), data.cols(), cv.preserve_diagonal};
    if (thresholded) {
        if (o.gamma) {
            cfg.gamma = *o.gamma;
        } else {
            const CvPath path = method == Method::ppp ? CvPath::posterior : CvPath::point;
            const CvResult r = cv_select(data, prior, cv, o.cv.n_cv, path, {demean, o.common.workers});
            write_cv_result_csv(dir.file("cv_result.csv"), r);
            cfg = r.best;
            cfg.epsilon = o.epsilon;
            dir.meta()["cv"] = cv_json(cv);
        }
        dir.meta()["threshold"] = threshold_json(cfg);
    }

    CovMatrix estimate = CovMatrix::zero(data.cols());
    switch (method) {
        case Method::sample_cov:
            estimate = sample_covariance(data, demean);
            break;
        case Method::thres:
            estimate = thresholded_sample_cov(data, cfg, demean).matrix;
            break;
        case Method::ppp:
        case Method::iw: {
            const IWParams pr = prior(data);
            const std::uint64_t seed = derive_seed(o.common.seed, {0x504F5354ull});
            const PosteriorEnsemble ens = [&] {
                if (method == Method::ppp)
                    return generate_ppp_ensemble(pr, data, cfg, o.draws, seed, demean, o.common.workers);
                const IWParams post = posterior_params(pr, data, demean);
                return PosteriorEnsemble(draw_posterior(post, o.draws, seed, o.common.workers), cfg, pr, seed, false);
            }();
            estimate = ensemble_mean(ens);
            if (o.save_draws) {
                write_ensemble_csv(dir.file("ensemble.csv"), ens.draws());
                write_ensemble_metadata(dir.file("ensemble_meta.json"), ens);
            }
            dir.meta()["n_draws"] = o.draws;
            break;
        }
    }
    write_matrix_csv(dir.file("estimate.csv"), estimate, data.asset_ids());
    dir.commit();
    return 0;
}

struct GmvpOpts {
    Common common;
    std::string ensemble;
    std::string ensemble_meta;
    double level = 0.95;
    std::string assets;
};

int cmd_gmvp(const GmvpOpts& o) {
    checked([&] {
        if (!(o.level > 0.0 && o.level < 1.0)) throw UsageError("--level must lie in (0, 1)");
        return 0;
    });
    const fs::path meta = o.ensemble_meta.empty() ? fs::path(o.ensemble).parent_path() / "ensemble_meta.json"
                                                  : fs::path(o.ensemble_meta);
    const PosteriorEnsemble ens = read_ensemble(o.ensemble, meta);
    std::vector<std::string> ids = default_ids(ens.dim());
    if (!o.assets.empty()) {
        const auto rows = csv::read_file(o.assets);
        if (rows.empty() || rows.front().size() != ens.dim() + 1)
            throw InputError("--assets header must list one id per ensemble dimension after the first column");
        ids.assign(rows.front().begin() + 1, rows.front().end());
    }

    RunDir dir(o.common, "gmvp");
    const auto ws = gmvp_ensemble(ens, o.common.workers);
    write_intervals_csv(dir.file("intervals.csv"), credible_intervals(ws, o.level), ids);
    write_weights_csv(dir.file("weights.csv"), mean_weights(ws), ids);
    dir.meta()["ensemble"] = o.ensemble;
    dir.meta()["ensemble_meta"] = meta.string();
    dir.meta()["draws"] = ens.size();
    dir.meta()["post_processed"] = ens.post_processed();
    dir.meta()["level"] = o.level;
    dir.commit();
    return 0;
}

struct TuneOpts {
    Common common;
    DataOpts data;
    std::string path = "posterior";
    CvOpts cv;
};

int cmd_tune(const TuneOpts& o) {
    const ReturnsMatrix data = load(o.data);
    const bool demean = !o.data.uncentered;
    CvPlan cv = checked([&] { return make_cv(o.cv); });
    cv.seed = derive_seed(o.common.seed, {0x54554E45ull});
    const CvPath path = o.path == "point" ? CvPath::point : CvPath::posterior;

    RunDir dir(o.common, "tune");
    const PriorBuilder prior = [demean](const ReturnsMatrix& d) { return default_prior(d, demean); };
    const CvResult r = cv_select(data, prior, cv, o.cv.n_cv, path, {demean, o.common.workers});
    write_cv_result_csv(dir.file("cv_result.csv"), r);
    dir.meta()["data"] = data_json(o.data, data);
    dir.meta()["path"] = o.path;
    dir.meta()["n_cv"] = o.cv.n_cv;
    dir.meta()["cv"] = cv_json(cv);
    dir.meta()["best"] = threshold_json(r.best);
    dir.meta()["splits_used"] = r.splits_used;
    dir.commit();
    return 0;
}

struct BacktestOpts {
    Common common;
    DataOpts data;
    std::size_t window_train = 48;
    std::size_t window_test = 12;
    std::size_t iterations = 20;
    std::size_t draws = 2000;
    std::string methods = "ppp,iw,thres,samplecov";
    CvOpts cv;
};

int cmd_backtest(const BacktestOpts& o) {
    const std::vector<Method> methods = checked([&] { return parse_methods(o.methods); });
    const ReturnsMatrix data = load(o.data);
    BacktestPlan plan;
    plan.window_train = o.window_train;
    plan.window_test = o.window_test;
    plan.iterations = o.iterations;
    plan.seed = o.common.seed;
    plan.demean = !o.data.uncentered;
    plan.n_draws = o.draws;
    plan.n_cv = o.cv.n_cv;
    plan.workers = o.common.workers;
    checked([&] {
        plan.validate(data.rows());
        return 0;
    });
    CvPlan cv = checked([&] { return make_cv(o.cv); });

    RunDir dir(o.common, "backtest");
    const auto rows = run_backtest(data, plan, methods, cv);
    write_backtest_csv(dir.file("backtest.csv"), rows);
    json per_window = json::object();
    for (const auto& r : rows) per_window[std::string(method_name(r.method))] = {{"failed", r.windows_failed}};
    dir.meta()["data"] = data_json(o.data, data);
    dir.meta()["plan"] = {{"window_train", plan.window_train}, {"window_test", plan.window_test},
                          {"iterations", plan.iterations},     {"n_draws", plan.n_draws},
                          {"n_cv", plan.n_cv},                 {"methods", method_names(methods)}};
    dir.meta()["cv"] = cv_json(cv);
    dir.meta()["windows"] = per_window;
    dir.commit();
    return 0;
}

struct TablesOpts {
    Common common;
    std::string results;
};

int cmd_tables(const TablesOpts& o) {
    const ResultSet r = read_results_csv(o.results);
    RunDir dir(o.common, "tables");
    emit_tables(r, dir.file(""));
    dir.meta()["results"] = o.results;
    dir.commit();
    return 0;
}

struct SynthOpts {
    Common common;
    std::size_t n = 120;
    std::size_t p = 327;
};

int cmd_synth(const SynthOpts& o) {
    RunDir dir(o.common, "synth");
    write_returns_csv(dir.file("returns.csv"), synthetic_block_returns(o.n, o.p, o.common.seed));
    dir.meta()["n"] = o.n;
    dir.meta()["p"] = o.p;
    dir.meta()["truth"] = "block diagonal, blocks of 10";
    dir.commit();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Post-processed posterior covariance estimation and GMVP inference"};
    app.set_version_flag("--version", PPCOV_VERSION);
    app.require_subcommand(1);

    SimulateOpts sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo study on a block-sparse truth");
    add_common(simulate, sim.common);
    simulate->add_option("--truth", sim.truth, "sigma1 or sigma2")->capture_default_str();
    simulate->add_option("--p", sim.p, "Dimension")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--n", sim.n, "Sample sizes")->delimiter(',')->capture_default_str();
    simulate->add_option("--reps", sim.reps, "Replications per n")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--draws", sim.draws, "Posterior draws")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--methods", sim.methods, "Comma-separated subset of ppp,iw,thres,samplecov")->capture_default_str();
    simulate->add_option("--level", sim.level, "Credible level")->capture_default_str();
    simulate->add_flag("--full", sim.full, "Full-scale plan: p=100, 50 replications, 2000 draws");
    add_cv(simulate, sim.cv, "cov-spectral");
    simulate->remove_option(simulate->get_option("--objective"));

    EstimateOpts est;
    auto* estimate = app.add_subcommand("estimate", "Point estimate (and posterior ensemble) from returns");
    add_common(estimate, est.common);
    add_data(estimate, est.data);
    estimate->add_option("--method", est.method, "ppp, iw, thres or samplecov")->capture_default_str();
    estimate->add_option("--gamma", est.gamma, "Threshold multiplier; tuned by CV when omitted");
    estimate->add_option("--epsilon", est.epsilon, "Eigenvalue floor")->capture_default_str();
    estimate->add_option("--draws", est.draws, "Posterior draws")->capture_default_str();
    estimate->add_flag("!--no-draws", est.save_draws, "Skip writing ensemble.csv");
    add_cv(estimate, est.cv, "cov-spectral");

    GmvpOpts gm;
    auto* gmvp = app.add_subcommand("gmvp", "GMVP weights and credible intervals from a saved ensemble");
    add_common(gmvp, gm.common);
    gmvp->add_option("--ensemble", gm.ensemble, "ensemble.csv written by estimate")->required()->check(CLI::ExistingFile);
    gmvp->add_option("--ensemble-meta", gm.ensemble_meta, "Ensemble metadata (default: ensemble_meta.json beside it)")
        ->check(CLI::ExistingFile);
    gmvp->add_option("--level", gm.level, "Credible level")->capture_default_str();
    gmvp->add_option("--assets", gm.assets, "CSV whose header supplies asset ids")->check(CLI::ExistingFile);

    TuneOpts tn;
    auto* tune = app.add_subcommand("tune", "Cross-validate the threshold multiplier");
    add_common(tune, tn.common);
    add_data(tune, tn.data);
    tune->add_option("--path", tn.path, "posterior (PPP) or point (thresholded sample covariance)")
        ->check(CLI::IsMember({"posterior", "point"}))
        ->capture_default_str();
    add_cv(tune, tn.cv, "cov-spectral");

    BacktestOpts bt;
    auto* backtest = app.add_subcommand("backtest", "Rolling-window GMVP backtest");
    add_common(backtest, bt.common);
    add_data(backtest, bt.data);
    backtest->add_option("--window-train", bt.window_train, "Training window length")->capture_default_str();
    backtest->add_option("--window-test", bt.window_test, "Test window length")->capture_default_str();
    backtest->add_option("--iterations", bt.iterations, "Sampled windows")->capture_default_str();
    backtest->add_option("--draws", bt.draws, "Posterior draws per window")->check(CLI::PositiveNumber)->capture_default_str();
    backtest->add_option("--methods", bt.methods, "Comma-separated subset of ppp,iw,thres,samplecov")->capture_default_str();
    add_cv(backtest, bt.cv, "gmvp-variance");

    TablesOpts tb;
    auto* tables = app.add_subcommand("tables", "Rebuild summary tables from results.csv");
    add_common(tables, tb.common);
    tables->add_option("--results", tb.results, "results.csv from simulate")->required()->check(CLI::ExistingFile);

    SynthOpts sy;
    auto* synth = app.add_subcommand("synth", "Write a synthetic block-sparse returns fixture");
    add_common(synth, sy.common);
    synth->add_option("--n", sy.n, "Periods")->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))->capture_default_str();
    synth->add_option("--p", sy.p, "Assets")->check(CLI::PositiveNumber)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim, simulate);
        if (estimate->parsed()) return cmd_estimate(est);
        if (gmvp->parsed()) return cmd_gmvp(gm);
        if (tune->parsed()) return cmd_tune(tn);
        if (backtest->parsed()) return cmd_backtest(bt);
        if (tables->parsed()) return cmd_tables(tb);
        if (synth->parsed()) return cmd_synth(sy);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
