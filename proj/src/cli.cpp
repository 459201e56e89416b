#include "matsim/cli.hpp"

#include "matsim/descriptors.hpp"
#include "matsim/io.hpp"
#include "matsim/structure.hpp"
#include "matsim/synthetic.hpp"
#include "matsim/voronoi.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>

namespace matsim::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Bad flags, names or paths; maps to exit status 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string config_path;
    std::string manifest;
    std::string descriptor = "ofm";
    int pad_len = 0;
    std::vector<std::string> measures;
    std::vector<std::string> kernels;
    std::vector<int> ks;
    std::vector<double> eps;
    std::vector<double> lambdas;
    std::vector<double> gammas;
    int folds = 10;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    bool standardize = false;
    std::string voronoi_dump;
    int groups = 3;
    int n = 200;
    double lo = 0.0;
    double hi = 5.0;
    double mu = 0.0;
    double sigma = 0.1;
    std::string sampling = "uniform";
};

const std::vector<std::string> kAllMeasures{"hamming", "l1", "l2", "l3", "cosine", "braycurtis"};
const std::vector<std::string> kAllKernels{"rbf", "laplacian", "l3", "cosine", "braycurtis"};

std::string one_line(std::string s)
{
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

// ------------------------------------------------------------------ parsing

void add_option(CLI::App* sub, const std::string& name, auto& target, const std::string& help)
{
    sub->add_option(name, target, help);
}

void add_list(CLI::App* sub, const std::string& name, auto& target, const std::string& help)
{
    sub->add_option(name, target, help)->delimiter(',');
}

void add_data_options(CLI::App* sub, RunConfig& cfg)
{
    add_option(sub, "--manifest", cfg.manifest, "CSV manifest with columns id,path,formation_energy");
    add_option(sub, "--descriptor", cfg.descriptor, "ofm | cm-spectrum | cm-sorted");
    add_option(sub, "--pad-len", cfg.pad_len, "Coulomb matrix padding (0: largest structure)");
}

void add_common(CLI::App* sub, RunConfig& cfg)
{
    add_option(sub, "--config", cfg.config_path, "JSON file of option values; flags take precedence");
    add_option(sub, "--out", cfg.out, "output directory");
    add_option(sub, "--seed", cfg.seed, "random seed");
}

// Fills options that were not given on the command line from the JSON file.
void apply_config_file(CLI::App* sub, const std::string& path)
{
    json doc;
    try {
        doc = json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (!doc.is_object()) throw UsageError("config " + path + ": expected a JSON object");

    const auto scalar = [&](const std::string& key, const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
        if (v.is_number()) return format_double(v.get<double>());
        throw UsageError("config key '" + key + "': unsupported value " + v.dump());
    };

    for (const auto& [key, value] : doc.items()) {
        if (key == "config") throw UsageError("config files cannot nest");
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr) throw UsageError("config key '" + key + "' is not an option of " + sub->get_name());
        if (opt->count() > 0) continue;
        std::vector<std::string> results;
        if (value.is_array())
            for (const auto& v : value) results.push_back(scalar(key, v));
        else
            results.push_back(scalar(key, value));
        try {
            for (const auto& r : results) opt->add_result(r);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config key '" + key + "': " + e.what());
        }
    }
}

// ---------------------------------------------------------------- validation

DescriptorKind descriptor_kind(const RunConfig& cfg)
{
    try {
        return parse_descriptor_kind(cfg.descriptor);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

std::vector<Measure> measures_of(const std::vector<std::string>& names)
{
    std::vector<Measure> out;
    for (const auto& name : names) {
        try {
            out.push_back(parse_measure(name));
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

void check_kernels(const std::vector<std::string>& names)
{
    for (const auto& name : names)
        if (std::find(kAllKernels.begin(), kAllKernels.end(), name) == kAllKernels.end())
            throw UsageError("unknown kernel '" + name + "'");
}

void check_positive(const std::vector<double>& values, const std::string& flag)
{
    if (values.empty()) throw UsageError(flag + " list is empty");
    for (double v : values)
        if (!(v > 0.0)) throw UsageError(flag + " values must be positive, got " + format_double(v));
}

std::vector<std::string> or_default(const std::vector<std::string>& v, const std::vector<std::string>& fallback)
{
    return v.empty() ? fallback : v;
}

// ------------------------------------------------------------------- helpers

std::vector<CrystalStructure> load(const RunConfig& cfg)
{
    if (cfg.manifest.empty()) throw UsageError("--manifest is required");
    if (!fs::exists(cfg.manifest)) throw UsageError("manifest not found: " + cfg.manifest);
    auto dataset = load_dataset(cfg.manifest);
    if (dataset.empty()) throw DomainError("manifest " + cfg.manifest + " lists no structures");
    return dataset;
}

Eigen::VectorXd targets(const std::vector<CrystalStructure>& dataset)
{
    Eigen::VectorXd y(static_cast<Eigen::Index>(dataset.size()));
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (!dataset[i].formation_energy) throw DomainError("missing formation_energy for id " + dataset[i].id);
        y[static_cast<Eigen::Index>(i)] = *dataset[i].formation_energy;
    }
    return y;
}

fs::path out_dir(const RunConfig& cfg)
{
    fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory " + cfg.out + ": " + ec.message());
    return dir;
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json metrics_json(const Metrics& m)
{
    // nlohmann writes NaN as null, which is how an undefined R^2 is reported
    return json{{"rmse", m.rmse}, {"mae", m.mae}, {"r2", m.r2}};
}

// ------------------------------------------------------------------ commands

void cmd_featurize(const RunConfig& cfg, std::ostream& out)
{
    const auto kind = descriptor_kind(cfg);
    const auto dataset = load(cfg);
    const FeatureMatrix fm = featurize(dataset, kind, cfg.pad_len);

    std::vector<std::string> header{"id"};
    for (Eigen::Index j = 0; j < fm.values.cols(); ++j) header.push_back("f" + std::to_string(j));
    CsvTable table(header);
    for (std::size_t i = 0; i < fm.ids.size(); ++i) {
        std::vector<std::string> row{fm.ids[i]};
        for (Eigen::Index j = 0; j < fm.values.cols(); ++j)
            row.push_back(format_double(fm.values(static_cast<Eigen::Index>(i), j)));
        table.add_row(std::move(row));
    }

    const fs::path dir = out_dir(cfg);
    write_text(dir / "features.csv", table.str());
    write_json(dir / "features.json", json{{"descriptor", std::string(to_string(fm.kind))},
                                           {"dimension", fm.values.cols()},
                                           {"pad_len", fm.pad_len},
                                           {"n", fm.values.rows()},
                                           {"ids", fm.ids}});

    if (!cfg.voronoi_dump.empty()) {
        const fs::path vdir = dir / cfg.voronoi_dump;
        fs::create_directories(vdir);
        for (const auto& s : dataset) {
            const auto shells = neighbor_shells(s);
            for (const auto& shell : shells)
                write_text(vdir / (s.id + "_site" + std::to_string(shell.central_site_index) + ".csv"),
                           neighbor_shell_csv(shell));
        }
    }
    out << "featurize: " << fm.values.rows() << " x " << fm.values.cols() << " -> " << (dir / "features.csv").string()
        << "\n";
}

void cmd_analyze(const RunConfig& cfg, std::ostream& out)
{
    const auto kind = descriptor_kind(cfg);
    const auto names = or_default(cfg.measures, kAllMeasures);
    const auto measures = measures_of(names);
    std::vector<double> eps = cfg.eps;
    if (eps.empty())
        for (int i = 0; i <= 10; ++i) eps.push_back(i / 10.0);
    for (double e : eps)
        if (!(e >= 0.0)) throw UsageError("--eps values must be >= 0");

    const FeatureMatrix fm = featurize(load(cfg), kind, cfg.pad_len);
    const AffinityMatrix hamming = affinity_matrix(fm.values, Hamming{});

    CsvTable corr({"measure", "correlation"});
    CsvTable neigh({"measure", "eps", "avg_count"});
    for (std::size_t m = 0; m < measures.size(); ++m) {
        const AffinityMatrix A = std::holds_alternative<Hamming>(measures[m]) ? hamming
                                                                              : affinity_matrix(fm.values, measures[m]);
        if (!std::holds_alternative<Hamming>(measures[m]))
            corr.add_row({names[m], format_double(distinctiveness_correlation(A, hamming))});
        for (double e : eps) neigh.add_row({names[m], format_double(e), format_double(avg_neighbor_count(A, e))});
    }

    const fs::path dir = out_dir(cfg);
    write_text(dir / "correlation.csv", corr.str());
    write_text(dir / "neighbors.csv", neigh.str());
    write_json(dir / "variance.json", json{{"descriptor", std::string(to_string(fm.kind))},
                                           {"dimension", fm.values.cols()},
                                           {"n", fm.values.rows()},
                                           {"variance", data_variance(fm.values)}});
    out << "analyze-similarity: " << measures.size() << " measures, " << eps.size() << " eps values\n";
}

void cmd_regress(const RunConfig& cfg, std::ostream& out)
{
    const auto kind = descriptor_kind(cfg);
    const auto measure_names = or_default(cfg.measures, kAllMeasures);
    const auto measures = measures_of(measure_names);
    const auto kernels = or_default(cfg.kernels, kAllKernels);
    check_kernels(kernels);
    std::vector<int> ks = cfg.ks;
    if (ks.empty())
        for (int k = 1; k <= 10; ++k) ks.push_back(k);
    for (int k : ks)
        if (k < 1) throw UsageError("--k values must be >= 1");
    const auto lambdas = cfg.lambdas.empty() ? default_grid() : cfg.lambdas;
    const auto gammas = cfg.gammas.empty() ? default_grid() : cfg.gammas;
    check_positive(lambdas, "--lambda");
    check_positive(gammas, "--gamma");
    if (cfg.folds < 2) throw UsageError("--folds must be >= 2");

    const auto dataset = load(cfg);
    const Eigen::VectorXd y = targets(dataset);
    const FeatureMatrix fm = featurize(dataset, kind, cfg.pad_len);
    const FoldPlan plan = make_fold_plan(static_cast<int>(y.size()), cfg.folds, cfg.seed.value_or(kDefaultSeed));
    const CvOptions options{cfg.standardize, std::string(to_string(kind))};

    std::vector<EvaluationReport> reports;
    for (const auto& m : measures)
        for (int k : ks) reports.push_back(kfold_cv(fm.values, y, KnnSpec{k, m}, plan, options));

    CsvTable grid({"model", "lambda", "gamma", "mean_rmse", "error"});
    const auto record = [&](const std::string& model, const GridSearchResult& r, bool has_gamma) {
        for (const auto& cell : r.cells)
            grid.add_row({model, format_double(cell.lambda), has_gamma ? format_double(cell.gamma) : "",
                          cell.mean_rmse ? format_double(*cell.mean_rmse) : "", one_line(cell.error)});
        reports.push_back(r.report);
    };
    record("ridge", grid_search(fm.values, y, RidgeFamily{}, lambdas, gammas, plan, options), false);
    for (const auto& kernel : kernels)
        record("krr(" + kernel + ")", grid_search(fm.values, y, KrrFamily{kernel}, lambdas, gammas, plan, options),
               true);

    const fs::path dir = out_dir(cfg);
    write_text(dir / "report.json", reports_to_json(reports));
    write_text(dir / "grid.csv", grid.str());
    out << "regress: " << reports.size() << " reports\n";
}

void cmd_dof(const RunConfig& cfg, std::ostream& out)
{
    const auto kind = descriptor_kind(cfg);
    const auto kernels = or_default(cfg.kernels, kAllKernels);
    check_kernels(kernels);
    const auto lambdas = cfg.lambdas.empty() ? default_grid() : cfg.lambdas;
    const auto gammas = cfg.gammas.empty() ? default_grid() : cfg.gammas;
    check_positive(lambdas, "--lambda");
    check_positive(gammas, "--gamma");

    const FeatureMatrix fm = featurize(load(cfg), kind, cfg.pad_len);
    const Eigen::MatrixXd X = cfg.standardize ? Standardizer::fit(fm.values).apply(fm.values) : fm.values;

    // df depends on the design and the hyperparameters only, so no labels are needed
    CsvTable table({"model", "kernel", "lambda", "gamma", "df"});
    for (double lambda : lambdas) {
        const RidgeModel ridge{Eigen::VectorXd::Zero(X.cols()), lambda};
        table.add_row({"ridge", "", format_double(lambda), "", format_double(degrees_of_freedom(ridge, X))});
    }
    for (const auto& name : kernels)
        for (double gamma : gammas)
            for (double lambda : lambdas) {
                const KrrModel krr{Eigen::VectorXd::Zero(X.rows()), X, make_kernel(name, gamma), lambda};
                table.add_row({"krr", name, format_double(lambda), format_double(gamma),
                               format_double(degrees_of_freedom(krr))});
            }

    const fs::path dir = out_dir(cfg);
    write_text(dir / "dof.csv", table.str());
    out << "dof: " << table.rows().size() << " rows\n";
}

void cmd_project(const RunConfig& cfg, std::ostream& out)
{
    const auto kind = descriptor_kind(cfg);
    if (cfg.groups < 1) throw UsageError("--groups must be >= 1");
    const auto dataset = load(cfg);
    const FeatureMatrix fm = featurize(dataset, kind, cfg.pad_len);
    const Eigen::MatrixXd X = cfg.standardize ? Standardizer::fit(fm.values).apply(fm.values) : fm.values;
    const PcaResult pca = pca_project(X, 2);
    KMeansOptions km;
    km.k = cfg.groups;
    km.seed = cfg.seed.value_or(kDefaultSeed);
    const auto labels = cluster_groups(pca.projection, km);

    CsvTable table({"id", "pc1", "pc2", "group", "formation_energy"});
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const auto& e = dataset[i].formation_energy;
        table.add_row({fm.ids[i], format_double(pca.projection(r, 0)), format_double(pca.projection(r, 1)),
                       std::to_string(labels[i]), e ? format_double(*e) : ""});
    }

    const fs::path dir = out_dir(cfg);
    write_text(dir / "projection.csv", table.str());
    write_json(dir / "projection.json",
               json{{"descriptor", std::string(to_string(kind))},
                    {"explained_variance", std::vector<double>(pca.explained.begin(), pca.explained.end())},
                    {"groups", cfg.groups}});
    out << "project: " << dataset.size() << " points in " << cfg.groups << " groups\n";
}

void cmd_appendix_a(const RunConfig& cfg, std::ostream& out)
{
    SyntheticSpec spec;
    spec.n = cfg.n;
    spec.lo = cfg.lo;
    spec.hi = cfg.hi;
    spec.mu = cfg.mu;
    spec.sigma = cfg.sigma;
    spec.seed = cfg.seed.value_or(7);
    if (cfg.sampling == "uniform")
        spec.sampling = Sampling::UniformRandom;
    else if (cfg.sampling == "grid")
        spec.sampling = Sampling::Grid;
    else
        throw UsageError("--sampling must be uniform or grid");
    if (spec.n < 2 || !(spec.lo < spec.hi) || !(spec.sigma >= 0.0))
        throw UsageError("invalid synthetic spec: need n >= 2, lo < hi, sigma >= 0");
    const std::vector<int> ks = cfg.ks.empty() ? std::vector<int>{4, 8, 10} : cfg.ks;

    const SyntheticSample sample = generate_appendix_a(spec);
    const KnnSweep sweep = run_appendix_a(sample.x, sample.y, ks);

    std::vector<std::string> header{"x", "y_true", "y_noisy"};
    for (int k : ks) header.push_back("pred_k" + std::to_string(k));
    CsvTable table(header);
    for (Eigen::Index i = 0; i < sample.x.size(); ++i) {
        std::vector<std::string> row{format_double(sample.x[i]), format_double(sample.y_true[i]),
                                     format_double(sample.y[i])};
        for (Eigen::Index c = 0; c < sweep.predictions.cols(); ++c) row.push_back(format_double(sweep.predictions(i, c)));
        table.add_row(std::move(row));
    }
    json metrics = json::array();
    for (std::size_t c = 0; c < ks.size(); ++c)
        metrics.push_back({{"k", ks[c]}, {"rmse", sweep.metrics[c].rmse}, {"mae", sweep.metrics[c].mae}});

    const fs::path dir = out_dir(cfg);
    write_text(dir / "appendix_a.csv", table.str());
    write_json(dir / "appendix_a.json", json{{"n", spec.n},
                                             {"range", {spec.lo, spec.hi}},
                                             {"mu", spec.mu},
                                             {"sigma", spec.sigma},
                                             {"seed", spec.seed},
                                             {"sampling", cfg.sampling},
                                             {"metrics", metrics}});
    out << "appendix-a: n = " << spec.n << ", " << ks.size() << " values of k\n";
}

} // namespace

std::string reports_to_json(const std::vector<EvaluationReport>& reports)
{
    json arr = json::array();
    for (const auto& r : reports) {
        json folds = json::array();
        for (const auto& f : r.folds) folds.push_back(metrics_json(f));
        arr.push_back({{"model", r.model},
                       {"descriptor", r.descriptor},
                       {"lambda", optional_number(r.lambda)},
                       {"gamma", optional_number(r.gamma)},
                       {"folds", folds},
                       {"mean", metrics_json(r.mean)},
                       {"std", metrics_json(r.stddev)}});
    }
    return arr.dump(2) + "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Crystal descriptors, similarity analysis and formation-energy regression", "matsim"};
    app.require_subcommand(1);

    auto* featurize_cmd = app.add_subcommand("featurize", "write the descriptor matrix of a manifest");
    add_data_options(featurize_cmd, cfg);
    add_option(featurize_cmd, "--voronoi-dump", cfg.voronoi_dump, "subdirectory for per-site neighbor CSVs");

    auto* analyze_cmd = app.add_subcommand("analyze-similarity", "distinctiveness, neighbor counts and variance");
    add_data_options(analyze_cmd, cfg);
    add_list(analyze_cmd, "--measure", cfg.measures, "measures (default: all)");
    add_list(analyze_cmd, "--eps", cfg.eps, "neighbor-region widths (default: 0.0,0.1,...,1.0)");

    auto* regress_cmd = app.add_subcommand("regress", "cross-validated KNN, ridge and KRR");
    add_data_options(regress_cmd, cfg);
    add_list(regress_cmd, "--measure", cfg.measures, "KNN measures (default: all)");
    add_list(regress_cmd, "--k", cfg.ks, "KNN neighbor counts (default: 1..10)");
    add_list(regress_cmd, "--kernel", cfg.kernels, "KRR kernels (default: all)");
    add_list(regress_cmd, "--lambda", cfg.lambdas, "lambda grid");
    add_list(regress_cmd, "--gamma", cfg.gammas, "gamma grid");
    add_option(regress_cmd, "--folds", cfg.folds, "number of CV folds");
    regress_cmd->add_flag("--standardize", cfg.standardize, "z-score features inside each fold");

    auto* dof_cmd = app.add_subcommand("dof", "degrees of freedom of ridge and KRR");
    add_data_options(dof_cmd, cfg);
    add_list(dof_cmd, "--kernel", cfg.kernels, "KRR kernels (default: all)");
    add_list(dof_cmd, "--lambda", cfg.lambdas, "lambda grid");
    add_list(dof_cmd, "--gamma", cfg.gammas, "gamma grid");
    dof_cmd->add_flag("--standardize", cfg.standardize, "z-score features first");

    auto* project_cmd = app.add_subcommand("project", "PCA projection and k-means groups");
    add_data_options(project_cmd, cfg);
    add_option(project_cmd, "--groups", cfg.groups, "number of k-means groups");
    project_cmd->add_flag("--standardize", cfg.standardize, "z-score features first");

    auto* appendix_cmd = app.add_subcommand("appendix-a", "KNN on a noisy 1-D test function");
    add_option(appendix_cmd, "--n", cfg.n, "number of samples");
    add_option(appendix_cmd, "--lo", cfg.lo, "lower end of the x range");
    add_option(appendix_cmd, "--hi", cfg.hi, "upper end of the x range");
    add_option(appendix_cmd, "--mu", cfg.mu, "noise mean");
    add_option(appendix_cmd, "--sigma", cfg.sigma, "noise standard deviation");
    add_option(appendix_cmd, "--sampling", cfg.sampling, "uniform | grid");
    add_list(appendix_cmd, "--k", cfg.ks, "neighbor counts (default: 4,8,10)");

    for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) add_common(sub, cfg);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty()) reversed.pop_back(); // program name
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "matsim: usage: " << one_line(e.what()) << "\n";
        return kExitUsage;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (!cfg.config_path.empty()) apply_config_file(sub, cfg.config_path);
        const std::string name = sub->get_name();
        if (name == "featurize")
            cmd_featurize(cfg, out);
        else if (name == "analyze-similarity")
            cmd_analyze(cfg, out);
        else if (name == "regress")
            cmd_regress(cfg, out);
        else if (name == "dof")
            cmd_dof(cfg, out);
        else if (name == "project")
            cmd_project(cfg, out);
        else
            cmd_appendix_a(cfg, out);
    } catch (const UsageError& e) {
        err << "matsim: usage: " << one_line(e.what()) << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "matsim: data: " << one_line(e.what()) << "\n";
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        err << "matsim: data: " << one_line(e.what()) << "\n";
        return kExitData;
    }
    return kExitOk;
}

int run(int argc, char** argv)
{
    return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

} // namespace matsim::cli
