#include <CLI11.hpp>
#include <json.hpp>

#include "modeseek/asymptotics.hpp"
#include "modeseek/bandwidth.hpp"
#include "modeseek/dataset.hpp"
#include "modeseek/density.hpp"
#include "modeseek/evaluation.hpp"
#include "modeseek/kernel.hpp"
#include "modeseek/meanshift.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using json = nlohmann::ordered_json;
using namespace modeseek;

constexpr const char* kVersion = "modeseek 0.1.0";

void emit(const json& doc, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file " + out_path);
    out << doc.dump(2) << '\n';
}

json manifest(const std::string& subcommand, const std::string& kernel_spec,
              const std::string& data_source, const json& config_echo,
              const json& output_paths) {
    return json{{"subcommand", subcommand},
                {"kernel", kernel_spec},
                {"data", data_source},
                {"config", config_echo},
                {"outputs", output_paths},
                {"version", kVersion}};
}

json report_to_json(const BandwidthReport& report) {
    json samples = json::array();
    for (const auto& [q, value] : report.phi_samples) samples.push_back({q, value});
    json doc{{"classification", to_string(report.classification)},
             {"q0", nullptr},
             {"h0", nullptr},
             {"xmax_norm", report.xmax_norm},
             {"phi_samples", std::move(samples)}};
    if (report.q0) doc["q0"] = *report.q0;
    if (report.h0) doc["h0"] = *report.h0;
    return doc;
}

// Shared bandwidth selection: exactly one of --h <v>, --h auto, --h-mult <m>.
struct BandwidthChoice {
    std::string h_arg; // number or "auto"
    double h_mult = 0.0;

    double resolve(const KernelProfile& profile, const Dataset& data, json& echo) const {
        const bool has_h = !h_arg.empty();
        const bool has_mult = h_mult > 0.0;
        if (has_h == has_mult)
            throw std::runtime_error("choose exactly one of --h and --h-mult");
        if (has_mult) {
            const double h = h_mult * data.max_norm();
            echo["h_mult"] = h_mult;
            echo["h"] = h;
            return h;
        }
        if (h_arg == "auto") {
            const BandwidthReport report = solve_h0(profile, data.max_norm());
            if (report.classification != ThresholdClass::FiniteRoot)
                throw std::runtime_error(
                    std::string("--h auto needs a finite threshold root, but the "
                                "classification is ") +
                    to_string(report.classification));
            if (!(*report.h0 > 0.0))
                throw std::runtime_error("--h auto produced a zero bandwidth");
            echo["h_auto"] = true;
            echo["h"] = *report.h0;
            return *report.h0;
        }
        std::size_t pos = 0;
        const double h = std::stod(h_arg, &pos);
        if (pos != h_arg.size() || !(h > 0.0))
            throw std::runtime_error("--h expects a positive number or 'auto'");
        echo["h"] = h;
        return h;
    }
};

json run_result_to_json(const RunResult& result) {
    json modes = json::array();
    for (const auto& mode : result.merged_modes) modes.push_back(mode);
    int converged = 0;
    for (bool flag : result.converged_flags) converged += flag;
    return json{{"K", result.merged_modes.size()},
                {"cluster_sizes", result.cluster_sizes},
                {"assignment", result.assignment},
                {"iterations", result.iterations},
                {"converged_seeds", converged},
                {"merged_modes", std::move(modes)}};
}

void write_trajectories(const RunResult& result, std::size_t d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trajectory file " + path);
    out << "seed,iter";
    for (std::size_t j = 0; j < d; ++j) out << ",coord_" << j;
    out << '\n';
    char buf[40];
    for (std::size_t seed = 0; seed < result.trajectories.size(); ++seed)
        for (std::size_t step = 0; step < result.trajectories[seed].size(); ++step) {
            out << seed << ',' << step;
            for (double v : result.trajectories[seed][step]) {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out << ',' << buf;
            }
            out << '\n';
        }
}

std::vector<int> load_label_column(const std::string& path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        const auto doc = nlohmann::json::parse(in);
        if (!doc.contains("assignment"))
            throw std::runtime_error(path + " has no 'assignment' field");
        return doc["assignment"].get<std::vector<int>>();
    }
    Dataset data = load_csv(path);
    if (data.d == 1) {
        std::vector<int> labels(data.n);
        for (std::size_t i = 0; i < data.n; ++i) {
            if (data.xs[i] != std::floor(data.xs[i]))
                throw std::runtime_error(path + ": labels must be integers");
            labels[i] = static_cast<int>(data.xs[i]);
        }
        return labels;
    }
    CsvOptions options;
    options.labels_last_column = true;
    data = load_csv(path, options);
    return *data.labels;
}

json eval_report_to_json(const EvalReport& report) {
    return json{{"ari", report.ari},
                {"accuracy", report.accuracy},
                {"cvm", report.cvm},
                {"contingency", report.contingency}};
}

int cmd_solve_h0(const std::string& kernel_spec, double xmax, const std::string& out_path) {
    const KernelProfile profile = parse_kernel_spec(kernel_spec);
    const BandwidthReport report = solve_h0(profile, xmax);
    json doc = report_to_json(report);
    doc["manifest"] = manifest("solve-h0", kernel_spec, "", json{{"xmax", xmax}},
                               json{{"out", out_path}});
    emit(doc, out_path);
    return 0;
}

int cmd_synth(std::size_t n, double sep, double sigma, std::uint64_t seed,
              const std::string& out_path) {
    const Dataset data = gen_two_gaussians(n, sep, sigma, seed);
    if (out_path.empty() || out_path == "-") {
        char buf[40];
        for (std::size_t i = 0; i < data.n; ++i) {
            for (std::size_t j = 0; j < data.d; ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", data.xs[i * data.d + j]);
                std::cout << buf << ',';
            }
            std::cout << (*data.labels)[i] << '\n';
        }
        return 0;
    }
    write_csv(data, out_path);
    return 0;
}

int cmd_run(const std::string& data_path, bool labels, bool apply_zscore, bool apply_pca2,
            const std::string& kernel_spec, const BandwidthChoice& bandwidth, double tol,
            int max_iter, double merge_tol, bool exclude_self, std::size_t knn, unsigned threads,
            const std::string& traj_path, const std::string& out_path) {
    const KernelProfile profile = parse_kernel_spec(kernel_spec);
    CsvOptions options;
    options.labels_last_column = labels;
    Dataset data = load_csv(data_path, options);
    if (apply_zscore) data = zscore(data);
    if (apply_pca2) data = pca2(data);

    MeanShiftConfig config;
    config.conv_tol = tol;
    config.max_iter = max_iter;
    config.merge_tol = merge_tol;
    config.exclude_self = exclude_self || profile.singular_at_zero();
    config.threads = threads;
    config.record_trajectories = !traj_path.empty();
    if (knn > 0) config.knn = knn;

    json echo{{"tol", tol},
              {"max_iter", max_iter},
              {"merge_tol", merge_tol},
              {"exclude_self", config.exclude_self},
              {"knn", knn > 0 ? json(knn) : json(nullptr)},
              {"zscore", apply_zscore},
              {"pca2", apply_pca2}};
    config.h = bandwidth.resolve(profile, data, echo);

    const RunResult result = run_all(data, profile, config);
    if (!traj_path.empty()) write_trajectories(result, data.d, traj_path);

    json doc = run_result_to_json(result);
    doc["xmax_norm"] = data.max_norm();
    if (data.labels)
        doc["eval"] = eval_report_to_json(evaluate_clustering(result.assignment, *data.labels));
    doc["manifest"] = manifest("run", kernel_spec, data_path, echo,
                               json{{"out", out_path}, {"traj", traj_path}});
    emit(doc, out_path);
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path,
             const std::string& out_path) {
    const std::vector<int> pred = load_label_column(pred_path);
    const std::vector<int> truth = load_label_column(truth_path);
    json doc = eval_report_to_json(evaluate_clustering(pred, truth));
    doc["manifest"] = manifest("eval", "", pred_path + "," + truth_path, json::object(),
                               json{{"out", out_path}});
    emit(doc, out_path);
    return 0;
}

int cmd_limits(const std::string& data_path, bool labels, const std::string& kernel_spec,
               std::size_t seed_index, const std::string& out_path) {
    const KernelProfile profile = parse_kernel_spec(kernel_spec);
    CsvOptions options;
    options.labels_last_column = labels;
    const Dataset data = load_csv(data_path, options);
    const LimitPrediction pred = predict_first_iterate_limit(data, profile, seed_index);

    MeanShiftConfig config;
    config.h = 1e6 * data.max_norm();
    config.exclude_self = pred.kind == LimitKind::PowerLawLocalMean;
    config.eps_q = 1e-300; // the default floor would flatten weights at this h
    const Vec step = ms_step(data, profile, config, seed_index, data.point(seed_index));

    json doc{{"kind", pred.kind == LimitKind::GlobalMean ? "GlobalMean" : "PowerLawLocalMean"},
             {"p", pred.p ? json(*pred.p) : json(nullptr)},
             {"predicted_point", pred.point},
             {"empirical_first_iterate", step},
             {"difference", std::sqrt(squared_distance(step, pred.point))},
             {"h", config.h}};
    doc["manifest"] = manifest("limits", kernel_spec, data_path,
                               json{{"seed", seed_index}, {"h_mult", 1e6}},
                               json{{"out", out_path}});
    emit(doc, out_path);
    return 0;
}

int cmd_diagnose(const std::string& data_path, bool labels, const std::string& kernel_spec,
                 const BandwidthChoice& bandwidth, double tol, int max_iter, double merge_tol,
                 bool exclude_self, unsigned threads, const std::string& out_path) {
    const KernelProfile profile = parse_kernel_spec(kernel_spec);
    CsvOptions options;
    options.labels_last_column = labels;
    const Dataset data = load_csv(data_path, options);

    MeanShiftConfig config;
    config.conv_tol = tol;
    config.max_iter = max_iter;
    config.merge_tol = merge_tol;
    config.exclude_self = exclude_self || profile.singular_at_zero();
    config.threads = threads;

    json echo{{"tol", tol},
              {"max_iter", max_iter},
              {"merge_tol", merge_tol},
              {"exclude_self", config.exclude_self}};
    config.h = bandwidth.resolve(profile, data, echo);

    const RunResult result = run_all(data, profile, config);
    json modes = json::array();
    for (std::size_t m = 0; m < result.merged_modes.size(); ++m) {
        const auto diag =
            hessian_rank_diagnostic(data, profile, config.h, result.merged_modes[m]);
        modes.push_back(json{{"mode", m},
                             {"point", result.merged_modes[m]},
                             {"size", result.cluster_sizes[m]},
                             {"eigenvalues", diag.eigenvalues},
                             {"min_abs_eigenvalue", diag.min_abs_eigenvalue},
                             {"C", diag.C},
                             {"lambda_max_A_over_h2", diag.lambda_max_A_over_h2},
                             {"certificate", diag.certificate},
                             {"inside_bbox", diag.inside_bbox}});
    }
    json doc{{"K", result.merged_modes.size()}, {"modes", std::move(modes)}};
    doc["manifest"] = manifest("diagnose", kernel_spec, data_path, echo,
                               json{{"out", out_path}});
    emit(doc, out_path);
    return 0;
}

int cmd_segment(const std::string& image_path, const std::string& kernel_spec, double h_mult,
                std::size_t knn, double dark_quantile, const std::string& mask_path,
                const std::string& report_path) {
    const KernelProfile profile = parse_kernel_spec(kernel_spec);
    const GrayImage image = load_pgm(image_path);
    const SegmentResult result = segment(image, profile, h_mult, knn, dark_quantile);
    write_pgm(result.mask, mask_path);
    if (!report_path.empty()) {
        json doc{{"merged_modes", result.merged_modes},
                 {"h", result.h},
                 {"merge_tol", result.merge_tol},
                 {"median_nn", result.median_nn},
                 {"intensity_threshold", result.intensity_threshold}};
        doc["manifest"] = manifest("segment", kernel_spec, image_path,
                                   json{{"h_mult", h_mult},
                                        {"knn", knn},
                                        {"dark_quantile", dark_quantile}},
                                   json{{"mask", mask_path}, {"report", report_path}});
        emit(doc, report_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mode-seeking mean shift toolkit"};
    app.set_help_flag("--help", "print help"); // frees -h/--h for the bandwidth flag
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve-h0", "classify/solve the bandwidth threshold");
    std::string solve_kernel, solve_out;
    double solve_xmax = 0.0;
    solve->add_option("--kernel", solve_kernel)->required();
    solve->add_option("--xmax", solve_xmax)->required()->check(CLI::NonNegativeNumber);
    solve->add_option("--out", solve_out);

    auto* synth = app.add_subcommand("synth", "generate the two-gaussian dataset");
    std::size_t synth_n = 300;
    double synth_sep = 5.0, synth_sigma = 0.35;
    std::uint64_t synth_seed = 42;
    std::string synth_out;
    synth->add_option("--n", synth_n);
    synth->add_option("--sep", synth_sep);
    synth->add_option("--sigma", synth_sigma);
    synth->add_option("--seed", synth_seed);
    synth->add_option("-o,--out", synth_out);

    std::string run_data, run_kernel, run_traj, run_out, run_h;
    bool run_labels = false, run_exclude = false, run_zscore = false, run_pca2 = false;
    double run_mult = 0.0, run_tol = 1e-8, run_merge = 0.05;
    int run_max_iter = 10000;
    std::size_t run_knn = 0;
    unsigned run_threads = 0;

    auto* run = app.add_subcommand("run", "mean shift from every seed, merge modes");
    run->add_option("--data", run_data)->required();
    run->add_flag("--labels", run_labels, "last CSV column holds integer labels");
    run->add_flag("--zscore", run_zscore, "z-score features before running");
    run->add_flag("--pca2", run_pca2, "project onto the top-2 principal axes");
    run->add_option("--kernel", run_kernel)->required();
    run->add_option("--h", run_h, "bandwidth value or 'auto'");
    run->add_option("--h-mult", run_mult, "bandwidth as multiple of ||x_max||");
    run->add_option("--tol", run_tol);
    run->add_option("--max-iter", run_max_iter);
    run->add_option("--merge-tol", run_merge);
    run->add_flag("--exclude-self", run_exclude);
    run->add_option("--knn", run_knn);
    run->add_option("--threads", run_threads);
    run->add_option("--traj", run_traj, "write per-seed trajectories CSV");
    run->add_option("--out", run_out);

    auto* eval = app.add_subcommand("eval", "score a clustering against ground truth");
    std::string eval_pred, eval_truth, eval_out;
    eval->add_option("--pred", eval_pred)->required();
    eval->add_option("--truth", eval_truth)->required();
    eval->add_option("--out", eval_out);

    auto* limits = app.add_subcommand("limits", "large-bandwidth first-iterate prediction");
    std::string limits_data, limits_kernel, limits_out;
    bool limits_labels = false;
    std::size_t limits_seed = 0;
    limits->add_option("--data", limits_data)->required();
    limits->add_flag("--labels", limits_labels);
    limits->add_option("--kernel", limits_kernel)->required();
    limits->add_option("--seed", limits_seed)->required();
    limits->add_option("--out", limits_out);

    auto* diagnose = app.add_subcommand("diagnose", "hessian spectral diagnostic per mode");
    std::string diag_data, diag_kernel, diag_out, diag_h;
    bool diag_labels = false, diag_exclude = false;
    double diag_mult = 0.0, diag_tol = 1e-8, diag_merge = 0.05;
    int diag_max_iter = 10000;
    unsigned diag_threads = 0;
    diagnose->add_option("--data", diag_data)->required();
    diagnose->add_flag("--labels", diag_labels);
    diagnose->add_option("--kernel", diag_kernel)->required();
    diagnose->add_option("--h", diag_h);
    diagnose->add_option("--h-mult", diag_mult);
    diagnose->add_option("--tol", diag_tol);
    diagnose->add_option("--max-iter", diag_max_iter);
    diagnose->add_option("--merge-tol", diag_merge);
    diagnose->add_flag("--exclude-self", diag_exclude);
    diagnose->add_option("--threads", diag_threads);
    diagnose->add_option("--out", diag_out);

    auto* seg = app.add_subcommand("segment", "mean shift image segmentation");
    std::string seg_image, seg_kernel = "cauchy:1.99", seg_mask, seg_report;
    double seg_mult = 10.0, seg_quantile = 0.35;
    std::size_t seg_knn = 300;
    seg->add_option("--image", seg_image)->required();
    seg->add_option("--kernel", seg_kernel);
    seg->add_option("--h-mult", seg_mult);
    seg->add_option("--knn", seg_knn);
    seg->add_option("--dark-quantile", seg_quantile);
    seg->add_option("--out", seg_mask)->required();
    seg->add_option("--report", seg_report);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve_h0(solve_kernel, solve_xmax, solve_out);
        if (synth->parsed())
            return cmd_synth(synth_n, synth_sep, synth_sigma, synth_seed, synth_out);
        if (run->parsed())
            return cmd_run(run_data, run_labels, run_zscore, run_pca2, run_kernel,
                           {run_h, run_mult}, run_tol, run_max_iter, run_merge, run_exclude,
                           run_knn, run_threads, run_traj, run_out);
        if (eval->parsed()) return cmd_eval(eval_pred, eval_truth, eval_out);
        if (limits->parsed())
            return cmd_limits(limits_data, limits_labels, limits_kernel, limits_seed, limits_out);
        if (diagnose->parsed())
            return cmd_diagnose(diag_data, diag_labels, diag_kernel, {diag_h, diag_mult},
                                diag_tol, diag_max_iter, diag_merge, diag_exclude, diag_threads,
                                diag_out);
        if (seg->parsed())
            return cmd_segment(seg_image, seg_kernel, seg_mult, seg_knn, seg_quantile, seg_mask,
                               seg_report);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
