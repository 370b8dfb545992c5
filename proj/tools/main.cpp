#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmt/config.hpp"
#include "dmt/montecarlo.hpp"
#include "dmt/report.hpp"
#include "dmt/separation.hpp"

namespace fs = std::filesystem;
using namespace dmt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGateFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitResourceError = 3;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> reps;
    std::string out_dir;
    bool gate = false;
    bool svg = false;
};

void add_common_options(CLI::App* cmd, CommonOpts& opts, bool with_gate_and_svg) {
    cmd->add_option("--config", opts.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--seed", opts.seed, "override the config seed");
    cmd->add_option("--reps", opts.reps, "override the replication count");
    cmd->add_option("--out", opts.out_dir, "directory for CSV/SVG outputs");
    if (with_gate_and_svg) {
        cmd->add_flag("--gate", opts.gate, "evaluate the config's statistical gates");
        cmd->add_flag("--svg", opts.svg, "emit the power-curve SVG");
    }
}

ExperimentConfig load_with_overrides(const CommonOpts& opts) {
    ExperimentConfig cfg = load_config(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.reps) cfg.replications = *opts.reps;
    return cfg;
}

// Output resolution: --out directory wins, then the config's own path, then
// stdout (empty result).
std::optional<fs::path> resolve_output(const CommonOpts& opts,
                                       const std::optional<std::string>& configured,
                                       const std::string& fallback_name) {
    if (!opts.out_dir.empty()) {
        fs::create_directories(opts.out_dir);
        const std::string name =
            configured ? fs::path(*configured).filename().string() : fallback_name;
        return fs::path(opts.out_dir) / name;
    }
    if (configured) return fs::path(*configured);
    return std::nullopt;
}

void write_or_print(const std::optional<fs::path>& path, const std::string& content) {
    if (!path) {
        std::cout << content;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + path->string());
    out << content;
    std::cout << "wrote " << path->string() << "\n";
}

std::string regime_of(const ExperimentConfig& cfg) {
    const RegimeReport report = homogeneity_report(cfg.dict, cfg.theta0, cfg.epsilon);
    if (report.homogeneous) return "homogeneous";
    if (cfg.test_kind == TestKind::mixed || cfg.test_kind == TestKind::adaptive) return "mixed";
    return "non-homogeneous";
}

ReportRow base_row(const ExperimentConfig& cfg, const std::string& regime) {
    ReportRow row;
    row.test_name = test_kind_name(cfg.test_kind);
    row.regime = regime;
    row.alpha = cfg.alpha;
    row.beta = cfg.beta;
    row.epsilon = cfg.epsilon;
    row.m = cfg.dict.common_length();
    row.dict_size = cfg.dict.size();
    row.n_reps = cfg.replications;
    row.seed = cfg.seed;
    return row;
}

struct GateState {
    bool any_failed = false;

    std::string annotate(bool enabled, std::optional<double> bound, const CellEstimate& cell) {
        if (!enabled) return "";
        if (!bound) throw ConfigError("/gate: --gate requested but no bound configured");
        const bool pass = cell.ci.low <= *bound;
        if (!pass) any_failed = true;
        return std::string(" gate=") + (pass ? "PASS" : "FAIL") + " bound=" +
               format_double(*bound);
    }
};

// Boundary alternatives for one spectrum: seeded directions at squared
// distance C rho^2 from theta0.
std::vector<SignalSequence> boundary_alternatives(const ExperimentConfig& cfg,
                                                  std::size_t b_index, double constant) {
    const OperatorSpectrum& b = cfg.dict[b_index];
    const double rho = separation_radius(b, cfg.epsilon);
    const double radius = std::sqrt(constant) * rho;
    std::vector<SignalSequence> alts;
    for (std::size_t j = 0; j < cfg.alternatives.count; ++j) {
        const std::vector<double> dir = gaussian_stream(
            cfg.seed ^ 0xb07da72ull, b_index * cfg.alternatives.count + j, cfg.theta0.size());
        double norm_sq = 0.0;
        for (double d : dir) norm_sq += d * d;
        std::vector<double> theta(cfg.theta0.size());
        for (std::size_t k = 0; k < theta.size(); ++k) {
            theta[k] = cfg.theta0[k] + dir[k] / std::sqrt(norm_sq) * radius;
        }
        alts.emplace_back(std::move(theta));
    }
    return alts;
}

std::vector<SignalSequence> adversary_alternatives(const ExperimentConfig& cfg) {
    const AlternativesSpec& adv = cfg.alternatives;
    std::vector<SignalSequence> alts;
    const SignalSequence pullback =
        draw_adversarial_signal(cfg.theta0, cfg.dict[adv.b_true], cfg.dict[adv.b_bar],
                                cfg.epsilon, cfg.alpha, cfg.beta, 0.0, cfg.seed, 0)
            .theta;
    for (std::size_t j = 0; j < adv.draws; ++j) {
        AdversarialDraw d =
            draw_adversarial_signal(cfg.theta0, cfg.dict[adv.b_true], cfg.dict[adv.b_bar],
                                    cfg.epsilon, cfg.alpha, cfg.beta, adv.tau, cfg.seed, j);
        if (adv.scale != 1.0) {
            std::vector<double> theta(d.theta.size());
            for (std::size_t k = 0; k < theta.size(); ++k) {
                theta[k] = pullback[k] + adv.scale * (d.theta[k] - pullback[k]);
            }
            alts.emplace_back(std::move(theta));
        } else {
            alts.push_back(d.theta);
        }
    }
    return alts;
}

void require_adversary_params(const ExperimentConfig& cfg) {
    if (cfg.alternatives.kind != AlternativesSpec::Kind::adversary) {
        throw ConfigError("/alternatives/adversary: required for this command");
    }
    if (!cfg.alternatives.has_tau) {
        throw ConfigError("/alternatives/adversary/tau: required parameter is missing");
    }
    if (!cfg.alternatives.has_gamma) {
        throw ConfigError("/alternatives/adversary/gamma: required parameter is missing");
    }
}

int cmd_constants(double alpha, double beta, const std::string& parse_mode) {
    const C1Parse parse =
        parse_mode == "alternate" ? C1Parse::alternate : C1Parse::verbatim;
    const ConstantsBundle c = compute_constants(alpha, beta, parse);
    std::cout << "alpha = " << format_double(c.alpha) << "\n";
    std::cout << "beta = " << format_double(c.beta) << "\n";
    std::cout << "x_alpha = " << format_double(c.x_alpha) << "\n";
    std::cout << "x_beta = " << format_double(c.x_beta) << "\n";
    std::cout << "c_alpha = " << format_double(c.c_alpha) << "\n";
    std::cout << "C1 = " << format_double(c.C1) << "\n";
    std::cout << "C_ab = " << format_double(c.C_ab) << "\n";
    std::cout << "c1 = " << (c.c1 ? format_double(*c.c1) : std::string("absent")) << "\n";
    std::cout << "delta = " << format_double(c.delta) << "\n";
    std::cout << "C2 = " << format_double(c.C2) << "\n";
    return kExitOk;
}

int cmd_classify(const CommonOpts& opts) {
    const ExperimentConfig cfg = load_with_overrides(opts);
    const RegimeReport report = homogeneity_report(cfg.dict, cfg.theta0, cfg.epsilon);

    std::cout << "dictionary size: " << cfg.dict.size() << ", m = " << cfg.dict.common_length()
              << ", epsilon = " << format_double(cfg.epsilon) << "\n";
    std::cout << "homogeneous: " << (report.homogeneous ? "true" : "false") << "\n";
    std::cout << "homogeneous (at least one order per pair): "
              << (report.homogeneous_unordered ? "true" : "false") << "\n";
    if (cfg.dict.size() > 1) {
        std::cout << "worst_pair: (" << report.worst_pair.first << ", "
                  << report.worst_pair.second
                  << ") ratio = " << format_double(report.worst_ratio) << "\n";
    }
    const auto partitions = find_homogeneous_partitions(cfg.dict, cfg.theta0, cfg.epsilon);
    std::cout << "homogeneous subsets: " << partitions.size() << "\n";
    for (const Partition& p : partitions) {
        std::cout << "  H={";
        for (std::size_t i = 0; i < p.homogeneous.size(); ++i) {
            if (i) std::cout << ' ';
            std::cout << p.homogeneous[i];
        }
        std::cout << "} complement={";
        for (std::size_t i = 0; i < p.complement.size(); ++i) {
            if (i) std::cout << ' ';
            std::cout << p.complement[i];
        }
        std::cout << "}\n";
    }

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < cfg.dict.size(); ++i) {
        for (std::size_t j = 0; j < cfg.dict.size(); ++j) {
            if (i == j) continue;
            rows.push_back({std::to_string(i), std::to_string(j),
                            format_double(report.pairwise_divergence[i][j]),
                            format_double(report.pairwise_ratio[i][j]),
                            report.pairwise_ratio[i][j] <= 1.0 ? "true" : "false"});
        }
    }
    const std::string csv =
        render_table_csv({"b1_index", "b2_index", "divergence", "ratio", "condition_holds"}, rows,
                         cfg.config_hash, cfg.seed);
    const auto path = resolve_output(opts, cfg.output.csv, "classify.csv");
    if (path) {
        write_or_print(path, csv);
    }
    return kExitOk;
}

int cmd_partition(const CommonOpts& opts) {
    const ExperimentConfig cfg = load_with_overrides(opts);
    const auto partitions = find_homogeneous_partitions(cfg.dict, cfg.theta0, cfg.epsilon);
    std::cout << "homogeneous subsets: " << partitions.size() << "\n";
    std::vector<std::vector<std::string>> rows;
    for (std::size_t idx = 0; idx < partitions.size(); ++idx) {
        const Partition& p = partitions[idx];
        std::string hom;
        std::string comp;
        for (std::size_t i : p.homogeneous) hom += (hom.empty() ? "" : " ") + std::to_string(i);
        for (std::size_t i : p.complement) comp += (comp.empty() ? "" : " ") + std::to_string(i);
        std::cout << "  H={" << hom << "} complement={" << comp << "}\n";
        rows.push_back({std::to_string(idx), hom, comp});
    }
    const std::string csv = render_table_csv({"rank", "homogeneous", "complement"}, rows,
                                             cfg.config_hash, cfg.seed);
    const auto path = resolve_output(opts, cfg.output.csv, "partition.csv");
    if (path) write_or_print(path, csv);
    return kExitOk;
}

int cmd_run(const CommonOpts& opts) {
    const ExperimentConfig cfg = load_with_overrides(opts);
    const std::string regime = regime_of(cfg);
    ExperimentPlan plan = plan_from_config(cfg);
    GateState gates;
    std::vector<ReportRow> rows;
    std::uint64_t run_id = 0;

    // Null-hypothesis (Type I) rows, one per simulated true spectrum.
    const ErrorEstimate type1 = estimate_type1(plan);
    for (const CellEstimate& cell : type1.cells) {
        ReportRow row = base_row(cfg, regime);
        row.run_id = run_id++;
        row.b_true_index = static_cast<std::int64_t>(cell.b_index);
        row.rejections = cell.events;
        row.rate = cell.rate;
        row.ci_low = cell.ci.low;
        row.ci_high = cell.ci.high;
        row.notes = "type1" + gates.annotate(opts.gate, cfg.gate.type1_bound, cell);
        rows.push_back(std::move(row));
    }

    // Alternative (Type II) rows.
    const auto emit_type2 = [&](const ErrorEstimate& est, const std::string& label) {
        for (const CellEstimate& cell : est.cells) {
            ReportRow row = base_row(cfg, regime);
            row.run_id = run_id++;
            row.b_true_index = static_cast<std::int64_t>(cell.b_index);
            row.rejections = cell.events;
            row.rate = cell.rate;
            row.ci_low = cell.ci.low;
            row.ci_high = cell.ci.high;
            row.notes = label + " alt=" + std::to_string(cell.alt_index) +
                        gates.annotate(opts.gate, cfg.gate.type2_bound, cell);
            rows.push_back(std::move(row));
        }
    };

    // Materialize the alternatives into one or more Type II jobs.
    std::vector<ExperimentPlan> type2_jobs;
    std::string type2_label = "type2";
    switch (cfg.alternatives.kind) {
        case AlternativesSpec::Kind::none:
            break;
        case AlternativesSpec::Kind::explicit_list: {
            ExperimentPlan job = plan;
            job.alternatives = cfg.alternatives.explicit_list;
            type2_jobs.push_back(std::move(job));
            break;
        }
        case AlternativesSpec::Kind::boundary: {
            const double constant = cfg.alternatives.constant
                                        ? *cfg.alternatives.constant
                                        : compute_constants(cfg.alpha, cfg.beta).C1;
            std::vector<std::size_t> targets = cfg.true_indices;
            if (targets.empty()) {
                targets.resize(cfg.dict.size());
                for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = i;
            }
            for (std::size_t b_index : targets) {
                ExperimentPlan job = plan;
                job.alternatives = boundary_alternatives(cfg, b_index, constant);
                job.true_indices = {b_index};
                type2_jobs.push_back(std::move(job));
            }
            break;
        }
        case AlternativesSpec::Kind::adversary: {
            require_adversary_params(cfg);
            ExperimentPlan job = plan;
            job.alternatives = adversary_alternatives(cfg);
            job.true_indices = {cfg.alternatives.b_true};
            type2_jobs.push_back(std::move(job));
            type2_label = "type2-adversary";
            break;
        }
    }
    for (const ExperimentPlan& job : type2_jobs) {
        emit_type2(estimate_type2(job), type2_label);
    }

    // Power curve rows; the plotted series tracks the worst acceptance across
    // jobs at each scale.
    std::map<std::string, std::vector<std::pair<double, double>>> curves;
    if (!cfg.scaling_grid.empty()) {
        if (type2_jobs.empty()) {
            throw ConfigError("/scaling_grid: needs alternatives to scale");
        }
        auto& curve = curves[test_kind_name(cfg.test_kind)];
        curve.assign(cfg.scaling_grid.size(), {0.0, 0.0});
        for (std::size_t gi = 0; gi < cfg.scaling_grid.size(); ++gi) {
            curve[gi].first = cfg.scaling_grid[gi];
        }
        for (const ExperimentPlan& job : type2_jobs) {
            const auto table = power_curve(job, cfg.scaling_grid);
            for (std::size_t gi = 0; gi < table.size(); ++gi) {
                const auto& [scale, est] = table[gi];
                curve[gi].second = std::max(curve[gi].second, est.rate);
                for (const CellEstimate& cell : est.cells) {
                    ReportRow row = base_row(cfg, regime);
                    row.run_id = run_id++;
                    row.b_true_index = static_cast<std::int64_t>(cell.b_index);
                    row.rejections = cell.events;
                    row.rate = cell.rate;
                    row.ci_low = cell.ci.low;
                    row.ci_high = cell.ci.high;
                    row.notes = "power scale=" + format_double(scale) +
                                " alt=" + std::to_string(cell.alt_index);
                    rows.push_back(std::move(row));
                }
            }
        }
    }

    const std::string csv = render_csv(rows, cfg.config_hash, cfg.seed);
    const auto csv_path = resolve_output(opts, cfg.output.csv, "run.csv");
    write_or_print(csv_path, csv);
    if (csv_path) {
        for (const ReportRow& row : rows) {
            std::cout << row.notes << " test=" << row.test_name << " b=" << row.b_true_index
                      << " rate=" << format_double(row.rate) << " ci=["
                      << format_double(row.ci_low) << ", " << format_double(row.ci_high) << "]\n";
        }
        if (!type2_jobs.empty()) {
            std::cout << "type2 rates are an empirical sup over the alternative grid (they lower-"
                         "bound the true sup)\n";
        }
    }

    if (!curves.empty() && (opts.svg || cfg.output.svg)) {
        const std::string svg = render_power_svg("acceptance vs scale", curves);
        const auto svg_path = resolve_output(opts, cfg.output.svg, "power.svg");
        if (svg_path) {
            write_or_print(svg_path, svg);
        } else {
            std::cout << svg;
        }
    }

    return gates.any_failed ? kExitGateFailure : kExitOk;
}

int cmd_adversary(const CommonOpts& opts) {
    const ExperimentConfig cfg = load_with_overrides(opts);
    require_adversary_params(cfg);
    const AlternativesSpec& adv = cfg.alternatives;
    const OperatorSpectrum& b_true = cfg.dict[adv.b_true];
    const OperatorSpectrum& b_bar = cfg.dict[adv.b_bar];

    const double rho_true = separation_radius(b_true, cfg.epsilon);
    const double c2_observed =
        divergence(cfg.theta0, b_true, b_bar) / (rho_true * rho_true);
    const ConstantsBundle constants = compute_constants(cfg.alpha, cfg.beta);
    const double c2_radius =
        adv.tau * adv.tau * std::sqrt(std::log(constants.C_ab));
    const FeasibilityCertificate cert =
        lower_bound_feasibility(c2_observed, cfg.alpha, cfg.beta, adv.tau, adv.gamma);

    const double closed =
        likelihood_ratio_second_moment(cfg.theta0, b_bar, cfg.epsilon, cfg.alpha, cfg.beta,
                                       adv.tau);
    const MomentEstimate mc = likelihood_ratio_second_moment_mc(
        cfg.theta0, b_true, b_bar, cfg.epsilon, cfg.alpha, cfg.beta, adv.tau, cfg.replications,
        cfg.seed ^ 0xadd5ull);

    // Per-draw membership and test outcomes on one simulated observation each.
    std::vector<std::vector<std::string>> rows;
    std::size_t in_both = 0;
    std::size_t delta1_rejects = 0;
    std::size_t delta2_rejects = 0;
    for (std::size_t j = 0; j < adv.draws; ++j) {
        const AdversarialDraw d =
            draw_adversarial_signal(cfg.theta0, b_true, b_bar, cfg.epsilon, cfg.alpha, cfg.beta,
                                    adv.tau, cfg.seed, j);
        // Membership at the construction radius, with a 1e-9 relative slack to
        // absorb roundoff at the exact boundary. A zero radius (tau = 0) makes
        // every signal a member.
        const SeparationQuery q1{d.theta, cfg.theta0, cfg.dict, adv.b_true, cfg.epsilon,
                                 constants.C1};
        const bool member1 = separated_from_null(q1);
        bool member2 = true;
        if (c2_radius > 0.0) {
            const SeparationQuery q2{d.theta, cfg.theta0, cfg.dict, adv.b_true, cfg.epsilon,
                                     c2_radius * (1.0 - 1e-9)};
            member2 = identifiable_against_others(q2);
        }
        in_both += (member1 && member2) ? 1 : 0;

        const Observation y =
            sample_observation(d.theta, b_true, {cfg.epsilon, cfg.seed ^ 0xd4a11ull}, j);
        const int delta1 =
            bonferroni_test(cfg.alpha, cfg.dict, cfg.theta0, cfg.epsilon, y).decision;
        const int delta2 = min_test(cfg.alpha, cfg.dict, cfg.theta0, cfg.epsilon, y).decision;
        delta1_rejects += delta1;
        delta2_rejects += delta2;
        rows.push_back({std::to_string(j), member1 ? "true" : "false",
                        member2 ? "true" : "false", std::to_string(delta1),
                        std::to_string(delta2)});
    }

    std::cout << "alpha = " << format_double(cfg.alpha) << ", beta = " << format_double(cfg.beta)
              << ", tau = " << format_double(adv.tau) << ", gamma = " << format_double(adv.gamma)
              << "\n";
    std::cout << "C2_observed = " << format_double(c2_observed) << "\n";
    std::cout << "c2_radius = " << format_double(c2_radius) << "\n";
    std::cout << "lr_second_moment_closed = " << format_double(closed) << "\n";
    std::cout << "lr_second_moment_mc = " << format_double(mc.estimate) << " (se "
              << format_double(mc.standard_error) << ", n " << mc.replications << ")\n";
    std::cout << "feasible = " << (cert.feasible ? "true" : "false")
              << " margin = " << format_double(cert.margin)
              << " lhs = " << format_double(cert.lhs)
              << " C1 = " << format_double(cert.c1_constant) << "\n";
    std::cout << "draws_in_theta1_and_theta2 = " << in_both << "/" << adv.draws << "\n";
    std::cout << "bonferroni_reject_rate_on_draws = " << delta1_rejects << "/" << adv.draws
              << "\n";
    std::cout << "min_reject_rate_on_draws = " << delta2_rejects << "/" << adv.draws
              << " (acceptances are Type II errors on the prior)\n";

    const std::string csv = render_table_csv(
        {"draw_id", "in_theta1_C1", "in_theta2_c2", "bonferroni_reject", "min_reject"}, rows,
        cfg.config_hash, cfg.seed);
    const auto path = resolve_output(opts, cfg.output.csv, "adversary.csv");
    if (path) write_or_print(path, csv);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dmt: goodness-of-fit testing with an unknown operator spectrum from a finite "
                 "dictionary"};
    app.require_subcommand(1);

    CommonOpts classify_opts;
    CLI::App* classify = app.add_subcommand("classify", "homogeneity diagnostics at the null");
    add_common_options(classify, classify_opts, false);

    CommonOpts partition_opts;
    CLI::App* partition =
        app.add_subcommand("partition", "enumerate homogeneous dictionary subsets");
    add_common_options(partition, partition_opts, false);

    CommonOpts run_opts;
    CLI::App* run = app.add_subcommand("run", "Monte Carlo Type I/II error estimation");
    add_common_options(run, run_opts, true);

    CommonOpts adversary_opts;
    CLI::App* adversary =
        app.add_subcommand("adversary", "lower-bound prior diagnostics and draws");
    add_common_options(adversary, adversary_opts, false);

    double alpha = 0.05;
    double beta = 0.05;
    std::string parse_mode = "verbatim";
    CLI::App* constants = app.add_subcommand("constants", "print the explicit level constants");
    constants->add_option("alpha", alpha, "Type I level in (0,1)")->required();
    constants->add_option("beta", beta, "Type II level in (0,1)")->required();
    constants->add_option("--parse", parse_mode, "C1 parse: verbatim|alternate")
        ->check(CLI::IsMember({"verbatim", "alternate"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (classify->parsed()) return cmd_classify(classify_opts);
        if (partition->parsed()) return cmd_partition(partition_opts);
        if (run->parsed()) return cmd_run(run_opts);
        if (adversary->parsed()) return cmd_adversary(adversary_opts);
        if (constants->parsed()) return cmd_constants(alpha, beta, parse_mode);
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResourceError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}
