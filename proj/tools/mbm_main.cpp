#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mbm/detail/format.hpp"
#include "mbm/errors.hpp"
#include "mbm/estim.hpp"
#include "mbm/hurst.hpp"
#include "mbm/kernel.hpp"
#include "mbm/lab.hpp"
#include "mbm/synth.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_all(const CLI::App& cmd, const std::vector<std::string>& flags) {
    std::string missing;
    for (const auto& f : flags)
        if (cmd.count(f) == 0) missing += (missing.empty() ? "" : " ") + f;
    if (!missing.empty())
        throw UsageError("missing required flags: " + missing);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw mbm::IoError("cannot open output file: " + path);
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mbm::IoError("cannot open input file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Shared flag set for the lab study subcommands.
struct StudyFlags {
    std::string config_path, hurst, n_list, h_list, filter, out_dir = ".";
    int replicates = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double t = -1, alpha = -1;
    bool with_variance = false;
    int threads = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--hurst", hurst, "Hurst-function spec");
        cmd->add_option("--n-list", n_list, "comma-separated resolutions");
        cmd->add_option("--h-list", h_list, "comma-separated Hurst values (var-rate)");
        cmd->add_option("--replicates", replicates, "Monte Carlo replicates");
        cmd->add_option("--seed", seed, "master seed")->each([this](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--t", t, "local-estimate location");
        cmd->add_option("--alpha", alpha, "local-estimate bandwidth exponent");
        cmd->add_option("--filter", filter, "filter name: a1 or a2");
        cmd->add_flag("--with-variance", with_variance, "include O(n^2) variance columns");
        cmd->add_option("--threads", threads, "worker count (0 = auto)");
        cmd->add_option("--out-dir", out_dir, "output directory");
    }

    mbm::ExperimentConfig build(mbm::StudyKind study) const {
        mbm::ExperimentConfig cfg;
        if (!config_path.empty())
            cfg = mbm::ExperimentConfig::from_json_text(slurp(config_path));
        cfg.study = study;
        if (!hurst.empty()) cfg.hurst_spec = hurst;
        if (!n_list.empty()) cfg.n_list = parse_int_list(n_list);
        if (!h_list.empty()) cfg.h_list = parse_real_list(h_list);
        if (replicates >= 0) cfg.replicates = replicates;
        if (seed_set) cfg.seed = seed;
        if (t >= 0) cfg.t = t;
        if (alpha >= 0) cfg.alpha = alpha;
        if (!filter.empty()) cfg.filter = filter;
        if (with_variance) cfg.with_variance = true;
        if (threads > 0) cfg.threads = threads;
        return cfg;
    }
};

void write_outputs(const std::string& out_dir, const std::string& stem,
                   const std::function<void(std::ostream&)>& csv,
                   const std::string& summary_json) {
    std::filesystem::create_directories(out_dir);
    const std::string csv_path = out_dir + "/" + stem + ".csv";
    const std::string json_path = out_dir + "/" + stem + "_summary.json";
    {
        auto out = open_out(csv_path);
        csv(out);
    }
    {
        auto out = open_out(json_path);
        out << summary_json << "\n";
    }
    std::cout << csv_path << "\n" << json_path << "\n";
}

int dispatch(CLI::App& app) {
    // simulate
    if (auto* cmd = app.get_subcommand("simulate"); cmd->parsed()) {
        require_all(*cmd, {"--hurst", "--n", "--seed", "--out"});
        const auto f = mbm::HurstFunction::parse(cmd->get_option("--hurst")->as<std::string>());
        const int n = cmd->get_option("--n")->as<int>();
        const auto seed = cmd->get_option("--seed")->as<std::uint64_t>();
        const int replicate = cmd->get_option("--replicate")->as<int>();
        const auto out_path = cmd->get_option("--out")->as<std::string>();
        const mbm::PathSample path = mbm::sample_path(f, n, seed, replicate);
        auto out = open_out(out_path);
        mbm::write_path_csv(out, path);
        std::cout << out_path << "\n";
        return 0;
    }
    // estimate
    if (auto* cmd = app.get_subcommand("estimate"); cmd->parsed()) {
        require_all(*cmd, {"--in"});
        std::ifstream in(cmd->get_option("--in")->as<std::string>());
        if (!in) throw mbm::IoError("cannot open input file: " +
                                    cmd->get_option("--in")->as<std::string>());
        const mbm::PathSample path = mbm::read_path_csv(in);
        if (cmd->count("--local") > 0) {
            mbm::LocalEstimateConfig lcfg;
            lcfg.t = cmd->get_option("--t")->as<double>();
            lcfg.alpha = cmd->get_option("--alpha")->as<double>();
            lcfg.filter = mbm::FilterSpec::named(cmd->get_option("--filter")->as<std::string>());
            mbm::LocalEstimate est;
            try {
                est = mbm::local_estimate(path, lcfg);
            } catch (const mbm::EmptyWindow&) {
                throw mbm::EmptyWindow(
                    "empty window: no i in [0," + std::to_string(path.n - 2) +
                    "] with |i/" + std::to_string(path.n) + " - " +
                    mbm::detail::fmt17(lcfg.t) + "| <= n^-" + mbm::detail::fmt17(lcfg.alpha));
            }
            std::cout << "replicate,t,alpha,window_count,h_hat,flagged\n";
            std::cout << path.replicate << "," << mbm::detail::fmt17(lcfg.t) << ","
                      << mbm::detail::fmt17(lcfg.alpha) << "," << est.window_count << ","
                      << mbm::detail::fmt17(est.h_hat) << "," << (est.flagged ? 1 : 0)
                      << "\n";
        } else {
            const double s_n = mbm::ratio_stat(path);
            const mbm::HminEstimate est = mbm::hmin_estimate(path);
            std::cout << "replicate,n,s_n,hmin_raw,hmin_clamped\n";
            std::cout << path.replicate << "," << path.n << "," << mbm::detail::fmt17(s_n)
                      << "," << mbm::detail::fmt17(est.raw) << ","
                      << mbm::detail::fmt17(est.clamped) << "\n";
        }
        return 0;
    }
    // lambda-table
    if (auto* cmd = app.get_subcommand("lambda-table"); cmd->parsed()) {
        require_all(*cmd, {"--filter", "--grid", "--out"});
        const auto filter = mbm::FilterSpec::named(cmd->get_option("--filter")->as<std::string>());
        const auto grid = cmd->get_option("--grid")->as<std::string>();
        double start = 0, step = 0, end = 0;
        {
            std::stringstream ss(grid);
            std::string a, b, c;
            if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
                !std::getline(ss, c))
                throw UsageError("--grid expects START:STEP:END, got '" + grid + "'");
            start = std::stod(a);
            step = std::stod(b);
            end = std::stod(c);
        }
        if (!(start > 0.0 && end < 1.0 && step > 0.0 && start <= end))
            throw UsageError("--grid must satisfy 0 < START <= END < 1 with STEP > 0");
        auto out = open_out(cmd->get_option("--out")->as<std::string>());
        out << "H,rho,lambda\n";
        for (double H = start; H <= end + 1e-12; H += step) {
            out << mbm::detail::fmt17(H) << ","
                << mbm::detail::fmt17(mbm::rho_filter(H, filter, 1)) << ","
                << mbm::detail::fmt17(mbm::lambda_of_H(H, filter)) << "\n";
        }
        std::cout << cmd->get_option("--out")->as<std::string>() << "\n";
        return 0;
    }
    return -1;  // handled by study dispatch
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact mBm synthesis and global-regularity estimation"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "synthesize one path to CSV");
    std::string sim_hurst, sim_out;
    int sim_n = 0, sim_rep = 0;
    std::uint64_t sim_seed = 0;
    sim->add_option("--hurst", sim_hurst, "Hurst-function spec");
    sim->add_option("--n", sim_n, "grid resolution");
    sim->add_option("--seed", sim_seed, "master seed");
    sim->add_option("--replicate", sim_rep, "replicate index");
    sim->add_option("--out", sim_out, "output CSV path");

    auto* est = app.add_subcommand("estimate", "estimate h_min (or local h) from a path CSV");
    std::string est_in, est_filter = "a2";
    double est_t = 0.5, est_alpha = 0.4;
    bool est_local = false;
    est->add_option("--in", est_in, "input path CSV");
    est->add_flag("--local", est_local, "local ratio-type estimator");
    est->add_option("--t", est_t, "estimation location");
    est->add_option("--alpha", est_alpha, "bandwidth exponent");
    est->add_option("--filter", est_filter, "filter name: a1 or a2");

    auto* lam = app.add_subcommand("lambda-table", "tabulate H, rho, Lambda(H)");
    std::string lam_filter, lam_grid, lam_out;
    lam->add_option("--filter", lam_filter, "filter name: a1 or a2");
    lam->add_option("--grid", lam_grid, "START:STEP:END within (0,1)");
    lam->add_option("--out", lam_out, "output CSV path");

    StudyFlags un_flags, mc_flags, bias_flags, var_flags;
    auto* un = app.add_subcommand("un-study", "deterministic expectation-ratio study");
    un_flags.attach(un);
    auto* mc = app.add_subcommand("mc", "Monte Carlo h_min consistency study");
    mc_flags.attach(mc);
    auto* bias = app.add_subcommand("bias-study", "1/ln n bias fit for cusp families");
    bias_flags.attach(bias);
    auto* var = app.add_subcommand("var-rate-study", "variance-rate slopes for constant H");
    var_flags.attach(var);

    try {
        app.parse(argc, argv);

        const int direct = dispatch(app);
        if (direct >= 0) return direct;

        if (un->parsed()) {
            const auto result = mbm::run_un_study(un_flags.build(mbm::StudyKind::Un));
            write_outputs(un_flags.out_dir, "un_study",
                          [&](std::ostream& o) { result.write_csv(o); },
                          result.summary_json_text());
        } else if (mc->parsed()) {
            const auto result = mbm::run_mc_study(mc_flags.build(mbm::StudyKind::Mc));
            std::filesystem::create_directories(mc_flags.out_dir);
            const std::string detail_path = mc_flags.out_dir + "/mc_detail.csv";
            {
                auto out = open_out(detail_path);
                result.write_detail_csv(out);
            }
            write_outputs(mc_flags.out_dir, "mc_summary",
                          [&](std::ostream& o) { result.write_csv(o); },
                          result.summary_json_text());
            std::cout << detail_path << "\n";
        } else if (bias->parsed()) {
            const auto result = mbm::run_bias_study(bias_flags.build(mbm::StudyKind::Bias));
            write_outputs(bias_flags.out_dir, "bias_study",
                          [&](std::ostream& o) { result.write_csv(o); },
                          result.summary_json_text());
        } else if (var->parsed()) {
            const auto result =
                mbm::run_var_rate_study(var_flags.build(mbm::StudyKind::VarRate));
            write_outputs(var_flags.out_dir, "var_rate",
                          [&](std::ostream& o) { result.write_csv(o); },
                          result.summary_json_text());
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << "error_code=" << kExitUsage << "\n";
        return kExitUsage;
    } catch (const mbm::IoError& e) {
        std::cerr << "error_code=" << kExitIo << "\n" << e.what() << "\n";
        return kExitIo;
    } catch (const UsageError& e) {
        std::cerr << "error_code=" << kExitUsage << "\n" << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error_code=" << kExitUsage << "\n" << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error_code=" << kExitUsage << "\n" << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error_code=" << kExitNumerical << "\n" << e.what() << "\n";
        return kExitNumerical;
    }
}
