#include "mbm/lab.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "mbm/detail/format.hpp"
#include "mbm/detail/parallel.hpp"
#include "mbm/estim.hpp"
#include "mbm/synth.hpp"

namespace mbm {

using detail::fmt17;
using nlohmann::json;

namespace {

struct LinearFit {
    double slope;
    double intercept;
};

LinearFit regress(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    return {slope, (sy - slope * sx) / n};
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["hurst"] = cfg.hurst_spec;
    j["n_list"] = cfg.n_list;
    j["replicates"] = cfg.replicates;
    j["seed"] = cfg.seed;
    j["study"] = to_string(cfg.study);
    json opt;
    opt["t"] = cfg.t;
    opt["alpha"] = cfg.alpha;
    opt["filter"] = cfg.filter;
    opt["h_list"] = cfg.h_list;
    opt["with_variance"] = cfg.with_variance;
    opt["threads"] = cfg.threads;
    j["options"] = opt;
    return j;
}

void write_config_echo(std::ostream& out, const ExperimentConfig& cfg) {
    out << "# config=" << cfg.to_json_text() << "\n";
}

}  // namespace

std::string to_string(StudyKind kind) {
    switch (kind) {
        case StudyKind::Un: return "un";
        case StudyKind::Mc: return "mc";
        case StudyKind::VarRate: return "var-rate";
        case StudyKind::Bias: return "bias";
        case StudyKind::Local: return "local";
    }
    throw std::logic_error("unreachable");
}

StudyKind study_from_string(const std::string& name) {
    if (name == "un") return StudyKind::Un;
    if (name == "mc") return StudyKind::Mc;
    if (name == "var-rate") return StudyKind::VarRate;
    if (name == "bias") return StudyKind::Bias;
    if (name == "local") return StudyKind::Local;
    throw std::invalid_argument("config error: unknown study '" + name + "'");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        cfg.hurst_spec = j.value("hurst", std::string{});
        if (j.contains("n_list")) cfg.n_list = j["n_list"].get<std::vector<int>>();
        cfg.replicates = j.value("replicates", 0);
        cfg.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("study")) cfg.study = study_from_string(j["study"].get<std::string>());
        if (j.contains("options")) {
            const json& o = j["options"];
            cfg.t = o.value("t", cfg.t);
            cfg.alpha = o.value("alpha", cfg.alpha);
            cfg.filter = o.value("filter", cfg.filter);
            if (o.contains("h_list")) cfg.h_list = o["h_list"].get<std::vector<double>>();
            cfg.with_variance = o.value("with_variance", cfg.with_variance);
            cfg.threads = o.value("threads", cfg.threads);
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config error: ") + e.what());
    }
    return cfg;
}

std::string ExperimentConfig::to_json_text() const {
    return config_to_json(*this).dump();
}

void ExperimentConfig::validate() const {
    if (n_list.empty() && study != StudyKind::VarRate)
        throw std::invalid_argument("config error: n_list must not be empty");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("config error: n_list must be strictly increasing");
    const bool stochastic = study == StudyKind::Mc || study == StudyKind::Local;
    if (stochastic && replicates < 1)
        throw std::invalid_argument("config error: replicates must be >= 1");
}

UnStudyResult run_un_study(const ExperimentConfig& cfg) {
    cfg.validate();
    const HurstFunction f = HurstFunction::parse(cfg.hurst_spec);
    UnStudyResult result;
    result.config = cfg;
    const double target = std::pow(2.0, -2.0 * f.h_min());
    for (int n : cfg.n_list) {
        UnStudyRow row;
        row.report = moment_report(f, n, cfg.with_variance);
        row.abs_err = std::abs(row.report.u_ratio - target);
        result.rows.push_back(row);
    }
    return result;
}

void UnStudyResult::write_csv(std::ostream& out) const {
    write_config_echo(out, config);
    out << MomentReport::csv_header() << ",abs_err\n";
    for (const auto& row : rows)
        out << row.report.csv_row() << "," << fmt17(row.abs_err) << "\n";
}

std::string UnStudyResult::summary_json_text() const {
    json j;
    j["study"] = to_string(config.study);
    j["config"] = config_to_json(config);
    json errs = json::array();
    for (const auto& row : rows) errs.push_back(row.abs_err);
    j["abs_err"] = errs;
    j["u_ratio_last"] = rows.empty() ? 0.0 : rows.back().report.u_ratio;
    return j.dump(2);
}

EstimateReport run_mc_study(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.replicates < 2)
        throw std::invalid_argument("config error: mc study needs replicates >= 2");
    const HurstFunction f = HurstFunction::parse(cfg.hurst_spec);
    EstimateReport report;
    report.config = cfg;
    const int workers = detail::worker_count(cfg.threads);
    for (int n : cfg.n_list) {
        PathSynthesizer synth(f, n);
        std::vector<EstimateReport::Detail> details(cfg.replicates);
        std::mutex err_mutex;
        std::string first_error;
        detail::run_blocks(cfg.replicates, workers, [&](int r) {
            try {
                const PathSample path = synth.sample(cfg.seed, r);
                const double s_n = ratio_stat(path);
                const HminEstimate est = hmin_estimate(path);
                details[r] = {r, n, s_n, est.raw, est.clamped};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error.empty())
                    first_error = "replicate " + std::to_string(r) + ": " + e.what();
            }
        });
        if (!first_error.empty())
            throw std::runtime_error("mc study aborted: " + first_error);

        // Aggregate in replicate order (already fixed by the indexed store).
        double mean = 0.0;
        for (const auto& d : details) mean += d.hmin_clamped;
        mean /= cfg.replicates;
        EstimateReport::Row row;
        row.n = n;
        row.mean_hmin = mean;
        if (cfg.replicates > 1) {
            double ss = 0.0;
            for (const auto& d : details) {
                const double dd = d.hmin_clamped - mean;
                ss += dd * dd;
            }
            const double sd = std::sqrt(ss / (cfg.replicates - 1));
            row.sd = sd;
            row.se = sd / std::sqrt(static_cast<double>(cfg.replicates));
        }
        row.u_exact = u_ratio(f, n);
        row.target = -std::log(row.u_exact) / (2.0 * std::log(2.0));
        row.h_min_truth = f.h_min();
        report.rows.push_back(row);
        report.details.insert(report.details.end(), details.begin(), details.end());
    }
    return report;
}

void EstimateReport::write_csv(std::ostream& out) const {
    write_config_echo(out, config);
    out << "n,mean_hmin,sd,se,u_exact,target,h_min_truth\n";
    for (const auto& r : rows) {
        out << r.n << "," << fmt17(r.mean_hmin) << ",";
        if (r.sd) out << fmt17(*r.sd);
        out << ",";
        if (r.se) out << fmt17(*r.se);
        out << "," << fmt17(r.u_exact) << "," << fmt17(r.target) << ","
            << fmt17(r.h_min_truth) << "\n";
    }
}

void EstimateReport::write_detail_csv(std::ostream& out) const {
    write_config_echo(out, config);
    out << "replicate,n,s_n,hmin_raw,hmin_clamped\n";
    for (const auto& d : details)
        out << d.replicate << "," << d.n << "," << fmt17(d.s_n) << ","
            << fmt17(d.hmin_raw) << "," << fmt17(d.hmin_clamped) << "\n";
}

std::string EstimateReport::summary_json_text() const {
    json j;
    j["study"] = to_string(config.study);
    j["config"] = config_to_json(config);
    json rws = json::array();
    for (const auto& r : rows) {
        json row;
        row["n"] = r.n;
        row["mean_hmin"] = r.mean_hmin;
        if (r.sd) row["sd"] = *r.sd;
        if (r.se) row["se"] = *r.se;
        row["u_exact"] = r.u_exact;
        row["target"] = r.target;
        row["h_min_truth"] = r.h_min_truth;
        rws.push_back(row);
    }
    j["rows"] = rws;
    return j.dump(2);
}

BiasStudyResult run_bias_study(const ExperimentConfig& cfg) {
    cfg.validate();
    const HurstFunction f = HurstFunction::parse(cfg.hurst_spec);
    if (f.family() != HurstFamily::Cusp)
        throw std::invalid_argument("config error: bias study requires a cusp family");
    if (cfg.n_list.size() < 5)
        throw std::invalid_argument("config error: bias study needs >= 5 resolutions");
    BiasStudyResult result;
    result.config = cfg;
    const double target = std::pow(2.0, -2.0 * f.h_min());
    std::vector<double> z, e;
    for (int n : cfg.n_list) {
        const double err = std::abs(u_ratio(f, n) - target);
        result.rows.push_back({n, err});
        z.push_back(1.0 / std::log(static_cast<double>(n)));
        e.push_back(err);
    }
    double szz = 0, sze = 0, emean = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        szz += z[i] * z[i];
        sze += z[i] * e[i];
        emean += e[i];
    }
    emean /= e.size();
    result.beta = sze / szz;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double r = e[i] - result.beta * z[i];
        ss_res += r * r;
        ss_tot += (e[i] - emean) * (e[i] - emean);
    }
    result.r2 = 1.0 - ss_res / ss_tot;
    return result;
}

void BiasStudyResult::write_csv(std::ostream& out) const {
    write_config_echo(out, config);
    out << "# beta=" << fmt17(beta) << "\n";
    out << "# r2=" << fmt17(r2) << "\n";
    out << "n,abs_err,fit\n";
    for (const auto& row : rows)
        out << row.n << "," << fmt17(row.err) << ","
            << fmt17(beta / std::log(static_cast<double>(row.n))) << "\n";
}

std::string BiasStudyResult::summary_json_text() const {
    json j;
    j["study"] = to_string(config.study);
    j["config"] = config_to_json(config);
    j["beta"] = beta;
    j["r2"] = r2;
    return j.dump(2);
}

VarRateResult run_var_rate_study(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> hs = cfg.h_list;
    if (hs.empty() && !cfg.hurst_spec.empty()) {
        const HurstFunction f = HurstFunction::parse(cfg.hurst_spec);
        if (f.family() != HurstFamily::Constant)
            throw std::invalid_argument("config error: var-rate study needs constant families");
        hs.push_back(f.h_min());
    }
    if (hs.empty())
        throw std::invalid_argument("config error: var-rate study needs h_list");
    if (cfg.n_list.size() < 2)
        throw std::invalid_argument("config error: var-rate study needs >= 2 resolutions");
    VarRateResult result;
    result.config = cfg;
    for (double H : hs) {
        const HurstFunction f = HurstFunction::constant(H);
        std::vector<double> lx, ly;
        for (int n : cfg.n_list) {
            lx.push_back(std::log(static_cast<double>(n)));
            ly.push_back(std::log(qv_variance(f, n, 1)));
        }
        VarRateResult::Row row;
        row.H = H;
        row.slope = regress(lx, ly).slope;
        row.flagged = std::abs(H - 0.75) < 1e-12;
        if (!row.flagged)
            row.expected_slope = (H < 0.75) ? -(4.0 * H - 1.0) : -2.0;
        result.rows.push_back(row);
    }
    return result;
}

void VarRateResult::write_csv(std::ostream& out) const {
    write_config_echo(out, config);
    out << "H,slope,expected_slope,flagged\n";
    for (const auto& row : rows) {
        out << fmt17(row.H) << "," << fmt17(row.slope) << ",";
        if (row.expected_slope) out << fmt17(*row.expected_slope);
        out << "," << (row.flagged ? 1 : 0) << "\n";
    }
}

std::string VarRateResult::summary_json_text() const {
    json j;
    j["study"] = to_string(config.study);
    j["config"] = config_to_json(config);
    json rws = json::array();
    for (const auto& row : rows) {
        json r;
        r["H"] = row.H;
        r["slope"] = row.slope;
        if (row.expected_slope) r["expected_slope"] = *row.expected_slope;
        r["flagged"] = row.flagged;
        rws.push_back(r);
    }
    j["rows"] = rws;
    return j.dump(2);
}

LocalStudyResult run_local_study(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.n_list.size() != 1)
        throw std::invalid_argument("config error: local study expects a single n");
    const HurstFunction f = HurstFunction::parse(cfg.hurst_spec);
    const int n = cfg.n_list.front();
    PathSynthesizer synth(f, n);
    const LambdaInverter inverter(FilterSpec::named(cfg.filter));
    LocalEstimateConfig lcfg{cfg.t, cfg.alpha, inverter.filter()};
    LocalStudyResult result;
    result.config = cfg;
    result.rows.resize(cfg.replicates);
    const int workers = detail::worker_count(cfg.threads);
    std::mutex err_mutex;
    std::string first_error;
    detail::run_blocks(cfg.replicates, workers, [&](int r) {
        try {
            const PathSample path = synth.sample(cfg.seed, r);
            const LocalEstimate est = local_estimate(path, lcfg, inverter);
            result.rows[r] = {r, cfg.t, cfg.alpha, est.window_count, est.h_hat, est.flagged};
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (first_error.empty())
                first_error = "replicate " + std::to_string(r) + ": " + e.what();
        }
    });
    if (!first_error.empty())
        throw std::runtime_error("local study aborted: " + first_error);
    double mean = 0.0;
    for (const auto& row : result.rows) mean += row.h_hat;
    mean /= cfg.replicates;
    result.mean_h_hat = mean;
    if (cfg.replicates > 1) {
        double ss = 0.0;
        for (const auto& row : result.rows) ss += (row.h_hat - mean) * (row.h_hat - mean);
        result.sd = std::sqrt(ss / (cfg.replicates - 1));
    }
    return result;
}

void LocalStudyResult::write_csv(std::ostream& out) const {
    write_config_echo(out, config);
    out << "replicate,t,alpha,window_count,h_hat,flagged\n";
    for (const auto& row : rows)
        out << row.replicate << "," << fmt17(row.t) << "," << fmt17(row.alpha) << ","
            << row.window_count << "," << fmt17(row.h_hat) << ","
            << (row.flagged ? 1 : 0) << "\n";
}

std::string LocalStudyResult::summary_json_text() const {
    json j;
    j["study"] = to_string(config.study);
    j["config"] = config_to_json(config);
    j["mean_h_hat"] = mean_h_hat;
    if (sd) j["sd"] = *sd;
    return j.dump(2);
}

}  // namespace mbm
