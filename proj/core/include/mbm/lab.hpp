#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mbm/kernel.hpp"

namespace mbm {

enum class StudyKind { Un, Mc, VarRate, Bias, Local };

std::string to_string(StudyKind kind);
StudyKind study_from_string(const std::string& name);

struct ExperimentConfig {
    std::string hurst_spec;
    std::vector<int> n_list;
    int replicates = 0;
    std::uint64_t seed = 0;
    StudyKind study = StudyKind::Un;

    // study-specific options
    double t = 0.5;
    double alpha = 0.4;
    std::string filter = "a2";       // local study
    std::vector<double> h_list;      // var-rate study
    bool with_variance = false;      // un study
    int threads = 0;                 // 0 = MBM_THREADS or hardware default

    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;  // single-line canonical echo
    void validate() const;
};

struct UnStudyRow {
    MomentReport report;
    double abs_err;  // |u_ratio - 2^{-2 h_min}|
};

struct UnStudyResult {
    ExperimentConfig config;
    std::vector<UnStudyRow> rows;
    void write_csv(std::ostream& out) const;
    std::string summary_json_text() const;
};

UnStudyResult run_un_study(const ExperimentConfig& cfg);

struct EstimateReport {
    ExperimentConfig config;
    struct Row {
        int n;
        double mean_hmin;
        std::optional<double> sd;  // absent for a single replicate
        std::optional<double> se;
        double u_exact;
        double target;       // -ln(u_exact) / (2 ln 2)
        double h_min_truth;
    };
    struct Detail {
        int replicate;
        int n;
        double s_n;
        double hmin_raw;
        double hmin_clamped;
    };
    std::vector<Row> rows;
    std::vector<Detail> details;  // sorted by (n, replicate)
    void write_csv(std::ostream& out) const;         // summary rows
    void write_detail_csv(std::ostream& out) const;  // per-replicate table
    std::string summary_json_text() const;
};

EstimateReport run_mc_study(const ExperimentConfig& cfg);

struct BiasStudyResult {
    ExperimentConfig config;
    struct Row {
        int n;
        double err;  // |u_ratio - 2^{-2 h_min}|
    };
    std::vector<Row> rows;
    double beta;  // least-squares fit err ~ beta / ln n, through the origin
    double r2;
    void write_csv(std::ostream& out) const;
    std::string summary_json_text() const;
};

BiasStudyResult run_bias_study(const ExperimentConfig& cfg);

struct VarRateResult {
    ExperimentConfig config;
    struct Row {
        double H;
        double slope;                   // log qv_variance vs log n
        std::optional<double> expected_slope;  // absent for the H = 3/4 boundary
        bool flagged;
    };
    std::vector<Row> rows;
    void write_csv(std::ostream& out) const;
    std::string summary_json_text() const;
};

VarRateResult run_var_rate_study(const ExperimentConfig& cfg);

struct LocalStudyResult {
    ExperimentConfig config;
    struct Row {
        int replicate;
        double t;
        double alpha;
        int window_count;
        double h_hat;
        bool flagged;
    };
    std::vector<Row> rows;
    double mean_h_hat;
    std::optional<double> sd;
    void write_csv(std::ostream& out) const;
    std::string summary_json_text() const;
};

LocalStudyResult run_local_study(const ExperimentConfig& cfg);

}  // namespace mbm
