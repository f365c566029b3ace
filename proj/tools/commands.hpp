#pragma once

#include <map>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace frames::cli {

// Collected output of one invocation; nothing touches the disk until write().
class Report {
public:
    // Records value relation limit; returns whether it holds.
    bool certify(const std::string& name, double value, const std::string& relation, double limit);
    json& results() { return results_; }
    void add_csv(const std::string& name, std::string content) { files_[name] = std::move(content); }

    bool passed() const;
    std::vector<std::string> failures() const;
    json to_json(const std::string& command, const RunConfig& cfg) const;
    // Writes report.json and the CSV files into dir.
    void write(const std::string& dir, const std::string& command, const RunConfig& cfg) const;

private:
    json certificates_ = json::array();
    json results_ = json::object();
    std::map<std::string, std::string> files_;
};

// Subcommand implementations; prefix namespaces certificate, result, and file names.
void filters_dump(const RunConfig& cfg, int levels, Report& rep, const std::string& prefix = "");
void lattice_build(const RunConfig& cfg, const ModelPtr& model, Report& rep, const std::string& prefix = "");
void cubature_solve(const RunConfig& cfg, const ModelPtr& model, Report& rep, const std::string& prefix = "");
void frame_build(const RunConfig& cfg, const ModelPtr& model, const std::string& kind, Report& rep, const std::string& prefix = "");
void frame_validate(const RunConfig& cfg, const ModelPtr& model, Report& rep, const std::string& prefix = "");
void kernel_decay(const RunConfig& cfg, const ModelPtr& model, Report& rep, const std::string& prefix = "");
void kernel_lpnorm(const RunConfig& cfg, const ModelPtr& model, Report& rep, const std::string& prefix = "");
void lp_check(const RunConfig& cfg, const ModelPtr& model, Report& rep, const std::string& prefix = "");
void besov_compute(const RunConfig& cfg, const ModelPtr& model, Report& rep, const std::string& prefix = "");
void besov_equiv(const RunConfig& cfg, const ModelPtr& model, Report& rep, const std::string& prefix = "");
void pw1d_irregular(const RunConfig& cfg, Report& rep, const std::string& prefix = "");
void pw1d_shannon(const RunConfig& cfg, Report& rep, const std::string& prefix = "");
void pw1d_cubature(const RunConfig& cfg, Report& rep, const std::string& prefix = "");
void suite_all(const RunConfig& cfg, Report& rep);

// Full command-line entry point: 0 all certificates pass, 1 a certificate failed, 2 usage or configuration error.
int run_command(int argc, const char* const* argv);

}  // namespace frames::cli
