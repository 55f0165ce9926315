#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace hl {

using json = nlohmann::json;

struct QuadConfig {
    double tol = 1e-10;
    int max_depth = 40;
    double tmax = 200.0;
};

struct SpecConfig {
    int N = 4096;
    double tol = 1e-10;
    double tmax = 200.0;
    std::vector<int> ladder{256, 1024, 4096};
    std::string grid = "graded";  // graded | uniform
};

// Every experiment parameter with its default. Empty lists mean "use the
// command's own default" (listed in the README).
struct RunConfig {
    std::string command;
    std::string action = "eval";  // potential: eval | table
    std::string potential;  // empty: leray, or v3 for rearrange
    std::string family = "moser";
    std::string gauge = "native";  // family gen: native | u | any Gauge::parse name
    std::string ratio = "thm11i";
    std::string variant = "thm11i";  // remainder-constant: thm11i | eqnchange1
    std::string ramp = "fourpiece";
    std::string pair = "origin";
    std::string field = "mode1";
    double mu = 0.0;
    double alpha = 12.566370614359172;
    double p = 2.0;
    double q = 4.0;
    double beta = 1.0;
    int K = 3;
    int n = 100;
    int n_max = 200;
    double kappa = 40.0;
    double t1 = 3.0;
    double tau0 = 0.0;
    double offset = 0.5;
    double t0 = 2.0;
    double r = 0.5;
    double r_min = 1e-6;
    double r_max = 0.99;
    int points = 50;
    std::vector<double> alphas, ps, kappas;
    std::vector<int> ns;
    std::uint64_t seed = 1;
    int count = 500;
    double ball = 1.0;  // random profiles stay inside B_ball
    int modes = 4;
    int samples = 2048;
    int nodes = 4096;
    bool full_power_quarter = false;
    int jobs = 1;
    std::string output;
    std::string format = "csv";
    QuadConfig quad;
    SpecConfig spec;

    json to_json() const;
    // overlays the keys present in j; unknown keys and wrong types throw ConfigError
    void merge(const json& j);
    static RunConfig from_json(const json& j);
    static RunConfig load(const std::string& path);
};

// One output row: (axis1, axis2, value, flag). Axes are preformatted text.
struct ResultRow {
    std::string axis1, axis2;
    double value = 0.0;
    std::string flag;
};

struct ResultDoc {
    std::string kind;  // e.g. sweep, scalar, table, ladder
    std::vector<ResultRow> rows;
    json summary = json::object();
};

// shortest decimal that round-trips
std::string fmt_num(double v);

std::string to_csv(const ResultDoc& doc);
// {"config", "result", "payload_hash", "timestamp"}; the hash covers config and
// result only
json to_json_doc(const ResultDoc& doc, const RunConfig& cfg, const std::string& timestamp = "");
ResultDoc result_from_json(const json& j);

// Output path: cfg.output if set, else $HLAB_OUT_DIR/<command>.<format> when the
// variable is set, else "" (stdout).
std::string resolve_output_path(const RunConfig& cfg);
// Writes CSV or JSON to path ("" or "-" = stdout). Throws IoError.
void emit(const ResultDoc& doc, const RunConfig& cfg, const std::string& path);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace hl
