#include "hl/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "hl/errors.hpp"

namespace hl {

namespace {

template <class T>
T take(const json& v, const std::string& key) {
    try {
        if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) throw ConfigError(key + " must be a number");
        } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
            if (!v.is_number_integer()) throw ConfigError(key + " must be an integer");
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw ConfigError(key + " must be true or false");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ConfigError(key + " must be a string");
        } else {
            if (!v.is_array()) throw ConfigError(key + " must be a list");
        }
        return v.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

using Setter = std::function<void(RunConfig&, const json&)>;

#define HL_KEY(name) {#name, [](RunConfig& c, const json& v) { c.name = take<decltype(c.name)>(v, #name); }}

const std::map<std::string, Setter>& top_keys() {
    static const std::map<std::string, Setter> m{
        HL_KEY(command), HL_KEY(action), HL_KEY(potential), HL_KEY(family), HL_KEY(gauge),
        HL_KEY(ratio), HL_KEY(variant), HL_KEY(ramp), HL_KEY(pair), HL_KEY(field),
        HL_KEY(mu), HL_KEY(alpha), HL_KEY(p), HL_KEY(q), HL_KEY(beta),
        HL_KEY(K), HL_KEY(n), HL_KEY(n_max), HL_KEY(kappa), HL_KEY(t1),
        HL_KEY(tau0), HL_KEY(offset), HL_KEY(t0), HL_KEY(r), HL_KEY(r_min),
        HL_KEY(r_max), HL_KEY(points), HL_KEY(alphas), HL_KEY(ps), HL_KEY(kappas),
        HL_KEY(ns), HL_KEY(seed), HL_KEY(count), HL_KEY(ball), HL_KEY(modes),
        HL_KEY(samples), HL_KEY(nodes), HL_KEY(full_power_quarter), HL_KEY(jobs), HL_KEY(output),
        HL_KEY(format),
    };
    return m;
}

#undef HL_KEY

json num_or_text(double v) {
    if (std::isfinite(v)) return v;
    return fmt_num(v);
}

double num_from(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        if (s == "nan") return NAN;
    }
    throw ConfigError("not a number: " + v.dump());
}

}  // namespace

json RunConfig::to_json() const {
    json j;
    j["command"] = command;
    j["action"] = action;
    j["potential"] = potential;
    j["family"] = family;
    j["gauge"] = gauge;
    j["ratio"] = ratio;
    j["variant"] = variant;
    j["ramp"] = ramp;
    j["pair"] = pair;
    j["field"] = field;
    j["mu"] = mu;
    j["alpha"] = alpha;
    j["p"] = p;
    j["q"] = q;
    j["beta"] = beta;
    j["K"] = K;
    j["n"] = n;
    j["n_max"] = n_max;
    j["kappa"] = kappa;
    j["t1"] = t1;
    j["tau0"] = tau0;
    j["offset"] = offset;
    j["t0"] = t0;
    j["r"] = r;
    j["r_min"] = r_min;
    j["r_max"] = r_max;
    j["points"] = points;
    j["alphas"] = alphas;
    j["ps"] = ps;
    j["kappas"] = kappas;
    j["ns"] = ns;
    j["seed"] = seed;
    j["count"] = count;
    j["ball"] = ball;
    j["modes"] = modes;
    j["samples"] = samples;
    j["nodes"] = nodes;
    j["full_power_quarter"] = full_power_quarter;
    j["jobs"] = jobs;
    j["output"] = output;
    j["format"] = format;
    j["quad"] = {{"tol", quad.tol}, {"max_depth", quad.max_depth}, {"tmax", quad.tmax}};
    j["spec"] = {{"N", spec.N}, {"tol", spec.tol}, {"tmax", spec.tmax}, {"ladder", spec.ladder}, {"grid", spec.grid}};
    return j;
}

void RunConfig::merge(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    const auto& keys = top_keys();
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "quad") {
            if (!it->is_object()) throw ConfigError("quad must be an object");
            for (auto q2 = it->begin(); q2 != it->end(); ++q2) {
                if (q2.key() == "tol") quad.tol = take<double>(*q2, "quad.tol");
                else if (q2.key() == "max_depth") quad.max_depth = take<int>(*q2, "quad.max_depth");
                else if (q2.key() == "tmax") quad.tmax = take<double>(*q2, "quad.tmax");
                else throw ConfigError("unknown config key quad." + q2.key());
            }
        } else if (k == "spec") {
            if (!it->is_object()) throw ConfigError("spec must be an object");
            for (auto s2 = it->begin(); s2 != it->end(); ++s2) {
                if (s2.key() == "N") spec.N = take<int>(*s2, "spec.N");
                else if (s2.key() == "tol") spec.tol = take<double>(*s2, "spec.tol");
                else if (s2.key() == "tmax") spec.tmax = take<double>(*s2, "spec.tmax");
                else if (s2.key() == "ladder") spec.ladder = take<std::vector<int>>(*s2, "spec.ladder");
                else if (s2.key() == "grid") spec.grid = take<std::string>(*s2, "spec.grid");
                else throw ConfigError("unknown config key spec." + s2.key());
            }
        } else {
            auto f = keys.find(k);
            if (f == keys.end()) throw ConfigError("unknown config key " + k);
            f->second(*this, *it);
        }
    }
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    c.merge(j);
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return from_json(j);
}

std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const ResultDoc& doc) {
    std::ostringstream os;
    os << "axis1,axis2,value,flag\n";
    auto cell = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + "\"";
    };
    for (const auto& r : doc.rows)
        os << cell(r.axis1) << ',' << cell(r.axis2) << ',' << fmt_num(r.value) << ',' << cell(r.flag) << '\n';
    return os.str();
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

json to_json_doc(const ResultDoc& doc, const RunConfig& cfg, const std::string& timestamp) {
    json rows = json::array();
    for (const auto& r : doc.rows)
        rows.push_back({{"axis1", r.axis1}, {"axis2", r.axis2}, {"value", num_or_text(r.value)}, {"flag", r.flag}});
    json out;
    out["config"] = cfg.to_json();
    out["result"] = {{"kind", doc.kind}, {"rows", rows}, {"summary", doc.summary}};
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(out["config"].dump() + out["result"].dump())));
    out["payload_hash"] = hex;
    out["timestamp"] = timestamp;
    return out;
}

ResultDoc result_from_json(const json& j) {
    ResultDoc d;
    const json& r = j.contains("result") ? j.at("result") : j;
    d.kind = r.at("kind").get<std::string>();
    for (const auto& row : r.at("rows"))
        d.rows.push_back({row.at("axis1").get<std::string>(), row.at("axis2").get<std::string>(),
                          num_from(row.at("value")), row.at("flag").get<std::string>()});
    d.summary = r.value("summary", json::object());
    return d;
}

std::string resolve_output_path(const RunConfig& cfg) {
    if (!cfg.output.empty()) return cfg.output;
    const char* dir = std::getenv("HLAB_OUT_DIR");
    if (dir && *dir) return std::string(dir) + "/" + (cfg.command.empty() ? "run" : cfg.command) + "." + cfg.format;
    return "";
}

void emit(const ResultDoc& doc, const RunConfig& cfg, const std::string& path) {
    std::string text;
    if (cfg.format == "csv") {
        text = to_csv(doc);
    } else if (cfg.format == "json") {
        char ts[32] = "";
        std::time_t now = std::time(nullptr);
        std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        text = to_json_doc(doc, cfg, ts).dump(2) + "\n";
    } else {
        throw ConfigError("format must be csv or json, got '" + cfg.format + "'");
    }
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace hl
