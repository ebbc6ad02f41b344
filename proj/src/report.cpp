#include "gl3twist/report.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace gl3twist {

namespace {

using nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// JSON has no nan/inf; those are stored as null.
ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }
double number(const ordered_json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string summary_line(const CheckRecord& r) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " residual=%.3e tolerance=%.3e", r.residual, r.tolerance);
    std::string line = std::string(r.pass ? "PASS " : "FAIL ") + r.check + " [" + r.params + "]" + buf;
    if (r.fitted_constant) {
        std::snprintf(buf, sizeof buf, " fitted_constant=%.4g", *r.fitted_constant);
        line += buf;
    }
    return line;
}

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string Report::grid_hash() const {
    std::string key = subcommand;
    for (const auto& [k, v] : config) key += "\n" + k + "=" + v;
    return fnv1a64_hex(key);
}

void Report::write_csv(std::ostream& out) const {
    out << "check,params,value,reference,residual,tolerance,fitted_constant,pass\n";
    for (const auto& c : checks) {
        out << csv_field(c.check) << ',' << csv_field(c.params) << ',' << format_number(c.value) << ','
            << format_number(c.reference) << ',' << format_number(c.residual) << ',' << format_number(c.tolerance)
            << ',' << (c.fitted_constant ? format_number(*c.fitted_constant) : "") << ','
            << (c.pass ? "PASS" : "FAIL") << '\n';
    }
}

std::string Report::json_text() const {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["subcommand"] = subcommand;
    j["grid_hash"] = grid_hash();
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : config) params[k] = v;
    j["params"] = params;
    ordered_json residuals = ordered_json::array(), fitted = ordered_json::array();
    for (const auto& c : checks) {
        residuals.push_back({{"check", c.check},
                             {"params", c.params},
                             {"value", number(c.value)},
                             {"reference", number(c.reference)},
                             {"residual", number(c.residual)},
                             {"tolerance", number(c.tolerance)},
                             {"pass", c.pass}});
        if (c.fitted_constant)
            fitted.push_back({{"check", c.check}, {"params", c.params}, {"constant", number(*c.fitted_constant)}});
    }
    j["residuals"] = residuals;
    j["fitted_constants"] = fitted;
    ordered_json timings = ordered_json::object();
    for (const auto& [k, v] : this->timings) timings[k] = v;
    j["timings"] = timings;
    j["all_pass"] = all_pass();
    return j.dump(2) + "\n";
}

Report Report::parse_json(std::string_view text) {
    const auto j = ordered_json::parse(text);
    if (j.value("schema_version", 0) != kReportSchemaVersion)
        throw std::invalid_argument("report: unsupported schema_version");
    Report r;
    r.subcommand = j.at("subcommand").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) r.config.emplace_back(k, v.get<std::string>());
    for (const auto& c : j.at("residuals")) {
        CheckRecord rec;
        rec.check = c.at("check").get<std::string>();
        rec.params = c.at("params").get<std::string>();
        rec.value = number(c.at("value"));
        rec.reference = number(c.at("reference"));
        rec.residual = number(c.at("residual"));
        rec.tolerance = number(c.at("tolerance"));
        rec.pass = c.at("pass").get<bool>();
        r.checks.push_back(std::move(rec));
    }
    // Fitted constants follow the residual order of their checks.
    std::size_t next = 0;
    for (const auto& f : j.at("fitted_constants")) {
        while (next < r.checks.size() &&
               (r.checks[next].check != f.at("check").get<std::string>() ||
                r.checks[next].params != f.at("params").get<std::string>()))
            ++next;
        if (next == r.checks.size()) throw std::invalid_argument("report: fitted constant without a check");
        r.checks[next++].fitted_constant = number(f.at("constant"));
    }
    for (const auto& [k, v] : j.at("timings").items()) r.timings.emplace_back(k, v.get<double>());
    return r;
}

std::pair<std::filesystem::path, std::filesystem::path> Report::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    const auto csv = dir / (stem() + ".csv"), json = dir / (stem() + ".json");
    std::ofstream c(csv, std::ios::binary), js(json, std::ios::binary);
    if (!c || !js) throw std::runtime_error("report: cannot write into " + dir.string());
    write_csv(c);
    js << json_text();
    return {csv, json};
}

}  // namespace gl3twist
