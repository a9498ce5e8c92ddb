#ifndef NEUTRAL_CLI_IO_HPP
#define NEUTRAL_CLI_IO_HPP

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "neutral/conductivity_disks.hpp"
#include "neutral/core_model.hpp"
#include "neutral/kelvin_bem.hpp"
#include "neutral/neutrality_lab.hpp"

namespace neutral {

inline constexpr const char* kToolVersion = "neutral-lab 1.0.0";

// ---------------------------------------------------------------------------
// Deterministic number formatting: shortest decimal that round-trips.
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return buf;
}

// ---------------------------------------------------------------------------
// Scenario document.
// ---------------------------------------------------------------------------

enum class PhaseKind { Elastic, Conductor };
enum class GeometryKind { Disks, Curves };

struct PhaseSpec {
    PhaseKind kind = PhaseKind::Elastic;
    double mu = 0.0, kappa = 0.0, sigma = 0.0;

    ElasticPhase elastic() const { return {mu, kappa}; }
    ConductorPhase conductor() const { return ConductorPhase(sigma); }
};

struct ScenarioFile {
    GeometryKind geometry_kind = GeometryKind::Disks;
    double r1 = 1.0, r2 = 2.0;
    Vec2 center{0.0, 0.0};
    std::vector<SmoothCurve::Term> inner_terms, outer_terms;

    PhaseSpec core, shell, matrix;

    std::string load_name = "bulk"; // "bulk" | "shear" | "matrix"
    Mat2 load_A = Mat2::Identity();

    int order = 8;
    int nodes = 256;
    double radius_a = 0.0, radius_b = 0.0; // filled from geometry when absent
    double tolerance = 1e-10;
    unsigned seed = 0;

    bool elastic() const { return core.kind == PhaseKind::Elastic; }
    UniformLoad load() const { return UniformLoad(load_A); }
    /// Outer extent of the inclusion (r2 for disks, max sampled radius for curves).
    double outer_extent() const {
        if (geometry_kind == GeometryKind::Disks) return r2;
        SmoothCurve c(outer_terms);
        double m = 0.0;
        for (int i = 0; i < 128; ++i) m = std::max(m, std::abs(c.point(2.0 * M_PI * i / 128)));
        return m;
    }
    SmoothCurve inner_curve() const {
        return geometry_kind == GeometryKind::Disks ? SmoothCurve::circle(r1, center)
                                                    : SmoothCurve(inner_terms);
    }
    SmoothCurve outer_curve() const {
        return geometry_kind == GeometryKind::Disks ? SmoothCurve::circle(r2)
                                                    : SmoothCurve(outer_terms);
    }
};

namespace detail {

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else
            ++col;
    }
    return {line, col};
}

inline PhaseSpec parse_phase(const nlohmann::json& j, const std::string& path,
                             std::vector<std::string>& violations) {
    PhaseSpec p;
    if (!j.is_object()) {
        violations.push_back(path + ": must be an object");
        return p;
    }
    bool has_sigma = j.contains("sigma"), has_elastic = j.contains("mu") || j.contains("kappa");
    if (has_sigma == has_elastic) {
        violations.push_back(path + ": needs either {mu, kappa} or {sigma}");
        return p;
    }
    if (has_sigma) {
        p.kind = PhaseKind::Conductor;
        p.sigma = j.value("sigma", 0.0);
        if (!(p.sigma > 0.0)) violations.push_back(path + ".sigma: must be positive");
    } else {
        p.kind = PhaseKind::Elastic;
        p.mu = j.value("mu", 0.0);
        p.kappa = j.value("kappa", 0.0);
        if (!(p.mu > 0.0)) violations.push_back(path + ".mu: must be positive");
        if (!(p.kappa > 0.0)) violations.push_back(path + ".kappa: must be positive");
    }
    return p;
}

inline std::vector<SmoothCurve::Term> parse_terms(const nlohmann::json& j, const std::string& path,
                                                  std::vector<std::string>& violations) {
    std::vector<SmoothCurve::Term> terms;
    if (!j.is_array() || j.empty()) {
        violations.push_back(path + ": must be a nonempty array of [mode, re, im] triples");
        return terms;
    }
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer()) {
            violations.push_back(path + ": each entry must be [mode, re, im]");
            return {};
        }
        terms.push_back({e[0].get<int>(), cplx(e[1].get<double>(), e[2].get<double>())});
    }
    return terms;
}

} // namespace detail

/// Parse and validate a scenario document.  All violations are collected and
/// reported together; defaults are filled (order 8, nodes 256, measurement
/// radii twice and four times the outer extent).
inline ScenarioFile parse_scenario(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = detail::line_column(text, e.byte);
        throw ValidationError("ParseError", "line " + std::to_string(line) + ", column " +
                                                std::to_string(col) + ": " + e.what());
    }
    std::vector<std::string> v;
    ScenarioFile sc;
    if (!j.is_object()) throw ValidationError("InvalidScenario", "document must be an object");

    // geometry
    if (!j.contains("geometry") || !j["geometry"].is_object()) {
        v.push_back("geometry: required object");
    } else {
        const auto& g = j["geometry"];
        std::string kind = g.value("kind", "disks");
        if (kind == "disks") {
            sc.geometry_kind = GeometryKind::Disks;
            sc.r1 = g.value("r1", 0.0);
            sc.r2 = g.value("r2", 0.0);
            if (!(sc.r1 > 0.0)) v.push_back("geometry.r1: must be positive");
            if (!(sc.r1 < sc.r2)) v.push_back("geometry.r1: must be smaller than geometry.r2");
            if (g.contains("center")) {
                if (!g["center"].is_array() || g["center"].size() != 2)
                    v.push_back("geometry.center: must be [x, y]");
                else
                    sc.center = Vec2(g["center"][0].get<double>(), g["center"][1].get<double>());
            }
        } else if (kind == "curves") {
            sc.geometry_kind = GeometryKind::Curves;
            sc.inner_terms = detail::parse_terms(g.value("inner", nlohmann::json()), "geometry.inner", v);
            sc.outer_terms = detail::parse_terms(g.value("outer", nlohmann::json()), "geometry.outer", v);
            if (v.empty()) {
                try {
                    SmoothCurve a(sc.inner_terms), b(sc.outer_terms);
                } catch (const ValidationError& e) {
                    v.push_back(std::string("geometry: ") + e.what());
                }
            }
        } else {
            v.push_back("geometry.kind: must be \"disks\" or \"curves\"");
        }
    }

    // phases
    if (!j.contains("phases") || !j["phases"].is_object()) {
        v.push_back("phases: required object");
    } else {
        const auto& p = j["phases"];
        bool have_all = true;
        for (const char* name : {"core", "shell", "matrix"})
            if (!p.contains(name)) {
                v.push_back(std::string("phases.") + name + ": required");
                have_all = false;
            }
        if (have_all) {
            sc.core = detail::parse_phase(p["core"], "phases.core", v);
            sc.shell = detail::parse_phase(p["shell"], "phases.shell", v);
            sc.matrix = detail::parse_phase(p["matrix"], "phases.matrix", v);
            if (sc.core.kind != sc.shell.kind)
                v.push_back("phases.shell: kind differs from phases.core");
            if (sc.core.kind != sc.matrix.kind)
                v.push_back("phases.matrix: kind differs from phases.core");
        }
    }

    // load
    if (j.contains("load")) {
        const auto& l = j["load"];
        if (l.is_string()) {
            sc.load_name = l.get<std::string>();
            if (sc.load_name == "bulk")
                sc.load_A = Mat2::Identity();
            else if (sc.load_name == "shear")
                sc.load_A = UniformLoad::shear().A;
            else
                v.push_back("load: must be \"bulk\", \"shear\", or {\"A\": [[..],[..]]}");
        } else if (l.is_object() && l.contains("A") && l["A"].is_array() && l["A"].size() == 2 &&
                   l["A"][0].is_array() && l["A"][0].size() == 2 && l["A"][1].is_array() &&
                   l["A"][1].size() == 2) {
            sc.load_name = "matrix";
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k) sc.load_A(i, k) = l["A"][i][k].get<double>();
            if (std::abs(sc.load_A(0, 1) - sc.load_A(1, 0)) > 1e-14 * (1.0 + sc.load_A.norm()))
                v.push_back("load.A: must be symmetric");
        } else {
            v.push_back("load: must be \"bulk\", \"shear\", or {\"A\": [[..],[..]]}");
        }
    }

    // numerics
    if (j.contains("numerics")) {
        const auto& n = j["numerics"];
        sc.order = n.value("order", 8);
        sc.nodes = n.value("nodes", 256);
        sc.tolerance = n.value("tolerance", 1e-10);
        sc.seed = n.value("seed", 0u);
        if (sc.order < 3 || sc.order > 64) v.push_back("numerics.order: must be in [3, 64]");
        if (sc.nodes < 8 || sc.nodes % 2 != 0 || sc.nodes > 4096)
            v.push_back("numerics.nodes: must be even and in [8, 4096]");
        if (!(sc.tolerance > 0.0)) v.push_back("numerics.tolerance: must be positive");
        if (n.contains("radii")) {
            if (!n["radii"].is_array() || n["radii"].size() != 2)
                v.push_back("numerics.radii: must be [ra, rb]");
            else {
                sc.radius_a = n["radii"][0].get<double>();
                sc.radius_b = n["radii"][1].get<double>();
            }
        }
    }
    if (!v.empty()) {
        std::string msg = "scenario invalid:";
        for (const auto& s : v) msg += "\n  - " + s;
        throw ValidationError("InvalidScenario", msg);
    }
    double ext = sc.outer_extent();
    if (sc.radius_a == 0.0) sc.radius_a = 2.0 * ext;
    if (sc.radius_b == 0.0) sc.radius_b = 4.0 * ext;
    if (!(sc.radius_a > ext && sc.radius_b > ext && sc.radius_a != sc.radius_b))
        throw ValidationError("InvalidScenario",
                              "numerics.radii: must be two distinct radii beyond the inclusion");
    return sc;
}

/// Canonical serialization: fixed key order, defaults materialized, shortest
/// round-trip numbers.  parse(serialize(s)) == s.
inline std::string serialize_scenario(const ScenarioFile& sc) {
    std::string out = "{\"geometry\":{";
    if (sc.geometry_kind == GeometryKind::Disks) {
        out += "\"kind\":\"disks\",\"r1\":" + format_double(sc.r1) +
               ",\"r2\":" + format_double(sc.r2) + ",\"center\":[" +
               format_double(sc.center.x()) + "," + format_double(sc.center.y()) + "]";
    } else {
        auto terms = [&](const std::vector<SmoothCurve::Term>& ts) {
            std::string s = "[";
            for (std::size_t i = 0; i < ts.size(); ++i) {
                if (i) s += ",";
                s += "[" + std::to_string(ts[i].mode) + "," + format_double(ts[i].coeff.real()) +
                     "," + format_double(ts[i].coeff.imag()) + "]";
            }
            return s + "]";
        };
        out += "\"kind\":\"curves\",\"inner\":" + terms(sc.inner_terms) +
               ",\"outer\":" + terms(sc.outer_terms);
    }
    out += "},\"phases\":{";
    auto phase = [&](const char* name, const PhaseSpec& p) {
        std::string s = std::string("\"") + name + "\":{";
        if (p.kind == PhaseKind::Elastic)
            s += "\"mu\":" + format_double(p.mu) + ",\"kappa\":" + format_double(p.kappa);
        else
            s += "\"sigma\":" + format_double(p.sigma);
        return s + "}";
    };
    out += phase("core", sc.core) + "," + phase("shell", sc.shell) + "," +
           phase("matrix", sc.matrix) + "},\"load\":";
    if (sc.load_name == "matrix") {
        out += "{\"A\":[[" + format_double(sc.load_A(0, 0)) + "," + format_double(sc.load_A(0, 1)) +
               "],[" + format_double(sc.load_A(1, 0)) + "," + format_double(sc.load_A(1, 1)) +
               "]]}";
    } else {
        out += "\"" + sc.load_name + "\"";
    }
    out += ",\"numerics\":{\"order\":" + std::to_string(sc.order) +
           ",\"nodes\":" + std::to_string(sc.nodes) + ",\"radii\":[" + format_double(sc.radius_a) +
           "," + format_double(sc.radius_b) + "],\"tolerance\":" + format_double(sc.tolerance) +
           ",\"seed\":" + std::to_string(sc.seed) + "}}";
    return out;
}

inline std::string scenario_digest(const ScenarioFile& sc) {
    return fnv1a_hex(serialize_scenario(sc));
}

// ---------------------------------------------------------------------------
// Scenario -> solver inputs.
// ---------------------------------------------------------------------------

inline ConductivityConfig to_conductivity(const ScenarioFile& sc) {
    if (sc.elastic())
        throw ValidationError("InvalidScenario", "phases: conductor phases required");
    if (sc.geometry_kind != GeometryKind::Disks)
        throw ValidationError("InvalidScenario", "geometry: conductivity needs disks");
    return {CoatedDisks(sc.r1, sc.r2, sc.center), sc.core.conductor(), sc.shell.conductor(),
            sc.matrix.conductor()};
}

inline DiskTemplate to_disk_template(const ScenarioFile& sc) {
    if (!sc.elastic())
        throw ValidationError("InvalidScenario", "phases: elastic phases required");
    if (sc.geometry_kind != GeometryKind::Disks)
        throw ValidationError("InvalidScenario", "geometry: series solver needs disks");
    return {CoatedDisks(sc.r1, sc.r2, sc.center), sc.core.elastic(), sc.shell.elastic(),
            sc.matrix.elastic(), sc.order};
}

inline BemScenario to_bem_scenario(const ScenarioFile& sc) {
    if (!sc.elastic())
        throw ValidationError("InvalidScenario", "phases: elastic phases required");
    return {sc.inner_curve(), sc.outer_curve(), sc.core.elastic(), sc.shell.elastic(),
            sc.matrix.elastic(), sc.load(), sc.nodes};
}

// ---------------------------------------------------------------------------
// Result records (JSON lines) and CSV tables.
// ---------------------------------------------------------------------------

/// Append-only record of one command run.  The timestamp honors
/// SOURCE_DATE_EPOCH (else 0) so identical runs emit identical bytes.
class ResultRecord {
public:
    ResultRecord(std::string command, std::string digest)
        : command_(std::move(command)), digest_(std::move(digest)) {
        const char* e = std::getenv("SOURCE_DATE_EPOCH");
        timestamp_ = e ? e : "0";
    }

    void add(const std::string& key, double v) { body_ += ",\"" + key + "\":" + format_double(v); }
    void add(const std::string& key, const std::string& v) {
        body_ += ",\"" + key + "\":\"" + v + "\"";
    }
    void add(const std::string& key, bool v) {
        body_ += ",\"" + key + "\":" + (v ? "true" : "false");
    }
    void add_array(const std::string& key, const std::vector<double>& vs) {
        body_ += ",\"" + key + "\":[";
        for (std::size_t i = 0; i < vs.size(); ++i)
            body_ += (i ? "," : "") + format_double(vs[i]);
        body_ += "]";
    }

    std::string to_line() const {
        return "{\"command\":\"" + command_ + "\",\"scenario\":\"" + digest_ + "\",\"version\":\"" +
               std::string(kToolVersion) + "\",\"timestamp\":\"" + timestamp_ + "\"" + body_ + "}";
    }

private:
    std::string command_, digest_, timestamp_, body_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
        out += "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
            out += "\n";
        }
        return out;
    }
};

/// Write-temp-then-rename so readers never observe partial files.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("WriteFailed", "cannot open " + tmp.string());
        f << content;
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Frozen-floor fixtures.
// ---------------------------------------------------------------------------

struct Fixtures {
    std::string provenance;
    std::map<std::string, double> floors;
};

inline std::filesystem::path fixtures_path(const std::filesystem::path& fallback =
                                               "fixtures/floors.json") {
    const char* e = std::getenv("NEUTRAL_LAME_FIXTURES");
    return e ? std::filesystem::path(e) : fallback;
}

inline Fixtures load_fixtures(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("FixturesMissing", "cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("FixturesInvalid", path.string() + ": " + e.what());
    }
    Fixtures fx;
    fx.provenance = j.value("provenance", "");
    if (!j.contains("floors") || !j["floors"].is_object())
        throw ValidationError("FixturesInvalid", path.string() + ": missing floors object");
    for (const auto& [k, v] : j["floors"].items()) fx.floors[k] = v.get<double>();
    return fx;
}

} // namespace neutral

#endif
