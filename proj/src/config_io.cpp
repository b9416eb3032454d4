#include "billiards/config_io.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "billiards/errors.hpp"

namespace billiards {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& s, int line) {
    const char* c = s.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end == c || *end != '\0')
        throw ConfigError(line, "not a number: '" + s + "'");
    return v;
}

int parse_int(const std::string& s, int line) {
    const char* c = s.c_str();
    char* end = nullptr;
    long v = std::strtol(c, &end, 10);
    if (end == c || *end != '\0')
        throw ConfigError(line, "not an integer: '" + s + "'");
    return static_cast<int>(v);
}

// "{a, b, c}" -> trimmed element strings; exact count enforced
std::vector<std::string> parse_braces(const std::string& s, std::size_t count,
                                      int line) {
    std::string t = trim(s);
    if (t.size() < 2 || t.front() != '{' || t.back() != '}')
        throw ConfigError(line, "expected {...} list, got '" + s + "'");
    std::vector<std::string> items;
    std::stringstream ss(t.substr(1, t.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(trim(item));
    if (items.size() != count)
        throw ConfigError(line, "expected " + std::to_string(count) +
                                    " comma-separated values, got " +
                                    std::to_string(items.size()));
    return items;
}

} // namespace

CurveConfig load_curve_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open '" + path + "'");

    CurveConfig cfg;
    bool haveN = false, haveA0 = false;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        std::size_t hash = s.find('#');
        if (hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;

        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));

        if (key == "n") {
            if (haveN) throw ConfigError(line, "duplicate key 'n'");
            cfg.n = parse_int(value, line);
            if (cfg.n < 2) throw ConfigError(line, "n must be >= 2");
            haveN = true;
        } else if (key == "a0") {
            if (haveA0) throw ConfigError(line, "duplicate key 'a0'");
            cfg.a0 = parse_double(value, line);
            if (!(cfg.a0 > 0.0)) throw ConfigError(line, "a0 must be > 0");
            haveA0 = true;
        } else if (key == "harmonic") {
            if (!haveN)
                throw ConfigError(line, "harmonic must come after n");
            auto items = parse_braces(value, 3, line);
            Harmonic h;
            h.k = parse_int(items[0], line);
            h.cosAmp = parse_double(items[1], line);
            h.sinAmp = parse_double(items[2], line);
            if (h.k <= 0 || h.k % cfg.n != 0)
                throw ConfigError(line, "harmonic not multiple of n (k=" +
                                            std::to_string(h.k) + ", n=" +
                                            std::to_string(cfg.n) + ")");
            cfg.harmonics.push_back(h);
        } else if (key == "bump") {
            if (cfg.bump) throw ConfigError(line, "duplicate key 'bump'");
            auto items = parse_braces(value, 5, line);
            BumpSpec b;
            b.center = parse_double(items[0], line);
            b.eps = parse_double(items[1], line);
            b.power = parse_int(items[2], line);
            b.delta1 = parse_double(items[3], line);
            b.delta2 = parse_double(items[4], line);
            if (b.power != 2 && b.power != 4)
                throw ConfigError(line, "bump power must be 2 or 4");
            if (!(b.delta1 > 0.0) || !(b.delta2 > b.delta1))
                throw ConfigError(line, "bump needs 0 < delta1 < delta2");
            cfg.bump = b;
        } else {
            throw ConfigError(line, "unknown key '" + key + "'");
        }
    }
    if (!haveN) throw ConfigError(line, "file ended without key 'n'");
    if (!haveA0) throw ConfigError(line, "file ended without key 'a0'");
    return cfg;
}

std::shared_ptr<const Curve> build_curve(const CurveConfig& config) {
    SupportFunction sf(config.n, config.a0, config.harmonics);
    if (config.bump)
        return std::make_shared<PerturbedCurve>(std::move(sf), *config.bump);
    return std::make_shared<SupportFunction>(std::move(sf));
}

} // namespace billiards
