#include "aoisim/config_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace aoisim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) parts.push_back(trim(item));
    return parts;
}

double parse_double(const ConfigFile& f, const std::string& key, const std::string& token) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size() || errno != 0 || !std::isfinite(v))
        throw ParseError(f.where(key) + ": '" + token + "' is not a number");
    return v;
}

std::int64_t parse_int(const ConfigFile& f, const std::string& key, const std::string& token) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (token.empty() || end != token.c_str() + token.size() || errno != 0)
        throw ParseError(f.where(key) + ": '" + token + "' is not an integer");
    return v;
}

std::uint64_t parse_uint(const ConfigFile& f, const std::string& key, const std::string& token) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
    if (token.empty() || end != token.c_str() + token.size() || errno != 0 ||
        token.front() == '-')
        throw ParseError(f.where(key) + ": '" + token + "' is not an unsigned integer");
    return v;
}

const std::string& require_key(const ConfigFile& f, const std::string& key) {
    auto it = f.values.find(key);
    if (it == f.values.end())
        throw ParseError("missing field '" + key + "'");
    return it->second;
}

std::vector<double> get_double_list(const ConfigFile& f, const std::string& key,
                                    bool allow_empty = false) {
    std::vector<double> out;
    for (const std::string& token : split_commas(require_key(f, key)))
        out.push_back(parse_double(f, key, token));
    if (out.empty() && !allow_empty) throw ParseError(f.where(key) + ": empty list");
    return out;
}

void reject_unknown(const ConfigFile& f, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : f.values) {
        (void)value;
        if (!allowed.count(key))
            throw ParseError(f.where(key) + ": unknown field '" + key + "'");
    }
}

const std::set<std::string> kNetworkKeys = {"n_streams", "channel_reliability", "arrival_rate",
                                            "weight", "horizon", "seed"};
const std::set<std::string> kSweepKeys = {"n_streams",   "channel_reliability",
                                          "weight",      "lambda_multiplier",
                                          "lambda_values", "disciplines",
                                          "policies",    "replications",
                                          "horizon",     "seed",
                                          "output"};

} // namespace

std::string ConfigFile::where(const std::string& key) const {
    auto it = lines.find(key);
    if (it == lines.end()) return "field '" + key + "'";
    return "line " + std::to_string(it->second) + ", field '" + key + "'";
}

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
    ConfigFile file;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (file.values.count(key))
            throw ParseError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                             "'");
        file.values[key] = value;
        file.lines[key] = lineno;
    }
    return file;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

NetworkConfig network_config_from(const ConfigFile& f) {
    reject_unknown(f, kNetworkKeys);
    NetworkConfig c;
    c.n_streams = static_cast<int>(parse_int(f, "n_streams", require_key(f, "n_streams")));
    c.channel_reliability = get_double_list(f, "channel_reliability");
    c.arrival_rate = get_double_list(f, "arrival_rate");
    c.weight = get_double_list(f, "weight");
    c.horizon = parse_int(f, "horizon", require_key(f, "horizon"));
    c.seed = f.has("seed") ? parse_uint(f, "seed", f.values.at("seed")) : 1;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid network config: ") + e.what());
    }
    return c;
}

NetworkConfig ExperimentSpec::config_at(double lambda) const {
    NetworkConfig c = base;
    c.arrival_rate.resize(lambda_multiplier.size());
    for (std::size_t i = 0; i < lambda_multiplier.size(); ++i)
        c.arrival_rate[i] = lambda_multiplier[i] * lambda;
    return c;
}

ExperimentSpec experiment_spec_from(const ConfigFile& f) {
    if (f.has("arrival_rate"))
        throw ParseError(f.where("arrival_rate") +
                         ": sweep specs use lambda_multiplier, not arrival_rate");
    reject_unknown(f, kSweepKeys);

    ExperimentSpec spec;
    spec.base.n_streams =
        static_cast<int>(parse_int(f, "n_streams", require_key(f, "n_streams")));
    spec.base.channel_reliability = get_double_list(f, "channel_reliability");
    spec.base.weight = get_double_list(f, "weight");
    spec.base.seed = f.has("seed") ? parse_uint(f, "seed", f.values.at("seed")) : 1;
    spec.lambda_multiplier = get_double_list(f, "lambda_multiplier");
    spec.lambda_values = get_double_list(f, "lambda_values", /*allow_empty=*/true);

    if (f.has("horizon")) spec.horizon = parse_int(f, "horizon", f.values.at("horizon"));
    if (f.has("replications"))
        spec.replications = static_cast<int>(parse_int(f, "replications", f.values.at("replications")));
    if (f.has("output")) spec.output = f.values.at("output");

    if (f.has("disciplines")) {
        for (const std::string& token : split_commas(f.values.at("disciplines"))) {
            const auto d = discipline_from_name(token);
            if (!d)
                throw ParseError(f.where("disciplines") + ": unknown discipline '" + token + "'");
            spec.disciplines.push_back(*d);
        }
    } else {
        spec.disciplines = {QueueDiscipline::SinglePacket, QueueDiscipline::NoQueue,
                            QueueDiscipline::Fifo};
    }
    if (f.has("policies")) {
        for (const std::string& token : split_commas(f.values.at("policies"))) {
            if (token != "optimal-randomized" && token != "max-weight" && token != "naive")
                throw ParseError(f.where("policies") + ": unknown policy '" + token + "'");
            spec.policies.push_back(token);
        }
    } else {
        spec.policies = {"optimal-randomized", "max-weight", "naive"};
    }

    const auto n = static_cast<std::size_t>(spec.base.n_streams);
    if (spec.lambda_multiplier.size() != n)
        throw ParseError(f.where("lambda_multiplier") + ": expected " + std::to_string(n) +
                         " entries");
    for (double lambda : spec.lambda_values) {
        if (!(lambda > 0.0 && lambda <= 1.0))
            throw ParseError(f.where("lambda_values") + ": value " + std::to_string(lambda) +
                             " outside (0,1]");
        for (std::size_t i = 0; i < n; ++i) {
            const double rate = spec.lambda_multiplier[i] * lambda;
            if (!(rate > 0.0 && rate <= 1.0))
                throw ParseError(f.where("lambda_multiplier") + ": stream " + std::to_string(i) +
                                 " rate " + std::to_string(rate) + " outside (0,1] at lambda " +
                                 std::to_string(lambda));
        }
    }

    // Validate the shared fields once with a placeholder rate vector.
    if (!spec.lambda_values.empty()) {
        NetworkConfig probe = spec.config_at(spec.lambda_values.front());
        probe.horizon = spec.horizon > 0 ? spec.horizon : 1;
        try {
            probe.validate();
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("invalid sweep spec: ") + e.what());
        }
    }
    return spec;
}

} // namespace aoisim
