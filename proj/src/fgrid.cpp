#include "hsvol/fgrid.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hsvol {

std::vector<double> mu_grid(std::size_t points)
{
    if (points < 2) throw std::invalid_argument("mu grid needs at least two points");
    std::vector<double> mu(points);
    const auto intervals = static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) mu[k] = static_cast<double>(k) / intervals;
    return mu;
}

double FGrid::f_at(std::size_t k) const
{
    if (n_points == 0) throw std::logic_error("FGrid has no samples");
    return measure_factor(kind) * static_cast<double>(n_sep.at(k)) / static_cast<double>(n_points);
}

std::vector<double> FGrid::f() const
{
    std::vector<double> out(n_sep.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = f_at(k);
    return out;
}

double FGrid::f_tot() const
{
    if (n_points == 0) throw std::logic_error("FGrid has no samples");
    return measure_factor(kind) * static_cast<double>(n_psd) / static_cast<double>(n_points);
}

std::size_t FGrid::index_of_mu(double mu_value) const
{
    if (mu.empty()) throw std::logic_error("FGrid is empty");
    std::size_t best = 0;
    for (std::size_t k = 1; k < mu.size(); ++k)
        if (std::abs(mu[k] - mu_value) < std::abs(mu[best] - mu_value)) best = k;
    return best;
}

void FGrid::check_invariants() const
{
    if (mu.size() != nu.size() || mu.size() != n_sep.size()) throw std::logic_error("FGrid column lengths differ");
    if (n_psd > n_points) throw std::logic_error("FGrid: n_psd exceeds N");
    for (auto n : n_sep)
        if (n > n_psd) throw std::logic_error("FGrid: n_sep exceeds n_psd");
}

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
T parse_number(const std::string& s, const char* what)
{
    T v{};
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) throw MalformedInput(std::string("malformed ") + what + ": '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const char* what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw MalformedInput("");
        return v;
    } catch (const std::exception&) {
        throw MalformedInput(std::string("malformed ") + what + ": '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& line, char sep, std::size_t max_fields)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (out.size() + 1 < max_fields) {
        const auto pos = line.find(sep, start);
        if (pos == std::string::npos) break;
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    out.push_back(line.substr(start));
    return out;
}

// Inverse of SequenceSpec::describe().
SequenceSpec parse_sequence(const std::string& text)
{
    SequenceSpec spec;
    unsigned long long base = 0, seed = 0, skip = 0, count = 0;
    int dim = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "faure(dim=%d,base=%llu,seed=%llu,skip=%llu,count=%llu%c", &dim, &base, &seed, &skip,
                    &count, &tail) != 6 ||
        tail != ')')
        throw MalformedInput("FGrid CSV: malformed sequence '" + text + "'");
    spec.dimension = dim;
    spec.base = static_cast<std::uint32_t>(base);
    spec.scramble_seed = seed;
    spec.skip = skip;
    spec.count = count;
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw MalformedInput(std::string("FGrid CSV: ") + e.what());
    }
    return spec;
}

}  // namespace

void write_fgrid_csv(const FGrid& g, std::ostream& os)
{
    g.check_invariants();
    os << "mu,nu,n_sep,F\n";
    for (std::size_t k = 0; k < g.mu.size(); ++k)
        os << fmt(g.mu[k]) << ',' << fmt(g.nu[k]) << ',' << g.n_sep[k] << ',' << fmt(g.f_at(k)) << '\n';
    os << "#N," << g.n_points << '\n';
    os << "#d," << g.dimension() << '\n';
    os << "#n_psd," << g.n_psd << '\n';
    os << "#F_tot," << fmt(g.f_tot()) << '\n';
    os << "#case," << to_string(g.kind) << '\n';
    os << "#sequence," << g.sequence.describe() << '\n';
    os << "#run_id," << g.run_id << '\n';
    std::istringstream cfg(g.config);
    for (std::string line; std::getline(cfg, line);)
        if (!line.empty()) os << "#config," << line << '\n';
}

void write_fgrid_csv(const FGrid& g, const std::string& path)
{
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_fgrid_csv(g, os);
    if (!os) throw IoError("write failed for " + path);
}

FGrid read_fgrid_csv(std::istream& is)
{
    FGrid g;
    std::string line;
    if (!std::getline(is, line) || line != "mu,nu,n_sep,F") throw MalformedInput("FGrid CSV: missing header row");
    bool have_n = false, have_psd = false, have_case = false;
    int d = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto kv = split(line.substr(1), ',', 2);
            if (kv.size() != 2) throw MalformedInput("FGrid CSV: malformed footer row '" + line + "'");
            const auto& key = kv[0];
            const auto& value = kv[1];
            if (key == "N") {
                g.n_points = parse_number<std::uint64_t>(value, "N");
                have_n = true;
            } else if (key == "n_psd") {
                g.n_psd = parse_number<std::uint64_t>(value, "n_psd");
                have_psd = true;
            } else if (key == "case") {
                try {
                    g.kind = parse_case(value);
                } catch (const std::invalid_argument& e) {
                    throw MalformedInput(e.what());
                }
                have_case = true;
            } else if (key == "d") {
                d = parse_number<int>(value, "d");
            } else if (key == "sequence") {
                g.sequence = parse_sequence(value);
            } else if (key == "run_id") {
                g.run_id = value;
            } else if (key == "config") {
                g.config += value + "\n";
            }
            continue;
        }
        const auto cols = split(line, ',', 5);
        if (cols.size() != 4) throw MalformedInput("FGrid CSV: expected 4 columns in '" + line + "'");
        g.mu.push_back(parse_double(cols[0], "mu"));
        g.nu.push_back(parse_double(cols[1], "nu"));
        g.n_sep.push_back(parse_number<std::uint64_t>(cols[2], "n_sep"));
        (void)parse_double(cols[3], "F");
    }
    if (!have_n || !have_psd || !have_case) throw MalformedInput("FGrid CSV: footer lacks N, n_psd or case");
    if (g.mu.empty()) throw MalformedInput("FGrid CSV: no data rows");
    if (g.n_points == 0) throw MalformedInput("FGrid CSV: N must be positive");
    if (d != 0 && d != g.dimension()) throw MalformedInput("FGrid CSV: d does not match the case");
    try {
        g.check_invariants();
    } catch (const std::logic_error& e) {
        throw MalformedInput(e.what());
    }
    return g;
}

FGrid read_fgrid_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return read_fgrid_csv(is);
}

std::string fgrid_summary_json(const FGrid& g, const std::string& config_json)
{
    nlohmann::ordered_json j;
    j["case"] = to_string(g.kind);
    j["N"] = g.n_points;
    j["d"] = g.dimension();
    j["n_psd"] = g.n_psd;
    j["F_tot"] = g.f_tot();
    j["grid_points"] = g.mu.size();
    j["sequence"] = g.sequence.describe();
    j["run_id"] = g.run_id;
    if (!config_json.empty()) {
        j["config"] = nlohmann::ordered_json::parse(config_json);
        return j.dump(2);
    }
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    std::istringstream is(g.config);
    for (std::string line; std::getline(is, line);) {
        const auto pos = line.find(" = ");
        if (pos != std::string::npos) cfg[line.substr(0, pos)] = line.substr(pos + 3);
    }
    j["config"] = cfg;
    return j.dump(2);
}

}  // namespace hsvol
