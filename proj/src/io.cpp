#include "primespec/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "primespec/errors.hpp"
#include "primespec/version.hpp"

namespace primespec::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

void put_u64_le(std::ofstream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

std::uint64_t get_u64_le(std::ifstream& in, const std::string& path) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (in.gcount() != 8) throw ParseError("'" + path + "': truncated binary data");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

double parse_double(const std::string& tok, long line_no) {
    const std::string t = trim(tok);
    double v = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw ParseError("expected a number, got '" + t + "'", line_no);
    }
    return v;
}

std::uint64_t parse_u64(const std::string& tok, long line_no) {
    const std::string t = trim(tok);
    std::uint64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw ParseError("expected an unsigned integer, got '" + t + "'",
                         line_no);
    }
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_double_short(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void write_prime_text(const std::string& path, const PrimeSequence& seq,
                      const std::vector<std::string>& comments) {
    auto out = open_out(path);
    out << "# primespec " << kVersion << "\n";
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "# start_index=" << seq.start_index << "\n";
    for (std::uint64_t v : seq.values) out << v << "\n";
    if (!out.good()) throw IoError("write failure on '" + path + "'");
}

PrimeSequence read_prime_text(const std::string& path) {
    auto in = open_in(path);
    PrimeSequence seq;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const auto pos = t.find("start_index=");
            if (pos != std::string::npos) {
                seq.start_index = parse_u64(t.substr(pos + 12), line_no);
            }
            continue;
        }
        const std::uint64_t v = parse_u64(t, line_no);
        if (!seq.values.empty() && v <= seq.values.back()) {
            throw ParseError("'" + path + "': values not strictly increasing",
                             line_no);
        }
        seq.values.push_back(v);
    }
    return seq;
}

void write_prime_binary(const std::string& path, const PrimeSequence& seq) {
    auto out = open_out(path, true);
    put_u64_le(out, seq.start_index);
    put_u64_le(out, seq.values.size());
    for (std::uint64_t v : seq.values) put_u64_le(out, v);
    if (!out.good()) throw IoError("write failure on '" + path + "'");
}

PrimeSequence read_prime_binary(const std::string& path) {
    auto in = open_in(path, true);
    PrimeSequence seq;
    seq.start_index = get_u64_le(in, path);
    const std::uint64_t count = get_u64_le(in, path);
    seq.values.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        seq.values.push_back(get_u64_le(in, path));
    }
    return seq;
}

void write_unfolded(const std::string& path, const UnfoldedSequence& useq,
                    const std::vector<std::string>& comments) {
    auto out = open_out(path);
    out << "# primespec " << kVersion << "\n";
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "# method=" << to_string(useq.method)
        << " rescaled=" << (useq.rescaled ? "true" : "false")
        << " start_index=" << useq.source_start_index << "\n";
    for (double v : useq.values) out << format_double(v) << "\n";
    if (!out.good()) throw IoError("write failure on '" + path + "'");
}

UnfoldedSequence read_unfolded(const std::string& path) {
    auto in = open_in(path);
    UnfoldedSequence useq;
    bool header_seen = false;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            std::istringstream ss(t.substr(1));
            std::string tok;
            while (ss >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "method") {
                    const auto m = unfold_method_from_string(val);
                    if (!m) {
                        throw ParseError("unknown unfolding method '" + val + "'",
                                         line_no);
                    }
                    useq.method = *m;
                    header_seen = true;
                } else if (key == "rescaled") {
                    useq.rescaled = (val == "true" || val == "1");
                } else if (key == "start_index") {
                    useq.source_start_index = parse_u64(val, line_no);
                }
            }
            continue;
        }
        const double v = parse_double(t, line_no);
        if (!useq.values.empty() && !(v > useq.values.back())) {
            throw ParseError("'" + path + "': values not strictly increasing",
                             line_no);
        }
        useq.values.push_back(v);
    }
    if (!header_seen) {
        throw ParseError("'" + path + "': missing `# method=...` header line");
    }
    return useq;
}

void write_curve_csv(const std::string& path, const StatisticCurve& curve,
                     const std::vector<std::string>& comments) {
    auto out = open_out(path);
    out << "# primespec " << kVersion << "\n";
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "# statistic=" << to_string(curve.statistic)
        << " window_step=" << format_double_short(curve.window_step)
        << " n_windows_per_L=" << curve.n_windows_per_L << "\n";
    out << "L,value,stderr\n";
    for (const auto& pt : curve.points) {
        out << format_double(pt.L) << ',' << format_double(pt.value) << ','
            << format_double(pt.stderr_) << "\n";
    }
    if (!out.good()) throw IoError("write failure on '" + path + "'");
}

StatisticCurve read_curve_csv(const std::string& path) {
    auto in = open_in(path);
    StatisticCurve curve;
    std::string line;
    long line_no = 0;
    bool saw_columns = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            std::istringstream ss(t.substr(1));
            std::string tok;
            while (ss >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "statistic") {
                    if (val == "sigma2") curve.statistic = Statistic::SIGMA2;
                    else if (val == "gamma1") curve.statistic = Statistic::GAMMA1;
                    else if (val == "gamma2") curve.statistic = Statistic::GAMMA2;
                    else throw ParseError("unknown statistic '" + val + "'", line_no);
                } else if (key == "window_step") {
                    curve.window_step = parse_double(val, line_no);
                } else if (key == "n_windows_per_L") {
                    curve.n_windows_per_L = parse_u64(val, line_no);
                }
            }
            continue;
        }
        if (!saw_columns) {
            if (t != "L,value,stderr") {
                throw ParseError("'" + path + "': expected header `L,value,stderr`",
                                 line_no);
            }
            saw_columns = true;
            continue;
        }
        std::istringstream ss(t);
        std::string l_s, v_s, e_s;
        if (!std::getline(ss, l_s, ',') || !std::getline(ss, v_s, ',') ||
            !std::getline(ss, e_s)) {
            throw ParseError("'" + path + "': expected three comma-separated columns",
                             line_no);
        }
        CurvePoint pt;
        pt.L = parse_double(l_s, line_no);
        pt.value = parse_double(v_s, line_no);
        pt.stderr_ = parse_double(e_s, line_no);
        curve.points.push_back(pt);
    }
    if (!saw_columns) {
        throw ParseError("'" + path + "': no column header found");
    }
    return curve;
}

void write_histogram_csv(const std::string& path, const SpacingHistogram& hist,
                         const std::vector<std::string>& comments) {
    auto out = open_out(path);
    out << "# primespec " << kVersion << "\n";
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "# bin_width=" << format_double_short(hist.bin_width)
        << " s_max=" << format_double_short(hist.s_max)
        << " total_spacings=" << hist.total_spacings << "\n";
    out << "s_left,s_right,density\n";
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        out << format_double(hist.bin_left(i)) << ','
            << format_double(hist.bin_right(i)) << ','
            << format_double(hist.densities[i]) << "\n";
    }
    if (!out.good()) throw IoError("write failure on '" + path + "'");
}

std::vector<sieve::PiCheckpoint> read_checkpoints(const std::string& path) {
    auto in = open_in(path);
    std::vector<sieve::PiCheckpoint> points;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ss(t);
        std::string x_s, pi_s;
        if (!(ss >> x_s >> pi_s)) {
            throw ParseError("'" + path + "': expected `x<TAB>pi_x`", line_no);
        }
        sieve::PiCheckpoint cp;
        cp.x = parse_u64(x_s, line_no);
        cp.pi = parse_u64(pi_s, line_no);
        points.push_back(cp);
    }
    if (points.empty()) {
        throw ParseError("'" + path + "': no checkpoint entries");
    }
    return points;
}

std::string fit_to_json(const BRFit& fit) {
    nlohmann::json j;
    j["rho1"] = fit.rho1;
    j["rss"] = fit.rss;
    j["l_min"] = fit.fit_l_min;
    j["l_max"] = fit.fit_l_max;
    j["n_points"] = fit.n_points;
    j["weighted"] = fit.weighted;
    if (fit.boundary_warning) j["boundary_warning"] = true;
    return j.dump(2);
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    return parse_double(it->second, 0);
}

std::uint64_t Config::get_u64(const std::string& key,
                              std::uint64_t fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    return parse_u64(it->second, 0);
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

Config read_config(const std::string& path) {
    static const char* kAllowed[] = {
        "bin_width", "s_max",        "window_step", "l_min",
        "l_max",     "l_step",       "sat_points",  "sat_l_max",
        "segment_size", "threads",   "seed",        "gamma_reference",
    };
    auto in = open_in(path);
    Config config;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError("'" + path + "': expected `key = value`", line_no);
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        const bool known =
            std::any_of(std::begin(kAllowed), std::end(kAllowed),
                        [&](const char* k) { return key == k; });
        if (!known) {
            throw ParseError("'" + path + "': unknown config key '" + key + "'",
                             line_no);
        }
        config.values[key] = val;
    }
    return config;
}

} // namespace primespec::io
