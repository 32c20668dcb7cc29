// Command-line front end: generates prime sequences, unfolds them, computes
// spectral statistics and reference curves, fits the Berry-Robnik mixing
// parameter, and emits figure- and table-style reference artifacts as CSV
// and JSON files.
//
// Exit codes: 0 success, 1 user error, 2 numeric/integrity error,
// 3 partial success.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "primespec/ensembles.hpp"
#include "primespec/errors.hpp"
#include "primespec/fitting.hpp"
#include "primespec/io.hpp"
#include "primespec/rmt_mc.hpp"
#include "primespec/sieve.hpp"
#include "primespec/spectral.hpp"
#include "primespec/types.hpp"
#include "primespec/unfold.hpp"
#include "primespec/version.hpp"

namespace {

using namespace primespec;

struct Defaults {
    double bin_width = 0.1;
    double s_max = 4.0;
    double window_step = 0.25;
    double l_min = 0.1;
    double l_max = 5.0;
    double l_step = 0.1;
    int sat_points = 40;
    std::uint64_t segment_size = std::uint64_t{1} << 20;
    unsigned threads = 1;
    std::uint64_t seed = 20250901;
};

Defaults g_defaults;

void apply_config(const std::string& explicit_path) {
    std::string path = explicit_path;
    if (path.empty()) {
        if (const char* env = std::getenv("PRIMESPEC_CONFIG")) path = env;
    }
    if (path.empty()) return;
    const io::Config config = io::read_config(path);
    g_defaults.bin_width = config.get_double("bin_width", g_defaults.bin_width);
    g_defaults.s_max = config.get_double("s_max", g_defaults.s_max);
    g_defaults.window_step =
        config.get_double("window_step", g_defaults.window_step);
    g_defaults.l_min = config.get_double("l_min", g_defaults.l_min);
    g_defaults.l_max = config.get_double("l_max", g_defaults.l_max);
    g_defaults.l_step = config.get_double("l_step", g_defaults.l_step);
    g_defaults.sat_points = static_cast<int>(
        config.get_u64("sat_points", g_defaults.sat_points));
    g_defaults.segment_size =
        config.get_u64("segment_size", g_defaults.segment_size);
    g_defaults.threads = static_cast<unsigned>(
        config.get_u64("threads", g_defaults.threads));
    g_defaults.seed = config.get_u64("seed", g_defaults.seed);
    const std::string gamma = config.get_string("gamma_reference", "");
    if (!gamma.empty()) ensembles::set_gamma_reference_path(gamma);
}

sieve::SieveOptions sieve_options() {
    sieve::SieveOptions opts;
    opts.segment_size = g_defaults.segment_size;
    opts.threads = g_defaults.threads;
    return opts;
}

unfold::UnfoldOptions unfold_options() {
    unfold::UnfoldOptions opts;
    opts.threads = g_defaults.threads;
    return opts;
}

// ---- shared prime-sequence generation flags -------------------------------

struct GenerateSpec {
    std::uint64_t first_n = 0;
    std::uint64_t upto = 0;
    std::int64_t after_index = -1;
    std::uint64_t count = 0;
    bool alternate = false;
    std::string checkpoint_path;

    bool active() const { return first_n > 0 || upto > 0 || after_index >= 0; }

    // Canonical flag string used in provenance comments.
    std::string describe() const {
        std::string s;
        if (first_n > 0) s = "--first " + std::to_string(first_n);
        else if (upto > 0) s = "--upto " + std::to_string(upto);
        else s = "--after-index " + std::to_string(after_index) + " --count " +
                 std::to_string(count);
        if (alternate) s += " --alternate";
        return s;
    }

    PrimeSequence generate() const {
        const int chosen = (first_n > 0) + (upto > 0) + (after_index >= 0);
        if (chosen != 1) {
            throw DomainError(
                "choose exactly one of --first, --upto, --after-index");
        }
        PrimeSequence seq;
        if (first_n > 0) {
            seq = sieve::first_n_primes(first_n, sieve_options());
        } else if (upto > 0) {
            seq = sieve::primes_upto(upto, sieve_options());
        } else {
            if (count == 0) throw DomainError("--after-index requires --count");
            std::vector<sieve::PiCheckpoint> checkpoints;
            if (!checkpoint_path.empty()) {
                checkpoints = io::read_checkpoints(checkpoint_path);
                sieve::verify_checkpoints(checkpoints, sieve_options());
            }
            seq = sieve::primes_after_index(static_cast<std::uint64_t>(after_index),
                                            count, sieve_options(), checkpoints);
        }
        if (alternate) seq = sieve::alternate(seq);
        return seq;
    }
};

void add_generate_flags(CLI::App* cmd, GenerateSpec& spec) {
    cmd->add_option("--first", spec.first_n, "Generate the first N primes");
    cmd->add_option("--upto", spec.upto, "Generate all primes <= X");
    cmd->add_option("--after-index", spec.after_index,
                    "Generate primes after the k-th prime (needs --count)");
    cmd->add_option("--count", spec.count, "How many primes after --after-index");
    cmd->add_flag("--alternate", spec.alternate,
                  "Keep every other prime (positions 1, 3, 5, ...)");
    cmd->add_option("--checkpoint", spec.checkpoint_path,
                    "Verified pi(x) checkpoint file (x<TAB>pi_x lines)");
}

std::string source_comment(const UnfoldedSequence& useq) {
    return "source: method=" + to_string(useq.method) + " rescaled=" +
           (useq.rescaled ? std::string("true") : std::string("false")) +
           " start_index=" + std::to_string(useq.source_start_index) +
           " n=" + std::to_string(useq.size());
}

std::string fmt(double v) { return io::format_double_short(v); }

// ---- reference curve emission ---------------------------------------------

void write_pdf_csv(const std::string& path, const EnsembleKind& kind,
                   double s_max, double s_step,
                   const std::vector<std::string>& extra) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "# primespec " << kVersion << "\n";
    for (const auto& c : extra) out << "# " << c << "\n";
    std::string repro = "curves --kind " + to_string(kind.tag) +
                        " --statistic nnsd --smax " + fmt(s_max) + " --sstep " +
                        fmt(s_step);
    if (kind.tag == EnsembleTag::BERRY_ROBNIK) {
        repro += " --rho1 " + fmt(kind.rho1);
    }
    out << "# reproduce: " << repro << "\n";
    out << "s,density\n";
    const auto n = static_cast<std::size_t>(std::floor(s_max / s_step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) * s_step;
        out << fmt(s) << ',' << fmt(ensembles::spacing_pdf(kind, s)) << "\n";
    }
    if (!out.good()) throw IoError("write failure on '" + path + "'");
}

StatisticCurve theory_curve(const EnsembleKind& kind, Statistic stat,
                            double l_min, double l_max, double l_step) {
    StatisticCurve curve;
    curve.statistic = stat;
    curve.window_step = 0.0;
    if (stat == Statistic::SIGMA2) {
        for (double L : spectral::linear_grid(l_min, l_max, l_step)) {
            if (!(L > 0.0)) continue;
            CurvePoint pt;
            pt.L = L;
            pt.value = kind.tag == EnsembleTag::BERRY_ROBNIK
                           ? ensembles::sigma2_br(L, kind.rho1)
                           : ensembles::sigma2_theory(kind.tag, L);
            curve.points.push_back(pt);
        }
        return curve;
    }
    const int order = stat == Statistic::GAMMA1 ? 1 : 2;
    std::vector<double> grid;
    if (kind.tag == EnsembleTag::POISSON) {
        grid = spectral::linear_grid(std::max(l_min, l_step), l_max, l_step);
    } else {
        // Emit the Monte Carlo table's own nodes inside the window.
        const auto [table_lo, table_hi] = ensembles::gamma_reference_range();
        grid = spectral::linear_grid(std::max(l_min, table_lo),
                                     std::min(l_max, table_hi), 0.25);
    }
    for (double L : grid) {
        if (!(L > 0.0)) continue;
        const auto v = ensembles::gamma_theory(kind.tag, L, order);
        curve.points.push_back({L, v.value, v.stderr_});
    }
    return curve;
}

void write_theory_csv(const std::string& path, const EnsembleKind& kind,
                      Statistic stat, double l_min, double l_max, double l_step,
                      const std::vector<std::string>& extra) {
    auto curve = theory_curve(kind, stat, l_min, l_max, l_step);
    std::vector<std::string> comments = extra;
    std::string repro = "curves --kind " + to_string(kind.tag) +
                        " --statistic " + to_string(stat) + " --lmin " +
                        fmt(l_min) + " --lmax " + fmt(l_max) + " --lstep " +
                        fmt(l_step);
    if (kind.tag == EnsembleTag::BERRY_ROBNIK) {
        repro += " --rho1 " + fmt(kind.rho1);
    }
    comments.push_back("reproduce: " + repro);
    io::write_curve_csv(path, curve, comments);
}

// ---- stats emission (shared by `stats` and `figure`) -----------------------

void emit_nnsd(const std::string& path, const UnfoldedSequence& useq,
               double bin_width, double s_max) {
    const auto hist = spectral::nnsd(useq, bin_width, s_max);
    io::write_histogram_csv(
        path, hist,
        {"reproduce: stats --nnsd --bin-width " + fmt(bin_width) + " --smax " +
             fmt(s_max),
         source_comment(useq)});
}

void emit_count_curve(const std::string& path, const UnfoldedSequence& useq,
                      Statistic stat, double l_min, double l_max, double l_step,
                      double step) {
    const auto grid = spectral::linear_grid(l_min, l_max, l_step);
    StatisticCurve curve;
    const char* flag = "--numvar";
    switch (stat) {
    case Statistic::SIGMA2:
        curve = spectral::number_variance(useq, grid, step);
        flag = "--numvar";
        break;
    case Statistic::GAMMA1:
        curve = spectral::skewness(useq, grid, step);
        flag = "--skew";
        break;
    case Statistic::GAMMA2:
        curve = spectral::excess(useq, grid, step);
        flag = "--excess";
        break;
    }
    io::write_curve_csv(
        path, curve,
        {"reproduce: stats " + std::string(flag) + " --lmin " + fmt(l_min) +
             " --lmax " + fmt(l_max) + " --lstep " + fmt(l_step) + " --step " +
             fmt(step),
         source_comment(useq)});
}

void emit_saturation(const std::string& path, const UnfoldedSequence& useq,
                     double sat_l_max, int n_points, double step) {
    const auto [curve, sat] =
        spectral::saturation_scan(useq, sat_l_max, n_points, step);
    std::vector<std::string> comments = {
        "reproduce: stats --saturation --sat-lmax " + fmt(sat_l_max) +
            " --sat-points " + std::to_string(n_points) + " --step " + fmt(step),
        source_comment(useq)};
    if (sat) {
        comments.push_back("l_saturation=" + fmt(sat->l_saturation) +
                           " plateau_value=" + fmt(sat->plateau_value));
    } else {
        comments.push_back("l_saturation=none");
    }
    io::write_curve_csv(path, curve, comments);
}

// ---- figure pipelines ------------------------------------------------------

struct FigureRequest {
    std::string id;
    std::string out_dir = ".";
    std::string checkpoint_path;
    bool allow_long_run = false;
};

UnfoldedSequence figure_sequence(char panel, const FigureRequest& req) {
    GenerateSpec gen;
    switch (panel) {
    case 'a': gen.first_n = 100; break;
    case 'b': gen.first_n = 10000; break;
    case 'c': gen.first_n = 1000000; break;
    case 'd':
        if (req.checkpoint_path.empty() && !req.allow_long_run) {
            throw DomainError(
                "panel d needs the 10^6 primes after the 10^12th prime; "
                "supply --checkpoint <file> or pass --allow-long-run to "
                "count from scratch");
        }
        gen.after_index = 1000000000000LL;
        gen.count = 1000000;
        gen.checkpoint_path = req.checkpoint_path;
        break;
    default: throw DomainError("unknown figure panel");
    }
    return unfold::unfold(gen.generate(), UnfoldMethod::RIEMANN_R,
                          unfold_options());
}

double fitted_rho1(const UnfoldedSequence& useq) {
    const auto curve = spectral::number_variance(
        useq, spectral::standard_fit_grid(), g_defaults.window_step);
    return fitting::fit_rho1(curve).rho1;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void run_figure(const FigureRequest& req) {
    std::filesystem::create_directories(req.out_dir);
    const std::string& id = req.id;
    auto out = [&](const std::string& series) {
        return join_path(req.out_dir, "fig" + id + "_" + series + ".csv");
    };
    const Defaults& d = g_defaults;

    if (id == "6") {
        // Saturation scans for primes 1..10000 and 10001..20000.
        GenerateSpec first, second;
        first.first_n = 10000;
        second.after_index = 10000;
        second.count = 10000;
        const auto u1 = unfold::unfold(first.generate(), UnfoldMethod::RIEMANN_R,
                                       unfold_options());
        const auto u2 = unfold::unfold(second.generate(), UnfoldMethod::RIEMANN_R,
                                       unfold_options());
        emit_saturation(out("first_10000"), u1, u1.span() / 4.0, d.sat_points,
                        d.window_step);
        emit_saturation(out("next_10000"), u2, u2.span() / 4.0, d.sat_points,
                        d.window_step);
        return;
    }

    if (id.size() != 2 || id[0] < '1' || id[0] > '5' || id[1] < 'a' ||
        id[1] > 'd') {
        throw DomainError("unknown figure id '" + id +
                          "' (expected 1a-1d, 2a-2d, 3a-3d, 4a-4d, 5a-5d, 6)");
    }
    const char fig = id[0];
    const char panel = id[1];

    if (fig == '5') {
        // First 50 alternate primes, rescaled to unit mean spacing.
        GenerateSpec gen;
        gen.first_n = 100;
        gen.alternate = true;
        const auto useq = unfold::rescale_unit_mean(unfold::unfold(
            gen.generate(), UnfoldMethod::RIEMANN_R, unfold_options()));
        const double alt_l_max = 3.0;
        switch (panel) {
        case 'a':
            emit_nnsd(out("data"), useq, d.bin_width, d.s_max);
            write_pdf_csv(out("gse"), EnsembleKind::gse(), d.s_max, 0.01, {});
            break;
        case 'b':
            emit_count_curve(out("data"), useq, Statistic::SIGMA2, d.l_min,
                             alt_l_max, d.l_step, d.window_step);
            write_theory_csv(out("gse"), EnsembleKind::gse(), Statistic::SIGMA2,
                             d.l_min, alt_l_max, d.l_step, {});
            break;
        case 'c':
            emit_count_curve(out("data"), useq, Statistic::GAMMA1, d.l_min,
                             alt_l_max, d.l_step, d.window_step);
            write_theory_csv(out("gse"), EnsembleKind::gse(), Statistic::GAMMA1,
                             d.l_min, alt_l_max, d.l_step, {});
            break;
        case 'd':
            emit_count_curve(out("data"), useq, Statistic::GAMMA2, d.l_min,
                             alt_l_max, d.l_step, d.window_step);
            write_theory_csv(out("gse"), EnsembleKind::gse(), Statistic::GAMMA2,
                             d.l_min, alt_l_max, d.l_step, {});
            break;
        }
        return;
    }

    const auto useq = figure_sequence(panel, req);
    switch (fig) {
    case '1': {
        emit_nnsd(out("data"), useq, d.bin_width, d.s_max);
        write_pdf_csv(out("poisson"), EnsembleKind::poisson(), d.s_max, 0.01, {});
        write_pdf_csv(out("goe"), EnsembleKind::goe(), d.s_max, 0.01, {});
        const double rho1 = fitted_rho1(useq);
        write_pdf_csv(out("berry_robnik"), EnsembleKind::berry_robnik(rho1),
                      d.s_max, 0.01,
                      {"rho1 fitted to the number variance of the same sequence"});
        break;
    }
    case '2': {
        emit_count_curve(out("data"), useq, Statistic::SIGMA2, d.l_min, d.l_max,
                         d.l_step, d.window_step);
        for (auto kind : {EnsembleKind::poisson(), EnsembleKind::goe(),
                          EnsembleKind::gue()}) {
            write_theory_csv(out(to_string(kind.tag)), kind, Statistic::SIGMA2,
                             d.l_min, d.l_max, d.l_step, {});
        }
        const double rho1 = fitted_rho1(useq);
        write_theory_csv(out("berry_robnik"), EnsembleKind::berry_robnik(rho1),
                         Statistic::SIGMA2, d.l_min, d.l_max, d.l_step,
                         {"rho1 fitted to the data curve"});
        break;
    }
    case '3':
    case '4': {
        const auto stat = fig == '3' ? Statistic::GAMMA1 : Statistic::GAMMA2;
        emit_count_curve(out("data"), useq, stat, d.l_min, d.l_max, d.l_step,
                         d.window_step);
        for (auto kind : {EnsembleKind::poisson(), EnsembleKind::goe(),
                          EnsembleKind::gue()}) {
            write_theory_csv(out(to_string(kind.tag)), kind, stat, d.l_min,
                             d.l_max, d.l_step, {});
        }
        break;
    }
    }
}

// ---- table -----------------------------------------------------------------

struct TableRow {
    std::string label;
    bool is_first_n = true;
    std::uint64_t param = 0;
    std::optional<double> reference_rho1;
};

const std::vector<TableRow>& known_rows() {
    static const std::vector<TableRow> rows = {
        {"n=10^2", true, 100, -0.00181},
        {"n=10^3", true, 1000, 0.239504},
        {"n=10^4", true, 10000, 0.328879},
        {"n=10^5", true, 100000, 0.430437},
        {"n=10^6", true, 1000000, 0.489928},
        {"k=10^7", false, 10000000, 0.555921},
        {"k=10^8", false, 100000000, 0.585383},
        {"k=10^9", false, 1000000000, 0.61471},
        {"k=10^10", false, 10000000000ull, 0.633034},
        {"k=10^11", false, 100000000000ull, 0.652538},
        {"k=10^12", false, 1000000000000ull, 0.668721},
    };
    return rows;
}

std::vector<TableRow> parse_rows(const std::string& spec) {
    std::vector<TableRow> rows;
    std::size_t pos = 0;
    auto push_known = [&](bool first_n) {
        for (const auto& row : known_rows()) {
            if (row.is_first_n == first_n) rows.push_back(row);
        }
    };
    if (spec.empty()) throw DomainError("table: empty row specifier");
    while (pos < spec.size()) {
        auto comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string tok = spec.substr(pos, comma - pos);
        pos = comma + 1;
        if (tok.empty()) continue;
        if (tok == "left") { push_known(true); continue; }
        if (tok == "right") { push_known(false); continue; }
        if (tok == "all") { push_known(true); push_known(false); continue; }
        if (tok.size() < 3 || (tok[0] != 'n' && tok[0] != 'k') || tok[1] != '=') {
            throw DomainError("table: bad row token '" + tok +
                              "' (expected n=<count>, k=<index>, left, right, all)");
        }
        TableRow row;
        row.is_first_n = tok[0] == 'n';
        const double v = std::strtod(tok.c_str() + 2, nullptr);
        if (!(v >= 1.0)) throw DomainError("table: bad row value in '" + tok + "'");
        row.param = static_cast<std::uint64_t>(v);
        row.label = std::string(1, tok[0]) + "=" + std::to_string(row.param);
        for (const auto& k : known_rows()) {
            if (k.is_first_n == row.is_first_n && k.param == row.param) {
                row.label = k.label;
                row.reference_rho1 = k.reference_rho1;
            }
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw DomainError("table: no rows requested");
    return rows;
}

int run_table(const std::string& rows_spec, const std::string& out_path,
              const std::string& checkpoint_path, bool allow_long_run) {
    const auto rows = parse_rows(rows_spec);
    nlohmann::json result = nlohmann::json::array();
    bool skipped = false;
    for (const auto& row : rows) {
        const bool feasible =
            row.is_first_n ? row.param <= 1000000
                           : (row.param <= 100000000 || allow_long_run ||
                              !checkpoint_path.empty());
        if (!feasible) {
            std::cerr << "warning: skipping infeasible row " << row.label
                      << " (pass --allow-long-run or --checkpoint to enable)\n";
            skipped = true;
            continue;
        }
        GenerateSpec gen;
        if (row.is_first_n) {
            gen.first_n = row.param;
        } else {
            gen.after_index = static_cast<std::int64_t>(row.param);
            gen.count = 1000000;
            gen.checkpoint_path = checkpoint_path;
        }
        const auto useq = unfold::unfold(gen.generate(), UnfoldMethod::RIEMANN_R,
                                         unfold_options());
        const auto curve = spectral::number_variance(
            useq, spectral::standard_fit_grid(), g_defaults.window_step);
        const auto fit = fitting::fit_rho1(curve);
        nlohmann::json entry;
        entry["sequence_label"] = row.label;
        entry["rho1"] = fit.rho1;
        entry["rss"] = fit.rss;
        if (row.reference_rho1) entry["reference_rho1"] = *row.reference_rho1;
        result.push_back(entry);
        std::cout << row.label << ": rho1 = " << io::format_double(fit.rho1);
        if (row.reference_rho1) std::cout << "  (reference: " << *row.reference_rho1 << ")";
        std::cout << "\n";
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw IoError("cannot open '" + out_path + "' for writing");
        out << result.dump(2) << "\n";
    } else {
        std::cout << result.dump(2) << "\n";
    }
    return skipped ? 3 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"primespec: spectral statistics of prime number sequences"};
    app.set_version_flag("--version", std::string("primespec ") + kVersion);
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "Configuration file (key = value); also read from "
                   "$PRIMESPEC_CONFIG");
    unsigned threads_flag = 0;
    app.add_option("--threads", threads_flag, "Worker thread count");
    std::uint64_t seed_flag = 0;
    auto* seed_opt =
        app.add_option("--seed", seed_flag, "RNG seed for Monte Carlo commands");

    // primes ------------------------------------------------------------
    auto* primes_cmd = app.add_subcommand("primes", "Generate prime sequences");
    GenerateSpec primes_gen;
    add_generate_flags(primes_cmd, primes_gen);
    std::string primes_out = "primes.txt";
    std::string primes_format = "text";
    primes_cmd->add_option("--out", primes_out, "Output path");
    primes_cmd->add_option("--format", primes_format, "text or binary");
    bool primes_validate = false;
    primes_cmd->add_flag("--validate", primes_validate,
                         "Re-check primality of every value before writing");

    // unfold ------------------------------------------------------------
    auto* unfold_cmd =
        app.add_subcommand("unfold", "Unfold a prime sequence to unit density");
    GenerateSpec unfold_gen;
    add_generate_flags(unfold_cmd, unfold_gen);
    std::string unfold_in, unfold_in_format = "text";
    unfold_cmd->add_option("--in", unfold_in, "Prime sequence file to unfold");
    unfold_cmd->add_option("--in-format", unfold_in_format, "text or binary");
    std::string unfold_method = "r";
    unfold_cmd->add_option("--method", unfold_method,
                           "xlogx, li or r (Riemann R)");
    bool unfold_rescale = false;
    unfold_cmd->add_flag("--rescale", unfold_rescale,
                         "Rescale to mean spacing exactly 1");
    std::string unfold_out = "unfolded.txt";
    unfold_cmd->add_option("--out", unfold_out, "Output path");

    // stats ---------------------------------------------------------------
    auto* stats_cmd =
        app.add_subcommand("stats", "Fluctuation statistics of an unfolded file");
    std::string stats_in;
    stats_cmd->add_option("--in", stats_in, "Unfolded sequence file")->required();
    bool w_nnsd = false, w_numvar = false, w_skew = false, w_excess = false,
         w_sat = false;
    stats_cmd->add_flag("--nnsd", w_nnsd, "Nearest-neighbor spacing histogram");
    stats_cmd->add_flag("--numvar", w_numvar, "Number variance Sigma^2(L)");
    stats_cmd->add_flag("--skew", w_skew, "Skewness gamma_1(L)");
    stats_cmd->add_flag("--excess", w_excess, "Excess gamma_2(L)");
    stats_cmd->add_flag("--saturation", w_sat, "Large-L saturation scan");
    double st_bin_width = -1, st_smax = -1, st_lmin = -1, st_lmax = -1,
           st_lstep = -1, st_step = -1, st_sat_lmax = -1;
    int st_sat_points = -1;
    stats_cmd->add_option("--bin-width", st_bin_width, "NNSD bin width");
    stats_cmd->add_option("--smax", st_smax, "NNSD histogram upper edge");
    stats_cmd->add_option("--lmin", st_lmin, "Smallest window length L");
    stats_cmd->add_option("--lmax", st_lmax, "Largest window length L");
    stats_cmd->add_option("--lstep", st_lstep, "L grid spacing");
    stats_cmd->add_option("--step", st_step, "Window anchor step");
    stats_cmd->add_option("--sat-lmax", st_sat_lmax, "Saturation scan maximum L");
    stats_cmd->add_option("--sat-points", st_sat_points,
                          "Saturation scan grid points");
    std::string stats_out = "stats.csv";
    stats_cmd->add_option("--out", stats_out, "Output path");

    // curves --------------------------------------------------------------
    auto* curves_cmd =
        app.add_subcommand("curves", "Reference ensemble curves as CSV");
    std::string cv_kind = "poisson", cv_stat = "sigma2";
    double cv_rho1 = 0.0, cv_smax = -1, cv_sstep = 0.01, cv_lmin = -1,
           cv_lmax = -1, cv_lstep = -1;
    curves_cmd->add_option("--kind", cv_kind, "poisson, goe, gue, gse or br");
    curves_cmd->add_option("--rho1", cv_rho1, "Berry-Robnik Poisson fraction");
    curves_cmd->add_option("--statistic", cv_stat,
                           "nnsd, sigma2, gamma1 or gamma2");
    curves_cmd->add_option("--smax", cv_smax, "Spacing grid upper edge");
    curves_cmd->add_option("--sstep", cv_sstep, "Spacing grid step");
    curves_cmd->add_option("--lmin", cv_lmin, "Smallest L");
    curves_cmd->add_option("--lmax", cv_lmax, "Largest L");
    curves_cmd->add_option("--lstep", cv_lstep, "L grid spacing");
    std::string curves_out = "curve.csv";
    curves_cmd->add_option("--out", curves_out, "Output path");

    // fit -----------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand(
        "fit", "Fit the Berry-Robnik rho1 to a number variance CSV");
    std::string fit_curve_path;
    fit_cmd->add_option("--curve", fit_curve_path, "Curve CSV (L,value,stderr)")
        ->required();
    double fit_lmin = 0.0, fit_lmax = 5.0;
    bool fit_weighted = false;
    fit_cmd->add_option("--lmin", fit_lmin, "Fit range lower edge (exclusive)");
    fit_cmd->add_option("--lmax", fit_lmax, "Fit range upper edge (inclusive)");
    fit_cmd->add_flag("--weighted", fit_weighted, "Weight residuals by 1/stderr");
    std::string fit_out;
    fit_cmd->add_option("--out", fit_out, "JSON output path (default stdout)");

    // figure ---------------------------------------------------------------
    auto* figure_cmd =
        app.add_subcommand("figure", "Reproduce one figure panel as CSV files");
    FigureRequest fig_req;
    figure_cmd
        ->add_option("--id", fig_req.id, "1a-1d, 2a-2d, 3a-3d, 4a-4d, 5a-5d, 6")
        ->required();
    figure_cmd->add_option("--out-dir", fig_req.out_dir, "Output directory");
    figure_cmd->add_option("--checkpoint", fig_req.checkpoint_path,
                           "pi(x) checkpoint file for the k=10^12 panels");
    figure_cmd->add_flag("--allow-long-run", fig_req.allow_long_run,
                         "Permit counting to the 10^12th prime from scratch");

    // table ----------------------------------------------------------------
    auto* table_cmd = app.add_subcommand(
        "table", "Berry-Robnik rho1 fits for prime subsequences (JSON)");
    std::string table_rows = "left";
    table_cmd->add_option("--rows", table_rows,
                          "Comma list of n=<count>/k=<index>, or left/right/all");
    std::string table_out, table_checkpoint;
    table_cmd->add_option("--out", table_out, "JSON output path (default stdout)");
    table_cmd->add_option("--checkpoint", table_checkpoint,
                          "pi(x) checkpoint file for large k rows");
    bool table_allow_long = false;
    table_cmd->add_flag("--allow-long-run", table_allow_long,
                        "Permit rows beyond k=10^8 without a checkpoint");

    // mc-tabulate ------------------------------------------------------------
    auto* mc_cmd = app.add_subcommand(
        "mc-tabulate", "Regenerate the gamma reference table by Monte Carlo");
    rmt_mc::TabulateOptions mc_opts;
    std::string mc_out = "gamma_reference.csv";
    mc_cmd->add_option("--out", mc_out, "Output CSV path");
    mc_cmd->add_option("--dim", mc_opts.dim, "Matrix dimension");
    mc_cmd->add_option("--samples", mc_opts.n_samples, "Draws per ensemble");

    CLI11_PARSE(app, argc, argv);

    try {
        apply_config(config_path);
        if (threads_flag > 0) g_defaults.threads = threads_flag;
        if (seed_opt->count() > 0) g_defaults.seed = seed_flag;

        if (app.got_subcommand(primes_cmd)) {
            const auto seq = primes_gen.generate();
            if (primes_validate) sieve::validate(seq);
            if (primes_format == "binary") {
                io::write_prime_binary(primes_out, seq);
            } else if (primes_format == "text") {
                io::write_prime_text(primes_out, seq,
                                     {"reproduce: primes " + primes_gen.describe(),
                                      "count=" + std::to_string(seq.size())});
            } else {
                throw DomainError("--format must be text or binary");
            }
        } else if (app.got_subcommand(unfold_cmd)) {
            PrimeSequence seq;
            if (!unfold_in.empty()) {
                if (unfold_gen.active()) {
                    throw DomainError(
                        "unfold: use --in or generation flags, not both");
                }
                seq = unfold_in_format == "binary"
                          ? io::read_prime_binary(unfold_in)
                          : io::read_prime_text(unfold_in);
                if (unfold_gen.alternate) seq = sieve::alternate(seq);
            } else {
                seq = unfold_gen.generate();
            }
            const auto method = unfold_method_from_string(unfold_method);
            if (!method) {
                throw DomainError("unknown unfolding method '" + unfold_method +
                                  "' (use xlogx, li or r)");
            }
            auto useq = unfold::unfold(seq, *method, unfold_options());
            if (unfold_rescale) useq = unfold::rescale_unit_mean(useq);
            io::write_unfolded(unfold_out, useq);
        } else if (app.got_subcommand(stats_cmd)) {
            const int n_modes = w_nnsd + w_numvar + w_skew + w_excess + w_sat;
            if (n_modes != 1) {
                throw DomainError("stats: choose exactly one of --nnsd, --numvar, "
                                  "--skew, --excess, --saturation");
            }
            const auto useq = io::read_unfolded(stats_in);
            const Defaults& d = g_defaults;
            const double bin_width = st_bin_width > 0 ? st_bin_width : d.bin_width;
            const double s_max = st_smax > 0 ? st_smax : d.s_max;
            const double l_min = st_lmin > 0 ? st_lmin : d.l_min;
            const double l_max = st_lmax > 0 ? st_lmax : d.l_max;
            const double l_step = st_lstep > 0 ? st_lstep : d.l_step;
            const double step = st_step > 0 ? st_step : d.window_step;
            if (w_nnsd) {
                emit_nnsd(stats_out, useq, bin_width, s_max);
            } else if (w_sat) {
                const double sat_l_max =
                    st_sat_lmax > 0 ? st_sat_lmax : useq.span() / 4.0;
                const int pts = st_sat_points > 0 ? st_sat_points : d.sat_points;
                emit_saturation(stats_out, useq, sat_l_max, pts, step);
            } else {
                const auto stat = w_numvar ? Statistic::SIGMA2
                                  : w_skew ? Statistic::GAMMA1
                                           : Statistic::GAMMA2;
                emit_count_curve(stats_out, useq, stat, l_min, l_max, l_step,
                                 step);
            }
        } else if (app.got_subcommand(curves_cmd)) {
            const auto tag = ensemble_from_string(cv_kind);
            if (!tag) throw DomainError("unknown ensemble '" + cv_kind + "'");
            EnsembleKind kind{*tag, cv_rho1};
            const Defaults& d = g_defaults;
            if (cv_stat == "nnsd") {
                write_pdf_csv(curves_out, kind, cv_smax > 0 ? cv_smax : d.s_max,
                              cv_sstep, {});
            } else {
                Statistic stat;
                if (cv_stat == "sigma2") stat = Statistic::SIGMA2;
                else if (cv_stat == "gamma1") stat = Statistic::GAMMA1;
                else if (cv_stat == "gamma2") stat = Statistic::GAMMA2;
                else throw DomainError("unknown statistic '" + cv_stat + "'");
                write_theory_csv(curves_out, kind, stat,
                                 cv_lmin > 0 ? cv_lmin : d.l_min,
                                 cv_lmax > 0 ? cv_lmax : d.l_max,
                                 cv_lstep > 0 ? cv_lstep : d.l_step, {});
            }
        } else if (app.got_subcommand(fit_cmd)) {
            const auto curve = io::read_curve_csv(fit_curve_path);
            const auto fit =
                fitting::fit_rho1(curve, fit_lmin, fit_lmax, fit_weighted);
            const std::string json = io::fit_to_json(fit);
            if (fit_out.empty()) {
                std::cout << json << "\n";
            } else {
                std::ofstream out(fit_out);
                if (!out) throw IoError("cannot open '" + fit_out + "'");
                out << json << "\n";
            }
        } else if (app.got_subcommand(figure_cmd)) {
            run_figure(fig_req);
        } else if (app.got_subcommand(table_cmd)) {
            return run_table(table_rows, table_out, table_checkpoint,
                             table_allow_long);
        } else if (app.got_subcommand(mc_cmd)) {
            mc_opts.seed = g_defaults.seed;
            mc_opts.threads = g_defaults.threads;
            rmt_mc::tabulate_gamma_reference(mc_out, mc_opts);
        }
    } catch (const NumericError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const IntegrityError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
