#include <doctest.h>

#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <string>

#include "primespec/errors.hpp"
#include "primespec/io.hpp"
#include "primespec/sieve.hpp"
#include "primespec/unfold.hpp"

using namespace primespec;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("primespec_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

} // namespace

TEST_CASE("format_double carries 17 significant digits") {
    CHECK(io::format_double(1.0) == "1");
    const std::string pi = io::format_double(3.141592653589793);
    CHECK(pi == "3.1415926535897931");
    // Round trip exactness on awkward values.
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789}) {
        CHECK(std::stod(io::format_double(v)) == v);
        CHECK(std::stod(io::format_double_short(v)) == v);
    }
}

TEST_CASE("prime sequence text round trip") {
    TempDir tmp;
    auto seq = sieve::primes_after_index(4, 10);
    io::write_prime_text(tmp.file("p.txt"), seq);
    const auto back = io::read_prime_text(tmp.file("p.txt"));
    CHECK(back.start_index == seq.start_index);
    CHECK(back.values == seq.values);
}

TEST_CASE("prime sequence binary round trip with fixed layout") {
    TempDir tmp;
    PrimeSequence seq;
    seq.start_index = 258;
    seq.values = {1627, 1637, 1657};
    io::write_prime_binary(tmp.file("p.bin"), seq);

    // Verify the exact little-endian byte layout.
    std::ifstream in(tmp.file("p.bin"), std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() == 8 * 5);
    CHECK(bytes[0] == 2);   // 258 = 0x0102 little-endian
    CHECK(bytes[1] == 1);
    CHECK(bytes[8] == 3);   // count
    CHECK(bytes[16] == 0x5b); // 1627 = 0x065b
    CHECK(bytes[17] == 0x06);

    const auto back = io::read_prime_binary(tmp.file("p.bin"));
    CHECK(back.start_index == 258);
    CHECK(back.values == seq.values);
}

TEST_CASE("prime text parser reports line numbers") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("bad.txt"));
        out << "2\n3\nfive\n7\n";
    }
    try {
        io::read_prime_text(tmp.file("bad.txt"));
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(err.line() == 3);
        CHECK(std::string(err.what()).find("line 3") != std::string::npos);
    }
    {
        std::ofstream out(tmp.file("decreasing.txt"));
        out << "7\n5\n";
    }
    CHECK_THROWS_AS(io::read_prime_text(tmp.file("decreasing.txt")), ParseError);
}

TEST_CASE("unfolded sequence round trip preserves exact doubles and "
          "metadata") {
    TempDir tmp;
    const auto seq = sieve::first_n_primes(500);
    auto useq = unfold::unfold(seq, UnfoldMethod::LI);
    useq = unfold::rescale_unit_mean(useq);
    io::write_unfolded(tmp.file("u.txt"), useq);
    const auto back = io::read_unfolded(tmp.file("u.txt"));
    CHECK(back.method == UnfoldMethod::LI);
    CHECK(back.rescaled == true);
    CHECK(back.source_start_index == 1);
    REQUIRE(back.values.size() == useq.values.size());
    for (std::size_t i = 0; i < useq.values.size(); ++i) {
        CHECK(back.values[i] == useq.values[i]); // bitwise, via %.17g
    }
}

TEST_CASE("unfolded reader requires the method header") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("no_header.txt"));
        out << "1.0\n2.0\n";
    }
    CHECK_THROWS_AS(io::read_unfolded(tmp.file("no_header.txt")), ParseError);
}

TEST_CASE("curve CSV round trip") {
    TempDir tmp;
    StatisticCurve curve;
    curve.statistic = Statistic::GAMMA2;
    curve.window_step = 0.25;
    curve.n_windows_per_L = 123;
    curve.points = {{0.5, -0.25, 0.01}, {1.0, -0.125, 0.02}};
    io::write_curve_csv(tmp.file("c.csv"), curve, {"extra: note"});
    const auto back = io::read_curve_csv(tmp.file("c.csv"));
    CHECK(back.statistic == Statistic::GAMMA2);
    CHECK(back.window_step == 0.25);
    CHECK(back.n_windows_per_L == 123);
    REQUIRE(back.points.size() == 2);
    CHECK(back.points[1].value == -0.125);
    CHECK(back.points[1].stderr_ == 0.02);
}

TEST_CASE("curve CSV parser validates structure") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("bad1.csv"));
        out << "L,value\n1,2\n";
    }
    CHECK_THROWS_AS(io::read_curve_csv(tmp.file("bad1.csv")), ParseError);
    {
        std::ofstream out(tmp.file("bad2.csv"));
        out << "L,value,stderr\n1,x,0\n";
    }
    try {
        io::read_curve_csv(tmp.file("bad2.csv"));
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(err.line() == 2);
    }
}

TEST_CASE("histogram CSV layout") {
    TempDir tmp;
    SpacingHistogram hist;
    hist.bin_width = 0.5;
    hist.s_max = 1.0;
    hist.densities = {1.5, 0.5};
    hist.total_spacings = 4;
    io::write_histogram_csv(tmp.file("h.csv"), hist);
    std::ifstream in(tmp.file("h.csv"));
    std::string line;
    bool saw_header = false, saw_row = false;
    while (std::getline(in, line)) {
        if (line == "s_left,s_right,density") saw_header = true;
        if (line == "0,0.5,1.5") saw_row = true;
    }
    CHECK(saw_header);
    CHECK(saw_row);
}

TEST_CASE("checkpoint file parsing") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("cp.txt"));
        out << "# anchors\n1000000\t78498\n2000000\t148933\n";
    }
    const auto cps = io::read_checkpoints(tmp.file("cp.txt"));
    REQUIRE(cps.size() == 2);
    CHECK(cps[0].x == 1000000);
    CHECK(cps[0].pi == 78498);

    {
        std::ofstream out(tmp.file("cp_bad.txt"));
        out << "1000000\n";
    }
    CHECK_THROWS_AS(io::read_checkpoints(tmp.file("cp_bad.txt")), ParseError);
    {
        std::ofstream out(tmp.file("cp_empty.txt"));
        out << "# nothing\n";
    }
    CHECK_THROWS_AS(io::read_checkpoints(tmp.file("cp_empty.txt")), ParseError);
}

TEST_CASE("fit JSON carries the documented fields") {
    BRFit fit;
    fit.rho1 = 0.33;
    fit.rss = 0.05;
    fit.fit_l_min = 0.0;
    fit.fit_l_max = 5.0;
    fit.n_points = 50;
    fit.weighted = false;
    const std::string json = io::fit_to_json(fit);
    for (const char* key :
         {"\"rho1\"", "\"rss\"", "\"l_min\"", "\"l_max\"", "\"n_points\"",
          "\"weighted\""}) {
        CHECK(json.find(key) != std::string::npos);
    }
    CHECK(json.find("boundary_warning") == std::string::npos);
    fit.boundary_warning = true;
    CHECK(io::fit_to_json(fit).find("boundary_warning") != std::string::npos);
}

TEST_CASE("config parsing") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("ok.cfg"));
        out << "# comment\nbin_width = 0.2\nthreads=4\nseed = 99\n";
    }
    const auto config = io::read_config(tmp.file("ok.cfg"));
    CHECK(config.get_double("bin_width", 0.1) == 0.2);
    CHECK(config.get_u64("threads", 1) == 4);
    CHECK(config.get_u64("seed", 0) == 99);
    CHECK(config.get_double("s_max", 4.0) == 4.0); // fallback

    {
        std::ofstream out(tmp.file("bad.cfg"));
        out << "bin_widht = 0.2\n";
    }
    try {
        io::read_config(tmp.file("bad.cfg"));
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(std::string(err.what()).find("bin_widht") != std::string::npos);
    }
}
