#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "hawkes/csv.hpp"
#include "hawkes/errors.hpp"

using namespace hawkes;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hawkes_csv_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& content) const {
        std::ofstream(path / name) << content;
        return path / name;
    }
};

}  // namespace

TEST_CASE("format round-trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678901234567, -2.5}) CHECK(std::stod(csv::format(v)) == v);
}

TEST_CASE("writer builds rows") {
    csv::Writer w("a,b,c");
    w.field(1.5).field(std::size_t{2}).field(std::string_view("x"));
    w.end_row();
    w.field(-3L).field(0.0).field(std::string_view("y"));
    w.end_row();
    CHECK(w.str() == "a,b,c\n1.5,2,x\n-3,0,y\n");
}

TEST_CASE("read validates header and shape") {
    TempDir dir;
    const auto ok = dir.write("ok.csv", "a,b\n1,2\n3,4\n");
    const auto t = csv::read(ok, "a,b");
    CHECK(t.rows.size() == 2);
    CHECK(t.lines == std::vector<std::size_t>{2, 3});
    CHECK_THROWS_AS(csv::read(ok, "a,c"), InputError);
    CHECK_THROWS_AS(csv::read(dir.write("ragged.csv", "a,b\n1\n"), "a,b"), InputError);
    CHECK_THROWS_AS(csv::read(dir.path / "missing.csv", "a,b"), IoError);
    CHECK_THROWS_AS(csv::parse_double("abc", 4), InputError);
    CHECK_THROWS_AS(csv::parse_index("-1", 4), InputError);
    CHECK(csv::parse_long("-7", 1) == -7);
}

TEST_CASE("events table round trip and validation") {
    TempDir dir;
    const auto path = dir.write("events.csv", "replication,time\n0,0.5\n0,1.5\n1,0.25\n");
    const auto ev = csv::read_events(path, 2, 2.0);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].times == std::vector<double>{0.5, 1.5});
    CHECK(ev[1].times == std::vector<double>{0.25});
    CHECK(ev[1].horizon == 2.0);
    CHECK_THROWS_AS(csv::read_events(path, 1, 2.0), InputError);
    CHECK_THROWS_AS(csv::read_events(path, 2, 1.0), InputError);
    const auto bad = dir.write("bad.csv", "replication,time\n0,1.5\n0,0.5\n");
    CHECK_THROWS_AS(csv::read_events(bad, 1, 2.0), InputError);
}

TEST_CASE("write_file reports unwritable paths") {
    CHECK_THROWS_AS(csv::write_file("/nonexistent-dir/x.csv", "a"), IoError);
}
