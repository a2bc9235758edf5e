#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "qmem/catalog.hpp"
#include "qmem/io.hpp"

using namespace qmem;

namespace {

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("qmem_io_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

ExperimentRecord sample_record(uint64_t i) {
    ExperimentRecord r;
    r.experiment_id = "coherence";
    r.code = "toric2d";
    r.L = 8;
    r.beta = 1.0 / 3.0;
    r.seed = 0xdeadbeefcafe + i;
    r.sample = i;
    r.tau = 1e-300 * double(i + 1) + 0.1234567890123456789;
    r.censored = (i % 2) == 0;
    r.failure_class = uint32_t(i % 5);
    r.n_events = 1ull << (i % 50);
    r.n_anyons_at_failure = uint32_t(3 * i);
    r.mean_sep = 2.5e17 + double(i);
    r.max_sep = 1.0 / 7.0;
    return r;
}

}  // namespace

TEST_CASE("records csv: header-only for an empty set, LF endings") {
    auto path = tmp_path("empty.csv");
    write_records_csv(path, {});
    auto bytes = slurp(path);
    CHECK(bytes == std::string(kRecordHeader) + "\n");
    CHECK(bytes.find('\r') == std::string::npos);
    CHECK(read_records_csv(path).empty());
}

TEST_CASE("records csv round-trip is exact") {
    std::vector<ExperimentRecord> recs;
    for (uint64_t i = 0; i < 40; ++i) recs.push_back(sample_record(i));
    auto path = tmp_path("roundtrip.csv");
    write_records_csv(path, recs);
    auto back = read_records_csv(path);
    REQUIRE(back.size() == recs.size());
    for (size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].experiment_id == recs[i].experiment_id);
        CHECK(back[i].L == recs[i].L);
        CHECK(back[i].beta == recs[i].beta);  // 17 significant digits: bit-exact
        CHECK(back[i].seed == recs[i].seed);
        CHECK(back[i].tau == recs[i].tau);
        CHECK(back[i].censored == recs[i].censored);
        CHECK(back[i].n_events == recs[i].n_events);
        CHECK(back[i].mean_sep == recs[i].mean_sep);
        CHECK(back[i].max_sep == recs[i].max_sep);
    }
    // rewriting produces identical bytes
    auto path2 = tmp_path("roundtrip2.csv");
    write_records_csv(path2, back);
    CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("concurrent writers on distinct paths do not interleave") {
    std::vector<ExperimentRecord> a, b;
    for (uint64_t i = 0; i < 2000; ++i) {
        a.push_back(sample_record(i));
        b.push_back(sample_record(i + 7));
    }
    auto pa = tmp_path("conc_a.csv"), pb = tmp_path("conc_b.csv");
    std::thread ta([&] { write_records_csv(pa, a); });
    std::thread tb([&] { write_records_csv(pb, b); });
    ta.join();
    tb.join();
    CHECK(read_records_csv(pa).size() == a.size());
    CHECK(read_records_csv(pb).size() == b.size());
}

TEST_CASE("key-value config parsing") {
    auto path = tmp_path("config.txt");
    {
        std::ofstream out(path);
        out << "# coherence settings\n";
        out << "beta = 4.5   # override\n";
        out << "sizes = 8,16, 32\n";
        out << "p = 0.01:0.03:0.01\n";
        out << "samples=250\n";
        out << "plot-data = true\n";
    }
    auto cfg = KeyValueConfig::from_file(path);
    CHECK(cfg.get_double("beta", 0) == 4.5);
    CHECK(cfg.get_ints("sizes", {}) == std::vector<int>{8, 16, 32});
    auto ps = cfg.get_doubles("p", {});
    REQUIRE(ps.size() == 3);
    CHECK_THAT(ps[1], Catch::Matchers::WithinAbs(0.02, 1e-12));
    CHECK(cfg.get_u64("samples", 0) == 250);
    CHECK(cfg.get_bool("plot-data", false));
    CHECK(cfg.get_string("missing", "fallback") == "fallback");

    CHECK_THROWS_AS(cfg.require_known({"beta", "sizes", "p", "samples"}), ConfigError);
    CHECK_NOTHROW(cfg.require_known({"beta", "sizes", "p", "samples", "plot-data"}));
    CHECK_THROWS_AS(cfg.get_double("sizes", 0), ConfigError);
}

TEST_CASE("config hash is order-insensitive and content-sensitive") {
    KeyValueConfig a, b, c;
    a.set("x", "1");
    a.set("y", "2");
    b.set("y", "2");
    b.set("x", "1");
    c.set("x", "1");
    c.set("y", "3");
    CHECK(a.hash_hex() == b.hash_hex());
    CHECK(a.hash_hex() != c.hash_hex());
}

TEST_CASE("manifest round-trip") {
    RunManifest m;
    m.command = "coherence";
    m.config_hash = "abc123";
    m.master_seed = 42;
    m.start_time = iso8601_now();
    m.end_time = iso8601_now();
    m.host = host_descriptor();
    m.params["beta"] = "4";
    m.params["L"] = "16";
    auto path = tmp_path("manifest.json");
    m.write(path);
    auto back = RunManifest::load(path);
    CHECK(back.command == m.command);
    CHECK(back.master_seed == 42);
    CHECK(back.params == m.params);
    CHECK(back.config_hash == m.config_hash);
}

TEST_CASE("cubic code matches the checked-in reference fixture") {
    auto code = build_cubic_code(3);
    auto j = dump_code_json(code);
    std::ifstream in(std::string(QMEM_SOURCE_DIR) + "/tests/fixtures/cubic_code_L3.json");
    REQUIRE(in);
    nlohmann::json ref;
    in >> ref;
    CHECK(j == ref);
}

TEST_CASE("identical seeds reproduce identical CSV bytes") {
    auto code = build_toric_2d(6);
    auto run_once = [&](const std::string& path) {
        SuiteConfig sc;
        sc.beta = 2.5;
        sc.samples = 50;
        sc.seed = 11;
        auto run = run_coherence_suite(code, sc, "coherence");
        write_records_csv(path, run.records);
    };
    auto p1 = tmp_path("det1.csv"), p2 = tmp_path("det2.csv");
    run_once(p1);
    run_once(p2);
    CHECK(slurp(p1) == slurp(p2));
}
