#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli_app.hpp"
#include "oracles.hpp"
#include "output.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Run r;
    r.code = rydsim::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("rydsim_test_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) v.push_back(line);
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> v;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) v.push_back(cell);
    return v;
}

bool is_number(const std::string& s, double& v) {
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return !s.empty() && end == s.c_str() + s.size();
}

// Comments and headers verbatim, numeric cells to a relative tolerance.
void compare_csv(const std::string& actual, const std::string& golden_name, double rel = 1e-9) {
    const std::string golden = slurp(fs::path(GOLDEN_DIR) / golden_name);
    REQUIRE_FALSE(golden.empty());
    const auto a = lines_of(actual);
    const auto g = lines_of(golden);
    REQUIRE(a.size() == g.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        INFO(golden_name << " line " << i + 1);
        if (g[i].rfind("#", 0) == 0 || i == 0 || g[i].find_first_of("0123456789") == std::string::npos) {
            CHECK(a[i] == g[i]);
            continue;
        }
        const auto ca = split(a[i]);
        const auto cg = split(g[i]);
        REQUIRE(ca.size() == cg.size());
        for (std::size_t k = 0; k < cg.size(); ++k) {
            double va = 0.0, vg = 0.0;
            if (is_number(cg[k], vg) && is_number(ca[k], va)) {
                if (std::isnan(vg))
                    CHECK(std::isnan(va));
                else
                    CHECK(std::abs(va - vg) <= rel * std::abs(vg) + 1e-12);
            } else {
                CHECK(ca[k] == cg[k]);
            }
        }
    }
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run({"narrowing", "--N", "5"}).code == rydsim::kExitOk);
    const auto unknown = run({"narrowing", "--bogus"});
    CHECK(unknown.code == rydsim::kExitInput);
    CHECK(unknown.err.find("Usage") != std::string::npos);
    CHECK(run({}).code == rydsim::kExitInput);
    CHECK(run({"no-such-command"}).code == rydsim::kExitInput);
    CHECK(run({"dipole", "--from", "50X1/2", "--to", "50P1/2"}).code == rydsim::kExitInput);
    CHECK(run({"dipole", "--species", "Xe", "--from", "50S1/2", "--to", "50P1/2"}).code == rydsim::kExitInput);
    CHECK(run({"--samples", "10", "beam"}).code == rydsim::kExitInput);
    CHECK(run({"--config", "/nonexistent/config.json", "narrowing"}).code == rydsim::kExitInput);
    const auto numeric = run({"lifetime", "--state", "3S1/2"});
    CHECK(numeric.code == rydsim::kExitNumerical);
    CHECK(numeric.err.find("numerical") != std::string::npos);
    CHECK(run({"--help"}).code == rydsim::kExitOk);
}

TEST_CASE("dipole subcommand") {
    const auto r = run({"dipole", "--species", "Na", "--from", "50S1/2", "--to", "50P1/2"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(oracle::within(j["radial_au"].get<double>(), 2690.0, 0.03));
    CHECK(oracle::within(j["frequency_GHz"].get<double>(), 27.7, 0.02));
    const auto lower = run({"dipole", "--from", "50s1/2", "--to", "50p1/2"});
    REQUIRE(lower.code == 0);
    CHECK(json::parse(lower.out)["radial_au"] == j["radial_au"]);
}

TEST_CASE("narrowing and gate subcommands") {
    const auto n = run({"narrowing", "--N", "5"});
    REQUIRE(n.code == 0);
    const auto last = split(lines_of(n.out).back());
    REQUIRE(last.size() == 3);
    CHECK(std::abs(std::stod(last[1]) - 2.5933) < 1e-4);
    CHECK(std::abs(std::stod(last[2]) - 2.69) < 0.01);

    const auto q = run({"qpg", "--preset", "paper-optimal"});
    REQUIRE(q.code == 0);
    const auto j = json::parse(q.out);
    const auto& t = j["truth_table"];
    REQUIRE(t.size() == 4);
    CHECK(t[3]["input"] == "11");
    CHECK(std::abs(std::abs(t[3]["phase_rad"].get<double>()) - 3.14159265358979) < 0.05);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(t[i]["phase_rad"].get<double>()) < 0.05);
}

TEST_CASE("sha256 digests") {
    CHECK(rydsim::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(rydsim::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("number formatting") {
    CHECK(rydsim::format_number(0.1) == "0.1");
    CHECK(rydsim::format_number(-2.5e-7) == "-2.5e-07");
    CHECK(rydsim::format_number(std::nan("")) == "nan");
    rydsim::CsvTable t;
    t.header = {"a_unit", "b"};
    t.add_row({1.5, std::string("x")});
    t.comments = {"note"};
    CHECK(t.str() == "# note\na_unit,b\n1.5,x\n");
}

TEST_CASE("manifest reproduces byte-identical payloads") {
    const auto d1 = scratch("m1");
    const auto d2 = scratch("m2");
    const std::vector<std::string> tail{"beam", "--kind", "two", "--points", "5"};
    std::vector<std::string> a{"--out", d1.string(), "--seed", "5", "--samples", "1000"};
    std::vector<std::string> b{"--out", d2.string(), "--seed", "5", "--samples", "1000"};
    a.insert(a.end(), tail.begin(), tail.end());
    b.insert(b.end(), tail.begin(), tail.end());
    REQUIRE(run(a).code == 0);
    REQUIRE(run(b).code == 0);
    const auto m1 = json::parse(slurp(d1 / "manifest.json"));
    const auto m2 = json::parse(slurp(d2 / "manifest.json"));
    CHECK(m1["subcommand"] == "beam");
    CHECK(m1["seed"] == 5);
    CHECK(m1["version"] == rydsim::kArtifactVersion);
    CHECK(m1.contains("timestamp"));
    CHECK(m1["parameters"] == m2["parameters"]);
    CHECK(m1["parameters"]["kind"] == "two");
    CHECK(m1["outputs"] == m2["outputs"]);
    for (const auto& o : m1["outputs"]) {
        const std::string name = o["file"];
        const std::string payload = slurp(d1 / name);
        CHECK(o["sha256"] == rydsim::sha256_hex(payload));
        CHECK(payload == slurp(d2 / name));
    }

    const auto d3 = scratch("m3");
    std::vector<std::string> c{"--out", d3.string(), "--seed", "6", "--samples", "1000"};
    c.insert(c.end(), tail.begin(), tail.end());
    REQUIRE(run(c).code == 0);
    CHECK(json::parse(slurp(d3 / "manifest.json"))["outputs"] != m1["outputs"]);
    fs::remove_all(d1);
    fs::remove_all(d2);
    fs::remove_all(d3);
}

TEST_CASE("config file supplies options") {
    const auto dir = scratch("cfg");
    fs::create_directories(dir);
    {
        std::ofstream(dir / "n.json") << R"({"N": 3})";
        std::ofstream(dir / "bad.json") << "{not json";
        std::ofstream(dir / "feas.json") << R"({"n_s": 50, "n_p": 50, "pulse_duration_s": 5e-9, "gate_time_s": 5e-8})";
        std::ofstream(dir / "feas_bad.json") << R"({"colour": 1})";
    }
    const auto via_file = run({"--config", (dir / "n.json").string(), "narrowing"});
    const auto direct = run({"narrowing", "--N", "3"});
    REQUIRE(via_file.code == 0);
    CHECK(via_file.out == direct.out);
    CHECK(run({"--config", (dir / "bad.json").string(), "narrowing"}).code == rydsim::kExitInput);

    const auto out = dir / "feas_out";
    const auto f = run({"--out", out.string(), "--config", (dir / "feas.json").string(), "feasibility"});
    REQUIRE(f.code == 0);
    const auto rep = json::parse(slurp(out / "feasibility.json"));
    CHECK(rep["all_pass"] == false);
    bool laser_failed = false;
    for (const auto& e : rep["entries"])
        if (e["name"] == "laser_power") laser_failed = e["verdict"] == "fail";
    CHECK(laser_failed);
    CHECK(slurp(out / "feasibility.txt").find("laser_power") != std::string::npos);
    CHECK(run({"--config", (dir / "feas_bad.json").string(), "feasibility"}).code == rydsim::kExitInput);

    const auto rec = run({"feasibility"});
    CHECK(rec.code == 0);
    CHECK(rec.out.find("overall: pass") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("sfi-sim emits one JSON line per event") {
    const auto r = run({"--seed", "4", "sfi-sim", "--counts", "0,1,2,5"});
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 4);
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const auto j = json::parse(ls[i]);
        CHECK(j["event_id"] == i);
        CHECK(j.contains("amplitude_mV"));
        CHECK(j.contains("inferred_count"));
    }
    CHECK(json::parse(ls[0])["amplitude_mV"] == 0.0);
}

TEST_CASE("JSON output of tables") {
    const auto r = run({"--format", "json", "spectrum", "--points", "3"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.contains("detuning_MHz"));
    CHECK(j["probability"].size() == 6);
}

TEST_CASE("golden spectra") {
    SUBCASE("spectrum") {
        compare_csv(run({"spectrum", "--kind", "two", "--points", "41", "--span-khz", "600"}).out, "spectrum_two.csv");
        compare_csv(run({"spectrum", "--kind", "one", "--points", "41", "--span-khz", "600"}).out, "spectrum_one.csv");
    }
    SUBCASE("multi-atom") {
        compare_csv(run({"multi-atom", "--N", "3", "--points", "41", "--span-khz", "600"}).out, "multi_atom_n3.csv");
    }
    SUBCASE("beam") {
        compare_csv(run({"--seed", "7", "--samples", "2000", "beam", "--kind", "one", "--points", "21", "--span-khz",
                         "600"})
                        .out,
                    "beam_one.csv");
        compare_csv(run({"--seed", "7", "--samples", "2000", "beam", "--kind", "two", "--points", "21", "--span-khz",
                         "600"})
                        .out,
                    "beam_two.csv");
        compare_csv(run({"--seed", "11", "beam", "--kind", "two", "--events", "--shots", "200", "--atoms", "2", "--N",
                         "2", "--points", "11", "--span-khz", "600"})
                        .out,
                    "beam_events_n2.csv");
    }
    SUBCASE("stark-map") {
        const auto args = std::vector<std::string>{"stark-map", "--n-min", "36",  "--n-max",  "38", "--l-max",
                                                   "3",         "--field-max", "5", "--points", "11"};
        compare_csv(run(args).out, "stark_map.csv");
        auto serial = args;
        serial.push_back("--serial");
        CHECK(run(serial).out == run(args).out);
    }
}
