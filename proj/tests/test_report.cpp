#include "common.hpp"

#include "ffcm/report.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <string>

using namespace ffcm;
using namespace ffcm::test;

namespace {

Json quadric_config() {
    Json c;
    c["field"]["p"] = 3;
    c["field"]["k"] = 1;
    c["curve"] = "p1";
    c["bundle"] = Json::array({1});
    c["equation"]["kind"] = "fermat";
    c["equation"]["d"] = 2;
    c["n"] = 2;
    return c;
}

} // namespace

TEST_SUITE_BEGIN("report");

TEST_CASE("emission policy: numbers, big integers, rationals, reals") {
    CHECK(json_int(BigInt(729)).is_number());
    CHECK(json_int(BigInt(729)).get<long long>() == 729);
    CHECK(json_int(BigInt(-5)).get<long long>() == -5);
    Json big = json_int(big_pow(BigInt(10), 25));
    CHECK(big.is_string());
    CHECK(big.get<std::string>() == "10000000000000000000000000");
    CHECK(json_rat(BigRat(BigInt(11), BigInt(9))) == "11/9");
    CHECK(json_rat(BigRat(BigInt(4))) == "4");
    CHECK(json_real(0.1111111111111111).substr(0, 4) == "0.11");
}

TEST_CASE("count reports carry rows per extension plus a slope block") {
    Json cfg = quadric_config();
    cfg["extensions"] = 2;
    Json rep = run_experiment(cfg, "count", quiet_ctx());
    CHECK(rep["subcommand"] == "count");
    CHECK(rep["params"]["q"] == 3);
    CHECK(rep["params"]["d"] == 2);
    REQUIRE(rep["rows"].size() == 2);
    CHECK(rep["rows"][0]["count"] == 33);
    CHECK(rep["rows"][1]["count"] == 801);
    CHECK(rep["rows"][0]["ratio"] == "11/9");
    CHECK(rep["slope"]["dim_estimate"] == 3);
    CHECK(rep["slope"]["consistent"] == true);
    // No timing key unless verbose is requested.
    CHECK_FALSE(rep.contains("wall_ms"));
}

TEST_CASE("fourier reports cross-check the two counting routes") {
    Json rep = run_experiment(quadric_config(), "fourier", quiet_ctx());
    CHECK(rep["count_brute"] == 33);
    CHECK(rep["count_fourier"] == 33);
    CHECK(rep["match"] == true);
    CHECK(rep["dim_w"] == 3);
    CHECK(rep["dual_size"] == 27);
}

TEST_CASE("arcs reports expose the partition and the zero-functional term") {
    Json rep = run_experiment(quadric_config(), "arcs", quiet_ctx());
    CHECK(rep["threshold"] == 2);
    CHECK(rep["norm_exponent"] == 6);
    CHECK(rep["minor_int"] == 0);
    CHECK(rep["major_int"] == 891); // 27 * 33
    CHECK(rep["alpha0_ok"] == true);
    CHECK(rep["alpha0_term"] == 729); // q^{dim S * (n+1)} = 3^6
    uint64_t total = 0;
    for (const auto& row : rep["rows"]) total += row["functionals"].get<uint64_t>();
    CHECK(total == 27);

    // Degrees on a nodal curve come from smooth-locus divisors only; the
    // report says so.  Irreducible curves carry no such caveat.
    CHECK(!rep.contains("smooth_locus_degrees"));
    Json ncfg = quadric_config();
    ncfg["curve"] = "nodal";
    ncfg["bundle"] = Json::array({1, 1});
    Json nrep = run_experiment(ncfg, "arcs", quiet_ctx());
    CHECK(nrep["smooth_locus_degrees"] == true);
}

TEST_CASE("singdim reports are deterministic under sampling") {
    Json cfg = quadric_config();
    cfg["samples"] = 5;
    cfg["seed"] = 42;
    Json a = run_experiment(cfg, "singdim", quiet_ctx(1));
    Json b = run_experiment(cfg, "singdim", quiet_ctx(3));
    CHECK(a.dump(2) == b.dump(2));
    CHECK(a["summary"]["sampled"] == true);
    CHECK(a["summary"]["profiles"] <= 5);
    CHECK(a["summary"]["all_katz_hold"] == true);
    CHECK(a["summary"]["radical_checked"] == a["summary"]["profiles"]);
    CHECK(a["summary"]["radical_match_all"] == true);

    // Full sweep without sampling: every profile appears once.
    Json full = run_experiment(quadric_config(), "singdim", quiet_ctx());
    CHECK(full["summary"]["profiles"] == 27);
    CHECK(full["summary"]["radical_checked"] == 27);
    for (const auto& row : full["rows"])
        CHECK(row["dim"] == row["radical_dim"]);
}

TEST_CASE("modulidim reports check the dimension identity") {
    Json cfg;
    cfg["moduli"]["n"] = 14;
    cfg["moduli"]["d"] = 5;
    cfg["moduli"]["e"] = 351;
    cfg["moduli"]["g"] = 1;
    Json rep = run_experiment(cfg, "modulidim", quiet_ctx());
    CHECK(rep["moduli_dim"] == 3510);
    CHECK(rep["identity_ok"] == true);
    CHECK(rep["difference_b0"] == 0);
    CHECK(rep["expected_difference"] == 0); // 1 - g
    CHECK(rep["difference_ok"] == true);

    cfg["mor"]["minus_ky_dot_c"] = 5;
    cfg["mor"]["g_c"] = 0;
    cfg["mor"]["dim_y"] = 2;
    Json withmor = run_experiment(cfg, "modulidim", quiet_ctx());
    CHECK(withmor["mor_lower_bound"] == 7);
}

TEST_CASE("gate reports list one row per hypothesis") {
    Json cfg;
    cfg["gate"]["d"] = 5;
    cfg["gate"]["n"] = 14;
    cfg["gate"]["e"] = 351;
    cfg["gate"]["g"] = 1;
    cfg["gate"]["p"] = 1759;
    Json rep = run_experiment(cfg, "gate", quiet_ctx());
    CHECK(rep["overall"] == true);
    REQUIRE(rep["rows"].size() == 4);
    for (const auto& row : rep["rows"]) CHECK(row["pass"] == true);
}

TEST_CASE("witness reports pick the minimal characteristic when p is absent") {
    Json cfg;
    cfg["witness"]["d"] = 5;
    cfg["witness"]["e"] = 1;
    cfg["witness"]["g_c"] = 0;
    Json rep = run_experiment(cfg, "witness", quiet_ctx());
    CHECK(rep["p"] == 1759);
    CHECK(rep["p_given"] == false);
    CHECK(rep["chain"]["m"] == 501);
    CHECK(rep["chain"]["margin"] == 868829);
    CHECK(rep["margin_positive"] == true);
    CHECK(rep["verified"] == true);
    CHECK(rep["failures"].empty());
}

TEST_CASE("grid reports compare the two routes across the whole lattice") {
    Json cfg;
    cfg["grid"]["q"] = Json::array({2});
    cfg["grid"]["d"] = Json::array({1, 2});
    cfg["grid"]["n"] = Json::array({1});
    cfg["grid"]["e"] = Json::array({1});
    cfg["grid"]["b"] = Json::array({0, 1});
    cfg["grid"]["curves"] = Json::array({"p1", "nodal"});
    Json rep = run_experiment(cfg, "grid", quiet_ctx());
    CHECK(rep["summary"]["configs"] == 8);
    CHECK(rep["summary"]["all_equal"] == true);
    for (const auto& row : rep["rows"]) CHECK(row["equal"] == true);
    // Byte determinism across worker counts.
    CHECK(run_experiment(cfg, "grid", quiet_ctx(1)).dump() ==
          run_experiment(cfg, "grid", quiet_ctx(8)).dump());
}

TEST_CASE("explicit curve specs match the nodal preset") {
    Json preset = quadric_config();
    preset["curve"] = "nodal";
    preset["bundle"] = Json::array({1, 1});
    Json spelled = preset;
    spelled["curve"] = Json::object();
    spelled["curve"]["components"] = 2;
    Json node;
    node["comp_a"] = 0;
    node["pa"] = 1;
    node["comp_b"] = 1;
    node["pb"] = 1;
    spelled["curve"]["nodes"] = Json::array({node});
    Json a = run_experiment(preset, "fourier", quiet_ctx());
    Json b = run_experiment(spelled, "fourier", quiet_ctx());
    CHECK(a["count_brute"] == b["count_brute"]);
    CHECK(a["params"]["genus"] == 0);
}

TEST_CASE("json emission round-trips and csv tables are well formed") {
    Json rep = run_experiment(quadric_config(), "fourier", quiet_ctx());
    std::string text = emit_report(rep, "json");
    Json back = Json::parse(text);
    CHECK(back.dump() == rep.dump());

    // Single-row csv of the top-level scalars.
    std::string csv = emit_report(rep, "csv");
    CHECK(csv.find("count_brute") != std::string::npos);
    CHECK(csv.find("33") != std::string::npos);

    // Row-table csv: one line per row plus the header.
    Json cfg = quadric_config();
    cfg["extensions"] = 2;
    Json counts = run_experiment(cfg, "count", quiet_ctx());
    std::string table = emit_report(counts, "csv");
    CHECK(table.find("k,count") == 0);
    CHECK(std::count(table.begin(), table.end(), '\n') == 3);

    // Cells containing separators are quoted; embedded quotes doubled.
    Json art;
    art["rows"] = Json::array();
    Json r1;
    r1["a"] = "x,y";
    r1["b"] = "say \"hi\"";
    art["rows"].push_back(r1);
    std::string quoted = emit_report(art, "csv");
    CHECK(quoted.find("\"x,y\"") != std::string::npos);
    CHECK(quoted.find("\"say \"\"hi\"\"\"") != std::string::npos);

    // An empty row table emits an empty document.
    Json empty;
    empty["rows"] = Json::array();
    CHECK(emit_report(empty, "csv").empty());

    CHECK(error_name([&] { emit_report(rep, "yaml"); }) == "BadFormat");
}

TEST_CASE("emission enforces the brute/fourier identity") {
    Json rep;
    rep["subcommand"] = "fourier";
    rep["count_brute"] = 4;
    rep["count_fourier"] = 5;
    CHECK(error_name([&] { emit_report(rep, "json"); }) == "FourierMismatch");
    CHECK(error_exit_code([&] { emit_report(rep, "json"); }) == 4);
}

TEST_CASE("config validation reports the offending path") {
    Json cfg = quadric_config();
    cfg.erase("bundle");
    CHECK(error_name([&] { run_experiment(cfg, "count", quiet_ctx()); }) == "BadConfig");
    CHECK(error_exit_code([&] { run_experiment(cfg, "count", quiet_ctx()); }) == 2);

    Json badcurve = quadric_config();
    badcurve["curve"] = "elliptic";
    CHECK(error_name([&] { run_experiment(badcurve, "count", quiet_ctx()); }) == "BadConfig");

    Json badjets = quadric_config();
    badjets["constraint"] = Json::array();
    Json cpt;
    cpt["comp"] = 0;
    cpt["at"] = 0;
    badjets["constraint"].push_back(cpt);
    badjets["jets"] = Json::array({Json::array()}); // one variable instead of three
    CHECK(error_name([&] { run_experiment(badjets, "fourier", quiet_ctx()); }) == "BadConfig");

    CHECK(error_name([&] { run_experiment(quadric_config(), "tabulate", quiet_ctx()); }) ==
          "BadSubcommand");

    // Budget failures surface with their own exit class.
    RunCtx tiny;
    tiny.workers = 1;
    tiny.budget = 5;
    CHECK(error_exit_code([&] { run_experiment(quadric_config(), "count", tiny); }) == 3);
}

TEST_CASE("reports are byte-stable for a fixed config") {
    Json cfg = quadric_config();
    cfg["extensions"] = 2;
    std::string a = run_experiment(cfg, "count", quiet_ctx(1)).dump(2);
    std::string b = run_experiment(cfg, "count", quiet_ctx(4)).dump(2);
    CHECK(a == b);
}

TEST_SUITE_END();
