#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(KFSM_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

nlohmann::json run_json(const std::string& args) {
    RunResult r = run(args);
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out);
}

} // namespace

TEST_CASE("generate emits the worked cluster") {
    auto j = run_json("generate --k 2 --omega 2/5 --nu 3/5,3/5");
    CHECK(j["orbits"] == nlohmann::json::array({"(00123)", "(01223)"}));
    CHECK(j["weights"] == nlohmann::json::array({"1/2", "1/2"}));
    CHECK(j["rotation"] == "2/5");
    CHECK(j["period"] == 5);
}

TEST_CASE("byte-identical output for identical flags") {
    auto a = run("generate --k 2 --omega 2/5 --nu 4/5,2/5");
    auto b = run("generate --k 2 --omega 2/5 --nu 4/5,2/5");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("generate output piped to verify passes") {
    auto j = run_json("generate --k 2 --omega 2/5 --nu 3/5,3/5");
    std::string words;
    for (const auto& w : j["orbits"]) {
        if (!words.empty()) words += ",";
        words += w.get<std::string>();
    }
    auto v = run_json("verify --k 2 --words \"" + words + "\"");
    CHECK(v["kfsm"] == true);
    for (const auto& e : v["words"]) CHECK(e["in_omega"] == true);
}

TEST_CASE("verify reports the witness for a non-kfsm set") {
    auto v = run_json("verify --k 1 --words \"(0011)\"");
    CHECK(v["kfsm"] == false);
    CHECK(v["witness"]["j"] == 1);
    CHECK(v["witness"]["ell"] == "(1001)");
    CHECK(v["witness"]["r"] == "(0110)");
}

TEST_CASE("verify handles wide alphabets and order intervals") {
    // k = 6: alphabet 12, comma-separated symbols inside a word, ';' between words
    auto v = run_json("verify --k 6 --words \"(0,1,2,3,4,5,6,7,8,9,10,11)\"");
    CHECK(v["words"][0]["in_omega"] == true);
    CHECK(v["kfsm"] == true);

    auto oi = run_json("verify --k 1 --words \"(01001)\" --kappa0 \"(0)\" --kappa1 \"(1)\"");
    CHECK(oi["order_interval"][0]["in_order_interval"] == true);
}

TEST_CASE("count matches the pure lattice example") {
    auto c = run_json("count --k 2 --p 2 --q 5 --list");
    CHECK(c["cover"] == "4");
    CHECK(c["base"] == "2");
    CHECK(c["pure"].size() == 4);
}

TEST_CASE("measure and rotate run") {
    auto m = run_json("measure --k 2 --omega 2/5 --nu 3/5,3/5 --block 1 --resonance");
    CHECK(m["skewness"] == nlohmann::json::array({"1/2", "1/2"}));
    CHECK(m["cylinders"][0]["measure"] == "1/5");
    CHECK(m["resonant"] == true);
    CHECK(m["subresonant"] == false);

    auto r = run_json("rotate --map model --k 1 --c 1/4");
    CHECK(r["rotation"] == "1/2");
    auto ri = run_json("rotate --map model --interval");
    CHECK(ri["lower"]["exact"] == "0");
    CHECK(ri["upper"]["exact"] == "1");
}

TEST_CASE("diagram writes exact CSV") {
    auto d = run("diagram --map model --k 1 --max-den 2");
    CHECK(d.code == 0);
    CHECK(d.out == "p,q,params,l1,r1\n1,2,1/2,1/8,3/8\n");
}

TEST_CASE("diagram writes CSV and SVG files") {
    std::string csv = "/tmp/kfsm_test_diag.csv", svg = "/tmp/kfsm_test_diag.svg";
    auto d = run("diagram --map model --k 2 --max-den 3 --out " + csv + " --svg " + svg);
    CHECK(d.code == 0);
    std::ifstream fc(csv);
    std::string header;
    REQUIRE(std::getline(fc, header));
    CHECK(header == "p,q,params,l1,r1,l2,r2");
    std::ifstream fs(svg);
    std::string first;
    REQUIRE(std::getline(fs, first));
    CHECK(first.rfind("<svg", 0) == 0);
    std::remove(csv.c_str());
    std::remove(svg.c_str());
}

TEST_CASE("prefix generation accepts --horizon and --seed-point") {
    auto j = run_json("generate --k 2 --omega 5/8 --nu 3/8,3/8 --horizon 16 --seed-point 1/16");
    CHECK(j["mode"] == "prefix");
    CHECK(j["word"].get<std::string>().size() == 16);
    auto s = run_json("generate --sturmian --omega 13/21 --prefix 12");
    CHECK(s["word"].get<std::string>().size() == 12);
}

TEST_CASE("maps load from JSON breakpoint files") {
    std::string path = "/tmp/kfsm_test_map.json";
    {
        std::ofstream f(path);
        f << R"({"breakpoints": [["0","0"], ["2/5","6/5"], ["1","1"]]})";
    }
    auto ri = run_json("rotate --map " + path + " --interval");
    CHECK(ri["lower"]["exact"] == "0");
    CHECK(ri["upper"]["exact"] == "1/2");
    std::remove(path.c_str());
}

TEST_CASE("exit codes: usage 2, domain error 1") {
    CHECK(run("bogus-subcommand").code == 2);
    CHECK(run("generate --k 2 --omega 2/5 --nu 1/5,1/5").code == 1);  // not allowable
    CHECK(run("generate --k 2 --omega 5/2 --nu 1,1").code == 1);
}
